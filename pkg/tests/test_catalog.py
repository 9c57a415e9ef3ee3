"""Planar strand spaces, their chain families, and the sampled validator."""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chainorder.catalog import (
    CatalogPoint,
    S1_WITNESSES,
    S2_WITNESSES,
    T_REPRESENTATIVES,
    arc_chain_family,
    arc_family,
    arc_space,
    catalog_spaces,
    component_of,
    s1_chain_family,
    s1_family,
    s1_space,
    s2_family,
    s2_space,
    s3_family,
    s3_space,
    s3_witness_pair,
    separation_data,
    t_family,
    t_space,
    validate_level,
)
from chainorder.chains import (
    GE_ONLY,
    LE_ONLY,
    chain_order_compare,
    equal_or_opposite,
    never_between_after,
)
from chainorder.foundations import IndexRange


def direction(family, x, y, depth=8):
    verdict = chain_order_compare(family, x, y, None, depth)
    assert verdict.kind == "stabilized", (x, y, verdict)
    return verdict.direction


def ranking(family, points, depth=8):
    """Total order realized by the family on the given points."""

    def cmp(a, b):
        if a == b:
            return 0
        return -1 if direction(family, a, b, depth) == "le" else 1

    return tuple(sorted(points, key=cmp_to_key(cmp)))


small_fractions = st.fractions(min_value=0, max_value=1, max_denominator=64)


class TestSpaces:
    def test_registry_names(self):
        assert set(catalog_spaces()) == {"arc", "s1", "s2", "s3", "t"}

    def test_components_per_space(self):
        assert arc_space().components() == ("arc",)
        assert s1_space().components() == ("sine", "limit_interval")
        assert s2_space().components() == ("sine", "outer_arc")
        assert t_space().components() == ("T1", "T2", "T3")

    def test_component_of_examples(self):
        assert component_of(s1_space(), CatalogPoint("bar", 1)) == "limit_interval"
        assert component_of(s1_space(), CatalogPoint("wave", 0)) == "sine"
        for p in T_REPRESENTATIVES["T3"]:
            assert component_of(t_space(), p) == "T3"

    def test_unknown_strand(self):
        with pytest.raises(ValueError, match="unknown point"):
            s1_space().strand("nope")

    def test_parameter_outside_strand(self):
        with pytest.raises(ValueError, match="unknown point"):
            arc_space().validate(CatalogPoint("segment", 2))
        with pytest.raises(ValueError, match="unknown point"):
            t_space().validate(CatalogPoint("spiral", 0))  # open lower end

    def test_s3_resolver_reaches_high_indices(self):
        space = s3_space()
        tooth = space.strand("tooth_30")
        assert tooth.component == "tooth_30"
        assert (tooth.lo, tooth.hi) == (0, Fraction(1, 30))
        gap = space.strand("gap_12")
        assert gap.lo_open and gap.hi_open

    def test_positions_on_known_corners(self):
        s1 = s1_space()
        assert s1.position(CatalogPoint("wave", 0)) == (Fraction(2, 3), -1)
        assert s1.position(CatalogPoint("wave", 2)) == (Fraction(2, 5), 1)
        assert s1.position(CatalogPoint("bar", -1)) == (0, -1)
        s2 = s2_space()
        assert s2.position(CatalogPoint("ell", 0)) == (0, 1)
        assert s2.position(CatalogPoint("ell", 3)) == (-1, -1)
        assert s2.position(CatalogPoint("ell", 5)) == (-1, 1)
        t = t_space()
        assert t.position(CatalogPoint("spiral", 1)) == (Fraction(67, 96), Fraction(-33, 32))

    @given(st.fractions(min_value=-63, max_value=63, max_denominator=64).filter(lambda w: abs(w) < 1))
    def test_gap_strand_is_a_graph_over_x(self, w):
        # x strictly increases with the gap parameter, so the strand never
        # doubles back; sampled against the midpoint as a second point.
        space = s3_space()
        a = space.position(CatalogPoint("gap_2", w))
        b = space.position(CatalogPoint("gap_2", 0))
        if w < 0:
            assert a[0] < b[0]
        elif w > 0:
            assert a[0] > b[0]
        assert Fraction(1, 3) < a[0] < Fraction(1, 2)


class TestSeparationData:
    def test_linear_arc_example(self):
        arc, threshold = separation_data(
            arc_space(),
            CatalogPoint("segment", 0),
            CatalogPoint("segment", Fraction(1, 2)),
            CatalogPoint("segment", Fraction(3, 4)),
        )
        assert (arc.lo, arc.hi) == (0, Fraction(1, 2))
        assert threshold == Fraction(1, 8)

    def test_sine_strand_triple(self):
        _, threshold = separation_data(
            s1_space(),
            CatalogPoint("wave", 0),
            CatalogPoint("wave", 2),
            CatalogPoint("wave", 6),
        )
        assert threshold > 0

    def test_wave_triple_in_t(self):
        arc, threshold = separation_data(
            t_space(),
            CatalogPoint("wave", 0),
            CatalogPoint("wave", 4),
            CatalogPoint("wave", 8),
        )
        assert (arc.lo, arc.hi) == (0, 4)
        assert threshold == Fraction(4, 77)

    def test_z_between_is_an_error(self):
        with pytest.raises(ValueError, match="no separating continuum"):
            separation_data(
                arc_space(),
                CatalogPoint("segment", 0),
                CatalogPoint("segment", Fraction(1, 2)),
                CatalogPoint("segment", Fraction(1, 4)),
            )

    def test_cross_component_pair_is_an_error(self):
        with pytest.raises(ValueError, match="different arc components"):
            separation_data(
                t_space(),
                CatalogPoint("bar", 0),
                CatalogPoint("wave", 4),
                CatalogPoint("bar", 1),
            )


class TestArcFamily:
    def test_frozen_endpoint_indices(self):
        assert arc_chain_family("standard", 3).index_of(0) == IndexRange(1, 1)
        assert arc_chain_family("standard", 3).index_of(1) == IndexRange(8, 8)
        assert arc_chain_family("reversed", 3).index_of(0) == IndexRange(8, 8)
        assert arc_chain_family("standard", 3).index_of(Fraction(1, 2)) == IndexRange(4, 5)

    def test_certificate_is_an_interval_gap(self):
        verdict = chain_order_compare(arc_family("standard"), 0, Fraction(1, 2), None, 10)
        assert verdict.certificate["kind"] == "interval-gap"

    def test_two_distinct_orders_on_a_grid(self):
        grid = [Fraction(k, 8) for k in range(9)]
        orders = {
            ranking(arc_family(variant), grid, depth=12)
            for variant in ("standard", "reversed")
        }
        assert len(orders) == 2
        assert tuple(grid) in orders
        assert tuple(reversed(grid)) in orders

    def test_orders_are_opposite(self):
        grid = [Fraction(k, 7) for k in range(8)]
        assert (
            equal_or_opposite(
                ranking(arc_family("standard"), grid, depth=12),
                ranking(arc_family("reversed"), grid, depth=12),
            )
            == "opposite"
        )

    @given(small_fractions, small_fractions)
    @settings(max_examples=60)
    def test_stabilization_beats_the_distance_threshold(self, x, y):
        # Once the mesh drops below half the pair distance no link can
        # hold both points, so the comparison must already be settled.
        if x == y:
            return
        family = arc_family("standard")
        verdict = chain_order_compare(family, x, y, None, 24)
        assert verdict.kind == "stabilized"
        gap = abs(x - y)
        first = next(n for n in range(1, 25) if family.level(n).mesh_bound < gap / 2)
        assert verdict.threshold <= first

    @given(small_fractions, small_fractions)
    @settings(max_examples=40)
    def test_variants_disagree_exactly_on_strict_pairs(self, x, y):
        if x == y:
            return
        d_std = direction(arc_family("standard"), x, y, depth=24)
        d_rev = direction(arc_family("reversed"), x, y, depth=24)
        assert {d_std, d_rev} == {"le", "ge"}


S1_EXPECTED = {
    # (limit_top vs limit_bottom, second_trough vs outer_trough)
    "D": ("le", "ge"),
    "D'": ("ge", "ge"),
    "E": ("ge", "le"),
    "E'": ("le", "le"),
}

S1_RANKINGS = {
    "D": ("outer_trough", "second_trough", "limit_top", "limit_bottom"),
    "D'": ("outer_trough", "second_trough", "limit_bottom", "limit_top"),
    "E": ("limit_bottom", "limit_top", "second_trough", "outer_trough"),
    "E'": ("limit_top", "limit_bottom", "second_trough", "outer_trough"),
}


class TestSineFamilies:
    def test_level_sizes_frozen(self):
        assert s1_chain_family("D", 1).size == 88
        assert s1_chain_family("D'", 1).size == 112
        assert s1_chain_family("E", 1).size == 88
        assert s1_chain_family("E'", 1).size == 112

    @pytest.mark.parametrize("variant", ["D", "D'", "E", "E'"])
    def test_displayed_inequalities(self, variant):
        family = s1_family(variant)
        top_bottom = direction(family, S1_WITNESSES["limit_top"], S1_WITNESSES["limit_bottom"])
        troughs = direction(family, S1_WITNESSES["second_trough"], S1_WITNESSES["outer_trough"])
        assert (top_bottom, troughs) == S1_EXPECTED[variant]

    @pytest.mark.parametrize("variant", ["D", "D'", "E", "E'"])
    def test_witness_quadruple_ranking(self, variant):
        family = s1_family(variant)
        names = list(S1_WITNESSES)
        order = ranking(family, [S1_WITNESSES[n] for n in names])
        by_name = tuple(next(n for n in names if S1_WITNESSES[n] == p) for p in order)
        assert by_name == S1_RANKINGS[variant]

    def test_four_orders_pairwise_distinct(self):
        assert len(set(S1_RANKINGS.values())) == 4

    def test_inequalities_hold_at_every_level(self):
        family = s1_family("D")
        x, y = S1_WITNESSES["limit_top"], S1_WITNESSES["limit_bottom"]
        for n in range(1, 21):
            assert family.level(n).relation(x, y) == LE_ONLY

    @given(
        st.fractions(min_value=0, max_value=9, max_denominator=48),
        st.fractions(min_value=0, max_value=9, max_denominator=48),
    )
    @settings(max_examples=60)
    def test_wave_windows_are_monotone(self, u1, u2):
        level = s1_family("D").level(2)
        if u1 > u2:
            u1, u2 = u2, u1
        r1 = level.index_of(CatalogPoint("wave", u1))
        r2 = level.index_of(CatalogPoint("wave", u2))
        assert r1.lo <= r2.lo and r1.hi <= r2.hi


S2_EXPECTED = {
    # (wall_bottom vs wall_top, outer_trough vs second_trough)
    "standard": ("le", "le"),
    "reversed": ("ge", "ge"),
}


class TestOuterArcFamilies:
    @pytest.mark.parametrize("variant", ["standard", "reversed"])
    def test_witness_pair_directions(self, variant):
        family = s2_family(variant)
        walls = direction(family, S2_WITNESSES["wall_bottom"], S2_WITNESSES["wall_top"])
        troughs = direction(family, S2_WITNESSES["outer_trough"], S2_WITNESSES["second_trough"])
        assert (walls, troughs) == S2_EXPECTED[variant]

    @pytest.mark.parametrize("variant", ["standard", "reversed"])
    def test_mixed_patterns_never_appear(self, variant):
        # The two witness pairs always move together: flipping the chain
        # reverses both inequalities at once, at every depth.
        family = s2_family(variant)
        wall_rel = LE_ONLY if variant == "standard" else GE_ONLY
        for n in range(1, 21):
            level = family.level(n)
            assert level.relation(S2_WITNESSES["wall_bottom"], S2_WITNESSES["wall_top"]) == wall_rel
            assert (
                level.relation(S2_WITNESSES["outer_trough"], S2_WITNESSES["second_trough"])
                == wall_rel
            )

    def test_variants_are_opposite_on_the_witnesses(self):
        points = list(S2_WITNESSES.values())
        assert (
            equal_or_opposite(
                ranking(s2_family("standard"), points),
                ranking(s2_family("reversed"), points),
            )
            == "opposite"
        )


class TestToothForestFamilies:
    def test_level_shape_frozen(self):
        family = s3_family((0, 1, 1))
        assert family.level(1).size == 29
        assert family.level(1).mesh_bound == Fraction(5, 8)
        assert family.level(2).size == 119
        assert family.level(3).mesh_bound == Fraction(13, 48)

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6])
    def test_mesh_beats_one_over_m(self, m):
        family = s3_family((0,) * m)
        assert family.level(m).mesh_bound < Fraction(1, m)

    def test_witness_pair_shape(self):
        low, high = s3_witness_pair(4)
        assert low == CatalogPoint("tooth_4", 0)
        assert high == CatalogPoint("tooth_4", Fraction(1, 4))

    def test_bit_sets_the_direction_and_threshold(self):
        bits = (0, 1, 1, 0, 1, 0)
        family = s3_family(bits)
        for i, bit in enumerate(bits, start=1):
            low, high = s3_witness_pair(i)
            verdict = chain_order_compare(family, low, high, None, len(bits))
            assert verdict.kind == "stabilized"
            assert verdict.direction == ("le" if bit == 0 else "ge")
            assert verdict.threshold == i

    def test_prefixes_differing_at_i_disagree_from_level_i_on(self):
        one = s3_family((0, 1, 1, 0, 0, 1))
        other = s3_family((0, 0, 1, 0, 0, 1))
        low, high = s3_witness_pair(2)
        for m in range(2, 7):
            assert one.level(m).relation(low, high) != other.level(m).relation(low, high)

    def test_short_prefix_rejected(self):
        with pytest.raises(ValueError, match="prefix too short"):
            s3_family((0, 1)).level(3)

    def test_origin_joins_the_blob(self):
        # Everything beyond the covered teeth shares the terminal link.
        family = s3_family((0, 1))
        level = family.level(2)
        last = level.size
        assert level.index_of(CatalogPoint("origin", 0)) == IndexRange(last, last)
        assert level.index_of(CatalogPoint("tooth_9", Fraction(1, 18))) == IndexRange(last, last)


T_EXPECTED = {"D": ("T3", "T1", "T2"), "E": ("T1", "T2", "T3")}


class TestSpiralFamilies:
    def test_level_sizes_frozen(self):
        assert t_family("D").level(1).size == 125
        assert t_family("D").level(2).size == 423
        assert t_family("E").level(1).size == 112
        assert t_family("E").level(2).size == 332

    @pytest.mark.parametrize("variant", ["D", "E"])
    def test_component_order_on_representatives(self, variant):
        family = t_family(variant)
        first, second, third = T_EXPECTED[variant]
        reps = T_REPRESENTATIVES
        for a in reps[first]:
            for b in reps[second]:
                assert direction(family, a, b, depth=6) == "le"
        for b in reps[second]:
            for c in reps[third]:
                assert direction(family, b, c, depth=6) == "le"
        for a in reps[first]:
            for c in reps[third]:
                assert direction(family, a, c, depth=6) == "le"

    def test_the_two_variants_differ(self):
        reps = T_REPRESENTATIVES
        assert direction(t_family("D"), reps["T3"][0], reps["T2"][0], 6) == "le"
        assert direction(t_family("E"), reps["T3"][0], reps["T2"][0], 6) == "ge"

    @pytest.mark.parametrize("variant", ["D", "E"])
    def test_components_never_mix(self, variant):
        # Pairs with an outside z kept away from the minimal arc; the
        # spiral hugs the sine curve, so spiral witnesses use the short
        # outermost sub-arc where the separation stays macroscopic.
        family = t_family(variant)
        triples = [
            (CatalogPoint("bar", -1), CatalogPoint("bar", 1), CatalogPoint("wave", 4)),
            (CatalogPoint("bar", -1), CatalogPoint("bar", 1), CatalogPoint("spiral", 1)),
            (CatalogPoint("wave", 0), CatalogPoint("wave", 2), CatalogPoint("bar", 0)),
            (
                CatalogPoint("wave", 0),
                CatalogPoint("wave", 2),
                CatalogPoint("spiral", Fraction(3, 4)),
            ),
            (
                CatalogPoint("spiral", 1),
                CatalogPoint("spiral", Fraction(15, 16)),
                CatalogPoint("bar", 0),
            ),
            (
                CatalogPoint("spiral", 1),
                CatalogPoint("spiral", Fraction(15, 16)),
                CatalogPoint("wave", 4),
            ),
        ]
        for x, y, z in triples:
            _, threshold = separation_data(t_space(), x, y, z)
            report = never_between_after(family, x, y, z, threshold, 4)
            assert report.ok, report
            assert report.levels_checked, (x, y, z, threshold)


class TestValidator:
    @pytest.mark.parametrize(
        "family,levels",
        [
            (arc_family("standard"), (1, 3, 6)),
            (arc_family("reversed"), (3,)),
            (s1_family("D"), (1, 2)),
            (s1_family("D'"), (1, 2)),
            (s1_family("E"), (1,)),
            (s1_family("E'"), (1, 2)),
            (s2_family("standard"), (1, 2)),
            (s2_family("reversed"), (1, 2)),
            (s3_family((0, 1, 1, 0)), (1, 2, 3, 4)),
            (s3_family((1, 0, 0, 1)), (2, 4)),
            (t_family("D"), (1, 2)),
            (t_family("E"), (1, 2)),
        ],
        ids=lambda v: getattr(v, "variant", None) or str(v),
    )
    def test_levels_pass_the_sampled_checks(self, family, levels):
        for n in levels:
            report = validate_level(family, n)
            assert report["ok"], report
            assert report["samples"] >= 8 * report["links"]

    def test_density_failure_is_reported(self):
        report = validate_level(arc_family("standard"), 2, min_samples_per_link=1000)
        assert not report["ok"]
        assert report["reason"] == "links sampled too thinly"
