"""Chain levels, the canonical interval chain, and pullback comparisons."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chainorder.chains import (
    BOTH,
    GE_ONLY,
    LE_ONLY,
    IntervalChain,
    MeshBudgetError,
    NeverBetweenReport,
    PullbackSequence,
    canonical_interval_chain,
    chain_order_compare,
    chain_trace,
    equal_or_opposite,
    level_preorder,
    never_between_after,
    orders_never_mix,
    pullback_chain,
    reverse_range,
)
from chainorder.foundations import EQ, GE, LE, STABILIZED, ULTRAFILTER_DEPENDENT, UNKNOWN, IndexRange
from chainorder.inverse_limit import (
    inverse_limit_order,
    tent_system,
    thread_from_letters,
    zero_thread,
)
from chainorder.ultrafilter import SimulatedUltrafilter


def u_mod2(residue: int) -> SimulatedUltrafilter:
    return SimulatedUltrafilter((1, 2), (0, residue))


class TestCanonicalChain:
    def test_links_frozen_for_k4(self):
        chain = canonical_interval_chain(4)
        assert chain.link(2) == (Fraction(3, 16), Fraction(9, 16))
        assert chain.link(1) == (Fraction(0), Fraction(5, 16))
        assert chain.link(4) == (Fraction(11, 16), Fraction(1))
        assert chain.mesh == Fraction(3, 8)

    def test_midpoint_lands_in_two_links(self):
        chain = canonical_interval_chain(4)
        assert chain.index_of(Fraction(1, 2)) == IndexRange(2, 3)

    def test_endpoints_land_in_one_link(self):
        chain = canonical_interval_chain(4)
        assert chain.index_of(0) == IndexRange(1, 1)
        assert chain.index_of(1) == IndexRange(4, 4)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            canonical_interval_chain(0)
        chain = canonical_interval_chain(3)
        with pytest.raises(ValueError):
            chain.link(0)
        with pytest.raises(ValueError):
            chain.link(4)
        with pytest.raises(ValueError):
            chain.index_of(Fraction(3, 2))

    @pytest.mark.parametrize("k", list(range(1, 65)))
    def test_is_a_chain(self, k):
        chain = canonical_interval_chain(k)
        links = [chain.link(i) for i in range(1, k + 1)]
        for i in range(k):
            lo, hi = links[i]
            assert lo < hi
            assert hi - lo <= chain.mesh
            if i + 1 < k:
                # Consecutive links overlap on an open interval.
                assert links[i][1] > links[i + 1][0]
            for j in range(i + 2, k):
                assert links[i][1] <= links[j][0]

    @pytest.mark.parametrize("k", [1, 2, 3, 5, 8])
    def test_index_matches_membership_on_grid(self, k):
        chain = canonical_interval_chain(k)
        for num in range(8 * k + 1):
            t = Fraction(num, 8 * k)
            direct = {i for i in range(1, k + 1) if chain.contains(i, t)}
            assert direct == set(chain.index_of(t).indices())

    @given(
        k=st.integers(min_value=1, max_value=40),
        num=st.integers(min_value=0, max_value=10**6),
        den=st.integers(min_value=1, max_value=10**6),
    )
    def test_index_matches_membership_random(self, k, num, den):
        t = Fraction(min(num, den), den)
        chain = canonical_interval_chain(k)
        direct = {i for i in range(1, k + 1) if chain.contains(i, t)}
        assert direct == set(chain.index_of(t).indices())


class TestLevelPreorder:
    def test_disjoint_ranges_are_strict(self):
        assert level_preorder(IndexRange(1, 2), IndexRange(3, 3)) == LE_ONLY
        assert level_preorder(IndexRange(5, 5), IndexRange(2, 3)) == GE_ONLY

    def test_overlap_allows_both(self):
        assert level_preorder(IndexRange(2, 3), IndexRange(3, 4)) == BOTH
        assert level_preorder(IndexRange(4, 4), IndexRange(4, 4)) == BOTH

    def test_reverse_range_frozen_example(self):
        assert reverse_range(10, IndexRange(2, 2)) == IndexRange(9, 9)
        assert reverse_range(10, IndexRange(3, 4)) == IndexRange(7, 8)

    def test_reverse_range_validation(self):
        with pytest.raises(ValueError):
            reverse_range(3, IndexRange(3, 4))

    def test_reverse_is_an_involution(self):
        for k in range(1, 13):
            for lo in range(1, k + 1):
                for hi in (lo, min(lo + 1, k)):
                    r = IndexRange(lo, hi)
                    assert reverse_range(k, reverse_range(k, r)) == r

    def test_reversal_flips_strict_relations(self):
        flip = {LE_ONLY: GE_ONLY, GE_ONLY: LE_ONLY, BOTH: BOTH}
        chain = canonical_interval_chain(6)
        grid = [Fraction(n, 24) for n in range(25)]
        for t, s in itertools.product(grid, repeat=2):
            rx, ry = chain.index_of(t), chain.index_of(s)
            rel = level_preorder(rx, ry)
            reversed_rel = level_preorder(
                reverse_range(6, rx), reverse_range(6, ry)
            )
            assert reversed_rel == flip[rel]


class TestPullbackChain:
    def test_mesh_budget_enforced(self):
        sys = tent_system()
        with pytest.raises(MeshBudgetError):
            pullback_chain(sys, 1, IntervalChain(2))
        lvl = pullback_chain(sys, 1, IntervalChain(4))
        assert lvl.mesh_bound == Fraction(3, 2)
        assert lvl.base_mesh == Fraction(3, 8)

    def test_rejects_level_zero(self):
        with pytest.raises(ValueError):
            pullback_chain(tent_system(), 0, IntervalChain(64))

    def test_sequence_levels_frozen(self):
        seq = PullbackSequence(tent_system())
        lvl1 = seq.level(1)
        assert (lvl1.size, lvl1.mesh_bound) == (4, Fraction(3, 2))
        lvl2 = seq.level(2)
        assert (lvl2.size, lvl2.mesh_bound) == (16, Fraction(3, 4))
        # The approximation budget at level n is fiber bound + 1/n.
        for n in range(1, 10):
            lvl = seq.level(n)
            assert lvl.mesh_bound == Fraction(1, 2**n) + Fraction(1, n)
            assert lvl.base_mesh == Fraction(3, 2 * lvl.size)

    def test_index_of_uses_coordinates(self):
        seq = PullbackSequence(tent_system())
        half = thread_from_letters(tent_system(), Fraction(1, 2), cycle="L")
        assert seq.level(1).index_of(half) == seq.level(1).index_fn(half)
        assert seq.level(1).index_of(zero_thread(tent_system())) == IndexRange(1, 1)


def alternating_pair():
    """Coordinates 1/2, 1/4, 7/8, 7/16, ... against 1/2, 3/4, 3/8, 13/16, ...
    so the sign alternates: x trails at odd levels, leads at even ones."""
    sys = tent_system()
    x = thread_from_letters(sys, Fraction(1, 2), (0, 1), cycle=(0, 1))
    y = thread_from_letters(sys, Fraction(1, 2), (1, 0), cycle=(1, 0))
    return x, y


class TestChainOrderCompare:
    def test_equal_points(self):
        seq = PullbackSequence(tent_system())
        z = zero_thread(tent_system())
        verdict = chain_order_compare(seq, z, z, u_mod2(0), 10)
        assert verdict.kind == STABILIZED
        assert verdict.direction == EQ

    def test_zero_below_half_thread(self):
        sys = tent_system()
        seq = PullbackSequence(sys)
        z = zero_thread(sys)
        half = thread_from_letters(sys, Fraction(1, 2), cycle="L")
        verdict = chain_order_compare(seq, z, half, u_mod2(0), 10)
        assert verdict.kind == STABILIZED
        assert verdict.direction == LE
        assert verdict.threshold == 2
        assert seq.level(1).relation(z, half) == BOTH
        assert seq.level(2).relation(z, half) == LE_ONLY
        reverse = chain_order_compare(seq, half, z, u_mod2(0), 10)
        assert (reverse.kind, reverse.direction, reverse.threshold) == (
            STABILIZED,
            GE,
            2,
        )

    def test_threshold_beyond_depth_is_unknown(self):
        sys = tent_system()
        seq = PullbackSequence(sys)
        z = zero_thread(sys)
        half = thread_from_letters(sys, Fraction(1, 2), cycle="L")
        verdict = chain_order_compare(seq, z, half, u_mod2(0), 1)
        assert verdict.kind == UNKNOWN

    def test_alternating_pair_depends_on_ultrafilter(self):
        seq = PullbackSequence(tent_system())
        x, y = alternating_pair()
        low = chain_order_compare(seq, x, y, u_mod2(0), 12)
        high = chain_order_compare(seq, x, y, u_mod2(1), 12)
        assert low.kind == high.kind == ULTRAFILTER_DEPENDENT
        assert (low.direction, high.direction) == (GE, LE)
        # x leads at odd chain levels, trails at even ones.
        bits = low.le_set.bits(6)
        assert bits == (False, True, False, True, False, True)

    def test_word_tails_stay_unknown(self):
        sys = tent_system()
        seq = PullbackSequence(sys)
        a = thread_from_letters(sys, Fraction(1, 2), "LRL")
        b = thread_from_letters(sys, Fraction(1, 2), "RLL")
        verdict = chain_order_compare(seq, a, b, u_mod2(0), 3)
        assert verdict.kind == UNKNOWN

    def test_agrees_with_coordinate_sign_route(self):
        """Seeded pairs: the chain pullback and the direct coordinate
        comparison must reach the same verdict and direction."""
        sys = tent_system()
        seq = PullbackSequence(sys)
        rng = random.Random(20260815)
        pool = [Fraction(1, 2), Fraction(1, 4), Fraction(3, 4), Fraction(1, 3)]
        for _ in range(40):
            x0 = rng.choice(pool)
            y0 = rng.choice(pool)
            x = thread_from_letters(
                sys,
                x0,
                tuple(rng.randrange(2) for _ in range(rng.randrange(3))),
                cycle=tuple(rng.randrange(2) for _ in range(rng.randrange(1, 3))),
            )
            y = thread_from_letters(
                sys,
                y0,
                tuple(rng.randrange(2) for _ in range(rng.randrange(3))),
                cycle=tuple(rng.randrange(2) for _ in range(rng.randrange(1, 3))),
            )
            u = u_mod2(rng.randrange(2))
            via_chain = chain_order_compare(seq, x, y, u, 30)
            direct = inverse_limit_order(x, y, u, 30)
            assert via_chain.kind == direct.kind
            assert via_chain.direction == direct.direction

    def test_trace_reports_relations(self):
        sys = tent_system()
        seq = PullbackSequence(sys)
        z = zero_thread(sys)
        half = thread_from_letters(sys, Fraction(1, 2), cycle="L")
        trace = chain_trace(seq, z, half, 3)
        assert [entry["level"] for entry in trace] == [1, 2, 3]
        assert trace[0]["relation"] == BOTH
        assert trace[1]["relation"] == LE_ONLY
        assert trace[0]["k"] == 4
        assert set(trace[0]) == {"level", "k", "mesh", "idx_x", "idx_y", "relation"}


class TestNeverBetween:
    def setup_method(self):
        self.sys = tent_system()
        self.seq = PullbackSequence(self.sys)
        self.x = zero_thread(self.sys)
        self.y = thread_from_letters(self.sys, Fraction(1, 2), cycle="L")
        self.outside = thread_from_letters(self.sys, Fraction(3, 4), cycle="L")
        self.middle = thread_from_letters(self.sys, Fraction(1, 4), cycle="L")

    def test_point_beyond_the_pair_is_never_between(self):
        report = never_between_after(
            self.seq, self.x, self.y, self.outside, Fraction(1, 2), 8
        )
        assert isinstance(report, NeverBetweenReport)
        assert report.ok
        assert report.first_failure is None
        assert report.levels_checked[0] == 3
        assert report.levels_checked[-1] == 8

    def test_point_between_is_flagged_with_witness(self):
        report = never_between_after(
            self.seq, self.x, self.y, self.middle, Fraction(1, 2), 8
        )
        assert not report.ok
        assert report.first_failure["level"] == 3
        assert report.as_dict()["ok"] is False

    def test_endpoint_rejected(self):
        with pytest.raises(ValueError):
            never_between_after(self.seq, self.x, self.y, self.x, Fraction(1, 2), 8)

    def test_coarse_threshold_checks_nothing(self):
        report = never_between_after(
            self.seq, self.x, self.y, self.middle, Fraction(10), 0
        )
        assert report.ok
        assert report.levels_checked == ()


class TestOrderComparison:
    def test_equal_opposite_neither(self):
        assert equal_or_opposite("abc", "abc") == "equal"
        assert equal_or_opposite("abc", "cba") == "opposite"
        assert equal_or_opposite("abc", "bac") == "neither"
        assert equal_or_opposite(["p"], ["p"]) == "equal"

    def test_validation(self):
        with pytest.raises(ValueError):
            equal_or_opposite("aab", "aba")
        with pytest.raises(ValueError):
            equal_or_opposite("abc", "abd")
        with pytest.raises(ValueError):
            equal_or_opposite("", "")

    def test_never_mix_matches_classification_exhaustively(self):
        """Betweenness transfers for every triple exactly when the two
        orders are equal or opposite."""
        for n in range(1, 5):
            base = tuple(range(n))
            for a in itertools.permutations(base):
                for b in itertools.permutations(base):
                    mix_free = orders_never_mix(a, b)
                    classification = equal_or_opposite(a, b)
                    assert mix_free == (classification != "neither")
