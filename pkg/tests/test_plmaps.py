"""Exact evaluation, preimages, and composition of PL interval maps."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from chainorder.plmaps import Lap, PLMap, PreimageError, tent

F = Fraction


def brute_preimages(f: PLMap, y: Fraction, denom: int = 2048) -> list[Fraction]:
    """Oracle: scan a fine grid for sign changes of f - y and refine exactly.

    Works for maps whose breakpoints have denominators dividing `denom`,
    because then each grid cell lies inside one linear piece.
    """
    hits = set()
    prev_t = F(0)
    prev_v = f(prev_t) - y
    for k in range(1, denom + 1):
        t = F(k, denom)
        v = f(t) - y
        if prev_v == 0:
            hits.add(prev_t)
        if v == 0:
            hits.add(t)
        if prev_v * v < 0:
            hits.add(prev_t - prev_v * (t - prev_t) / (v - prev_v))
        prev_t, prev_v = t, v
    return sorted(hits)


class TestValidation:
    def test_rejects_wrong_domain(self):
        with pytest.raises(ValueError):
            PLMap((F(0), F(1, 2)), (F(0), F(1)))

    def test_rejects_unsorted_breakpoints(self):
        with pytest.raises(ValueError):
            PLMap((F(0), F(3, 4), F(1, 2), F(1)), (F(0), F(1), F(0), F(1)))

    def test_rejects_values_outside_unit_interval(self):
        with pytest.raises(ValueError):
            PLMap((F(0), F(1)), (F(0), F(2)))

    def test_rejects_evaluation_outside_domain(self):
        with pytest.raises(ValueError):
            tent()(F(3, 2))


class TestTentValues:
    @pytest.mark.parametrize(
        "t, expected",
        [
            (F(0), F(0)),
            (F(1, 4), F(1, 2)),
            (F(1, 2), F(1)),
            (F(3, 4), F(1, 2)),
            (F(1), F(0)),
            (F(1, 3), F(2, 3)),
            (F(2, 3), F(2, 3)),
        ],
    )
    def test_eval(self, t, expected):
        assert tent()(t) == expected

    @pytest.mark.parametrize(
        "y, expected",
        [
            (F(1, 2), (F(1, 4), F(3, 4))),
            (F(1), (F(1, 2),)),
            (F(0), (F(0), F(1))),
            (F(2, 3), (F(1, 3), F(2, 3))),
        ],
    )
    def test_preimages(self, y, expected):
        assert tent()(expected[0]) == y
        assert tent().preimages(y) == expected

    def test_preimages_match_grid_oracle(self):
        for num in range(0, 17):
            y = F(num, 16)
            assert list(tent().preimages(y)) == brute_preimages(tent(), y)


class TestIteratedPreimages:
    def test_depth_zero_is_seed(self):
        assert tent().iterated_preimage_set(F(1, 2), 0) == (F(1, 2),)

    def test_first_levels(self):
        assert tent().iterated_preimage_set(F(1, 2), 1) == (F(1, 4), F(3, 4))
        assert tent().iterated_preimage_set(F(1, 2), 2) == (
            F(1, 8),
            F(3, 8),
            F(5, 8),
            F(7, 8),
        )

    def test_counts_and_denominators(self):
        for i in range(0, 11):
            level = tent().iterated_preimage_set(F(1, 2), i)
            assert len(level) == 2**i
            assert all(p.denominator == 2 ** (i + 1) and p.numerator % 2 == 1 for p in level)

    def test_negative_depth_rejected(self):
        with pytest.raises(ValueError):
            tent().iterated_preimage_set(F(1, 2), -1)


class TestFlatSegments:
    def setup_method(self):
        self.plateau = PLMap(
            (F(0), F(1, 4), F(3, 4), F(1)),
            (F(0), F(1, 2), F(1, 2), F(1)),
        )

    def test_preimage_at_plateau_value_rejected(self):
        with pytest.raises(PreimageError):
            self.plateau.preimages(F(1, 2))

    def test_preimage_away_from_plateau_fine(self):
        assert self.plateau.preimages(F(1, 4)) == (F(1, 8),)

    def test_laps_rejected(self):
        with pytest.raises(ValueError):
            self.plateau.laps()

    def test_not_full_lap(self):
        assert not self.plateau.is_full_lap()


class TestLaps:
    def test_tent_laps(self):
        laps = tent().laps()
        assert laps == (Lap(0, 1, True), Lap(1, 2, False))
        assert tent().is_full_lap()

    def test_branch_inverts_each_lap(self):
        up, down = tent().laps()
        assert tent().branch(up, F(1, 2)) == F(1, 4)
        assert tent().branch(down, F(1, 2)) == F(3, 4)
        for num in range(0, 9):
            y = F(num, 8)
            for lap in (up, down):
                assert tent()(tent().branch(lap, y)) == y

    def test_three_lap_map(self):
        zigzag = PLMap(
            (F(0), F(1, 3), F(2, 3), F(1)),
            (F(0), F(1), F(0), F(1)),
        )
        assert len(zigzag.laps()) == 3
        assert zigzag.is_full_lap()
        assert zigzag.lipschitz() == 3

    def test_lipschitz_tent(self):
        assert tent().lipschitz() == 2


unit_fractions = st.fractions(min_value=0, max_value=1, max_denominator=12)


@st.composite
def pl_maps(draw):
    interior = draw(
        st.lists(
            st.fractions(min_value=F(1, 12), max_value=F(11, 12), max_denominator=12),
            max_size=4,
        )
    )
    bps = sorted({F(0), F(1), *interior})
    vals = [draw(unit_fractions) for _ in bps]
    return PLMap(tuple(bps), tuple(vals))


class TestCompose:
    @given(pl_maps(), pl_maps(), unit_fractions)
    def test_pointwise_agreement(self, f, g, t):
        assert f.compose(g)(t) == f(g(t))

    def test_tent_square_breakpoints(self):
        sq = tent().compose(tent())
        assert sq.breakpoints == (F(0), F(1, 4), F(1, 2), F(3, 4), F(1))
        assert sq.values == (F(0), F(1), F(0), F(1), F(0))

    @given(pl_maps(), unit_fractions)
    def test_preimage_points_evaluate_back(self, f, y):
        try:
            pts = f.preimages(y)
        except PreimageError:
            return
        assert list(pts) == sorted(pts)
        for p in pts:
            assert f(p) == y
