"""Tail-flip words: involutions, odd decompositions, parity-steered reach."""

from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chainorder.orientation import (
    EVEN,
    ODD,
    ReachResult,
    SearchBoundExceeded,
    apply_composition,
    composition_parity,
    decompose_on_cylinder,
    flip,
    in_A_n,
    parse_word,
    reach_with_parity,
)

words = st.lists(st.integers(min_value=0, max_value=1), min_size=1, max_size=12).map(tuple)


def extensions(prefix, depth):
    for tail in itertools.product((0, 1), repeat=depth - len(prefix)):
        yield prefix + tail


class TestFlip:
    def test_examples(self):
        assert flip(0, "0110") == (1, 0, 0, 1)
        assert flip(2, "0110") == (0, 1, 0, 1)

    @given(words, st.data())
    def test_involution(self, w, data):
        n = data.draw(st.integers(min_value=0, max_value=len(w) - 1))
        assert flip(n, flip(n, w)) == w

    @given(words, st.data())
    def test_prefix_untouched_tail_complemented(self, w, data):
        n = data.draw(st.integers(min_value=0, max_value=len(w) - 1))
        out = flip(n, w)
        assert out[:n] == w[:n]
        assert all(a != b for a, b in zip(out[n:], w[n:]))

    def test_index_out_of_range(self):
        with pytest.raises(ValueError, match="outside word"):
            flip(4, "0110")

    def test_flips_commute(self):
        for w in itertools.product((0, 1), repeat=6):
            assert flip(1, flip(4, w)) == flip(4, flip(1, w))


class TestMembership:
    def test_a_zero_is_everything(self):
        assert in_A_n(0, ())
        assert in_A_n(0, "0110")

    def test_examples(self):
        assert in_A_n(2, "0110")
        assert not in_A_n(2, "1010")

    def test_word_too_short(self):
        with pytest.raises(ValueError, match="too short"):
            in_A_n(3, "01")

    def test_definition_at_depth_six(self):
        for n in range(1, 7):
            for w in itertools.product((0, 1), repeat=6):
                expected = all(b == 0 for b in w[: n - 1]) and w[n - 1] == 1
                assert in_A_n(n, w) == expected


class TestDecompose:
    def test_examples(self):
        assert decompose_on_cylinder(0, ()) == (0,)
        assert decompose_on_cylinder(1, (1,)) == (1,)
        assert decompose_on_cylinder(1, (0,)) == (0, 1, 0)

    @pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
    def test_pointwise_equal_to_the_tail_flip(self, n):
        depth = 8
        for s in itertools.product((0, 1), repeat=n):
            comp = decompose_on_cylinder(n, s)
            assert len(comp) % 2 == 1
            assert composition_parity(comp) == ODD
            assert max(comp) <= n
            for w in extensions(s, depth):
                assert apply_composition(comp, w) == flip(n, w)

    def test_mover_is_a_palindrome_conjugation(self):
        comp = decompose_on_cylinder(3, (1, 0, 1))
        assert comp == (0, 1, 3, 1, 0)
        assert comp == tuple(reversed(comp))

    def test_wrong_prefix_length(self):
        with pytest.raises(ValueError, match="length"):
            decompose_on_cylinder(2, (0, 1, 1))


class TestParity:
    def test_empty_is_even(self):
        assert composition_parity(()) == EVEN

    def test_examples(self):
        assert composition_parity((0, 1, 0)) == ODD
        assert composition_parity((2, 2)) == EVEN


def exact_image(result: ReachResult, depth: int) -> bool:
    got = {apply_composition(result.composition, w) for w in extensions(result.source, depth)}
    return got == set(extensions(result.image, depth))


class TestReach:
    def test_odd_example(self):
        result = reach_with_parity((0,), (1, 1), ODD, 6)
        assert result.composition == (0,)
        assert result.source == (0, 0)
        assert result.image == (1, 1)

    def test_even_example_appends_a_fresh_flip(self):
        result = reach_with_parity((0,), (1, 1), EVEN, 6)
        assert result.composition == (0, 2)
        assert result.image == (1, 1)
        assert exact_image(result, 6)

    def test_identity_case(self):
        result = reach_with_parity((0, 1), (0, 1), EVEN, 6)
        assert result.composition == ()
        assert result.source == (0, 1)

    def test_all_short_prefixes_both_parities(self):
        prefixes = [p for k in range(4) for p in itertools.product((0, 1), repeat=k)]
        for src in prefixes:
            for tgt in prefixes:
                for parity in (EVEN, ODD):
                    result = reach_with_parity(src, tgt, parity, 8)
                    assert result.parity == parity
                    assert result.source[: len(src)] == src
                    assert result.image[: len(tgt)] == tgt
                    assert exact_image(result, 8)

    def test_images_cover_all_targets(self):
        # Steering from one source reaches every length-2 cylinder, the
        # finite covering device behind the category argument.
        covered = set()
        for tgt in itertools.product((0, 1), repeat=2):
            result = reach_with_parity((0,), tgt, EVEN, 6)
            covered.update(extensions(result.image, 2))
        assert covered == set(itertools.product((0, 1), repeat=2))

    def test_depth_too_shallow(self):
        with pytest.raises(ValueError, match="too shallow"):
            reach_with_parity((0, 1), (1, 1, 0), ODD, 4)

    def test_bad_parity(self):
        with pytest.raises(ValueError, match="parity"):
            reach_with_parity((0,), (1,), "both", 6)

    def test_bound_error_is_a_value_error(self):
        assert issubclass(SearchBoundExceeded, ValueError)


class TestParseWord:
    def test_string_and_iterable_agree(self):
        assert parse_word("0110") == parse_word([0, 1, 1, 0]) == (0, 1, 1, 0)

    def test_rejects_other_symbols(self):
        with pytest.raises(ValueError, match="binary"):
            parse_word("012")
