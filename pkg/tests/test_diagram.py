"""Diagrams: slice words, braid closures, resolutions, circle tracing."""

from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from askein.diagram import (BraidWord, Cap, Cross, Cup, DiagramError,
                            MergeOrSplit, SliceWord, braid_word,
                            crossing_effect, parse_braid_file,
                            parse_slice_file)

from conftest import braid_words, slice_words

# (circle count, nontrivial count) per state, traced by hand from the
# closure pictures and cross-checked by the one-bit-flip rule below.
FLAGSHIP_CENSUS = {0: (2, 1), 1: (1, 1), 2: (3, 3), 3: (2, 1)}
TREFOIL_CENSUS = {0: (2, 2), 1: (1, 0), 2: (1, 0), 3: (2, 0),
                  4: (1, 0), 5: (2, 0), 6: (2, 0), 7: (3, 0)}


def census(word: SliceWord, state: int):
    res = word.resolve(state)
    return len(res.circles), sum(1 for c in res.circles if not c.trivial)


class TestParsing:
    def test_braid_file_round_trip(self):
        bw = parse_braid_file("3\n1 -2\n")
        assert bw == BraidWord(3, (1, -2))

    def test_braid_file_comments_and_blanks(self):
        bw = parse_braid_file("# closure\n3\n\n1 -2\n")
        assert bw == BraidWord(3, (1, -2))

    def test_braid_file_empty_word(self):
        assert parse_braid_file("4\n\n") == BraidWord(4, ())

    @pytest.mark.parametrize("text", ["x\n", "3\n0\n", "3\n3\n", "2\n1 5\n", ""])
    def test_braid_file_rejects_garbage(self, text):
        with pytest.raises(DiagramError):
            parse_braid_file(text)

    def test_slice_file(self):
        w = parse_slice_file("2\nX 1 +\nU 1\nX 2 +\nX 2 +\nA 3\n")
        assert w.seam_strands == 2
        assert w.n_crossings == 3
        assert w.slices == (Cross(1, 1), Cup(1), Cross(2, 1), Cross(2, 1),
                            Cap(3))

    @pytest.mark.parametrize("text", ["2\nX 5 +\n", "2\nQ 1\n", "-1\n"])
    def test_slice_file_rejects_garbage(self, text):
        with pytest.raises(DiagramError):
            parse_slice_file(text)

    def test_braid_word_returns_slice_word(self):
        w = braid_word(2, [1, 1, 1])
        assert isinstance(w, SliceWord)
        assert w == BraidWord(2, (1, 1, 1)).to_slice_word()

    def test_letter_out_of_range(self):
        with pytest.raises(DiagramError):
            BraidWord(2, (2,)).to_slice_word()


class TestBraidWord:
    def test_writhe(self):
        assert BraidWord(3, (1, -2, 1)).writhe == 1
        assert BraidWord(2, (-1, -1, -1)).writhe == -3

    def test_rotated(self):
        assert BraidWord(3, (1, -2)).rotated(1) == BraidWord(3, (-2, 1))
        assert BraidWord(3, (1, -2)).rotated(2) == BraidWord(3, (1, -2))

    def test_counts(self):
        w = braid_word(3, [1, -2])
        assert (w.n_plus, w.n_minus, w.n_crossings) == (1, 1, 2)
        assert w.crossing_signs == (1, -1)


class TestResolutions:
    def test_flagship_census(self):
        w = braid_word(3, [1, -2])
        assert {s: census(w, s) for s in range(4)} == FLAGSHIP_CENSUS

    def test_trefoil_census(self):
        w = braid_word(2, [1, 1, 1])
        assert {s: census(w, s) for s in range(8)} == TREFOIL_CENSUS

    def test_identity_braid_closure(self):
        w = braid_word(3, [])
        assert census(w, 0) == (3, 3)

    def test_free_circle(self):
        w = SliceWord(0, [Cup(1), Cap(1)])
        assert census(w, 0) == (1, 0)

    def test_n_components_matches_permutation_cycles(self):
        # independent oracle: closure components = cycles of the braid's
        # underlying permutation
        for strands, letters in ((2, (1, 1, 1)), (3, (1, -2)), (4, (1, 3)),
                                 (3, (1, 2, 1)), (4, (1, -2, 3, -2))):
            perm = list(range(strands))
            for letter in letters:
                i = abs(letter) - 1
                perm[i], perm[i + 1] = perm[i + 1], perm[i]
            seen, cycles = set(), 0
            for i in range(strands):
                if i in seen:
                    continue
                cycles += 1
                j = i
                while j not in seen:
                    seen.add(j)
                    j = perm[j]
            word = braid_word(strands, letters)
            assert word.n_components == cycles

    @given(braid_words())
    def test_windings_bounded(self, bw):
        w = bw.to_slice_word()
        for state in range(1 << w.n_crossings):
            for circle in w.resolve(state).circles:
                assert circle.winding in (-1, 0, 1)
                assert circle.trivial == (circle.winding == 0)

    @given(slice_words())
    def test_windings_bounded_slice(self, w):
        for state in range(1 << w.n_crossings):
            for circle in w.resolve(state).circles:
                assert circle.winding in (-1, 0, 1)

    @given(braid_words())
    def test_flip_changes_circle_count_by_one(self, bw):
        w = bw.to_slice_word()
        n = w.n_crossings
        for state in range(1 << n):
            base = len(w.resolve(state).circles)
            for c in range(n):
                if not (state >> c) & 1:
                    other = len(w.resolve(state | (1 << c)).circles)
                    assert abs(other - base) == 1

    @given(braid_words())
    def test_oriented_resolution_has_strand_many_nontrivial(self, bw):
        w = bw.to_slice_word()
        state = 0
        for c, sign in enumerate(w.crossing_signs):
            if sign < 0:
                state |= 1 << c
        res = w.resolve(state)
        assert len(res.circles) == bw.strands
        assert all(not c.trivial for c in res.circles)

    @given(slice_words())
    def test_resolve_deterministic(self, w):
        for state in range(1 << w.n_crossings):
            first = [(c.walk, c.winding) for c in w.resolve(state).circles]
            w.clear_cache()
            second = [(c.walk, c.winding) for c in w.resolve(state).circles]
            assert first == second


class TestCrossingEffect:
    def test_merge_on_flagship(self):
        w = braid_word(3, [1, -2])
        eff = crossing_effect(w, 0, 0)
        assert isinstance(eff, MergeOrSplit)
        assert eff.kind == "merge"
        assert len(eff.inputs) == 2 and len(eff.outputs) == 1

    def test_split_on_flagship(self):
        # flipping crossing 1 from state 0 raises the circle count: a split
        w = braid_word(3, [1, -2])
        eff = crossing_effect(w, 0, 1)
        assert eff.kind == "split"
        assert len(eff.inputs) == 1 and len(eff.outputs) == 2

    @given(braid_words(max_length=4))
    def test_effect_matches_circle_counts(self, bw):
        w = bw.to_slice_word()
        n = w.n_crossings
        for state in range(1 << n):
            for c in range(n):
                if (state >> c) & 1:
                    continue
                eff = crossing_effect(w, state, c)
                lo = len(w.resolve(state).circles)
                hi = len(w.resolve(state | (1 << c)).circles)
                if eff.kind == "merge":
                    assert hi == lo - 1
                    assert len(eff.inputs) == 2 and len(eff.outputs) == 1
                else:
                    assert hi == lo + 1
                    assert len(eff.inputs) == 1 and len(eff.outputs) == 2
                # passive circles are matched one to one
                assert len(eff.passive) == lo - len(eff.inputs)
