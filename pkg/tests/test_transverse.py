"""Distinguished transverse generators, gradings, and stabilization maps."""

from __future__ import annotations

import pytest
from hypothesis import given, settings

from askein.diagram import BraidWord, Cross, SliceWord, braid_word
from askein.exact import HomologyGroup
from askein.skein import ANNULAR, Gen, StateCube
from askein.transverse import (ALTERNATE, STANDARD, StabilizationMaps,
                               TransverseError, conjugation_check,
                               homology_f_min, is_positive_stabilization,
                               j_min_formula, oriented_state, psi_khovanov,
                               psi_skein, restricted_report, self_linking,
                               stabilization_maps, stabilization_report,
                               stabilize, transverse_report)

from conftest import braid_words

# words where the oriented resolution does NOT attain the extreme
# quantum grading: walking up from the all-zero state merges circles
NON_EXTREME = [
    BraidWord(2, (-1, -1)),
    BraidWord(2, (-1, -1, -1)),
    BraidWord(3, (1, -2, 1, -2)),
]
EXTREME = [
    BraidWord(3, (1, -2)),
    BraidWord(2, (1, 1, 1)),
    BraidWord(2, (-1, 1)),
    BraidWord(3, ()),
]


class TestDistinguishedGenerator:
    def test_flagship_values(self, flagship):
        word = flagship.to_slice_word()
        assert self_linking(flagship) == -3
        assert oriented_state(word) == 0b10
        psi = psi_skein(word)
        assert psi == Gen(0b10, 0)
        assert psi == psi_khovanov(word)
        assert StateCube(word).grading(psi) == (0, -3, -3)

    def test_j_min_formula_frozen(self):
        # three negative crossings on two strands: the all-zero state has
        # three circles, so the least quantum grading sits well below sl
        word = braid_word(2, [-1, -1, -1])
        assert j_min_formula(word) == -9
        assert self_linking(BraidWord(2, (-1, -1, -1))) == -5

    @given(braid_words())
    def test_oriented_state_bits(self, bw):
        word = bw.to_slice_word()
        alpha = oriented_state(word)
        for c, sign in enumerate(word.crossing_signs):
            assert ((alpha >> c) & 1) == (1 if sign < 0 else 0)


class TestTransverseReport:
    def test_flagship_full_report(self, flagship):
        rep = transverse_report(flagship, deep=True)
        assert rep.ok and rep.failed_checks() == []
        assert rep.sl == -3
        assert rep.gr_psi_sk == (0, -3, -3)
        assert rep.gr_psi_kh == (0, -3)
        assert rep.oriented_circle_count == 3
        assert rep.zero_state_circle_count == 2
        assert rep.f_min_at_sl == -3 == rep.f_min_global
        assert rep.s_extreme == [rep.psi_sk] == rep.s_global
        assert rep.j_min == -3 == rep.j_min_enumerated
        assert rep.extreme_bucket_size == 1
        assert rep.oriented_extreme
        for ring in ("Z", "Z2"):
            assert rep.fh_min_at_sl[ring] == -3
            assert rep.fh_min_global[ring] == -3
            assert rep.extreme_group[ring] == "Z"
            assert rep.psi_class_nonzero[ring]

    def test_flagship_to_dict(self, flagship):
        d = transverse_report(flagship).to_dict()
        assert d["oriented_state"] == "01"
        assert d["psi_skein"]["labels"] == ["v-", "v-", "v-"]
        assert d["psi_skein"]["q"] == -3 and d["psi_skein"]["f"] == -3
        assert d["ok"] is True

    @pytest.mark.parametrize("bw", NON_EXTREME, ids=str)
    def test_non_extreme_words(self, bw):
        rep = transverse_report(bw, deep=True)
        assert rep.ok, rep.failed_checks()
        assert not rep.oriented_extreme
        assert rep.j_min < rep.sl
        assert rep.extreme_bucket_size == 0
        # the distinguished facts survive: least winding grading still -b
        b = bw.strands
        assert rep.f_min_global == -b
        assert rep.s_global == [rep.psi_sk]
        for ring in ("Z", "Z2"):
            assert rep.fh_min_global[ring] == -b
            assert rep.extreme_group[ring] == "Z"
            assert rep.psi_class_nonzero[ring]

    @pytest.mark.parametrize("bw", EXTREME, ids=str)
    def test_extreme_words(self, bw):
        rep = transverse_report(bw, deep=False)
        assert rep.ok, rep.failed_checks()
        assert rep.oriented_extreme
        assert rep.j_min == rep.sl
        assert rep.extreme_bucket_size == 1

    @given(braid_words(max_strands=3, max_length=4))
    @settings(max_examples=25)
    def test_report_ok_on_random_braids(self, bw):
        rep = transverse_report(bw, deep=False)
        assert rep.ok, rep.failed_checks()
        assert rep.j_min == rep.j_min_enumerated
        assert (rep.j_min == rep.sl) == rep.oriented_extreme

    def test_rejects_slice_words(self):
        word = SliceWord(0, [])
        with pytest.raises(TransverseError):
            transverse_report(word)

    def test_restricted_report(self):
        word = SliceWord(2, [Cross(1, 1)])
        rep = restricted_report(word)
        assert rep.j_min == rep.j_min_enumerated
        assert rep.to_dict()["restricted"] is True

    def test_homology_f_min(self, flagship):
        word = flagship.to_slice_word()
        assert homology_f_min(word, q=-3) == -3
        assert homology_f_min(word) == -3
        assert homology_f_min(word, q=999) is None


class TestStabilization:
    def test_stabilize_appends_positive_crossing(self):
        assert stabilize(BraidWord(2, (1, -1))) == BraidWord(3, (1, -1, 2))
        assert is_positive_stabilization(BraidWord(2, (1, -1)),
                                         BraidWord(3, (1, -1, 2)))
        assert not is_positive_stabilization(BraidWord(2, (1, -1)),
                                             BraidWord(3, (1, -1, -2)))

    @pytest.mark.parametrize("bw", EXTREME + NON_EXTREME, ids=str)
    def test_standard_report_ok(self, bw):
        rep = stabilization_report(bw)
        assert rep.ok, rep.to_dict()
        assert rep.domain_closed
        assert rep.phi_s_chain_map_on_domain
        assert rep.phi_d_chain_map
        assert rep.grading_shift_ok
        assert rep.psi_forward and rep.psi_backward
        assert rep.round_trip_on_domain
        assert rep.extreme_iso
        assert rep.extreme_source_size == 1 == rep.extreme_target_size

    @pytest.mark.parametrize("bw", [BraidWord(2, (1,)), BraidWord(3, (1, -2)),
                                    BraidWord(2, (-1, -1))], ids=str)
    def test_surgery_and_generator_methods_agree(self, bw):
        fast = stabilization_report(bw, method="surgeries")
        slow = stabilization_report(bw, method="generators")
        keys = ["domain_closed", "phi_s_chain_map_on_domain",
                "phi_d_chain_map", "grading_shift_ok", "psi_forward",
                "psi_backward", "round_trip_on_domain", "extreme_iso", "ok"]
        fd, sd = fast.to_dict(), slow.to_dict()
        assert {k: fd[k] for k in keys} == {k: sd[k] for k in keys}
        assert fd["phi_s_defects_off_domain"] is None
        assert sd["phi_s_defects_off_domain"] >= 0

    def test_alternate_variant_fails_globally_but_agrees_on_extreme(self):
        """The alternative one-to-two splitting map commutes with the
        differential only on the gated subcomplex; off it the failure is
        real, while the extreme buckets still match the standard map."""
        rep = stabilization_report(BraidWord(2, (1,)), variant=ALTERNATE)
        assert not rep.phi_d_chain_map
        assert not rep.ok
        assert rep.phi_s_chain_map_on_domain
        assert rep.round_trip_on_domain
        assert rep.extreme_iso

    def test_standard_reports_alternate_extreme_agreement(self, flagship):
        rep = stabilization_report(flagship)
        assert rep.to_dict()["alternate_agrees_on_extreme"] is True

    def test_gated_map_not_chain_map_off_domain(self):
        """On the whole complex the gated stabilization map fails to be a
        chain map: a site-plus generator can merge to a site-minus one."""
        rep = stabilization_report(BraidWord(2, (1,)), method="generators")
        assert rep.phi_s_defects_off_domain > 0
        assert rep.phi_s_chain_map_on_domain

    def test_maps_object(self, flagship):
        maps = stabilization_maps(flagship)
        assert isinstance(maps, StabilizationMaps)
        big = stabilize(flagship)
        psi_small = psi_skein(flagship.to_slice_word())
        psi_big = psi_skein(big.to_slice_word())
        image = maps.phi_s(psi_small)
        assert list(image) == [psi_big]
        back = maps.phi_d(psi_big)
        assert list(back) == [psi_small]


class TestConjugation:
    def test_equal_pair(self):
        verdict = conjugation_check(BraidWord(3, (1, -2)),
                                    BraidWord(3, (-2, 1)))
        assert verdict.tables_equal
        assert verdict.psi_gradings_equal
        assert verdict.first_difference is None

    def test_negative_control(self, trefoil):
        verdict = conjugation_check(trefoil, BraidWord(2, (1,)))
        assert not verdict.tables_equal
        assert verdict.first_difference is not None
