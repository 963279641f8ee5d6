"""Transverse braid invariants and positive-stabilization chain maps.

A closed braid on ``b`` strands in the annulus represents a transverse
link.  Its *self-linking number* is ``sl = -b + n_plus - n_minus``.  The
*oriented resolution* picks, at every crossing, the smoothing compatible
with the upward strand orientation; its state bitmask has bit ``i`` set
exactly when crossing ``i`` is negative.  Labeling every circle of the
oriented resolution with a minus gives a distinguished generator

* ``psi_skein`` in gradings ``(h, q, f) = (0, sl, -b)`` of the annular
  complex, and
* ``psi_khovanov`` (the same enhanced state) in gradings ``(0, sl)`` of
  the plain complex.

Both are cocycles.  Across all enhanced states, ``f = -b`` is attained
only by ``psi_skein``, and the minimum quantum grading is
``j_min = n_plus - 2*n_minus - |C(all-zero state)|``.  Whether ``j_min``
equals ``sl`` depends on the braid word: the two agree exactly when the
oriented resolution has ``|C(all-zero)| + n_minus`` circles, i.e. when
each 0-to-1 smoothing change on the way from the all-zero state splits a
circle.  Words in which such a change *merges* circles instead (the
closure of ``sigma_1^-3`` on two strands is the smallest example: ``sl =
-5`` but ``j_min = -9``) have ``j_min < sl``, and then no generator at
all sits in the ``(j_min, -b)`` bucket.  The three conditions -- the
circle-count identity, ``j_min = sl``, and the ``(j_min, -b)`` bucket
being the singleton ``{psi_skein}`` -- are equivalent for every braid,
and that equivalence is what :func:`transverse_report` verifies; the
truth value itself is reported as ``oriented_extreme``.
:func:`transverse_report` computes and cross-checks all of these, at the
chain level and (optionally) in homology over Z and Z/2.

Stabilization.  The positive stabilization of a braid appends strand
``b + 1`` and a positive crossing between strands ``b`` and ``b + 1``.
:class:`StabilizationMaps` implements the stabilization map ``phi_s``
(send a generator to itself with the new circle labeled minus) and the
destabilization map ``phi_d`` (drop a minus-labeled new circle).

Exactness caveat, verified by :func:`stabilization_report` and frozen in
the test suite: ``phi_s`` gated to vanish on generators whose *site
circle* (the circle through the outermost seam strand) carries a plus
label is **not** a chain map on the whole complex -- a site-plus
generator can flow to a site-minus one (for example two oppositely
labeled winding circles merging into ``w-``), which the gate kills on
one side of the square only.  The span of site-minus generators is,
however, closed under the differential; on that subcomplex ``phi_s`` is
an exact chain map, ``phi_d . phi_s`` is the identity, and the extreme
``(q, f) = (sl, -b)`` buckets are matched isomorphically with
``psi_skein`` corresponding to ``psi_skein`` of the stabilized braid.
``phi_d`` is an honest chain map on the full stabilized complex: the
only differential term leaving the new-crossing-unresolved part merges
the new circle into the site circle, and every such output is killed by
the ``u = v+`` gate or lands in the new-crossing-resolved part, which
``phi_d`` annihilates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .bridge import f_min as chain_f_min
from .diagram import BraidWord, DiagramError, SliceWord
from .exact import HomologyGroup
from .skein import (ANNULAR, PLAIN, Gen, GradedComplex, StateCube,
                    _merge_terms, _split_terms, label_names)

__all__ = [
    "STANDARD",
    "ALTERNATE",
    "TransverseError",
    "TransverseReport",
    "RestrictedReport",
    "oriented_state",
    "psi_skein",
    "psi_khovanov",
    "self_linking",
    "j_min_formula",
    "homology_f_min",
    "transverse_report",
    "restricted_report",
    "stabilize",
    "is_positive_stabilization",
    "StabilizationMaps",
    "StabilizationReport",
    "stabilization_maps",
    "stabilization_report",
    "ConjugationVerdict",
    "conjugation_check",
]

STANDARD = "standard"
ALTERNATE = "alternate"


class TransverseError(ValueError):
    """Raised for inputs outside the transverse layer's preconditions."""


# ---------------------------------------------------------------------------
# oriented resolution and distinguished generators
# ---------------------------------------------------------------------------


def oriented_state(word: SliceWord) -> int:
    """State of the orientation-compatible resolution: bit i = 1 iff
    crossing i is negative."""
    mask = 0
    for c, sign in enumerate(word.crossing_signs):
        if sign < 0:
            mask |= 1 << c
    return mask


def self_linking(braid: BraidWord) -> int:
    word = braid.to_slice_word()
    return -braid.strands + word.n_plus - word.n_minus


def psi_skein(word: SliceWord) -> Gen:
    """All-minus labeling of the oriented resolution."""
    return Gen(oriented_state(word), 0)


def psi_khovanov(word: SliceWord) -> Gen:
    """The same enhanced state, viewed in the plain complex."""
    return psi_skein(word)


def j_min_formula(word: SliceWord) -> int:
    """``n_plus - 2*n_minus - |C(all-zero state)|``: the least quantum
    grading, attained by the all-minus labeling of the all-zero state."""
    return word.n_plus - 2 * word.n_minus - len(word.resolve(0).circles)


def _is_cocycle(cube: StateCube, gen: Gen, mode: str) -> bool:
    return not any(cube.differential(gen, mode).values())


def homology_f_min(word: SliceWord, q: Optional[int] = None, ring: str = "Z",
                   complex_: Optional[GradedComplex] = None) -> Optional[int]:
    """Least winding grading with nonvanishing annular homology.

    Restricted to quantum grading ``q`` when given.  ``None`` when no
    (matching) homology group is nonzero.
    """
    gc = complex_ or GradedComplex(StateCube(word), ANNULAR, check=False)
    fs = [key[2] for key, grp in gc.homology(ring).items()
          if not grp.is_trivial() and (q is None or key[1] == q)]
    return min(fs) if fs else None


def _gen_json(cube: StateCube, gen: Gen) -> Dict[str, object]:
    h, q, f = cube.grading(gen)
    return {
        "state": "".join(str((gen.state >> c) & 1) for c in range(cube.n)),
        "labels": list(label_names(cube, gen)),
        "h": h,
        "q": q,
        "f": f,
    }


# ---------------------------------------------------------------------------
# transverse report
# ---------------------------------------------------------------------------


@dataclass
class TransverseReport:
    """Chain-level (and optionally homology-level) transverse data."""

    braid: BraidWord
    sl: int
    alpha_o: int
    psi_sk: Gen
    psi_kh: Gen
    gr_psi_sk: Tuple[int, int, int]
    gr_psi_kh: Tuple[int, int]
    oriented_circle_count: int
    zero_state_circle_count: int
    psi_sk_cocycle: bool
    psi_kh_cocycle: bool
    f_min_at_sl: int
    f_min_global: int
    s_extreme: List[Gen]
    s_global: List[Gen]
    j_min: int
    j_min_enumerated: int
    extreme_bucket_size: int
    oriented_extreme: bool
    checks: Dict[str, bool]
    fh_min_at_sl: Dict[str, Optional[int]] = field(default_factory=dict)
    fh_min_global: Dict[str, Optional[int]] = field(default_factory=dict)
    extreme_group: Dict[str, str] = field(default_factory=dict)
    psi_class_nonzero: Dict[str, bool] = field(default_factory=dict)
    _cube: Optional[StateCube] = field(default=None, repr=False, compare=False)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failed_checks(self) -> List[str]:
        return [name for name, good in sorted(self.checks.items()) if not good]

    def to_dict(self) -> Dict[str, object]:
        cube = self._cube or StateCube(self.braid.to_slice_word())
        out: Dict[str, object] = {
            "strands": self.braid.strands,
            "letters": list(self.braid.letters),
            "sl": self.sl,
            "oriented_state": _gen_json(cube, self.psi_sk)["state"],
            "psi_skein": _gen_json(cube, self.psi_sk),
            "psi_khovanov": {
                "state": _gen_json(cube, self.psi_kh)["state"],
                "labels": ["x-"] * self.oriented_circle_count,
                "h": self.gr_psi_kh[0],
                "q": self.gr_psi_kh[1],
            },
            "oriented_circle_count": self.oriented_circle_count,
            "zero_state_circle_count": self.zero_state_circle_count,
            "psi_sk_cocycle": self.psi_sk_cocycle,
            "psi_kh_cocycle": self.psi_kh_cocycle,
            "f_min_at_sl": self.f_min_at_sl,
            "f_min": self.f_min_global,
            "S_extreme": [_gen_json(cube, g) for g in self.s_extreme],
            "S_f_min": [_gen_json(cube, g) for g in self.s_global],
            "j_min": self.j_min,
            "j_min_enumerated": self.j_min_enumerated,
            "extreme_bucket_size": self.extreme_bucket_size,
            "oriented_extreme": self.oriented_extreme,
            "checks": dict(sorted(self.checks.items())),
            "ok": self.ok,
        }
        if self.fh_min_global:
            out["fh_min_at_sl"] = self.fh_min_at_sl
            out["fh_min"] = self.fh_min_global
            out["extreme_group"] = self.extreme_group
            out["psi_class_nonzero"] = self.psi_class_nonzero
        return out


def transverse_report(braid: BraidWord, deep: bool = True) -> TransverseReport:
    """Compute the transverse data of a closed braid and verify it.

    Chain-level fields are always computed.  With ``deep=True`` the
    annular homology over Z and Z/2 is computed as well, yielding the
    homological minima, the extreme-bucket group, and the (non)vanishing
    of the class of ``psi_skein``.
    """
    if not isinstance(braid, BraidWord):
        raise TransverseError("transverse_report needs a braid word; "
                              "use restricted_report for general diagrams")
    word = braid.to_slice_word()
    b = braid.strands
    cube = StateCube(word)
    sl = self_linking(braid)
    alpha = oriented_state(word)
    psi = Gen(alpha, 0)

    res_o = word.resolve(alpha)
    res_0 = word.resolve(0)
    gr_sk = cube.grading(psi)

    q_min = None
    f_min_all = None
    f_at_sl: Optional[int] = None
    s_extreme: List[Gen] = []
    s_global: List[Gen] = []
    jmin = j_min_formula(word)
    extreme_size = 0
    for gen in cube.generators():
        h, q, f = cube.grading(gen)
        q_min = q if q_min is None else min(q_min, q)
        f_min_all = f if f_min_all is None else min(f_min_all, f)
        if q == sl and (f_at_sl is None or f < f_at_sl):
            f_at_sl = f
        if f == -b:
            s_global.append(gen)
            if q == sl:
                s_extreme.append(gen)
        if q == jmin and f == -b:
            extreme_size += 1
    if f_at_sl is None:
        raise TransverseError(f"no generators in quantum grading {sl}")

    # The oriented resolution minimizes the quantum grading exactly when
    # walking from the all-zero state to it splits a circle at every
    # step; words with, say, two equal negative letters merge circles
    # along the way instead, and then j_min < sl and the (j_min, -b)
    # bucket is empty.  The three facts are equivalent, so the verified
    # property is their agreement; the raw values stay in the report.
    oriented_extreme = (
        len(res_o.circles) == len(res_0.circles) + bin(alpha).count("1"))

    checks: Dict[str, bool] = {
        "psi_gradings": gr_sk == (0, sl, -b),
        "oriented_circles_equal_strands": len(res_o.circles) == b,
        "oriented_circles_all_nontrivial": res_o.n_nontrivial == len(res_o.circles),
        "psi_sk_cocycle": _is_cocycle(cube, psi, ANNULAR),
        "psi_kh_cocycle": _is_cocycle(cube, psi, PLAIN),
        "f_min_at_sl_is_minus_b": f_at_sl == -b,
        "f_min_is_minus_b": f_min_all == -b,
        "f_min_matches_helper": chain_f_min(cube, sl) == f_at_sl,
        "s_extreme_is_psi": s_extreme == [psi],
        "s_f_min_is_psi": s_global == [psi],
        "j_min_equals_enumerated": jmin == q_min,
        "j_min_sl_agreement": (jmin == sl) == oriented_extreme,
        "extreme_bucket_agreement":
            extreme_size <= 1 and (extreme_size == 1) == oriented_extreme,
    }

    report = TransverseReport(
        braid=braid, sl=sl, alpha_o=alpha, psi_sk=psi, psi_kh=psi,
        gr_psi_sk=gr_sk, gr_psi_kh=gr_sk[:2],
        oriented_circle_count=len(res_o.circles),
        zero_state_circle_count=len(res_0.circles),
        psi_sk_cocycle=checks["psi_sk_cocycle"],
        psi_kh_cocycle=checks["psi_kh_cocycle"],
        f_min_at_sl=f_at_sl, f_min_global=f_min_all,
        s_extreme=s_extreme, s_global=s_global,
        j_min=jmin, j_min_enumerated=q_min,
        extreme_bucket_size=extreme_size,
        oriented_extreme=oriented_extreme,
        checks=checks, _cube=cube,
    )

    if deep:
        sk = GradedComplex(cube, ANNULAR, check=False)
        key = (sl, -b)
        bucket = sk.buckets.get(key)
        pos = bucket.pos[psi] if bucket and psi in bucket.pos else None
        for ring in ("Z", "Z2"):
            report.fh_min_at_sl[ring] = homology_f_min(word, q=sl, ring=ring,
                                                       complex_=sk)
            report.fh_min_global[ring] = homology_f_min(word, ring=ring,
                                                        complex_=sk)
            checks[f"fh_min_at_sl_{ring}"] = report.fh_min_at_sl[ring] == -b
            checks[f"fh_min_{ring}"] = report.fh_min_global[ring] == -b
            nonzero = False
            group_str = "0"
            if pos is not None:
                n_h0 = len(bucket.gens.get(0, []))
                if ring == "Z":
                    pres = sk.presentation(key, 0)
                    group_str = str(pres.group)
                    vec = [0] * n_h0
                    vec[pos] = 1
                    nonzero = any(pres.class_of(vec))
                else:
                    quo = sk.gf2_quotient(key, 0)
                    group_str = str(HomologyGroup(quo.dim))
                    nonzero = quo.class_of(1 << pos) != 0
            report.extreme_group[ring] = group_str
            report.psi_class_nonzero[ring] = nonzero
            checks[f"psi_class_nonzero_{ring}"] = nonzero
            checks[f"extreme_group_rank_one_{ring}"] = group_str == "Z"
    return report


@dataclass
class RestrictedReport:
    """Quantum-grading extremes for a general annular diagram.

    Non-braid slice words have no self-linking number or distinguished
    transverse class, but the least quantum grading is still computed by
    the all-zero-state formula and still bounds every generator.
    """

    word: SliceWord
    j_min: int
    j_min_enumerated: int
    f_min_global: int
    zero_state_circle_count: int
    oriented_gen: Gen
    gr_oriented: Tuple[int, int, int]
    oriented_cocycle: bool
    checks: Dict[str, bool]
    fh_min_global: Dict[str, Optional[int]] = field(default_factory=dict)
    _cube: Optional[StateCube] = field(default=None, repr=False, compare=False)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> Dict[str, object]:
        cube = self._cube or StateCube(self.word)
        out: Dict[str, object] = {
            "restricted": True,
            "crossings": self.word.n_crossings,
            "j_min": self.j_min,
            "j_min_enumerated": self.j_min_enumerated,
            "f_min": self.f_min_global,
            "zero_state_circle_count": self.zero_state_circle_count,
            "oriented_generator": _gen_json(cube, self.oriented_gen),
            "oriented_cocycle": self.oriented_cocycle,
            "checks": dict(sorted(self.checks.items())),
            "ok": self.ok,
        }
        if self.fh_min_global:
            out["fh_min"] = self.fh_min_global
        return out


def restricted_report(word: SliceWord, deep: bool = True) -> RestrictedReport:
    """Extreme-grading statistics for an arbitrary slice word."""
    cube = StateCube(word)
    jmin = j_min_formula(word)
    q_min = None
    f_min_all = None
    for gen in cube.generators():
        _, q, f = cube.grading(gen)
        q_min = q if q_min is None else min(q_min, q)
        f_min_all = f if f_min_all is None else min(f_min_all, f)
    psi = psi_skein(word)
    checks = {
        "j_min_equals_enumerated": jmin == q_min,
        "oriented_cocycle": _is_cocycle(cube, psi, ANNULAR),
    }
    report = RestrictedReport(
        word=word, j_min=jmin, j_min_enumerated=q_min,
        f_min_global=f_min_all,
        zero_state_circle_count=len(word.resolve(0).circles),
        oriented_gen=psi, gr_oriented=cube.grading(psi),
        oriented_cocycle=checks["oriented_cocycle"],
        checks=checks, _cube=cube,
    )
    if deep:
        gc = GradedComplex(cube, ANNULAR, check=False)
        for ring in ("Z", "Z2"):
            report.fh_min_global[ring] = homology_f_min(word, ring=ring,
                                                        complex_=gc)
    return report


# ---------------------------------------------------------------------------
# positive stabilization
# ---------------------------------------------------------------------------


def stabilize(braid: BraidWord) -> BraidWord:
    """Positive stabilization: append strand ``b + 1`` and the positive
    crossing between strands ``b`` and ``b + 1``."""
    return BraidWord(braid.strands + 1, braid.letters + (braid.strands,))


def is_positive_stabilization(braid: BraidWord, candidate: BraidWord) -> bool:
    return candidate == stabilize(braid)


class StabilizationMaps:
    """The stabilization/destabilization maps between annular complexes.

    ``phi_s`` sends a generator of the smaller complex to the same
    enhanced state of the stabilized diagram with the new circle labeled
    minus, and vanishes on generators whose site circle carries a plus
    (``variant=ALTERNATE`` instead sends a plus-labeled winding site
    circle to the signed two-term swap).  ``phi_d`` drops a minus-labeled
    new circle and vanishes otherwise (``variant=ALTERNATE`` additionally
    sends a plus-labeled new circle next to a minus-labeled winding site
    circle to the site circle relabeled plus).
    """

    def __init__(self, braid: BraidWord, stabilized: Optional[BraidWord] = None,
                 variant: str = STANDARD):
        if variant not in (STANDARD, ALTERNATE):
            raise TransverseError(f"unknown variant {variant!r}")
        if stabilized is not None and not is_positive_stabilization(braid, stabilized):
            raise TransverseError(
                f"{stabilized} is not the positive stabilization of {braid}")
        self.braid = braid
        self.stabilized = stabilize(braid)
        self.variant = variant
        self.word = braid.to_slice_word()
        self.stabilized_word = self.stabilized.to_slice_word()
        self.cube = StateCube(self.word)
        self.stabilized_cube = StateCube(self.stabilized_word)
        self.new_bit = 1 << (self.stabilized_cube.n - 1)
        self._maps: Dict[int, Tuple[Dict[int, int], int]] = {}

    # -- circle bookkeeping --------------------------------------------------

    def site_circle(self, state: int) -> int:
        """Circle of the small diagram through the outermost seam strand."""
        res = self.word.resolve(state)
        return res.circle_of_port[self.word.port(0, self.word.seam_strands)]

    def circle_map(self, state: int) -> Tuple[Dict[int, int], int]:
        """Old-to-new circle indices at ``state`` (new crossing bit 0),
        plus the index of the new strand's circle ``u``."""
        cached = self._maps.get(state)
        if cached is not None:
            return cached
        old, new = self.word, self.stabilized_word
        ro, rn = old.resolve(state), new.resolve(state)
        mapping: Dict[int, int] = {}
        for c in ro.circles:
            t, p = old.port_level_pos(c.walk[0][0])
            mapping[c.index] = rn.circle_of_port[new.port(t, p)]
        leftover = set(range(len(rn.circles))) - set(mapping.values())
        if len(mapping.values()) != len(set(mapping.values())) or len(leftover) != 1:
            raise AssertionError("stabilized resolution did not split off one circle")
        u = leftover.pop()
        if rn.circles[u].trivial:
            raise AssertionError("new strand's circle must wind")
        for i, j in mapping.items():
            if ro.circles[i].trivial != rn.circles[j].trivial:
                raise AssertionError("circle triviality changed under stabilization")
        self._maps[state] = (mapping, u)
        return mapping, u

    def in_domain(self, gen: Gen) -> bool:
        """Whether ``gen`` lies in the site-minus subcomplex."""
        return not (gen.labels >> self.site_circle(gen.state)) & 1

    def domain_generators(self) -> Iterable[Gen]:
        for gen in self.cube.generators():
            if self.in_domain(gen):
                yield gen

    # -- the maps --------------------------------------------------------------

    def phi_s(self, gen: Gen) -> Dict[Gen, int]:
        """Stabilization map term(s) of one generator."""
        mapping, u = self.circle_map(gen.state)
        site = self.site_circle(gen.state)
        pushed = 0
        for i, j in mapping.items():
            if (gen.labels >> i) & 1:
                pushed |= 1 << j
        if not (gen.labels >> site) & 1:
            return {Gen(gen.state, pushed): 1}
        if self.variant == ALTERNATE and not self.word.resolve(gen.state).circles[site].trivial:
            # plus winding site: signed swap with the new circle
            return {
                Gen(gen.state, pushed): 1,
                Gen(gen.state, (pushed & ~(1 << mapping[site])) | (1 << u)): -1,
            }
        return {}

    def phi_d(self, gen: Gen) -> Dict[Gen, int]:
        """Destabilization map term(s) of one stabilized generator."""
        if gen.state & self.new_bit:
            return {}
        mapping, u = self.circle_map(gen.state)
        pulled = 0
        for i, j in mapping.items():
            if (gen.labels >> j) & 1:
                pulled |= 1 << i
        if not (gen.labels >> u) & 1:
            return {Gen(gen.state, pulled): 1}
        if self.variant == ALTERNATE:
            site = self.site_circle(gen.state)
            if (not self.word.resolve(gen.state).circles[site].trivial
                    and not (pulled >> site) & 1):
                # minus winding site next to a plus new circle: flip the site
                return {Gen(gen.state, pulled | (1 << site)): 1}
        return {}

    # -- composition helpers ----------------------------------------------------

    def _push_differential(self, gen: Gen, cube: StateCube,
                           crossings=None) -> Dict[Gen, int]:
        return {g: c
                for g, c in cube.differential(gen, ANNULAR, crossings).items()
                if c}

    def compose_with_differential(self, gen: Gen, direction: str,
                                  fast: bool = True) -> Tuple[Dict[Gen, int], Dict[Gen, int]]:
        """(d . phi, phi . d) term dictionaries for one generator.

        With ``fast`` (the default) the destabilization direction skips
        work that vanishes for structural reasons: differentials only
        set state bits, so a generator with the new crossing resolved
        flows entirely inside the part that ``phi_d`` annihilates, and
        the new-crossing differential term of any other generator lands
        there too.  The slow path recomputes everything and is used by
        the tests to cross-check the shortcut.
        """
        if direction == "s":
            phi, src, dst = self.phi_s, self.cube, self.stabilized_cube
            src_crossings = None
        elif direction == "d":
            phi, src, dst = self.phi_d, self.stabilized_cube, self.cube
            if fast and gen.state & self.new_bit:
                return {}, {}
            src_crossings = range(self.cube.n) if fast else None
        else:
            raise ValueError(f"direction must be 's' or 'd', not {direction!r}")
        lhs: Dict[Gen, int] = {}
        for g2, c2 in phi(gen).items():
            for g3, c3 in self._push_differential(g2, dst).items():
                lhs[g3] = lhs.get(g3, 0) + c2 * c3
        rhs: Dict[Gen, int] = {}
        for g2, c2 in self._push_differential(gen, src, src_crossings).items():
            for g3, c3 in phi(g2).items():
                rhs[g3] = rhs.get(g3, 0) + c2 * c3
        return ({g: c for g, c in lhs.items() if c},
                {g: c for g, c in rhs.items() if c})


@dataclass
class StabilizationReport:
    """Exact verification record for one braid's stabilization maps."""

    braid: BraidWord
    stabilized: BraidWord
    variant: str
    domain_closed: bool
    phi_s_chain_map_on_domain: bool
    #: number of generators where the ungated map fails the chain-map
    #: identity (expected positive; ``None`` under ``method="surgeries"``,
    #: which does not enumerate them)
    phi_s_defects_off_domain: Optional[int]
    phi_d_chain_map: bool
    phi_d_checked: bool
    grading_shift_ok: bool
    psi_forward: bool
    psi_backward: bool
    round_trip_on_domain: bool
    extreme_source_size: int
    extreme_target_size: int
    extreme_iso: bool
    alternate_agrees_on_extreme: bool

    @property
    def ok(self) -> bool:
        return (self.domain_closed and self.phi_s_chain_map_on_domain
                and (self.phi_d_chain_map or not self.phi_d_checked)
                and self.grading_shift_ok and self.psi_forward
                and self.psi_backward and self.round_trip_on_domain
                and self.extreme_iso and self.alternate_agrees_on_extreme)

    def to_dict(self) -> Dict[str, object]:
        return {
            "strands": self.braid.strands,
            "letters": list(self.braid.letters),
            "stabilized_letters": list(self.stabilized.letters),
            "variant": self.variant,
            "domain_closed": self.domain_closed,
            "phi_s_chain_map_on_domain": self.phi_s_chain_map_on_domain,
            "phi_s_defects_off_domain": self.phi_s_defects_off_domain,
            "phi_d_chain_map": self.phi_d_chain_map if self.phi_d_checked else None,
            "grading_shift_ok": self.grading_shift_ok,
            "psi_forward": self.psi_forward,
            "psi_backward": self.psi_backward,
            "round_trip_on_domain": self.round_trip_on_domain,
            "extreme_source_size": self.extreme_source_size,
            "extreme_target_size": self.extreme_target_size,
            "extreme_iso": self.extreme_iso,
            "alternate_agrees_on_extreme": self.alternate_agrees_on_extreme,
            "ok": self.ok,
        }


def stabilization_maps(braid: BraidWord, stabilized: Optional[BraidWord] = None,
                       variant: str = STANDARD) -> StabilizationMaps:
    return StabilizationMaps(braid, stabilized, variant)


def _surgery_level_chain_checks(maps: StabilizationMaps) -> Tuple[bool, bool, bool]:
    """(domain_closed, phi_s chain map on domain, phi_d chain map).

    Reduces the entrywise chain-map identities to one check per surgery,
    which is complete because both differentials are sums of the same
    surgery rules with matching signs:

    * every old-crossing surgery of the stabilized cube must equal the
      corresponding small-cube surgery conjugated by the circle
      correspondence, with the new circle riding passively -- then each
      old differential term matches termwise through ``phi_s``/``phi_d``
      (same rule inputs, same trivialities, same sign: the new crossing
      is the top state bit, so no old sign factor sees it);
    * the new-crossing surgery must merge the site circle with the new
      circle and produce no output on minus/minus input, killing the
      only differential direction that leaves the image of ``phi_s``
      (for ``phi_d``, those outputs resolve the new crossing and are
      annihilated);
    * rule outputs on site-minus inputs must again be site-minus, which
      closes the domain subcomplex and keeps images comparable.

    The per-generator path (``method="generators"``) verifies the same
    identities literally and is asserted equal in the tests.
    """
    cube, big = maps.cube, maps.stabilized_cube
    n = cube.n
    domain_closed = True
    s_ok = True
    d_ok = True
    for state in range(1 << n):
        src_map, u_src = maps.circle_map(state)
        res = cube.resolution(state)
        site = maps.site_circle(state)
        big_res = big.resolution(state)

        # the new crossing merges (site, u) and kills minus/minus input
        eff_new = big.effect(state, n)
        if eff_new.kind != "merge" or set(eff_new.inputs) != {src_map[site], u_src}:
            raise AssertionError("new crossing does not merge site and new circle")
        if _merge_terms(0, 0, res.circles[site].trivial, False, ANNULAR):
            s_ok = False

        for c in range(n):
            if (state >> c) & 1:
                continue
            tgt_map, u_tgt = maps.circle_map(state | (1 << c))
            eff = cube.effect(state, c)
            eff_big = big.effect(state, c)
            pushed_inputs = tuple(sorted(src_map[i] for i in eff.inputs))
            pushed_outputs = tuple(sorted(tgt_map[o] for o in eff.outputs))
            pushed_passive = {src_map[si]: tgt_map[di] for si, di in eff.passive}
            pushed_passive[u_src] = u_tgt
            if (eff_big.kind != eff.kind
                    or tuple(sorted(eff_big.inputs)) != pushed_inputs
                    or tuple(sorted(eff_big.outputs)) != pushed_outputs
                    or dict(eff_big.passive) != pushed_passive):
                s_ok = d_ok = False

            # site-minus inputs must produce site-minus outputs
            if site in eff.inputs:
                tgt_res = cube.resolution(state | (1 << c))
                site_tgt = maps.site_circle(state | (1 << c))
                if eff.kind == "merge":
                    i, j = eff.inputs
                    ti, tj = res.circles[i].trivial, res.circles[j].trivial
                    (o,) = eff.outputs
                    if o != site_tgt:
                        raise AssertionError("site lost under merge")
                    other_labels = (0, 1)
                    for y in other_labels:
                        x_pair = (0, y) if i == site else (y, 0)
                        for lab in _merge_terms(x_pair[0], x_pair[1], ti, tj, ANNULAR):
                            if lab:
                                domain_closed = False
                else:
                    (i,) = eff.inputs
                    oa, ob = eff.outputs
                    if site_tgt not in (oa, ob):
                        raise AssertionError("site lost under split")
                    for la, lb in _split_terms(
                            0, res.circles[i].trivial,
                            tgt_res.circles[oa].trivial,
                            tgt_res.circles[ob].trivial, ANNULAR):
                        site_lab = la if oa == site_tgt else lb
                        if site_lab:
                            domain_closed = False
            else:
                for si, di in eff.passive:
                    if si == site and di != maps.site_circle(state | (1 << c)):
                        raise AssertionError("site circle mistracked passively")
    return domain_closed, s_ok, d_ok


def stabilization_report(braid: BraidWord, variant: str = STANDARD,
                         check_phi_d: bool = True,
                         method: str = "surgeries") -> StabilizationReport:
    """Verify the stabilization maps of one braid exactly over Z.

    ``method="surgeries"`` (default) proves the chain-map identities by
    the per-surgery reduction of :func:`_surgery_level_chain_checks`;
    ``method="generators"`` composes the maps with the differentials
    generator by generator.  Both are exact; the tests assert they
    agree.  ``check_phi_d=False`` skips the destabilization direction
    (only meaningful for ``method="generators"``, where it is the most
    expensive sweep).

    The surgery reduction argues through the structure of the *standard*
    maps (in particular that dropped plus-labeled new circles ride
    passively on both sides), so the alternate variant always takes the
    generator path -- rightly so: its destabilization map genuinely
    fails the chain-map identity away from the extreme buckets, which
    only the literal composition detects.
    """
    if variant != STANDARD:
        method = "generators"
    maps = StabilizationMaps(braid, variant=variant)
    cube, big = maps.cube, maps.stabilized_cube

    grade_ok = True
    round_trip = True
    defects: Optional[int] = None
    if method == "surgeries":
        domain_closed, s_ok, d_ok = _surgery_level_chain_checks(maps)
        check_phi_d = True  # comes free with the surgery sweep
        for gen in maps.domain_generators():
            image = maps.phi_s(gen)
            h, q, f = cube.grading(gen)
            for tgt in image:
                if big.grading(tgt) != (h, q, f - 1):
                    grade_ok = False
            back: Dict[Gen, int] = {}
            for g2, c2 in image.items():
                for g3, c3 in maps.phi_d(g2).items():
                    back[g3] = back.get(g3, 0) + c2 * c3
            if {g: c for g, c in back.items() if c} != {gen: 1}:
                round_trip = False
    elif method == "generators":
        domain_closed = True
        s_ok = True
        defects = 0
        for gen in cube.generators():
            if maps.in_domain(gen):
                if any(not maps.in_domain(t)
                       for t in cube.differential(gen, ANNULAR)):
                    domain_closed = False
                lhs, rhs = maps.compose_with_differential(gen, "s")
                if lhs != rhs:
                    s_ok = False
                image = maps.phi_s(gen)
                h, q, f = cube.grading(gen)
                for tgt in image:
                    if big.grading(tgt) != (h, q, f - 1):
                        grade_ok = False
                back = {}
                for g2, c2 in image.items():
                    for g3, c3 in maps.phi_d(g2).items():
                        back[g3] = back.get(g3, 0) + c2 * c3
                if {g: c for g, c in back.items() if c} != {gen: 1}:
                    round_trip = False
            else:
                lhs, rhs = maps.compose_with_differential(gen, "s")
                if lhs != rhs:
                    defects += 1

        d_ok = True
        if check_phi_d:
            for state in range(1 << cube.n):  # bit-1 states hold structurally
                ncirc = len(big.resolution(state).circles)
                for labels in range(1 << ncirc):
                    gen = Gen(state, labels)
                    lhs, rhs = maps.compose_with_differential(gen, "d")
                    if lhs != rhs:
                        d_ok = False
                        break
                if not d_ok:
                    break
    else:
        raise TransverseError(f"unknown method {method!r}")

    sl = self_linking(braid)
    b = braid.strands
    psi = psi_skein(maps.word)
    psi2 = psi_skein(maps.stabilized_word)
    psi_fwd = maps.phi_s(psi) == {psi2: 1}
    psi_bwd = maps.phi_d(psi2) == {psi: 1}

    src_bucket = [g for g in cube.generators()
                  if cube.grading(g)[1:] == (sl, -b)]
    tgt_bucket = [g for g in big.generators()
                  if big.grading(g)[1:] == (sl, -b - 1)]
    fwd_images: Dict[Gen, Gen] = {}
    iso = True
    for g in src_bucket:
        img = maps.phi_s(g)
        if len(img) != 1 or next(iter(img.values())) != 1:
            iso = False
            break
        (tgt,) = img
        if tgt not in tgt_bucket or tgt in fwd_images.values():
            iso = False
            break
        fwd_images[g] = tgt
        if maps.phi_d(tgt) != {g: 1}:
            iso = False
            break
    if iso and len(fwd_images) != len(tgt_bucket):
        iso = False

    alt = StabilizationMaps(braid, variant=ALTERNATE)
    alt_ok = all(alt.phi_s(g) == maps.phi_s(g) for g in src_bucket)
    if alt_ok:
        alt_ok = all(alt.phi_d(t) == maps.phi_d(t) for t in tgt_bucket)

    return StabilizationReport(
        braid=braid, stabilized=maps.stabilized, variant=variant,
        domain_closed=domain_closed,
        phi_s_chain_map_on_domain=s_ok,
        phi_s_defects_off_domain=defects,
        phi_d_chain_map=d_ok, phi_d_checked=check_phi_d,
        grading_shift_ok=grade_ok,
        psi_forward=psi_fwd, psi_backward=psi_bwd,
        round_trip_on_domain=round_trip,
        extreme_source_size=len(src_bucket),
        extreme_target_size=len(tgt_bucket),
        extreme_iso=iso,
        alternate_agrees_on_extreme=alt_ok,
    )


# ---------------------------------------------------------------------------
# conjugation / braid isotopy comparison
# ---------------------------------------------------------------------------


@dataclass
class ConjugationVerdict:
    """Rank-level comparison of two braid words' annular homologies."""

    braid_a: BraidWord
    braid_b: BraidWord
    ring: str
    tables_equal: bool
    psi_gradings_equal: bool
    psi_class_nonzero_a: bool
    psi_class_nonzero_b: bool
    first_difference: Optional[Tuple[Tuple[int, int, int], str, str]]

    @property
    def equal(self) -> bool:
        return (self.tables_equal and self.psi_gradings_equal
                and self.psi_class_nonzero_a == self.psi_class_nonzero_b)

    def to_dict(self) -> Dict[str, object]:
        return {
            "braid_a": {"strands": self.braid_a.strands,
                        "letters": list(self.braid_a.letters)},
            "braid_b": {"strands": self.braid_b.strands,
                        "letters": list(self.braid_b.letters)},
            "ring": self.ring,
            "tables_equal": self.tables_equal,
            "psi_gradings_equal": self.psi_gradings_equal,
            "psi_class_nonzero": [self.psi_class_nonzero_a,
                                  self.psi_class_nonzero_b],
            "first_difference": (
                None if self.first_difference is None else {
                    "grading": list(self.first_difference[0]),
                    "left": self.first_difference[1],
                    "right": self.first_difference[2],
                }),
            "equal": self.equal,
        }


def conjugation_check(braid_a: BraidWord, braid_b: BraidWord,
                      ring: str = "Z") -> ConjugationVerdict:
    """Compare graded annular homology tables of two braid words.

    Conjugate or braid-isotopic words must produce identical tables and
    carry their distinguished classes in the same gradings; a mismatch
    is reported with the first differing grading.  The comparison is at
    rank level: the word-move chain equivalences themselves are not
    constructed.
    """
    verdicts = []
    for braid in (braid_a, braid_b):
        word = braid.to_slice_word()
        gc = GradedComplex(StateCube(word), ANNULAR, check=False)
        table = {key: str(grp) for key, grp in gc.homology(ring).items()}
        sl = self_linking(braid)
        b = braid.strands
        psi = psi_skein(word)
        bucket = gc.buckets.get((sl, -b))
        nonzero = False
        if bucket and psi in bucket.pos:
            pos = bucket.pos[psi]
            if ring == "Z":
                pres = gc.presentation((sl, -b), 0)
                vec = [0] * len(bucket.gens.get(0, []))
                vec[pos] = 1
                nonzero = any(pres.class_of(vec))
            else:
                nonzero = gc.gf2_quotient((sl, -b), 0).class_of(1 << pos) != 0
        verdicts.append((table, (0, sl, -b), nonzero))

    table_a, gr_a, nz_a = verdicts[0]
    table_b, gr_b, nz_b = verdicts[1]
    first_diff = None
    for key in sorted(set(table_a) | set(table_b)):
        left = table_a.get(key, "0")
        right = table_b.get(key, "0")
        if left != right:
            first_diff = (key, left, right)
            break
    return ConjugationVerdict(
        braid_a=braid_a, braid_b=braid_b, ring=ring,
        tables_equal=first_diff is None,
        psi_gradings_equal=gr_a == gr_b,
        psi_class_nonzero_a=nz_a, psi_class_nonzero_b=nz_b,
        first_difference=first_diff,
    )
