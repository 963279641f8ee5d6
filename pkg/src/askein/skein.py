"""Tri-graded skein cochain complexes over the annulus, and their homology.

Generators ("enhanced states") pair a resolution state with a labeling of
its circles: nontrivial circles carry v+/v-, trivial circles carry w+/w-.
A labeling is stored as a bitmask over canonical circle indices, bit = 1
meaning the plus label.  Three integer gradings are attached:

* ``h`` (homological) = |state| - n_-
* ``q`` (quantum)     = n_+ - 2 n_- + |state| + #plus - #minus
* ``f`` (homotopical) = #v_+ - #v_-   (nontrivial circles only)

The differential raises ``h`` by one and, in annular mode, preserves both
``q`` and ``f``; in plain mode (the ordinary Khovanov complex on the same
generators, triviality forgotten) it preserves ``q`` and drops ``f`` by 0
or 2.  Signs follow the standard assignment: the term at crossing ``i``
carries (-1)^(number of set state bits below ``i``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from .diagram import MergeOrSplit, Resolution, SliceWord, crossing_effect
from .exact import (
    Gf2Quotient,
    HomologyGroup,
    HomologyPresentation,
    IntMatrix,
    gf2_rank,
    homology_presentation,
)

__all__ = [
    "Gen",
    "StateCube",
    "GradedComplex",
    "skein_complex",
    "khovanov_complex",
    "skein_homology",
    "khovanov_homology",
    "d_squared_is_zero",
    "faces_commute",
    "label_names",
    "generator_from_labels",
    "homology_rows",
    "LabelError",
]

ANNULAR = "annular"
PLAIN = "plain"


class LabelError(ValueError):
    """A labeling that does not match circle triviality."""


class Gen(NamedTuple):
    """Enhanced state: resolution state plus label bitmask (1 = plus)."""

    state: int
    labels: int


def _popcount(x: int) -> int:
    return bin(x).count("1")


# ---------------------------------------------------------------------------
# label rules
# ---------------------------------------------------------------------------


def _merge_terms(x: int, y: int, x_triv: bool, y_triv: bool, mode: str) -> List[int]:
    """Output labels (coefficient +1 each) for merging labeled circles x, y."""
    if mode == PLAIN:
        x_triv = y_triv = True
    if x_triv and y_triv:
        # trivial + trivial -> trivial
        if x and y:
            return [1]
        if x or y:
            return [0]
        return []
    if x_triv != y_triv:
        # trivial joins nontrivial -> nontrivial; the trivial label gates
        gate = x if x_triv else y
        keep = y if x_triv else x
        return [keep] if gate else []
    # nontrivial + nontrivial -> trivial: opposite labels close to w-
    return [0] if x != y else []


def _split_terms(x: int, in_triv: bool, a_triv: bool, b_triv: bool,
                 mode: str) -> List[Tuple[int, int]]:
    """Output label pairs for splitting a labeled circle x into (a, b)."""
    if mode == PLAIN:
        in_triv = a_triv = b_triv = True
    if in_triv and a_triv and b_triv:
        return [(1, 0), (0, 1)] if x else [(0, 0)]
    if not in_triv:
        # nontrivial sheds a trivial circle labeled w-; its own label rides on
        if a_triv and not b_triv:
            return [(0, x)]
        if b_triv and not a_triv:
            return [(x, 0)]
        raise AssertionError("nontrivial split must produce exactly one trivial child")
    # trivial -> two nontrivial
    return [(1, 0), (0, 1)] if x else []


# ---------------------------------------------------------------------------
# the cube of resolutions with labels
# ---------------------------------------------------------------------------


class StateCube:
    """All resolutions of a diagram plus the labeled differential terms.

    Shared by the annular and plain complexes, so resolutions and surgery
    classifications are computed once per diagram.
    """

    def __init__(self, word: SliceWord,
                 sign_order: Optional[Sequence[int]] = None):
        self.word = word
        self.n = word.n_crossings
        self.n_plus = word.n_plus
        self.n_minus = word.n_minus
        self._effects: Dict[Tuple[int, int], MergeOrSplit] = {}
        if sign_order is None:
            self.sign_order: Tuple[int, ...] = tuple(range(self.n))
            self._sign_mask = [(1 << c) - 1 for c in range(self.n)]
        else:
            # Any total order of the crossings yields anticommuting faces,
            # hence an isomorphic complex; the sign at crossing c counts the
            # set bits among crossings preceding c in the order.
            order = tuple(sign_order)
            if sorted(order) != list(range(self.n)):
                raise LabelError(
                    f"sign order must permute 0..{self.n - 1}, got {order!r}")
            self.sign_order = order
            masks = [0] * self.n
            acc = 0
            for c in order:
                masks[c] = acc
                acc |= 1 << c
            self._sign_mask = masks

    def resolution(self, state: int) -> Resolution:
        return self.word.resolve(state)

    def effect(self, state: int, crossing: int) -> MergeOrSplit:
        key = (state, crossing)
        eff = self._effects.get(key)
        if eff is None:
            eff = crossing_effect(self.word, state, crossing)
            self._effects[key] = eff
        return eff

    # -- generators ---------------------------------------------------------

    def generators(self) -> Iterator[Gen]:
        for state in range(1 << self.n):
            ncirc = len(self.resolution(state).circles)
            for labels in range(1 << ncirc):
                yield Gen(state, labels)

    def generator_count(self) -> int:
        return sum(1 << len(self.resolution(s).circles) for s in range(1 << self.n))

    def grading(self, gen: Gen) -> Tuple[int, int, int]:
        r = self.resolution(gen.state)
        ncirc = len(r.circles)
        plus = _popcount(gen.labels)
        weight = _popcount(gen.state)
        h = weight - self.n_minus
        q = self.n_plus - 2 * self.n_minus + weight + 2 * plus - ncirc
        nt_plus = _popcount(gen.labels & r.nontrivial_mask)
        f = 2 * nt_plus - r.n_nontrivial
        return (h, q, f)

    # -- differential -------------------------------------------------------

    def differential(self, gen: Gen, mode: str = ANNULAR,
                     crossings: Optional[Sequence[int]] = None) -> Dict[Gen, int]:
        """Sparse differential of one generator: target -> coefficient.

        ``crossings`` restricts the sum to the given crossing indices
        (used to isolate one cube direction or exclude another).
        """
        state, labels = gen
        src = self.resolution(state)
        out: Dict[Gen, int] = {}
        for c in (range(self.n) if crossings is None else crossings):
            if (state >> c) & 1:
                continue
            sign = -1 if _popcount(state & self._sign_mask[c]) & 1 else 1
            eff = self.effect(state, c)
            tgt_state = state | (1 << c)
            tgt_res = self.resolution(tgt_state)
            base = 0
            for si, di in eff.passive:
                if (labels >> si) & 1:
                    base |= 1 << di
            if eff.kind == "merge":
                i, j = eff.inputs
                (o,) = eff.outputs
                terms = _merge_terms(
                    (labels >> i) & 1,
                    (labels >> j) & 1,
                    src.circles[i].trivial,
                    src.circles[j].trivial,
                    mode,
                )
                for lab in terms:
                    tgt = Gen(tgt_state, base | (lab << o))
                    out[tgt] = out.get(tgt, 0) + sign
            else:
                (i,) = eff.inputs
                oa, ob = eff.outputs
                pairs = _split_terms(
                    (labels >> i) & 1,
                    src.circles[i].trivial,
                    tgt_res.circles[oa].trivial,
                    tgt_res.circles[ob].trivial,
                    mode,
                )
                for la, lb in pairs:
                    tgt = Gen(tgt_state, base | (la << oa) | (lb << ob))
                    out[tgt] = out.get(tgt, 0) + sign
        return {g: v for g, v in out.items() if v}


# ---------------------------------------------------------------------------
# textual labels
# ---------------------------------------------------------------------------


def label_names(cube: StateCube, gen: Gen) -> Tuple[str, ...]:
    """Labels of a generator as strings, one per canonical circle."""
    r = cube.resolution(gen.state)
    names = []
    for c in r.circles:
        plus = (gen.labels >> c.index) & 1
        letter = "w" if c.trivial else "v"
        names.append(f"{letter}{'+' if plus else '-'}")
    return tuple(names)


def generator_from_labels(word: SliceWord, state: int,
                          labels: Sequence[str]) -> Gen:
    """Build a generator from textual labels, validating triviality."""
    r = word.resolve(state)
    if len(labels) != len(r.circles):
        raise LabelError(
            f"state {state} has {len(r.circles)} circles, got {len(labels)} labels")
    mask = 0
    for circle, name in zip(r.circles, labels):
        if name not in ("v+", "v-", "w+", "w-"):
            raise LabelError(f"unknown label {name!r}")
        expect = "w" if circle.trivial else "v"
        if name[0] != expect:
            kind = "trivial" if circle.trivial else "nontrivial"
            raise LabelError(
                f"circle {circle.index} is {kind}; label {name!r} does not apply")
        if name[1] == "+":
            mask |= 1 << circle.index
    return Gen(state, mask)


# ---------------------------------------------------------------------------
# graded complexes
# ---------------------------------------------------------------------------


@dataclass
class Bucket:
    """One (q, f) (annular) or (q,) (plain) block of the complex."""

    key: Tuple[int, ...]
    gens: Dict[int, List[Gen]] = field(default_factory=dict)
    pos: Dict[Gen, int] = field(default_factory=dict)

    def add(self, h: int, gen: Gen) -> None:
        row = self.gens.setdefault(h, [])
        self.pos[gen] = len(row)
        row.append(gen)

    def dims(self) -> Dict[int, int]:
        return {h: len(v) for h, v in self.gens.items()}


class GradedComplex:
    """A cube complex split into grading buckets with exact matrices."""

    def __init__(self, cube: StateCube, mode: str = ANNULAR,
                 check: bool = True):
        if mode not in (ANNULAR, PLAIN):
            raise ValueError(f"unknown mode {mode!r}")
        self.cube = cube
        self.mode = mode
        self.buckets: Dict[Tuple[int, ...], Bucket] = {}
        self.grading_of: Dict[Gen, Tuple[int, int, int]] = {}
        for gen in cube.generators():
            g = cube.grading(gen)
            self.grading_of[gen] = g
            key = (g[1], g[2]) if mode == ANNULAR else (g[1],)
            bucket = self.buckets.get(key)
            if bucket is None:
                bucket = self.buckets[key] = Bucket(key)
            bucket.add(g[0], gen)
        self._matrices: Dict[Tuple[Tuple[int, ...], int], IntMatrix] = {}
        if check:
            self.assert_d_squared_zero()

    # -- matrices ------------------------------------------------------------

    def matrix(self, key: Tuple[int, ...], h: int) -> IntMatrix:
        """Differential C_h -> C_{h+1} inside one bucket (rows = targets)."""
        mk = (key, h)
        m = self._matrices.get(mk)
        if m is not None:
            return m
        bucket = self.buckets.get(key)
        src = bucket.gens.get(h, []) if bucket else []
        tgt = bucket.gens.get(h + 1, []) if bucket else []
        m = IntMatrix(len(tgt), len(src))
        for col, gen in enumerate(src):
            for out, coeff in self.cube.differential(gen, self.mode).items():
                g = self.grading_of[out]
                okey = (g[1], g[2]) if self.mode == ANNULAR else (g[1],)
                if okey != key:
                    raise AssertionError(
                        f"differential left its bucket: {key} -> {okey}")
                m.data[bucket.pos[out]][col] += coeff
        self._matrices[mk] = m
        return m

    def assert_d_squared_zero(self) -> None:
        for key, bucket in self.buckets.items():
            hs = sorted(bucket.gens)
            for h in hs:
                if h + 1 in bucket.gens:
                    prod = self.matrix(key, h + 1).mul(self.matrix(key, h))
                    if not prod.is_zero():
                        raise AssertionError(
                            f"d^2 != 0 in bucket {key} at h={h}")

    # -- homology -------------------------------------------------------------

    def presentation(self, key: Tuple[int, ...], h: int) -> HomologyPresentation:
        return homology_presentation(self.matrix(key, h), self.matrix(key, h - 1))

    def homology(self, ring: str = "Z") -> Dict[Tuple[int, ...], HomologyGroup]:
        """Homology per grading: keys (h, q, f) annular / (h, q) plain.

        Over ``ring="Z2"`` the group is reported as a free_rank equal to the
        GF(2) dimension with no torsion.
        """
        if ring not in ("Z", "Z2"):
            raise ValueError(f"unsupported ring {ring!r}")
        out: Dict[Tuple[int, ...], HomologyGroup] = {}
        for key, bucket in sorted(self.buckets.items()):
            for h in sorted(bucket.gens):
                if ring == "Z":
                    group = self.presentation(key, h).group
                else:
                    dim_h = len(bucket.gens[h])
                    d_out = self._gf2_columns(key, h)
                    d_in = self._gf2_columns(key, h - 1)
                    rank_out = gf2_rank(d_out)
                    rank_in = gf2_rank(d_in)
                    group = HomologyGroup(dim_h - rank_out - rank_in)
                if not group.is_trivial():
                    out[(h,) + key] = group
        return out

    def _gf2_columns(self, key: Tuple[int, ...], h: int) -> List[int]:
        m = self.matrix(key, h)
        cols = []
        for j in range(m.ncols):
            mask = 0
            for i in range(m.nrows):
                if m.data[i][j] & 1:
                    mask |= 1 << i
            cols.append(mask)
        return cols

    def gf2_quotient(self, key: Tuple[int, ...], h: int) -> Gf2Quotient:
        """GF(2) homology at (key, h) with class tracking."""
        from .exact import gf2_kernel_basis
        d_out = self._gf2_columns(key, h)
        nsrc = len(self.buckets[key].gens.get(h, []))
        kernel = gf2_kernel_basis(d_out, ncols=nsrc)
        image = self._gf2_image(key, h - 1)
        return Gf2Quotient(kernel, image, nsrc)

    def _gf2_image(self, key: Tuple[int, ...], h: int) -> List[int]:
        """Columns of the differential from h as bitmasks over gens at h+1."""
        m = self.matrix(key, h)
        cols = []
        for j in range(m.ncols):
            mask = 0
            for i in range(m.nrows):
                if m.data[i][j] & 1:
                    mask |= 1 << i
            if mask:
                cols.append(mask)
        return cols


def skein_complex(word: SliceWord, check: bool = True,
                  cube: Optional[StateCube] = None) -> GradedComplex:
    return GradedComplex(cube or StateCube(word), ANNULAR, check=check)


def khovanov_complex(word: SliceWord, check: bool = True,
                     cube: Optional[StateCube] = None) -> GradedComplex:
    return GradedComplex(cube or StateCube(word), PLAIN, check=check)


def skein_homology(word: SliceWord, ring: str = "Z") -> Dict[Tuple[int, int, int], HomologyGroup]:
    return skein_complex(word).homology(ring)


def khovanov_homology(word: SliceWord, ring: str = "Z") -> Dict[Tuple[int, int], HomologyGroup]:
    return khovanov_complex(word).homology(ring)


def d_squared_is_zero(word: SliceWord, mode: str = ANNULAR,
                      cube: Optional[StateCube] = None) -> bool:
    """Direct sparse check that the differential squares to zero."""
    cube = cube or StateCube(word)
    for gen in cube.generators():
        acc: Dict[Gen, int] = {}
        for mid, c1 in cube.differential(gen, mode).items():
            for out, c2 in cube.differential(mid, mode).items():
                acc[out] = acc.get(out, 0) + c1 * c2
        if any(v for v in acc.values()):
            return False
    return True


class _FaceTables:
    """Label-map tables per (state, crossing) for fast cube checks.

    ``table(s, c)[m]`` lists the output label masks (coefficient +1 each) of
    flipping crossing ``c`` at state ``s`` applied to input label mask ``m``.
    Signs are irrelevant for face commutation: the two paths around a square
    differ by a fixed global sign, so the square of the differential vanishes
    iff the unsigned output multisets agree on every face.
    """

    def __init__(self, cube: StateCube, mode: str):
        self.cube = cube
        self.mode = mode
        self._tables: Dict[Tuple[int, int], List[List[int]]] = {}

    def table(self, state: int, crossing: int) -> List[List[int]]:
        key = (state, crossing)
        t = self._tables.get(key)
        if t is not None:
            return t
        cube, mode = self.cube, self.mode
        eff = cube.effect(state, crossing)
        src = cube.resolution(state)
        ncirc = len(src.circles)
        passive = eff.passive
        if eff.kind == "merge":
            i, j = eff.inputs
            (o,) = eff.outputs
            ti = src.circles[i].trivial
            tj = src.circles[j].trivial
            rules = [
                [lab << o for lab in _merge_terms(x, y, ti, tj, mode)]
                for x in (0, 1) for y in (0, 1)
            ]
            t = []
            for m in range(1 << ncirc):
                base = 0
                for si, di in passive:
                    if (m >> si) & 1:
                        base |= 1 << di
                idx = (((m >> i) & 1) << 1) | ((m >> j) & 1)
                t.append([base | r for r in rules[idx]])
        else:
            (i,) = eff.inputs
            oa, ob = eff.outputs
            tgt = cube.resolution(state | (1 << crossing))
            ti = src.circles[i].trivial
            ta = tgt.circles[oa].trivial
            tb = tgt.circles[ob].trivial
            rules = [
                [(la << oa) | (lb << ob)
                 for la, lb in _split_terms(x, ti, ta, tb, mode)]
                for x in (0, 1)
            ]
            t = []
            for m in range(1 << ncirc):
                base = 0
                for si, di in passive:
                    if (m >> si) & 1:
                        base |= 1 << di
                t.append([base | r for r in rules[(m >> i) & 1]])
        self._tables[key] = t
        return t


def faces_commute(word: SliceWord, mode: str = ANNULAR,
                  cube: Optional[StateCube] = None) -> bool:
    """Fast sufficient check for d^2 = 0: every square face commutes.

    Falls back to the exact generator-level check on failure, so the result
    always equals ``d_squared_is_zero``.
    """
    cube = cube or StateCube(word)
    tables = _FaceTables(cube, mode)
    n = cube.n
    for state in range(1 << n):
        zeros = [c for c in range(n) if not (state >> c) & 1]
        nmask = 1 << len(cube.resolution(state).circles)
        for a in range(len(zeros)):
            c1 = zeros[a]
            t1 = tables.table(state, c1)
            for b in range(a + 1, len(zeros)):
                c2 = zeros[b]
                t2 = tables.table(state, c2)
                t12 = tables.table(state | (1 << c1), c2)
                t21 = tables.table(state | (1 << c2), c1)
                for m in range(nmask):
                    out_a = sorted(o2 for o1 in t1[m] for o2 in t12[o1])
                    out_b = sorted(o2 for o1 in t2[m] for o2 in t21[o1])
                    if out_a != out_b:
                        return d_squared_is_zero(word, mode, cube=cube)
    return True


def homology_rows(table: Dict[Tuple[int, ...], HomologyGroup]) -> List[Dict[str, object]]:
    """Canonical row form of a homology table for JSON/CSV emission."""
    rows = []
    for key in sorted(table):
        group = table[key]
        row: Dict[str, object] = {"h": key[0], "q": key[1]}
        if len(key) > 2:
            row["f"] = key[2]
        row["free_rank"] = group.free_rank
        row["torsion"] = list(group.torsion)
        rows.append(row)
    return rows
