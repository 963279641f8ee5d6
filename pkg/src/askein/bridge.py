"""Ordinary Khovanov complex on annular generators: filtration and bridge.

The plain Khovanov differential on the same enhanced states splits as
``d_Kh = d_0 + d_-2`` by homotopical-grading shift: the f-preserving part
``d_0`` coincides entrywise with the skein differential (labels mapped by
v+- <-> x+-, w+- <-> x+-), and every remaining entry drops f by exactly 2.
Generators of minimal f inside one quantum grading therefore span a
subcomplex on which ``d_Kh`` restricts to the skein differential; the
inclusion induces a map from extreme skein homology to Khovanov homology,
computed here with explicit class coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .diagram import SliceWord
from .exact import HomologyGroup, IntMatrix
from .skein import (
    ANNULAR,
    PLAIN,
    Gen,
    GradedComplex,
    StateCube,
    label_names,
)

__all__ = [
    "DecompositionReport",
    "decompose_differential",
    "f_min",
    "ExtremeMapReport",
    "extreme_inclusion_map",
    "spectral_bound_holds",
]


@dataclass
class DecompositionReport:
    """Per-bucket decomposition d_Kh = d_0 + d_-2 with identity checks."""

    word: SliceWord
    buckets: Dict[Tuple[int, ...], Dict[int, Tuple[IntMatrix, IntMatrix, IntMatrix]]]
    checked_identities: int

    def matrices(self, q: int, h: int) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
        """(d_Kh, d_0, d_-2) mapping h -> h+1 in quantum grading q."""
        return self.buckets[(q,)][h]

    def to_dict(self) -> Dict[str, object]:
        def nnz(m: IntMatrix) -> int:
            return sum(1 for row in m.data for v in row if v)

        rows = []
        for key in sorted(self.buckets):
            for h in sorted(self.buckets[key]):
                full, d0, dm2 = self.buckets[key][h]
                rows.append({
                    "q": key[0], "h": h,
                    "rows": full.nrows, "cols": full.ncols,
                    "entries_khovanov": nnz(full),
                    "entries_f_preserving": nnz(d0),
                    "entries_f_dropping": nnz(dm2),
                })
        return {
            "crossings": self.word.n_crossings,
            "checked_identities": self.checked_identities,
            "buckets": rows,
        }


def _split_by_f_shift(kh: GradedComplex, key: Tuple[int, ...], h: int
                      ) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Split one plain bucket matrix into f-shift 0 and -2 parts."""
    cube = kh.cube
    bucket = kh.buckets[key]
    src = bucket.gens.get(h, [])
    tgt = bucket.gens.get(h + 1, [])
    full = kh.matrix(key, h)
    d0 = IntMatrix(len(tgt), len(src))
    dm2 = IntMatrix(len(tgt), len(src))
    for col, gen in enumerate(src):
        f_src = kh.grading_of[gen][2]
        for out, coeff in cube.differential(gen, PLAIN).items():
            row = bucket.pos[out]
            shift = kh.grading_of[out][2] - f_src
            if shift == 0:
                d0.data[row][col] += coeff
            elif shift == -2:
                dm2.data[row][col] += coeff
            else:
                raise AssertionError(
                    f"differential entry with f-shift {shift} at {gen} -> {out}")
    if not d0.add(dm2) == full:
        raise AssertionError("d_0 + d_-2 != d_Kh")
    return full, d0, dm2


def decompose_differential(word: SliceWord,
                           cube: Optional[StateCube] = None) -> DecompositionReport:
    """Build the f-filtration decomposition and verify all its identities.

    Checks, per quantum bucket and composable h:
      * every differential entry shifts f by 0 or -2;
      * d_0 equals the skein differential entrywise;
      * d_Kh^2 = 0, d_0^2 = 0, d_-2^2 = 0, and the mixed terms anticommute.
    """
    cube = cube or StateCube(word)
    kh = GradedComplex(cube, PLAIN, check=False)
    buckets: Dict[Tuple[int, ...], Dict[int, Tuple[IntMatrix, IntMatrix, IntMatrix]]] = {}
    checked = 0
    for key, bucket in sorted(kh.buckets.items()):
        per_h: Dict[int, Tuple[IntMatrix, IntMatrix, IntMatrix]] = {}
        for h in sorted(bucket.gens):
            per_h[h] = _split_by_f_shift(kh, key, h)
        buckets[key] = per_h
        # d_0 must equal the skein differential entrywise: compare against
        # the annular bucket matrices scattered into the plain bucket frame.
        for h, (full, d0, dm2) in per_h.items():
            src = bucket.gens.get(h, [])
            tgt = bucket.gens.get(h + 1, [])
            expect = IntMatrix(len(tgt), len(src))
            for col, gen in enumerate(src):
                for out, coeff in cube.differential(gen, ANNULAR).items():
                    expect.data[bucket.pos[out]][col] += coeff
            if not expect == d0:
                raise AssertionError(f"d_0 differs from the skein differential in {key} h={h}")
            checked += 1
        for h in per_h:
            if h + 1 not in per_h:
                continue
            full2, d02, dm22 = per_h[h + 1]
            full1, d01, dm21 = per_h[h]
            if not full2.mul(full1).is_zero():
                raise AssertionError(f"d_Kh^2 != 0 in {key} at h={h}")
            if not d02.mul(d01).is_zero():
                raise AssertionError(f"d_0^2 != 0 in {key} at h={h}")
            if not dm22.mul(dm21).is_zero():
                raise AssertionError(f"d_-2^2 != 0 in {key} at h={h}")
            mixed = d02.mul(dm21).add(dm22.mul(d01))
            if not mixed.is_zero():
                raise AssertionError(f"d_0 d_-2 + d_-2 d_0 != 0 in {key} at h={h}")
            checked += 4
    return DecompositionReport(word=word, buckets=buckets, checked_identities=checked)


def f_min(complex_or_cube, q: int) -> int:
    """Minimal homotopical grading among generators of quantum grading q."""
    if isinstance(complex_or_cube, StateCube):
        cube = complex_or_cube
        fs = [cube.grading(g)[2] for g in cube.generators()
              if cube.grading(g)[1] == q]
    else:
        gc = complex_or_cube
        fs = [g3[2] for g3 in gc.grading_of.values() if g3[1] == q]
    if not fs:
        raise ValueError(f"no generators in quantum grading {q}")
    return min(fs)


@dataclass
class ExtremeMapReport:
    """Induced map H_Sk^(h, q, f_min) -> H_Kh^(h, q) with class images."""

    word: SliceWord
    q: int
    f_min: int
    ring: str
    source_groups: Dict[int, HomologyGroup]
    target_groups: Dict[int, HomologyGroup]
    matrices: Dict[int, List[Tuple[int, ...]]]  # h -> image class coords per source basis class
    subcomplex_closed: bool

    def class_image(self, h: int) -> List[Tuple[int, ...]]:
        return self.matrices.get(h, [])

    def to_dict(self) -> Dict[str, object]:
        return {
            "q": self.q,
            "f_min": self.f_min,
            "ring": self.ring,
            "subcomplex_closed": self.subcomplex_closed,
            "levels": [
                {
                    "h": h,
                    "source": str(self.source_groups[h]),
                    "target": str(self.target_groups[h]),
                    "class_images": [list(v) for v in self.matrices.get(h, [])],
                }
                for h in sorted(self.source_groups)
            ],
        }


def _check_subcomplex_closed(kh: GradedComplex, key: Tuple[int, ...],
                             fmin: int) -> bool:
    """No Khovanov differential exits the f = f_min generator span."""
    cube = kh.cube
    bucket = kh.buckets[key]
    for h, gens in bucket.gens.items():
        for gen in gens:
            if kh.grading_of[gen][2] != fmin:
                continue
            for out in cube.differential(gen, PLAIN):
                if kh.grading_of[out][2] != fmin:
                    return False
    return True


def extreme_inclusion_map(word: SliceWord, q: int, ring: str = "Z",
                          cube: Optional[StateCube] = None) -> ExtremeMapReport:
    """Map induced on homology by including the minimal-f subcomplex.

    The subcomplex is spanned by generators with f = f_min(word, q) inside
    quantum grading q; on it the Khovanov differential equals the skein one,
    so its homology is H_Sk^(*, q, f_min).  Classes are pushed through the
    inclusion and located in the Khovanov homology's canonical coordinates.
    """
    if ring not in ("Z", "Z2"):
        raise ValueError(f"unsupported ring {ring!r}")
    cube = cube or StateCube(word)
    sk = GradedComplex(cube, ANNULAR, check=False)
    kh = GradedComplex(cube, PLAIN, check=False)
    if (q,) not in kh.buckets:
        raise ValueError(f"no generators in quantum grading {q}")
    fmin = f_min(kh, q)
    closed = _check_subcomplex_closed(kh, (q,), fmin)
    if not closed:
        raise AssertionError("minimal-f generators failed to span a subcomplex")

    sk_bucket = sk.buckets.get((q, fmin))
    kh_bucket = kh.buckets[(q,)]
    source_groups: Dict[int, HomologyGroup] = {}
    target_groups: Dict[int, HomologyGroup] = {}
    matrices: Dict[int, List[Tuple[int, ...]]] = {}

    hs = sorted(sk_bucket.gens) if sk_bucket else []
    for h in hs:
        if ring == "Z":
            sk_pres = sk.presentation((q, fmin), h)
            kh_pres = kh.presentation((q,), h)
            source_groups[h] = sk_pres.group
            target_groups[h] = kh_pres.group
            if sk_pres.group.is_trivial():
                continue
            images: List[Tuple[int, ...]] = []
            for rep in sk_pres.representatives():
                pushed = _include_vector(sk_bucket.gens[h], rep,
                                         kh_bucket.gens.get(h, []), kh_bucket.pos)
                images.append(kh_pres.class_of(pushed))
            matrices[h] = images
        else:
            sk_q = sk.gf2_quotient((q, fmin), h)
            kh_q = kh.gf2_quotient((q,), h)
            source_groups[h] = HomologyGroup(sk_q.dim)
            target_groups[h] = HomologyGroup(kh_q.dim)
            if sk_q.dim == 0:
                continue
            images = []
            src_list = sk_bucket.gens[h]
            tgt_list = kh_bucket.gens.get(h, [])
            for rep in sk_q.representatives():
                vec = [(rep >> i) & 1 for i in range(len(src_list))]
                pushed = _include_vector(src_list, vec, tgt_list, kh_bucket.pos)
                mask = 0
                for i, val in enumerate(pushed):
                    if val & 1:
                        mask |= 1 << i
                cls = kh_q.class_of(mask)
                images.append(tuple((cls >> i) & 1 for i in range(len(tgt_list))))
            matrices[h] = images
    return ExtremeMapReport(
        word=word, q=q, f_min=fmin, ring=ring,
        source_groups=source_groups, target_groups=target_groups,
        matrices=matrices, subcomplex_closed=closed,
    )


def _include_vector(src_gens: Sequence[Gen], coeffs: Sequence[int],
                    tgt_gens: Sequence[Gen], tgt_pos: Dict[Gen, int]) -> List[int]:
    out = [0] * len(tgt_gens)
    for gen, c in zip(src_gens, coeffs):
        if c:
            out[tgt_pos[gen]] += c
    return out


def spectral_bound_holds(word: SliceWord,
                         cube: Optional[StateCube] = None) -> bool:
    """Over GF(2): dim H_Kh^(h,q) <= sum_f dim H_Sk^(h,q,f) for all (h, q)."""
    cube = cube or StateCube(word)
    sk_dims = GradedComplex(cube, ANNULAR, check=False).homology("Z2")
    kh_dims = GradedComplex(cube, PLAIN, check=False).homology("Z2")
    totals: Dict[Tuple[int, int], int] = {}
    for (h, q, f), group in sk_dims.items():
        totals[(h, q)] = totals.get((h, q), 0) + group.free_rank
    for (h, q), group in kh_dims.items():
        if group.free_rank > totals.get((h, q), 0):
            return False
    return True
