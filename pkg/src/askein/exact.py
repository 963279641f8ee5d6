"""Exact integer linear algebra: Smith normal form, kernels, and homology.

Everything here works over the integers (or GF(2) where noted) with no
floating point and no external dependencies, so ranks, torsion, and class
coordinates are exact.  Matrices are small per grading bucket, so a dense
representation with arbitrary-precision ints is both simple and fast enough.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

__all__ = [
    "IntMatrix",
    "SmithForm",
    "smith_normal_form",
    "rank",
    "kernel_basis",
    "solve",
    "HomologyGroup",
    "HomologyPresentation",
    "homology_presentation",
    "gf2_rank",
    "gf2_kernel_basis",
    "Gf2Quotient",
    "mod2_betti_from_integral",
]


class IntMatrix:
    """Dense integer matrix with exact arithmetic.

    ``data`` is a list of row lists.  All entries are Python ints.
    """

    __slots__ = ("nrows", "ncols", "data")

    def __init__(self, nrows: int, ncols: int, data: Optional[List[List[int]]] = None):
        self.nrows = nrows
        self.ncols = ncols
        if data is None:
            self.data = [[0] * ncols for _ in range(nrows)]
        else:
            if len(data) != nrows or any(len(r) != ncols for r in data):
                raise ValueError("data shape does not match declared dimensions")
            self.data = data

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        rows = [list(r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls(nrows, ncols, rows)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], nrows: Optional[int] = None) -> "IntMatrix":
        cols = [list(c) for c in cols]
        if nrows is None:
            if not cols:
                raise ValueError("cannot infer row count from zero columns")
            nrows = len(cols[0])
        if any(len(c) != nrows for c in cols):
            raise ValueError("column lengths disagree")
        data = [[cols[j][i] for j in range(len(cols))] for i in range(nrows)]
        return cls(nrows, len(cols), data)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        m = cls(n, n)
        for i in range(n):
            m.data[i][i] = 1
        return m

    @classmethod
    def from_entries(cls, nrows: int, ncols: int,
                     entries: Iterable[Tuple[int, int, int]]) -> "IntMatrix":
        m = cls(nrows, ncols)
        for i, j, v in entries:
            m.data[i][j] += v
        return m

    # -- basic operations --------------------------------------------------

    def copy(self) -> "IntMatrix":
        return IntMatrix(self.nrows, self.ncols, [row[:] for row in self.data])

    def column(self, j: int) -> List[int]:
        return [self.data[i][j] for i in range(self.nrows)]

    def columns(self) -> List[List[int]]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.ncols, self.nrows,
                         [[self.data[i][j] for i in range(self.nrows)]
                          for j in range(self.ncols)])

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch in matrix product")
        out = IntMatrix(self.nrows, other.ncols)
        odata = other.data
        for i, row in enumerate(self.data):
            orow = out.data[i]
            for k, a in enumerate(row):
                if a:
                    brow = odata[k]
                    for j, b in enumerate(brow):
                        if b:
                            orow[j] += a * b
        return out

    def mul_vector(self, v: Sequence[int]) -> List[int]:
        if len(v) != self.ncols:
            raise ValueError("dimension mismatch in matrix-vector product")
        return [sum(a * b for a, b in zip(row, v) if a and b) for row in self.data]

    def add(self, other: "IntMatrix") -> "IntMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("dimension mismatch in matrix sum")
        return IntMatrix(self.nrows, self.ncols,
                         [[a + b for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.data, other.data)])

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.nrows, self.ncols,
                         [[c * a for a in row] for row in self.data])

    def is_zero(self) -> bool:
        return all(all(a == 0 for a in row) for row in self.data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and self.data == other.data

    def __repr__(self) -> str:
        return f"IntMatrix({self.nrows}x{self.ncols})"


@dataclass
class SmithForm:
    """Smith normal form ``U @ A @ V == D`` with unimodular ``U``, ``V``.

    ``diagonal`` lists the nonnegative invariant factors d_1 | d_2 | ... in
    order; ``rank`` is the number of nonzero factors.
    """

    d: IntMatrix
    u: IntMatrix
    v: IntMatrix
    diagonal: List[int]
    rank: int


def _pivot(data: List[List[int]], t: int, nrows: int, ncols: int) -> Optional[Tuple[int, int]]:
    """Smallest-|value| nonzero entry in the trailing block, ties by (row, col)."""
    best = None
    best_abs = None
    for i in range(t, nrows):
        row = data[i]
        for j in range(t, ncols):
            a = row[j]
            if a:
                aa = -a if a < 0 else a
                if best_abs is None or aa < best_abs:
                    best_abs = aa
                    best = (i, j)
                    if aa == 1:
                        return best
    return best


def smith_normal_form(a: IntMatrix) -> SmithForm:
    """Compute D = U A V in Smith normal form with transform matrices.

    Row operations are mirrored into U, column operations into V, so the
    identity U A V = D holds exactly and both transforms are unimodular.
    """
    m, n = a.nrows, a.ncols
    d = [row[:] for row in a.data]
    u = IntMatrix.identity(m).data
    v = IntMatrix.identity(n).data

    def row_axpy(dst: int, src: int, c: int) -> None:
        drow, srow = d[dst], d[src]
        for j in range(n):
            if srow[j]:
                drow[j] += c * srow[j]
        urow_d, urow_s = u[dst], u[src]
        for j in range(m):
            if urow_s[j]:
                urow_d[j] += c * urow_s[j]

    def col_axpy(dst: int, src: int, c: int) -> None:
        for i in range(m):
            if d[i][src]:
                d[i][dst] += c * d[i][src]
        for i in range(n):
            if v[i][src]:
                v[i][dst] += c * v[i][src]

    def row_swap(i1: int, i2: int) -> None:
        d[i1], d[i2] = d[i2], d[i1]
        u[i1], u[i2] = u[i2], u[i1]

    def col_swap(j1: int, j2: int) -> None:
        for row in d:
            row[j1], row[j2] = row[j2], row[j1]
        for row in v:
            row[j1], row[j2] = row[j2], row[j1]

    def row_negate(i: int) -> None:
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    limit = min(m, n)
    while t < limit:
        p = _pivot(d, t, m, n)
        if p is None:
            break
        pi, pj = p
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        # Clear row t and column t; reductions may reintroduce entries, so
        # loop until the pivot exactly divides everything it meets.
        while True:
            piv = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                a_it = d[i][t]
                if a_it:
                    q = a_it // piv
                    if q:
                        row_axpy(i, t, -q)
                    if d[i][t]:
                        # Remainder is a smaller pivot candidate.
                        row_swap(t, i)
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, n):
                a_tj = d[t][j]
                if a_tj:
                    q = a_tj // piv
                    if q:
                        col_axpy(j, t, -q)
                    if d[t][j]:
                        col_swap(t, j)
                        dirty = True
                        break
            if dirty:
                continue
            break
        if d[t][t] < 0:
            row_negate(t)
        t += 1

    # Enforce the divisibility chain d_1 | d_2 | ... by folding offenders in.
    changed = True
    while changed:
        changed = False
        for k in range(t - 1):
            a_k, a_k1 = d[k][k], d[k + 1][k + 1]
            if a_k and a_k1 % a_k != 0:
                # Standard trick: add column k+1 to column k, then re-reduce
                # the 2x2 block at (k, k).
                col_axpy(k, k + 1, 1)
                while True:
                    piv = d[k][k]
                    x = d[k + 1][k]
                    if x == 0:
                        break
                    q = x // piv
                    if q:
                        row_axpy(k + 1, k, -q)
                    if d[k + 1][k]:
                        row_swap(k, k + 1)
                while True:
                    piv = d[k][k]
                    x = d[k][k + 1]
                    if x == 0:
                        break
                    q = x // piv
                    if q:
                        col_axpy(k + 1, k, -q)
                    if d[k][k + 1]:
                        col_swap(k, k + 1)
                if d[k][k] < 0:
                    row_negate(k)
                if d[k + 1][k + 1] < 0:
                    row_negate(k + 1)
                changed = True

    diag = [d[i][i] for i in range(limit)]
    rank_ = sum(1 for x in diag if x)
    return SmithForm(
        d=IntMatrix(m, n, d),
        u=IntMatrix(m, m, u),
        v=IntMatrix(n, n, v),
        diagonal=diag,
        rank=rank_,
    )


def rank(a: IntMatrix) -> int:
    return smith_normal_form(a).rank


def kernel_basis(a: IntMatrix) -> List[List[int]]:
    """Basis of the integer kernel of ``a`` (columns of V past the rank)."""
    sf = smith_normal_form(a)
    return [sf.v.column(j) for j in range(sf.rank, a.ncols)]


def solve(a: IntMatrix, b: Sequence[int],
          _sf: Optional[SmithForm] = None) -> Optional[List[int]]:
    """An integer solution x of ``a @ x == b``, or None if none exists."""
    if len(b) != a.nrows:
        raise ValueError("right-hand side has wrong length")
    sf = _sf if _sf is not None else smith_normal_form(a)
    ub = sf.u.mul_vector(list(b))
    y = [0] * a.ncols
    for i in range(a.nrows):
        if i < sf.rank:
            di = sf.diagonal[i]
            if ub[i] % di != 0:
                return None
            y[i] = ub[i] // di
        elif ub[i] != 0:
            return None
    return sf.v.mul_vector(y)


@dataclass
class HomologyGroup:
    """Isomorphism type Z^free_rank + sum Z/t for t in torsion."""

    free_rank: int
    torsion: Tuple[int, ...] = ()

    @property
    def total_rank_mod2(self) -> int:
        """Dimension over GF(2) of (this group) tensor GF(2)."""
        return self.free_rank + sum(1 for t in self.torsion if t % 2 == 0)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


@dataclass
class HomologyPresentation:
    """Homology of a chain spot ker(d_out)/im(d_in) with class coordinates.

    ``kernel`` holds an integer basis of ker(d_out) as columns.  ``relations``
    expresses the columns of d_in in kernel coordinates.  The Smith form of
    ``relations`` splits kernel coordinates into killed / torsion / free
    directions, so ``class_of`` maps any cycle to canonical coordinates that
    are equal iff the homology classes are equal.
    """

    group: HomologyGroup
    kernel: IntMatrix
    relations_smith: SmithForm
    _kernel_smith: SmithForm = field(repr=False)

    def kernel_coordinates(self, cycle: Sequence[int]) -> List[int]:
        y = solve(self.kernel, cycle, _sf=self._kernel_smith)
        if y is None:
            raise ValueError("vector is not a cycle (not in the kernel lattice)")
        return y

    def class_of(self, cycle: Sequence[int]) -> Tuple[int, ...]:
        """Canonical coordinates of the homology class of ``cycle``.

        Entry order: torsion coordinates (reduced mod their factor) first,
        then free coordinates.  Two cycles are homologous iff these tuples
        are equal.
        """
        y = self.kernel_coordinates(cycle)
        sf = self.relations_smith
        # w = U^{-1}-basis coordinates: relations become the diagonal of D.
        w = sf.u.mul_vector(y) if sf.u.nrows else []
        coords: List[int] = []
        z = self.kernel.ncols
        diag = sf.diagonal + [0] * (z - len(sf.diagonal))
        for i in range(z):
            di = diag[i]
            if di == 1:
                continue  # killed direction
            if di == 0:
                coords.append(w[i])
            else:
                coords.append(w[i] % di)
        return tuple(coords)

    def is_boundary(self, cycle: Sequence[int]) -> bool:
        return all(c == 0 for c in self.class_of(cycle))

    def representatives(self) -> List[List[int]]:
        """One cycle per surviving class coordinate, in ``class_of`` order.

        The i-th representative has class coordinates (0, ..., 1, ..., 0)
        with the 1 in slot i, so these cycles generate the homology group.
        """
        sf = self.relations_smith
        z = self.kernel.ncols
        diag = sf.diagonal + [0] * (z - len(sf.diagonal))
        reps: List[List[int]] = []
        for i in range(z):
            if diag[i] == 1:
                continue
            # kernel coordinates y with U y = e_i, i.e. y = U^{-1} e_i.
            e = [1 if k == i else 0 for k in range(z)]
            y = solve(sf.u, e)
            if y is None:  # pragma: no cover - U is unimodular
                raise AssertionError("unimodular transform failed to invert")
            reps.append(self.kernel.mul_vector(y))
        return reps


def homology_presentation(d_out: IntMatrix, d_in: IntMatrix) -> HomologyPresentation:
    """Homology at the middle of C_in --d_in--> C --d_out--> C_next.

    ``d_out`` maps the spot being measured forward; ``d_in`` maps into it.
    Requires d_out @ d_in == 0 (checked).
    """
    if d_out.ncols != d_in.nrows:
        raise ValueError("differentials do not share the middle chain group")
    if not d_out.mul(d_in).is_zero():
        raise ValueError("d_out @ d_in != 0: not a chain complex at this spot")
    kb = kernel_basis(d_out)
    kernel = IntMatrix.from_columns(kb, nrows=d_out.ncols)
    kernel_sf = smith_normal_form(kernel)
    z = len(kb)
    # Express each incoming boundary in kernel coordinates.
    rel_cols: List[List[int]] = []
    for j in range(d_in.ncols):
        col = d_in.column(j)
        y = solve(kernel, col, _sf=kernel_sf)
        if y is None:
            raise ValueError("image vector escapes the kernel lattice")
        rel_cols.append(y)
    relations = (IntMatrix.from_columns(rel_cols, nrows=z)
                 if rel_cols else IntMatrix(z, 0))
    rel_sf = smith_normal_form(relations)
    torsion = tuple(x for x in rel_sf.diagonal if x not in (0, 1))
    free_rank = z - rel_sf.rank
    group = HomologyGroup(free_rank=free_rank, torsion=torsion)
    return HomologyPresentation(
        group=group,
        kernel=kernel,
        relations_smith=rel_sf,
        _kernel_smith=kernel_sf,
    )


# -- GF(2) ------------------------------------------------------------------


def gf2_rank(columns: Iterable[int]) -> int:
    """Rank over GF(2) of a matrix given as column bitmasks."""
    basis: List[int] = []
    r = 0
    for col in columns:
        x = col
        for b in basis:
            x = min(x, x ^ b)
        if x:
            basis.append(x)
            basis.sort(reverse=True)
            r += 1
    return r


def gf2_kernel_basis(columns: List[int], ncols: Optional[int] = None) -> List[int]:
    """Kernel basis over GF(2); vectors returned as column-index bitmasks.

    ``columns[j]`` is the j-th column as a row-index bitmask.
    """
    n = len(columns) if ncols is None else ncols
    # Augment each column with an identity tag tracking the combination.
    basis: List[Tuple[int, int]] = []  # (reduced column, tag)
    kernel: List[int] = []
    for j in range(n):
        x = columns[j]
        tag = 1 << j
        for bx, btag in basis:
            nx = x ^ bx
            if nx < x:
                x, tag = nx, tag ^ btag
        if x:
            basis.append((x, tag))
            basis.sort(key=lambda p: -p[0])
        else:
            kernel.append(tag)
    return kernel


class Gf2Quotient:
    """GF(2) homology ker/im with canonical class representatives.

    Vectors are bitmasks over a fixed coordinate set of size ``ncoords``.
    ``class_of`` reduces a cycle modulo the image echelon, giving a canonical
    coset representative: two cycles are homologous iff these agree.
    """

    def __init__(self, kernel: Sequence[int], image: Sequence[int], ncoords: int):
        self.ncoords = ncoords
        self._image_ech: List[int] = []
        for v in image:
            x = self._reduce(v)
            if x:
                self._image_ech.append(x)
                self._image_ech.sort(reverse=True)
        self._kernel_ech: List[int] = []
        for v in kernel:
            x = v
            for b in self._kernel_ech:
                x = min(x, x ^ b)
            if x:
                self._kernel_ech.append(x)
                self._kernel_ech.sort(reverse=True)
        self.dim = len(self._kernel_ech) - len(self._image_ech)

    def _reduce(self, v: int) -> int:
        x = v
        for b in self._image_ech:
            x = min(x, x ^ b)
        return x

    def contains_cycle(self, v: int) -> bool:
        x = v
        for b in self._kernel_ech:
            x = min(x, x ^ b)
        return x == 0

    def class_of(self, v: int) -> int:
        if not self.contains_cycle(v):
            raise ValueError("vector is not a cycle over GF(2)")
        return self._reduce(v)

    def representatives(self) -> List[int]:
        """Cycles whose classes form a GF(2) basis of the quotient."""
        reps: List[int] = []
        seen: List[int] = []
        for v in self._kernel_ech:
            x = self._reduce(v)
            for b in seen:
                x = min(x, x ^ b)
            if x:
                seen.append(x)
                seen.sort(reverse=True)
                reps.append(v)
        return reps


def mod2_betti_from_integral(groups: Dict[int, HomologyGroup]) -> Dict[int, int]:
    """GF(2) Betti numbers implied by integral cohomology (universal
    coefficients for a cochain complex of free abelian groups, where the
    differential raises the degree):

    dim H^k(C; GF(2)) = free_rank_k + (2-torsion count)_k + (2-torsion count)_{k+1}.
    """
    def two_tors(k: int) -> int:
        g = groups.get(k)
        return sum(1 for t in g.torsion if t % 2 == 0) if g else 0

    out: Dict[int, int] = {}
    keys = set(groups.keys()) | {k - 1 for k in groups.keys()}
    for k in keys:
        g = groups.get(k)
        free = g.free_rank if g else 0
        val = free + two_tors(k) + two_tors(k + 1)
        if val:
            out[k] = val
    return out
