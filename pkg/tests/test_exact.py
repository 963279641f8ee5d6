"""Exact integer and GF(2) linear algebra."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from askein.exact import (Gf2Quotient, HomologyGroup, IntMatrix,
                          gf2_kernel_basis, gf2_rank, homology_presentation,
                          kernel_basis, mod2_betti_from_integral, rank, solve,
                          smith_normal_form)


def matrix(rows):
    return IntMatrix(len(rows), len(rows[0]) if rows else 0,
                     [list(r) for r in rows])


def det(m: IntMatrix) -> Fraction:
    """Fraction-free determinant for small matrices (independent oracle)."""
    n = m.nrows
    a = [[Fraction(m.data[i][j]) for j in range(n)] for i in range(n)]
    sign = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        for r in range(col + 1, n):
            factor = a[r][col] / a[col][col]
            for c in range(col, n):
                a[r][c] -= factor * a[col][c]
    out = Fraction(sign)
    for i in range(n):
        out *= a[i][i]
    return out


small_matrices = st.integers(min_value=0, max_value=4).flatmap(
    lambda r: st.integers(min_value=0, max_value=4).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(min_value=-9, max_value=9),
                     min_size=c, max_size=c),
            min_size=r, max_size=r).map(
                lambda rows: IntMatrix(r, c, rows))))


class TestSmithNormalForm:
    @pytest.mark.parametrize("rows,diag", [
        ([[2, 4], [6, 8]], [2, 4]),
        ([[2, 0], [0, 3]], [1, 6]),
        ([[4, 6], [6, 9]], [1]),
        ([[1, 0], [0, 1]], [1, 1]),
        ([[0, 0], [0, 0]], []),
        ([[6]], [6]),
        ([[-4]], [4]),
    ])
    def test_frozen_diagonals(self, rows, diag):
        sf = smith_normal_form(matrix(rows))
        assert sf.diagonal[:sf.rank] == diag
        assert all(x == 0 for x in sf.diagonal[sf.rank:])

    @given(small_matrices)
    def test_round_trip_and_divisibility(self, a):
        sf = smith_normal_form(a)
        assert sf.u.mul(a).mul(sf.v).data == sf.d.data
        nonzero = sf.diagonal[:sf.rank]
        assert all(x > 0 for x in nonzero)
        for x, y in zip(nonzero, nonzero[1:]):
            assert y % x == 0
        assert rank(a) == sf.rank

    @given(small_matrices)
    def test_transforms_unimodular(self, a):
        sf = smith_normal_form(a)
        assert abs(det(sf.u)) == 1
        assert abs(det(sf.v)) == 1

    @given(small_matrices.filter(lambda m: m.nrows == m.ncols and m.nrows))
    def test_square_determinant_is_diagonal_product(self, a):
        sf = smith_normal_form(a)
        prod = 1
        for x in sf.diagonal:
            prod *= x
        if sf.rank == a.nrows:
            assert abs(det(a)) == prod
        else:
            assert det(a) == 0

    @given(small_matrices)
    def test_kernel_basis_members_annihilate(self, a):
        basis = kernel_basis(a)
        assert len(basis) == a.ncols - rank(a)
        for vec in basis:
            assert all(x == 0 for x in a.mul_vector(vec))

    @given(small_matrices)
    def test_solve_consistency(self, a):
        # a * x for a known x must be solvable, and the solution must
        # reproduce the right-hand side
        x = list(range(1, a.ncols + 1))
        b = a.mul_vector(x)
        got = solve(a, b)
        assert got is not None
        assert a.mul_vector(got) == b


class TestHomology:
    def test_zero_differentials_give_chain_group(self):
        pres = homology_presentation(IntMatrix(0, 3), IntMatrix(3, 0))
        assert pres.group == HomologyGroup(3)

    def test_torsion_from_diagonal_relations(self):
        # Z^2 modulo the image of diag(2, 3) is cyclic of order 6
        pres = homology_presentation(IntMatrix(0, 2),
                                     matrix([[2, 0], [0, 3]]))
        assert pres.group == HomologyGroup(0, (6,))

    def test_mixed_free_and_torsion(self):
        pres = homology_presentation(IntMatrix(0, 2), matrix([[2], [0]]))
        assert pres.group == HomologyGroup(1, (2,))
        assert pres.class_of([0, 1]) != pres.class_of([0, 0])
        assert pres.is_boundary([2, 0])
        assert not pres.is_boundary([1, 0])

    def test_kernel_restriction(self):
        # middle of Z --(1,1)--> Z^2 --(1,-1)--> Z: kernel = image, H = 0
        d_out = matrix([[1, -1]])
        d_in = matrix([[1], [1]])
        pres = homology_presentation(d_out, d_in)
        assert pres.group == HomologyGroup(0)

    def test_group_str(self):
        assert str(HomologyGroup(0)) == "0"
        assert str(HomologyGroup(1)) == "Z"
        assert str(HomologyGroup(2)) == "Z^2"
        assert str(HomologyGroup(0, (2,))) == "Z/2"
        assert str(HomologyGroup(1, (2, 4))) == "Z + Z/2 + Z/4"

    def test_total_rank_mod2(self):
        assert HomologyGroup(2, (2, 3, 4)).total_rank_mod2 == 4
        assert HomologyGroup(0).is_trivial()


class TestGf2:
    def test_rank_frozen(self):
        # columns as bitmasks; 0b11 and 0b01 and their sum
        assert gf2_rank([0b11, 0b01, 0b10]) == 2
        assert gf2_rank([0, 0]) == 0

    @given(small_matrices)
    def test_gf2_rank_bounded_by_integer_rank(self, a):
        cols = []
        for j in range(a.ncols):
            bits = 0
            for i in range(a.nrows):
                if a.data[i][j] % 2:
                    bits |= 1 << i
            cols.append(bits)
        assert gf2_rank(cols) <= rank(a)

    def test_kernel_basis(self):
        basis = gf2_kernel_basis([0b1, 0b1], ncols=2)
        assert basis == [0b11]

    def test_quotient(self):
        # kernel spanned by e0, e1; image by e0+e1: quotient has dim 1
        quo = Gf2Quotient([0b01, 0b10], [0b11], 2)
        assert quo.dim == 1
        assert quo.class_of(0b01) == quo.class_of(0b10)
        assert quo.class_of(0b11) == 0
        assert quo.contains_cycle(0b01)

    def test_mod2_betti_from_integral(self):
        # one Z and one Z/2 at level 0, Z/4 at level 1: the mod-2
        # dimension at level 0 counts the free part, its own even
        # torsion, and the even torsion one level up
        groups = {0: HomologyGroup(1, (2,)), 1: HomologyGroup(0, (4,))}
        betti = mod2_betti_from_integral(groups)
        assert betti[0] == 1 + 1 + 1
        assert betti[1] == 0 + 1 + 0
