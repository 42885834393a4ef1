from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.domains import GF as SGF
from sympy.polys.matrices import DomainMatrix

from e7paving.exact import (
    GF,
    QQ,
    Fq,
    Matrix,
    MultiPoly,
    UniPoly,
    annihilator,
    contains,
    is_prime,
    kernel_basis,
    lagrange_interpolate,
    row_space,
    rref,
    subspace_intersection,
    subspace_sum,
)

small = st.integers(-5, 5)


def matrices(max_rows=5, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def test_is_prime_matches_sympy():
    assert [n for n in range(200) if is_prime(n)] == list(sympy.primerange(0, 200))


def test_field_arithmetic():
    F = GF(7)
    a, b = F(3), F(5)
    assert a + b == F(1) and a * b == F(1) and a / b == F(2)
    assert a.inverse() * a == F(1)
    assert F(Fraction(1, 2)) == F(4)
    with pytest.raises(ValueError):
        GF(9)
    with pytest.raises(ValueError):
        Fq(1, 5) + Fq(1, 7)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_and_kernel_match_sympy(rows):
    M = Matrix(rows)
    S = sympy.Matrix(rows)
    assert M.rank() == S.rank()
    K = kernel_basis(M)
    assert len(K) == M.ncols - S.rank()
    for v in K:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in M.rows)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_matches_sympy(rows):
    red, rk = rref(Matrix(rows))
    S, piv = sympy.Matrix(rows).rref()
    assert rk == len(piv)
    assert [[Fraction(str(x)) for x in S.row(i)] for i in range(rk)] == [list(r) for r in red.rows[:rk]]


@settings(max_examples=40, deadline=None)
@given(matrices(4, 5), st.sampled_from([2, 3, 5, 7]))
def test_rank_mod_p_matches_sympy(rows, p):
    dm = DomainMatrix([[SGF(p)(x) for x in r] for r in rows], (len(rows), len(rows[0])), SGF(p))
    assert Matrix(rows, field=GF(p)).rank() == dm.rank()


@settings(max_examples=40, deadline=None)
@given(matrices(3, 5), matrices(3, 5))
def test_sum_and_intersection_dimensions(a, b):
    n = min(len(a[0]), len(b[0]))
    a = [r[:n] for r in a]
    b = [r[:n] for r in b]
    A, B = row_space(a, n), row_space(b, n)
    S, I = subspace_sum(A, B, n), subspace_intersection(A, B, n)
    assert len(S) + len(I) == len(A) + len(B)
    assert all(contains(A, v, n) and contains(B, v, n) for v in I)
    assert all(sum(f[i] * v[i] for i in range(n)) == 0 for f in annihilator(A, n) for v in A)


def test_row_space_is_canonical():
    n = 3
    assert row_space([(1, 2, 3), (2, 4, 7)], n) == row_space([(0, 0, 1), (1, 2, 0)], n)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=7))
def test_lagrange_reproduces_polynomial(coeffs):
    p = UniPoly(coeffs)
    xs = [2, 3, 5, 7, 11, 13, 17][: max(len(coeffs), 1)]
    assert lagrange_interpolate([(x, int(p(x))) for x in xs]) == p


def test_unipoly_basics():
    p = UniPoly([1, 1]) * UniPoly([1, 1])
    assert p == UniPoly([1, 2, 1]) and p.degree == 2 and p(3) == 16
    assert str(p) == "q^2 + 2*q + 1"
    assert UniPoly([]).degree == -1
    assert not UniPoly([Fraction(1, 2)]).has_nonneg_integer_coeffs()
    with pytest.raises(ValueError):
        lagrange_interpolate([(2, 1), (2, 3)])


def test_multipoly_arithmetic():
    vs = ("x", "y")
    x, y = MultiPoly.var(vs, "x"), MultiPoly.var(vs, "y")
    p = (x + y) * (x - y)
    assert p == x * x - y * y
    assert (p - p).is_zero()
    assert MultiPoly.const(vs, 3).is_constant()
    assert set(p.variables()) == {"x", "y"}


def test_qq_is_rational():
    assert QQ(Fraction(2, 4)) == Fraction(1, 2)
