from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cplx1.linalg import (
    determinant,
    hermite_rows,
    identity,
    kernel_basis,
    lattice_intersection,
    matmul,
    matvec,
    positive_kernel_vector_exists,
    primitive,
    rank,
    smith_form,
    solve_rational,
    sublattice_generates,
    transpose,
)


def matrices(max_rows=4, max_cols=5, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )


def _minor_factors(rows):
    """Invariant factors from gcds of k x k minors (determinantal divisors)."""
    M = sympy.Matrix(rows)
    out, prev = [], 1
    for k in range(1, min(M.shape) + 1):
        g = 0
        for r in combinations(range(M.rows), k):
            for c in combinations(range(M.cols), k):
                g = gcd(g, int(M.extract(list(r), list(c)).det()))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return tuple(sorted(out))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_smith_transform_and_factors(rows):
    M = tuple(tuple(r) for r in rows)
    snf = smith_form(M)
    assert matmul(matmul(snf.U, M), snf.V) == snf.D
    assert abs(determinant(snf.U)) == 1 and abs(determinant(snf.V)) == 1
    f = snf.invariant_factors
    assert all(f[i + 1] % f[i] == 0 for i in range(len(f) - 1))
    assert tuple(sorted(f)) == _minor_factors(rows)
    assert snf.rank == sympy.Matrix(rows).rank() == rank(M)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_hermite_rows(rows):
    M = tuple(tuple(r) for r in rows)
    h = hermite_rows(M)
    assert abs(determinant(h.U)) == 1
    full = matmul(h.U, M)
    assert full[: len(h.H)] == h.H
    assert all(not any(r) for r in full[len(h.H):])
    for i, p in enumerate(h.pivots):
        assert h.H[i][p] > 0
        assert all(0 <= h.H[k][p] < h.H[i][p] for k in range(i))
        assert all(x == 0 for x in h.H[i][:p])


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_kernel_is_saturated_basis(rows):
    M = tuple(tuple(r) for r in rows)
    cols = len(M[0])
    K = kernel_basis(M)
    k = len(K[0]) if K and K[0] else 0
    assert k == cols - rank(M)
    for j in range(k):
        v = [K[i][j] for i in range(cols)]
        assert not any(matvec(M, v))
    if k:
        # saturated: the basis columns span a primitive sublattice
        assert smith_form(K).invariant_factors == (1,) * k


def test_known_values():
    assert smith_form(((2, 4, 4), (-6, 6, 12), (10, -4, -16))).invariant_factors == (2, 6, 12)
    assert determinant(((1, 2), (3, 4))) == -2
    assert primitive((4, -6)) == (2, -3)
    with pytest.raises(ValueError):
        primitive((0, 0))
    assert transpose(((1, 2, 3),)) == ((1,), (2,), (3,))
    assert identity(2) == ((1, 0), (0, 1))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=1, max_size=5))
def test_generation_in_rank_two(vectors):
    gens = (tuple(v[0] for v in vectors), tuple(v[1] for v in vectors))
    g = 0
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            a, b = vectors[i], vectors[j]
            g = gcd(g, a[0] * b[1] - a[1] * b[0])
    assert sublattice_generates(gens, 2) == (g == 1)


def test_lattice_intersection():
    # 2Z x Z meets Z x 3Z in 2Z x 3Z
    got = lattice_intersection(((2, 0), (0, 1)), ((1, 0), (0, 3)), 2)
    assert abs(determinant(got)) == 6


@settings(max_examples=100, deadline=None)
@given(matrices(max_rows=3, max_cols=4), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_solve_rational(rows, rhs):
    M = tuple(tuple(r) for r in rows)
    b = rhs[: len(M)]
    x = solve_rational(M, b)
    solvable = sympy.Matrix(rows).rank() == sympy.Matrix([list(r) + [v] for r, v in zip(rows, b)]).rank()
    assert (x is not None) == solvable
    if x is not None:
        assert [sum(Fraction(a) * y for a, y in zip(r, x)) for r in M] == [Fraction(v) for v in b]


@settings(max_examples=150, deadline=None)
@given(matrices(max_rows=3, max_cols=6, lo=-3, hi=3))
def test_positive_kernel_against_lp(rows):
    from scipy.optimize import linprog

    M = tuple(tuple(r) for r in rows)
    cols = len(M[0])
    # oracle: maximize t with M x = 0, x_j >= t, sum x <= 1
    c = [0.0] * cols + [-1.0]
    A_eq = [list(r) + [0] for r in M]
    A_ub = [[-1.0 if k == j else 0.0 for k in range(cols)] + [1.0] for j in range(cols)]
    A_ub.append([1.0] * cols + [0.0])
    res = linprog(c, A_ub=A_ub, b_ub=[0.0] * cols + [1.0], A_eq=A_eq, b_eq=[0] * len(M),
                  bounds=[(None, None)] * (cols + 1))
    expected = res.status == 0 and -res.fun > 1e-9
    assert positive_kernel_vector_exists(M) == expected
