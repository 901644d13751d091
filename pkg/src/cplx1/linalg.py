"""Exact integer matrix algebra.

Matrices are tuples of row tuples holding Python integers, so every value is
hashable and arbitrary precision. Nothing here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

IntMatrix = tuple[tuple[int, ...], ...]
IntVector = tuple[int, ...]


def as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    """Freeze nested integer sequences into an ``IntMatrix``."""
    out = tuple(tuple(int(x) for x in row) for row in rows)
    if out and len({len(row) for row in out}) != 1:
        raise ValueError("matrix rows have different lengths")
    return out


def shape(matrix: IntMatrix, cols_hint: int = 0) -> tuple[int, int]:
    if not matrix:
        return 0, cols_hint
    return len(matrix), len(matrix[0])


def identity(size: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(size)) for i in range(size))


def transpose(matrix: IntMatrix, cols_hint: int = 0) -> IntMatrix:
    rows, cols = shape(matrix, cols_hint)
    return tuple(tuple(matrix[i][j] for i in range(rows)) for j in range(cols))


def matmul(left: IntMatrix, right: IntMatrix) -> IntMatrix:
    if left and right and len(left[0]) != len(right):
        raise ValueError("shape mismatch in matmul")
    cols = list(zip(*right)) if right else []
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in left)


def matvec(matrix: IntMatrix, vector: Sequence[int]) -> IntVector:
    return tuple(sum(a * b for a, b in zip(row, vector)) for row in matrix)


def column(matrix: IntMatrix, j: int) -> IntVector:
    return tuple(row[j] for row in matrix)


def columns(matrix: IntMatrix) -> list[IntVector]:
    return [tuple(col) for col in zip(*matrix)] if matrix else []


def from_columns(cols: Sequence[Sequence[int]], rows_hint: int = 0) -> IntMatrix:
    if not cols:
        return tuple(() for _ in range(rows_hint))
    return tuple(tuple(int(c[i]) for c in cols) for i in range(len(cols[0])))


def det2(a: Sequence[int], b: Sequence[int]) -> int:
    """Determinant of the 2x2 matrix with columns ``a`` and ``b``."""
    return a[0] * b[1] - a[1] * b[0]


def determinant(matrix: IntMatrix) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    size = len(matrix)
    if size == 0:
        return 1
    work = [list(row) for row in matrix]
    sign, prev = 1, 1
    for k in range(size - 1):
        if work[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if work[i][k] != 0), None)
            if swap is None:
                return 0
            work[k], work[swap] = work[swap], work[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                work[i][j] = (work[i][j] * work[k][k] - work[i][k] * work[k][j]) // prev
        prev = work[k][k]
    return sign * work[-1][-1]


def rank(matrix: IntMatrix) -> int:
    """Rank over the rationals."""
    work = [[Fraction(x) for x in row] for row in matrix]
    if not work:
        return 0
    rows, cols = len(work), len(work[0])
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if work[i][c] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(rows):
            if i != r and work[i][c] != 0:
                f = work[i][c] / work[r][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        r += 1
        if r == rows:
            break
    return r


def primitive(v: Sequence[int]) -> IntVector:
    """Return the primitive lattice vector on the ray through ``v``."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("not a ray: zero vector")
    return tuple(x // g for x in v)


@dataclass(frozen=True)
class SmithForm:
    """``U * M * V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    rank: int
    invariant_factors: tuple[int, ...]


def _min_abs_position(work: list[list[int]], start: int) -> tuple[int, int] | None:
    best = None
    best_val = 0
    for i in range(start, len(work)):
        row = work[i]
        for j in range(start, len(row)):
            x = row[j]
            if x != 0 and (best is None or abs(x) < best_val):
                best, best_val = (i, j), abs(x)
    return best


def smith_form(matrix: IntMatrix, cols_hint: int = 0) -> SmithForm:
    """Smith normal form with transforms.

    Pivots are chosen as the nonzero entry of least absolute value, ties broken
    in row-major order, so the transforms are reproducible.
    """
    rows, cols = shape(matrix, cols_hint)
    work = [list(row) for row in matrix]
    left = [list(row) for row in identity(rows)]
    right = [list(row) for row in identity(cols)]

    def swap_rows(a: int, b: int) -> None:
        if a != b:
            work[a], work[b] = work[b], work[a]
            left[a], left[b] = left[b], left[a]

    def swap_cols(a: int, b: int) -> None:
        if a != b:
            for row in work:
                row[a], row[b] = row[b], row[a]
            for row in right:
                row[a], row[b] = row[b], row[a]

    def add_row(target: int, source: int, factor: int) -> None:
        work[target] = [x + factor * y for x, y in zip(work[target], work[source])]
        left[target] = [x + factor * y for x, y in zip(left[target], left[source])]

    def add_col(target: int, source: int, factor: int) -> None:
        for row in work:
            row[target] += factor * row[source]
        for row in right:
            row[target] += factor * row[source]

    t = 0
    while t < min(rows, cols):
        pos = _min_abs_position(work, t)
        if pos is None:
            break
        swap_rows(t, pos[0])
        swap_cols(t, pos[1])
        while True:
            pivot = work[t][t]
            for i in range(t + 1, rows):
                if work[i][t]:
                    add_row(i, t, -(work[i][t] // pivot))
            for j in range(t + 1, cols):
                if work[t][j]:
                    add_col(j, t, -(work[t][j] // pivot))
            # remainders smaller than the pivot force a new pivot
            cand = None
            for i in range(t + 1, rows):
                if work[i][t] and (cand is None or abs(work[i][t]) < cand[0]):
                    cand = (abs(work[i][t]), i, t)
            for j in range(t + 1, cols):
                if work[t][j] and (cand is None or abs(work[t][j]) < cand[0]):
                    cand = (abs(work[t][j]), t, j)
            if cand is not None:
                swap_rows(t, cand[1])
                swap_cols(t, cand[2])
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if work[i][j] % pivot),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if work[t][t] < 0:
            work[t] = [-x for x in work[t]]
            left[t] = [-x for x in left[t]]
        t += 1

    factors = tuple(work[i][i] for i in range(min(rows, cols)) if work[i][i] != 0)
    return SmithForm(
        U=as_matrix(left) if rows else (),
        D=as_matrix(work) if rows else (),
        V=as_matrix(right) if cols else (),
        rank=len(factors),
        invariant_factors=factors,
    )


def kernel_basis(matrix: IntMatrix, cols_hint: int = 0) -> IntMatrix:
    """Saturated lattice basis of the integer kernel, returned as columns.

    The result has shape ``cols x k``; when ``k == 0`` the result has ``cols``
    empty rows.
    """
    rows, cols = shape(matrix, cols_hint)
    if rows == 0:
        return identity(cols)
    snf = smith_form(matrix)
    keep = list(range(snf.rank, cols))
    basis = [tuple(snf.V[i][j] for i in range(cols)) for j in keep]
    if basis:
        # a Hermite basis makes the output independent of pivoting details
        basis = list(hermite_rows(as_matrix(basis)).H)
    return from_columns(basis, cols)


@dataclass(frozen=True)
class HermiteForm:
    """``U * M == H`` with ``U`` unimodular and ``H`` in row Hermite form."""

    H: IntMatrix
    U: IntMatrix
    pivots: tuple[int, ...]


def hermite_rows(matrix: IntMatrix) -> HermiteForm:
    """Row-style Hermite normal form.

    Zero rows are dropped from ``H``; pivots are positive and entries above a
    pivot lie in ``[0, pivot)``.  ``U`` keeps all rows, the trailing ones
    spanning the left kernel.
    """
    rows, cols = shape(matrix)
    work = [list(row) for row in matrix]
    left = [list(row) for row in identity(rows)]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if work[i][c] != 0]
            if not nz:
                break
            i_min = min(nz, key=lambda i: (abs(work[i][c]), i))
            work[r], work[i_min] = work[i_min], work[r]
            left[r], left[i_min] = left[i_min], left[r]
            done = True
            for i in range(r + 1, rows):
                if work[i][c]:
                    q = work[i][c] // work[r][c]
                    work[i] = [x - q * y for x, y in zip(work[i], work[r])]
                    left[i] = [x - q * y for x, y in zip(left[i], left[r])]
                    if work[i][c]:
                        done = False
            if done:
                break
        if all(work[i][c] == 0 for i in range(r, rows)):
            continue
        if work[r][c] < 0:
            work[r] = [-x for x in work[r]]
            left[r] = [-x for x in left[r]]
        for i in range(r):
            q = work[i][c] // work[r][c]
            if q:
                work[i] = [x - q * y for x, y in zip(work[i], work[r])]
                left[i] = [x - q * y for x, y in zip(left[i], left[r])]
        pivots.append(c)
        r += 1
    return HermiteForm(H=as_matrix(work[:r]), U=as_matrix(left), pivots=tuple(pivots))


def sublattice_generates(gens: IntMatrix, ambient_dim: int) -> bool:
    """True iff the columns of ``gens`` generate ``Z^ambient_dim``."""
    if ambient_dim == 0:
        return True
    if not gens or not gens[0]:
        return False
    if len(gens) != ambient_dim:
        raise ValueError("generator matrix must have ambient_dim rows")
    if ambient_dim == 2:
        # gcd of the 2x2 minors, a fast path for the rank-two grading groups
        cols = list(zip(*gens))
        g = 0
        for i in range(len(cols)):
            for j in range(i + 1, len(cols)):
                g = gcd(g, det2(cols[i], cols[j]))
                if g == 1:
                    return True
        return False
    snf = smith_form(gens)
    return snf.rank == ambient_dim and all(f == 1 for f in snf.invariant_factors)


def lattice_intersection(first: IntMatrix, second: IntMatrix, dim: int) -> IntMatrix:
    """Basis (as columns) of the intersection of two column lattices in ``Z^dim``."""
    a_cols, b_cols = columns(first), columns(second)
    if not a_cols or not b_cols:
        return tuple(() for _ in range(dim))
    stacked = from_columns(a_cols + [tuple(-x for x in v) for v in b_cols], dim)
    ker = columns(kernel_basis(stacked))
    gens = [tuple(sum(k[j] * a_cols[j][i] for j in range(len(a_cols))) for i in range(dim)) for k in ker]
    gens = [g for g in gens if any(g)]
    if not gens:
        return tuple(() for _ in range(dim))
    h = hermite_rows(transpose(from_columns(gens, dim))).H
    return transpose(h, dim) if h else tuple(() for _ in range(dim))


def solve_rational(matrix: IntMatrix, rhs: Sequence[int]) -> tuple[Fraction, ...] | None:
    """Some rational solution of ``matrix * x == rhs``, or ``None``."""
    rows, cols = shape(matrix)
    work = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    where = [-1] * cols
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if work[i][c] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = 1 / work[r][c]
        work[r] = [x * inv for x in work[r]]
        for i in range(rows):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        where[c] = r
        r += 1
    if any(all(x == 0 for x in row[:-1]) and row[-1] != 0 for row in work):
        return None
    return tuple(work[where[c]][-1] if where[c] >= 0 else Fraction(0) for c in range(cols))


def _low_rank_positive(kernel: IntMatrix, k: int) -> bool:
    """Positive vector in a kernel of rank at most two, read off the rows of its basis.

    With basis rows ``p_j`` we need ``y`` with ``<y, p_j> > 0`` for all ``j``:
    the points lie in an open half-plane. Then some ``p_e`` has every other
    point weakly counterclockwise within a half-turn.
    """
    if k == 0:
        return False
    pts = [tuple(row) for row in kernel]
    if k == 1:
        return all(p[0] > 0 for p in pts) or all(p[0] < 0 for p in pts)
    if any(p == (0, 0) for p in pts):
        return False
    for e in pts:
        if all(
            (d := e[0] * p[1] - e[1] * p[0]) > 0 or (d == 0 and e[0] * p[0] + e[1] * p[1] > 0)
            for p in pts
        ):
            return True
    return False


def positive_kernel_vector_exists(matrix: IntMatrix, cols_hint: int = 0) -> bool:
    """Decide whether ``matrix * x == 0`` has a solution with every ``x_j > 0``.

    Exact phase-one simplex (Bland's rule) on ``matrix * y == -matrix * 1``,
    ``y >= 0`` after the shift ``x = y + 1``; scaling makes ``x >= 1`` equivalent
    to ``x > 0``.
    """
    rows, cols = shape(matrix, cols_hint)
    if cols == 0:
        return True
    if rows == 0:
        return True
    if cols - rows <= 2:
        kernel = kernel_basis(matrix, cols)
        k = len(kernel[0]) if kernel else 0
        if k <= 2:
            return _low_rank_positive(kernel, k)
    rhs = [-sum(row) for row in matrix]
    # tableau rows: coefficients of y (cols), artificials (rows), rhs
    tab: list[list[Fraction]] = []
    for i, row in enumerate(matrix):
        sign = -1 if rhs[i] < 0 else 1
        tab.append(
            [Fraction(sign * x) for x in row]
            + [Fraction(int(k == i)) for k in range(rows)]
            + [Fraction(sign * rhs[i])]
        )
    basis = [cols + i for i in range(rows)]
    width = cols + rows
    while True:
        # reduced costs of the phase-one objective: minimise sum of artificials
        cost = [Fraction(0)] * width
        for j in range(width):
            c_j = Fraction(1) if j >= cols else Fraction(0)
            z_j = sum((Fraction(1) if basis[i] >= cols else Fraction(0)) * tab[i][j] for i in range(rows))
            cost[j] = c_j - z_j
        entering = next((j for j in range(width) if cost[j] < 0), None)
        if entering is None:
            break
        ratios = [(tab[i][-1] / tab[i][entering], basis[i], i) for i in range(rows) if tab[i][entering] > 0]
        if not ratios:
            break
        _, _, leave = min(ratios)
        piv = tab[leave][entering]
        tab[leave] = [x / piv for x in tab[leave]]
        for i in range(rows):
            if i != leave and tab[i][entering] != 0:
                f = tab[i][entering]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        basis[leave] = entering
    value = sum(tab[i][-1] for i in range(rows) if basis[i] >= cols)
    return value == 0
