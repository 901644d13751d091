"""Defining matrices ``(A, P)`` of a complexity-one variety.

Variables are numbered globally: first the ``T_ij`` block by block, then the
free variables ``S_1 .. S_m``.  ``P`` has ``r`` rows of exponent data, followed
by ``s`` rows ``[d | d']``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .linalg import IntMatrix, as_matrix, positive_kernel_vector_exists, primitive, rank

Exponents = tuple[tuple[int, ...], ...]
Coefficients = tuple[tuple[Fraction, Fraction], ...]


def default_coefficients(r: int) -> Coefficients:
    """``a_0=(1,0)``, ``a_1=(0,1)``, ``a_i=(-1,-(i-1))`` for ``i >= 2``."""
    cols = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]
    cols += [(Fraction(-1), Fraction(-(i - 1))) for i in range(2, r + 1)]
    return tuple(cols[: r + 1])


def lambda_coefficients(lam: Fraction) -> Coefficients:
    """Coefficients for ``r = 3`` giving relations ``T0+T1+T2`` and ``lam*T1+T2+T3``."""
    lam = Fraction(lam)
    if lam in (0, 1):
        raise ValueError("lambda must avoid 0 and 1")
    return (
        (Fraction(1), Fraction(0)),
        (Fraction(0), Fraction(1)),
        (Fraction(-1), Fraction(-1)),
        (Fraction(1), 1 - lam),
    )


def block_ranges(l: Exponents) -> list[range]:
    out, start = [], 0
    for block in l:
        out.append(range(start, start + len(block)))
        start += len(block)
    return out


def exponent_matrix(l: Exponents, m: int) -> IntMatrix:
    """The ``r`` upper rows of ``P``: ``[-l_0, l_1, 0, ...]`` etc., zeros under ``S``."""
    r = len(l) - 1
    ranges = block_ranges(l)
    n = sum(len(b) for b in l)
    rows = []
    for i in range(1, r + 1):
        row = [0] * (n + m)
        for j, c in enumerate(ranges[0]):
            row[c] = -l[0][j]
        for j, c in enumerate(ranges[i]):
            row[c] = l[i][j]
        rows.append(tuple(row))
    return tuple(rows)


@dataclass(frozen=True)
class DefiningData:
    """The pair ``(A, P)``; ``A`` defaults to :func:`default_coefficients`."""

    l: Exponents
    m: int
    d: IntMatrix
    dprime: IntMatrix
    A: Coefficients | None = None

    @property
    def r(self) -> int:
        return len(self.l) - 1

    @property
    def ns(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.l)

    @property
    def n(self) -> int:
        return sum(self.ns)

    @property
    def s(self) -> int:
        return len(self.d)

    @property
    def coefficients(self) -> Coefficients:
        return self.A if self.A is not None else default_coefficients(self.r)


def assemble_P(data: DefiningData) -> IntMatrix:
    """Stack the exponent rows over ``[d | d']``."""
    n, m, s = data.n, data.m, data.s
    if any(len(row) != n for row in data.d):
        raise ValueError(f"shape mismatch: d must be {s}x{n}")
    if len(data.dprime) != s or any(len(row) != m for row in data.dprime):
        raise ValueError(f"shape mismatch: d' must be {s}x{m}")
    upper = exponent_matrix(data.l, m)
    lower = tuple(tuple(a) + tuple(b) for a, b in zip(data.d, data.dprime))
    return upper + lower


def validate(data: DefiningData) -> list[str]:
    """All violated conditions; empty means valid."""
    problems: list[str] = []
    if data.r < 1:
        problems.append("need at least two blocks (r >= 1)")
    for i, block in enumerate(data.l):
        if not block:
            problems.append(f"block {i} is empty")
        for j, e in enumerate(block):
            if e < 1:
                problems.append(f"exponent l[{i}][{j}] = {e} is not positive")
    if data.m < 0:
        problems.append("m must be nonnegative")
    if not 0 < data.s < data.n + data.m - data.r:
        problems.append(f"s = {data.s} violates 0 < s < n+m-r = {data.n + data.m - data.r}")
    try:
        P = assemble_P(data)
    except ValueError as exc:
        problems.append(str(exc))
        return problems
    cols = [tuple(row[j] for row in P) for j in range(data.n + data.m)]
    for j, col in enumerate(cols):
        if not any(col):
            problems.append(f"column not primitive: column {j} is zero")
        elif primitive(col) != col:
            problems.append(f"column not primitive: column {j}")
    seen: dict[tuple[int, ...], int] = {}
    for j, col in enumerate(cols):
        if col in seen:
            problems.append(f"columns not pairwise distinct: {seen[col]} and {j}")
        seen.setdefault(col, j)
    if rank(P) < data.r + data.s or not positive_kernel_vector_exists(P):
        problems.append("columns do not generate Q^{r+s} as a cone")
    A = data.coefficients
    if len(A) != data.r + 1:
        problems.append("A must have r+1 columns")
    else:
        for i in range(len(A)):
            for k in range(i + 1, len(A)):
                if A[i][0] * A[k][1] - A[i][1] * A[k][0] == 0:
                    problems.append(f"columns a_{i} and a_{k} of A are linearly dependent")
    return problems


def is_irredundant(data: DefiningData) -> bool:
    return all(sum(block) >= 2 for block in data.l)


def _renormalize(A: Sequence[tuple[Fraction, Fraction]]) -> Coefficients:
    """Change coordinates so that ``a_0=(1,0)`` and ``a_1=(0,1)``.

    This rescales every relation by one common constant, so the ideal is unchanged.
    """
    (p, q), (s, t) = A[0], A[1]
    det = p * t - q * s
    inv = ((t / det, -s / det), (-q / det, p / det))
    return tuple(
        (inv[0][0] * x + inv[0][1] * y, inv[1][0] * x + inv[1][1] * y) for x, y in A
    )


def _eliminate(data: DefiningData, i: int) -> DefiningData:
    """Drop block ``i >= 1`` with a single linear variable."""
    ranges = block_ranges(data.l)
    c = ranges[i][0]
    upper = exponent_matrix(data.l, 0)
    row_i = upper[i - 1]
    # clear the eliminated column from the lower rows with the exponent row of block i
    d = [list(row) for row in data.d]
    for row in d:
        f = row[c]
        if f:
            for j in range(data.n):
                row[j] -= f * row_i[j]
    new_d = tuple(tuple(x for j, x in enumerate(row) if j != c) for row in d)
    new_l = tuple(b for k, b in enumerate(data.l) if k != i)
    A = data.coefficients
    new_A = _renormalize([a for k, a in enumerate(A) if k != i])
    return DefiningData(l=new_l, m=data.m, d=new_d, dprime=data.dprime, A=new_A)


def make_irredundant(data: DefiningData) -> DefiningData:
    """Eliminate blocks consisting of one variable with exponent one, to a fixpoint."""
    current = data
    while True:
        target = next(
            (i for i, b in enumerate(current.l) if len(b) == 1 and b[0] == 1), None
        )
        if target is None:
            return current
        if current.r - 1 < 1:
            raise ValueError("degenerates to toric/torus case")
        if target == 0:
            current = apply_admissible(current, AdmissibleOp("swap-blocks", (0, 1)))
            target = 1
        current = _eliminate(current, target)


@dataclass(frozen=True)
class AdmissibleOp:
    """One of the admissible operations on ``P``.

    Parameters by kind:
      ``swap-in-block``: (block, j1, j2)
      ``swap-blocks``: (i, k)
      ``add-upper-row-to-lower``: (upper row 1..r, lower row 0..s-1, multiplier)
      ``row-op-lower``: (target, source, multiplier); add a multiple of a lower row
      ``swap-dprime-cols``: (k1, k2), zero-based free variable indices
    """

    kind: str
    params: tuple[int, ...] = field(default=())


def _permute_columns(matrix: IntMatrix, perm: Sequence[int]) -> IntMatrix:
    return tuple(tuple(row[p] for p in perm) for row in matrix)


def apply_admissible(data: DefiningData, op: AdmissibleOp) -> DefiningData:
    kind, p = op.kind, op.params
    ranges = block_ranges(data.l)
    if kind == "swap-in-block":
        i, j1, j2 = p
        if not (0 <= i <= data.r and 0 <= j1 < data.ns[i] and 0 <= j2 < data.ns[i]):
            raise ValueError("invalid index for swap-in-block")
        block = list(data.l[i])
        block[j1], block[j2] = block[j2], block[j1]
        perm = list(range(data.n))
        a, b = ranges[i][j1], ranges[i][j2]
        perm[a], perm[b] = perm[b], perm[a]
        new_l = data.l[:i] + (tuple(block),) + data.l[i + 1 :]
        return replace(data, l=new_l, d=_permute_columns(data.d, perm))
    if kind == "swap-blocks":
        i, k = p
        if not (0 <= i <= data.r and 0 <= k <= data.r):
            raise ValueError("invalid index for swap-blocks")
        order = list(range(data.r + 1))
        order[i], order[k] = order[k], order[i]
        perm = [c for b in order for c in ranges[b]]
        new_l = tuple(data.l[b] for b in order)
        A = data.coefficients
        new_A = tuple(A[b] for b in order)
        return replace(data, l=new_l, d=_permute_columns(data.d, perm), A=new_A)
    if kind == "add-upper-row-to-lower":
        up, low, mult = p
        if not (1 <= up <= data.r and 0 <= low < data.s):
            raise ValueError("invalid index for add-upper-row-to-lower")
        row = exponent_matrix(data.l, 0)[up - 1]
        d = [list(x) for x in data.d]
        d[low] = [x + mult * y for x, y in zip(d[low], row)]
        return replace(data, d=as_matrix(d))
    if kind == "row-op-lower":
        target, source, mult = p
        if not (0 <= target < data.s and 0 <= source < data.s and target != source):
            raise ValueError("invalid index for row-op-lower")
        d = [list(x) for x in data.d]
        dp = [list(x) for x in data.dprime]
        d[target] = [x + mult * y for x, y in zip(d[target], d[source])]
        dp[target] = [x + mult * y for x, y in zip(dp[target], dp[source])]
        return replace(data, d=as_matrix(d), dprime=tuple(tuple(x) for x in dp))
    if kind == "swap-dprime-cols":
        k1, k2 = p
        if not (0 <= k1 < data.m and 0 <= k2 < data.m):
            raise ValueError("invalid index for swap-dprime-cols")
        perm = list(range(data.m))
        perm[k1], perm[k2] = perm[k2], perm[k1]
        return replace(data, dprime=_permute_columns(data.dprime, perm))
    raise ValueError(f"unknown admissible operation {kind!r}")


AP_FIELDS = {"r", "ns", "l", "s", "d", "dprime", "A", "u", "lambda", "format"}


def data_from_dict(doc: Mapping[str, Any]) -> tuple[DefiningData, tuple[int, int] | None]:
    """Parse the ``ap`` input format; returns the data and the optional class ``u``."""
    unknown = set(doc) - AP_FIELDS
    if unknown:
        raise ValueError(f"unknown fields: {sorted(unknown)}")
    for key in ("l", "d"):
        if key not in doc:
            raise ValueError(f"missing field {key!r}")
    l = tuple(tuple(int(x) for x in block) for block in doc["l"])
    if "r" in doc and int(doc["r"]) != len(l) - 1:
        raise ValueError("field r disagrees with the number of exponent blocks")
    if "ns" in doc and tuple(doc["ns"]) != tuple(len(b) for b in l):
        raise ValueError("field ns disagrees with the exponent blocks")
    d = as_matrix(doc["d"])
    if "s" in doc and int(doc["s"]) != len(d):
        raise ValueError("field s disagrees with the rows of d")
    dprime = as_matrix(doc.get("dprime", [[] for _ in d])) if doc.get("dprime") else tuple(() for _ in d)
    m = len(dprime[0]) if dprime and dprime[0] else 0
    A = None
    if doc.get("A") is not None:
        A = tuple((Fraction(x), Fraction(y)) for x, y in doc["A"])
    elif doc.get("lambda") is not None:
        A = lambda_coefficients(Fraction(doc["lambda"]))
    u = tuple(int(x) for x in doc["u"]) if doc.get("u") is not None else None
    return DefiningData(l=l, m=m, d=d, dprime=dprime, A=A), u  # type: ignore[return-value]


def data_to_dict(data: DefiningData, u: Sequence[int] | None = None) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "format": "ap",
        "r": data.r,
        "ns": list(data.ns),
        "l": [list(b) for b in data.l],
        "s": data.s,
        "d": [list(row) for row in data.d],
        "dprime": [list(row) for row in data.dprime],
    }
    if data.A is not None:
        doc["A"] = [[str(x), str(y)] for x, y in data.A]
    if u is not None:
        doc["u"] = list(u)
    return doc
