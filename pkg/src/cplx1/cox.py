"""Graded ring data: trinomial relations, the grading group and degree matrix."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .data import (
    Coefficients,
    DefiningData,
    Exponents,
    assemble_P,
    block_ranges,
    default_coefficients,
    exponent_matrix,
    lambda_coefficients,
    validate,
)
from .linalg import (
    IntMatrix,
    as_matrix,
    columns,
    det2,
    from_columns,
    hermite_rows,
    kernel_basis,
    matmul,
    smith_form,
    transpose,
)


@dataclass(frozen=True)
class Trinomial:
    """``sum_k c_k * T_{i_k}^{l_{i_k}}`` over three consecutive blocks."""

    terms: tuple[tuple[Fraction, int, tuple[int, ...]], ...]

    def __str__(self) -> str:
        parts = []
        for coeff, block, exps in self.terms:
            mono = "*".join(
                f"T{block}{j + 1}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(exps)
            )
            parts.append(mono if coeff == 1 else f"({coeff})*{mono}")
        return " + ".join(parts)


def relations(data: DefiningData) -> list[Trinomial]:
    """The ``r-1`` trinomials ``g_i = g_{i,i+1,i+2}``; empty when ``r < 2``."""
    A = data.coefficients
    out = []
    for i in range(data.r - 1):
        a, b, c = A[i], A[i + 1], A[i + 2]
        coeffs = (det2(b, c), -det2(a, c), det2(a, b))
        out.append(
            Trinomial(
                tuple((Fraction(coeffs[k]), i + k, data.l[i + k]) for k in range(3))
            )
        )
    return out


@dataclass(frozen=True)
class GradingGroup:
    """``Z^free_rank`` plus cyclic torsion summands."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __str__(self) -> str:
        parts = [f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def grading_from_P(P: IntMatrix, cols_hint: int = 0) -> tuple[GradingGroup, IntMatrix]:
    """``K = Z^N / im(P^T)`` and the degree matrix (free rows, then torsion rows)."""
    N = len(P[0]) if P else cols_hint
    Pt = transpose(P, N)
    snf = smith_form(Pt, len(P))
    U = snf.U
    factors = snf.invariant_factors
    torsion_rows = [(i, f) for i, f in enumerate(factors) if f > 1]
    free_rows = [U[i] for i in range(snf.rank, N)]
    tor_rows = [tuple(x % f for x in U[i]) for i, f in torsion_rows]
    group = GradingGroup(free_rank=N - snf.rank, torsion=tuple(f for _, f in torsion_rows))
    return group, tuple(free_rows) + tuple(tor_rows)


@dataclass(frozen=True)
class GradedPresentation:
    """Exponent data, degree matrix ``Q`` and an ample class ``u``.

    ``Q`` has two free rows followed by one residue row per torsion factor.
    """

    l: Exponents
    m: int
    Q: IntMatrix
    u: tuple[int, int]
    torsion: tuple[int, ...] = ()
    lam: Fraction | None = None
    A: Coefficients | None = field(default=None, compare=False)

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
    def N(self) -> int:
        return self.n + self.m

    @property
    def free_rank(self) -> int:
        return len(self.Q) - len(self.torsion)

    @property
    def weights(self) -> tuple[tuple[int, int], ...]:
        """Free parts of the generator degrees, one per variable."""
        return tuple((self.Q[0][j], self.Q[1][j]) for j in range(self.N))

    @property
    def full_weights(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(row[j] for row in self.Q) for j in range(self.N))

    @property
    def group(self) -> GradingGroup:
        return GradingGroup(self.free_rank, self.torsion)

    @property
    def coefficients(self) -> Coefficients:
        if self.A is not None:
            return self.A
        if self.lam is not None and self.r == 3:
            return lambda_coefficients(self.lam)
        return default_coefficients(self.r)

    def reduce(self, cls: Sequence[int]) -> tuple[int, ...]:
        """Normalize torsion coordinates of a class."""
        free = tuple(cls[: self.free_rank])
        tor = tuple(x % t for x, t in zip(cls[self.free_rank :], self.torsion))
        return free + tor


def block_degrees(pres: GradedPresentation) -> list[tuple[int, ...]]:
    ws = pres.full_weights
    out = []
    for block, rng in zip(pres.l, block_ranges(pres.l)):
        total = [0] * len(pres.Q)
        for e, c in zip(block, rng):
            total = [t + e * x for t, x in zip(total, ws[c])]
        out.append(pres.reduce(total))
    return out


def relation_degree(pres: GradedPresentation) -> tuple[int, ...]:
    """The common degree ``mu`` of the monomials ``T_i^{l_i}``."""
    degs = block_degrees(pres)
    bad = [i for i, d in enumerate(degs) if d != degs[0]]
    if bad:
        raise ValueError(f"not homogeneous: blocks {bad} differ from block 0 ({degs})")
    return degs[0]


def is_homogeneous(pres: GradedPresentation) -> bool:
    degs = block_degrees(pres)
    return all(d == degs[0] for d in degs)


def ring_dimension(pres: GradedPresentation | DefiningData) -> int:
    return pres.n + pres.m - (pres.r - 1)


def variety_dimension(data: DefiningData) -> int:
    return data.s + 1


def presentation_dimension(pres: GradedPresentation) -> int:
    """``dim R - rank K``, which equals ``s + 1`` for the matching ``P``."""
    return ring_dimension(pres) - pres.free_rank


def presentation_from_data(
    data: DefiningData, u: Sequence[int] | None = None, lam: Fraction | None = None
) -> GradedPresentation:
    """Degree matrix of ``(A, P)``; ``u`` defaults to ``(0, 0)`` as a placeholder."""
    group, Q = grading_from_P(assemble_P(data), data.n + data.m)
    uu = tuple(u) if u is not None else (0,) * group.free_rank
    return GradedPresentation(
        l=data.l, m=data.m, Q=Q, u=uu, torsion=group.torsion, lam=lam, A=data.A  # type: ignore[arg-type]
    )


def _kernel_coordinates(basis_cols: IntMatrix, vec: Sequence[int]) -> tuple[int, ...]:
    """Integer coordinates of ``vec`` in a saturated lattice basis (columns)."""
    herm = hermite_rows(transpose(basis_cols))
    H = herm.H
    # solve x * H = vec row-wise using the pivot structure
    coords = [0] * len(H)
    rest = list(vec)
    for k, piv in enumerate(herm.pivots):
        q, rem = divmod(rest[piv], H[k][piv])
        if rem:
            raise ValueError("vector not in lattice")
        coords[k] = q
        rest = [x - q * y for x, y in zip(rest, H[k])]
    if any(rest):
        raise ValueError("vector not in lattice")
    # translate from Hermite rows back to the given basis
    U = herm.U
    k = len(H)
    return tuple(sum(coords[i] * U[i][j] for i in range(k)) for j in range(len(U)))


def reconstruct_P(pres: GradedPresentation) -> DefiningData:
    """A defining matrix ``P`` whose row lattice is ``ker(Q)``.

    Requires a torsion-free grading.  The lower rows complete the exponent rows
    to a lattice basis of ``ker(Q)`` and are reduced to Hermite form.
    """
    if pres.torsion:
        raise ValueError("reconstruct_P needs a torsion-free grading group")
    if not is_homogeneous(pres):
        relation_degree(pres)
    N = pres.N
    Q = tuple(pres.Q[: pres.free_rank])
    ker = kernel_basis(Q, N)
    k = len(ker[0]) if ker and ker[0] else 0
    upper = exponent_matrix(pres.l, pres.m)
    for row in upper:
        if any(sum(a * b for a, b in zip(qrow, row)) for qrow in Q):
            raise ValueError("exponent rows not in ker(Q): presentation is not homogeneous")
    coords = [_kernel_coordinates(ker, row) for row in upper]
    r = len(upper)
    if r:
        snf = smith_form(as_matrix(coords), k)
        if snf.rank != r or any(f != 1 for f in snf.invariant_factors):
            raise ValueError("exponent rows are not extendable to a lattice basis of ker(Q)")
        Vinv_rows = _unimodular_inverse(snf.V)
        lower_coords = [Vinv_rows[i] for i in range(r, k)]
    else:
        lower_coords = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    lower = [tuple(sum(c[t] * ker[j][t] for t in range(k)) for j in range(N)) for c in lower_coords]
    if lower:
        lower = list(_reduce_lower(as_matrix(lower), upper))
    n = pres.n
    d = tuple(row[:n] for row in lower)
    dprime = tuple(row[n:] for row in lower)
    return DefiningData(l=pres.l, m=pres.m, d=d, dprime=dprime, A=pres.coefficients)


def _reduce_lower(lower: IntMatrix, upper: IntMatrix) -> IntMatrix:
    """Hermite form of the lower rows, then reduced modulo the upper rows."""
    H = hermite_rows(lower).H
    upper_h = hermite_rows(upper).H if upper else ()
    out = []
    for row in H:
        vec = list(row)
        for urow in upper_h:
            piv = next(j for j, x in enumerate(urow) if x)
            q = vec[piv] // urow[piv]
            vec = [a - q * b for a, b in zip(vec, urow)]
        out.append(tuple(vec))
    return tuple(out)


def _unimodular_inverse(V: IntMatrix) -> IntMatrix:
    size = len(V)
    herm = hermite_rows(V)
    # For unimodular V the Hermite form is the identity, so U is the inverse.
    if herm.H != tuple(tuple(int(i == j) for j in range(size)) for i in range(size)):
        raise ValueError("matrix is not unimodular")
    return herm.U


def gl2_transform(source: IntMatrix, target: IntMatrix) -> IntMatrix | None:
    """``g`` in ``GL_2(Z)`` with ``g * source == target`` on the two free rows."""
    src, tgt = columns(source[:2]), columns(target[:2])
    for i in range(len(src)):
        for j in range(i + 1, len(src)):
            det = det2(src[i], src[j])
            if det == 0:
                continue
            # g = [t_i t_j] * [s_i s_j]^{-1}
            inv = ((src[j][1], -src[j][0]), (-src[i][1], src[i][0]))
            T = ((tgt[i][0], tgt[j][0]), (tgt[i][1], tgt[j][1]))
            num = matmul(T, inv)
            if any(x % det for row in num for x in row):
                return None
            g = tuple(tuple(x // det for x in row) for row in num)
            if abs(det2((g[0][0], g[1][0]), (g[0][1], g[1][1]))) != 1:
                return None
            return g if matmul(g, tuple(source[:2])) == tuple(target[:2]) else None
    return None


GRADED_FIELDS = {"ns", "l", "m", "Q", "u", "lambda", "torsion", "format", "A"}


def presentation_from_dict(doc: Mapping[str, Any]) -> GradedPresentation:
    """Parse the ``graded`` input format."""
    unknown = set(doc) - GRADED_FIELDS
    if unknown:
        raise ValueError(f"unknown fields: {sorted(unknown)}")
    for key in ("l", "Q", "u"):
        if key not in doc:
            raise ValueError(f"missing field {key!r}")
    l = tuple(tuple(int(x) for x in block) for block in doc["l"])
    if "ns" in doc and tuple(doc["ns"]) != tuple(len(b) for b in l):
        raise ValueError("field ns disagrees with the exponent blocks")
    Q = as_matrix(doc["Q"])
    n = sum(len(b) for b in l)
    m = int(doc.get("m", (len(Q[0]) - n) if Q else 0))
    torsion = tuple(int(t) for t in doc.get("torsion", ()))
    if len(Q) != 2 + len(torsion) or any(len(row) != n + m for row in Q):
        raise ValueError(f"Q must be {2 + len(torsion)}x{n + m}")
    u = tuple(int(x) for x in doc["u"])
    if len(u) != 2:
        raise ValueError("u must have two entries")
    lam = Fraction(doc["lambda"]) if doc.get("lambda") is not None else None
    A = tuple((Fraction(x), Fraction(y)) for x, y in doc["A"]) if doc.get("A") else None
    return GradedPresentation(l=l, m=m, Q=Q, u=u, torsion=torsion, lam=lam, A=A)  # type: ignore[arg-type]


def presentation_to_dict(pres: GradedPresentation) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "format": "graded",
        "ns": list(pres.ns),
        "l": [list(b) for b in pres.l],
        "m": pres.m,
        "Q": [list(row) for row in pres.Q],
        "u": list(pres.u),
    }
    if pres.torsion:
        doc["torsion"] = list(pres.torsion)
    if pres.lam is not None:
        doc["lambda"] = str(pres.lam)
    return doc


def check_data(data: DefiningData) -> None:
    problems = validate(data)
    if problems:
        raise ValueError("; ".join(problems))


__all__ = [
    "GradedPresentation",
    "GradingGroup",
    "Trinomial",
    "block_degrees",
    "check_data",
    "from_columns",
    "gl2_transform",
    "grading_from_P",
    "is_homogeneous",
    "presentation_dimension",
    "presentation_from_data",
    "presentation_from_dict",
    "presentation_to_dict",
    "reconstruct_P",
    "relation_degree",
    "relations",
    "ring_dimension",
    "variety_dimension",
]
