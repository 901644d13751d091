"""Canonical forms and a bounded search for smooth rank-two presentations."""

from __future__ import annotations

import os
from fractions import Fraction
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import combinations_with_replacement, product
from typing import Any, Iterator, Sequence

from .catalog import Catalog, FamilyTemplate, Grid, default_catalog, instantiate, iter_parameters
from .cones import ConeQ2, cone_hull
from .cox import GradedPresentation, presentation_dimension, reconstruct_P
from .data import Exponents, block_ranges, validate
from .faces import FaceSet, is_F_face
from .geometry import (
    divisor_cones,
    fano_status,
    git_chambers,
    global_flags,
    moving_cone,
    representative_class,
    stratum_smooth_upstairs,
)
from .linalg import det2, smith_form

Vec2 = tuple[int, int]
Matrix2 = tuple[tuple[int, int], tuple[int, int]]


# ---------------------------------------------------------------------------
# canonical forms


def _apply(g: Matrix2, w: Sequence[int]) -> Vec2:
    return (g[0][0] * w[0] + g[0][1] * w[1], g[1][0] * w[0] + g[1][1] * w[1])


def _mul(a: Matrix2, b: Matrix2) -> Matrix2:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), (1 if a >= 0 else -1), 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def _to_first_axis(e: Vec2) -> Matrix2:
    """A matrix in ``SL2(Z)`` sending the primitive vector ``e`` to ``(1,0)``."""
    p, q = e
    g, x, y = _egcd(p, q)  # x p + y q == 1
    assert g == 1
    # rows (x, y) and (-q, p): determinant x p + y q == 1
    return ((x, y), (-q, p))


_FLIP: Matrix2 = ((1, 0), (0, -1))


def normalizing_maps(eff: ConeQ2) -> list[Matrix2]:
    """The ``GL2(Z)`` maps taking a pointed cone to ``cone((1,0),(x,d))`` with ``0 <= x < d``.

    One map per orientation; they are unique, so the list has two entries.
    """
    if eff.shape != "pointed2d":
        raise ValueError("effective cone must be pointed and two dimensional")
    out = []
    for pre in (((1, 0), (0, 1)), _FLIP):
        rays = [_apply(pre, r) for r in eff.rays]
        first, second = (rays[0], rays[1]) if pre == ((1, 0), (0, 1)) else (rays[1], rays[0])
        g = _to_first_axis(first)
        s, d = _apply(g, second)
        shear = ((1, -(s // d)), (0, 1))
        out.append(_mul(_mul(shear, g), pre))
    return out


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """Normal form of a graded presentation up to admissible operations and ``GL2(Z)``.

    ``blocks`` holds per relation block the sorted ``(exponent, weight)``
    pairs; blocks are sorted. ``free`` is the sorted list of free weights,
    ``chamber`` the rays of the semiample cone of ``u`` after normalization
    and ``moduli`` the number of continuous coefficient parameters.
    """

    blocks: tuple[tuple[tuple[int, Vec2], ...], ...]
    free: tuple[Vec2, ...]
    chamber: tuple[Vec2, ...]
    moduli: int
    chamber_index: int = field(default=0, compare=False)

    @property
    def ring_key(self) -> tuple[Any, ...]:
        return (self.blocks, self.free, self.moduli)

    def presentation(self) -> GradedPresentation:
        """A representative presentation, with ``u`` the smallest class in the chamber."""
        l = tuple(tuple(e for e, _ in b) for b in self.blocks)
        ws = [w for b in self.blocks for _, w in b] + list(self.free)
        Q = (tuple(w[0] for w in ws), tuple(w[1] for w in ws))
        u = representative_class(cone_hull(self.chamber))
        lam = Fraction(2) if self.moduli else None
        return GradedPresentation(l=l, m=len(self.free), Q=Q, u=u, lam=lam)

    @property
    def dim(self) -> int:
        n = sum(len(b) for b in self.blocks)
        return n + len(self.free) - (len(self.blocks) - 2) - 2

    def to_dict(self) -> dict[str, Any]:
        return {
            "exponents": [[e for e, _ in b] for b in self.blocks],
            "block_weights": [[list(w) for _, w in b] for b in self.blocks],
            "free_weights": [list(w) for w in self.free],
            "chamber": [list(r) for r in self.chamber],
            "chamber_index": self.chamber_index,
            "moduli": self.moduli,
        }

    def __str__(self) -> str:
        blocks = " | ".join(" ".join(f"{e}:{w[0]},{w[1]}" for e, w in b) for b in self.blocks)
        free = " ".join(f"{w[0]},{w[1]}" for w in self.free) or "-"
        ch = " ".join(f"({a},{b})" for a, b in self.chamber)
        mod = f"  lambda-family({self.moduli})" if self.moduli else ""
        return f"[{blocks}] free [{free}] chamber {ch}{mod}"


def _encode(pres: GradedPresentation, g: Matrix2) -> tuple[Any, Any]:
    ws = [_apply(g, w) for w in pres.weights]
    blocks = []
    for block, rng in zip(pres.l, block_ranges(pres.l)):
        blocks.append(tuple(sorted((e, ws[j]) for e, j in zip(block, rng))))
    free = tuple(sorted(ws[pres.n :]))
    return tuple(sorted(blocks)), free


def _moduli(pres: GradedPresentation) -> int:
    return max(pres.r - 2, 0)


def canonical_form(pres: GradedPresentation) -> CanonicalForm:
    """Lexicographic minimum over the two normalizing maps of ``Eff``."""
    if pres.torsion or pres.free_rank != 2:
        raise ValueError("canonical forms need Cl = Z^2 without torsion")
    eff = cone_hull(pres.weights)
    sample = divisor_cones(pres).sample
    best: CanonicalForm | None = None
    chambers = git_chambers(pres)
    index = next((i for i, c in enumerate(chambers) if c == sample), -1)
    for g in normalizing_maps(eff):
        blocks, free = _encode(pres, g)
        chamber = cone_hull(_apply(g, r) for r in sample.rays)
        orientation = g[0][0] * g[1][1] - g[0][1] * g[1][0]
        idx = index if orientation > 0 else len(chambers) - 1 - index
        form = CanonicalForm(blocks, free, chamber.rays, _moduli(pres), idx)
        if best is None or form < best:
            best = form
    assert best is not None
    return best


def ring_form(pres: GradedPresentation) -> tuple[Any, ...]:
    """Canonical data of the graded ring alone (the ample class is forgotten)."""
    eff = cone_hull(pres.weights)
    return min((*_encode(pres, g), _moduli(pres)) for g in normalizing_maps(eff))


# ---------------------------------------------------------------------------
# bounds


@dataclass(frozen=True)
class SearchBounds:
    """Target dimension, exponent bound ``L``, weight entry bound ``B`` and ``m <= max_m``."""

    dim: int
    max_exp: int
    max_weight: int
    max_m: int

    def __post_init__(self) -> None:
        if self.dim < 1 or self.max_exp < 1 or self.max_weight < 1 or self.max_m < 0:
            raise ValueError("bounds must be positive")


def unimodular_placements(pres: GradedPresentation) -> Iterator[tuple[int, int, Matrix2]]:
    """Ordered relevant pairs ``(p, q)`` with ``det = +-1`` and the map sending them to ``e1, e2``."""
    ws = pres.weights
    for p in range(pres.N):
        for q in range(pres.N):
            if p == q:
                continue
            a, b = ws[p], ws[q]
            d = det2(a, b)
            if d not in (1, -1):
                continue
            face = FaceSet.of((p, q))
            if not is_F_face(face, pres.l):
                continue
            if not cone_hull((a, b)).interior_contains(pres.u):
                continue
            # inverse of the matrix with columns a, b
            g = ((b[1] * d, -b[0] * d), (-a[1] * d, a[0] * d))
            yield p, q, g


def in_bounds(pres: GradedPresentation, bounds: SearchBounds) -> bool:
    if presentation_dimension(pres) != bounds.dim or pres.m > bounds.max_m:
        return False
    if any(e > bounds.max_exp for b in pres.l for e in b):
        return False
    B = bounds.max_weight
    for _, _, g in unimodular_placements(pres):
        if all(abs(x) <= B for w in pres.weights for x in _apply(g, w)):
            return True
    return False


# ---------------------------------------------------------------------------
# search space


@dataclass(frozen=True)
class Constellation:
    """Block sizes ``n_0, ..., n_r`` with the admissible range of ``m``."""

    name: str
    ns: tuple[int, ...]
    m_min: int
    m_max: int | None

    def allows(self, m: int) -> bool:
        return m >= self.m_min and (self.m_max is None or m <= self.m_max)


def constellations(dim: int, max_m: int) -> list[tuple[Constellation, int]]:
    """Smooth-compatible block sizes with the ``m`` giving dimension ``dim``."""
    out = []
    fixed = [
        Constellation("I(b)", (3, 2, 1), 0, 0),
        Constellation("I(c)", (3, 1, 1), 0, 0),
        Constellation("I(d)", (2, 2, 2), 0, None),
        Constellation("I(e)", (2, 2, 1), 0, None),
        Constellation("I(f)", (2, 1, 1), 1, None),
        Constellation("II(a)", (2, 2, 2, 2), 0, 0),
        Constellation("II(b)", (2, 2, 2, 1), 0, 0),
        Constellation("II(c)", (2, 2, 1, 1), 0, 0),
    ]
    n0 = 3
    while 4 + n0 - 3 <= dim:
        fixed.insert(0, Constellation(f"I(a) n0={n0}", (n0, 2, 2), 0, None))
        n0 += 1
    for c in fixed:
        r = len(c.ns) - 1
        m = dim + r + 1 - sum(c.ns)
        if 0 <= m <= max_m and c.allows(m):
            out.append((c, m))
    return out


def _exponent_choices(ns: Sequence[int], L: int) -> Iterator[Exponents]:
    per_block = []
    for k in ns:
        if k == 1:
            per_block.append([(e,) for e in range(2, L + 1)])
        else:
            per_block.append(list(combinations_with_replacement(range(1, L + 1), k)))
    for choice in product(*per_block):
        # blocks of equal size are interchangeable: keep them in decreasing order
        if any(
            ns[i] == ns[i + 1] and choice[i] < choice[i + 1] for i in range(len(ns) - 1)
        ):
            continue
        yield tuple(choice)


def _exponent_rows_saturated(l: Exponents, m: int) -> bool:
    from .data import exponent_matrix

    L = exponent_matrix(l, m)
    factors = smith_form(L).invariant_factors
    return len(factors) == len(l) - 1 and all(f == 1 for f in factors)


@dataclass
class EnumerationResult:
    forms: list[CanonicalForm]
    partial: bool
    candidates: int
    elapsed: float
    constellations: list[str]

    def to_dict(self) -> dict[str, Any]:
        return {
            "forms": [f.to_dict() for f in self.forms],
            "partial": self.partial,
            "candidates": self.candidates,
            "elapsed": round(self.elapsed, 3),
            "constellations": self.constellations,
        }


def _pair_ok(face: FaceSet, l: Exponents) -> tuple[bool, bool]:
    """``(is F-face, smooth upstairs)`` for a two-element face."""
    f = is_F_face(face, l)
    return f, (stratum_smooth_upstairs(face, l) if f else True)


def _weight_candidates(l: Exponents, N: int, p: int, q: int, B: int, prune: bool = True) -> list[list[Vec2]]:
    """Per variable, the weights compatible with a smooth chamber inside the first quadrant.

    With ``w_p = (1,0)`` and ``w_q = (0,1)`` relevant: a weight below the
    x-axis always pairs relevantly with ``q``, one left of the y-axis with
    ``p``; a weight inside the quadrant pairs with ``p`` or ``q`` depending on
    the side of ``u``. Relevant pairs that are F-faces need determinant one
    and a smooth stratum.
    """
    out: list[list[Vec2]] = []
    for e in range(N):
        if e in (p, q):
            out.append([])
            continue
        F_pe, S_pe = _pair_ok(FaceSet.of((p, e)), l)
        F_eq, S_eq = _pair_ok(FaceSet.of((e, q)), l)
        cands = []
        for x in range(-B, B + 1):
            for y in range(-B, B + 1):
                if not prune:
                    if x or y:
                        cands.append((x, y))
                    continue
                if x <= 0 and y <= 0:
                    continue
                above = not F_eq or (x == 1 and S_eq)  # u between w and (0,1)
                below = not F_pe or (y == 1 and S_pe)  # u between (1,0) and w
                if y <= 0 and not above:
                    continue
                if x <= 0 and not below:
                    continue
                if x > 0 and y > 0 and not (above or below):
                    continue
                cands.append((x, y))
        out.append(cands)
    return out


def _search_prefix(args: tuple[Exponents, int, SearchBounds, bool, bool]) -> tuple[list[CanonicalForm], int]:
    """All forms for one exponent choice."""
    l, m, bounds, fano, prune = args
    n = sum(len(b) for b in l)
    N = n + m
    B = bounds.max_weight
    ranges = block_ranges(l)
    found: dict[tuple[Any, ...], CanonicalForm] = {}
    candidates = 0
    first_S = n
    for p in range(N):
        for q in range(N):
            if p == q:
                continue
            # free variables are interchangeable: use the first ones for p, q
            if p >= n and p != first_S:
                continue
            if q >= n and q != (first_S + 1 if p == first_S else first_S):
                continue
            F, S = _pair_ok(FaceSet.of((p, q)), l)
            if not F or (prune and not S):
                continue
            cand = _weight_candidates(l, N, p, q, B, prune)
            for ws in _assignments(l, m, n, p, q, cand, ranges, B):
                candidates += 1
                for form in _check_candidate(l, m, ws, fano):
                    found.setdefault((form.blocks, form.free, form.chamber, form.moduli), form)
    return list(found.values()), candidates


def _assignments(
    l: Exponents,
    m: int,
    n: int,
    p: int,
    q: int,
    cand: list[list[Vec2]],
    ranges: list[range],
    B: int,
) -> Iterator[list[Vec2]]:
    """Homogeneous weight assignments with ``w_p = e1``, ``w_q = e2``."""
    N = n + m
    fixed: dict[int, Vec2] = {p: (1, 0), q: (0, 1)}
    ref = next((i for i, rng in enumerate(ranges) if p in rng or q in rng), 0)
    order = [ref] + [i for i in range(len(l)) if i != ref]
    free_S = [k for k in range(n, N) if k not in fixed]
    cand_sets = [set(c) for c in cand]

    def blocks(idx: int, ws: dict[int, Vec2], mu: Vec2 | None) -> Iterator[tuple[dict[int, Vec2], Vec2]]:
        if idx == len(order):
            assert mu is not None
            yield ws, mu
            return
        i = order[idx]
        rng = list(ranges[i])
        open_vars = [j for j in rng if j not in fixed]
        if mu is None:
            # reference block: enumerate everything, then read off the degree
            for choice in product(*(cand[j] for j in open_vars)):
                new = dict(ws)
                new.update(zip(open_vars, choice))
                deg = _block_degree(l[i], rng, new)
                yield from blocks(idx + 1, new, deg)
            return
        if not open_vars:
            if _block_degree(l[i], rng, ws) == mu:
                yield from blocks(idx + 1, ws, mu)
            return
        solve, rest = open_vars[-1], open_vars[:-1]
        e_solve = l[i][rng.index(solve)]
        for choice in product(*(cand[j] for j in rest)):
            new = dict(ws)
            new.update(zip(rest, choice))
            partial = [0, 0]
            for e, j in zip(l[i], rng):
                if j != solve:
                    w = new[j]
                    partial[0] += e * w[0]
                    partial[1] += e * w[1]
            rx, ry = mu[0] - partial[0], mu[1] - partial[1]
            if rx % e_solve or ry % e_solve:
                continue
            w = (rx // e_solve, ry // e_solve)
            if w not in cand_sets[solve]:
                continue
            new[solve] = w
            yield from blocks(idx + 1, new, mu)

    base = dict(fixed)
    for ws, _ in blocks(0, base, None):
        pool = sorted(set.intersection(*(cand_sets[k] for k in free_S))) if free_S else []
        for free in combinations_with_replacement(pool, len(free_S)):
            full = dict(ws)
            full.update(zip(free_S, free))
            yield [full[j] for j in range(N)]


def _block_degree(block: Sequence[int], rng: range, ws: dict[int, Vec2]) -> Vec2:
    x = y = 0
    for e, j in zip(block, rng):
        x += e * ws[j][0]
        y += e * ws[j][1]
    return (x, y)


def _check_candidate(l: Exponents, m: int, ws: list[Vec2], fano: bool) -> Iterator[CanonicalForm]:
    eff = cone_hull(ws)
    if eff.shape != "pointed2d":
        return
    Q = (tuple(w[0] for w in ws), tuple(w[1] for w in ws))
    probe = GradedPresentation(l=l, m=m, Q=Q, u=(1, 1))
    mov = moving_cone(probe)
    if mov.dim < 2:
        return
    quadrant = ConeQ2("pointed2d", ((1, 0), (0, 1)))
    for chamber in git_chambers(probe):
        if chamber.dim < 2 or not all(quadrant.contains(r) for r in chamber.rays):
            continue
        u = representative_class(chamber)
        pres = replace(probe, u=u)
        if not global_flags(pres)["smooth"]:
            continue
        if fano and fano_status(pres) != "fano":
            continue
        if validate(reconstruct_P(pres)):
            continue
        yield canonical_form(pres)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CPLX1_THREADS", "1")))
    except ValueError:
        return 1


def enumerate_smooth_rho2(
    bounds: SearchBounds,
    fano: bool = False,
    constellation: Sequence[int] | None = None,
    budget_seconds: float | None = None,
    threads: int | None = None,
    prune: bool = True,
) -> EnumerationResult:
    """Canonical forms of smooth presentations within ``bounds``, one per chamber.

    ``constellation`` replaces the built-in block size list; ``m`` is then
    chosen to give ``bounds.dim``. ``prune=False`` drops the weight screens
    and tries every weight in the box (slow; a cross-check for the screens).
    """
    start = time.monotonic()
    if constellation is not None:
        ns = tuple(constellation)
        r = len(ns) - 1
        jobs_cons = [
            (Constellation(str(ns), ns, 0, None), m)
            for m in range(bounds.max_m + 1)
            if sum(ns) + m - r - 1 == bounds.dim
        ]
    else:
        jobs_cons = constellations(bounds.dim, bounds.max_m)
    jobs = []
    for cons, m in jobs_cons:
        for l in _exponent_choices(cons.ns, bounds.max_exp):
            if _exponent_rows_saturated(l, m):
                jobs.append((l, m, bounds, fano, prune))
    workers = threads if threads is not None else _threads()
    found: dict[tuple[Any, ...], CanonicalForm] = {}
    total = 0
    partial = False
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_search_prefix, jobs)
            for forms, count in results:
                total += count
                for f in forms:
                    found.setdefault((f.blocks, f.free, f.chamber, f.moduli), f)
    else:
        for job in jobs:
            if budget_seconds is not None and time.monotonic() - start > budget_seconds:
                partial = True
                break
            forms, count = _search_prefix(job)
            total += count
            for f in forms:
                found.setdefault((f.blocks, f.free, f.chamber, f.moduli), f)
    return EnumerationResult(
        forms=sorted(found.values()),
        partial=partial,
        candidates=total,
        elapsed=time.monotonic() - start,
        constellations=[f"{c.name} m={m}" for c, m in jobs_cons],
    )


# ---------------------------------------------------------------------------
# catalog comparison


@dataclass
class CatalogDiff:
    matched: list[tuple[CanonicalForm, str]]
    extra: list[CanonicalForm]
    missing: list[tuple[str, CanonicalForm]]

    @property
    def empty(self) -> bool:
        return not self.extra and not self.missing

    def lines(self) -> list[str]:
        out = [f"MATCH {label}: {form}" for form, label in self.matched]
        out += [f"EXTRA {form}" for form in self.extra]
        out += [f"MISSING {label}: {form}" for label, form in self.missing]
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "matched": [{"label": lab, "form": f.to_dict()} for f, lab in self.matched],
            "extra": [f.to_dict() for f in self.extra],
            "missing": [{"label": lab, "form": f.to_dict()} for lab, f in self.missing],
        }


def _label(fam: FamilyTemplate, params: dict[str, Any]) -> str:
    shown = ", ".join(
        f"{k}=({','.join(map(str, v))})" if isinstance(v, tuple) else f"{k}={v}" for k, v in params.items()
    )
    return f"{fam.id} [{shown}]"


def catalog_forms(
    bounds: SearchBounds, fano: bool = False, catalog: Catalog | None = None
) -> dict[tuple[Any, ...], tuple[str, CanonicalForm]]:
    """Canonical forms of the in-bounds catalog instances of the target dimension."""
    cat = catalog or default_catalog()
    theorem = "1.2" if fano else "1.1"
    grid = Grid(param_bound=2 * bounds.max_weight + bounds.max_exp + 2, max_m=bounds.max_m)
    out: dict[tuple[Any, ...], tuple[str, CanonicalForm]] = {}
    for fam in cat.by_theorem(theorem):
        for params in iter_parameters(fam, grid):
            pres = instantiate(fam, params)
            if presentation_dimension(pres) != bounds.dim:
                continue
            if not in_bounds(pres, bounds):
                continue
            form = canonical_form(pres)
            key = (form.blocks, form.free, form.chamber, form.moduli)
            out.setdefault(key, (_label(fam, params), form))
    return out


def match_against_catalog(
    forms: Sequence[CanonicalForm], bounds: SearchBounds, fano: bool = False, catalog: Catalog | None = None
) -> CatalogDiff:
    expected = catalog_forms(bounds, fano, catalog)
    matched, extra = [], []
    seen = set()
    for f in forms:
        key = (f.blocks, f.free, f.chamber, f.moduli)
        if key in expected:
            matched.append((f, expected[key][0]))
            seen.add(key)
        else:
            extra.append(f)
    missing = [(lab, form) for key, (lab, form) in sorted(expected.items(), key=lambda kv: kv[1][0]) if key not in seen]
    return CatalogDiff(matched=matched, extra=extra, missing=missing)


__all__ = [
    "CanonicalForm",
    "CatalogDiff",
    "Constellation",
    "EnumerationResult",
    "SearchBounds",
    "canonical_form",
    "catalog_forms",
    "constellations",
    "enumerate_smooth_rho2",
    "in_bounds",
    "match_against_catalog",
    "normalizing_maps",
    "ring_form",
]

