"""End-to-end acceptance checks, one test per criterion."""

import random
import time
from itertools import combinations

import sympy

from cplx1.catalog import (
    Grid,
    coincidence_pairs,
    default_catalog,
    grid_instances,
    instantiate,
    toric_rho2_duplication_depth,
    toric_rho2_fano,
    verify_catalog,
    z_family,
)
from cplx1.duplication import flip_count, random_duplications, seed_recovery, SeedError, wall_count
from cplx1.enumeration import SearchBounds, enumerate_smooth_rho2, match_against_catalog
from cplx1.faces import FaceSet, is_F_face
from cplx1.geometry import anticanonical, divisor_cones, fano_status, stratum_smooth_upstairs
from cplx1.data import block_ranges

GRID = Grid(param_bound=3, max_m=5)


def _failures(results):
    return [r.line() for r in results if not r.passed]


def test_criterion_01_catalog():
    """1 catalog verification: every smooth-table instance on the grid passes"""
    start = time.monotonic()
    results = verify_catalog(GRID, theorem="1.1")
    assert results
    assert _failures(results) == []
    for r in results:
        for key in ("smooth", "non_toric", "class_group_Z2", "rho_2", "u_ample"):
            assert r.checks[key], (r.line(), key)
    assert time.monotonic() - start < 120


def test_criterion_02_fano_tables():
    """2 Fano tables: -K and Fano status match the tables exactly"""
    for theorem, status in (("1.2", "fano"), ("1.4", "truly_almost_fano")):
        results = verify_catalog(GRID, theorem=theorem)
        assert results and _failures(results) == []
        assert all(r.checks["minus_K"] and r.checks["fano_status"] for r in results)
    spots = [
        ("T1.2-1", {"m": 0, "a": 1, "b": 1}, (3, 4)),
        ("T1.2-3", {"m": 0, "a": 1}, (2, 3)),
        ("T1.2-13", {"m": 0}, (2, 2)),
    ]
    for fid, params, minus_k in spots:
        pres = instantiate(fid, params)
        assert anticanonical(pres)[:2] == minus_k
        assert fano_status(pres) == "fano"


def test_criterion_03_dimension_three_fano():
    """3 dimension-3 Fano enumeration: exactly 5 forms, empty catalog diff"""
    bounds = SearchBounds(dim=3, max_exp=3, max_weight=3, max_m=2)
    result = enumerate_smooth_rho2(bounds, fano=True)
    diff = match_against_catalog(result.forms, bounds, fano=True)
    assert not result.partial
    assert len(result.forms) == 5
    assert diff.empty, diff.lines()
    assert result.elapsed < 600


def test_criterion_04_negative_constellations():
    """4 negative cases: constellations (3,1,1) and (2,1,1) with m >= 1 give nothing smooth"""
    runs = [
        ((3, 1, 1), SearchBounds(dim=2, max_exp=3, max_weight=6, max_m=0)),
        ((2, 1, 1), SearchBounds(dim=3, max_exp=3, max_weight=4, max_m=3)),
        ((2, 1, 1), SearchBounds(dim=4, max_exp=3, max_weight=3, max_m=3)),
    ]
    for ns, bounds in runs:
        result = enumerate_smooth_rho2(bounds, constellation=ns)
        assert result.constellations, ns
        assert result.forms == [], (ns, [str(f) for f in result.forms])


def test_criterion_05_duplication_suite():
    """5 duplication suite: 100 random duplications keep all preserved properties"""
    pool = [pres for fam, _, pres in grid_instances(GRID) if fam.theorem in ("1.1", "1.2", "1.4") and pres.m > 0]
    runs = random_duplications(pool, 100, seed=20261016)
    assert len(runs) == 100
    bad = [(pres, k, checks.failures()) for pres, k, checks in runs if not checks.passed]
    assert bad == []


def test_criterion_06_seed_recovery():
    """6 seed recovery: every Fano-table instance with m >= 1 reaches a seed of dim <= 7 and replays exactly"""
    failures = []
    count = 0
    for fam, params, pres in grid_instances(GRID, theorem="1.2"):
        if pres.m < 1:
            continue
        count += 1
        try:
            rec = seed_recovery(pres)
        except SeedError as exc:
            failures.append((fam.id, params, str(exc)))
            continue
        if rec.seed_dim > 7 or rec.replay() != pres:
            failures.append((fam.id, params, "dim or replay"))
    assert count > 0
    assert failures == []


ZERO_FLIP = {"T5.5-4A-m1", "T5.5-4A-m2", "T5.5-4B", "T5.5-4C", "T5.5-8-m2", "T5.5-8-m3", "T5.5-8-m4", "T5.5-11-m2", "T5.5-11-m3"}


def _zero_pattern(fid, params):
    if fid in ZERO_FLIP:
        return True
    if fid == "T5.5-9":
        return all(params[k] == 0 for k in ("a3", "a4", "a5", "a6"))
    if fid == "T5.5-12":
        return params["b"] == 0
    return False


def test_criterion_07_flip_counts():
    """7 flip counts: zero where expected, and equal to the chamber wall count on every step"""
    disagree, nonzero = [], []
    steps = 0
    for fam, params, pres in grid_instances(GRID, theorem="5.5"):
        ample = divisor_cones(pres)
        for k in range(pres.n, pres.N):
            if ample.is_ample(pres.weights[k]):
                continue
            steps += 1
            flips = flip_count(pres, k)
            if _zero_pattern(fam.id, params) and flips != 0:
                nonzero.append((fam.id, params, k, flips))
            walls = wall_count(pres, k)
            if flips != walls:
                disagree.append((fam.id, params, k, flips, walls))
    assert steps > 0
    assert nonzero == []
    assert disagree == []


def _face_table(face_vars, l, r):
    """Explicit F-face and smoothness table for rays and two-dimensional faces.

    ``face_vars`` are ``("T", i, j)`` or ``("S", k)``; returns (F-face, smooth or None).
    """
    ts = [v for v in face_vars if v[0] == "T"]
    ns = [len(b) for b in l]
    if not ts:
        return True, False
    if len(ts) == 1:
        _, i, j = ts[0]
        if ns[i] < 2:
            return False, None
        return True, r == 2 and ns[i] == 2 and l[i][1 - j] == 1
    (_, i1, j1), (_, i2, j2) = ts
    if i1 == i2:
        if ns[i1] < 3:
            return False, None
        other = next(j for j in range(3) if j not in (j1, j2))
        return True, r == 2 and ns[i1] == 3 and l[i1][other] == 1
    if ns[i1] >= 2 and ns[i2] >= 2:
        smooth = (r == 2 and any(ns[i] == 2 and l[i][1 - j] == 1 for i, j in ((i1, j1), (i2, j2)))) or (
            r == 3 and ns[i1] == ns[i2] == 2 and l[i1][1 - j1] == 1 and l[i2][1 - j2] == 1
        )
        return True, smooth
    if ns[i1] == ns[i2] == 1 and r == 2:
        return True, None
    return False, None


def _random_exponents(rng, max_vars):
    while True:
        r = rng.randint(2, 4)
        l = []
        for _ in range(r + 1):
            size = rng.randint(1, 3)
            if size == 1:
                l.append((rng.randint(2, 3),))
            else:
                l.append(tuple(rng.randint(1, 3) for _ in range(size)))
        if sum(len(b) for b in l) <= max_vars:
            return tuple(l)


def _jacobian_smooth(l, members, rng):
    N = sum(len(b) for b in l)
    r = len(l) - 1
    T = sympy.symbols(f"t0:{N}")
    point = {T[j]: (sympy.Rational(rng.randint(1, 9), rng.randint(1, 5)) * rng.choice([-1, 1]) if j in members else 0) for j in range(N)}
    mons = [sympy.Mul(*[T[c] ** e for c, e in zip(rng_cols, b)]) for b, rng_cols in zip(l, block_ranges(l))]
    values = [m.subs(point) for m in mons]
    while True:
        if any(values):
            cols = [(values[i], rng.randint(-5, 5)) for i in range(r + 1)]
        else:
            cols = [(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(r + 1)]
        if all(cols[a][0] * cols[b][1] - cols[a][1] * cols[b][0] != 0 for a, b in combinations(range(r + 1), 2)):
            break
    det = lambda a, b: a[0] * b[1] - a[1] * b[0]
    rels = [
        det(cols[j], cols[j + 1]) * mons[j + 2] + det(cols[j + 1], cols[j + 2]) * mons[j] + det(cols[j + 2], cols[j]) * mons[j + 1]
        for j in range(r - 1)
    ]
    assert all(g.subs(point) == 0 for g in rels)
    J = sympy.Matrix([[sympy.diff(g, t).subs(point) for t in T] for g in rels])
    return J.rank() == r - 1


def test_criterion_08_oracles():
    """8 oracle equivalence: F-faces against the explicit table, stratum smoothness against Jacobian rank"""
    rng = random.Random(8)
    covered = 0
    for _ in range(500):
        l = _random_exponents(rng, max_vars=10)
        r = len(l) - 1
        m = rng.randint(0, 3)
        n = sum(len(b) for b in l)
        labels = [("T", i, j) for i, b in enumerate(l) for j in range(len(b))] + [("S", k) for k in range(m)]
        for size in (1, 2):
            for combo in combinations(range(n + m), size):
                face = FaceSet.of(combo)
                F, smooth = _face_table([labels[c] for c in combo], l, r)
                assert is_F_face(face, l) == F, (l, combo)
                if F and smooth is not None:
                    assert stratum_smooth_upstairs(face, l) == smooth, (l, combo)
                covered += 1
    assert covered > 0
    checked = 0
    for _ in range(120):
        l = _random_exponents(rng, max_vars=8)
        n = sum(len(b) for b in l)
        for _ in range(4):
            members = {j for j in range(n) if rng.random() < 0.5}
            face = FaceSet.of(members)
            if not is_F_face(face, l):
                continue
            assert stratum_smooth_upstairs(face, l) == _jacobian_smooth(l, members, rng), (l, members)
            checked += 1
    assert checked >= 100


EXPECTED_PATTERNS = {("T1.1-4", "T1.1-5"), ("T1.1-4", "T1.1-6"), ("T1.1-7", "T1.1-9"), ("T1.1-10", "T1.1-12")}


def test_criterion_09_coincidences():
    """9 coincidences: exactly the four known family-pair patterns share a ring"""
    pairs = coincidence_pairs(max_dim=8, param_bound=3)
    patterns = {c.pattern for c in pairs}
    assert EXPECTED_PATTERNS <= patterns
    seven_nine = [c for c in pairs if c.pattern == ("T1.1-7", "T1.1-9")]
    assert any(dict(c.second[1]).get("a3") == 1 and dict(c.second[1]).get("a4") == 1 for c in seven_nine)
    assert patterns == EXPECTED_PATTERNS, sorted(patterns - EXPECTED_PATTERNS)


def test_criterion_10_toric_comparison():
    """10 toric comparison: Z_n Fano, Z_n' not Fano, no lower-dimensional origin for Z_n"""
    for n in range(4, 9):
        assert toric_rho2_fano(z_family(n))
        assert not toric_rho2_fano(z_family(n, first_multiplicity=2))
        assert toric_rho2_duplication_depth(z_family(n)).min_dim == n - 1
