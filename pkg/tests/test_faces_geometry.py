import random
from itertools import product

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import catalog_sample
from cplx1.catalog import instantiate
from cplx1.cones import cone_hull, intersect_all
from cplx1.data import block_ranges
from cplx1.faces import FaceSet, face_cone, full_blocks, is_F_face, iter_F_faces, relevant_faces
from cplx1.geometry import (
    VarietyReport,
    analyze,
    anticanonical,
    divisor_cones,
    fano_status,
    git_chambers,
    global_flags,
    local_flags,
    representative_class,
    stratum_smooth_upstairs,
)
from cplx1.linalg import det2

SAMPLE = catalog_sample()
instances = st.sampled_from(SAMPLE)


@st.composite
def exponent_blocks(draw, max_vars=8, min_r=1):
    r = draw(st.integers(min_r, 4))
    blocks = []
    for _ in range(r + 1):
        size = draw(st.integers(1, 3))
        blocks.append(tuple(draw(st.lists(st.integers(1, 3), min_size=size, max_size=size))))
    assume(sum(len(b) for b in blocks) <= max_vars)
    return tuple(blocks)


def random_coefficients(rng, r, first_row=None):
    """2 x (r+1) integer matrix with pairwise independent columns."""
    while True:
        top = list(first_row) if first_row is not None else [rng.randint(-5, 5) for _ in range(r + 1)]
        cols = [(top[i], rng.randint(-5, 5)) for i in range(r + 1)]
        if all(det2(cols[i], cols[j]) != 0 for i in range(r + 1) for j in range(i + 1, r + 1)):
            return cols


def f_face_oracle(face, l, cols):
    """Some plane point z meets the coefficient columns in exactly the full-block pattern."""
    full = set(full_blocks(face, l))
    for z in product(range(-6, 7), repeat=2):
        pattern = {i for i, a in enumerate(cols) if z[0] * a[0] + z[1] * a[1] != 0}
        if pattern == full:
            return True
    return False


@settings(max_examples=200, deadline=None)
@given(exponent_blocks(), st.integers(0, 2**8 - 1), st.randoms(use_true_random=False))
def test_F_faces_against_plane_search(l, mask, rnd):
    N = sum(len(b) for b in l)
    face = FaceSet(mask & ((1 << N) - 1))
    r = len(l) - 1
    cols = random_coefficients(rnd, r) if r >= 2 else [(1, 0), (0, 1)]
    assert is_F_face(face, l) == f_face_oracle(face, l, cols)


def test_F_face_rule_by_hand():
    l = ((1, 1), (1, 1), (1, 1))
    # one vanishing block: F; exactly one full block: not F
    assert is_F_face(FaceSet.of([2, 3, 4, 5]), l)
    assert is_F_face(FaceSet.of([0, 1, 2, 3, 4]), l)
    # r = 3: two full blocks out of four is not F
    assert not is_F_face(FaceSet.of([0, 1, 2, 3, 4]), l + ((1, 1),))
    assert is_F_face(FaceSet.of([0, 2, 4]), l)
    assert not is_F_face(FaceSet.of([0, 1, 2]), l)
    # with r = 1 there is no relation, every face is an F-face
    assert all(is_F_face(FaceSet(m), ((1, 1), (2,))) for m in range(8))


def jacobian_rank_at(l, face, rng):
    """Rank of the relations' Jacobian at a random point of the face's stratum."""
    N = sum(len(b) for b in l)
    r = len(l) - 1
    point = [rng.choice([-3, -2, -1, 1, 2, 3]) if j in face else 0 for j in range(N)]
    T = sympy.symbols(f"t0:{N}")
    mons = []
    for block, rng_cols in zip(l, block_ranges(l)):
        mons.append(sympy.Mul(*[T[c] ** e for c, e in zip(rng_cols, block)]))
    values = [int(m.subs(dict(zip(T, point)))) for m in mons]
    cols = random_coefficients(rng, r, values if any(values) else None)
    rels = []
    for j in range(r - 1):
        a, b, c = cols[j], cols[j + 1], cols[j + 2]
        rels.append(det2(a, b) * mons[j + 2] + det2(b, c) * mons[j] + det2(c, a) * mons[j + 1])
    subs = dict(zip(T, point))
    assert all(g.subs(subs) == 0 for g in rels)
    J = sympy.Matrix([[sympy.diff(g, t).subs(subs) for t in T] for g in rels])
    return J.rank(), r - 1


@settings(max_examples=150, deadline=None)
@given(exponent_blocks(min_r=2), st.data(), st.integers(0, 2**32))
def test_stratum_smoothness_against_jacobian(l, data, seed):
    rnd = random.Random(seed)
    face = data.draw(st.sampled_from(list(iter_F_faces(l, 0))))
    got, want = jacobian_rank_at(l, face, rnd)
    assert stratum_smooth_upstairs(face, l) == (got == want)


def test_stratum_smoothness_rejects_non_F_faces():
    with pytest.raises(ValueError):
        stratum_smooth_upstairs(FaceSet.of([0, 1, 2]), ((1, 1), (1, 1), (1, 1)))


@pytest.mark.parametrize(
    "fid,params,minus_k,status",
    [
        ("T1.1-1", {"m": 0, "a": 1, "b": 1}, (3, 4), "fano"),
        ("T1.1-3", {"m": 0, "a": 1}, (2, 3), "fano"),
        ("T1.1-13", {"m": 0}, (2, 2), "fano"),
    ],
)
def test_spot_values(fid, params, minus_k, status):
    pres = instantiate(fid, params)
    assert anticanonical(pres)[:2] == minus_k
    assert fano_status(pres) == status
    assert global_flags(pres)["smooth"]


@settings(max_examples=60, deadline=None)
@given(instances)
def test_minimal_faces_agree_with_full_enumeration(item):
    _, _, pres = item
    cones = divisor_cones(pres)
    faces = relevant_faces(pres)
    # toric oracle: SAmple from every relevant face, not just the minimal ones
    assert intersect_all(face_cone(f, pres.weights) for f in faces) == cones.sample
    assert all(stratum_smooth_upstairs(f, pres.l) for f in faces) == global_flags(pres)["quasismooth"]
    assert all(local_flags(f, pres)["factorial"] for f in faces) == global_flags(pres)["locally_factorial"]


@settings(max_examples=60, deadline=None)
@given(instances)
def test_cone_chain_and_chambers(item):
    _, _, pres = item
    cones = divisor_cones(pres)
    assert cones.eff == cone_hull(pres.weights)
    for ray in cones.mov.rays:
        assert cones.eff.contains(ray)
    for ray in cones.sample.rays:
        assert cones.mov.contains(ray)
    assert cones.is_ample(pres.u)
    for region, outer in (("mov", cones.mov), ("eff", cones.eff)):
        chambers = git_chambers(pres, region=region)
        assert chambers[0].rays[0] == outer.rays[0] and chambers[-1].rays[1] == outer.rays[1]
        for a, b in zip(chambers, chambers[1:]):
            assert a.rays[1] == b.rays[0]
        for c in chambers:
            assert c.interior_contains(representative_class(c))
    assert sum(1 for c in git_chambers(pres) if c.interior_contains(pres.u)) == 1
    assert cones.sample in git_chambers(pres)


def test_report_round_trip_and_errors():
    pres = instantiate("T1.1-3", {"m": 0, "a": 1})
    rep = analyze(pres)
    assert VarietyReport.from_dict(rep.to_dict()) == rep
    assert "Fano status" in rep.render()
    doc = rep.to_dict()
    doc["schema_version"] = -1
    with pytest.raises(ValueError):
        VarietyReport.from_dict(doc)
    from dataclasses import replace

    with pytest.raises(ValueError, match="movable"):
        divisor_cones(replace(pres, u=(1, 0)))
