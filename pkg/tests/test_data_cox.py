from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import catalog_sample
from cplx1.catalog import instantiate
from cplx1.cox import (
    GradedPresentation,
    gl2_transform,
    grading_from_P,
    presentation_dimension,
    presentation_from_data,
    presentation_from_dict,
    presentation_to_dict,
    reconstruct_P,
    relation_degree,
    relations,
)
from cplx1.data import (
    AdmissibleOp,
    DefiningData,
    apply_admissible,
    assemble_P,
    data_from_dict,
    data_to_dict,
    is_irredundant,
    make_irredundant,
    validate,
)
from cplx1.enumeration import canonical_form, ring_form
from cplx1.linalg import matvec

SAMPLE = catalog_sample()
instances = st.sampled_from(SAMPLE)


def no3(a=1):
    return instantiate("T1.1-3", {"m": 0, "a": a})


def test_relation_degree_and_dimension():
    pres = no3()
    assert relation_degree(pres) == (2, 2)
    assert presentation_dimension(pres) == 3
    assert presentation_dimension(instantiate("T1.1-13", {"m": 0})) == 4


def test_relations_text():
    data = reconstruct_P(no3())
    (g,) = relations(data)
    text = str(g)
    assert "T01" in text or "T0" in text


@settings(max_examples=60, deadline=None)
@given(instances)
def test_reconstructed_P_is_valid_and_regrades(item):
    _, _, pres = item
    data = reconstruct_P(pres)
    assert validate(data) == []
    P = assemble_P(data)
    # every weight row of Q annihilates the rows of P
    for row in P:
        assert all(sum(q * x for q, x in zip(qrow, row)) == 0 for qrow in pres.Q)
    group, Q = grading_from_P(P, data.n + data.m)
    assert group.free_rank == 2 and group.torsion == ()
    assert gl2_transform(Q, pres.Q) is not None


OPS = st.sampled_from(["add-upper-row-to-lower", "row-op-lower", "swap-in-block", "swap-blocks", "swap-dprime-cols"])


@settings(max_examples=80, deadline=None)
@given(instances, st.lists(st.tuples(OPS, st.integers(0, 10), st.integers(0, 10), st.integers(-2, 2)), max_size=4))
def test_admissible_operations_keep_the_ring(item, ops):
    _, _, pres = item
    data = reconstruct_P(pres)
    for kind, x, y, mult in ops:
        if kind == "add-upper-row-to-lower":
            params = (1 + x % data.r, y % data.s, mult)
        elif kind == "row-op-lower":
            if data.s < 2:
                continue
            params = (x % data.s, (x + 1 + y % (data.s - 1)) % data.s, mult)
        elif kind == "swap-in-block":
            i = x % (data.r + 1)
            params = (i, y % data.ns[i], mult % data.ns[i])
        elif kind == "swap-blocks":
            params = (x % (data.r + 1), y % (data.r + 1))
        else:
            if data.m < 2:
                continue
            params = (x % data.m, y % data.m)
        data = apply_admissible(data, AdmissibleOp(kind, params))
        assert validate(data) == []
    moved = presentation_from_data(data)
    assert ring_form(moved) == ring_form(pres)


@settings(max_examples=40, deadline=None)
@given(instances, st.integers(-3, 3))
def test_lower_row_operations_keep_the_variety(item, mult):
    _, _, pres = item
    data = reconstruct_P(pres)
    moved = apply_admissible(data, AdmissibleOp("add-upper-row-to-lower", (1, 0, mult)))
    Q = presentation_from_data(moved).Q
    g = gl2_transform(pres.Q, Q)
    assert g is not None
    u = tuple(matvec(g, pres.u))
    again = GradedPresentation(l=pres.l, m=pres.m, Q=Q, u=u, lam=pres.lam)
    assert canonical_form(again) == canonical_form(pres)


def test_validate_reports_violations():
    good = reconstruct_P(no3())
    assert validate(good) == []
    bad = DefiningData(l=good.l, m=0, d=((2, 2, 0, 0, 0, 2),), dprime=((),))
    problems = validate(bad)
    assert any("not primitive" in p for p in problems)
    dup = DefiningData(l=((1, 1), (1, 1), (2,)), m=0, d=((-1, -1, 1, 1, 0),), dprime=((),))
    assert any("pairwise distinct" in p for p in validate(dup))
    dep = DefiningData(l=good.l, m=0, d=good.d, dprime=good.dprime, A=((1, 0), (2, 0), (0, 1)))
    assert any("linearly dependent" in p for p in validate(dep))
    assert any("s = " in p for p in validate(DefiningData(l=good.l, m=0, d=(), dprime=())))


def test_make_irredundant_drops_linear_single_blocks():
    data = DefiningData(
        l=((1, 1), (1, 1), (1,), (1, 1)),
        m=0,
        d=((-1, -1, 0, 0, 0, 1, 0), (1, 0, 1, 0, 1, 0, 0)),
        dprime=((), ()),
    )
    assert not is_irredundant(data) or data.l[2] == (1,)
    red = make_irredundant(data)
    assert red.r == 2 and all(len(b) >= 2 or b[0] >= 2 for b in red.l)
    assert red.n == data.n - 1
    # the ring loses one variable and one relation
    assert red.n + red.m - (red.r - 1) == data.n + data.m - (data.r - 1) - 0 - 1 + 1 - 1 + 1


def test_serialization_round_trips():
    pres = instantiate("T1.1-13", {"m": 0})
    assert presentation_from_dict(presentation_to_dict(pres)) == pres
    data = reconstruct_P(no3())
    back, u = data_from_dict(data_to_dict(data, (1, 2)))
    assert back.l == data.l and back.d == data.d and u == (1, 2)
    assert back.A == tuple((Fraction(x), Fraction(y)) for x, y in data.coefficients)
    with pytest.raises(ValueError):
        presentation_from_dict({"l": [[1]], "Q": [[1]], "u": [1, 1], "bogus": 1})
    with pytest.raises(ValueError):
        data_from_dict({"l": [[1, 1]], "d": [[1, 1]], "extra": 0})


def test_inhomogeneous_presentation_is_rejected():
    pres = no3()
    Q = (pres.Q[0], tuple(x + (1 if j == 0 else 0) for j, x in enumerate(pres.Q[1])))
    with pytest.raises(ValueError, match="not homogeneous"):
        relation_degree(GradedPresentation(l=pres.l, m=0, Q=Q, u=pres.u))
