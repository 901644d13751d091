import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import catalog_sample
from cplx1.catalog import instantiate
from cplx1.duplication import (
    SeedError,
    check_duplication,
    duplicate,
    flip_count,
    free_weights,
    make_step,
    random_duplications,
    remove_free,
    seed_recovery,
    wall_count,
)
from cplx1.enumeration import canonical_form
from cplx1.geometry import divisor_cones, fano_status

WITH_FREE = [x for x in catalog_sample() if x[2].m > 0]


def test_free_weights():
    seed = instantiate("T5.5-11-m2", {"m": 2, "a": 2})
    assert [w for _, w in free_weights(seed)] == [(0, 1), (2, 1)]
    assert free_weights(instantiate("T1.1-13", {"m": 0})) == []


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(WITH_FREE), st.data())
def test_duplication_properties(item, data):
    _, _, pres = item
    k = data.draw(st.integers(pres.n, pres.N - 1))
    checks = check_duplication(pres, k)
    assert checks.passed, checks.failures()
    after = duplicate(pres, k)
    assert remove_free(after, k + 1) == pres


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(WITH_FREE), st.data())
def test_duplications_commute_up_to_canonical_form(item, data):
    _, _, pres = item
    i = data.draw(st.integers(pres.n, pres.N - 1))
    j = data.draw(st.integers(pres.n, pres.N - 1))
    one = duplicate(duplicate(pres, i), j + (1 if j > i else 0))
    two = duplicate(duplicate(pres, j), i + (1 if i > j else 0))
    assert canonical_form(one) == canonical_form(two)


def test_seed_duplication_reaches_fano_table():
    for a in (1, 2, 3):
        seed = instantiate("T5.5-8-m2", {"m": 2, "a": a})
        grown = duplicate(seed, seed.N - 1)
        target = instantiate("T1.2-8", {"m": 3, "a": (a, a)})
        assert canonical_form(grown) == canonical_form(target)
        assert fano_status(grown) == "fano"


def test_duplication_outside_semiample_can_lose_fano():
    pres = instantiate("T1.1-7", {"m": 3})
    assert fano_status(pres) == "fano"
    k = pres.N - 1
    assert not divisor_cones(pres).sample.contains(pres.weights[k])
    assert fano_status(duplicate(pres, k)) == "truly_almost_fano"


@pytest.mark.parametrize(
    "fid,params",
    [
        ("T5.5-4A-m1", {"m": 1}),
        ("T5.5-8-m2", {"m": 2, "a": 1}),
        ("T5.5-11-m2", {"m": 2, "a": 1}),
    ],
)
def test_zero_flip_seeds(fid, params):
    pres = instantiate(fid, params)
    for k in range(pres.n, pres.N):
        assert flip_count(pres, k) == 0 == wall_count(pres, k)


def test_flip_count_example():
    pres = instantiate("T5.5-5", {"m": 1, "a": 1})
    k = pres.N - 1
    # rays (3,1), (1,1) and (0,1) lie on the closed side away from the weight
    assert flip_count(pres, k) == 2 == wall_count(pres, k)


def test_errors():
    pres = instantiate("T5.5-8-m2", {"m": 2, "a": 1})
    with pytest.raises(ValueError, match="relation variable"):
        duplicate(pres, 0)
    with pytest.raises(SeedError):
        seed_recovery(instantiate("T1.2-4A", {"m": 1, "c": -1}))


def test_seed_recovery_examples():
    rec = seed_recovery(instantiate("T1.2-8", {"m": 4, "a": (1, 1, 1)}))
    assert rec.family == "T5.5-8-m2" and rec.params["a"] == 1
    assert len(rec.steps) == 2 and rec.seed_dim <= 7
    rec = seed_recovery(instantiate("T1.2-11", {"m": 3, "a": (0, 1)}))
    assert rec.family == "T5.5-11-m3" and rec.steps == ()
    assert sorted(w for _, w in free_weights(rec.seed)) == [(0, 1), (0, 1), (1, 1)]
    none = seed_recovery(instantiate("T1.2-3", {"m": 0, "a": 1}))
    assert none.steps == () and none.family is None


def test_replay_is_exact():
    pres = instantiate("T1.2-8", {"m": 5, "a": (0, 1, 1, 1)})
    rec = seed_recovery(pres)
    assert rec.replay() == pres
    doc = rec.to_dict()
    assert doc["seed_family"] == rec.family and len(doc["steps"]) == len(rec.steps)
    step = make_step(rec.seed, rec.steps[0].index)
    assert step.to_dict()["variable"].startswith("S")


def test_random_duplications_are_reproducible():
    pool = [x[2] for x in WITH_FREE]
    a = random_duplications(pool, 5, seed=7)
    b = random_duplications(pool, 5, seed=7)
    assert [(p, k) for p, k, _ in a] == [(p, k) for p, k, _ in b]
