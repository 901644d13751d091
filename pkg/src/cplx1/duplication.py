"""Duplicating free weights, flip counts and recovery of minimal seeds."""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Any, Sequence

from .catalog import Grid, default_catalog, instantiate, iter_parameters
from .cones import ConeQ2
from .cox import GradedPresentation, presentation_dimension, presentation_to_dict, ring_dimension
from .geometry import anticanonical, divisor_cones, fano_status, git_chambers, global_flags
from .linalg import det2, primitive

Vec2 = tuple[int, int]


def free_weights(pres: GradedPresentation) -> list[tuple[int, tuple[int, ...]]]:
    """Indices and degrees of the variables not occurring in any relation."""
    return [(j, pres.full_weights[j]) for j in range(pres.n, pres.N)]


def _free_label(pres: GradedPresentation, j: int) -> str:
    return f"S{j - pres.n + 1}"


def _check_free(pres: GradedPresentation, k: int) -> None:
    if not pres.n <= k < pres.N:
        raise ValueError("cannot duplicate a relation variable")


def duplicate(pres: GradedPresentation, k: int) -> GradedPresentation:
    """Add a copy of the free variable ``k`` right after it; ``u`` is kept."""
    _check_free(pres, k)
    Q = tuple(tuple(row[: k + 1]) + (row[k],) + tuple(row[k + 1 :]) for row in pres.Q)
    return replace(pres, m=pres.m + 1, Q=Q)


def remove_free(pres: GradedPresentation, k: int) -> GradedPresentation:
    """Drop the free variable ``k`` (the inverse of duplicating ``k - 1``)."""
    _check_free(pres, k)
    Q = tuple(tuple(row[:k]) + tuple(row[k + 1 :]) for row in pres.Q)
    return replace(pres, m=pres.m - 1, Q=Q)


@dataclass(frozen=True)
class DuplicationChecks:
    """The preservation properties of one duplication, evaluated exactly."""

    dim_plus_one: bool
    sample_equal: bool
    smooth_equivalent: bool
    complete_intersection: bool
    fano_preserved: bool
    minus_K_shift: bool

    @property
    def passed(self) -> bool:
        return all(vars(self).values())

    def failures(self) -> list[str]:
        return [name for name, ok in vars(self).items() if not ok]


def check_duplication(before: GradedPresentation, k: int, after: GradedPresentation | None = None) -> DuplicationChecks:
    after = after if after is not None else duplicate(before, k)
    sample_before = divisor_cones(before).sample
    sample_after = divisor_cones(after).sample
    w = before.weights[k]
    fano_ok = True
    if sample_before.contains(w) and fano_status(before) == "fano":
        fano_ok = fano_status(after) == "fano"
    shift = tuple(a - b for a, b in zip(anticanonical(after)[:2], anticanonical(before)[:2]))
    return DuplicationChecks(
        dim_plus_one=presentation_dimension(after) == presentation_dimension(before) + 1,
        sample_equal=sample_before == sample_after,
        smooth_equivalent=global_flags(before)["smooth"] == global_flags(after)["smooth"],
        complete_intersection=after.l == before.l and ring_dimension(after) == ring_dimension(before) + 1,
        fano_preserved=fano_ok,
        minus_K_shift=shift == tuple(w),
    )


# ---------------------------------------------------------------------------
# flips


def _sides(pres: GradedPresentation) -> tuple[ConeQ2, ConeQ2]:
    """The two closed parts of ``Eff`` outside the open ample cone, clockwise side first."""
    cones = divisor_cones(pres)
    eff, sample = cones.eff, cones.sample
    if eff.shape != "pointed2d" or sample.shape != "pointed2d":
        raise ValueError("flip counting needs pointed two-dimensional cones")
    e0, e1 = eff.rays
    s0, s1 = sample.rays
    return ConeQ2("pointed2d", (e0, s0)) if e0 != s0 else ConeQ2("ray", (e0,)), (
        ConeQ2("pointed2d", (s1, e1)) if s1 != e1 else ConeQ2("ray", (e1,))
    )


def _flip_side(pres: GradedPresentation, k: int) -> ConeQ2:
    _check_free(pres, k)
    cones = divisor_cones(pres)
    w = pres.weights[k]
    if cones.is_ample(w):
        raise ValueError("duplicated weight lies in the ample cone")
    lower, upper = _sides(pres)
    s0 = cones.sample.rays[0]
    return upper if det2(s0, w) <= 0 else lower


def flip_count(pres: GradedPresentation, k: int) -> int:
    """Flips in one duplication of ``w_k``: weight rays on the far side, minus one."""
    side = _flip_side(pres, k)
    rays = {primitive(w) for w in pres.weights if any(w) and side.contains(w)}
    return len(rays) - 1


def wall_count(pres: GradedPresentation, k: int) -> int:
    """Flip count read off the chamber structure: chambers of ``Eff`` on the far side."""
    side = _flip_side(pres, k)
    return sum(1 for c in git_chambers(pres, region="eff") if c.dim == 2 and side.intersect(c) == c)


@dataclass(frozen=True)
class DuplicationStep:
    source: GradedPresentation
    index: int
    result: GradedPresentation
    flips: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "source": presentation_to_dict(self.source),
            "variable": _free_label(self.source, self.index),
            "index": self.index,
            "weight": list(self.source.full_weights[self.index]),
            "result": presentation_to_dict(self.result),
            "flips": self.flips,
        }


def make_step(pres: GradedPresentation, k: int) -> DuplicationStep:
    return DuplicationStep(pres, k, duplicate(pres, k), flip_count(pres, k))


# ---------------------------------------------------------------------------
# seeds


class SeedError(ValueError):
    pass


@lru_cache(maxsize=1)
def _seed_index() -> dict[Any, tuple[str, tuple[tuple[str, Any], ...]]]:
    from .enumeration import canonical_form

    out: dict[Any, tuple[str, tuple[tuple[str, Any], ...]]] = {}
    cat = default_catalog()
    for fam in cat.by_theorem("5.5"):
        for params in iter_parameters(fam, Grid(param_bound=4, max_m=4)):
            pres = instantiate(fam, params)
            out.setdefault(_seed_key(canonical_form(pres)), (fam.id, tuple(params.items())))
    return out


def _seed_key(form: Any) -> tuple[Any, ...]:
    return (form.blocks, form.free, form.chamber)


@dataclass(frozen=True)
class SeedRecovery:
    seed: GradedPresentation
    family: str | None
    params: dict[str, Any]
    steps: tuple[DuplicationStep, ...]

    @property
    def seed_dim(self) -> int:
        return presentation_dimension(self.seed)

    def replay(self) -> GradedPresentation:
        pres = self.seed
        for step in self.steps:
            pres = duplicate(pres, step.index)
        return pres

    def to_dict(self) -> dict[str, Any]:
        return {
            "seed_family": self.family,
            "seed_params": {k: list(v) if isinstance(v, tuple) else v for k, v in self.params.items()},
            "seed": presentation_to_dict(self.seed),
            "seed_dim": self.seed_dim,
            "steps": [s.to_dict() for s in self.steps],
        }


def _match_seed(pres: GradedPresentation) -> tuple[str, dict[str, Any]] | None:
    from .enumeration import canonical_form

    try:
        key = _seed_key(canonical_form(pres))
    except ValueError:
        return None
    hit = _seed_index().get(key)
    return (hit[0], dict(hit[1])) if hit else None


def _undo_candidates(pres: GradedPresentation) -> list[int]:
    """Free variables equal to their left neighbour; removing one undoes a duplication."""
    fw = pres.full_weights
    return [j for j in range(pres.n + 1, pres.N) if fw[j] == fw[j - 1]]


def seed_recovery(pres: GradedPresentation) -> SeedRecovery:
    """Undo duplications until a seed of the minimal list is reached.

    Presentations without free variables are their own seed. The returned
    seed lives in the coordinates of ``pres``, so replaying the steps gives
    back ``pres`` exactly.
    """
    if pres.m == 0:
        return SeedRecovery(pres, None, {}, ())

    def search(current: GradedPresentation, trail: list[int]) -> SeedRecovery | None:
        hit = _match_seed(current)
        if hit is not None:
            steps = []
            p = current
            for k in reversed(trail):
                step = make_step(p, k)
                steps.append(step)
                p = step.result
            if p != pres:
                return None
            return SeedRecovery(current, hit[0], hit[1], tuple(steps))
        seen: set[tuple[int, ...]] = set()
        for j in _undo_candidates(current):
            w = current.full_weights[j]
            if w in seen:
                continue
            seen.add(w)
            smaller = remove_free(current, j)
            try:
                divisor_cones(smaller)
            except ValueError:
                continue
            found = search(smaller, trail + [j - 1])
            if found is not None:
                return found
        return None

    result = search(pres, [])
    if result is None:
        raise SeedError("no seed of the minimal list matches")
    return result


def random_duplications(
    instances: Sequence[GradedPresentation], count: int, seed: int = 0
) -> list[tuple[GradedPresentation, int, DuplicationChecks]]:
    """``count`` random (instance, free variable) duplications with their checks."""
    import random

    rng = random.Random(seed)
    pool = [p for p in instances if p.m > 0]
    out = []
    for _ in range(count):
        pres = rng.choice(pool)
        k = rng.randrange(pres.n, pres.N)
        out.append((pres, k, check_duplication(pres, k)))
    return out


__all__ = [
    "DuplicationChecks",
    "DuplicationStep",
    "SeedError",
    "SeedRecovery",
    "check_duplication",
    "duplicate",
    "flip_count",
    "free_weights",
    "make_step",
    "random_duplications",
    "remove_free",
    "seed_recovery",
    "wall_count",
]


