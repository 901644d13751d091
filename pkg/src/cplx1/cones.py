"""Rational convex cones in the plane, exact."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key, lru_cache
from typing import Iterable, Sequence

from .linalg import det2, primitive

Vec2 = tuple[int, int]


def _half(v: Sequence[int]) -> int:
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def angle_cmp(a: Sequence[int], b: Sequence[int]) -> int:
    """Compare directions by counterclockwise angle from the positive x-axis."""
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha - hb
    d = det2(a, b)
    return -1 if d > 0 else (1 if d < 0 else 0)


def sort_directions(vectors: Iterable[Sequence[int]]) -> list[Vec2]:
    """Distinct primitive directions, sorted counterclockwise."""
    dirs = {primitive(v) for v in vectors if any(v)}
    return sorted(dirs, key=cmp_to_key(angle_cmp))  # type: ignore[arg-type]


@dataclass(frozen=True)
class ConeQ2:
    """A closed convex cone in ``Q^2``.

    ``shape`` is one of ``zero``, ``ray``, ``line``, ``pointed2d``, ``halfplane``,
    ``full``.  For ``pointed2d`` the rays go counterclockwise; a ``halfplane`` is
    ``{x : det(rays[0], x) >= 0}``.
    """

    shape: str
    rays: tuple[Vec2, ...] = ()

    @property
    def dim(self) -> int:
        return {"zero": 0, "ray": 1, "line": 1}.get(self.shape, 2)

    def contains(self, v: Sequence[int]) -> bool:
        s = self.shape
        if s == "full":
            return True
        if not any(v):
            return True
        if s == "zero":
            return False
        a = self.rays[0]
        if s == "ray":
            return det2(a, v) == 0 and a[0] * v[0] + a[1] * v[1] > 0
        if s == "line":
            return det2(a, v) == 0
        if s == "halfplane":
            return det2(a, v) >= 0
        return det2(a, v) >= 0 and det2(v, self.rays[1]) >= 0

    def interior_contains(self, v: Sequence[int]) -> bool:
        """Membership in the relative interior."""
        s = self.shape
        if s == "full":
            return True
        if s == "zero":
            return not any(v)
        a = self.rays[0]
        if s == "ray":
            return any(v) and det2(a, v) == 0 and a[0] * v[0] + a[1] * v[1] > 0
        if s == "line":
            return det2(a, v) == 0
        if s == "halfplane":
            return det2(a, v) > 0
        return det2(a, v) > 0 and det2(v, self.rays[1]) > 0

    def _constraints(self) -> tuple[list[Vec2], list[Vec2]]:
        """Inequalities ``det(a, x) >= 0`` and equalities ``det(a, x) == 0`` as lists of ``a``."""
        s = self.shape
        if s == "full":
            return [], []
        if s == "zero":
            return [], [(1, 0), (0, 1)]
        a = self.rays[0]
        if s == "ray":
            # det(a, x) == 0 and x . a >= 0, the latter as det(rot(a), x) >= 0
            return [(a[1], -a[0])], [a]
        if s == "line":
            return [], [a]
        if s == "halfplane":
            return [a], []
        b = self.rays[1]
        return [a, (-b[0], -b[1])], []

    def intersect(self, other: "ConeQ2") -> "ConeQ2":
        if self.shape == "pointed2d" and other.shape == "pointed2d":
            # extremal rays of the overlap are extremal rays of one of the two
            both = [v for v in self.rays + other.rays if self.contains(v) and other.contains(v)]
            return cone_hull(both)
        if self.shape == "full":
            return other
        if other.shape == "full":
            return self
        ineq1, eq1 = self._constraints()
        ineq2, eq2 = other._constraints()
        ineq, eq = ineq1 + ineq2, eq1 + eq2
        if not ineq and not eq:
            return FULL
        candidates: list[Vec2] = []
        for a in ineq + eq:
            normal = (-a[1], a[0])
            candidates += [a, (-a[0], -a[1]), normal, (-normal[0], -normal[1])]
        ok = [
            c
            for c in candidates
            if all(det2(a, c) >= 0 for a in ineq) and all(det2(a, c) == 0 for a in eq)
        ]
        return cone_hull(ok)

    def as_dict(self) -> dict:
        return {"shape": self.shape, "rays": [list(r) for r in self.rays]}

    @staticmethod
    def from_dict(doc: dict) -> "ConeQ2":
        return ConeQ2(doc["shape"], tuple(tuple(r) for r in doc["rays"]))  # type: ignore[arg-type]

    def __str__(self) -> str:
        if self.shape in ("zero", "full"):
            return self.shape
        inner = ", ".join(f"({a},{b})" for a, b in self.rays)
        return f"{self.shape}[{inner}]"


ZERO = ConeQ2("zero")
FULL = ConeQ2("full")


def cone_hull(vectors: Iterable[Sequence[int]]) -> ConeQ2:
    """Convex cone generated by integer vectors."""
    return _hull(frozenset(tuple(v) for v in vectors))


@lru_cache(maxsize=65536)
def _hull(vectors: frozenset) -> ConeQ2:
    dirs = sort_directions(vectors)
    if not dirs:
        return ZERO
    if len(dirs) == 1:
        return ConeQ2("ray", (dirs[0],))
    k = len(dirs)
    big_gap = None
    straight = []
    for i in range(k):
        a, b = dirs[i], dirs[(i + 1) % k]
        d = det2(a, b)
        if d < 0:
            big_gap = i
        elif d == 0:
            # consecutive distinct primitive directions with det 0 are opposite
            straight.append(i)
    if big_gap is not None:
        return ConeQ2("pointed2d", (dirs[(big_gap + 1) % k], dirs[big_gap]))
    if len(straight) >= 2:
        a = max(dirs[straight[0]], dirs[(straight[0] + 1) % k])
        return ConeQ2("line", (a, (-a[0], -a[1])))
    if straight:
        i = straight[0]
        b = dirs[(i + 1) % k]
        return ConeQ2("halfplane", (b, dirs[i]))
    return FULL


def intersect_all(cones: Iterable[ConeQ2]) -> ConeQ2:
    out = FULL
    for c in cones:
        out = out.intersect(c)
    return out
