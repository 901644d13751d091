"""Faces of the positive orthant: F-faces, relevant faces and their fan cones.

A face is stored as a bitmask over the global variable order (``T`` blocks,
then ``S``); bit ``j`` set means coordinate ``j`` is nonzero on the face.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .cones import ConeQ2, cone_hull
from .cox import GradedPresentation
from .data import Exponents, block_ranges
from .linalg import IntMatrix, det2

DEFAULT_FACE_BOUND = 24


@dataclass(frozen=True, order=True)
class FaceSet:
    """A face of the orthant, as the set of coordinates allowed to be nonzero."""

    mask: int

    @staticmethod
    def of(indices: Iterable[int]) -> "FaceSet":
        mask = 0
        for i in indices:
            mask |= 1 << i
        return FaceSet(mask)

    def members(self) -> tuple[int, ...]:
        out, mask, j = [], self.mask, 0
        while mask:
            if mask & 1:
                out.append(j)
            mask >>= 1
            j += 1
        return tuple(out)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, j: int) -> bool:
        return bool(self.mask >> j & 1)

    def complement(self, size: int) -> "FaceSet":
        return FaceSet(((1 << size) - 1) & ~self.mask)

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return len(self), self.members()


def block_masks(l: Exponents) -> list[int]:
    out = []
    for rng in block_ranges(l):
        mask = 0
        for c in rng:
            mask |= 1 << c
        out.append(mask)
    return out


def full_blocks(face: FaceSet, l: Exponents) -> list[int]:
    """Blocks ``i`` whose monomial ``T_i^{l_i}`` does not vanish on the face."""
    return [i for i, bm in enumerate(block_masks(l)) if face.mask & bm == bm]


def _f_face_count_ok(count: int, r: int) -> bool:
    # The monomial values lie in the row space of A (a plane) with pairwise
    # independent columns: either none survives, or at most one vanishes.
    return r < 2 or count == 0 or count >= r


def is_F_face(face: FaceSet, l: Exponents) -> bool:
    """Does the orbit of this face meet the total coordinate space?"""
    return _f_face_count_ok(len(full_blocks(face, l)), len(l) - 1)


def iter_F_faces(l: Exponents, m: int) -> Iterator[FaceSet]:
    """All F-faces by popcount, then lexicographically by members."""
    N = sum(len(b) for b in l) + m
    r = len(l) - 1
    masks = block_masks(l)
    for size in range(N + 1):
        for members in combinations(range(N), size):
            mask = 0
            for j in members:
                mask |= 1 << j
            count = sum(1 for bm in masks if mask & bm == bm)
            if _f_face_count_ok(count, r):
                yield FaceSet(mask)


def enumerate_F_faces(l: Exponents, m: int, bound: int = DEFAULT_FACE_BOUND) -> list[FaceSet]:
    N = sum(len(b) for b in l) + m
    if N > bound:
        raise ValueError(
            f"{N} variables exceed the face bound {bound}; use iter_F_faces to stream faces"
        )
    return list(iter_F_faces(l, m))


def face_cone(face: FaceSet, weights: Sequence[Sequence[int]]) -> ConeQ2:
    if isinstance(weights, tuple):
        return _face_cone_cached(face, weights)
    return cone_hull(weights[j] for j in face.members())


@lru_cache(maxsize=65536)
def _face_cone_cached(face: FaceSet, weights: tuple) -> ConeQ2:
    return cone_hull(weights[j] for j in face.members())


def relevant_faces(pres: GradedPresentation, bound: int = DEFAULT_FACE_BOUND) -> list[FaceSet]:
    """All F-faces whose weight cone has ``u`` in its relative interior."""
    if not any(pres.u):
        raise ValueError("ample class must be nonzero")
    ws = pres.weights
    return [f for f in enumerate_F_faces(pres.l, pres.m, bound) if face_cone(f, ws).interior_contains(pres.u)]


def on_weight_ray(weights: Sequence[Sequence[int]], point: Sequence[int]) -> bool:
    return any(
        det2(w, point) == 0 and w[0] * point[0] + w[1] * point[1] > 0 for w in weights
    )


def minimal_relevant_faces(
    l: Exponents, weights: Sequence[Sequence[int]], point: Sequence[int]
) -> list[FaceSet]:
    """Relevant F-faces containing every other relevant F-face from below.

    ``point`` must not lie on a weight ray.  Every relevant face contains two
    variables whose weights enclose ``point`` strictly; if that pair is not an
    F-face it covers some full blocks, and the smallest F-faces above it add
    further full blocks until ``r`` blocks are covered.
    """
    r = len(l) - 1
    masks = block_masks(l)
    N = len(weights)
    found: set[int] = set()
    left = [j for j in range(N) if det2(weights[j], point) > 0]
    right = [j for j in range(N) if det2(point, weights[j]) > 0]
    for a in left:
        for b in right:
            if det2(weights[a], weights[b]) <= 0:
                continue
            mask = (1 << a) | (1 << b)
            covered = [i for i, bm in enumerate(masks) if mask & bm == bm]
            if _f_face_count_ok(len(covered), r):
                found.add(mask)
                continue
            others = [i for i in range(r + 1) if i not in covered]
            for extra in combinations(others, r - len(covered)):
                add = mask
                for i in extra:
                    add |= masks[i]
                found.add(add)
    return [FaceSet(m) for m in sorted(found, key=lambda x: (bin(x).count("1"), x))]


@dataclass(frozen=True)
class FanCone:
    """The cone generated by the columns of ``P`` outside a face."""

    columns: tuple[int, ...]
    rays: tuple[tuple[int, ...], ...]
    r: int


@dataclass(frozen=True)
class ConeClass:
    tag: str
    leaf: int | None = None

    def __str__(self) -> str:
        return f"leaf({self.leaf})" if self.tag == "leaf" else self.tag


def fan_cone(face: FaceSet, P: IntMatrix, r: int) -> FanCone:
    """``P`` applied to the complementary face; ``r`` is the number of exponent rows."""
    N = len(P[0])
    cols = face.complement(N).members()
    rays = tuple(tuple(row[j] for row in P) for j in cols)
    return FanCone(columns=cols, rays=rays, r=r)


def _leaf_of(ray: Sequence[int], r: int) -> int | None:
    """Leaf index whose relative interior holds the ray, ``None`` for the lineality part."""
    upper = ray[:r]
    if not any(upper):
        return None
    if all(x < 0 for x in upper) and len(set(upper)) == 1:
        return 0
    nz = [i for i, x in enumerate(upper) if x != 0]
    if len(nz) == 1 and upper[nz[0]] > 0:
        return nz[0] + 1
    raise ValueError("ray does not lie on the tropical variety")


def classify_cone(cone: FanCone) -> ConeClass:
    leaves: dict[int, int] = {}
    lineality = 0
    for ray in cone.rays:
        leaf = _leaf_of(ray, cone.r)
        if leaf is None:
            lineality += 1
        else:
            leaves[leaf] = leaves.get(leaf, 0) + 1
    if not leaves:
        return ConeClass("lineality")
    if len(leaves) == 1:
        return ConeClass("leaf", next(iter(leaves)))
    if len(leaves) == cone.r + 1:
        if lineality == 0 and all(v == 1 for v in leaves.values()):
            return ConeClass("elementary_big")
        return ConeClass("big")
    return ConeClass("other")


def is_weakly_tropical(pres: GradedPresentation, P: IntMatrix, faces: Sequence[FaceSet]) -> bool:
    """All cones of relevant faces lie in a single leaf.

    ``faces`` may be the minimal relevant faces: larger faces give subcones.
    """
    return all(
        classify_cone(fan_cone(f, P, pres.r)).tag in ("leaf", "lineality") for f in faces
    )


def has_elementary_big_cone(pres: GradedPresentation) -> bool:
    """Is there a relevant face missing exactly one variable per block and no free one?

    Such a face is always an F-face (no block survives), and its cone has one
    ray per leaf and none in the lineality space.
    """
    ws = pres.weights
    ranges = block_ranges(pres.l)
    everything = set(range(pres.N))
    for pick in product(*ranges):
        rest = everything.difference(pick)
        if cone_hull(ws[j] for j in rest).interior_contains(pres.u):
            return True
    return False


def fan_cones_distinct(P: IntMatrix, faces: Sequence[FaceSet], r: int) -> bool:
    """Different faces give different cones, compared by their generated rays."""
    seen = set()
    for f in faces:
        c = fan_cone(f, P, r)
        key = frozenset(c.rays)
        if key in seen:
            return False
        seen.add(key)
    return True
