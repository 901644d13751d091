"""Divisor cones, smoothness, the anticanonical class and Mori chambers (rank two)."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from functools import cmp_to_key, lru_cache
from typing import Any, Sequence

from .cones import ConeQ2, cone_hull, intersect_all, sort_directions
from .cox import (
    GradedPresentation,
    presentation_dimension,
    reconstruct_P,
    relation_degree,
)
from .data import Exponents, block_ranges
from .faces import (
    FaceSet,
    face_cone,
    has_elementary_big_cone,
    is_F_face,
    minimal_relevant_faces,
    on_weight_ray,
    relevant_faces,
)
from .linalg import det2, determinant, from_columns, lattice_intersection, sublattice_generates

REPORT_SCHEMA_VERSION = 1


def _require_rank_two(pres: GradedPresentation) -> None:
    if pres.free_rank != 2:
        raise ValueError(f"grading group has free rank {pres.free_rank}; rank two is required")


def stratum_smooth_upstairs(face: FaceSet, l: Exponents) -> bool:
    """Jacobian criterion on the stratum of an F-face.

    Block ``i`` has vanishing gradient iff two of its variables vanish, or one
    vanishes with exponent at least two; full rank iff at most two blocks do.
    """
    if not is_F_face(face, l):
        raise ValueError("stratum smoothness needs an F-face")
    if len(l) - 1 < 2:
        return True
    vanishing = 0
    for block, rng in zip(l, block_ranges(l)):
        outside = [e for e, c in zip(block, rng) if c not in face]
        if len(outside) >= 2 or (len(outside) == 1 and outside[0] >= 2):
            vanishing += 1
    return vanishing <= 2


def _torsion_columns(pres: GradedPresentation) -> list[tuple[int, ...]]:
    k = len(pres.Q)
    out = []
    for t_idx, t in enumerate(pres.torsion):
        v = [0] * k
        v[pres.free_rank + t_idx] = t
        out.append(tuple(v))
    return out


def local_flags(face: FaceSet, pres: GradedPresentation) -> dict[str, bool]:
    """``Q_factorial``: the weight cone is two dimensional; ``factorial``: the weights generate ``K``."""
    return dict(_local_flags(face, pres))


@lru_cache(maxsize=65536)
def _local_flags(face: FaceSet, pres: GradedPresentation) -> tuple[tuple[str, bool], ...]:
    ws = pres.full_weights
    members = face.members()
    q_fact = face_cone(face, pres.weights).dim == 2
    gens = [ws[j] for j in members] + _torsion_columns(pres)
    factorial = bool(gens) and sublattice_generates(from_columns(gens), len(pres.Q))
    return (("Q_factorial", q_fact), ("factorial", factorial))


@lru_cache(maxsize=4096)
def _relevant(pres: GradedPresentation) -> tuple[FaceSet, ...]:
    """Relevant faces sufficient for all upward-closed questions.

    Off the weight rays the minimal relevant F-faces are enough: smoothness,
    factoriality and cone containment only improve on larger faces.
    """
    _require_rank_two(pres)
    if not any(pres.u):
        raise ValueError("ample class must be nonzero")
    if on_weight_ray(pres.weights, pres.u):
        return tuple(relevant_faces(pres))
    return tuple(minimal_relevant_faces(pres.l, pres.weights, pres.u))


def effective_r(l: Exponents) -> int:
    """``r`` after eliminating single linear variables."""
    redundant = sum(1 for b in l if len(b) == 1 and b[0] == 1)
    return len(l) - 1 - redundant


def global_flags(pres: GradedPresentation) -> dict[str, bool]:
    faces = _relevant(pres)
    quasismooth = all(stratum_smooth_upstairs(f, pres.l) for f in faces)
    flags = [local_flags(f, pres) for f in faces]
    q_factorial = all(f["Q_factorial"] for f in flags)
    factorial = all(f["factorial"] for f in flags)
    return {
        "irredundant": all(sum(b) >= 2 for b in pres.l),
        "non_toric": effective_r(pres.l) >= 2,
        "quasismooth": quasismooth,
        "Q_factorial": q_factorial,
        "locally_factorial": factorial,
        "smooth": quasismooth and factorial,
    }


def anticanonical(pres: GradedPresentation) -> tuple[int, ...]:
    """Sum of all generator degrees minus ``(r-1)`` times the relation degree."""
    mu = relation_degree(pres)
    total = [sum(col) for col in pres.Q]
    k = max(pres.r - 1, 0)
    return pres.reduce([t - k * x for t, x in zip(total, mu)])


@dataclass(frozen=True)
class DivisorCones:
    eff: ConeQ2
    mov: ConeQ2
    sample: ConeQ2

    @property
    def ample(self) -> ConeQ2:
        """Closure of the ample cone; membership in the open cone via :meth:`is_ample`."""
        return self.sample

    def is_ample(self, v: Sequence[int]) -> bool:
        """The ample cone is the relative interior of the semiample cone."""
        return self.sample.interior_contains(v)


def effective_cone(pres: GradedPresentation) -> ConeQ2:
    return cone_hull(pres.weights)


def moving_cone(pres: GradedPresentation) -> ConeQ2:
    ws = pres.weights
    return intersect_all(cone_hull(ws[:j] + ws[j + 1 :]) for j in range(len(ws)))


@lru_cache(maxsize=4096)
def divisor_cones(pres: GradedPresentation) -> DivisorCones:
    _require_rank_two(pres)
    eff = effective_cone(pres)
    mov = moving_cone(pres)
    if mov.dim < 2 or not mov.interior_contains(pres.u):
        raise ValueError("u not movable-interior")
    ws = pres.weights
    sample = intersect_all(face_cone(f, ws) for f in _relevant(pres))
    return DivisorCones(eff=eff, mov=mov, sample=sample)


def fano_status(pres: GradedPresentation) -> str:
    cones = divisor_cones(pres)
    kappa = anticanonical(pres)[:2]
    if cones.is_ample(kappa):
        return "fano"
    if cones.sample.contains(kappa) and cones.eff.interior_contains(kappa) and cones.eff.dim == 2:
        return "truly_almost_fano"
    return "neither"


@dataclass(frozen=True)
class PicardData:
    """The Picard group as a subgroup of ``K``: rank and index (``None`` if infinite)."""

    rank: int
    index: int | None


def picard_group(pres: GradedPresentation) -> PicardData:
    faces = _relevant(pres)
    if faces and all(local_flags(f, pres)["factorial"] for f in faces):
        # every face lattice is all of K
        return PicardData(rank=pres.free_rank, index=1)
    ws = pres.full_weights
    dim = len(pres.Q)
    tor = _torsion_columns(pres)
    lattice = None
    for f in faces:
        gens = from_columns([ws[j] for j in f.members()] + tor, dim)
        lattice = gens if lattice is None else lattice_intersection(lattice, gens, dim)
    if lattice is None:
        return PicardData(rank=0, index=None)
    cols = len(lattice[0]) if lattice and lattice[0] else 0
    rank_ = cols - len(pres.torsion)
    if cols < dim:
        return PicardData(rank=max(rank_, 0), index=None)
    det = abs(determinant(lattice))
    tors = 1
    for t in pres.torsion:
        tors *= t
    return PicardData(rank=rank_, index=det // tors)


def picard_number(pres: GradedPresentation) -> int:
    return picard_group(pres).rank


def git_cone_at(pres: GradedPresentation, point: Sequence[int]) -> ConeQ2:
    """Intersection of the F-face cones having ``point`` in their relative interior."""
    ws = pres.weights
    if on_weight_ray(ws, point):
        probe = GradedPresentation(pres.l, pres.m, pres.Q, tuple(point), pres.torsion, pres.lam)  # type: ignore[arg-type]
        faces = relevant_faces(probe)
    else:
        faces = minimal_relevant_faces(pres.l, ws, point)
    return intersect_all(face_cone(f, ws) for f in faces)


def git_chambers(pres: GradedPresentation, region: str = "mov") -> list[ConeQ2]:
    """Mori chambers inside ``Mov`` (or GIT chambers inside ``Eff``), counterclockwise.

    Sectors between consecutive weight rays are merged when they carry the same
    GIT cone, so rays that are not walls do not split chambers.
    """
    _require_rank_two(pres)
    area = moving_cone(pres) if region == "mov" else effective_cone(pres)
    if area.shape != "pointed2d":
        return [area] if area.dim == 2 else []
    start, stop = area.rays
    rays = [d for d in sort_directions(pres.weights) if area.contains(d)]
    rays = _ccw_from(start, rays + [start, stop])
    out: list[ConeQ2] = []
    for a, b in zip(rays, rays[1:]):
        g = (a[0] + b[0], a[1] + b[1])
        cone = git_cone_at(pres, g)
        if not out or out[-1] != cone:
            out.append(cone)
    return out


def _ccw_from(start: tuple[int, int], rays: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Sort rays of a pointed cone counterclockwise beginning at ``start``."""

    def cmp(a: tuple[int, int], b: tuple[int, int]) -> int:
        d = det2(a, b)
        return -1 if d > 0 else (1 if d < 0 else 0)

    return sorted(set(rays), key=cmp_to_key(cmp))


def representative_class(cone: ConeQ2) -> tuple[int, int]:
    """Interior lattice point of least ``|x|+|y|``, ties broken lexicographically."""
    if cone.dim < 2:
        raise ValueError("cone has empty interior")
    k = 1
    while True:
        pts = []
        for x in range(-k, k + 1):
            y = k - abs(x)
            for yy in {y, -y}:
                if cone.interior_contains((x, yy)):
                    pts.append((x, yy))
        if pts:
            return min(pts)
        k += 1


@dataclass
class VarietyReport:
    dim: int
    class_group: dict[str, Any]
    picard: dict[str, Any]
    rho: int
    u: list[int]
    mu: list[int]
    minus_K: list[int]
    eff: dict[str, Any]
    mov: dict[str, Any]
    sample: dict[str, Any]
    ample: dict[str, Any]
    flags: dict[str, bool]
    fano_status: str
    chamber_count: int
    elementary_big: bool
    u_ample: bool = True
    schema_version: int = REPORT_SCHEMA_VERSION
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @staticmethod
    def from_dict(doc: dict[str, Any]) -> "VarietyReport":
        if doc.get("schema_version") != REPORT_SCHEMA_VERSION:
            raise ValueError("unsupported report schema version")
        return VarietyReport(**doc)

    def render(self) -> str:
        rows = [
            ("dimension", str(self.dim)),
            ("class group", _group_str(self.class_group)),
            ("Picard group", f"rank {self.picard['rank']}, index {self.picard['index']}"),
            ("ample class u", str(tuple(self.u))),
            ("relation degree", str(tuple(self.mu))),
            ("-K", str(tuple(self.minus_K))),
            ("Eff", str(ConeQ2.from_dict(self.eff))),
            ("Mov", str(ConeQ2.from_dict(self.mov))),
            ("SAmple", str(ConeQ2.from_dict(self.sample))),
            ("Mori chambers", str(self.chamber_count)),
            ("elementary big cone", "yes" if self.elementary_big else "no"),
            ("Fano status", self.fano_status),
        ]
        rows += [(k, "yes" if v else "no") for k, v in self.flags.items()]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows + [("note", n) for n in self.notes])


def _group_str(g: dict[str, Any]) -> str:
    parts = [f"Z^{g['free_rank']}"] + [f"Z/{t}" for t in g["torsion"]]
    return " + ".join(parts)


def analyze(pres: GradedPresentation) -> VarietyReport:
    """All invariants of ``X`` for a rank-two grading with ``u`` in ``Mov°``."""
    _require_rank_two(pres)
    cones = divisor_cones(pres)
    flags = global_flags(pres)
    pic = picard_group(pres)
    notes = []
    if not flags["locally_factorial"]:
        notes.append("Picard group computed beyond the locally factorial case")
    return VarietyReport(
        dim=presentation_dimension(pres),
        class_group={"free_rank": pres.free_rank, "torsion": list(pres.torsion)},
        picard={"rank": pic.rank, "index": pic.index},
        rho=pic.rank,
        u=list(pres.u),
        mu=list(relation_degree(pres)),
        minus_K=list(anticanonical(pres)),
        eff=cones.eff.as_dict(),
        mov=cones.mov.as_dict(),
        sample=cones.sample.as_dict(),
        ample={**cones.ample.as_dict(), "open": True},
        flags=flags,
        fano_status=fano_status(pres),
        chamber_count=len(git_chambers(pres)),
        elementary_big=has_elementary_big_cone(pres),
        u_ample=cones.is_ample(pres.u),
        notes=notes,
    )


def p_matrix(pres: GradedPresentation):
    """Convenience: a defining matrix for the presentation."""
    return reconstruct_P(pres)


__all__ = [
    "DivisorCones",
    "PicardData",
    "VarietyReport",
    "analyze",
    "anticanonical",
    "divisor_cones",
    "fano_status",
    "git_chambers",
    "global_flags",
    "local_flags",
    "picard_group",
    "picard_number",
    "representative_class",
    "stratum_smooth_upstairs",
]

