"""The classification tables as parameterized families, plus the toric comparison model."""

from __future__ import annotations

import ast
import json
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations_with_replacement, product
from pathlib import Path
from typing import Any, Iterator, Mapping, Sequence

from .cox import GradedPresentation
from .geometry import analyze

CATALOG_FORMAT = "cplx1-catalog"
CATALOG_VERSION = 1
DEFAULT_LAMBDA = Fraction(2)


class CatalogError(ValueError):
    """The catalog file is malformed."""


class ConstraintError(ValueError):
    """Parameters violate a family constraint."""


class OneBased(tuple):
    """An integer vector indexed from ``first``, as in ``c[k]``."""

    first: int

    def __new__(cls, values: Sequence[int], first: int = 1) -> "OneBased":
        obj = super().__new__(cls, values)
        obj.first = first
        return obj

    def at(self, k: int) -> int:
        if not self.first <= k < self.first + len(self):
            raise ConstraintError(f"index {k} outside the vector")
        return tuple.__getitem__(self, k - self.first)


# ---------------------------------------------------------------------------
# expressions

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod,
}
_CMPOPS = {
    ast.Lt: operator.lt,
    ast.LtE: operator.le,
    ast.Gt: operator.gt,
    ast.GtE: operator.ge,
    ast.Eq: operator.eq,
    ast.NotEq: operator.ne,
}


def _flatten(args: Sequence[Any]) -> list[int]:
    out: list[int] = []
    for a in args:
        if isinstance(a, tuple):
            out.extend(a)
        else:
            out.append(a)
    return out


def _max(*args: Any) -> int:
    vals = _flatten(args)
    if not vals:
        raise ConstraintError("max of an empty vector")
    return max(vals)


def _min(*args: Any) -> int:
    vals = _flatten(args)
    if not vals:
        raise ConstraintError("min of an empty vector")
    return min(vals)


_FUNCS = {"max": _max, "min": _min, "sum": lambda *a: sum(_flatten(a)), "len": lambda v: len(v)}


def _eval(node: ast.AST, env: Mapping[str, Any]) -> Any:
    if isinstance(node, ast.Expression):
        return _eval(node.body, env)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, str)) and not isinstance(node.value, bool):
        return node.value
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise CatalogError(f"unknown name {node.id!r}")
        return env[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_eval(node.operand, env)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.Not):
        return not _eval(node.operand, env)
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, ast.BoolOp):
        vals = (_eval(v, env) for v in node.values)
        return all(vals) if isinstance(node.op, ast.And) else any(vals)
    if isinstance(node, ast.Compare):
        left = _eval(node.left, env)
        for op, comp in zip(node.ops, node.comparators):
            if type(op) not in _CMPOPS:
                raise CatalogError("unsupported comparison")
            right = _eval(comp, env)
            if not _CMPOPS[type(op)](left, right):
                return False
            left = right
        return True
    if isinstance(node, ast.IfExp):
        return _eval(node.body, env) if _eval(node.test, env) else _eval(node.orelse, env)
    if isinstance(node, ast.Subscript):
        vec = _eval(node.value, env)
        if not isinstance(vec, OneBased):
            raise CatalogError("only vectors can be indexed")
        return vec.at(_eval(node.slice, env))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS:
        return _FUNCS[node.func.id](*(_eval(a, env) for a in node.args))
    raise CatalogError(f"unsupported expression: {ast.dump(node)}")


def evaluate(expr: int | str, env: Mapping[str, Any]) -> Any:
    """Evaluate a catalog expression; integers pass through."""
    if isinstance(expr, int):
        return expr
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise CatalogError(f"bad expression {expr!r}") from exc
    return _eval(tree, env)


# ---------------------------------------------------------------------------
# families

Expr = int | str


@dataclass(frozen=True)
class VectorSpec:
    first: int
    lo: int
    hi: int


@dataclass(frozen=True)
class FamilyTemplate:
    id: str
    theorem: str
    number: str
    blocks: tuple[tuple[Expr, ...], ...]
    m_range: tuple[int, int]
    T: tuple[tuple[Expr, Expr], ...]
    u: tuple[Expr, Expr]
    dim: str
    status: str
    scalars: Mapping[str, tuple[int, int]] = field(default_factory=dict)
    derived: Mapping[str, str] = field(default_factory=dict)
    vectors: Mapping[str, VectorSpec] = field(default_factory=dict)
    constraints: tuple[str, ...] = ()
    S: tuple[Expr, Expr] | None = None
    S_list: tuple[tuple[Expr, Expr], ...] | None = None
    minus_K: tuple[Expr, Expr] | None = None
    lam: bool = False
    u_table: tuple[Expr, Expr] | None = None
    note: str = ""

    @staticmethod
    def from_dict(doc: Mapping[str, Any]) -> "FamilyTemplate":
        try:
            vectors = {
                k: VectorSpec(int(v["first"]), int(v["range"][0]), int(v["range"][1]))
                for k, v in doc.get("vectors", {}).items()
            }
            return FamilyTemplate(
                id=str(doc["id"]),
                theorem=str(doc["theorem"]),
                number=str(doc["number"]),
                blocks=tuple(tuple(b) for b in doc["blocks"]),
                m_range=(int(doc["m"][0]), int(doc["m"][1])),
                T=tuple((w[0], w[1]) for w in doc["T"]),
                u=(doc["u"][0], doc["u"][1]),
                dim=str(doc["dim"]),
                status=str(doc["status"]),
                scalars={k: (int(v[0]), int(v[1])) for k, v in doc.get("scalars", {}).items()},
                derived=dict(doc.get("derived", {})),
                vectors=vectors,
                constraints=tuple(doc.get("constraints", ())),
                S=tuple(doc["S"]) if "S" in doc else None,  # type: ignore[arg-type]
                S_list=tuple((w[0], w[1]) for w in doc["S_list"]) if "S_list" in doc else None,
                minus_K=tuple(doc["minus_K"]) if "minus_K" in doc else None,  # type: ignore[arg-type]
                lam=bool(doc.get("lam", False)),
                u_table=tuple(doc["u_table"]) if "u_table" in doc else None,  # type: ignore[arg-type]
                note=str(doc.get("note", "")),
            )
        except (KeyError, TypeError, IndexError, ValueError) as exc:
            raise CatalogError(f"malformed family entry {doc.get('id', '?')!r}: {exc}") from exc

    @property
    def parameter_names(self) -> tuple[str, ...]:
        return tuple(self.scalars) + tuple(self.vectors)


@dataclass(frozen=True)
class Catalog:
    version: int
    families: tuple[FamilyTemplate, ...]

    def family(self, family_id: str) -> FamilyTemplate:
        for f in self.families:
            if f.id == family_id:
                return f
        raise KeyError(f"no family {family_id!r}")

    def by_theorem(self, theorem: str) -> list[FamilyTemplate]:
        return [f for f in self.families if f.theorem == theorem]


def load_catalog(path: str | Path | None = None) -> Catalog:
    if path is None:
        text = resources.files("cplx1").joinpath("data/catalog.json").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"catalog is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != CATALOG_FORMAT:
        raise CatalogError("not a catalog file")
    if doc.get("version") != CATALOG_VERSION:
        raise CatalogError(f"unsupported catalog version {doc.get('version')!r}")
    families = tuple(FamilyTemplate.from_dict(f) for f in doc.get("families", ()))
    ids = [f.id for f in families]
    if len(set(ids)) != len(ids):
        raise CatalogError("duplicate family ids")
    return Catalog(version=CATALOG_VERSION, families=families)


_DEFAULT: Catalog | None = None


def default_catalog() -> Catalog:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_catalog()
    return _DEFAULT


# ---------------------------------------------------------------------------
# instantiation


def _environment(family: FamilyTemplate, params: Mapping[str, Any]) -> dict[str, Any]:
    env: dict[str, Any] = {}
    if "m" not in params:
        lo, hi = family.m_range
        if lo != hi:
            raise ConstraintError("parameter m is required")
        env["m"] = lo
    else:
        env["m"] = int(params["m"])
    for name in family.scalars:
        if name not in params:
            raise ConstraintError(f"parameter {name} is required")
        env[name] = int(params[name])
    for name, spec in family.vectors.items():
        if name not in params:
            raise ConstraintError(f"parameter {name} is required")
        env[name] = OneBased(tuple(int(x) for x in params[name]), spec.first)
    for name, expr in family.derived.items():
        env[name] = params[name] if name in params else evaluate(expr, env)
    return env


def check_constraints(family: FamilyTemplate, params: Mapping[str, Any]) -> dict[str, Any]:
    """Return the evaluation environment, raising on the first violated constraint."""
    env = _environment(family, params)
    m = env["m"]
    lo, hi = family.m_range
    if m < lo:
        raise ConstraintError(f"constraint violated: m >= {lo}")
    if m > hi:
        raise ConstraintError(f"constraint violated: m <= {hi}")
    for name, (slo, shi) in family.scalars.items():
        if not slo <= env[name] <= shi:
            raise ConstraintError(f"constraint violated: {slo} <= {name} <= {shi}")
    for name, spec in family.vectors.items():
        vec = env[name]
        if len(vec) != m - spec.first + 1:
            raise ConstraintError(f"constraint violated: {name} has {m - spec.first + 1} entries")
        if any(x > y for x, y in zip(vec, vec[1:])):
            raise ConstraintError(f"constraint violated: {name} is non-decreasing")
        if any(not spec.lo <= x <= spec.hi for x in vec):
            raise ConstraintError(f"constraint violated: entries of {name} in [{spec.lo}, {spec.hi}]")
    for name, expr in family.derived.items():
        if env[name] != evaluate(expr, env):
            raise ConstraintError(f"constraint violated: {name} == {expr}")
    for c in family.constraints:
        if not evaluate(c, env):
            raise ConstraintError(f"constraint violated: {c}")
    return env


def instantiate(family: FamilyTemplate | str, params: Mapping[str, Any] | None = None) -> GradedPresentation:
    """Fill in the family's patterns; ``lambda`` defaults to 2 for the two-relation family."""
    fam = default_catalog().family(family) if isinstance(family, str) else family
    params = dict(params or {})
    env = check_constraints(fam, params)
    m = env["m"]
    l = tuple(tuple(int(evaluate(e, env)) for e in block) for block in fam.blocks)
    if any(e < 1 for b in l for e in b):
        raise ConstraintError("constraint violated: exponents are positive")
    weights = [(evaluate(x, env), evaluate(y, env)) for x, y in fam.T]
    if fam.S_list is not None:
        if len(fam.S_list) != m:
            raise CatalogError(f"{fam.id}: explicit free weights disagree with m")
        weights += [(evaluate(x, env), evaluate(y, env)) for x, y in fam.S_list]
    elif m:
        if fam.S is None:
            raise CatalogError(f"{fam.id}: no free weight pattern")
        for k in range(1, m + 1):
            env_k = dict(env, k=k)
            weights.append((evaluate(fam.S[0], env_k), evaluate(fam.S[1], env_k)))
    if len(weights) != sum(len(b) for b in l) + m:
        raise CatalogError(f"{fam.id}: weight count does not match the variables")
    Q = (tuple(w[0] for w in weights), tuple(w[1] for w in weights))
    u = (int(evaluate(fam.u[0], env)), int(evaluate(fam.u[1], env)))
    lam = None
    if fam.lam:
        lam = Fraction(params.get("lambda", DEFAULT_LAMBDA))
        if lam in (0, 1):
            raise ConstraintError("constraint violated: lambda not in {0, 1}")
    return GradedPresentation(l=l, m=m, Q=Q, u=u, lam=lam)


def expected_minus_K(family: FamilyTemplate, params: Mapping[str, Any]) -> tuple[int, int] | None:
    if family.minus_K is None:
        return None
    env = check_constraints(family, params)
    return (int(evaluate(family.minus_K[0], env)), int(evaluate(family.minus_K[1], env)))


def expected_status(family: FamilyTemplate, params: Mapping[str, Any]) -> str:
    """``fano``, ``truly_almost_fano`` or ``any``."""
    if family.status in ("fano", "truly_almost_fano", "any"):
        return family.status
    return str(evaluate(family.status, check_constraints(family, params)))


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class Grid:
    """Integer parameters bounded by ``param_bound`` in absolute value, ``m <= max_m``."""

    param_bound: int = 3
    max_m: int = 5

    @staticmethod
    def parse(text: str) -> "Grid":
        """Parse ``"params<=3,m<=5"``."""
        bound, max_m = 3, 5
        for part in filter(None, (p.strip() for p in text.split(","))):
            key, sep, value = part.partition("<=")
            if not sep:
                raise ValueError(f"bad grid term {part!r}")
            key = key.strip()
            try:
                num = int(value)
            except ValueError as exc:
                raise ValueError(f"bad grid bound {value!r}") from exc
            if num < 0:
                raise ValueError("grid bounds must be non-negative")
            if key == "params":
                bound = num
            elif key == "m":
                max_m = num
            else:
                raise ValueError(f"unknown grid key {key!r}")
        return Grid(bound, max_m)


def iter_parameters(family: FamilyTemplate, grid: Grid = Grid()) -> Iterator[dict[str, Any]]:
    """All admissible parameter choices on the grid, deterministic order."""
    b = grid.param_bound
    lo_m, hi_m = family.m_range
    scalar_ranges = [
        range(max(lo, -b), min(hi, b) + 1) for lo, hi in family.scalars.values()
    ]
    for m in range(lo_m, min(hi_m, grid.max_m) + 1):
        vec_choices = []
        for spec in family.vectors.values():
            size = m - spec.first + 1
            if size < 0:
                vec_choices.append([])
                continue
            vals = range(max(spec.lo, -b), min(spec.hi, b) + 1)
            vec_choices.append(list(combinations_with_replacement(vals, size)))
        for scal in product(*scalar_ranges):
            for vecs in product(*vec_choices):
                params: dict[str, Any] = {"m": m}
                params.update(zip(family.scalars, scal))
                params.update(zip(family.vectors, vecs))
                try:
                    env = check_constraints(family, params)
                except ConstraintError:
                    continue
                if any(abs(env[d]) > b for d in family.derived):
                    continue
                for d in family.derived:
                    params[d] = env[d]
                yield params


def grid_instances(
    grid: Grid = Grid(), theorem: str | None = None, family_id: str | None = None, catalog: Catalog | None = None
) -> Iterator[tuple[FamilyTemplate, dict[str, Any], GradedPresentation]]:
    cat = catalog or default_catalog()
    for fam in cat.families:
        if theorem is not None and fam.theorem != theorem:
            continue
        if family_id is not None and fam.id != family_id:
            continue
        for params in iter_parameters(fam, grid):
            yield fam, params, instantiate(fam, params)


# ---------------------------------------------------------------------------
# verification


@dataclass
class InstanceVerification:
    family: str
    params: dict[str, Any]
    checks: dict[str, bool]
    messages: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        shown = ", ".join(f"{k}={_fmt(v)}" for k, v in self.params.items())
        failed = [k for k, v in self.checks.items() if not v]
        tail = f"  failed: {', '.join(failed)}" if failed else ""
        return f"{tag} {self.family} [{shown}]{tail}"

    def to_dict(self) -> dict[str, Any]:
        return {
            "family": self.family,
            "params": {k: list(v) if isinstance(v, tuple) else v for k, v in self.params.items()},
            "checks": self.checks,
            "passed": self.passed,
            "messages": self.messages,
        }


def _fmt(v: Any) -> str:
    return "(" + ",".join(map(str, v)) + ")" if isinstance(v, tuple) else str(v)


def verify_instance(
    pres: GradedPresentation, expectations: Mapping[str, Any] | None = None, family: str = "", params: Mapping[str, Any] | None = None
) -> InstanceVerification:
    """Check smoothness, non-toricity, ``Cl = Z^2``, ``rho = 2``, ampleness of ``u`` and table values.

    ``expectations`` may carry ``minus_K``, ``status`` (``fano``,
    ``truly_almost_fano`` or ``any``) and ``dim``.
    """
    from .cox import reconstruct_P
    from .data import validate

    exp = dict(expectations or {})
    checks: dict[str, bool] = {}
    messages: list[str] = []
    try:
        data = reconstruct_P(pres)
        problems = validate(data)
        checks["valid_P"] = not problems
        messages += problems
        report = analyze(pres)
    except ValueError as exc:
        return InstanceVerification(family, dict(params or {}), {"analyzable": False}, [str(exc)])
    checks["smooth"] = report.flags["smooth"]
    checks["non_toric"] = report.flags["non_toric"]
    checks["class_group_Z2"] = report.class_group == {"free_rank": 2, "torsion": []}
    checks["rho_2"] = report.rho == 2
    checks["u_ample"] = report.u_ample
    if "dim" in exp:
        checks["dim"] = report.dim == exp["dim"]
    if exp.get("minus_K") is not None:
        checks["minus_K"] = tuple(report.minus_K) == tuple(exp["minus_K"])
        if not checks["minus_K"]:
            messages.append(f"-K = {tuple(report.minus_K)}, table says {tuple(exp['minus_K'])}")
    status = exp.get("status", "any")
    if status != "any":
        checks["fano_status"] = report.fano_status == status
        if not checks["fano_status"]:
            messages.append(f"status {report.fano_status}, table says {status}")
    return InstanceVerification(family, dict(params or {}), checks, messages)


def expectations_for(family: FamilyTemplate, params: Mapping[str, Any]) -> dict[str, Any]:
    env = check_constraints(family, params)
    return {
        "minus_K": expected_minus_K(family, params),
        "status": expected_status(family, params),
        "dim": int(evaluate(family.dim, env)),
    }


def verify_family_instance(family: FamilyTemplate, params: Mapping[str, Any]) -> InstanceVerification:
    pres = instantiate(family, params)
    return verify_instance(pres, expectations_for(family, params), family.id, params)


def verify_catalog(
    grid: Grid = Grid(), family_id: str | None = None, theorem: str | None = None, catalog: Catalog | None = None
) -> list[InstanceVerification]:
    cat = catalog or default_catalog()
    out = []
    for fam in cat.families:
        if family_id is not None and fam.id != family_id:
            continue
        if theorem is not None and fam.theorem != theorem:
            continue
        for params in iter_parameters(fam, grid):
            out.append(verify_family_instance(fam, params))
    return out


# ---------------------------------------------------------------------------
# toric comparison


@dataclass(frozen=True)
class ToricRho2:
    """Smooth toric variety with ``Cl = Z^2``: weight ``(1,0)`` and weights ``(b_i, 1)``.

    ``multiplicities[0]`` belongs to ``(1,0)``; ``multiplicities[i]`` for
    ``i >= 1`` belongs to ``(b[i-1], 1)`` with ``b`` strictly decreasing to 0.
    """

    multiplicities: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self) -> None:
        mu, b = self.multiplicities, self.b
        if len(mu) != len(b) + 1 or not b:
            raise ValueError("need one multiplicity per weight")
        if any(x < 1 for x in mu):
            raise ValueError("multiplicities are positive")
        if mu[0] < 2 or sum(mu[1:]) < 2:
            raise ValueError("multiplicity conditions fail")
        if b[-1] != 0 or any(x <= y for x, y in zip(b, b[1:])):
            raise ValueError("b must decrease strictly to 0")

    @property
    def dim(self) -> int:
        return sum(self.multiplicities) - 2

    def weights(self) -> list[tuple[int, int]]:
        out = [(1, 0)] * self.multiplicities[0]
        for bi, mi in zip(self.b, self.multiplicities[1:]):
            out += [(bi, 1)] * mi
        return out

    def anticanonical(self) -> tuple[int, int]:
        ws = self.weights()
        return (sum(w[0] for w in ws), sum(w[1] for w in ws))


def toric_rho2_fano(t: ToricRho2) -> bool:
    mu, b = t.multiplicities, t.b
    # mu[i] pairs with b[i-1]; the left side skips the largest weight
    left = b[0] * sum(mu[2:])
    right = mu[0] + sum(m * bi for m, bi in zip(mu[2:-1], b[1:-1]))
    return left < right


def z_family(n: int, first_multiplicity: int | None = None) -> ToricRho2:
    """``Z_n`` (default) or, with ``first_multiplicity=2``, ``Z_n'``."""
    if n < 2:
        raise ValueError("n >= 2")
    mu1 = 1 + (n - 2) * (n - 1) // 2 if first_multiplicity is None else first_multiplicity
    return ToricRho2(tuple([mu1] + [1] * (n - 1)), tuple(n - i for i in range(2, n + 1)))


@dataclass(frozen=True)
class DuplicationDepth:
    """Smallest smooth model reachable by removing duplicated weights."""

    minimal: ToricRho2
    min_dim: int
    removed: int
    fano_along_path: tuple[bool, ...]


def toric_rho2_duplication_depth(t: ToricRho2) -> DuplicationDepth:
    """Remove copies of repeated weights while the smoothness conditions survive.

    Removing a copy of ``(1,0)`` is possible while its multiplicity exceeds 2;
    removing a copy of ``(b_i,1)`` while it exceeds 1 and at least two such
    generators remain. Each removal lowers the dimension by one.
    """
    mu = list(t.multiplicities)
    path = [toric_rho2_fano(t)]
    removed = 0
    while mu[0] > 2:
        mu[0] -= 1
        removed += 1
        path.append(toric_rho2_fano(ToricRho2(tuple(mu), t.b)))
    for i in range(1, len(mu)):
        while mu[i] > 1 and sum(mu[1:]) > 2:
            mu[i] -= 1
            removed += 1
            path.append(toric_rho2_fano(ToricRho2(tuple(mu), t.b)))
    minimal = ToricRho2(tuple(mu), t.b)
    return DuplicationDepth(minimal, minimal.dim, removed, tuple(path))


__all__ = [
    "Catalog",
    "CatalogError",
    "Coincidence",
    "ConstraintError",
    "DuplicationDepth",
    "FamilyTemplate",
    "Grid",
    "InstanceVerification",
    "ToricRho2",
    "coincidence_pairs",
    "default_catalog",
    "evaluate",
    "expectations_for",
    "grid_instances",
    "instantiate",
    "iter_parameters",
    "load_catalog",
    "toric_rho2_duplication_depth",
    "toric_rho2_fano",
    "verify_catalog",
    "verify_instance",
    "z_family",
]


@dataclass(frozen=True)
class Coincidence:
    """Two catalog instances with the same graded ring but different ample chambers."""

    first: tuple[str, tuple[tuple[str, Any], ...]]
    second: tuple[str, tuple[tuple[str, Any], ...]]

    @property
    def pattern(self) -> tuple[str, str]:
        return (self.first[0], self.second[0])

    def line(self) -> str:
        a = f"{self.first[0]} [{', '.join(f'{k}={_fmt(v)}' for k, v in self.first[1])}]"
        b = f"{self.second[0]} [{', '.join(f'{k}={_fmt(v)}' for k, v in self.second[1])}]"
        return f"{a} <-> {b}"


def coincidence_pairs(
    max_dim: int = 8, param_bound: int = 3, theorem: str = "1.1", catalog: Catalog | None = None
) -> list[Coincidence]:
    """Instance pairs sharing ring data up to admissible operations and ``GL2(Z)``.

    Instances with identical canonical forms (same chamber) are treated as
    the same variety and only the first one found is kept.
    """
    from .cox import presentation_dimension
    from .enumeration import canonical_form

    cat = catalog or default_catalog()
    by_ring: dict[Any, dict[Any, tuple[str, tuple[tuple[str, Any], ...]]]] = {}
    grid = Grid(param_bound=param_bound, max_m=max_dim)
    for fam in cat.by_theorem(theorem):
        for params in iter_parameters(fam, grid):
            pres = instantiate(fam, params)
            if presentation_dimension(pres) > max_dim:
                continue
            form = canonical_form(pres)
            chambers = by_ring.setdefault(form.ring_key, {})
            chambers.setdefault(form.chamber, (fam.id, tuple(params.items())))
    out = []
    for chambers in by_ring.values():
        members = list(chambers.values())
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                a, b = sorted((members[i], members[j]), key=lambda x: (_family_order(x[0]), x[1]))
                out.append(Coincidence(a, b))
    return sorted(out, key=lambda c: (_family_order(c.first[0]), _family_order(c.second[0]), c.first[1], c.second[1]))


def _family_order(fid: str) -> tuple[str, int, str]:
    theorem, _, number = fid.partition("-")
    digits = "".join(ch for ch in number if ch.isdigit())
    return (theorem, int(digits or 0), number)
