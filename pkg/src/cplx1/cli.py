"""Command line front end.

Exit codes: 0 success, 1 a verification or comparison mismatch, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from .catalog import CatalogError, Grid, load_catalog, default_catalog, verify_catalog
from .cox import GradedPresentation, presentation_from_data, presentation_from_dict, presentation_to_dict
from .data import AP_FIELDS, data_from_dict, validate
from .geometry import analyze, git_chambers, representative_class

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read_json(path: str) -> dict[str, Any]:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
        doc = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("input must be a JSON object")
    return doc


def _detect_format(doc: dict[str, Any]) -> str:
    if doc.get("format") in ("ap", "graded"):
        return doc["format"]
    if "Q" in doc:
        return "graded"
    if "d" in doc or "dprime" in doc:
        return "ap"
    raise InputError("cannot tell the input format; give --format")


def load_presentation(path: str, fmt: str | None = None) -> GradedPresentation:
    """Read a presentation in ``ap`` (defining matrices) or ``graded`` form."""
    doc = _read_json(path)
    fmt = fmt or _detect_format(doc)
    doc = {k: v for k, v in doc.items() if k != "format"}
    try:
        if fmt == "graded":
            return presentation_from_dict(doc)
        if set(doc) - AP_FIELDS:
            raise InputError(f"unknown fields: {sorted(set(doc) - AP_FIELDS)}")
        data, u = data_from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    problems = validate(data)
    if problems:
        raise InputError("invalid defining data:\n  " + "\n  ".join(problems))
    pres = presentation_from_data(data, u)
    if u is None:
        raise InputError("ap input needs an ample class u (in the coordinates of the computed grading)")
    return pres


def _emit(obj: Any, as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_analyze(args: argparse.Namespace) -> int:
    pres = load_presentation(args.input, args.format)
    try:
        report = analyze(pres)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(report.to_dict(), args.json, report.render())
    return EXIT_OK


def cmd_verify_catalog(args: argparse.Namespace) -> int:
    try:
        grid = Grid.parse(args.grid)
        catalog = load_catalog(args.catalog) if args.catalog else default_catalog()
        if args.family:
            catalog.family(args.family)
    except (CatalogError, ValueError, KeyError, OSError) as exc:
        raise InputError(str(exc)) from exc
    results = verify_catalog(grid, family_id=args.family, theorem=args.theorem, catalog=catalog)
    failed = [r for r in results if not r.passed]
    if args.json:
        print(json.dumps({"total": len(results), "failed": len(failed), "instances": [r.to_dict() for r in results]}, indent=2))
    else:
        for r in results if args.verbose else failed:
            print(r.line())
        print(f"{len(results)} instances, {len(results) - len(failed)} passed, {len(failed)} failed")
    return EXIT_MISMATCH if failed else EXIT_OK


def cmd_enumerate(args: argparse.Namespace) -> int:
    from .enumeration import SearchBounds, enumerate_smooth_rho2, match_against_catalog

    try:
        bounds = SearchBounds(args.dim, args.max_exp, args.max_weight, args.max_m)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    ns = tuple(int(x) for x in args.constellation.split(",")) if args.constellation else None
    result = enumerate_smooth_rho2(
        bounds, fano=args.fano, constellation=ns, budget_seconds=args.budget, prune=not args.no_prune
    )
    diff = match_against_catalog(result.forms, bounds, fano=args.fano) if ns is None else None
    if args.json:
        doc = result.to_dict()
        if diff is not None:
            doc["diff"] = diff.to_dict()
        print(json.dumps(doc, indent=2))
    else:
        for f in result.forms:
            print(f)
        if diff is not None:
            for line in diff.lines():
                if not line.startswith("MATCH"):
                    print(line)
        state = " (partial: budget exceeded)" if result.partial else ""
        extra = "" if diff is None else f", diff {'empty' if diff.empty else 'non-empty'}"
        print(f"{len(result.forms)} forms from {result.candidates} candidates in {result.elapsed:.1f}s{extra}{state}")
    if diff is not None and not diff.empty:
        return EXIT_MISMATCH
    return EXIT_OK


def _free_index(pres: GradedPresentation, label: str) -> int:
    text = label.strip().upper()
    if not text.startswith("S") or not text[1:].isdigit():
        raise InputError(f"variable must look like S1, S2, ...: {label!r}")
    k = int(text[1:])
    if not 1 <= k <= pres.m:
        raise InputError(f"no free variable {label}")
    return pres.n + k - 1


def cmd_duplicate(args: argparse.Namespace) -> int:
    from .duplication import make_step

    pres = load_presentation(args.input, args.format)
    k = _free_index(pres, args.var)
    steps = []
    try:
        for _ in range(args.times):
            step = make_step(pres, k)
            steps.append(step)
            pres = step.result
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    text = "\n".join(f"duplicate {s.to_dict()['variable']} weight {s.to_dict()['weight']}: flips {s.flips}" for s in steps)
    _emit(
        {"result": presentation_to_dict(pres), "steps": [s.to_dict() for s in steps]},
        args.json,
        text + "\n" + json.dumps(presentation_to_dict(pres)),
    )
    return EXIT_OK


def cmd_seeds(args: argparse.Namespace) -> int:
    from .duplication import SeedError, seed_recovery

    pres = load_presentation(args.input, args.format)
    try:
        rec = seed_recovery(pres)
    except SeedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    lines = [f"seed {rec.family or '(no free weights)'} {rec.params or ''} dim {rec.seed_dim}".rstrip()]
    lines += [f"  step {i + 1}: duplicate {s.to_dict()['variable']} weight {s.to_dict()['weight']}, flips {s.flips}" for i, s in enumerate(rec.steps)]
    lines.append(json.dumps(presentation_to_dict(rec.seed)))
    _emit(rec.to_dict(), args.json, "\n".join(lines))
    return EXIT_OK


def cmd_chambers(args: argparse.Namespace) -> int:
    pres = load_presentation(args.input, args.format)
    try:
        chambers = git_chambers(pres, region=args.region)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rows = []
    for i, c in enumerate(chambers):
        mark = c.interior_contains(pres.u)
        rows.append({"index": i, "cone": c.as_dict(), "representative": list(representative_class(c)), "contains_u": mark})
    text = "\n".join(f"{'*' if r['contains_u'] else ' '} {r['index']}: {chambers[r['index']]}  u={tuple(r['representative'])}" for r in rows)
    _emit({"chambers": rows}, args.json, text)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cplx1", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", required=True, help="JSON file, or - for stdin")
        p.add_argument("--format", choices=("ap", "graded"), help="default: detect from fields")
        p.add_argument("--json", action="store_true", help="machine readable output")

    p = sub.add_parser("analyze", help="invariants of one variety")
    with_input(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify-catalog", help="check the shipped classification tables")
    p.add_argument("--grid", default="params<=3,m<=5")
    p.add_argument("--family", help="only this family id, e.g. T1.4-8")
    p.add_argument("--theorem", help="only families of this table, e.g. 1.2")
    p.add_argument("--catalog", help="alternative catalog file")
    p.add_argument("--verbose", action="store_true", help="print passing instances too")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_catalog)

    p = sub.add_parser("enumerate", help="bounded search with catalog comparison")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--max-exp", type=int, default=3)
    p.add_argument("--max-weight", type=int, default=3)
    p.add_argument("--max-m", type=int, default=2)
    p.add_argument("--fano", action="store_true")
    p.add_argument("--constellation", help="restrict block sizes, e.g. 3,1,1 (skips the catalog diff)")
    p.add_argument("--budget", type=float, help="seconds before stopping with a partial result")
    p.add_argument("--no-prune", action="store_true", help="try every weight in the box (slow cross-check)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("duplicate", help="duplicate a free weight")
    with_input(p)
    p.add_argument("--var", required=True, help="free variable, e.g. S1")
    p.add_argument("--times", type=int, default=1)
    p.set_defaults(func=cmd_duplicate)

    p = sub.add_parser("seeds", help="undo duplications down to a minimal seed")
    with_input(p)
    p.set_defaults(func=cmd_seeds)

    p = sub.add_parser("chambers", help="Mori chambers, the one holding u marked")
    with_input(p)
    p.add_argument("--region", choices=("mov", "eff"), default="mov")
    p.set_defaults(func=cmd_chambers)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return int(args.func(args))
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
