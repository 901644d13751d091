from functools import lru_cache

from cplx1.catalog import Grid, default_catalog, instantiate, iter_parameters


@lru_cache(maxsize=None)
def catalog_sample(theorem="1.1", bound=2, max_m=2):
    """Small deterministic list of (family id, params, presentation)."""
    out = []
    for fam in default_catalog().by_theorem(theorem):
        for params in iter_parameters(fam, Grid(bound, max_m)):
            out.append((fam.id, params, instantiate(fam, params)))
    return tuple(out)


# one pass/fail line per acceptance criterion in the terminal summary
import pytest

_CRITERIA: list[tuple[str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    doc = getattr(item.function, "__doc__", None) or ""
    if item.module.__name__.endswith("test_acceptance") and report.when == "call":
        _CRITERIA.append((doc.strip().splitlines()[0] if doc else item.name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for title, outcome in _CRITERIA:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {title}")
