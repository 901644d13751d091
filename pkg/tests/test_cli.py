import io
import json
from pathlib import Path

import pytest

from cplx1.cli import EXIT_INPUT, EXIT_MISMATCH, EXIT_OK, main

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze(capsys):
    code, out, _ = run(capsys, "analyze", "--input", str(DATA / "no3_a1.json"))
    assert code == EXIT_OK
    assert "fano" in out and "(2, 3)" in out
    code, out, _ = run(capsys, "analyze", "--input", str(DATA / "no3_a1.json"), "--json")
    doc = json.loads(out)
    assert doc["dim"] == 3 and doc["minus_K"][:2] == [2, 3] and doc["fano_status"] == "fano"


def test_analyze_from_defining_data(capsys, monkeypatch):
    from cplx1.catalog import instantiate
    from cplx1.cox import gl2_transform, presentation_from_data, reconstruct_P
    from cplx1.data import data_to_dict
    from cplx1.linalg import matvec

    pres = instantiate("T1.1-3", {"m": 0, "a": 1})
    data = reconstruct_P(pres)
    g = gl2_transform(pres.Q, presentation_from_data(data).Q)
    doc = data_to_dict(data, tuple(matvec(g, pres.u)))
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(doc)))
    code, out, err = run(capsys, "analyze", "--input", "-", "--format", "ap", "--json")
    assert code == EXIT_OK, err
    assert json.loads(out)["dim"] == 3


def test_bad_inputs(capsys, monkeypatch, tmp_path):
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps({"l": [[1, 1]], "d": [[2, 2]]})))
    code, _, err = run(capsys, "analyze", "--input", "-")
    assert code == EXIT_INPUT and "error" in err
    broken = tmp_path / "x.json"
    broken.write_text("{not json")
    assert run(capsys, "analyze", "--input", str(broken))[0] == EXIT_INPUT
    assert run(capsys, "analyze", "--input", str(tmp_path / "missing.json"))[0] == EXIT_INPUT
    code, _, err = run(capsys, "duplicate", "--input", str(DATA / "seed8_a1.json"), "--var", "T1")
    assert code == EXIT_INPUT and "S1" in err
    assert run(capsys, "verify-catalog", "--grid", "bogus")[0] == EXIT_INPUT


def test_chambers(capsys):
    code, out, _ = run(capsys, "chambers", "--input", str(DATA / "no13.json"))
    assert code == EXIT_OK
    lines = [x for x in out.splitlines() if x.strip()]
    assert len(lines) == 1 and lines[0].startswith("*")


def test_duplicate(capsys):
    code, out, _ = run(capsys, "duplicate", "--input", str(DATA / "seed8_a1.json"), "--var", "S2", "--times", "2", "--json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["result"]["m"] == 4 and [s["flips"] for s in doc["steps"]] == [0, 0]


def test_seeds(capsys):
    code, out, _ = run(capsys, "seeds", "--input", str(DATA / "fano11_m3.json"), "--json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["seed_family"] == "T5.5-11-m3" and doc["seed_dim"] <= 7


def test_verify_catalog(capsys):
    code, out, _ = run(capsys, "verify-catalog", "--family", "T1.4-8")
    assert code == EXIT_OK and "0 failed" in out


def test_verify_catalog_reports_mismatch(capsys, tmp_path):
    from importlib import resources

    doc = json.loads(resources.files("cplx1").joinpath("data/catalog.json").read_text())
    fam = next(f for f in doc["families"] if f["id"] == "T1.2-3")
    fam["minus_K"] = ["9", "9"]
    alt = tmp_path / "cat.json"
    alt.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify-catalog", "--catalog", str(alt), "--family", "T1.2-3")
    assert code == EXIT_MISMATCH and "FAIL" in out


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--dim", "3", "--max-exp", "2", "--max-weight", "2", "--max-m", "1", "--fano")
    assert code == EXIT_OK and "diff empty" in out
    code, out, _ = run(capsys, "enumerate", "--dim", "2", "--constellation", "3,1,1", "--max-exp", "2", "--max-weight", "2", "--json")
    assert code == EXIT_OK and json.loads(out)["forms"] == []


def test_help(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    assert "verify-catalog" in capsys.readouterr().out
