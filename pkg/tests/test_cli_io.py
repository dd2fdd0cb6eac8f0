import json
from pathlib import Path

import pytest

from dynhopf.__main__ import main
from dynhopf.cli_io import (CHECK_INDEX, MissingSection, Report, ValidationError, explain, load_model, parse_model,
                            run_suite)
from dynhopf.expr import ParseError

MODELS = Path(__file__).resolve().parent.parent / "models"
ALL_MODELS = sorted(p.name for p in MODELS.glob("*.json"))


@pytest.mark.parametrize("name", ALL_MODELS)
def test_shipped_models_parse(name):
    mf = load_model(str(MODELS / name))
    assert mf.k >= 1 and mf.g.dim >= 3


def _write(tmp_path, obj, name="m.json"):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj, indent=2))
    return str(p)


def test_expression_error_position():
    text = '{\n  "algebra": {"sl": 2},\n  "rmatrix": [{"coeff": "coth(", "i": "e", "j": "f"}]\n}'
    with pytest.raises(ParseError) as ei:
        parse_model(text)
    # string contents start at column 26 of line 3; the unclosed paren is its 5th character
    assert (ei.value.line, ei.value.col) == (3, 30)


def test_json_error_position():
    with pytest.raises(ParseError) as ei:
        parse_model('{\n  "algebra": {"sl": 2},\n  "rmatrix": [1,,]\n}')
    assert ei.value.line == 3


def test_jacobi_violation_is_validation_error():
    text = json.dumps({"algebra": {"dim": 3, "labels": ["a", "b", "c"],
                                   "brackets": [{"x": "a", "y": "b", "value": {"a": 1}},
                                                {"x": "b", "y": "c", "value": {"b": 1}}],
                                   "cartan": ["c"]}})
    with pytest.raises(ValidationError) as ei:
        parse_model(text)
    assert "Jacobi" in ei.value.invariant or "Jacobi" in str(ei.value)


def test_unbound_parameter():
    text = json.dumps({"algebra": {"sl": 2}, "rmatrix": [{"coeff": "1/(l1 + s)", "i": "e", "j": "f"}]})
    with pytest.raises((ValidationError, ParseError)):
        parse_model(text)


def test_k_above_rank_rejected():
    with pytest.raises(ValidationError):
        parse_model(json.dumps({"algebra": {"sl": 2}, "lambda_dim": 2}))


def test_missing_section():
    with pytest.raises(MissingSection):
        run_suite(load_model(str(MODELS / "sl2_coth.json")), "twist")


def test_cdybe_suite_on_coth():
    rep = run_suite(load_model(str(MODELS / "sl2_coth.json")), "cdybe")
    assert rep.passed
    assert "constant residual" in rep.record("cdybe.classification").detail
    assert len(rep.rows) == 7 * len(rep.records)


def test_theta_twist_model():
    rep = run_suite(load_model(str(MODELS / "theta_sl2.json")), "twist")
    assert rep.passed and rep.exit_code == 0


def test_broken_dynamical_model():
    rep = run_suite(load_model(str(MODELS / "sl2_broken_dynamical.json")), "dynamical")
    assert rep.exit_code == 1
    for name in ("dynamical.shifted_cocycle", "dynamical.qdybe"):
        r = rep.record(name)
        assert r.status == "fail" and r.hbar_order_of_first_failure == 2


def test_rational_dynamical_model_passes_everything():
    rep = run_suite(load_model(str(MODELS / "sl2_rational_dynamical.json")), "all")
    assert rep.passed, [r for r in rep.records if r.status != "pass"]
    assert {r.name.split(".")[0] for r in rep.records} >= {"lie", "dynamical", "limit", "cochain"}


def test_report_round_trip():
    rep = run_suite(load_model(str(MODELS / "sl2_rational_r.json")), "cdybe")
    back = Report.from_json(rep.to_json())
    assert back.to_json() == rep.to_json()
    assert Report.from_json(Report().to_json()).records == []


def test_csv_shape():
    rep = run_suite(load_model(str(MODELS / "sl2_coth.json")), "cdybe")
    lines = rep.to_csv().split("\r\n")
    assert lines[0] == "l1,check,residual" and lines[-1] == ""
    assert len(lines) - 2 == len(rep.records) * 7


def test_determinism():
    mf = load_model(str(MODELS / "moyal_k2.json"))
    assert run_suite(mf, "cochain").to_json() == run_suite(mf, "cochain").to_json()


def test_explain_and_index():
    assert "cdybe" in explain("cdybe.classification")
    assert all(name.split(".")[0] in ("lie", "cdybe", "twist", "dynamical", "limit", "cochain")
               for name in CHECK_INDEX)


# -- command line -------------------------------------------------------------------------

def test_main_exit_codes(tmp_path, capsys):
    assert main(["check", "--model", str(MODELS / "theta_sl2.json"), "--suite", "twist"]) == 0
    assert main(["check", "--model", str(MODELS / "sl2_broken_dynamical.json"), "--suite", "dynamical"]) == 1
    assert main(["check", "--model", str(MODELS / "sl2_coth.json"), "--suite", "twist"]) == 2
    bad = _write(tmp_path, '{"algebra": {"sl": 2}, "rmatrix": [{"coeff": "coth(", "i": "e", "j": "f"}]}')
    assert main(["check", "--model", bad, "--suite", "cdybe"]) == 2
    assert "column" in capsys.readouterr().err
    assert main(["check", "--model", str(tmp_path / "nope.json"), "--suite", "lie"]) == 2
    with pytest.raises(SystemExit) as ei:
        main(["check", "--model", bad])
    assert ei.value.code == 2
    assert main(["explain", "no.such.check"]) == 2
    assert main(["explain", "twist.cocycle"]) == 0


def test_main_writes_reports(tmp_path):
    js, cs = tmp_path / "r.json", tmp_path / "r.csv"
    code = main(["check", "--model", str(MODELS / "sl2_coth.json"), "--suite", "cdybe", "--samples", "5",
                 "--report", str(js), "--csv", str(cs)])
    assert code == 0
    d = json.loads(js.read_text())
    assert d["suite"] == "cdybe" and all(r["status"] == "pass" for r in d["records"])
    assert {"name", "anchor", "status", "residual_norm", "hbar_order_of_first_failure",
            "samples_used"} <= set(d["records"][0])
    assert len(cs.read_bytes().split(b"\r\n")) == 2 + 5 * len(d["records"])


def test_workbench_seed_overrides(tmp_path, monkeypatch):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    model = str(MODELS / "sl2_coth.json")
    main(["check", "--model", model, "--suite", "cdybe", "--seed", "5", "--report", str(a)])
    monkeypatch.setenv("WORKBENCH_SEED", "5")
    main(["check", "--model", model, "--suite", "cdybe", "--seed", "99", "--report", str(b)])
    assert a.read_bytes() == b.read_bytes()
    monkeypatch.setenv("WORKBENCH_SEED", "x")
    assert main(["check", "--model", model, "--suite", "cdybe"]) == 2
