import contextlib
import io
import json

import pytest

from fusionkit import Ambi, enumerate_uber, reconstruct, verify_fusion_rule
from fusionkit.cli import main
from fusionkit.errors import ValidationError
from fusionkit.jsonio import (
    dumps,
    gauge_to_dict,
    gauge_from_dict,
    hom_datum_from_dict,
    hom_datum_to_dict,
    load_document,
    load_rule,
    rule_from_dict,
    rule_to_dict,
    system_from_dict,
    system_to_dict,
    uber_from_dict,
    uber_to_dict,
)


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


# ---- json round trips ----------------------------------------------------------


def test_rule_round_trip(mr):
    doc = rule_to_dict(mr.rule)
    back = rule_from_dict(doc)
    assert back == mr.rule


def test_builtin_fixtures_load():
    for name in ("ty_z2", "ty_z3", "mr", "z4_graded", "z2xz2"):
        rule = load_rule(f"builtin:{name}")
        assert verify_fusion_rule(rule).passed
    broken = load_rule("builtin:broken")
    assert not verify_fusion_rule(broken).passed


def test_hom_datum_round_trip(mr):
    from fusionkit import gamma

    h = gamma(mr)
    doc = hom_datum_to_dict(h)
    back = hom_datum_from_dict(doc)
    assert (back.mapping == h.mapping).all()
    assert back.source.labels == h.source.labels


def test_system_and_uber_round_trip(f17, ty2):
    cls = enumerate_uber(Ambi(ty2, f17), with_orbits=False)
    u = cls.class_reps[0]
    f = reconstruct(u)
    f2 = system_from_dict(system_to_dict(f))
    assert f2 == f
    u2 = uber_from_dict(uber_to_dict(u))
    assert u2 == u


def test_gauge_round_trip(f17, mr):
    import random

    from fusionkit import random_gauge

    xi = random_gauge(mr.rule, f17, random.Random(1))
    xi2 = gauge_from_dict(gauge_to_dict(xi))
    assert xi2.values == xi.values


def test_malformed_rule_documents():
    with pytest.raises(ValidationError):
        rule_from_dict({"labels": ["a", "a"], "unit": "a", "dual": {"a": "a"}})
    with pytest.raises(ValidationError):
        rule_from_dict({"labels": ["a"], "unit": "b", "dual": {"a": "a"}})
    with pytest.raises(ValidationError):
        load_document("builtin:nope")


# ---- CLI ------------------------------------------------------------------------


def test_cli_rule_analyze_mr():
    code, out, _ = run_cli(["rule", "analyze", "builtin:mr"])
    assert code == 0
    doc = json.loads(out)
    assert doc["simple_current_index"] == 2
    assert doc["adjoint_size"] == 2
    assert doc["universal_grading"]["isomorphic_to"] == "Z4"
    assert doc["nilpotency_class"] == 2
    assert doc["feudal"]["properly_feudal"] is True


def test_cli_rule_analyze_ty():
    for name in ("ty_z2", "ty_z3"):
        code, out, _ = run_cli(["rule", "analyze", f"builtin:{name}"])
        assert code == 0
        assert json.loads(out)["universal_grading"]["isomorphic_to"] == "Z2"


def test_cli_rule_verify_broken():
    code, out, _ = run_cli(["rule", "verify", "builtin:broken"])
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is False and doc["assoc_witnesses"]


def test_cli_uber_classify_mr():
    code, out, _ = run_cli(["uber", "classify", "--rule", "builtin:mr", "--p", "17"])
    assert code == 0
    doc = json.loads(out)
    assert doc["gauge_classes"] == 4 == doc["equivalence_classes"]
    xs = sorted(c["invariants"]["chi_diag"]["i"][0] for c in doc["classes"])
    assert xs == [2, 8, 9, 15]


def test_cli_uber_classify_obstructed():
    code, out, _ = run_cli(["uber", "classify", "--rule", "builtin:ty_z3", "--p", "7"])
    assert code == 0
    doc = json.loads(out)
    assert doc["gauge_classes"] == 0 and doc["obstructions"]["clear"] is False


def test_cli_uber_obstructions():
    code, out, _ = run_cli(["uber", "obstructions", "--rule", "builtin:ty_z3", "--p", "7"])
    doc = json.loads(out)
    assert code == 0 and doc["clear"] is False


def test_cli_cohom_h3():
    code, out, _ = run_cli(["cohom", "h3", "--group", "Z4", "--p", "17", "--via-uber", "auto"])
    assert code == 0
    doc = json.loads(out)
    assert doc["order"] == 4
    assert sorted(doc["roots_of_unity"].values()) == [1, 4, 13, 16]
    assert doc["via_uber"]["agree"] is True


def test_cli_feudal_phi_gamma(tmp_path):
    code, out, _ = run_cli(["feudal", "gamma", "builtin:mr"])
    assert code == 0
    datum = json.loads(out)
    path = tmp_path / "datum.json"
    path.write_text(json.dumps(datum))
    code, out, _ = run_cli(["feudal", "phi", str(path)])
    assert code == 0
    doc = json.loads(out)
    assert len(doc["rule"]["labels"]) == 6


def test_cli_feudal_enumerate():
    code, out, _ = run_cli(["feudal", "enumerate", "--max-order", "3"])
    assert code == 0
    assert json.loads(out)["count"] == 1


def test_cli_fsys_pipeline(tmp_path, f17, ty2):
    cls = enumerate_uber(Ambi(ty2, f17), with_orbits=False)
    f = reconstruct(cls.class_reps[0])
    spath = tmp_path / "sys.json"
    spath.write_text(dumps(system_to_dict(f)))
    code, out, _ = run_cli(["fsys", "verify", str(spath)])
    assert code == 0 and json.loads(out)["passed"] is True
    code, out, _ = run_cli(["uber", "psi", str(spath)])
    assert code == 0
    upath = tmp_path / "uber.json"
    upath.write_text(out)
    code, out, _ = run_cli(["uber", "reconstruct", str(upath)])
    assert code == 0
    assert json.loads(out)["verified"] is True
    # gauge-apply with the identity gauge reproduces the system
    from fusionkit import identity_gauge

    xi = identity_gauge(ty2.rule, f17)
    gpath = tmp_path / "xi.json"
    gpath.write_text(dumps(gauge_to_dict(xi)))
    code, out, _ = run_cli(["fsys", "gauge-apply", str(spath), "--xi", str(gpath)])
    assert code == 0
    assert json.loads(out)["coeffs"] == system_to_dict(f)["coeffs"]


def test_cli_fsys_enumerate_and_budget():
    code, out, _ = run_cli(["fsys", "enumerate", "--rule", "builtin:ty_z2", "--p", "17"])
    assert code == 0 and json.loads(out)["count"] == 32
    code, _, err = run_cli(["fsys", "enumerate", "--rule", "builtin:mr", "--p", "17"])
    assert code == 2 and "budget" in err


def test_cli_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"labels": [,]}')
    code, _, err = run_cli(["rule", "verify", str(bad)])
    assert code == 1
    assert "bad.json:1:" in err  # location-bearing diagnostic
    code, _, err = run_cli(["rule", "analyze", "builtin:broken"])
    assert code == 1


def test_cli_determinism_and_out_file(tmp_path):
    _, out1, _ = run_cli(["uber", "classify", "--rule", "builtin:mr", "--p", "17"])
    _, out2, _ = run_cli(["uber", "classify", "--rule", "builtin:mr", "--p", "17"])
    assert out1 == out2
    target = tmp_path / "report.json"
    code, out, _ = run_cli(["--out", str(target), "rule", "analyze", "builtin:mr"])
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["simple_current_index"] == 2


def test_cli_text_format():
    code, out, _ = run_cli(["--format", "text", "rule", "analyze", "builtin:ty_z2"])
    assert code == 0
    assert "simple_current_index: 2" in out


def test_thread_cap_env(monkeypatch):
    from fusionkit.cli import thread_cap

    monkeypatch.setenv("FUSIONKIT_THREADS", "4")
    assert thread_cap() == 4
    monkeypatch.setenv("FUSIONKIT_THREADS", "junk")
    assert thread_cap() == 1


def test_module_entry_point_and_cross_process_determinism():
    import subprocess
    import sys

    cmd = [sys.executable, "-m", "fusionkit", "uber", "classify", "--rule", "builtin:ty_z2", "--p", "17"]
    r1 = subprocess.run(cmd, capture_output=True, text=True)
    r2 = subprocess.run(cmd, capture_output=True, text=True)
    assert r1.returncode == 0 and r1.stdout == r2.stdout
    assert json.loads(r1.stdout)["gauge_classes"] == 2
