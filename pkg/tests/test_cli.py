import json
import subprocess
import sys
from pathlib import Path

import pytest

from holojacobi.cli import CHECKS, GALLERY, emit_examples, main, run_check

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_list_checks(capsys):
    code, out, _ = run(capsys, "list-checks")
    assert code == 0
    names = [line.split()[0] for line in out.splitlines()]
    assert names == list(CHECKS)


def test_pass_fail_parse_error_triple(capsys, tmp_path):
    code, out, _ = run(capsys, "check", "is-jacobi", str(FIXTURES / "contact_r3.toml"))
    assert code == 0 and "PASS is-jacobi" in out
    code, out, _ = run(capsys, "check", "is-jacobi", str(FIXTURES / "nonjacobi_r3.toml"))
    assert code == 1
    assert "FAIL is-jacobi" in out and "at x,y,z: -2" in out
    broken = tmp_path / "broken.toml"
    broken.write_text('[charts.main]\ncoords = ["x", "y"]\n\n[pi]\nkind = "multivector"\n'
                      'degree = 2\ncomponents = { "x,y" = "x +* y" }\n')
    code, _, err = run(capsys, "check", "is-poisson", str(broken))
    assert code == 2
    assert "pi" in err and "error" in err


def test_usage_errors_exit_2(capsys, tmp_path):
    assert run(capsys, "check", "no-such-check", str(FIXTURES / "zero_pi.toml"))[0] == 2
    assert run(capsys, "check", "is-jacobi", str(tmp_path / "missing.toml"))[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    # zero_pi has no bi-derivation
    code, _, err = run(capsys, "check", "is-jacobi", str(FIXTURES / "zero_pi.toml"))
    assert code == 2 and "bi-derivation" in err


def test_unknown_coordinate_and_chart(capsys, tmp_path):
    f = tmp_path / "coord.toml"
    f.write_text('[charts.main]\ncoords = ["x", "y"]\n\n[pi]\nkind = "multivector"\n'
                 'degree = 2\ncomponents = { "x,w" = "1" }\n')
    code, _, err = run(capsys, "check", "is-poisson", str(f))
    assert code == 2 and "unknown coordinate" in err
    f.write_text('[charts.main]\ncoords = ["x", "y"]\n\n[pi]\nkind = "multivector"\nchart = "other"\n'
                 'degree = 2\ncomponents = { "x,y" = "1" }\n')
    code, _, err = run(capsys, "check", "is-poisson", str(f))
    assert code == 2 and "unknown chart" in err


def test_exit_status_is_one_if_any_file_fails(capsys):
    code, out, _ = run(capsys, "check", "is-jacobi", str(FIXTURES / "contact_r3.toml"),
                       str(FIXTURES / "nonjacobi_r3.toml"))
    assert code == 1
    assert out.strip().endswith("1/2 passed")
    # request order is preserved
    assert out.index("contact_r3") < out.index("nonjacobi_r3")


def test_json_output_is_stable(capsys):
    args = ("check", "is-jacobi", str(FIXTURES / "nonjacobi_r3.toml"), "--format", "json")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    doc = json.loads(first)
    assert doc["check"] == "is-jacobi" and doc["results"][0]["passed"] is False


def test_seeded_check_is_reproducible(capsys):
    args = ["check", "sj-skew", str(FIXTURES / "contact_r3.toml"), "--format", "json"]
    a = run(capsys, *args, "--seed", "7")
    b = run(capsys, *args, "--seed", "7")
    assert a == b and a[0] == 0


def test_precondition_failure_is_reported_not_raised(tmp_path):
    f = tmp_path / "anti.toml"
    f.write_text('[charts.main]\ncoords = ["z_x", "z_y", "p_x", "p_y"]\n'
                 'complex = { z = ["z_x", "z_y"], p = ["p_x", "p_y"] }\n\n'
                 '[Pi]\nkind = "multivector"\ndegree = 2\ncomponents = { "z_x,p_x" = "z_x" }\n')
    rep, _ = run_check("real-cotangent", f)
    assert not rep.passed
    assert rep.failures[0].identity == "precondition"


def test_gallery_is_byte_identical(tmp_path):
    a = emit_examples(tmp_path / "a")
    b = emit_examples(tmp_path / "b")
    assert [p.name for p in a] == list(GALLERY)
    for pa, pb in zip(a, b):
        assert pa.read_bytes() == pb.read_bytes()
        assert pa.read_bytes() == (FIXTURES / pa.name).read_bytes()


def test_darboux_file_carries_rotated_contact_forms():
    text = (FIXTURES / "darboux_n1.toml").read_text()
    for name in ("[vartheta]", "[vartheta_j]", "[theta_r]", "[theta_s]", "[Omega]"):
        assert name in text


@pytest.mark.parametrize("check,fixture", [
    ("hP-equivalences", "zero_pi.toml"),
    ("hP-equivalences", "cotangent_c2.toml"),
    ("homogeneous-poisson", "sl2_lie_poisson.toml"),
    ("homogeneous-poisson", "heisenberg_lie_poisson.toml"),
    ("lie-algebroid", "cotangent_c2.toml"),
    ("contact", "contact_r3.toml"),
    ("poissonization-roundtrip", "contact_r3.toml"),
])
def test_gallery_checks_pass(check, fixture):
    rep, _ = run_check(check, FIXTURES / fixture)
    assert rep.passed, "\n".join(rep.lines())


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "holojacobi", "check", "is-jacobi",
                           str(FIXTURES / "nonjacobi_r3.toml")], capture_output=True, text=True)
    assert proc.returncode == 1
    assert "FAIL" in proc.stdout
