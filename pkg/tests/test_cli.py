import json
import subprocess
import sys

import pytest

from zscheme.cli import EXIT_INPUT, EXIT_INVARIANT, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    command, *rest = argv
    code, out, _ = run(capsys, command, "--json", *rest)
    return code, json.loads(out)


# -- present ------------------------------------------------------------------------------


def test_present_plane(capsys):
    code, doc = run_json(capsys, "present", "pn:2")
    assert code == EXIT_OK and doc["ok"]
    res = doc["result"]
    assert res["euler"] == 3
    assert res["equivariant"]["generators"] == ["-2*x2 + 2*x1^2 + 2*x1*v", "2*x1*x2 + 4*x2*v"]
    assert res["ordinary"]["hilbert_numerator"] == [1, 0, 1, 0, 1]
    assert doc["schema_version"] == 1


def test_present_flag(capsys):
    code, doc = run_json(capsys, "present", "flag:2")
    assert code == EXIT_OK
    assert len(doc["result"]["equivariant"]["generators"]) == 3
    assert doc["result"]["euler"] == 6


def test_present_broken_file(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text(json.dumps({"coordinates": ["x1"], "weights": [2], "V": {"x1": "0"}}))
    code, doc = run_json(capsys, "present", f"file:{path}")
    assert code == EXIT_INPUT
    assert doc["error"]["code"] == "NOT_ISOLATED_ZERO"


def test_present_bad_selector_human_output(capsys):
    code, out, err = run(capsys, "present", "cube:3")
    assert code == EXIT_INPUT
    assert "BAD_SELECTOR" in err and not out


# -- hessenberg ------------------------------------------------------------------------------------


def test_hessenberg_peterson(capsys):
    code, doc = run_json(capsys, "hessenberg", "2", "peterson")
    assert code == EXIT_OK
    res = doc["result"]
    assert res["poincare_numerator"] == [1, 0, 2, 0, 1]
    assert len(res["fixed_points"]) == 4


def test_hessenberg_full(capsys):
    code, doc = run_json(capsys, "hessenberg", "2", "full")
    assert code == EXIT_OK
    assert doc["result"]["poincare_numerator"] == [1, 0, 2, 0, 2, 0, 1]


def test_hessenberg_invalid_omega(capsys):
    code, doc = run_json(capsys, "hessenberg", "2", "--", "-a1-a2")
    assert code == EXIT_INPUT
    assert doc["error"]["code"] == "INVALID_HESSENBERG"
    assert doc["error"]["details"]["simple"] == "a1"


def test_literal_condition_flag_gives_invalid_space(capsys):
    code, doc = run_json(capsys, "hessenberg", "2", "peterson", "--omega-from-condition")
    assert code == EXIT_INPUT
    assert doc["error"]["code"] == "INVALID_HESSENBERG"


# -- integrate ---------------------------------------------------------------------------------------


def test_integrate_line(capsys):
    code, doc = run_json(capsys, "integrate", "pn:1", "x1")
    assert code == EXIT_OK
    assert doc["result"]["polynomial"] == "1/2"
    assert all(c["agrees"] for k, c in doc["result"]["checks"].items() if k.startswith("fiber_sum"))


def test_integrate_jacobian(capsys):
    code, doc = run_json(capsys, "integrate", "pn:3", "--class-jacobian")
    assert code == EXIT_OK and doc["result"]["polynomial"] == "4"


def test_integrate_one(capsys):
    code, doc = run_json(capsys, "integrate", "--model", "pn:2", "--class", "1")
    assert code == EXIT_OK and doc["result"]["polynomial"] == "0"


def test_integrate_parse_error(capsys):
    code, doc = run_json(capsys, "integrate", "pn:2", "x1*(y+1)")
    assert code == EXIT_INPUT
    assert doc["error"]["code"] == "UNKNOWN_VARIABLE"


def test_integrate_missing_class(capsys):
    code, doc = run_json(capsys, "integrate", "pn:2")
    assert code == EXIT_INPUT and doc["error"]["code"] == "MISSING_ARGUMENT"


def test_integrate_custom_v0(capsys):
    code, doc = run_json(capsys, "integrate", "pn:1", "v*x1", "--v0", "3,1/2")
    assert code == EXIT_OK
    assert doc["result"]["checks"]["fiber_sum_v0=3"]["oracle"] == "3/2"


def test_integrate_rejects_zero_v0(capsys):
    with pytest.raises(SystemExit):
        main(["integrate", "pn:1", "x1", "--v0", "0"])


# -- verify ---------------------------------------------------------------------------------------------


def test_verify_pn(capsys):
    code, out, _ = run(capsys, "verify", "pn")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert len(lines) == 4 and all(line.startswith("[PASS]") for line in lines)


def test_verify_perturbed_fails(capsys):
    code, doc = run_json(capsys, "verify", "pushforward", "--perturb", "0:3")
    assert code == EXIT_INVARIANT
    failed = [c for c in doc["result"]["criteria"] if not c["passed"]]
    assert failed


def test_verify_bad_perturb(capsys):
    code, doc = run_json(capsys, "verify", "pn", "--perturb", "x:y")
    assert code == EXIT_INPUT


def test_timeout_exits_with_input_code(capsys):
    code, doc = run_json(capsys, "verify", "all", "--timeout", "0.001")
    assert code == EXIT_INPUT
    assert doc["error"]["code"] == "TIMEOUT"


# -- determinism --------------------------------------------------------------------------------------


def test_json_is_byte_identical_across_processes():
    cmd = [sys.executable, "-m", "zscheme", "present", "flag:2", "--json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first


def test_timings_only_on_request(capsys):
    _, plain = run_json(capsys, "integrate", "pn:1", "x1")
    _, timed = run_json(capsys, "integrate", "pn:1", "x1", "--timings")
    assert "seconds" not in plain and "seconds" in timed
