import json
import subprocess
import sys
from fractions import Fraction

import pytest

from pcoherence.cli import main
from pcoherence.demos import bell_gamble, bell_state
from pcoherence.polynomial import Polynomial

F = Fraction


@pytest.fixture
def files(tmp_path):
    t1, t2 = Polynomial.variables(2)

    def put(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)

    return {
        "q": put("q.json", (t1**2 - t1 * t2 + t2**2).to_dict()),
        "empty": put("empty.json", {"n_vars": 2, "gambles": []}),
        "bad": put("bad.json", [Polynomial.constant(F(-1, 2), 2).to_dict()]),
        "fair": put("fair.json", [(t1 - t2).to_dict()]),
        "pi": put("pi.json", t1.to_dict()),
        "bell": put("bell.json", bell_gamble(F(1, 100)).to_dict()),
        "state": put("state.json", bell_state().to_dict()),
        "broken": put("broken.json", {"gambles": []}),
        "garbage": put("garbage.json", "not an object"),
        "dir": tmp_path,
    }


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_check_consistent(files, capsys):
    code, out, _ = run(capsys, "check", "--gambles", files["fair"], "-d", "2")
    assert code == 0 and out.startswith("consistent at degree 2")


def test_check_inconsistent_prints_witness(files, capsys):
    code, out, _ = run(capsys, "check", "--gambles", files["bad"], "-d", "2")
    assert code == 2
    assert "lambda = [2]" in out
    code, out, _ = run(capsys, "check", "--gambles", files["bad"], "-d", "2", "--json")
    data = json.loads(out)
    assert code == 2 and data["consistent"] is False and data["lambda_weights"] == ["2"]


def test_prevision_of_counterexample(files, capsys):
    code, out, _ = run(capsys, "prevision", "--gamble", files["q"], "--gambles", files["empty"], "-d", "2")
    assert code == 0 and "-1/2" in out
    code, out, _ = run(capsys, "prevision", "--gamble", files["q"], "--gambles", files["empty"],
                       "-d", "2", "--json")
    data = json.loads(out)
    assert data["value"] == "-1/2" and data["lambda_weights"] == []


def test_upper_prevision(files, capsys):
    code, out, _ = run(capsys, "upper", "--gamble", files["q"], "--gambles", files["empty"], "-d", "2")
    assert code == 0 and "upper prevision at degree 2: 1 " in out


def test_prevision_with_inconsistent_assessments_is_lp_anomaly(files, capsys):
    code, _, err = run(capsys, "prevision", "--gamble", files["q"], "--gambles", files["bad"], "-d", "2")
    assert code == 70 and "LP anomaly" in err


def test_hierarchy_csv(files, capsys):
    out_csv = files["dir"] / "h.csv"
    code, out, _ = run(capsys, "hierarchy", "--gamble", files["q"], "--gambles", files["empty"],
                       "--dmin", "2", "--dmax", "5", "--out", str(out_csv))
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "d,value_num,value_den,value_float"
    assert lines[1] == "2,-1,2,-0.5"
    assert lines[4] == "5,-1,20,-0.05"
    assert out == out_csv.read_text()


def test_update(files, capsys):
    code, out, _ = run(capsys, "update", "--gamble", files["q"], "--pi", files["pi"],
                       "--gambles", files["empty"], "-d", "2", "--json")
    data = json.loads(out)
    assert code == 0 and data["degree_used"] == 3 and not data["vacuous"]


def test_update_rejects_uncertified_pi(files, capsys):
    code, _, err = run(capsys, "update", "--gamble", files["q"], "--pi", files["q"],
                       "--gambles", files["empty"], "-d", "2")
    assert code == 64 and "subset sum" in err


def test_state_commands(files, capsys):
    code, out, _ = run(capsys, "state-validate", "--state", files["state"])
    assert code == 0 and out.strip() == "state valid: True"
    code, out, _ = run(capsys, "state-validate", "--state", files["state"], "--strict")
    assert code == 2
    code, out, _ = run(capsys, "state-expect", "--state", files["state"], "--gamble", files["bell"])
    assert code == 0 and out.strip() == "L(p) = 47/300"


def test_oracle(files, capsys):
    code, out, _ = run(capsys, "oracle", "--gamble", files["q"], "--gambles", files["empty"],
                       "--grid-step", "1/32", "--json")
    data = json.loads(out)
    assert code == 0 and data["value"] == "0" and data["point"] == ["0", "0"]


def test_demo_bell(capsys):
    code, out, _ = run(capsys, "demo-bell", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["state_value"] == "47/300" and F(data["grid_max"]) <= F(-1, 100)
    assert data["state_valid"] and data["violated"]
    code, out, _ = run(capsys, "demo-bell", "--epsilon", "1/12", "--json", "--grid-step", "1/10")
    assert json.loads(out)["state_value"] == "1/12"


def test_demo_bell_rejects_large_epsilon(capsys):
    code, _, err = run(capsys, "demo-bell", "--epsilon", "1/6")
    assert code == 64 and "epsilon" in err


def test_demo_socks(capsys):
    code, out, _ = run(capsys, "demo-socks", "--json")
    data = json.loads(out)
    assert code == 0
    assert [c["dual"] for c in data["cases"]] == ["1", "0", "0", "1"]
    assert [c["primal"] for c in data["cases"]] == ["1", "0", "0", "1"]
    assert data["marginals"] == ["1/2", "1/2", "1/3", "1/3"]
    assert data["state_z011"] == "1/6" and data["mixture_z011"] == "0"


def test_exit_codes_for_bad_input(files, capsys):
    assert run(capsys, "check", "--gambles", files["garbage"], "-d", "2")[0] == 64
    (files["dir"] / "trunc.json").write_text("{not json")
    assert run(capsys, "check", "--gambles", str(files["dir"] / "trunc.json"), "-d", "2")[0] == 64
    assert run(capsys, "check", "--gambles", str(files["dir"] / "missing.json"), "-d", "2")[0] == 64
    assert run(capsys, "check", "--gambles", files["broken"], "-d", "2")[0] == 64
    assert run(capsys, "check", "--gambles", files["fair"])[0] == 64
    assert run(capsys, "prevision", "--gamble", files["q"], "--gambles", files["empty"], "-d", "1")[0] == 65
    assert run(capsys, "check", "--gambles", files["fair"], "-d", "0")[0] == 65
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 64
    with pytest.raises(SystemExit) as exc:
        main(["check", "-d", "two"])
    assert exc.value.code == 64


def test_out_file_matches_json_and_reruns_are_identical(files, capsys):
    target = files["dir"] / "res.json"
    args = ["prevision", "--gamble", files["q"], "--gambles", files["fair"], "-d", "3", "--json",
            "--out", str(target)]
    _, first, _ = run(capsys, *args)
    saved = target.read_text()
    _, second, _ = run(capsys, *args)
    assert first == second == saved


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "pcoherence", "check", "--gambles", files["bad"], "-d", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and "INCONSISTENT" in proc.stdout
