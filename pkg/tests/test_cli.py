import json
import subprocess
import sys

import pytest

from stabilis.cli import main, run

DZ = {"kind": "differential", "nvars": 1, "diff": [{"coeff": "1", "zexp": [0], "dexp": [1]}]}
NEG = {"kind": "table", "nvars": 1, "kappa": [2], "images": [
    {"monomial": [0], "poly": "1"}, {"monomial": [1], "poly": "z1"}, {"monomial": [2], "poly": "-z1^2"}]}


@pytest.fixture
def dz(tmp_path):
    path = tmp_path / "dz.json"
    path.write_text(json.dumps(DZ))
    return str(path)


def _out(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


def test_check_stability_example():
    report, code = run(["check-stability", "--poly", "z1*z2+1"])
    assert code == 1
    assert report["result"]["verdict"]["witness"]["point"] == ["i", "i"]


def test_certify_example(dz):
    report, code = run(["certify", "--op", dz, "--kappa", "2"])
    assert code == 0
    assert report["result"]["branch"] == "b"
    assert report["result"]["symbol"] == "2*z1+2*w1"


def test_szasz_example():
    report, code = run(["szasz", "--poly", "(1+z1)^2"])
    assert code == 0
    assert report["result"]["checks"][0]["margin"] == "2 ≤ 14"


@pytest.mark.parametrize(
    "argv,code",
    [
        (["check-stability", "--poly", "z1+z2"], 0),
        (["check-stability", "--poly", "z1+z2", "--strict"], 2),
        (["check-stability", "--poly", "z+i", "--strict"], 0),
        (["check-stability", "--poly", "0"], 2),
        (["check-real-stability", "--poly", "z1*z2-1"], 0),
        (["proper-position", "--f", "z1+z2", "--g", "1"], 1),
        (["certify", "--op", json.dumps(NEG)], 1),
        (["certify-real", "--op", json.dumps(NEG)], 1),
        (["certify-domain", "--op", json.dumps(DZ), "--kappa", "2", "--domains", "H"], 0),
        (["certify-ly", "--op", json.dumps(DZ), "--kappa", "2", "--domains", "D"], 2),
        (["truncation-sweep", "--op", json.dumps(NEG), "--beta-max", "2"], 1),
        (["polarize", "--poly", "z^2", "--kappa", "2"], 0),
        (["ly-member", "--poly", "z1+z2", "--kappa", "1,1", "--domains", "D,D"], 1),
        (["ly-member", "--poly", "1+z1*z2", "--kappa", "1,1", "--domains", "D,D"], 0),
        (["growth", "--poly", "1+z1+z2", "--radius", "1,2"], 0),
    ],
)
def test_exit_codes(argv, code):
    assert run(argv)[1] == code


@pytest.mark.parametrize(
    "argv",
    [
        ["check-stability", "--poly", "z1*"],
        ["check-stability"],
        ["certify", "--op", "/nonexistent/op.json"],
        ["certify", "--op", '{"kind":"table","nvars":1}'],
        ["polarize", "--poly", "z^3", "--kappa", "2"],
        ["check-stability", "--poly", "z", "--samples", "0"],
        ["no-such-verb"],
    ],
)
def test_input_errors_exit_3(argv, capsys):
    assert main(argv) == 3


def test_error_reports_position():
    report, code = run(["check-stability", "--poly", "z1*"])
    assert code == 3 and "position" in report["result"]


def test_error_reports_pointer():
    report, code = run(["certify", "--op", '{"kind":"table","nvars":1}'])
    assert code == 3 and report["result"]["pointer"] == "/kappa"


def test_replay_is_byte_identical(capsys):
    argv = ["check-stability", "--poly", "z1*z2-1", "--samples", "40", "--seed", "7"]
    code, first = _out(capsys, argv)
    replay = json.loads(first)["replay"]
    assert replay["seed"] == 7 and replay["argv"] == argv
    code2, second = _out(capsys, replay["argv"])
    assert (code, first) == (code2, second)
    _, threaded = _out(capsys, argv + ["--threads", "2"])
    a, b = json.loads(first), json.loads(threaded)
    assert a["result"] == b["result"]


def test_env_seed_overrides(monkeypatch):
    monkeypatch.setenv("STABILIS_SEED", "11")
    report, _ = run(["check-stability", "--poly", "z1+z2", "--seed", "3"])
    assert report["replay"]["seed"] == 11
    monkeypatch.setenv("STABILIS_SEED", "x")
    assert run(["check-stability", "--poly", "z1+z2"])[1] == 3


def test_text_format(capsys):
    code, out = _out(capsys, ["szasz", "--poly", "(1+z1)^2", "--format", "text"])
    assert code == 0
    assert "margin: 2 ≤ 14" in out
    assert not out.lstrip().startswith("{")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "stabilis.cli", "check-stability", "--poly", "z1*z2+1"], capture_output=True, text=True)
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["exit_code"] == 1
