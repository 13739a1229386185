import json
import subprocess
import sys
from pathlib import Path

import pytest

from csmclasses import cli
from csmclasses.chow import ChowClass
from csmclasses.segre import UnstableResultError

INPUTS = Path(__file__).resolve().parent.parent / "inputs"


def write(tmp_path, text, name="in.txt"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


# --- input files -------------------------------------------------------------------

def test_read_input_with_comments(tmp_path):
    path = write(tmp_path, "# comment\nn: 2\n\nx0^2   # trailing\nx0*x1\n0\n")
    inp = cli.read_input(path)
    assert inp.n == 2 and inp.r == -1 and len(inp.gens) == 3


def test_read_input_with_y_header(tmp_path):
    inp = cli.read_input(write(tmp_path, "n: 2\nr: 1\nx0*y1 - x1*y0\n"))
    assert inp.r == 1 and inp.gens[0].vars.y_count == 2


@pytest.mark.parametrize("text,fragment", [
    ("x0\n", "missing"),
    ("n: 2\n", "no generators"),
    ("n: 2\nx0\nn: 3\n", "header after"),
    ("n: 2\nn: 2\nx0\n", "repeated"),
    ("n: 0\nx0\n", "positive"),
    ("n: 2\nx0 +\n", "line 2"),
    ("n: 2\nx5\n", "line 2"),
])
def test_bad_input_files(tmp_path, capsys, text, fragment):
    code, _, err = run(["csm", write(tmp_path, text)], capsys)
    assert code == cli.EXIT_INPUT
    assert fragment in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(["csm", str(tmp_path / "nope.txt")], capsys)
    assert code == cli.EXIT_INPUT and "cannot read" in err


@pytest.mark.parametrize("flags", [["--prime", "4"], ["--prime", "10008"], ["--trials", "1"],
                                   ["--method", "magic"], ["--combos", "0"]])
def test_bad_flags_exit_with_input_status(capsys, flags):
    with pytest.raises(SystemExit) as exc:
        cli.main(["csm", str(INPUTS / "nodal_cubic.txt")] + flags)
    assert exc.value.code == cli.EXIT_INPUT


def test_non_homogeneous_generator(tmp_path, capsys):
    code, _, err = run(["csm", write(tmp_path, "n: 2\nx0 + x1^2\n")], capsys)
    assert code == cli.EXIT_INPUT and "homogeneous" in err


def test_y_variables_rejected_outside_segre(tmp_path, capsys):
    code, _, _ = run(["csm", write(tmp_path, "n: 2\nr: 1\nx0*y0\n")], capsys)
    assert code == cli.EXIT_INPUT


# --- commands ------------------------------------------------------------------------

def test_csm_text(capsys):
    code, out, _ = run(["csm", str(INPUTS / "nodal_cubic.txt")], capsys)
    assert code == 0
    assert out.splitlines() == ["csm: 3*H + H^2", "euler: 1"]


@pytest.mark.parametrize("method", cli.METHODS)
def test_csm_json_each_method(capsys, method):
    code, out, _ = run(["csm", str(INPUTS / "nonreduced_line_p2.txt"), "--json", "--method", method], capsys)
    d = json.loads(out)
    assert code == 0
    assert d["csm"] == ["0", "1", "2"] and d["euler"] == "2"
    assert d["meta"]["method"] == method and d["meta"]["prime"] == 32003


def test_euler(capsys):
    code, out, _ = run(["euler", str(INPUTS / "three_points_p2.txt")], capsys)
    assert code == 0 and out.strip() == "euler: 3"


def test_milnor(capsys):
    code, out, _ = run(["milnor", str(INPUTS / "nodal_cubic.txt"), "--json"], capsys)
    d = json.loads(out)
    assert code == 0
    assert d["milnor"] == ["0", "0", "1"] and d["cvir"] == ["0", "3", "0"]


def test_milnor_of_smooth_surface(capsys):
    code, out, _ = run(["milnor", str(INPUTS / "two_quadrics_p4.txt"), "--json"], capsys)
    d = json.loads(out)
    assert code == 0 and d["milnor"] == ["0"] * 5 and d["euler"] == "8"


def test_milnor_rejects_non_complete_intersection(capsys):
    code, _, err = run(["milnor", str(INPUTS / "three_points_p2.txt")], capsys)
    assert code == cli.EXIT_INPUT


def test_segre_of_input_scheme(capsys):
    code, out, _ = run(["segre", str(INPUTS / "line_p2.txt"), "--json"], capsys)
    d = json.loads(out)
    assert code == 0
    assert d["segre"] == [[1, 0, "1"], [2, 0, "-1"]]


def test_segre_on_product(tmp_path, capsys):
    path = write(tmp_path, "n: 2\nr: 1\nx0*y0 + x1*y1\n")
    code, out, _ = run(["segre", path], capsys)
    assert code == 0 and out.splitlines()[0] == "segre: " + str(
        ChowClass.parse("H + h - H^2 - 2*H*h + 3*H^2*h", 2, 1))


def test_zeta(capsys):
    code, out, _ = run(["zeta", str(INPUTS / "three_points_p2.txt"), "--N", "6", "--N", "2", "--json"], capsys)
    d = json.loads(out)
    assert code == 0
    assert d["gamma"] == ["0", "0", "3", "1"]
    assert d["csm_N"]["6"] == ["0", "0", "3", "13", "22", "18", "7"]
    assert d["euler_N"] == {"2": "3", "6": "7"}


def test_zeta_rejects_small_N(capsys):
    code, _, _ = run(["zeta", str(INPUTS / "three_points_p2.txt"), "--N", "1"], capsys)
    assert code == cli.EXIT_INPUT


def test_check_agreement(capsys):
    code, out, _ = run(["check", str(INPUTS / "nonreduced_line_p2.txt")], capsys)
    assert code == 0 and out.splitlines()[-1] == "agree"


def test_check_mismatch_exit(monkeypatch, capsys):
    monkeypatch.setattr(cli, "csm_via_calX", lambda *a, **k: ChowClass(2, -1, {(1, 0): 7}))
    code, out, _ = run(["check", str(INPUTS / "nonreduced_line_p2.txt"), "--json"], capsys)
    assert code == cli.EXIT_MISMATCH and json.loads(out)["agree"] is False


def test_unstable_exit(monkeypatch, capsys):
    def boom(*a, **k):
        raise UnstableResultError("no majority")
    monkeypatch.setattr(cli, "segre_class", boom)
    code, _, err = run(["segre", str(INPUTS / "line_p2.txt")], capsys)
    assert code == cli.EXIT_UNSTABLE and "unstable" in err


def test_seed_and_prime_are_reported(capsys):
    code, out, _ = run(["csm", str(INPUTS / "nodal_cubic.txt"), "--json", "--seed", "9",
                        "--prime", "10007", "--trials", "3"], capsys)
    meta = json.loads(out)["meta"]
    assert code == 0 and meta["seed"] == 9 and meta["prime"] == 10007 and meta["trials"] == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "csmclasses", "euler", str(INPUTS / "nodal_cubic.txt")],
                          capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0 and proc.stdout.strip() == "euler: 1"
