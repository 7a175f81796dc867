import json
import subprocess
import sys

import pytest

from autok3.cli import main, parse_kind
from autok3.classify import GroupKind
from autok3.serialize import check_document


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_pell_text(capsys):
    code, out, _ = run(capsys, "pell", "13")
    assert code == 0 and out.strip() == "x^2 - 13 y^2 = 1: (649, 180)"
    code, out, _ = run(capsys, "pell", "13", "--rhs", "-1", "--eps")
    assert "(18, 5)" in out and "eps: 13:-1" in out
    code, out, _ = run(capsys, "pell", "3", "--rhs", "-1")
    assert code == 0 and "unsolvable" in out


def test_pell_json(capsys):
    code, out, _ = run(capsys, "--json", "pell", "5", "--rhs", "-4")
    doc = json.loads(out)
    assert doc["verdict"] == "solvable" and doc["result"]["solution"] == [1, 1]
    assert doc["schema"] == "autok3/1"


def test_pell_bad_d(capsys):
    code, _, err = run(capsys, "pell", "1")
    assert code == 2 and "d must be" in err


def test_classify_text(capsys):
    code, out, _ = run(capsys, "classify", "--gram", "2", "4", "4", "2", "--generators")
    assert code == 0
    assert "extended group: InfiniteDihedral" in out
    assert "generator eps=-1 [[1, 4], [0, -1]]" in out
    assert "rotation  eps=+1 [[-1, -4], [4, 15]]" in out
    assert "finite: False" in out


def test_classify_quiet(capsys):
    code, out, _ = run(capsys, "--quiet", "classify", "--form", "1", "0", "-3", "--n", "2")
    assert code == 0 and out.strip() == "InfiniteCyclic"


@pytest.mark.parametrize("argv", [
    ["--gram", "2", "4", "4", "2"],
    ["--gram", "0", "1", "1", "0"],
    ["--form", "1", "0", "-2", "--n", "2"],
    ["--form", "2", "2", "-2"],
    ["--form", "3", "3", "-7"],
    ["--form", "4", "0", "-1"],
])
def test_classify_json_round_trip(capsys, argv):
    code, out, _ = run(capsys, "--json", "classify", *argv)
    assert code == 0
    doc = json.loads(out)
    check_document(doc)
    assert doc["basis"] == "input"
    assert json.loads(json.dumps(doc)) == doc


def test_classify_form_content_folds_into_n(capsys):
    code, out, _ = run(capsys, "--json", "classify", "--form", "2", "0", "-4")
    doc = json.loads(out)
    assert doc["n"] == 2 and doc["q"] == [1, 0, -2]


def test_check_document_rejects_tampering(capsys):
    _, out, _ = run(capsys, "--json", "classify", "--gram", "2", "4", "4", "2")
    doc = json.loads(out)
    doc["extended_group"]["generators"][0]["matrix"] = [[1, 1], [0, -1]]
    with pytest.raises(ValueError):
        check_document(doc)


@pytest.mark.parametrize("argv,sig", [
    (["--form", "1", "1", "1"], "(2,0)"),
    (["--form", "-1", "1", "-1"], "(0,2)"),
    (["--gram", "2", "1", "1", "2"], "(2,0)"),
])
def test_classify_definite_exit_2(capsys, argv, sig):
    code, _, err = run(capsys, "classify", *argv)
    assert code == 2 and sig in err


@pytest.mark.parametrize("argv", [
    ["--gram", "1", "0", "0", "-2"],  # odd
    ["--gram", "2", "1", "0", "-2"],  # not symmetric
    ["--form", "0", "0", "0"],
])
def test_classify_invalid_exit_2(capsys, argv):
    code, _, err = run(capsys, "classify", *argv)
    assert code == 2 and "error" in err


def test_pell_bit_guard_exit_3(capsys, monkeypatch):
    # main() writes the variable for worker processes; let monkeypatch restore it
    monkeypatch.setenv("AUTOK3_MAX_PELL_BITS", "4096")
    code, _, err = run(capsys, "--max-pell-bits", "8", "classify", "--form", "1", "0", "-46")
    assert code == 3 and "bits" in err


def test_table_deterministic(capsys):
    for which in ("1", "2", "3"):
        _, first, _ = run(capsys, "table", which)
        _, second, _ = run(capsys, "table", which)
        assert first == second
        header = first.splitlines()[0].split("\t")
        assert header[-1] == "erratum"


def test_table_1_errata(capsys):
    _, out, _ = run(capsys, "table", "1")
    rows = {line.split("\t")[0]: line.split("\t") for line in out.splitlines()[1:]}
    assert rows["17"][3] == "(66,16)" and "printed (66,33)" in rows["17"][5]
    assert rows["20"][3] == "(18,4)" and "printed (18,3)" in rows["20"][5]
    assert rows["13"][5] == ""


def test_table_2_row(capsys):
    _, out, _ = run(capsys, "table", "2")
    rows = {tuple(line.split("\t")[:2]): line.split("\t") for line in out.splitlines()[1:]}
    assert rows[("3", "-17")][2:5] == ["2", "+id", "none"]
    assert rows[("3", "-17")][5] == ""
    assert rows[("1", "-5")][2:5] == ["1", "-id", "l=0 -id"]


def test_table_json(capsys):
    _, out, _ = run(capsys, "--json", "table", "3")
    doc = json.loads(out)
    assert doc["table"] == 3 and len(doc["rows"]) == 9
    assert doc["rows"][0]["a"] == "1"


SWEEP = ["sweep", "--n", "1", "2", "--a", "-2", "2", "--b", "-2", "2", "--c", "-2", "2"]


def _sweep_keys(out):
    return [tuple(map(int, line.split("\t")[:4])) for line in out.splitlines()[1:]]


def test_sweep_order_and_filter(capsys):
    code, out, _ = run(capsys, *SWEEP)
    assert code == 0
    keys = _sweep_keys(out)
    assert keys == sorted(keys) and len(keys) > 20
    for line in out.splitlines()[1:]:
        n, a, b, c, d = map(int, line.split("\t")[:5])
        assert d == b * b - 4 * a * c > 0
    _, out2, _ = run(capsys, *SWEEP, "--kind", "dihedral")
    kinds = {line.split("\t")[5] for line in out2.splitlines()[1:]}
    assert kinds <= {"InfiniteDihedral"}
    _, out3, _ = run(capsys, *SWEEP, "--d-max", "8")
    assert all(int(line.split("\t")[4]) <= 8 for line in out3.splitlines()[1:])


def test_sweep_jobs_preserves_order(capsys):
    _, serial, _ = run(capsys, *SWEEP)
    _, parallel, _ = run(capsys, *SWEEP, "--jobs", "2")
    assert serial == parallel


def test_sweep_empty_range(capsys):
    code, out, err = run(capsys, "sweep", "--a", "2", "1")
    assert code == 0 and out == "" and "empty" in err
    code, out, err = run(capsys, "sweep", "--a", "0", "0", "--b", "0", "0", "--c", "0", "0")
    assert code == 0 and "no indefinite" in err


def test_sweep_json_lines(capsys):
    _, out, _ = run(capsys, "--json", *SWEEP[:1], "--a", "1", "1", "--b", "0", "1", "--c", "-2", "-1")
    for line in out.splitlines():
        check_document(json.loads(line))


def test_parse_kind():
    assert parse_kind("c2") is GroupKind.CYCLIC_ORDER_2
    assert parse_kind("InfiniteCyclic") is GroupKind.INFINITE_CYCLIC
    with pytest.raises(Exception):
        parse_kind("bogus")


def test_console_script_entry():
    r = subprocess.run([sys.executable, "-m", "autok3.cli", "pell", "7"], capture_output=True, text=True)
    assert r.returncode == 0 and "(8, 3)" in r.stdout
