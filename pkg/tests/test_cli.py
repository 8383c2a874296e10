import json

import pytest

from multilevel_cdc.cli import run_command


def run(capsys, *argv):
    code = run_command(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--q", "2", "--n", "5", "--t", "2")
    assert code == 0 and out.splitlines()[0] == "1074029925"
    code, out, _ = run(capsys, "bounds", "--q", "4", "--n", "5", "--t", "2", "--json")
    assert json.loads(out)["cardinality"] == "1152921573619470865"


def test_bounds_parameter_error(capsys):
    code, _, err = run(capsys, "bounds", "--q", "2", "--n", "18", "--t", "2")
    assert code == 2 and "requires q^{2t} >= s" in err
    code, _, err = run(capsys, "bounds", "--q", "6", "--n", "5", "--t", "2")
    assert code == 2
    code, _, err = run(capsys, "bounds", "--q", "2")
    assert code == 2 and err.count("\n") == 1


def test_table5(capsys):
    code, out, _ = run(capsys, "table5")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 13
    assert "302231473001706877649153" in lines[-1]
    code, out, _ = run(capsys, "table5", "--json")
    assert all(r["match"] for r in json.loads(out)["rows"])


def test_onefact(capsys):
    code, out, _ = run(capsys, "onefact", "--m", "4")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 3
    assert all(len(line.split()) == 2 for line in lines)
    assert run(capsys, "onefact", "--m", "5")[0] == 2
    code, out, _ = run(capsys, "onefact", "--m", "6", "--json")
    assert len(json.loads(out)["classes"]) == 5


def test_skeleton(capsys):
    code, out, _ = run(capsys, "skeleton", "--q", "2", "--n", "5", "--t", "2")
    assert code == 0 and len(out.splitlines()) == 16
    code, out, _ = run(capsys, "skeleton", "--q", "4", "--explicit", "19", "--json")
    assert len(json.loads(out)["entries"]) == 26
    assert run(capsys, "skeleton", "--q", "2")[0] == 2


def test_fdrmc_modes(capsys, tmp_path):
    code, out, _ = run(capsys, "fdrmc", "--cols", "2,3,4,5,6,6", "--delta", "4", "--mode", "bound", "--json")
    data = json.loads(out)
    assert code == 0 and data["vmin"] == 9 and data["lemmas"]["stcons"] == 9
    dump = tmp_path / "basis.txt"
    code, out, _ = run(capsys, "fdrmc", "--cols", "3,4,5,6,6,6", "--delta", "4", "--mode", "construct", "--dump", str(dump))
    assert code == 0 and "achieved: 12" in out
    assert dump.read_text().splitlines()[0] == "12 6 6 2 4"
    code, out, _ = run(capsys, "fdrmc", "--cols", "2,2,4,4", "--delta", "4", "--mode", "oracle")
    assert code == 0 and "oracle: 2" in out


def test_build_and_verify(capsys, tmp_path):
    path = tmp_path / "plan.json"
    code, out, _ = run(capsys, "build", "--q", "2", "--n", "5", "--t", "2", "--out", str(path), "--dump-bases")
    assert code == 0 and "achieved cardinality: 1074029925" in out
    manifest = json.loads(path.read_text())
    assert manifest["promised_cardinality"] == "1074029925"
    assert (tmp_path / "plan.bases" / "A.txt").exists()
    code, out, _ = run(capsys, "verify", "--in", str(path), "--mode", "skeleton")
    assert code == 0 and out.splitlines()[-1] == "OK"
    code, out, _ = run(capsys, "verify", "--in", str(path), "--mode", "cross", "--samples", "2000", "--json")
    assert code == 0 and json.loads(out)["min_distance"]["overall"] == 8


def test_verify_bad_input(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "verify", "--in", str(bad))[0] == 2
    assert run(capsys, "verify", "--mode", "skeleton")[0] == 2
    assert run(capsys, "verify", "--mode", "table5")[0] == 0


def test_verify_failure_exit_code(capsys, tmp_path):
    path = tmp_path / "plan.json"
    run(capsys, "build", "--q", "2", "--n", "5", "--t", "2", "--out", str(path))
    data = json.loads(path.read_text())
    data["entries"][1]["vector"] = data["entries"][2]["vector"]
    path.write_text(json.dumps(data))
    assert run(capsys, "verify", "--in", str(path), "--mode", "skeleton")[0] == 2


def test_deterministic_output(capsys):
    a = run(capsys, "skeleton", "--q", "3", "--n", "6", "--t", "2", "--json")[1]
    b = run(capsys, "skeleton", "--q", "3", "--n", "6", "--t", "2", "--json")[1]
    assert a == b


@pytest.mark.parametrize("argv", [[], ["nope"], ["fdrmc", "--cols", "3,2", "--delta", "2"]])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2
