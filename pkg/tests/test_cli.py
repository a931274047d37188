import json

import pytest

from goldlight.cli import main
from goldlight.report import emit_report, run_scenario, verdicts_from_json
from goldlight.scenario import ScenarioParseError, builtin_text, load_scenario


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, data, name="s.json"):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data, indent=2))
    return str(path)


@pytest.mark.parametrize("ident, code", [("example1", 0), ("example2", 0), ("curved1", 0), ("curved2", 1)])
def test_exit_codes_for_builtins(capsys, ident, code):
    assert run(capsys, "example", "--id", ident, "--format", "json")[0] == code


def test_example1_machine_report(capsys):
    code, out, _ = run(capsys, "example", "--id", "1", "--format", "json")
    assert code == 0
    assert '"classification": "radical_screen_transversal"' in out
    data = json.loads(out)
    assert data["schema"] and data["pass"] is True
    assert data["points"][0]["decomposition"]["r"] == 1
    assert {e["id"] for e in data["errata"]} == {"E1", "E2", "E3"}


def test_example2_errata(capsys):
    data = json.loads(run(capsys, "example", "--id", "2", "--format", "json")[1])
    assert {e["id"] for e in data["errata"]} == {"E1", "E3", "E4", "E5"}
    assert data["points"][0]["classification"] == "screen_transversal_anti_invariant"


def test_json_is_deterministic(capsys):
    first = run(capsys, "example", "--id", "example2", "--format", "json")[1]
    second = run(capsys, "example", "--id", "example2", "--format", "json")[1]
    assert first == second


def test_verdicts_round_trip():
    report = run_scenario("example2")
    assert verdicts_from_json(emit_report(report, "json")) == report.verdicts
    assert report.passed == all(report.verdicts.values())


def test_float_mode_echoes_tolerance(capsys):
    code, out, _ = run(capsys, "example", "--id", "curved1", "--mode", "float",
                       "--tolerance", "1e-8", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["mode"] == "float" and data["tolerance"] == 1e-8


def test_tolerance_warning_in_exact_mode(capsys):
    _, _, err = run(capsys, "example", "--id", "1", "--tolerance", "1e-3")
    assert "only applies in float mode" in err


def test_empty_check_list_runs_decomposition_only(capsys):
    code, out, _ = run(capsys, "example", "--id", "1", "--checks", "", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert set(data["verdicts"]) == {"golden", "p1.decomposition", "p1.D0"}


def test_selected_checks(capsys):
    data = json.loads(run(capsys, "example", "--id", "curved2", "--checks", "eq12,thm3.2",
                          "--format", "json")[1])
    assert data["pass"] is True
    assert {"p1.eq12", "p1.thm3.2", "p2.eq12", "p2.thm3.2"} <= set(data["verdicts"])
    assert "p1.thm3.1" not in data["verdicts"]


def test_unknown_check_id(capsys):
    code, _, err = run(capsys, "example", "--id", "1", "--checks", "thm7.7")
    assert code == 2 and "thm7.7" in err


def test_text_report(capsys):
    code, out, _ = run(capsys, "example", "--id", "1")
    assert code == 0
    assert "classification: radical_screen_transversal" in out
    assert "eq19    pass" in out


def test_verify_file_round_trip(capsys, tmp_path):
    path = write(tmp_path, builtin_text("example2"))
    assert run(capsys, "verify", "--scenario", path, "--format", "json")[0] == 0


def test_malformed_json_reports_position(capsys, tmp_path):
    path = write(tmp_path, '{\n  "name": "x",\n  "ambient": [1,\n}')
    code, _, err = run(capsys, "verify", "--scenario", path)
    assert code == 2 and "line 4, column 1" in err


def test_polynomial_error_points_into_the_file(tmp_path):
    data = json.loads(builtin_text("curved2"))
    data["submanifold"]["immersion"]["components"][7] = "x1 x2 +"
    path = write(tmp_path, data)
    with pytest.raises(ScenarioParseError) as info:
        load_scenario(path)
    line = open(path).read().splitlines()[info.value.line - 1]
    assert '"x1 x2 +"' in line
    # the column sits just past the dangling operator
    assert line[info.value.column - 2] == "+"


@pytest.mark.parametrize("mutate, fragment", [
    (lambda d: d.pop("submanifold"), "submanifold"),
    (lambda d: d["ambient"]["metric"].update(diagonal=["1", "0", "1", "1", "-1", "-1", "1", "1"]), "degenerate"),
    (lambda d: d["submanifold"]["immersion"]["components"].__setitem__(4, "x1 + 1/2 x2^2"), "neighbourhood"),
])
def test_invalid_geometry_exits_2(capsys, tmp_path, mutate, fragment):
    data = json.loads(builtin_text("curved2"))
    mutate(data)
    code, _, err = run(capsys, "verify", "--scenario", write(tmp_path, data))
    assert code == 2 and fragment in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "verify", "--scenario", "/no/such/file.json")
    assert code == 2 and "cannot read" in err
