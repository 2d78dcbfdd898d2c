import json

from latlog.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code = main([*argv, "--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_validate_bundled(capsys):
    code, out = run(capsys, "validate", "--lattice", "mc")
    assert code == 0
    assert "status: valid" in out


def test_validate_every_bundled_lattice(capsys):
    from latlog.bundled import BUNDLED

    for name in BUNDLED:
        code, _ = run(capsys, "validate", "--lattice", name)
        assert code == 0, name


def test_validate_broken_lattice(tmp_path, capsys):
    bad = tmp_path / "bad.lat"
    bad.write_text("elements 0 1\norder 0 < 1\nconnective -> -+\n1 1\n1 1\n")
    code, report = run_json(capsys, "validate", "--lattice", str(bad))
    assert code == 1
    assert report["code"] == "IMPLICATION_LAW_VIOLATION"
    assert report["details"]["witness"] == ["1", "0"]


def test_valid_command_exit_codes(capsys):
    code, _ = run(capsys, "valid", "--lattice", "classical", "--formula", "x -> x")
    assert code == 0
    code, out = run(capsys, "valid", "--lattice", "classical", "--formula", "x -> y")
    assert code == 1
    assert "countervaluation" in out


def test_eval_command(capsys):
    code, report = run_json(capsys, "eval", "--lattice", "godel3",
                            "--formula", "x -> y", "--assign", "x=1,y=h")
    assert code == 0
    assert report["value"] == "h"


def test_interpolate_command_no(capsys):
    code, report = run_json(capsys, "interpolate", "--lattice", "three-01",
                            "x & (x -> #0)", "y | (y -> #0)")
    assert code == 1
    assert report["status"] == "NO"
    assert report["lower_envelope"] == "a"
    assert report["upper_envelope"] == "a"
    assert [c["values"] for c in report["closure"]] == ["0", "1"]


def test_interpolate_command_yes(capsys):
    code, report = run_json(capsys, "interpolate", "--lattice", "classical-01",
                            "x & y", "y | z")
    assert code == 0
    assert report["interpolant"] == "y"


def test_closure_command_with_connective_restriction(capsys):
    # "--connectives=->" because a bare "->" looks like an option to argparse
    code, report = run_json(capsys, "closure", "--lattice", "lukasiewicz3",
                            "--vars", "x", "--connectives=->")
    assert code == 0
    assert report["cumulative"] == [2, 4, 6, 9, 11, 12]
    assert report["columns"] == 12


def test_constants_command(capsys):
    code, report = run_json(capsys, "constants", "--lattice", "three-0a")
    assert code == 0
    assert report["all_values"] is True
    assert report["values"]["1"] == "#0 -> #0"


def test_decide_command(capsys):
    code, report = run_json(capsys, "decide", "--lattice", "classical")
    assert code == 1
    assert report["path"] == "no_constant_values"
    code, report = run_json(capsys, "decide", "--lattice", "three-0a")
    assert code == 0


def test_spectrum_command(capsys):
    code, report = run_json(capsys, "spectrum", "--lattice", "classical", "--k", "1")
    entries = {e["subset"]: e["status"] for e in report["entries"]}
    assert entries["{}"] == "NO"
    assert entries["{0}"] == "YES"
    assert entries["{0, 1}"] == "YES"
    assert code == 2  # the {1} entry stays UNKNOWN in bounded mode


def test_skolemize_command(capsys):
    code, report = run_json(capsys, "skolemize", "--lattice", "mc", "--formula",
                            "(exists x. B(x)) -> exists y. forall z. C(y,z)")
    assert code == 0
    assert len(report["replacements"]) == 2
    assert report["family_size"] == 5


def test_expand_command(capsys):
    code, report = run_json(capsys, "expand", "--lattice", "mc",
                            "--formula", "P(c,d,d) -> exists x. P(c,x,d)", "--n", "2")
    assert code == 0
    assert report["expansion"] == "P(c, d, d) -> P(c, c, d) | P(c, d, d)"


def test_herbrand_command(capsys):
    code, report = run_json(capsys, "herbrand", "--lattice", "mc",
                            "--formula", "P(c,d,d) -> exists x. P(c,x,d)")
    assert code == 0
    assert report["n"] == 2
    assert report["expansion"] == "P(c, d, d) -> P(c, c, d) | P(c, d, d)"
    assert report["checks"] == [{"n": 1, "valid": False}, {"n": 2, "valid": True}]


def test_herbrand_unknown_exit(capsys):
    code, report = run_json(capsys, "herbrand", "--lattice", "mc",
                            "--formula", "P(c) -> exists x. Q(x)", "--max-n", "3")
    assert code == 2
    assert report["status"] == "UNKNOWN"


def test_kripke_command(tmp_path, capsys):
    frame = tmp_path / "fork.frame"
    frame.write_text("worlds a b g\norder a < b\norder a < g\n")
    out_lat = tmp_path / "fork.lat"
    code, report = run_json(capsys, "kripke", "--frame", str(frame),
                            "--out-lattice", str(out_lat))
    assert code == 0
    assert len(report["elements"]) == 5
    assert report["mode_disagreements"]
    # the emitted lattice file loads and validates
    code2, rep2 = run_json(capsys, "validate", "--lattice", str(out_lat))
    assert code2 == 0


def test_residuum_command_exit_codes(capsys):
    code, report = run_json(capsys, "residuum", "--lattice", "godel3")
    assert code == 0
    code, report = run_json(capsys, "residuum", "--lattice", "diamond")
    assert code == 1
    assert len(report["cases"]) == 4


def test_fo_interpolate_command(capsys):
    code, report = run_json(
        capsys, "fo-interpolate", "--lattice", "classical",
        "--formula", "(forall x. P(x)) -> P(c)")
    assert code == 0
    assert report["interpolant"] == "forall z1. P(z1)"
    assert report["trace"]["expansion_n"] == 1


def test_input_error_exit_code(capsys):
    code, _ = run(capsys, "valid", "--lattice", "no-such-lattice",
                  "--formula", "x")
    assert code == 3
    code, _ = run(capsys, "valid", "--lattice", "classical", "--formula", "x &")
    assert code == 3


def test_text_and_json_reports_mirror(capsys):
    code_t = main(["decide", "--lattice", "three-0a"])
    text = capsys.readouterr().out
    code_j, report = run_json(capsys, "decide", "--lattice", "three-0a")
    assert code_t == code_j
    for key in report:
        assert f"{key}:" in text


def test_report_written_to_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["valid", "--lattice", "classical", "--formula", "x -> x",
                 "--format", "json", "--output", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["status"] == "valid"


def test_env_budget_override(capsys, monkeypatch):
    monkeypatch.setenv("LATLOG_VAR_CAP", "1")
    code, report = run_json(capsys, "valid", "--lattice", "classical",
                            "--formula", "x & y & x")
    assert code == 2  # two variables exceed the overridden cap: UNKNOWN
    assert report["code"] == "BUDGET_EXCEEDED"
    monkeypatch.setenv("LATLOG_VAR_CAP", "abc")
    code, _ = run(capsys, "valid", "--lattice", "classical", "--formula", "x")
    assert code == 3


def test_determinism_of_reports(capsys):
    _, first = run_json(capsys, "interpolate", "--lattice", "three-01",
                        "x & (x -> #0)", "y | (y -> #0)")
    _, second = run_json(capsys, "interpolate", "--lattice", "three-01",
                         "x & (x -> #0)", "y | (y -> #0)")
    assert first == second
