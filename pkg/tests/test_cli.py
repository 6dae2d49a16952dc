import csv
import json

from halving_opt.cli import CONFIG_ERROR, OK, TOLERANCE_NOT_MET, main

CSV_HEADER = ["method", "function", "eps", "iterations", "value_calls",
              "direction_calls", "full_grad_calls", "wall_ms", "final_gap"]


def test_functions_lists_corpus(capsys):
    assert main(["functions"]) == OK
    out = capsys.readouterr().out
    for name in ("quartic", "maxaffine", "tilted-linear", "absdiff", "exp-sum"):
        assert name in out


def test_solve_smooth_function_succeeds(capsys):
    assert main(["solve", "quartic", "--eps", "1e-4"]) == OK
    out = capsys.readouterr().out
    assert "quartic via halving" in out
    assert "gap" in out


def test_solve_json_output_parses(capsys):
    assert main(["solve", "exp-sum", "--eps", "1e-3", "--json"]) == OK
    d = json.loads(capsys.readouterr().out)
    assert d["gap"] <= 1e-3
    assert d["counters"]["full_grad_calls"] == 0


def test_solve_divergent_nonsmooth_exits_3(capsys):
    assert main(["solve", "absdiff", "--eps", "1e-3"]) == TOLERANCE_NOT_MET
    err = capsys.readouterr().err
    assert "accuracy target not met" in err


def test_solve_unknown_function_exits_2(capsys):
    assert main(["solve", "nope", "--eps", "1e-3"]) == CONFIG_ERROR
    assert "unknown function" in capsys.readouterr().err


def test_solve_rejects_bad_eps(capsys):
    assert main(["solve", "quartic", "--eps", "-1"]) == CONFIG_ERROR


def test_solve_missing_problem_file_exits_2(capsys):
    assert main(["solve", "no/such/file.json", "--eps", "1e-3"]) == CONFIG_ERROR


def test_solve_problem_file_objective(capsys):
    assert main(["solve", "problems/toy.json", "--eps", "1e-6"]) == OK
    out = capsys.readouterr().out
    assert "toy via halving" in out


def test_perturb_mode_requires_delta(capsys):
    assert main(["solve", "quartic", "--eps", "1e-3",
                 "--perturb-mode", "adversarial"]) == CONFIG_ERROR
    assert "--perturb-delta" in capsys.readouterr().err


def test_solve_trace_file(tmp_path, capsys):
    trace = tmp_path / "run.json"
    assert main(["solve", "tilted-linear", "--eps", "1e-2", "--trace", str(trace),
                 "--no-small-grad-stop"]) == OK
    capsys.readouterr()
    d = json.loads(trace.read_text())
    assert len(d["trace"]) == d["iterations"] > 0


def test_solve_csv_appends_without_duplicate_header(tmp_path, capsys):
    target = tmp_path / "runs.csv"
    assert main(["solve", "quartic", "--eps", "1e-3", "--csv", str(target)]) == OK
    assert main(["solve", "exp-sum", "--eps", "1e-3", "--csv", str(target)]) == OK
    capsys.readouterr()
    rows = list(csv.reader(target.open()))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 3
    assert {rows[1][1], rows[2][1]} == {"quartic", "exp-sum"}
    # numeric cells round-trip exactly through repr
    assert float(rows[1][8]) <= 1e-3


def test_compare_reports_skips(capsys):
    assert main(["compare", "tilted-linear", "--eps", "1e-3"]) == OK
    out = capsys.readouterr().out
    assert "constant gradient" in out
    assert "halving" in out and "ellipsoid" in out


def test_dual_toy_certifies(capsys):
    assert main(["dual", "problems/toy.json"]) == OK
    out = capsys.readouterr().out
    assert "certified" in out and "yes" in out


def test_dual_uncertified_exits_3(capsys):
    assert main(["dual", "problems/toy.json", "--dual-bound", "0.01"]) == TOLERANCE_NOT_MET
    assert "without an optimality certificate" in capsys.readouterr().err


def test_dual_malformed_file_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["dual", str(bad)]) == CONFIG_ERROR
    spec = json.loads(open("problems/toy.json").read())
    spec["constraints"] = spec["constraints"][:1]
    bad.write_text(json.dumps(spec))
    assert main(["dual", str(bad)]) == CONFIG_ERROR


def test_sweep_writes_csv(tmp_path, capsys):
    target = tmp_path / "sweep.csv"
    assert main(["sweep", "--functions", "quartic,exp-sum", "--eps", "1e-2,1e-3",
                 "--methods", "halving,ellipsoid", "--csv", str(target)]) == OK
    capsys.readouterr()
    rows = list(csv.reader(target.open()))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 1 + 2 * 2 * 2


def test_sweep_stdout_and_bad_eps(capsys):
    assert main(["sweep", "--functions", "quartic", "--eps", "1e-2"]) == OK
    out = capsys.readouterr().out
    assert out.splitlines()[0] == ",".join(CSV_HEADER)
    assert main(["sweep", "--functions", "quartic", "--eps", "abc"]) == CONFIG_ERROR
