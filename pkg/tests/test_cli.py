import json
import subprocess
import sys

import pytest

from hurwitzcf.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_expand(capsys):
    code, out, _ = run(capsys, "expand", "--re", "18/61", "--im", "-15/61")
    assert code == 0
    assert json.loads(out) == {"format": 1, "digits": [[2, 2], [0, 3]], "exhausted": True}


@pytest.mark.parametrize(
    "re, im, err",
    [("0", "0", "ZeroInput"), ("2/3", "0", "InputOutsideU"), ("0.3", "0", "decimal")],
)
def test_expand_domain_errors(capsys, re, im, err):
    code, out, stderr = run(capsys, "expand", "--re", re, "--im", im)
    assert code == 2 and out == "" and err in stderr


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["expand", "--re", "1/3"])
    assert exc.value.code == 2


def test_schedule(capsys):
    code, out, _ = run(capsys, "schedule", "--epsilon", "0.1", "--horizon", "4")
    assert code == 0 and json.loads(out)["levels"] == [6, 12, 24, 48]


def test_schedule_square_dump(capsys):
    code, out, _ = run(capsys, "schedule", "--epsilon", "1.0", "--horizon", "4", "--square", "4")
    pts = json.loads(out)["points"]
    assert code == 0 and len(pts) == 16 and pts[0] == [2 * 3**24, 2 * 3**24]


def test_schedule_infeasible_epsilon(capsys):
    code, _, _ = run(capsys, "schedule", "--epsilon", "0", "--horizon", "4")
    assert code == 2


def test_eval_and_cylinder(tmp_path, capsys):
    d = write(tmp_path, "d.json", {"digits": [[2, 2], [0, 3]]})
    code, out, _ = run(capsys, "eval", "--input", d)
    assert code == 0 and json.loads(out) == {"format": 1, "re": "18/61", "im": "-15/61"}
    code, out, _ = run(capsys, "cylinder", "--input", d)
    doc = json.loads(out)
    assert code == 0 and doc["q"] == [-5, 6] and doc["log_diam_lo"] < doc["log_diam_hi"]


def test_insert_eliminate_pipeline(tmp_path, capsys):
    code, sched, _ = run(capsys, "schedule", "--epsilon", "1.0", "--horizon", "3")
    s = tmp_path / "s.json"
    s.write_text(sched)
    code, words, _ = run(capsys, "seed", "sample", "--depth", "7", "--count", "3", "--rng-seed", "4")
    lines = words.splitlines()
    assert code == 0 and len(lines) == 3
    y = tmp_path / "y.json"
    y.write_text(lines[0])
    code, x, _ = run(capsys, "insert", "--schedule", str(s), "--input", str(y))
    assert code == 0 and len(json.loads(x)["digits"]) == 7 + 1 + 4
    xp = tmp_path / "x.json"
    xp.write_text(x)
    code, back, _ = run(capsys, "eliminate", "--schedule", str(s), "--input", str(xp))
    assert code == 0 and json.loads(back) == json.loads(lines[0])


def test_pattern_find(tmp_path, capsys):
    a = write(tmp_path, "A.json", {"points": [[0, 0], [1, 0], [0, 1]]})
    s = write(tmp_path, "S.json", {"points": [[5, 5], [7, 5], [5, 7], [9, 9]]})
    code, out, _ = run(capsys, "pattern", "find", "--pattern", a, "--set", s, "--max-scale", "3")
    lines = [json.loads(l) for l in out.splitlines()]
    assert code == 0 and len(lines) == 1
    assert lines[0]["v"] == [5, 5] and lines[0]["n"] == 2 and lines[0]["verified"]


def test_pattern_scan(tmp_path, capsys):
    a = write(tmp_path, "A.json", {"points": [[0, 0], [1, 0]]})
    d = write(tmp_path, "d.json", {"digits": [[3, 0], [10, 10], [11, 10], [12, 10]]})
    code, out, _ = run(capsys, "pattern", "scan", "--pattern", a, "--digits", d, "--max-scale", "2")
    lines = [json.loads(l) for l in out.splitlines()]
    assert code == 0 and [l["position"] for l in lines] == [3, 4, 4]


def test_strict_input_rejected(tmp_path, capsys):
    a = write(tmp_path, "A.json", {"points": [[0, 0]], "colour": "red"})
    s = write(tmp_path, "S.json", {"points": [[0, 0]]})
    code, _, err = run(capsys, "pattern", "find", "--pattern", a, "--set", s, "--max-scale", "1")
    assert code == 2 and "Extra inputs" in err


def test_missing_file_is_io_error(tmp_path, capsys):
    code, _, _ = run(capsys, "eval", "--input", str(tmp_path / "nope.json"))
    assert code == 4


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "lemmas", "--trials", "200", "--gamma-scale", "10")
    assert code == 3 and json.loads(out)["pass"] is False


def test_verify_holder_and_cover(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "holder", "--trials", "300")
    assert code == 0 and json.loads(out)["reports"]["holder"]["resampled_share"] >= 0.99
    code, out, _ = run(capsys, "verify", "--suite", "cover", "--trials", "1")
    assert code == 0 and json.loads(out)["reports"]["cover"]["r1"] is not None


def test_dim_csv_and_summary(tmp_path, capsys):
    summary = tmp_path / "fit.json"
    code, out, _ = run(capsys, "dim", "--source", "fourcorner", "--depth", "7", "--r-min", "0.00390625",
                       "--r-max", "0.25", "--steps", "4", "--summary", str(summary))
    rows = out.splitlines()
    assert code == 0 and rows[0] == "r,count" and len(rows) == 5
    assert abs(json.loads(summary.read_text())["slope"] - 1) < 0.1


def test_dim_massdist(capsys):
    code, out, _ = run(capsys, "dim", "--method", "massdist", "--depth", "5", "--samples", "20000")
    assert code == 0 and json.loads(out)["pass"]


def _cli(*argv, env=None):
    return subprocess.run([sys.executable, "-m", "hurwitzcf", *argv], capture_output=True, env=env)


def test_output_is_byte_identical_across_runs_and_threads(tmp_path):
    import os

    argv = ("verify", "--suite", "lemmas", "--trials", "1200", "--rng-seed", "7")
    env1 = dict(os.environ, HCF_THREADS="1")
    env2 = dict(os.environ, HCF_THREADS="2")
    a, b, c = _cli(*argv, env=env1), _cli(*argv, env=env1), _cli(*argv, env=env2)
    assert a.returncode == 0
    assert a.stdout == b.stdout == c.stdout


def test_seed_sample_determinism():
    argv = ("seed", "sample", "--depth", "5", "--count", "4", "--rng-seed", "3")
    assert _cli(*argv).stdout == _cli(*argv).stdout
    assert _cli(*argv).stdout != _cli("seed", "sample", "--depth", "5", "--count", "4").stdout
