import io
import json

import pytest

from exppair_lp.cli import run_cli


def run(*argv):
    out = io.StringIO()
    code = run_cli(list(argv), out)
    return code, out.getvalue()


def last_line(text):
    return text.strip().splitlines()[-1]


def test_mu():
    code, out = run("mu", "--sigma", "3/5")
    assert code == 0
    assert last_line(out).startswith("value=1409/12170 ")


def test_xi():
    code, out = run("xi", "--a", "1", "--b", "4")
    assert code == 0
    assert last_line(out).startswith("value=111/790 word=H05 attained=true")


def test_thm4():
    code, out = run("thm", "--name", "thm4", "--r", "5")
    assert code == 0
    assert "11/410" in out and "alpha < 1/37: True" in out


def test_thm5_mentions_range():
    code, out = run("thm", "--name", "thm5", "--r", "5")
    assert code == 0 and "r >= 1" in out and "17/711" in out
    assert run("thm", "--name", "thm5", "--r", "2")[0] == 2


def test_thm6():
    code, out = run("thm", "--name", "thm6", "--r", "10")
    assert code == 0 and "coincide" in out


def test_delta():
    code, out = run("delta", "--a", "1", "--b", "2")
    assert code == 0 and last_line(out).startswith("value=269/1217 ")


def write(tmp_path, data):
    p = tmp_path / "p.json"
    p.write_text(json.dumps(data))
    return str(p)


def test_optimize_and_stats(tmp_path):
    cfg = write(tmp_path, {"objective": [{"num": ["11/10", 0, 0]}, {"num": [0, 1, "-1/2"]}]})
    code, out = run("optimize", "--config", cfg, "--stats", "--depth", "20", "--tol", "1/1000")
    assert code == 0
    assert "calls      1" in out
    assert last_line(out) == "value=176/1025 word=H05 attained=true calls=0:1"


def test_optimize_greedy_and_hull(tmp_path):
    cfg = write(tmp_path, {"objective": [{"num": ["11/10", 0, 0]}, {"num": [0, 1, "-1/2"]}]})
    code, out = run("optimize", "--config", cfg, "--mode", "greedy")
    assert code == 0 and "greedy" in out
    code, out = run("optimize", "--config", cfg, "--hull")
    assert code == 0 and "attained=false" in last_line(out)


def test_infeasible_exit_code(tmp_path):
    cfg = write(tmp_path, {"objective": [{"num": [0, 1, 0]}],
                           "constraints": [{"coeffs": [0, 1, -2], "rel": ">="}]})
    code, out = run("optimize", "--config", cfg)
    assert code == 1 and last_line(out).startswith("value=infeasible")


@pytest.mark.parametrize("argv", [
    ("bogus",),
    ("xi", "--a", "2", "--b", "1"),
    ("mu", "--sigma", "abc"),
    ("mu", "--sigma", "2"),
    ("optimize", "--config", "/nonexistent/file.json"),
    ("generations", "--initial", "nope", "--depth", "2"),
    ("generations", "--initial", "I", "--depth", "99"),
    ("optimize", "--config", "x.json", "--tol", "0"),
])
def test_usage_errors(argv, capsys):
    assert run(*argv)[0] == 2


def test_bad_config_exit(tmp_path):
    cfg = write(tmp_path, {"objective": [{"num": [0, 1, 0.5]}]})
    assert run("optimize", "--config", cfg)[0] == 2


def test_generations_plot(tmp_path):
    svg = tmp_path / "g.svg"
    code, out = run("generations", "--initial", "1/6,2/3", "--depth", "6", "--plot", str(svg))
    assert code == 0 and "wrote 126 points" in out
    assert svg.read_text().count("<circle") == 126


def test_generations_listing():
    code, out = run("generations", "--initial", "(1/6,2/3)", "--depth", "2")
    assert code == 0
    assert out.splitlines()[1].split() == ["1/30,", "13/15", "A^2"]


def test_tables():
    code, out = run("table", "xi")
    assert code == 0 and out.count("True") == 15
    code, out = run("table", "mu", "--jobs", "2")
    assert code == 0 and "1409/12170" in out and "3/71" in out
