import io
import math
import re
import subprocess
import sys

import pytest

from periodred.cli import EXIT, build_parser, cmd_plot2d, cmd_reduce, main


def run(argv):
    args = build_parser().parse_args(argv)
    out = io.StringIO()
    code = {"reduce": cmd_reduce, "plot2d": cmd_plot2d}[args.command](args, out)
    return code, out.getvalue()


def field(text, key):
    m = re.search(rf"^{re.escape(key)}: (.*)$", text, re.M)
    return m.group(1) if m else None


def test_reduce_output(problem_path):
    code, out = run(["reduce", problem_path("quarter_pi"), "--samples", "200000"])
    assert code == EXIT["ok"]
    assert field(out, "resolved[+]") == "{ x > 0, x - 1 < 0, y > 0, x^2*y + y - 1 < 0 } :: 1"
    assert field(out, "K.kind") == "union"
    assert field(out, "sign") == "+1"
    assert field(out, "agree") == "yes"
    vol = float(field(out, "volume").split()[0])
    assert vol == pytest.approx(math.pi / 4, abs=0.02)
    assert any(line.startswith("trace: step=") for line in out.splitlines())


def test_reduce_writes_trace_file(problem_path, tmp_path):
    path = tmp_path / "trace.txt"
    code, out = run(["reduce", problem_path("pi"), "--samples", "10000", "--trace", str(path)])
    assert code == 0
    assert "rule=change-of-variables" in path.read_text()


def test_plot2d_marks_inside_points():
    code, out = run(["plot2d", "--set", "{x^2 + y^2 < 1}", "--vars", "x,y", "--resolution", "9"])
    assert code == 0
    rows = [line.split("\t") for line in out.splitlines()[1:]]
    assert len(rows) == 81
    inside = {(float(x), float(y)) for _, x, y, flag in rows if flag == "1"}
    assert all(x * x + y * y < 1 for x, y in inside)
    assert len(inside) > 20


@pytest.mark.parametrize("text,code", [
    ("vars: x\ndomain: {x > \nintegrand: 1\n", EXIT["parse"]),
    ("vars: x, y\ndomain: {0 < x < 1, 0 < y < 1}\nintegrand: 1/(x*y)\n", EXIT["divergence"]),
    ("vars: x, y, z\ndomain: {0 < x < 1, 0 < y < 1, 0 < z < 1}\nintegrand: 1/(x + y + z)\n", EXIT["scope"]),
    ("vars: x\ndomain: {x > 0}\nintegrand: 1/(1 + x^2)\n", EXIT["ok"]),
])
def test_exit_codes(tmp_path, capsys, text, code):
    f = tmp_path / "p.txt"
    f.write_text(text)
    assert main(["reduce", str(f), "--samples", "1000"]) == code
    if code == EXIT["scope"]:
        assert "unimplemented: resolution for d > 2" in capsys.readouterr().err


def test_budget_exit_code(problem_path):
    assert main(["reduce", problem_path("quarter_pi"), "--samples", "1000", "--budget", "1"]) == EXIT["budget"]


def test_module_entry_point(problem_path):
    res = subprocess.run([sys.executable, "-m", "periodred", "compactify", problem_path("pi")],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0
    assert "piece[0]: { x + 1 > 0, x - 1 < 0 } :: 1/(x^2 + 1)" in res.stdout


def test_plot2d_rejects_three_variables():
    assert main(["plot2d", "--set", "{x^2 + y^2 + z^2 < 1}"]) == EXIT["scope"]


def test_compactify_bounded_file_gives_one_piece(tmp_path):
    f = tmp_path / "disk.txt"
    f.write_text("domain: {x^2 + y^2 < 1}\nintegrand: 1\n")
    args = build_parser().parse_args(["compactify", str(f)])
    out = io.StringIO()
    from periodred.cli import cmd_compactify
    assert cmd_compactify(args, out) == 0
    assert [ln for ln in out.getvalue().splitlines() if ln.startswith("piece[")] == ["piece[0]: { x^2 + y^2 - 1 < 0 } :: 1"]
