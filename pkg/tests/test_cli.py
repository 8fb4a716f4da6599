import json
import subprocess
import sys

import pytest

from lilsigma.certifier import parse
from lilsigma.cli import main
from lilsigma.regression import ETA
from lilsigma.rational import format_rational, parse_rational


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "-p", "3", "-q", "2", "-x", "277/665", "--exact")
    assert code == 0 and out.strip() == format_rational(ETA)
    code, out, _ = run(capsys, "eval", "-p", "3", "-q", "2", "-x", "1/2")
    assert out.strip() == "1/4"
    code, out, _ = run(capsys, "eval", "-p", "3", "-q", "2", "-x", "277/665", "--trunc", "12",
                       "--format", "json")
    enc = json.loads(out)
    assert parse_rational(enc["lower"]) <= ETA <= parse_rational(enc["upper"])


@pytest.mark.parametrize("argv", [
    ["eval", "-p", "3", "-q", "2", "-x", "04/6"],
    ["eval", "-p", "4", "-q", "2", "-x", "1/3"],
    ["eval", "-p", "3", "-q", "2", "-x", "3/2"],
    ["scan", "-p", "3", "-q", "2", "--kmax", "0"],
    ["certify", "-p", "3", "-q", "2", "--cstar", "2/3"],
    ["check", "/nonexistent/cert.jsonl"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["eval", "-p", "3"])
    assert info.value.code == 2


@pytest.mark.parametrize("p,q,k,top", [(3, 2, 6, "277/665"), (2, 1, 3, "1/3"), (19, 10, 3, "2879/5859")])
def test_scan(capsys, p, q, k, top):
    code, out, _ = run(capsys, "scan", "-p", str(p), "-q", str(q), "--kmax", str(k),
                       "--format", "json")
    assert code == 0
    cands = json.loads(out)["candidates"]
    assert cands[0]["x"] == top
    values = [parse_rational(c["sigma_sq"]) for c in cands]
    assert values == sorted(values, reverse=True)


def test_sigma(capsys):
    code, out, _ = run(capsys, "sigma", "-p", "13", "-q", "6", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["witness"] == "3/7" and data["sigma_sq_at_witness"] == "948/3773"
    code, out, _ = run(capsys, "sigma", "-p", "5", "-q", "3")
    assert "OddOdd" in out and "2/7" in out


def test_certify_then_check(capsys, tmp_path):
    path = tmp_path / "c.jsonl"
    code, _, _ = run(capsys, "certify", "-p", "3", "-q", "2", "--cstar", "277/665", "--out", str(path))
    assert code == 0
    assert parse(path.read_text()).eta == ETA
    code, out, _ = run(capsys, "check", str(path))
    assert code == 0 and out.strip() == "Accepted"
    text = path.read_text().replace('"margin":"', '"margin":"-', 1)
    # first line after the header is a QuadBound whose margin is now negated
    path.write_text(text)
    code, out, _ = run(capsys, "check", str(path), "--format", "json")
    assert code == 1 and json.loads(out)["verdict"] == "Rejected"
    path.write_text("{}\n")
    code, out, _ = run(capsys, "check", str(path))
    assert code == 2 and out.startswith("ParseError")


def test_certify_stdout_is_certificate(capsys):
    code, out, _ = run(capsys, "certify", "-p", "2", "-q", "1", "--cstar", "1/3")
    assert code == 0 and parse(out).p == 2


def test_certify_failure(capsys):
    code, out, _ = run(capsys, "certify", "-p", "3", "-q", "2", "--cstar", "1/3", "--max-level", "6",
                       "--format", "json")
    assert code == 1 and json.loads(out)["status"] == "failed"


def test_empirical(capsys):
    code, out, _ = run(capsys, "empirical", "-p", "3", "-q", "2", "-x", "1/2", "-N", "3",
                       "--mode", "orbit")
    assert code == 0 and out == "k,value\n1,0.75\n2,0.125\n3,0.6875\n"
    code, out, _ = run(capsys, "empirical", "-p", "3", "-q", "2", "-x", "1/3", "-N", "64")
    rows = out.strip().split("\n")
    assert rows[0] == "N_j,d_n,lil_ratio" and [r.split(",")[0] for r in rows[1:]] == ["16", "32", "64"]
    code, _, _ = run(capsys, "empirical", "-p", "3", "-q", "2", "-x", "1/3", "-N", "8")
    assert code == 2


def test_reproduce_command(capsys):
    code, out, _ = run(capsys, "reproduce-paper")
    assert code == 0
    assert "FAIL" not in out
    assert "-4903660393458055269333329257473743/246310011351673762422918069225758250" in out
    assert "-5091905468453476674801592843459949/70937283269282043577800403937018376000" in out
    code, out, _ = run(capsys, "reproduce-paper", "--format", "json")
    data = json.loads(out)
    assert data["failed"] == 0 and {"radicand", "proof-certificate"} <= {r["tag"] for r in data["rows"]}


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "lilsigma", "eval", "-p", "2", "-q", "1", "-x", "1/3"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.strip() == "14/27"
