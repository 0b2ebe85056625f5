import io
import json
import subprocess
import sys

import pytest

from jacsyz.cli import EXIT_HYPOTHESIS, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, JobSpec, main, run
from jacsyz.resolution import BettiTable
from jacsyz.toric import VerificationReport, predict_toric


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


# (argv, exit code): the stable contract
GOLDEN = [
    (["predict", "--toric", "-n", "2", "-e", "2", "--json"], EXIT_OK),
    (["predict", "--smooth", "-n", "2", "-d", "3"], EXIT_OK),
    (["predict", "--arrangement", "-n", "2", "-d", "5"], EXIT_OK),
    (["verify-toric", "--builtin", "example1-main"], EXIT_OK),
    (["verify-toric", "--builtin", "example1-tangent"], EXIT_HYPOTHESIS),
    (["verify-toric", "--builtin", "example1-degenerate"], EXIT_HYPOTHESIS),
    (["verify-toric", "--builtin", "example1-degenerate", "--force"], EXIT_HYPOTHESIS),
    (["verify-toric", "--builtin", "fermat", "-n", "3", "-e", "2", "--field", "fp"], EXIT_OK),
    (["verify-cor1", "--builtin", "fermat", "-n", "2", "-e", "3"], EXIT_OK),
    (["verify-cor1", "--builtin", "example1-degenerate"], EXIT_HYPOTHESIS),
    (["check-nc", "--builtin", "example1-main"], EXIT_OK),
    (["check-nc", "--builtin", "example1-tangent"], EXIT_HYPOTHESIS),
    (["check-regseq", "--expr", "x0^2", "-n", "2"], EXIT_HYPOTHESIS),
    (["check-regseq", "--builtin", "fermat"], EXIT_OK),
    (["resolve", "--expr", "x0^3+x1^3+x2^3"], EXIT_OK),
    (["d0", "--builtin", "example1-degenerate"], EXIT_OK),
    (["verify-toric", "--seed", "4", "-n", "2", "-e", "2"], EXIT_OK),
    (["verify-toric", "--seed", "4", "-n", "2", "-e", "2", "--bound", "0"], EXIT_HYPOTHESIS),
    (["resolve"], EXIT_USAGE),
    (["resolve", "--expr", "x0/2"], EXIT_USAGE),
    (["resolve", "--expr", "x0^2+x1"], EXIT_USAGE),
    (["resolve", "--expr", "x0^3+x1^3+x2^3", "--max-degree", "4"], EXIT_USAGE),
    (["resolve", "--expr", "x0", "--builtin", "fermat"], EXIT_USAGE),
    (["resolve", "--expr", "x0^3", "--field", "fp:100"], EXIT_USAGE),
    (["predict", "-n", "2"], EXIT_USAGE),
    (["predict", "--arrangement", "-n", "2", "-d", "3"], EXIT_USAGE),
    (["predict", "--toric", "--smooth", "-n", "2", "-e", "2"], EXIT_USAGE),
    (["frobnicate"], EXIT_USAGE),
    ([], EXIT_USAGE),
    (["verify-toric", "--seed", "1"], EXIT_USAGE),
    (["check-nc", "--builtin", "example1-main", "--field", "fp:5"], EXIT_USAGE),
]


@pytest.mark.parametrize("argv,code", GOLDEN, ids=[" ".join(a) or "<empty>" for a, _ in GOLDEN])
def test_exit_codes(argv, code):
    got, out, err = call(*argv)
    assert got == code, err
    if code == EXIT_USAGE:
        assert err.startswith("error:") and out == ""
    elif err:
        # hypothesis failures without a report explain themselves on stderr
        assert code == EXIT_HYPOTHESIS and err.startswith("error:") and out == ""


def test_predict_json():
    code, out, _ = call("predict", "--toric", "-n", "2", "-e", "2", "--json")
    data = json.loads(out)
    assert BettiTable.from_dict(data["table"]) == predict_toric(2, 2).table
    assert data["exponents"] == [3, 3, 3] and data["N"] == 3


def test_verify_json_roundtrip():
    code, out, _ = call("verify-toric", "--builtin", "example1-main", "--json")
    data = json.loads(out)
    rep = VerificationReport.from_dict(data)
    assert rep.match and rep.computed == predict_toric(2, 2).table
    assert json.loads(rep.to_json()) == data


def test_degenerate_force_table():
    code, out, _ = call("verify-toric", "--builtin", "example1-degenerate", "--force", "--json")
    data = json.loads(out)
    assert data["hypotheses"]["independent_hyperplanes"] is False
    assert BettiTable.from_dict(data["computed"]) == BettiTable.from_triples(
        [(0, 0, 1), (1, 4, 3), (2, 6, 1), (2, 7, 1), (2, 8, 1), (3, 9, 1)])
    assert data["exponents"] == [2, 3, 4]
    code, out, _ = call("verify-toric", "--builtin", "example1-degenerate", "--json")
    assert json.loads(out)["computed"] is None


def test_resolve_text():
    code, out, _ = call("resolve", "--builtin", "example1-tangent")
    assert out == "\n".join([
        "       0 1 2",
        "total: 1 3 2",
        "    0: 1 . .",
        "    1: . . .",
        "    2: . . .",
        "    3: . 3 .",
        "    4: . . 2",
    ]) + "\n"


def test_resolve_json_and_lex():
    a = call("resolve", "--builtin", "example1-degenerate", "--json")[1]
    b = call("resolve", "--builtin", "example1-degenerate", "--json", "--order", "lex")[1]
    assert a == b
    assert BettiTable.from_json(a).twists(2) == [6, 7, 8]


def test_check_nc_output():
    code, out, _ = call("check-nc", "--builtin", "example1-tangent", "--json")
    assert json.loads(out) == {"normal_crossing": False, "failing_edges": [[0], [1], [2]]}


def test_d0_json():
    code, out, _ = call("d0", "--builtin", "fermat", "--json")
    data = json.loads(out)
    assert data["m"] == 3 and data["exponents"] == [3, 3, 3]


@pytest.mark.parametrize("argv", [
    ["verify-toric", "--seed", "11", "-n", "2", "-e", "2", "--json"],
    ["d0", "--builtin", "example1-degenerate"],
    ["verify-cor1", "--builtin", "fermat", "--json"],
])
def test_deterministic(argv):
    assert call(*argv) == call(*argv)


def test_input_file(tmp_path):
    p = tmp_path / "curve.txt"
    p.write_text("ring 3\n# the main curve\nx0*x1*x2*\n(x0^2+x1^2+x2^2)\n")
    code, out, _ = call("resolve", "--input", str(p), "--json")
    assert code == EXIT_OK
    assert BettiTable.from_json(out) == predict_toric(2, 2).table
    g = tmp_path / "g.txt"
    g.write_text("ring 3\nx0^2+x1^2+x2^2\n")
    assert call("verify-toric", "--input", str(g))[0] == EXIT_OK


@pytest.mark.parametrize("text", ["x0^2\n", "ring\nx0\n", "ring 3\n", "ring 2\nx0^2\n", "ring 3\nx0^2+x5\n"])
def test_bad_input_files(tmp_path, text):
    p = tmp_path / "bad.txt"
    p.write_text(text)
    code, out, err = call("resolve", "--input", str(p))
    assert code == EXIT_USAGE and err.startswith("error:")


def test_missing_file(tmp_path):
    code, _, err = call("resolve", "--input", str(tmp_path / "nope.txt"))
    assert code == EXIT_USAGE and "error:" in err


def test_mismatch_exit(monkeypatch):
    # hypotheses hold but the tables differ: must be loud
    import jacsyz.toric as toric

    real = toric.predict_toric

    def skewed(m, e=None):
        p = real(m, e)
        return toric.Prediction(BettiTable.from_triples(p.table.triples() + [(3, 10, 1)]), p.exponents)

    monkeypatch.setattr(toric, "predict_toric", skewed)
    code, out, _ = call("verify-toric", "--builtin", "example1-main")
    assert code == EXIT_MISMATCH and "match: no" in out


def test_run_jobspec():
    out, err = io.StringIO(), io.StringIO()
    assert run(JobSpec("predict", n=3, e=2, json=True), out, err) == EXIT_OK
    assert BettiTable.from_dict(json.loads(out.getvalue())["table"]) == predict_toric(3, 2).table


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "jacsyz", "predict", "--toric", "-n", "2", "-e", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "total: 1 3 3 1" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "jacsyz", "resolve", "--expr", "x0/x1"],
                          capture_output=True, text=True)
    assert proc.returncode == 64 and proc.stderr.startswith("error:")
