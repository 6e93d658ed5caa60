import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from rkboundary import zoo
from rkboundary.cli import main
from rkboundary.julia import factor_quotient


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


CERTIFY = ("certify-factor", "--k", "szego_pow:0.5", "--t", "szego_pow:0.5", "--map", "square")
JC = ("jc-report", "--k", "szego", "--t", "szego", "--map", "halfway", "--xi", "1+0i")
ITER = ("iterate", "--k", "szego", "--map", "halfway", "--x0", "0", "--xi", "1+0i", "-N", "40")


class TestDocumentedExamples:
    def test_certify_refuted(self, capsys):
        code, out, _ = run(capsys, *CERTIFY)
        rep = json.loads(out)
        assert code == 2 and rep["verdict"] == "Refuted"
        assert "witness" in rep

    def test_jc_report(self, capsys):
        code, out, _ = run(capsys, *JC)
        rep = json.loads(out)
        assert code == 0
        assert rep["c_hat"] == pytest.approx(0.5, abs=1e-4)
        assert rep["sandwich_ok"] is True

    def test_iterate(self, capsys):
        code, out, _ = run(capsys, *ITER)
        rep = json.loads(out)
        assert code == 0 and rep["verdict"] == "Converged"


class TestExitCodes:
    def test_unknown_command(self, capsys):
        assert run(capsys, "frobnicate")[0] == 1

    def test_missing_flag(self, capsys):
        assert run(capsys, "jc-report", "--k", "szego")[0] == 1

    def test_unknown_label(self, capsys):
        assert run(capsys, "certify-factor", "--k", "nope", "--t", "szego", "--map", "identity")[0] == 1

    def test_no_command(self, capsys):
        assert run(capsys)[0] == 1

    def test_iterate_needs_c_below_one(self, capsys):
        code, _, err = run(capsys, "iterate", "--k", "szego", "--map", "identity", "--x0", "0", "--xi", "1+0i")
        assert code == 1 and "c < 1" in err

    def test_sequences_required(self, capsys):
        assert run(capsys, "estimate-c", "--k", "szego", "--t", "szego", "--map", "halfway", "--xi", "1",
                   "--seq", "radial")[0] == 1

    def test_certified(self, capsys):
        assert run(capsys, "certify-factor", "--k", "szego", "--t", "szego", "--map", "hartz:0.5:1+0i")[0] == 0

    def test_inconclusive(self, capsys):
        code, out, _ = run(capsys, "boundary-scan", "--k", "min_ray", "--seq", "radial@inf", "--classify")
        assert code == 3
        assert json.loads(out)["trichotomy"]["verdict"] == "Inconclusive"

    def test_weighted_derivative_pass(self, capsys):
        assert run(capsys, "weighted-derivative", "--map", "halfway", "--alpha", "1")[0] == 0


class TestDeterminism:
    @pytest.mark.parametrize("argv", [CERTIFY, JC, ITER,
                                      ("boundary-scan", "--k", "szego", "--seq", "radial@1+0i", "--classify",
                                       "--region", "gamma:M=2@1+0i"),
                                      ("regularity", "--t", "szego", "--lam", "1+0i", "--seq", "radial@1+0i")])
    def test_byte_identical(self, capsys, argv):
        _, a, _ = run(capsys, *argv)
        _, b, _ = run(capsys, *argv)
        assert a == b and a

    def test_out_file(self, capsys, tmp_path):
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        main([*JC, "--out", str(p1)])
        main([*JC, "--out", str(p2)])
        assert p1.read_bytes() == p2.read_bytes()


def test_witness_recheck(capsys):
    _, out, _ = run(capsys, *CERTIFY)
    w = json.loads(out)["witness"]
    pts = [zoo.DISK.point(complex(*c[0])) for c in w["points"]]
    q = factor_quotient(zoo.szego_pow(0.5), zoo.szego_pow(0.5), zoo.square())
    G = np.array([[q(a, b) for b in pts] for a in pts])
    H = (G + G.conj().T) / 2
    assert np.linalg.eigvalsh(H)[0] < -w["tol"]
    v = np.array([complex(*x) for x in w["witness"]])
    assert (v.conj() @ H @ v).real == pytest.approx(w["min_eig"], abs=1e-12)


class TestCsv:
    def test_trajectory_header(self, capsys):
        _, out, _ = run(capsys, *ITER, "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["n", "re", "im", "diag", "E_level", "probe_residual"]
        assert len(rows) > 10

    def test_scan_header(self, capsys):
        _, out, _ = run(capsys, "boundary-scan", "--k", "szego", "--seq", "radial@1+0i", "-N", "5",
                        "--region", "e:M=1@1+0i", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["n", "re", "im", "diag", "member", "p_step"]
        assert rows[1][:3] == ["1", "0.5", "0.0"]

    def test_plot_data(self, capsys, tmp_path):
        p = tmp_path / "plot.csv"
        run(capsys, *ITER, "--emit-plot-data", str(p))
        rows = list(csv.reader(p.open()))
        assert rows[0] == ["series", "n", "value"]
        assert {r[0] for r in rows[1:]} == {"E_level", "probe_residual"}


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "rkboundary", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "certify-factor" in r.stdout
