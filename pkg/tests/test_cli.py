import json
from fractions import Fraction as F

import pytest

from berez import report as rep
from berez.cli import main
from berez.grassmann import GrassmannElement
from berez.oracle import random_even_supermatrix
from berez.supermatrix import Supermatrix, even_block_det

from conftest import g


def write_matrix(tmp_path, A, name="m.json"):
    path = tmp_path / name
    path.write_text(json.dumps(A.to_json()))
    return str(path)


@pytest.fixture
def diag23(tmp_path):
    return write_matrix(tmp_path, Supermatrix.diagonal([2, 3], 1, 1))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def terms(x):
    return [{"coeff": f"{x.numerator}/{x.denominator}", "monomial": []}] if x else []


class TestInvariants:
    def test_diagonal_report(self, capsys, diag23):
        code, out, err = run(capsys, "invariants", "--input", diag23, "--max-k", "3")
        assert code == 0
        doc = json.loads(out)
        assert doc["c"] == [terms(F(v)) for v in (1, -1, 3, -9)]
        assert doc["Q"] == [terms(F(1)), terms(F(3))]
        assert doc["P"] == [terms(F(1)), terms(F(2))]
        assert doc["c_star"]["-1"] == terms(F(1, 9))
        assert doc["skipped"] == {}

    def test_degenerate_exit_3(self, capsys, tmp_path):
        path = write_matrix(tmp_path, Supermatrix.identity(2, 1))
        code, out, err = run(capsys, "invariants", "--input", path)
        assert code == 3
        assert "denominator Hankel body singular" in err
        doc = json.loads(out)
        assert "Q" not in doc and "P" not in doc
        assert doc["skipped"]["Q"].startswith("denominator Hankel body singular")
        assert "c" in doc and "gamma" in doc

    def test_malformed_monomial_exit_2(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"generators": 2, "p": 1, "q": 0,
                                    "entries": [[[{"coeff": "1/1", "monomial": [2, 2]}]]]}))
        code, out, err = run(capsys, "invariants", "--input", str(path))
        assert code == 2
        assert "non-increasing monomial" in err and out == ""

    def test_parity_violation_names_coordinates(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        entries = [[[{"coeff": "1/1", "monomial": []}], [{"coeff": "1/1", "monomial": []}]],
                   [[], [{"coeff": "1/1", "monomial": []}]]]
        path.write_text(json.dumps({"generators": 0, "p": 1, "q": 1, "entries": entries}))
        code, _, err = run(capsys, "ber", "--input", str(path))
        assert code == 2 and "(0, 1)" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "ber", "--input", str(tmp_path / "nope.json"))
        assert code == 2

    def test_window_option(self, capsys, diag23):
        code, out, _ = run(capsys, "invariants", "--input", diag23, "--window=-1:2")
        assert code == 0
        assert list(json.loads(out)["gamma"]) == ["2", "1", "0", "-1"]


class TestBer:
    def test_both_methods_agree(self, capsys, diag23):
        code, out, _ = run(capsys, "ber", "--input", diag23, "--method", "both")
        doc = json.loads(out)
        assert code == 0
        assert doc["ber_classical"] == doc["ber_traces"] == [{"coeff": "2/3", "monomial": []}]
        assert doc["agree"] is True

    def test_ordinary(self, capsys, tmp_path, rng):
        A = random_even_supermatrix(rng, 3, 0, 2)
        code, out, _ = run(capsys, "ber", "--input", write_matrix(tmp_path, A))
        loaded = rep.loads(out)
        assert code == 0
        assert loaded["ber_traces"] == loaded["ber_classical"] == even_block_det(A.block(0, 0))

    def test_classical_only(self, capsys, diag23):
        code, out, _ = run(capsys, "ber", "--input", diag23, "--method", "classical")
        doc = json.loads(out)
        assert "ber_traces" not in doc and "agree" not in doc

    def test_max_k_too_small(self, capsys, diag23):
        code, _, err = run(capsys, "ber", "--input", diag23, "--max-k", "1")
        assert code == 2


class TestMinPoly:
    def test_generic_residual_zero(self, capsys, tmp_path, rng):
        while True:
            A = random_even_supermatrix(rng, 2, 1, 4)
            try:
                A.inverse()
                break
            except ArithmeticError:
                pass
        code, out, _ = run(capsys, "minpoly", "--input", write_matrix(tmp_path, A))
        doc = json.loads(out)
        assert code == 0
        assert all(e == [] for row in doc["residual"] for e in row)
        assert len(doc["min_poly"]) == 4


class TestVerify:
    def test_battery_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "--seed", "3")
        assert code == 0
        assert "FAIL" not in out.split("SUMMARY")[0]
        assert out.splitlines()[-1].startswith("SUMMARY\tseed=3")

    def test_selftest_detects_corruption(self, capsys):
        code, out, _ = run(capsys, "selftest")
        assert code == 1
        failing = {line.split("\t")[2] for line in out.splitlines() if line.startswith("FAIL")}
        assert "hankel-vanishing" in failing

    def test_identity_input(self, capsys, tmp_path):
        code, out, _ = run(capsys, "verify", "--input", write_matrix(tmp_path, Supermatrix.identity(2, 1)))
        status = {line.split("\t")[2]: line.split("\t")[0] for line in out.splitlines()[:-1]}
        assert code == 0
        assert status["ber-multiplicative"] == status["supertrace-cyclicity"] == "PASS"
        assert status["c-recurrence"] == status["gamma-recurrence"] == "SKIP"

    def test_deterministic(self, capsys):
        first = run(capsys, "verify", "--seed", "5")[1]
        assert run(capsys, "verify", "--seed", "5")[1] == first

    def test_output_file(self, capsys, tmp_path, diag23):
        out = tmp_path / "r.txt"
        code, stdout, _ = run(capsys, "verify", "--input", diag23, "--output", str(out))
        assert code == 0 and stdout == ""
        assert out.read_text().splitlines()[-1].startswith("SUMMARY")


class TestReportRoundTrip:
    def test_every_key(self, rng):
        n = 4
        A = Supermatrix(1, 1, [[3 + g(n, 1, 2), g(n, 1)], [g(n, 2) - g(n, 3, coeff=2), -2 + g(n, 3, 4)]], n)
        report = rep.build_report(A, rep.INVARIANT_KEYS + rep.BER_KEYS + rep.MINPOLY_KEYS)
        assert report["skipped"] == {}
        text = rep.dumps(report)
        assert rep.dumps(rep.loads(text)) == text
        loaded = rep.loads(text)
        assert loaded["ber_classical"] == report["ber_classical"]
        assert isinstance(loaded["gamma"][-1], GrassmannElement)

    def test_deterministic(self, rng):
        A = random_even_supermatrix(rng, 2, 2, 4)
        keys = rep.INVARIANT_KEYS + rep.BER_KEYS
        assert rep.dumps(rep.build_report(A, keys)) == rep.dumps(rep.build_report(A, keys))
