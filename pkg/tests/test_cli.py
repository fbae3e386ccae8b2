import csv
import io
import json
import math

import pytest

from localsecrecy.bsc import exact_secrecy_capacity_bsc
from localsecrecy.cli import (
    EXIT_INPUT,
    EXIT_KKT_FAIL,
    EXIT_OK,
    SWEEP_HEADER,
    main,
    sweep_rows,
)

BSC_FILE = """\
main:
  0.9 0.1
  0.1 0.9
eaves:
  {e0} {e1}
  {e1} {e0}
input = 0.5 0.5
R = {r}
theta = 0.085
epsilon = 1e-3
u_size = 2
"""


def run(argv):
    buf = io.StringIO()
    rc = main(argv, out=buf)
    return rc, buf.getvalue()


@pytest.fixture
def bsc_file(tmp_path):
    def make(q=0.3, r=1):
        path = tmp_path / f"bsc_{q}_{r}.txt"
        path.write_text(BSC_FILE.format(e0=1 - q, e1=q, r=r))
        return str(path)

    return make


def _value(out, key):
    line = next(l for l in out.splitlines() if l.startswith(key))
    return line[len(key):].strip()


class TestApprox:
    def test_leakage_regime_value(self, bsc_file):
        rc, out = run(["approx", bsc_file()])
        assert rc == EXIT_OK
        assert float(_value(out, "objective")) == pytest.approx(680000.0, rel=1e-4)
        assert _value(out, "active constraints") == "leakage"
        assert "bits" in out and "nats" in out

    def test_zero_rate_budget(self, bsc_file):
        rc, out = run(["approx", bsc_file(r=0)])
        assert rc == EXIT_OK
        assert float(_value(out, "objective")) == 0.0

    def test_malformed_row(self, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        path.write_text("main:\n  0.9 0.1\n  0.1\n")
        rc, _ = run(["approx", str(path)])
        assert rc == EXIT_INPUT
        assert "row 1" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert run(["approx", str(tmp_path / "nope.txt")])[0] == EXIT_INPUT

    def test_deterministic_json(self, bsc_file, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(["approx", bsc_file(), "--out", str(a)])
        run(["approx", bsc_file(), "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()
        keys = set(json.loads(a.read_text()))
        assert keys == {"p_u", "l", "objective", "nu", "rho", "xi", "mu", "iterations", "converged"}


class TestKkt:
    def test_round_trip(self, bsc_file, tmp_path):
        sol = tmp_path / "sol.json"
        assert run(["approx", bsc_file(), "--out", str(sol)])[0] == EXIT_OK
        rc, out = run(["kkt", bsc_file(), "--solution", str(sol)])
        assert rc == EXIT_OK
        assert out.splitlines()[-1].endswith("PASS")

    def test_corrupted(self, bsc_file, tmp_path):
        sol = tmp_path / "sol.json"
        run(["approx", bsc_file(), "--out", str(sol)])
        d = json.loads(sol.read_text())
        d["l"][0][0] += 5.0
        sol.write_text(json.dumps(d))
        rc, out = run(["kkt", bsc_file(), "--solution", str(sol)])
        assert rc == EXIT_KKT_FAIL
        assert "FAIL" in out

    def test_missing_solution(self, bsc_file, tmp_path):
        rc, _ = run(["kkt", bsc_file(), "--solution", str(tmp_path / "none.json")])
        assert rc == EXIT_INPUT

    def test_shape_mismatch(self, bsc_file, tmp_path):
        sol = tmp_path / "sol.json"
        run(["approx", bsc_file(), "--out", str(sol)])
        d = json.loads(sol.read_text())
        d["l"] = [r + [0.0] for r in d["l"]]
        sol.write_text(json.dumps(d))
        assert run(["kkt", bsc_file(), "--solution", str(sol)])[0] == EXIT_INPUT


class TestExact:
    def test_bsc(self, bsc_file):
        rc, out = run(["exact", bsc_file(q=0.45)])
        assert rc == EXIT_OK
        val = float(_value(out, "secrecy capacity (nats)"))
        assert val == pytest.approx(exact_secrecy_capacity_bsc(0.1, 0.45), abs=1e-6)

    def test_identical(self, tmp_path):
        path = tmp_path / "same.txt"
        path.write_text("main:\n  0.8 0.3\n  0.2 0.7\neaves:\n  0.8 0.3\n  0.2 0.7\n")
        rc, out = run(["exact", str(path), "--resolution", "0.01"])
        assert rc == EXIT_OK
        assert abs(float(_value(out, "secrecy capacity (nats)"))) <= 1e-12

    def test_alphabet_too_large(self, tmp_path):
        rows = "\n".join("  " + " ".join("1" if i == j else "0" for j in range(5)) for i in range(5))
        path = tmp_path / "big.txt"
        path.write_text(f"main:\n{rows}\neaves:\n{rows}\n")
        assert run(["exact", str(path)])[0] == EXIT_INPUT


class TestSweep:
    def test_header_and_rows(self):
        rc, out = run(["sweep-bsc", "--steps", "5"])
        assert rc == EXIT_OK
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == SWEEP_HEADER
        assert len(rows) == 6

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run(["sweep-bsc", "--out", str(a)])
        run(["sweep-bsc", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_near_q_limit(self):
        q = 0.45
        rows = sweep_rows(q, 0.085, 1e-3, q - 1e-9, q - 1e-9, 1)
        assert rows[0][6] == pytest.approx(0.0, abs=1e-8)

    @pytest.mark.parametrize(
        "args",
        [["--pmin", "0.3", "--pmax", "0.2"], ["--pmax", "0.5"], ["--steps", "0"], ["--delta", "-1"]],
    )
    def test_invalid_range(self, args):
        assert run(["sweep-bsc", *args])[0] == EXIT_INPUT

    def test_bits_column(self):
        row = sweep_rows(0.45, 0.085, 1e-3, 0.1, 0.2, 2)[0]
        assert row[7] == pytest.approx(row[6] / math.log(2))

    def test_bad_flag_exit_code(self):
        with pytest.raises(SystemExit) as exc:
            main(["sweep-bsc", "--steps", "x"])
        assert exc.value.code == EXIT_INPUT
