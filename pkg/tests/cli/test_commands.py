"""Tests for the command-line interface."""

import json

import pytest

from goppa_bounds.main import main


# =============================================================================
# Fixtures
# =============================================================================


@pytest.fixture
def run(capsys):
    """Run the CLI in-process; returns (status, stdout, stderr)."""

    def _run(*argv: str) -> tuple[int, str, str]:
        status = main(list(argv))
        captured = capsys.readouterr()
        return status, captured.out, captured.err

    return _run


# =============================================================================
# Tests
# =============================================================================


class TestBoundCommand:
    """Test the bound subcommand."""

    def test_human_report(self, run):
        status, out, _ = run("bound", "--q", "2", "--n", "5", "--r", "5")

        assert status == 0
        assert "extended bound:     41" in out
        assert "branch: 4" in out

    def test_structured_report(self, run):
        status, out, _ = run("bound", "--q", "2", "--n", "11", "--r", "5", "--format", "structured")
        report = json.loads(out)

        assert status == 0
        assert report["extended_bound"] == 76261
        assert report["meta"]["command"] == "bound"
        assert "generated_at" not in report["meta"]

    def test_reports_are_reproducible(self, run):
        argv = ("bound", "--q", "2", "--n", "3", "--r", "7", "--format", "structured")
        _, first, _ = run(*argv)
        _, second, _ = run(*argv)

        assert first == second
        assert json.loads(first)["case"]["branch"] == "table-derived"

    def test_timestamps_add_run_metadata(self, run):
        _, out, _ = run("bound", "--q", "2", "--n", "3", "--r", "5", "--format", "structured", "--timestamps")
        meta = json.loads(out)["meta"]

        assert "generated_at" in meta
        assert len(meta["run_id"]) == 12

    def test_p_and_t_instead_of_q(self, run):
        status, out, _ = run("bound", "--p", "2", "--t", "1", "--n", "3", "--r", "5", "--format", "structured")

        assert status == 0
        assert json.loads(out)["params"]["q"] == 2

    def test_conflicting_q_and_p(self, run):
        status, _, err = run("bound", "--q", "4", "--p", "3", "--n", "3", "--r", "5")

        assert status == 2
        assert "disagrees" in err

    def test_invalid_q(self, run):
        status, out, err = run("bound", "--q", "6", "--n", "3", "--r", "5")

        assert status == 2
        assert out == ""
        assert "not a prime power" in err

    def test_structured_error(self, run):
        status, _, err = run("bound", "--q", "2", "--n", "3", "--r", "2", "--format", "structured")

        assert status == 2
        # log lines precede the error document on stderr
        assert json.loads(err[err.index("{\n") :])["error"] == "PARAMETER_ERROR"

    def test_missing_r(self, run):
        status, _, err = run("bound", "--q", "2", "--n", "3")

        assert status == 2
        assert "--r" in err


class TestVerifyCommand:
    """Test the verify subcommand."""

    def test_pass(self, run):
        status, out, _ = run("verify", "--q", "2", "--n", "3", "--r", "5", "--workers", "2")

        assert status == 0
        assert "[ok  ] PGL·G orbits (extended bound): expected 5, measured 5" in out
        assert out.rstrip().endswith("status: pass")

    def test_capacity(self, run):
        status, out, err = run("verify", "--q", "2", "--n", "11", "--r", "5")

        assert status == 2
        assert out == ""
        assert "requires 2^55 elements" in err

    def test_budget_flag(self, run):
        status, _, err = run("verify", "--q", "2", "--n", "3", "--r", "5", "--budget", "10")

        assert status == 2
        assert "requires 2^15 elements" in err

    def test_dump(self, run, tmp_path):
        status, out, _ = run(
            "verify", "--q", "2", "--n", "3", "--r", "3", "--dump", "--out", str(tmp_path), "--format", "structured"
        )
        report = json.loads(out)

        assert status == 0
        assert report["status"] == "pass"
        assert len(report["dumps"]) == 4
        assert "stats" not in report


class TestMatricesCommand:
    """Test the matrices subcommand."""

    def test_confirmed(self, run):
        status, out, _ = run("matrices", "--q", "2", "--n", "3", "--k", "3")

        assert status == 0
        assert "matrices of order k: 56" in out
        assert "(confirmed)" in out

    @pytest.mark.slow
    def test_q27_brute_force(self, run):
        status, out, _ = run("matrices", "--q", "3", "--n", "3", "--k", "7", "--format", "structured")
        report = json.loads(out)

        assert status == 0
        assert report["total"] == 2106
        assert report["brute_force_total"] == 2106

    def test_above_matrix_budget(self, run):
        status, out, _ = run("matrices", "--q", "4", "--n", "3", "--k", "5", "--format", "structured")
        report = json.loads(out)

        assert status == 0
        assert report["total"] == 8064
        assert "brute_force_total" not in report

    def test_hypotheses_not_met(self, run):
        status, out, _ = run("matrices", "--q", "8", "--k", "7")

        assert status == 0
        assert "hypotheses not met" in out


class TestCodeCommand:
    """Test the code subcommand."""

    def test_code_with_certificates(self, run, tmp_path):
        status, out, _ = run(
            "code",
            "--q", "2", "--n", "5", "--r", "3",
            "--alpha", "2",
            "--extend",
            "--witness", "frobenius",
            "--witness", "affine",
            "--out", str(tmp_path),
            "--format", "structured",
        )  # fmt: skip
        report = json.loads(out)

        assert status == 0
        assert report["length"] == 32
        assert report["dimension"] >= 17
        assert report["extended_length"] == 33
        assert report["extended_sums_zero"] is True
        assert [c["kind"] for c in report["certificates"]] == ["frobenius", "affine"]
        assert (tmp_path / "parity-p2-t1-n5-r3-alpha2.txt").exists()

    def test_length_eight_code(self, run, tmp_path):
        status, out, _ = run(
            "code", "--q", "2", "--n", "3", "--r", "3", "--alpha", "2", "--extend", "--witness", "frobenius",
            "--out", str(tmp_path),
        )  # fmt: skip

        assert status == 0
        assert "length: 8" in out
        assert "extended length: 9   coordinate sums zero: yes" in out
        assert "certificate σ^1" in out

    def test_alpha_outside_s(self, run, tmp_path):
        status, _, err = run("code", "--q", "2", "--n", "5", "--r", "3", "--alpha", "1", "--out", str(tmp_path))

        assert status == 2
        assert "not in S" in err


class TestScanCommand:
    """Test the scan subcommand."""

    def test_scan_csv(self, run, tmp_path):
        csv = tmp_path / "scan.csv"
        status, out, _ = run("scan", "--field-sizes", "2", "3", "--limit", "5", "--csv", str(csv))

        assert status == 0
        assert "non-integral: 0" in out
        assert csv.read_text().splitlines()[0] == "q,n,r,branch,extended_bound,affine_orbit_bound,closed_form,integral,agrees"

    def test_scan_default_grid(self, run):
        status, out, _ = run("scan", "--format", "structured")
        report = json.loads(out)

        assert status == 0
        assert report["triples"] == 8 * 6 * 5
        assert report["non_integral"] == 0
        assert report["disagreements"] == 0

    def test_scan_rejects_non_prime_power(self, run):
        status, _, _ = run("scan", "--field-sizes", "6")
        assert status == 2


class TestParser:
    """Test argument-level errors."""

    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["frobnicate"])
        assert exc_info.value.code == 2

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["--version"])
        assert exc_info.value.code == 0
        assert "goppa-bounds" in capsys.readouterr().out
