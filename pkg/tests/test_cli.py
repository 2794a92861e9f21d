import json
import subprocess
import sys

import pytest

from latfree import cli


def run_main(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEval:
    def test_running_example(self, capsys):
        code, out, _ = run_main(
            ["eval", "--arity", "3", "--expr", r"t1 /\ t2 + t1 \/ (2*t3)",
             "--at", "1,2,3"],
            capsys,
        )
        assert code == 0
        report = json.loads(out)
        assert report["command"] == "eval"
        assert report["value"] == "7"

    def test_rational_output(self, capsys):
        code, out, _ = run_main(
            ["eval", "--arity", "1", "--expr", "1/3*t1", "--at", "1/2"], capsys
        )
        assert code == 0
        assert json.loads(out)["value"] == "1/6"

    def test_table_format(self, capsys):
        code, out, _ = run_main(
            ["eval", "--arity", "1", "--expr", "t1", "--at", "5",
             "--format", "table"],
            capsys,
        )
        assert code == 0
        assert "value" in out and "5" in out


class TestEquiv:
    def test_distribution_identity(self, capsys):
        code, out, _ = run_main(
            ["equiv", "--space", "fvl:3",
             "--expr", r"t1 + (t2 \/ t3)",
             "--expr", r"(t1 + t2) \/ (t1 + t3)"],
            capsys,
        )
        assert code == 0
        report = json.loads(out)
        assert report["equal"] is True
        assert report["witness"] is None

    def test_unequal_pair_comes_with_witness(self, capsys):
        code, out, _ = run_main(
            ["equiv", "--arity", "2", "--expr", r"t1 \/ t2", "--expr", r"t1 /\ t2"],
            capsys,
        )
        assert code == 0
        report = json.loads(out)
        assert report["equal"] is False
        assert report["witness"] is not None

    def test_needs_two_expressions(self, capsys):
        code, _, err = run_main(
            ["equiv", "--arity", "2", "--expr", "t1"], capsys
        )
        assert code == 1
        assert "two" in err


class TestNorm:
    def test_contract_example(self, capsys):
        code, out, _ = run_main(
            ["norm", "--space", "fvl:2", "--expr", r"t1 \/ t2"], capsys
        )
        assert code == 0
        report = json.loads(out)
        cert = report["certificate"]
        assert cert["lower"] == "2"
        assert cert["upper"] == "2"
        assert cert["exact"] is True
        assert sorted(cert["witness"]) == [["0", "1"], ["1", "0"]]
        assert cert["method"] == "exact_match"
        assert report["space"] == "fvl:2"

    def test_euclidean_bounds(self, capsys):
        code, out, _ = run_main(
            ["norm", "--space", "seq:2:2", "--expr", "t1 + t2",
             "--restarts", "4", "--seed", "1"],
            capsys,
        )
        assert code == 0
        cert = json.loads(out)["certificate"]
        assert cert["method"] == "strong_unit_lambda_n"
        assert cert["lambda"] is not None

    def test_timing_only_when_asked(self, capsys):
        code, out, _ = run_main(
            ["norm", "--space", "fvl:1", "--expr", "t1"], capsys
        )
        assert code == 0 and "timing" not in json.loads(out)
        code, out, _ = run_main(
            ["norm", "--space", "fvl:1", "--expr", "t1", "--timing"], capsys
        )
        assert code == 0 and "timing" in json.loads(out)


class TestExtend:
    def test_join_of_generators(self, capsys):
        code, out, _ = run_main(
            ["extend", "--space", "fvl:2", "--target", "seq:inf:2",
             "--expr", r"t1 \/ t2",
             "--vector", "1,0", "--vector", "0,1"],
            capsys,
        )
        assert code == 0
        report = json.loads(out)
        assert report["image"] == ["1", "1"]

    def test_image_count_must_match(self, capsys):
        code, _, err = run_main(
            ["extend", "--space", "fvl:2", "--target", "seq:1:2",
             "--expr", "t1", "--vector", "1,0"],
            capsys,
        )
        assert code == 1


class TestAudit:
    def test_passing_audit(self, capsys):
        code, out, _ = run_main(
            ["audit", "--space", "fvl:2", "--expr", r"t1 \/ t2"], capsys
        )
        assert code == 0
        report = json.loads(out)
        assert report["audit"]["passed"] is True
        assert report["certificate"]["lower"] == "2"


class TestExitCodes:
    def test_syntax_error_is_usage(self, capsys):
        code, _, err = run_main(
            ["eval", "--arity", "1", "--expr", "t1 +", "--at", "1"], capsys
        )
        assert code == 1
        assert "error" in err

    def test_bad_space_is_usage(self, capsys):
        code, _, _ = run_main(["norm", "--space", "seq:0:2", "--expr", "t1"], capsys)
        assert code == 1

    def test_arity_violation_is_usage(self, capsys):
        code, _, _ = run_main(["norm", "--space", "fvl:1", "--expr", "t2"], capsys)
        assert code == 1

    def test_missing_subcommand_is_usage(self, capsys):
        assert cli.main([]) == 1
        capsys.readouterr()

    def test_failing_selftest_exits_three(self, capsys, monkeypatch):
        from latfree.selftest import CriterionResult, SelftestReport

        fake = SelftestReport(
            seed=0,
            threads=1,
            results=(
                CriterionResult(
                    index=1, name="probe", passed=False, details="boom", elapsed=0.0
                ),
            ),
        )
        monkeypatch.setattr(cli, "run_selftest", lambda seed, threads: fake)
        code, out, _ = run_main(["selftest", "--format", "json"], capsys)
        assert code == 3
        assert json.loads(out)["passed"] is False

    def test_passing_selftest_exits_zero(self, capsys, monkeypatch):
        from latfree.selftest import CriterionResult, SelftestReport

        fake = SelftestReport(
            seed=0,
            threads=1,
            results=(
                CriterionResult(
                    index=1, name="probe", passed=True, details="ok", elapsed=0.0
                ),
            ),
        )
        monkeypatch.setattr(cli, "run_selftest", lambda seed, threads: fake)
        code, out, _ = run_main(["selftest"], capsys)
        assert code == 0
        assert "PASS" in out


class TestSeedHandling:
    def test_env_fallback(self, capsys, monkeypatch):
        monkeypatch.setenv("LATFREE_SEED", "99")
        code, out, _ = run_main(
            ["eval", "--arity", "1", "--expr", "t1", "--at", "1"], capsys
        )
        assert code == 0
        assert json.loads(out)["seed"] == 99

    def test_flag_beats_env(self, capsys, monkeypatch):
        monkeypatch.setenv("LATFREE_SEED", "99")
        code, out, _ = run_main(
            ["eval", "--arity", "1", "--expr", "t1", "--at", "1", "--seed", "3"],
            capsys,
        )
        assert code == 0
        assert json.loads(out)["seed"] == 3

    def test_bad_env_is_usage_error(self, capsys, monkeypatch):
        monkeypatch.setenv("LATFREE_SEED", "not-a-number")
        code, _, err = run_main(
            ["eval", "--arity", "1", "--expr", "t1", "--at", "1"], capsys
        )
        assert code == 1


class TestOutFile(object):
    def test_report_written_to_file(self, capsys, tmp_path):
        out_path = tmp_path / "report.json"
        code, out, _ = run_main(
            ["norm", "--space", "fvl:1", "--expr", "t1", "--out", str(out_path)],
            capsys,
        )
        assert code == 0
        assert out == ""
        assert json.loads(out_path.read_text())["certificate"]["lower"] == "1"


class TestSubprocess:
    def _run(self, args):
        return subprocess.run(
            [sys.executable, "-m", "latfree.cli", *args],
            capture_output=True,
            text=True,
            timeout=300,
        )

    def test_byte_identical_reports(self):
        args = ["norm", "--space", "seq:2:2", "--expr", r"t1 \/ 2*t2",
                "--restarts", "4", "--seed", "11", "--threads", "2"]
        first = self._run(args)
        second = self._run(args)
        assert first.returncode == 0 and second.returncode == 0
        assert first.stdout == second.stdout

    def test_entry_point_help(self):
        res = self._run(["--help"])
        assert res.returncode == 0
        assert "eval" in res.stdout and "selftest" in res.stdout
