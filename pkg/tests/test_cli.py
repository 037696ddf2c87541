"""CLI surface: subcommands, formats, exit codes, resume byte-identity."""
import json
import os
import subprocess
import sys

import pytest

from superabundant import cli


def run_cli(args, **kw):
    return subprocess.run([sys.executable, "-m", "superabundant.cli"] + args,
                          capture_output=True, text=True, **kw)


class TestBasicCommands:
    def test_generate_sa_ten_lines_ending_120(self):
        r = run_cli(["generate-sa", "--count", "10"])
        assert r.returncode == 0
        lines = r.stdout.strip().split("\n")
        assert len(lines) == 10
        assert lines[-1] == "120"

    def test_generate_ca(self):
        r = run_cli(["generate-ca", "--eps", "1/10"])
        assert r.returncode == 0
        assert r.stdout.strip() == "2^2*3*5"
        r = run_cli(["generate-ca", "--eps", "1", "--format", "json"])
        obj = json.loads(r.stdout)
        assert obj["factorization"] == "1"
        assert obj["ties"] == []

    def test_check_robin_12(self):
        r = run_cli(["check-robin", "12"])
        assert r.returncode == 0
        obj = json.loads(r.stdout)
        assert obj["status"] == "exempt"
        assert obj["sign"] == "greater"
        assert obj["gronwall_equality_case"] is True

    def test_check_robin_factorization_input(self):
        r = run_cli(["check-robin", "2^5*3^2*5*7"])
        obj = json.loads(r.stdout)
        assert obj["status"] == "satisfied"
        assert obj["sign"] == "less"

    def test_violators(self):
        r = run_cli(["violators", "--bound", "6000"])
        obj = json.loads(r.stdout)
        assert max(obj["violators"]) == 5040
        assert 12 in obj["violators"]

    def test_stats_anchor_horizon(self):
        r = run_cli(["stats", "--count", "20"])
        obj = json.loads(r.stdout)
        assert obj["count_x"] == 1
        assert obj["count_xprime"] == 1
        assert obj["count_xdoubleprime"] == 1
        assert obj["inclusion_violations"] == []

    def test_filter_xa_first_member(self, tmp_path):
        out = tmp_path / "xa.csv"
        r = run_cli(["filter", "--set", "xa", "--count", "30",
                     "--out", str(out)])
        assert r.returncode == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0].startswith("index_in_S,")
        assert lines[1].split(",")[1] == "2^5*3^2*5*7"

    def test_verify_round_trip(self, tmp_path):
        table = tmp_path / "sa.txt"
        r = run_cli(["generate-sa", "--count", "40", "--out", str(table)])
        assert r.returncode == 0
        r = run_cli(["verify", "--against", str(table), "--offset", "0"])
        obj = json.loads(r.stdout)
        assert obj["clean"] is True
        assert obj["common_length"] == 40

    def test_verify_offset(self, tmp_path):
        table = tmp_path / "sa.txt"
        # a list that omits 1 and 2 (offset 2)
        r = run_cli(["generate-sa", "--count", "30", "--out", str(table)])
        lines = table.read_text().strip().split("\n")[2:]
        table.write_text("\n".join(lines) + "\n")
        r = run_cli(["verify", "--against", str(table), "--offset", "2"])
        obj = json.loads(r.stdout)
        assert obj["clean"] is True
        assert obj["common_length"] == 28


class TestExitCodes:
    def test_usage_error_is_1_with_json_diag(self):
        r = run_cli(["generate-sa", "--count", "0"])
        assert r.returncode == 1
        err = json.loads(r.stderr)
        assert err["error"]["type"] == "usage"

    def test_unknown_flag_is_1(self):
        r = run_cli(["generate-sa", "--nope"])
        assert r.returncode == 1
        assert json.loads(r.stderr)["error"]["type"] == "usage"

    def test_bad_factorization_is_1(self):
        r = run_cli(["check-robin", "3*2"])
        assert r.returncode == 1

    def test_domain_error_is_1(self):
        r = run_cli(["check-robin", "2"])
        assert r.returncode == 1

    def test_io_error_is_3(self):
        r = run_cli(["generate-sa", "--count", "5",
                     "--out", "/dev/null/not-a-dir/x"])
        assert r.returncode == 3
        assert json.loads(r.stderr)["error"]["type"] == "io"

    def test_undecided_is_2(self, monkeypatch, capsys):
        from superabundant.intervals import UndecidedComparisonError

        def boom(*a, **k):
            raise UndecidedComparisonError("injected", bits=4096)

        monkeypatch.setattr(cli, "robin_check", boom)
        rc = cli.main(["check-robin", "12"])
        assert rc == 2
        err = json.loads(capsys.readouterr().err)
        assert err["error"]["type"] == "undecided-precision"
        assert err["error"]["detail"]["precision_bits"] == 4096

    def test_bad_checkpoint_is_1(self, tmp_path):
        p = tmp_path / "ck.json"
        p.write_text("{}")
        r = run_cli(["resume", "--checkpoint", str(p)])
        assert r.returncode == 1


class TestConfigPrecedence:
    def test_env_precision(self):
        env = dict(os.environ, SUPERAB_PRECISION_START="256")
        r = run_cli(["stats", "--count", "5"], env=env)
        assert json.loads(r.stdout)["precision_start_bits"] == 256

    def test_flag_beats_env(self):
        env = dict(os.environ, SUPERAB_PRECISION_START="256")
        r = run_cli(["stats", "--count", "5", "--precision-start", "192"],
                    env=env)
        assert json.loads(r.stdout)["precision_start_bits"] == 192

    def test_env_format(self, tmp_path):
        env = dict(os.environ, SUPERAB_FORMAT="jsonl")
        out = tmp_path / "x.jsonl"
        run_cli(["generate-sa", "--count", "3", "--out", str(out)], env=env)
        lines = out.read_text().strip().split("\n")
        assert json.loads(lines[0])["factorization"] == "1"


class TestResume:
    @pytest.mark.parametrize("cut", [17, 83, 149])
    def test_generate_sa_byte_identical(self, tmp_path, cut):
        full = tmp_path / "full.csv"
        part = tmp_path / "part.csv"
        ck = tmp_path / "ck.json"
        run_cli(["generate-sa", "--count", "150", "--format", "csv",
                 "--out", str(full)])
        run_cli(["generate-sa", "--count", "150", "--format", "csv",
                 "--out", str(part), "--checkpoint", str(ck),
                 "--stop-after", str(cut)])
        r = run_cli(["resume", "--checkpoint", str(ck)])
        assert r.returncode == 0
        assert part.read_bytes() == full.read_bytes()

    def test_filter_resume_byte_identical(self, tmp_path):
        full = tmp_path / "full.csv"
        part = tmp_path / "part.csv"
        ck = tmp_path / "ck.json"
        run_cli(["filter", "--set", "xprime", "--count", "400",
                 "--out", str(full)])
        run_cli(["filter", "--set", "xprime", "--count", "400",
                 "--out", str(part), "--checkpoint", str(ck),
                 "--stop-after", "123"])
        run_cli(["resume", "--checkpoint", str(ck)])
        assert part.read_bytes() == full.read_bytes()

    def test_stats_resume_same_json(self, tmp_path):
        full = tmp_path / "full.json"
        part = tmp_path / "part.json"
        ck = tmp_path / "ck.json"
        run_cli(["stats", "--count", "120", "--out", str(full)])
        run_cli(["stats", "--count", "120", "--out", str(part),
                 "--checkpoint", str(ck), "--stop-after", "60"])
        run_cli(["resume", "--checkpoint", str(ck)])
        assert part.read_bytes() == full.read_bytes()
