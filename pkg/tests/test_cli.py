import io
import json

import pytest

from hgmtrace import cli
from hgmtrace.cli import (
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_USAGE,
    Ambiguous,
    RunConfig,
    cmd_bench,
    cmd_compute,
    cmd_verify,
    lift_weight_one,
    main,
)

QUARTIC_ARGS = ["--alpha", "1/4,1/2,1/2,3/4", "--beta", "1/3,1/3,2/3,2/3", "--z", "1/5"]
ELLIPTIC_ARGS = ["--alpha", "1/2,1/2", "--beta", "0,0", "--z", "2"]


class TestLift:
    def test_unique_lift(self):
        assert lift_weight_one(59, 67, 4) == -8

    def test_zero(self):
        assert lift_weight_one(0, 101, 2) == 0

    def test_ambiguous_below_threshold(self):
        result = lift_weight_one(1, 11, 4)
        assert isinstance(result, Ambiguous)
        assert result.candidates == (-10, 1, 12)

    def test_lift_is_congruent(self):
        for h, p, r in [(59, 67, 4), (3, 29, 2), (100, 101, 2)]:
            a = lift_weight_one(h, p, r)
            assert a % p == h % p
            assert a * a <= r * r * p


class TestCompute:
    def test_csv_contains_reference_line(self, capsys):
        assert main(["compute", *QUARTIC_ARGS, "--limit", "100", "--lift"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "p,h,a"
        assert "67,59,-8" in lines

    def test_csv_and_jsonl_encode_the_same_records(self, capsys):
        assert main(["compute", *QUARTIC_ARGS, "--limit", "300", "--lift"]) == EXIT_OK
        csv_lines = capsys.readouterr().out.splitlines()[1:]
        assert main(["compute", *QUARTIC_ARGS, "--limit", "300", "--lift", "--format", "jsonl"]) == EXIT_OK
        json_lines = capsys.readouterr().out.splitlines()
        from_csv = []
        for line in csv_lines:
            p, h, a = line.split(",")
            from_csv.append((int(p), int(h), int(a) if a else None))
        from_json = [(d["p"], d["h"], d["a"]) for d in map(json.loads, json_lines)]
        assert from_csv == from_json

    def test_output_strictly_increasing(self, capsys):
        assert main(["compute", *ELLIPTIC_ARGS, "--limit", "500"]) == EXIT_OK
        ps = [int(line.split(",")[0]) for line in capsys.readouterr().out.splitlines()[1:]]
        assert ps == sorted(set(ps))

    def test_empty_stream_when_all_small_primes_bad(self, capsys, tmp_path):
        # 2 and 3 are wild for the quartic datum
        out = tmp_path / "records.csv"
        assert main(["compute", *QUARTIC_ARGS, "--limit", "3", "--output", str(out)]) == EXIT_OK
        assert out.read_text() == "p,h\n"

    def test_show_skipped_jsonl(self, capsys):
        assert main(["compute", *QUARTIC_ARGS, "--limit", "10", "--format", "jsonl", "--show-skipped"]) == EXIT_OK
        rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
        assert {"p": 2, "skipped": "wild"} in rows
        assert {"p": 5, "skipped": "tame"} in rows

    def test_cyclotomic_input_matches_fractions(self, capsys):
        assert main(["compute", *QUARTIC_ARGS, "--limit", "60"]) == EXIT_OK
        direct = capsys.readouterr().out
        assert main(["compute", "--cyclo-a", "4,2,2", "--cyclo-b", "3,3", "--z", "1/5", "--limit", "60"]) == EXIT_OK
        assert capsys.readouterr().out == direct

    def test_oracle_subcommand_agrees(self, capsys):
        assert main(["compute", *ELLIPTIC_ARGS, "--limit", "80"]) == EXIT_OK
        fast = capsys.readouterr().out
        assert main(["oracle", *ELLIPTIC_ARGS, "--limit", "80"]) == EXIT_OK
        assert capsys.readouterr().out == fast

    def test_record_stream_api(self):
        config = RunConfig(z="2", limit=60, alpha=("1/2", "1/2"), beta=("0", "0"))
        records = list(cmd_compute(config))
        assert [r.p for r in records] == [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]


class TestUsageErrors:
    def test_missing_z_exits_one(self):
        assert main(["compute", "--alpha", "1/2,1/2", "--beta", "0,0", "--limit", "10"]) == EXIT_USAGE

    def test_both_input_styles_exit_one(self):
        args = ["compute", *QUARTIC_ARGS, "--cyclo-a", "4", "--cyclo-b", "3", "--limit", "10"]
        assert main(args) == EXIT_USAGE

    def test_lift_requires_weight_one(self):
        # alpha=(1/2), beta=(0) has weight 0
        assert main(["compute", "--alpha", "1/2", "--beta", "0", "--z", "2", "--limit", "10", "--lift"]) == EXIT_USAGE

    def test_bad_limit(self):
        assert main(["compute", *QUARTIC_ARGS, "--limit", "2"]) == EXIT_USAGE


class TestVerify:
    def test_clean_run_exits_zero(self, capsys):
        assert main(["verify", *ELLIPTIC_ARGS, "--limit", "300"]) == EXIT_OK
        assert "verified" in capsys.readouterr().out

    def test_quartic_datum_to_4096(self, capsys):
        assert main(["verify", *QUARTIC_ARGS, "--limit", "4096"]) == EXIT_OK
        assert "verified" in capsys.readouterr().out

    def test_corrupted_sigma_exits_two_and_names_prime(self, monkeypatch):
        from hgmtrace import amortized

        real = amortized.sigma_value

        def corrupted(spec, datum, i):
            value = real(spec, datum, i)
            return -value if i == 2 else value

        monkeypatch.setattr(amortized, "sigma_value", corrupted)
        config = RunConfig(
            z="1/5",
            limit=200,
            alpha=("1/4", "1/2", "1/2", "3/4"),
            beta=("1/3", "1/3", "2/3", "2/3"),
        )
        stream = io.StringIO()
        assert cmd_verify(config, stream) == EXIT_MISMATCH
        assert "mismatch at p=" in stream.getvalue()


class TestBench:
    def test_single_limit_single_row(self):
        config = RunConfig(z="2", limit=64, alpha=("1/2", "1/2"), beta=("0", "0"))
        stream = io.StringIO()
        rows = cmd_bench(config, [64], oracle_cutoff=128, runs=1, stream=stream)
        lines = stream.getvalue().splitlines()
        assert lines[0] == "X,amortized_s,oracle_s"
        assert len(lines) == 2 and len(rows) == 1
        assert "oracle_s" in rows[0]

    def test_zero_cutoff_omits_oracle_column(self):
        config = RunConfig(z="2", limit=64, alpha=("1/2", "1/2"), beta=("0", "0"))
        stream = io.StringIO()
        rows = cmd_bench(config, [64, 128], oracle_cutoff=0, runs=1, stream=stream)
        lines = stream.getvalue().splitlines()
        assert lines[0] == "X,amortized_s"
        assert len(lines) == 3
        assert all("oracle_s" not in row for row in rows)

    def test_cli_entry(self, capsys):
        args = ["bench", *ELLIPTIC_ARGS, "--limits", "64", "--oracle-cutoff", "64", "--runs", "1"]
        assert main(args) == EXIT_OK
        assert capsys.readouterr().out.startswith("X,amortized_s,oracle_s")
