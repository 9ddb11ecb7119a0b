"""Command-line frontend: subcommands, output shape, exit-code discipline."""

from __future__ import annotations

import json

import pytest

from sha2lab import (
    CollisionPair,
    DifferentialPath,
    MessageBlock,
    Variant,
    ZERO_VECTOR,
    builtin_pair_sha256,
    builtin_path_sha256_22,
    decode_report,
    encode_pair,
    encode_path,
)
from sha2lab.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestVerify:
    def test_builtin_sha256(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "builtin-sha256")
        assert code == 0
        assert "verdict: COLLISION" in out
        assert "steps: 22" in out

    def test_builtin_sha512(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "builtin-sha512")
        assert code == 0
        assert "verdict: COLLISION" in out

    def test_full_rounds_do_not_collide(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "builtin-sha256", "--steps", "64")
        assert code == 1
        assert "verdict: NO-COLLISION" in out

    def test_pair_file(self, capsys, tmp_path):
        path = tmp_path / "pair.json"
        path.write_text(encode_pair(builtin_pair_sha256()))
        code, out, _ = run_cli(capsys, "verify", str(path))
        assert code == 0 and "COLLISION" in out

    def test_identical_blocks_marked_trivial(self, capsys, tmp_path):
        block = MessageBlock((7,) * 16)
        pair = CollisionPair(Variant.SHA256, 22, block, block)
        path = tmp_path / "pair.json"
        path.write_text(encode_pair(pair))
        code, out, _ = run_cli(capsys, "verify", str(path))
        assert code == 0
        assert "IDENTICAL-MESSAGES" in out

    def test_missing_file(self, capsys):
        code, _, err = run_cli(capsys, "verify", "/no/such/file.json")
        assert code == 2
        assert "error:" in err

    def test_malformed_file(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{}")
        code, _, err = run_cli(capsys, "verify", str(path))
        assert code == 2
        assert "error:" in err

    def test_bad_steps(self, capsys):
        code, _, err = run_cli(capsys, "verify", "builtin-sha256", "--steps", "99")
        assert code == 2

    def test_iv_override(self, capsys, tmp_path):
        # a non-standard IV breaks the collision: exit flips to 1
        ivfile = tmp_path / "iv.txt"
        ivfile.write_text(" ".join(["00000001"] * 8))
        code, out, _ = run_cli(
            capsys, "verify", "builtin-sha256", "--iv", str(ivfile)
        )
        assert code == 1
        assert "NO-COLLISION" in out

    def test_output_byte_stable(self, capsys):
        _, first, _ = run_cli(capsys, "verify", "builtin-sha256")
        _, second, _ = run_cli(capsys, "verify", "builtin-sha256")
        assert first == second


class TestTrace:
    def test_table_layout(self, capsys):
        code, out, _ = run_cli(capsys, "trace", "builtin-sha256")
        assert code == 0
        lines = out.splitlines()
        assert lines[0].split() == [
            "step", "da", "db", "dc", "dd", "de", "df", "dg", "dh",
        ]
        assert len(lines) == 23  # header + 22 steps
        row8 = lines[9].split()
        assert row8 == ["8", "00000001", "0", "0", "0", "00000001", "0", "0", "0"]

    def test_builtin_path_match(self, capsys):
        code, out, _ = run_cli(capsys, "trace", "builtin-sha256", "--path", "builtin")
        assert code == 0
        assert out.splitlines()[-1] == "path: MATCH"

    def test_edited_path_divergence(self, capsys, tmp_path):
        path = builtin_path_sha256_22()
        rows = list(path.steps)
        rows[8] = rows[8]._replace(da=0)
        edited = DifferentialPath(Variant.SHA256, tuple(rows))
        pfile = tmp_path / "edited.json"
        pfile.write_text(encode_path(edited))
        code, out, _ = run_cli(
            capsys, "trace", "builtin-sha256", "--path", str(pfile)
        )
        assert code == 1
        last = out.splitlines()[-1]
        assert "DIVERGES at step 8" in last
        assert "register a" in last
        assert "expected 00000000" in last
        assert "actual 00000001 (+1)" in last

    def test_identical_pair_all_zero_path(self, capsys, tmp_path):
        block = MessageBlock((3,) * 16)
        pair = CollisionPair(Variant.SHA256, 22, block, block)
        pair_file = tmp_path / "pair.json"
        pair_file.write_text(encode_pair(pair))
        zero_path = DifferentialPath(Variant.SHA256, (ZERO_VECTOR,) * 22)
        path_file = tmp_path / "zero.json"
        path_file.write_text(encode_path(zero_path))
        code, out, _ = run_cli(
            capsys, "trace", str(pair_file), "--path", str(path_file)
        )
        assert code == 0
        assert out.splitlines()[-1] == "path: MATCH"

    def test_variant_mismatch_is_input_error(self, capsys):
        code, _, err = run_cli(
            capsys, "trace", "builtin-sha512", "--path", "builtin"
        )
        assert code == 2
        assert "error:" in err

    def test_byte_stable(self, capsys):
        _, first, _ = run_cli(capsys, "trace", "builtin-sha512")
        _, second, _ = run_cli(capsys, "trace", "builtin-sha512")
        assert first == second


class TestDeltas:
    def test_nonzero_rows(self, capsys):
        code, out, _ = run_cli(capsys, "deltas", "builtin-sha256")
        assert code == 0
        nonzero = []
        for line in out.splitlines():
            if line.startswith("w[") and "delta=00000000" not in line:
                nonzero.append(int(line[2:4]))
        assert nonzero == [8, 9, 10, 11, 15]

    def test_known_delta_values(self, capsys):
        _, out, _ = run_cli(capsys, "deltas", "builtin-sha256")
        assert "delta=00000001 (+1)" in out
        assert "delta=ffffffff (-1)" in out
        assert "delta=fc1e6080 (-65118080)" in out

    def test_sha512(self, capsys):
        code, out, _ = run_cli(capsys, "deltas", "builtin-sha512")
        assert code == 0
        assert "delta=0000000000000001 (+1)" in out


class TestSearch:
    def test_replay_summary_and_report(self, capsys, tmp_path):
        out_file = tmp_path / "report.json"
        code, out, _ = run_cli(
            capsys,
            "search",
            "--strategy", "replay",
            "--budget", "50",
            "--seed", "1",
            "--workers", "1",
            "--out", str(out_file),
        )
        assert code == 0
        assert "successes: 50" in out
        report = decode_report(out_file.read_text())
        assert report.trials == 50 and report.successes == 50

    def test_random_prefix_with_indices(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "search",
            "--strategy", "random-prefix",
            "--indices", "0,2-3",
            "--budget", "256",
            "--workers", "1",
        )
        assert code == 0
        assert "random-prefix(indices=0,2,3)" in out

    def test_sha512_variant(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "search",
            "--variant", "sha512",
            "--budget", "256",
            "--workers", "1",
        )
        assert code == 0
        assert "variant: sha512" in out

    def test_zero_successes_is_exit_zero(self, capsys):
        # finding no collisions is a completed measurement, not a failure
        code, out, _ = run_cli(
            capsys, "search", "--budget", "64", "--workers", "1"
        )
        assert code == 0
        assert "successes: 0" in out

    def test_with_path_histogram(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "search",
            "--budget", "128",
            "--workers", "1",
            "--with-path", "builtin",
        )
        assert code == 0
        assert "first divergence histogram:" in out

    def test_template_variant_conflict(self, capsys, tmp_path):
        pair_file = tmp_path / "pair.json"
        pair_file.write_text(encode_pair(builtin_pair_sha256()))
        code, _, err = run_cli(
            capsys,
            "search",
            "--variant", "sha512",
            "--template", str(pair_file),
            "--budget", "16",
        )
        assert code == 2
        assert "conflict" in err

    def test_fixed_deltas_strategy(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "search",
            "--strategy", "fixed-deltas",
            "--budget", "256",
            "--workers", "1",
        )
        assert code == 0
        assert "fixed-deltas(nonzero at 8,9,10,11,15)" in out

    def test_bad_indices(self, capsys):
        code, _, err = run_cli(
            capsys, "search", "--indices", "8", "--budget", "16", "--workers", "1"
        )
        assert code == 2


class TestEstimate:
    def _write_report(self, tmp_path, successes, trials):
        obj = {
            "strategy": "mock",
            "variant": "sha256",
            "steps": 22,
            "trials": trials,
            "successes": successes,
            "seed": 0,
            "workers": 1,
            "elapsed": 0.5,
            "divergence_histogram": {},
            "collisions_found": [],
            "collisions_omitted": 0,
            "note": "",
        }
        path = tmp_path / "report.json"
        path.write_text(json.dumps(obj))
        return path

    def test_minus_five(self, capsys, tmp_path):
        path = self._write_report(tmp_path, 32, 1024)
        code, out, _ = run_cli(capsys, "estimate", str(path))
        assert code == 0
        assert "log2 probability: -5.0000" in out

    def test_zero_successes(self, capsys, tmp_path):
        path = self._write_report(tmp_path, 0, 1024)
        code, out, _ = run_cli(capsys, "estimate", str(path))
        assert code == 0
        assert "no successes observed" in out
        assert "95% upper bound (log2): -8.4150" in out

    def test_missing_file(self, capsys):
        code, _, err = run_cli(capsys, "estimate", "/no/such/report.json")
        assert code == 2


class TestSelftest:
    def test_exit_zero_and_checks(self, capsys):
        code, out, _ = run_cli(capsys, "selftest")
        assert code == 0
        lines = [l for l in out.splitlines() if l]
        assert len(lines) == 7
        assert all(line.endswith(": ok") for line in lines)
        assert any("sha256 pair collides at 22 steps" in l for l in lines)
        assert any("sha512 pair collides at 22 steps" in l for l in lines)
        assert any("trace matches embedded path" in l for l in lines)
        assert any("standard vectors sha512" in l for l in lines)


class TestArgparse:
    def test_no_command(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_bad_choice(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["search", "--strategy", "quantum"])
        assert exc.value.code == 2
