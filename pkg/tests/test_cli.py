"""Command line driver: json-lines output, determinism, files, exit codes."""

import json

import pytest

from subvertlab import UniversalityViolation
from subvertlab import cli


def run_cli(capsys, argv):
    rc = cli.main(argv)
    out = capsys.readouterr().out
    return rc, [json.loads(line) for line in out.splitlines() if line.strip()], out


STEGO_OPTS = ["--ml", "4", "--s", "16", "--outl", "24", "--stego-kappa", "16"]


def test_embed_writes_a_recoverable_session_file(capsys, tmp_path):
    session = str(tmp_path / "session.jsonl")
    rc, lines, _ = run_cli(
        capsys,
        ["stego", "embed", "--channel", "uniform", "--doc-bits", "16", *STEGO_OPTS,
         "--message", "a", "--seed", "3", "--out", session],
    )
    assert rc == 0
    assert lines[0]["kind"] == "stego-session" and lines[0]["message_hex"] == "a0"
    assert sum(1 for l in lines if "doc_hex" in l) == 24
    assert lines[-1] == {"kind": "decode-check", "decoded_hex": "a0", "ok": True}

    # the payload carries no timestamps; provenance lives in the sidecar
    assert not any("created" in k for l in lines for k in l)
    meta = json.loads((tmp_path / "session.jsonl.meta.json").read_text())
    assert meta["schema"] == "subvertlab/1"
    assert "created_utc" in meta and isinstance(meta["argv"], list)

    rc, lines, _ = run_cli(capsys, ["stego", "extract", "--file", session])
    assert rc == 0 and lines == [{"kind": "stego-extract", "extracted_hex": "a0", "ok": True}]
    # a wrong key fails to decode instead of mis-decoding silently
    rc, lines, _ = run_cli(capsys, ["stego", "extract", "--file", session, "--key", "0000"])
    assert rc == 0 and lines[0]["ok"] is False


def test_subverted_session_file_roundtrip(capsys, tmp_path):
    session = str(tmp_path / "asa.jsonl")
    rc, lines, _ = run_cli(capsys, ["asa", "run", *STEGO_OPTS, "--seed", "2", "--out", session])
    assert rc == 0
    assert lines[0]["kind"] == "asa-session"
    assert lines[-1]["ok"] is True
    rc, lines, _ = run_cli(capsys, ["asa", "extract", "--file", session])
    assert rc == 0 and lines[0]["ok"] is True


def test_same_seed_same_bytes_any_job_count(capsys):
    base = ["game", "cpa", "--r", "2", "--trials", "60", "--seed", "4"]
    _, _, first = run_cli(capsys, base)
    _, _, again = run_cli(capsys, base)
    _, _, threaded = run_cli(capsys, base + ["--jobs", "4"])
    assert first == again == threaded
    _, _, other = run_cli(capsys, ["game", "cpa", "--r", "2", "--trials", "60", "--seed", "5"])
    assert other != first


def test_seed_falls_back_to_the_environment(capsys, monkeypatch):
    _, _, pinned = run_cli(capsys, ["game", "cpa", "--trials", "30", "--seed", "9"])
    monkeypatch.setenv(cli.ENV_SEED, "9")
    _, _, from_env = run_cli(capsys, ["game", "cpa", "--trials", "30"])
    assert from_env == pinned
    monkeypatch.setenv(cli.ENV_SEED, "ninety")
    rc = cli.main(["game", "cpa", "--trials", "30"])
    assert rc == 2
    capsys.readouterr()


def test_exit_codes(capsys, monkeypatch):
    # parameter rejection
    assert cli.main(["stego", "embed", "--ml", "7", "--message", "a"]) == 2
    assert "error:" in capsys.readouterr().err
    # missing input file
    assert cli.main(["stego", "extract", "--file", "/nonexistent/session.jsonl"]) == 2
    capsys.readouterr()
    # invariant violations get their own exit code
    def blow_up(args):
        raise UniversalityViolation("touched a forbidden host field")

    monkeypatch.setattr(cli, "cmd_lb_phi", blow_up)
    assert cli.main(["lowerbound", "phi", "--ml", "8", "--outl", "1", "--query", "2"]) == 3
    assert "invariant violation" in capsys.readouterr().err


def test_counting_bound_command(capsys):
    rc, lines, _ = run_cli(
        capsys, ["lowerbound", "phi", "--ml", "64", "--outl", "1", "--query", "4"]
    )
    assert rc == 0
    assert lines[0]["kind"] == "phi"
    assert lines[0]["log2_phi"] == -62.0 and lines[0]["trivial"] is False


def test_query_count_command(capsys):
    rc, lines, _ = run_cli(capsys, ["asa", "queries", *STEGO_OPTS, "--trials", "60", "--seed", "1"])
    assert rc == 0
    assert lines[0]["kind"] == "query-count"
    assert abs(lines[0]["mean"] - 2.0) < 0.6


def test_exact_entropy_command(capsys):
    rc, lines, _ = run_cli(
        capsys,
        ["channel", "entropy", "--channel", "uniform", "--doc-bits", "8", "--mode", "exact"],
    )
    assert rc == 0
    assert lines[0]["bits"] == 8.0 and lines[0]["method"] == "exact"


def test_merge_pools_files_and_writes_csv(capsys, tmp_path):
    paths = []
    for seed in ("1", "2"):
        path = str(tmp_path / f"cpa-{seed}.jsonl")
        rc, _, _ = run_cli(
            capsys,
            ["game", "cpa", "--r", "2", "--trials", "50", "--seed", seed, "--out", path],
        )
        assert rc == 0
        paths.append(path)

    csv_path = str(tmp_path / "summary.csv")
    rc, lines, _ = run_cli(capsys, ["report", "merge", *paths, "--csv", csv_path])
    assert rc == 0
    assert len(lines) == 1
    merged = lines[0]
    assert merged["trials"] == 100
    assert merged["config"]["merged_from_seeds"] == [1, 2]

    rows = (tmp_path / "summary.csv").read_text().splitlines()
    assert rows[0].startswith("game,trials,success_count,p_hat")
    assert len(rows) == 2 and rows[1].startswith("cpa-dist,100,")
