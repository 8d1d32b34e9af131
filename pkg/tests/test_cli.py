"""Command line driver, exercised through click's test runner."""

import pytest
import yaml
from click.testing import CliRunner

from blockdna.cli import main
from blockdna.config import OUTPUT_DIR_ENV
from blockdna.partition import PartitionManifest

from conftest import FWD, REV

TEXT = ("It was the best of times, it was the worst of times, it was the age of wisdom, "
        "it was the age of foolishness, it was the epoch of belief. ") * 9


@pytest.fixture
def runner(monkeypatch, tmp_path):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "out"))
    return CliRunner()


@pytest.fixture
def encoded_files(runner, tmp_path):
    source = tmp_path / "story.txt"
    source.write_text(TEXT)
    manifest = tmp_path / "story.manifest.yaml"
    pool = tmp_path / "story.pool.tsv"
    result = runner.invoke(main, ["encode", str(source), "--fwd", FWD, "--rev", REV,
                                  "--tree-seed", "11", "--randomizer-seed", "22",
                                  "--name", "story", "-m", str(manifest), "-o", str(pool)])
    assert result.exit_code == 0, result.output
    return source, manifest, pool


def test_encode(encoded_files, runner):
    source, manifest, pool = encoded_files
    loaded = PartitionManifest.load(manifest)
    assert loaded.block_count == 5
    assert loaded.data_length == len(TEXT)
    assert len(pool.read_text().splitlines()) == 75


def test_sequence_and_decode(encoded_files, runner, tmp_path):
    source, manifest, pool = encoded_files
    reads = tmp_path / "reads.txt"
    result = runner.invoke(main, ["sequence", str(pool), "-n", "1500", "--seed", "4",
                                  "-o", str(reads)])
    assert result.exit_code == 0, result.output
    assert "1500 reads" in result.output
    result = runner.invoke(main, ["decode", str(reads), "--manifest", str(manifest), "--main-primer",
                                  "-o", str(tmp_path / "decoded")])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "decoded" / "story.bin").read_text() == TEXT


def test_decode_without_reads(encoded_files, runner, tmp_path, caplog):
    _, manifest, _ = encoded_files
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    result = runner.invoke(main, ["decode", str(empty), "--manifest", str(manifest)])
    assert result.exit_code == 1
    assert "no reads" in result.output
    assert any(r.levelname == "ERROR" and r.getMessage().startswith("decode failed")
               for r in caplog.records)


def test_two_stage_and_block_decode(encoded_files, runner, tmp_path):
    _, manifest, pool = encoded_files
    product = tmp_path / "block2.pool.tsv"
    result = runner.invoke(main, ["two-stage", str(pool), "--manifest", str(manifest),
                                  "--block", "2", "-o", str(product)])
    assert result.exit_code == 0, result.output
    reads = tmp_path / "block2.reads.txt"
    runner.invoke(main, ["sequence", str(product), "-n", "600", "-o", str(reads)])
    result = runner.invoke(main, ["decode", str(reads), "--manifest", str(manifest), "--block", "2",
                                  "--max-candidates", "3"])
    assert result.exit_code == 0, result.output
    out = tmp_path / "out"
    assert (out / "block2.bin").read_bytes() == TEXT.encode()[512:768]
    report = yaml.safe_load((out / "block2.report.yaml").read_text())
    assert report["versions"] == 1


def test_patch_mix_and_decode(encoded_files, runner, tmp_path):
    _, manifest, pool = encoded_files
    patches = tmp_path / "patches.yaml"
    patches.write_text(yaml.safe_dump({"patches": [
        {"block_no": 1, "del_start": 0, "del_len": 5, "ins_pos": 0, "ins_text": "HOWDY"}]}))
    updated = tmp_path / "story.v1.manifest.yaml"
    update_pool = tmp_path / "update.tsv"
    result = runner.invoke(main, ["patch", str(manifest), str(patches), "-m", str(updated),
                                  "-o", str(update_pool)])
    assert result.exit_code == 0, result.output
    assert "15 update strands" in result.output

    mixed = tmp_path / "mixed.tsv"
    result = runner.invoke(main, ["mix", str(pool), str(update_pool), "--manifest", str(updated),
                                  "--seed", "2", "-o", str(mixed)])
    assert result.exit_code == 0, result.output
    assert mixed.exists()

    reads = tmp_path / "mixed.reads.txt"
    runner.invoke(main, ["sequence", str(mixed), "-n", "1500", "--seed", "6", "-o", str(reads)])
    result = runner.invoke(main, ["decode", str(reads), "--manifest", str(updated), "--main-primer",
                                  "-o", str(tmp_path / "decoded")])
    assert result.exit_code == 0, result.output
    decoded = (tmp_path / "decoded" / "story.bin").read_bytes()
    assert decoded[256:261] == b"HOWDY"
    assert decoded[261:] == TEXT.encode()[261:]


def test_multiplex(encoded_files, runner, tmp_path):
    _, _, pool = encoded_files
    product = tmp_path / "multiplex.tsv"
    result = runner.invoke(main, ["multiplex", str(pool), "--pair", FWD, REV, "-o", str(product)])
    assert result.exit_code == 0, result.output
    assert product.exists()
    result = runner.invoke(main, ["multiplex", str(pool), "-o", str(product)])
    assert result.exit_code != 0


def test_stats(encoded_files, runner, tmp_path):
    _, manifest, pool = encoded_files
    reads = tmp_path / "reads.txt"
    runner.invoke(main, ["sequence", str(pool), "-n", "1500", "-o", str(reads)])
    result = runner.invoke(main, ["stats", str(reads), "--manifest", str(manifest),
                                  "--pool", str(pool)])
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0] == "block_no,version,read_count"
    assert sum(int(line.split(",")[2]) for line in lines[1:6]) == 1500
    assert "blockdna_pool_unique_sequences" in result.output


def test_analyze(runner):
    result = runner.invoke(main, ["analyze", "--step", "55"])
    assert result.exit_code == 0
    assert result.output.splitlines() == [
        "index_len,capacity_bytes,density_bits_per_base",
        "0,27.5,1.466667",
        f"55,{float(4 ** 55 * 110 // 8):.6g},0.733333",
        f"110,{float(2 ** 217):.6g},0.006667",
    ]
    result = runner.invoke(main, ["analyze", "--strand-len", "30"])
    assert result.exit_code == 1


def test_bad_primer_is_reported(runner, tmp_path):
    source = tmp_path / "x.bin"
    source.write_bytes(b"x" * 10)
    result = runner.invoke(main, ["encode", str(source), "--fwd", "ACGT", "--rev", REV])
    assert result.exit_code == 1
    assert "Error" in result.output


def test_run(runner, tmp_path, monkeypatch):
    monkeypatch.delenv(OUTPUT_DIR_ENV)
    (tmp_path / "story.txt").write_text(TEXT)
    config = {
        "name": "story",
        "input": "story.txt",
        "output_dir": "run",
        "fwd_primer": FWD,
        "rev_primer": REV,
        "tree": {"seed": 11},
        "randomizer_seed": 22,
        "target_block": 2,
        "patches": [{"block_no": 2, "del_start": 0, "del_len": 5, "ins_pos": 0, "ins_text": "HOWDY"}],
        "reads": 400,
        "max_candidates": 3,
    }
    path = tmp_path / "experiment.yaml"
    path.write_text(yaml.safe_dump(config))
    result = runner.invoke(main, ["run", str(path)])
    assert result.exit_code == 0, result.output
    summary = yaml.safe_load((tmp_path / "run" / "result.yaml").read_text())
    assert summary["matches_input"] is True
    assert summary["decoded_versions"] == 2
    assert (tmp_path / "run" / "block2.bin").read_bytes().startswith(b"HOWDY")
