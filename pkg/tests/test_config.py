"""Experiment documents."""

from pathlib import Path

import pytest

from blockdna.config import OUTPUT_DIR_ENV, ExperimentConfig, as_dict, resolve_output_dir
from blockdna.exceptions import ConfigurationError, ValidationError
from blockdna.updates import UpdatePatch

from conftest import FWD, REV

DOCUMENT = {
    "name": "alice",
    "input": "alice.txt",
    "fwd_primer": FWD,
    "rev_primer": REV,
    "tree": {"depth": 5, "seed": 3},
    "randomizer_seed": 4,
    "target_block": 7,
    "patches": [{"block_no": 7, "del_start": 0, "del_len": 5, "ins_pos": 0, "ins_text": "HOWDY"}],
    "mixing": {"protocol": "amplify-then-measure", "measurement": {"relative_error": 0.1}},
    "stage2": {"cycles": 20},
    "channel": {"p_sub": 0.01, "seed": 5},
    "decoder": {"max_workers": 2},
}


def test_from_dict(monkeypatch):
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)
    config = ExperimentConfig.from_dict(DOCUMENT, base=Path("runs"))
    assert config.input == Path("runs/alice.txt")
    assert config.output_dir == Path("runs/out")
    assert (config.tree_depth, config.tree_seed, config.randomizer_seed) == (5, 3, 4)
    assert config.patches == [(7, UpdatePatch(0, 5, 0, b"HOWDY"))]
    assert config.mixing.protocol == "amplify-then-measure"
    assert config.mixing.measurement.relative_error == 0.1
    assert config.mixing.pcr.cycles == 15
    assert config.stage1.cycles == 10
    assert config.stage2.cycles == 20
    assert config.channel.p_sub == 0.01
    assert config.decoder.max_workers == 2
    assert config.reads == 225
    assert as_dict(config)["patches"] == 1


def test_patches_from_file(tmp_path):
    (tmp_path / "patches.yaml").write_text(
        "patches:\n  - {block_no: 2, del_start: 1, del_len: 0, ins_pos: 1, ins_text: 'x'}\n")
    config = ExperimentConfig.from_dict(dict(DOCUMENT, patches="patches.yaml"), base=tmp_path)
    assert config.patches == [(2, UpdatePatch(1, 0, 1, b"x"))]


def test_missing_keys():
    with pytest.raises(ValidationError) as info:
        ExperimentConfig.from_dict({"input": "x"})
    assert set(info.value.errors) == {"fwd_primer", "rev_primer"}
    with pytest.raises(ValidationError):
        ExperimentConfig.from_dict(["not", "a", "mapping"])


def test_unknown_section_keys():
    with pytest.raises(ValidationError, match="stage1"):
        ExperimentConfig.from_dict(dict(DOCUMENT, stage1={"cycle": 3}))


def test_invalid_section_values():
    with pytest.raises(ConfigurationError, match="channel"):
        ExperimentConfig.from_dict(dict(DOCUMENT, channel={"p_sub": 2.0}))


def test_output_dir_override(monkeypatch, tmp_path):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "elsewhere"))
    config = ExperimentConfig.from_dict(DOCUMENT)
    assert config.output_dir == tmp_path / "elsewhere"
    assert resolve_output_dir("ignored") == tmp_path / "elsewhere"
    assert (tmp_path / "elsewhere").is_dir()


def test_load(tmp_path):
    path = tmp_path / "experiment.yaml"
    path.write_text(f"input: data.bin\nfwd_primer: {FWD}\nrev_primer: {REV}\n")
    config = ExperimentConfig.load(path)
    assert config.input == tmp_path / "data.bin"
    path.write_text("input: [unclosed\n")
    with pytest.raises(ValidationError):
        ExperimentConfig.load(path)
