"""Experiment configuration.

An experiment is described by one YAML document. Every random draw of a run
comes from a seed named in it, so a run is reproducible from the document and
its input file alone. Paths are resolved against the document's directory;
``BLOCKDNA_OUTPUT_DIR`` overrides ``output_dir``.
"""

import dataclasses
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Type, TypeVar, Union

import yaml

from .exceptions import ConfigurationError, ValidationError
from .pipeline.decoder import DecoderConfig
from .updates import UpdatePatch, parse_patch_document, patches_from_document
from .wetlab_sim.pcr import PcrParams
from .wetlab_sim.sequencing import ChannelModel, MeasurementModel

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "BLOCKDNA_OUTPUT_DIR"

T = TypeVar("T")


@dataclass
class SynthesisConfig:
    abundance: float = 1.0
    bias_sigma: float = 0.1
    seed: int = 0


@dataclass
class MixingConfig:
    protocol: str = "measure-then-amplify"
    concentration: float = 50000.0
    measurement: MeasurementModel = field(default_factory=MeasurementModel)
    pcr: PcrParams = field(default_factory=lambda: PcrParams(cycles=15))
    seed: int = 0


@dataclass
class ExperimentConfig:
    """One scripted run: encode, patch, mix, two-stage PCR, sequence, decode.

    Attributes:
        name: Label of the partition
        input: File to store
        output_dir: Directory receiving the manifest, pools, reads and results
        fwd_primer: Main forward primer
        rev_primer: Reverse primer site
        tree_depth: Index tree depth
        tree_seed: Index tree seed
        randomizer_seed: Payload keystream seed
        patches: (block_no, patch) pairs written as updates
        target_block: Block retrieved by the elongated primer
        synthesis: Synthesis of the data and update pools
        mixing: Mixing of the update pool into the data pool
        stage1: Main primer amplification
        stage2: Elongated primer amplification
        reads: Number of reads sampled
        channel: Sequencing noise
        decoder: Decoding pipeline tuning
        max_candidates: Reconstructions tried per address
    """
    input: Path
    fwd_primer: str
    rev_primer: str
    name: str = "partition"
    output_dir: Path = Path("out")
    tree_depth: int = 5
    tree_seed: int = 0
    randomizer_seed: int = 0
    patches: List[Tuple[int, UpdatePatch]] = field(default_factory=list)
    target_block: int = 0
    synthesis: SynthesisConfig = field(default_factory=SynthesisConfig)
    mixing: MixingConfig = field(default_factory=MixingConfig)
    stage1: PcrParams = field(default_factory=lambda: PcrParams(cycles=10))
    stage2: PcrParams = field(default_factory=PcrParams)
    reads: int = 225
    channel: ChannelModel = field(default_factory=ChannelModel)
    decoder: DecoderConfig = field(default_factory=DecoderConfig)
    max_candidates: int = 3

    @classmethod
    def from_dict(cls, document: Mapping[str, Any], base: Optional[Path] = None) -> "ExperimentConfig":
        """Build a config from its dictionary form.

        Raises:
            ValidationError: On a missing key or an unknown section field
        """
        if not isinstance(document, Mapping):
            raise ValidationError("An experiment config must be a mapping")
        missing = [k for k in ("input", "fwd_primer", "rev_primer") if k not in document]
        if missing:
            raise ValidationError(f"Experiment config is missing {', '.join(missing)}",
                                  errors={k: "required" for k in missing})
        base = base or Path(".")
        tree = document.get("tree", {}) or {}
        mixing = dict(document.get("mixing", {}) or {})
        patches = document.get("patches", []) or []
        if isinstance(patches, str):
            patches = parse_patch_document((base / patches).read_text(encoding="utf-8"))
        else:
            patches = patches_from_document(list(patches))
        output_dir = Path(os.environ.get(OUTPUT_DIR_ENV) or base / document.get("output_dir", "out"))
        return cls(
            name=str(document.get("name", "partition")),
            input=base / str(document["input"]),
            fwd_primer=str(document["fwd_primer"]),
            rev_primer=str(document["rev_primer"]),
            output_dir=output_dir,
            tree_depth=int(tree.get("depth", 5)),
            tree_seed=int(tree.get("seed", 0)),
            randomizer_seed=int(document.get("randomizer_seed", 0)),
            patches=patches,
            target_block=int(document.get("target_block", 0)),
            synthesis=_section(SynthesisConfig, document.get("synthesis"), "synthesis"),
            mixing=MixingConfig(
                protocol=str(mixing.get("protocol", "measure-then-amplify")),
                concentration=float(mixing.get("concentration", 50000.0)),
                measurement=_section(MeasurementModel, mixing.get("measurement"), "mixing.measurement"),
                pcr=_section(PcrParams, mixing.get("pcr") or {"cycles": 15}, "mixing.pcr"),
                seed=int(mixing.get("seed", 0)),
            ),
            stage1=_section(PcrParams, document.get("stage1") or {"cycles": 10}, "stage1"),
            stage2=_section(PcrParams, document.get("stage2"), "stage2"),
            reads=int(document.get("reads", 225)),
            channel=_section(ChannelModel, document.get("channel"), "channel"),
            decoder=_section(DecoderConfig, document.get("decoder"), "decoder"),
            max_candidates=int(document.get("max_candidates", 3)),
        )

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ExperimentConfig":
        path = Path(path)
        try:
            document = yaml.safe_load(path.read_text(encoding="utf-8"))
        except yaml.YAMLError as exc:
            raise ValidationError(f"{path} is not valid YAML: {exc}") from exc
        config = cls.from_dict(document, base=path.parent)
        logger.info("Loaded experiment %s from %s", config.name, path)
        return config


def _section(kind: Type[T], values: Optional[Mapping[str, Any]], name: str) -> T:
    """Instantiate a parameter dataclass from a mapping, naming the section on errors."""
    values = dict(values or {})
    known = {f.name for f in dataclasses.fields(kind)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ValidationError(f"Unknown keys in {name}: {', '.join(unknown)}",
                              errors={k: "unknown" for k in unknown}, field_name=name)
    try:
        return kind(**values)
    except ConfigurationError as exc:
        raise ConfigurationError(f"{name}: {exc}", field_name=exc.field_name) from exc
    except TypeError as exc:
        raise ValidationError(f"{name}: {exc}", field_name=name) from exc


def resolve_output_dir(default: Union[str, Path]) -> Path:
    """``BLOCKDNA_OUTPUT_DIR`` if set, else ``default``; created if missing."""
    path = Path(os.environ.get(OUTPUT_DIR_ENV) or default)
    path.mkdir(parents=True, exist_ok=True)
    return path


def as_dict(config: ExperimentConfig) -> Dict[str, Any]:
    """Flat summary for logs and result files."""
    return {
        "name": config.name,
        "input": str(config.input),
        "target_block": config.target_block,
        "patches": len(config.patches),
        "reads": config.reads,
        "mixing": config.mixing.protocol,
    }
