"""Partition manifests.

Everything needed to address and decode a partition, apart from the DNA
itself: primers, tree depth and seed, randomizer seed, block count and the
number of versions stored for each block. Manifests are kept on disk as YAML::

    name: alice
    fwd_primer: ...
    rev_primer: ...
    tree: {depth: 5, seed: 12345}
    randomizer_seed: 67890
    block_count: 587
    data_length: 150134
    versions: {531: 2}
    layout: {strand_len: 150, ...}

Blocks missing from ``versions`` hold only their original (version 0).
"""

import dataclasses
import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml

from ..codec import BASES
from ..exceptions import AddressError, ConfigurationError, ValidationError
from ..index_tree import IndexTree, TreeConfig, build_tree
from .layout import DEFAULT_LAYOUT, PartitionLayout

logger = logging.getLogger(__name__)

_REQUIRED_KEYS = ("fwd_primer", "rev_primer", "tree", "randomizer_seed", "block_count")


@dataclass(frozen=True)
class PartitionManifest:
    """Metadata of one partition.

    Attributes:
        fwd_primer: Main forward primer, as written at the start of every strand
        rev_primer: Reverse primer site, as written at the end of every strand
        tree_depth: Depth of the index tree
        tree_seed: Seed of the index tree
        randomizer_seed: Seed of the payload keystream
        block_count: Number of data blocks
        versions: Block number -> number of stored versions (original included)
        data_length: Length of the stored file in bytes, if known
        name: Label used in logs and multi-partition pools
        layout: Strand field geometry
    """
    fwd_primer: str
    rev_primer: str
    tree_depth: int = 5
    tree_seed: int = 0
    randomizer_seed: int = 0
    block_count: int = 0
    versions: Mapping[int, int] = field(default_factory=dict)
    data_length: Optional[int] = None
    name: str = "partition"
    layout: PartitionLayout = DEFAULT_LAYOUT

    def __post_init__(self) -> None:
        if len(self.fwd_primer) != self.layout.fwd_primer_len:
            raise ConfigurationError(
                f"Forward primer must be {self.layout.fwd_primer_len} bases", field_name="fwd_primer")
        if len(self.rev_primer) != self.layout.rev_primer_len:
            raise ConfigurationError(
                f"Reverse primer must be {self.layout.rev_primer_len} bases", field_name="rev_primer")
        if set(self.fwd_primer + self.rev_primer) - set(BASES):
            raise ConfigurationError("Primers must be written over A, C, G, T")
        if self.tree_depth != self.layout.tree_depth:
            raise ConfigurationError(
                f"A {self.layout.unit_index_len}-base unit index needs a depth-"
                f"{self.layout.tree_depth} tree, got depth {self.tree_depth}", field_name="tree_depth")
        if not 0 <= self.block_count <= 4 ** self.tree_depth:
            raise ConfigurationError(
                f"{self.block_count} blocks do not fit a depth-{self.tree_depth} tree",
                field_name="block_count")
        for block_no, count in self.versions.items():
            if not 0 <= block_no < self.block_count:
                raise AddressError(f"Version entry for unknown block {block_no}")
            if not 1 <= count <= self.layout.version_slots:
                raise ConfigurationError(
                    f"Block {block_no} claims {count} versions; slots are 1..{self.layout.version_slots}",
                    field_name="versions")

    @cached_property
    def tree(self) -> IndexTree:
        return build_tree(TreeConfig(depth=self.tree_depth, seed=self.tree_seed))

    def version_count(self, block_no: int) -> int:
        """Number of versions stored for ``block_no``."""
        if not 0 <= block_no < self.block_count:
            raise AddressError(f"Block {block_no} is outside 0..{self.block_count - 1}")
        return self.versions.get(block_no, 1)

    def with_versions(self, versions: Mapping[int, int]) -> "PartitionManifest":
        merged = dict(self.versions)
        merged.update(versions)
        return dataclasses.replace(self, versions={b: c for b, c in merged.items() if c > 1})

    def to_dict(self) -> Dict[str, Any]:
        document: Dict[str, Any] = {
            "name": self.name,
            "fwd_primer": self.fwd_primer,
            "rev_primer": self.rev_primer,
            "tree": {"depth": self.tree_depth, "seed": self.tree_seed},
            "randomizer_seed": self.randomizer_seed,
            "block_count": self.block_count,
            "versions": {int(b): int(c) for b, c in sorted(self.versions.items())},
            "layout": dataclasses.asdict(self.layout),
        }
        if self.data_length is not None:
            document["data_length"] = self.data_length
        return document

    @classmethod
    def from_dict(cls, document: Mapping[str, Any], source: Optional[str] = None) -> "PartitionManifest":
        """Build a manifest from its dictionary form.

        Raises:
            ValidationError: If a required key is missing or malformed
        """
        if not isinstance(document, Mapping):
            raise ValidationError("A manifest must be a mapping")
        missing = [key for key in _REQUIRED_KEYS if key not in document]
        if missing:
            raise ValidationError(f"Manifest{' ' + source if source else ''} is missing "
                                  f"{', '.join(missing)}", errors={k: "required" for k in missing})
        tree = document["tree"]
        if not isinstance(tree, Mapping) or "depth" not in tree or "seed" not in tree:
            raise ValidationError("Manifest tree section needs depth and seed", field_name="tree")
        try:
            layout = PartitionLayout(**document.get("layout", {}))
            return cls(
                name=str(document.get("name", "partition")),
                fwd_primer=str(document["fwd_primer"]),
                rev_primer=str(document["rev_primer"]),
                tree_depth=int(tree["depth"]),
                tree_seed=int(tree["seed"]),
                randomizer_seed=int(document["randomizer_seed"]),
                block_count=int(document["block_count"]),
                versions={int(b): int(c) for b, c in (document.get("versions") or {}).items()},
                data_length=(int(document["data_length"])
                             if document.get("data_length") is not None else None),
                layout=layout,
            )
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"Malformed manifest: {exc}") from exc

    def dumps(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

    @classmethod
    def loads(cls, text: str) -> "PartitionManifest":
        return cls.from_dict(yaml.safe_load(text))

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")
        logger.info("Wrote manifest %s to %s", self.name, path)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "PartitionManifest":
        text = Path(path).read_text(encoding="utf-8")
        return cls.from_dict(yaml.safe_load(text), source=str(path))
