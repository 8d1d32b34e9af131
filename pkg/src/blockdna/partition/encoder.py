"""Files to partitions, and patches to update strands."""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Sequence, Tuple

from ..exceptions import AddressError, VersionOverflowError
from ..updates import UpdatePatch, serialize_patch
from ..types import DnaString
from .layout import DEFAULT_LAYOUT, PartitionLayout
from .manifest import PartitionManifest
from .strands import BLOCK_BYTES, StrandRecord, build_strands

logger = logging.getLogger(__name__)


@dataclass
class EncodedPartition:
    """A manifest together with the strands written for it."""
    manifest: PartitionManifest
    strands: List[StrandRecord] = field(default_factory=list)

    def sequences(self) -> List[DnaString]:
        return [s.sequence for s in self.strands]

    def __len__(self) -> int:
        return len(self.strands)


def iter_blocks(data: bytes) -> Iterator[bytes]:
    """256-byte blocks of ``data``; the last one is zero padded."""
    for start in range(0, len(data), BLOCK_BYTES):
        yield data[start:start + BLOCK_BYTES].ljust(BLOCK_BYTES, b"\x00")


def encode_data(data: bytes, fwd_primer: DnaString, rev_primer: DnaString, *,
                tree_seed: int, randomizer_seed: int, tree_depth: int = 5,
                name: str = "partition",
                layout: PartitionLayout = DEFAULT_LAYOUT) -> EncodedPartition:
    """Encode a file as version 0 of consecutive blocks.

    Raises:
        AddressError: If the file needs more blocks than the tree has leaves
    """
    block_count = (len(data) + BLOCK_BYTES - 1) // BLOCK_BYTES
    if block_count > 4 ** tree_depth:
        raise AddressError(
            f"{len(data)} bytes need {block_count} blocks; the tree has {4 ** tree_depth} leaves")
    layout.check_ecc()
    manifest = PartitionManifest(
        fwd_primer=fwd_primer, rev_primer=rev_primer, tree_depth=tree_depth,
        tree_seed=tree_seed, randomizer_seed=randomizer_seed, block_count=block_count,
        data_length=len(data), name=name, layout=layout)
    strands: List[StrandRecord] = []
    for block_no, block in enumerate(iter_blocks(data)):
        strands.extend(build_strands(block_no, 0, block, manifest))
    logger.info("Encoded %d bytes as %d blocks, %d strands", len(data), block_count, len(strands))
    return EncodedPartition(manifest, strands)


def add_patches(manifest: PartitionManifest,
                patches: Sequence[Tuple[int, UpdatePatch]]) -> EncodedPartition:
    """Write each patch into the next free version slot of its block.

    Patches for the same block take consecutive versions in the order given.
    The returned manifest records the new version counts.

    Raises:
        AddressError: If a patch names a block outside the partition
        VersionOverflowError: If a block runs out of version slots
    """
    counts: Dict[int, int] = {}
    strands: List[StrandRecord] = []
    for block_no, patch in patches:
        if not 0 <= block_no < manifest.block_count:
            raise AddressError(f"Block {block_no} is outside 0..{manifest.block_count - 1}")
        version = counts.get(block_no, manifest.version_count(block_no))
        if version >= manifest.layout.version_slots:
            raise VersionOverflowError(
                f"Block {block_no} already holds {version} versions")
        strands.extend(build_strands(block_no, version, serialize_patch(patch), manifest))
        counts[block_no] = version + 1
        logger.info("Patch for block %d written as version %d", block_no, version)
    return EncodedPartition(manifest.with_versions(counts), strands)

