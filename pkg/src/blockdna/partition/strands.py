"""Strand assembly and strict strand parsing.

A block version becomes one encoding unit: its 256 bytes are XORed with the
unit's keystream, extended by 8 further keystream bytes to 264, RS encoded
and cut into 15 columns. Each column is framed as::

    fwd primer | A | leaf index | version base | intra index | payload | rev primer
"""

import logging
from dataclasses import dataclass
from typing import List, Union

import numpy as np

from .. import signals
from ..codec import BASES, base4, keystream, map_bases_to_bits, map_bits_to_bases, parse_base4
from ..ecc import DEFAULT_ECC, rs_encode_unit
from ..exceptions import AddressError, MalformedPayloadError, SizeError, VersionOverflowError
from ..index_tree import SYNC_BASE
from ..types import DnaString
from .manifest import PartitionManifest

logger = logging.getLogger(__name__)

BLOCK_BYTES = 256
PADDING_BYTES = DEFAULT_ECC.unit_bytes - BLOCK_BYTES


@dataclass(frozen=True)
class StrandRecord:
    """One framed strand and the address it carries."""
    fwd_primer: DnaString
    unit_index: DnaString
    version: int
    column: int
    payload: DnaString
    rev_region: DnaString
    block_no: int

    @property
    def sync(self) -> str:
        return SYNC_BASE

    @property
    def version_base(self) -> str:
        return BASES[self.version]

    @property
    def intra_index(self) -> DnaString:
        return base4(self.column, 2)

    @property
    def address(self) -> DnaString:
        return SYNC_BASE + self.unit_index + self.version_base

    @property
    def sequence(self) -> DnaString:
        return (self.fwd_primer + self.address + self.intra_index
                + self.payload + self.rev_region)

    def payload_bytes(self) -> bytes:
        return map_bases_to_bits(self.payload)


@dataclass(frozen=True)
class StrandReject:
    """A sequence :func:`parse_strand` refused, with the reason."""
    reason: str
    sequence: DnaString

    def __bool__(self) -> bool:
        return False


REJECT_LENGTH = "bad_length"
REJECT_PRIMER = "wrong_primer"
REJECT_REVERSE = "wrong_reverse_primer"
REJECT_SYNC = "bad_sync"
REJECT_INDEX = "unknown_index"
REJECT_COLUMN = "bad_column"
REJECT_LETTERS = "bad_letters"


def _unit_stream(block_no: int, version: int) -> int:
    return block_no * 4 + version


def seal_unit(data: bytes, block_no: int, version: int, seed: int) -> bytes:
    """Randomize 256 block bytes and append the keystream padding (264 bytes)."""
    if len(data) != BLOCK_BYTES:
        raise SizeError(f"A block holds {BLOCK_BYTES} bytes, got {len(data)}")
    key = np.frombuffer(keystream(seed, BLOCK_BYTES + PADDING_BYTES,
                                  _unit_stream(block_no, version)), dtype=np.uint8)
    body = np.frombuffer(bytes(data), dtype=np.uint8) ^ key[:BLOCK_BYTES]
    return body.tobytes() + key[BLOCK_BYTES:].tobytes()


def open_unit(unit: bytes, block_no: int, version: int, seed: int) -> bytes:
    """Inverse of :func:`seal_unit`.

    Raises:
        MalformedPayloadError: If the padding is not the expected keystream,
            which means the unit was decoded under the wrong address or seed
    """
    if len(unit) != BLOCK_BYTES + PADDING_BYTES:
        raise SizeError(f"A unit holds {BLOCK_BYTES + PADDING_BYTES} bytes, got {len(unit)}")
    key = np.frombuffer(keystream(seed, len(unit), _unit_stream(block_no, version)),
                        dtype=np.uint8)
    if unit[BLOCK_BYTES:] != key[BLOCK_BYTES:].tobytes():
        raise MalformedPayloadError(
            f"Padding of block {block_no} version {version} does not match its keystream")
    return (np.frombuffer(unit[:BLOCK_BYTES], dtype=np.uint8) ^ key[:BLOCK_BYTES]).tobytes()


def block_address(manifest: PartitionManifest, block_no: int, version: int) -> DnaString:
    """Sync base, leaf index and version base of a block version (12 bases)."""
    if not 0 <= version < manifest.layout.version_slots:
        raise AddressError(f"Version {version} is outside 0..{manifest.layout.version_slots - 1}")
    return SYNC_BASE + manifest.tree.leaf_index(block_no) + BASES[version]


def build_strands(block_no: int, version: int, data: bytes,
                  manifest: PartitionManifest) -> List[StrandRecord]:
    """The 15 strands of one block version.

    Raises:
        SizeError: If ``data`` is not 256 bytes
        VersionOverflowError: If ``version`` exceeds the version slots
        AddressError: If the block is outside the tree
    """
    if not 0 <= version < manifest.layout.version_slots:
        raise VersionOverflowError(
            f"Version {version} does not fit {manifest.layout.version_slots} slots")
    unit_index = manifest.tree.leaf_index(block_no)
    matrix = rs_encode_unit(seal_unit(data, block_no, version, manifest.randomizer_seed))
    strands = [
        StrandRecord(
            fwd_primer=manifest.fwd_primer,
            unit_index=unit_index,
            version=version,
            column=column,
            payload=map_bits_to_bases(matrix.column_bytes(column)),
            rev_region=manifest.rev_primer,
            block_no=block_no,
        )
        for column in range(matrix.n_columns)
    ]
    if signals.SIGNAL_SUPPORT:
        signals.strands_built.send(manifest, block_no=block_no, version=version, strands=strands)
    return strands


def parse_strand(s: DnaString, manifest: PartitionManifest) -> Union[StrandRecord, StrandReject]:
    """Slice a full-length strand into its fields.

    Only exact 150-base strands are accepted; reads with indels go through
    the pipeline's tolerant extraction instead.
    """
    layout = manifest.layout
    if len(s) != layout.strand_len:
        return StrandReject(REJECT_LENGTH, s)
    if set(s) - set(BASES):
        return StrandReject(REJECT_LETTERS, s)
    fields = {name: s[cut] for name, cut in layout.offsets().items()}
    if fields["fwd_primer"] != manifest.fwd_primer:
        return StrandReject(REJECT_PRIMER, s)
    if fields["rev_primer"] != manifest.rev_primer:
        return StrandReject(REJECT_REVERSE, s)
    if fields["sync"] != SYNC_BASE:
        return StrandReject(REJECT_SYNC, s)
    block_no = manifest.tree.block_for_index(fields["unit_index"])
    if block_no is None:
        return StrandReject(REJECT_INDEX, s)
    version = BASES.index(fields["version"])
    if version >= layout.version_slots:
        return StrandReject(REJECT_INDEX, s)
    column = parse_base4(fields["intra_index"])
    if column >= DEFAULT_ECC.n:
        return StrandReject(REJECT_COLUMN, s)
    return StrandRecord(
        fwd_primer=fields["fwd_primer"],
        unit_index=fields["unit_index"],
        version=version,
        column=column,
        payload=fields["payload"],
        rev_region=fields["rev_primer"],
        block_no=block_no,
    )
