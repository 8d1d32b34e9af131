"""Update patches and version chains.

A patch deletes a byte range of a block and then inserts bytes at a position
of the shortened block. It is stored as an ordinary 256-byte block payload in
one of the block's free version slots::

    byte 0      del_start
    byte 1      del_len
    byte 2      ins_pos
    byte 3      ins_len
    bytes 4..   ins_bytes, then zero fill

Offsets address the 256-byte block contents; randomizer padding is never
visible here. A block has at most three patches (versions 1..3), applied in
version order.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, List, Sequence, Tuple, Union

import yaml

from .exceptions import (PatchApplicationError, PatchError, PatchTooLargeError,
                         SizeError, ValidationError, VersionOverflowError)

logger = logging.getLogger(__name__)

BLOCK_BYTES = 256
PATCH_HEADER_BYTES = 4
MAX_INSERT_BYTES = BLOCK_BYTES - PATCH_HEADER_BYTES
MAX_PATCHES = 3


@dataclass(frozen=True)
class UpdatePatch:
    """Delete ``del_len`` bytes at ``del_start``, then insert at ``ins_pos``."""
    del_start: int = 0
    del_len: int = 0
    ins_pos: int = 0
    ins_bytes: bytes = b""

    def __post_init__(self) -> None:
        for name in ("del_start", "del_len", "ins_pos"):
            value = getattr(self, name)
            if not 0 <= value <= 255:
                raise PatchError(f"{name} must fit in one byte, got {value}")
        object.__setattr__(self, "ins_bytes", bytes(self.ins_bytes))

    @property
    def ins_len(self) -> int:
        return len(self.ins_bytes)

    @property
    def is_identity(self) -> bool:
        return self.del_len == 0 and not self.ins_bytes


def serialize_patch(patch: UpdatePatch) -> bytes:
    """Render a patch as a 256-byte record.

    Raises:
        PatchTooLargeError: If more than 252 bytes are inserted
    """
    if patch.ins_len > MAX_INSERT_BYTES:
        raise PatchTooLargeError(
            f"A patch can insert at most {MAX_INSERT_BYTES} bytes, got {patch.ins_len}")
    header = bytes([patch.del_start, patch.del_len, patch.ins_pos, patch.ins_len])
    return (header + patch.ins_bytes).ljust(BLOCK_BYTES, b"\x00")


def deserialize_patch(record: bytes) -> UpdatePatch:
    """Parse a 256-byte record produced by :func:`serialize_patch`."""
    if len(record) != BLOCK_BYTES:
        raise SizeError(f"A patch record is {BLOCK_BYTES} bytes, got {len(record)}")
    del_start, del_len, ins_pos, ins_len = record[:PATCH_HEADER_BYTES]
    if ins_len > MAX_INSERT_BYTES:
        raise PatchTooLargeError(f"Patch record claims {ins_len} inserted bytes")
    body = record[PATCH_HEADER_BYTES:PATCH_HEADER_BYTES + ins_len]
    return UpdatePatch(del_start, del_len, ins_pos, bytes(body))


def apply_patch(block: bytes, patch: UpdatePatch, version: Union[int, None] = None) -> bytes:
    """Apply one patch to the current block contents.

    Args:
        block: Current contents, at most 256 bytes
        patch: The patch to apply
        version: Version slot of the patch, reported in errors

    Raises:
        PatchApplicationError: If the deletion or insertion falls outside the
            block, or the result would exceed 256 bytes
    """
    if patch.del_start + patch.del_len > len(block):
        raise PatchApplicationError(
            f"Deletion {patch.del_start}+{patch.del_len} runs past a {len(block)}-byte block",
            bound="delete", version=version)
    remaining = block[:patch.del_start] + block[patch.del_start + patch.del_len:]
    if patch.ins_pos > len(remaining):
        raise PatchApplicationError(
            f"Insertion at {patch.ins_pos} is past the end of {len(remaining)} bytes",
            bound="insert", version=version)
    result = remaining[:patch.ins_pos] + patch.ins_bytes + remaining[patch.ins_pos:]
    if len(result) > BLOCK_BYTES:
        raise PatchApplicationError(
            f"Patched block would hold {len(result)} bytes", bound="length", version=version)
    return bytes(result)


@dataclass
class VersionChain:
    """Original block contents followed by the patches of versions 1..3."""
    original: bytes
    patches: List[UpdatePatch] = field(default_factory=list)

    def __post_init__(self) -> None:
        if len(self.patches) > MAX_PATCHES:
            raise VersionOverflowError(
                f"A block holds at most {MAX_PATCHES} patches, got {len(self.patches)}")

    def append(self, patch: UpdatePatch) -> "VersionChain":
        return VersionChain(self.original, [*self.patches, patch])

    @property
    def latest_version(self) -> int:
        return len(self.patches)

    def resolve(self) -> bytes:
        return resolve_chain(self)


def resolve_chain(chain: VersionChain) -> bytes:
    """Fold the chain's patches over the original, in version order.

    Raises:
        PatchApplicationError: Carrying the version number of the failing patch
    """
    block = bytes(chain.original)
    for version, patch in enumerate(chain.patches, start=1):
        block = apply_patch(block, patch, version=version)
    return block


def diff_patch(old: bytes, new: bytes) -> UpdatePatch:
    """Smallest single delete-then-insert patch turning ``old`` into ``new``.

    Raises:
        PatchTooLargeError: If the changed region of ``new`` exceeds one record
    """
    if len(old) > BLOCK_BYTES or len(new) > BLOCK_BYTES:
        raise SizeError(f"Blocks hold at most {BLOCK_BYTES} bytes")
    if old == new:
        return UpdatePatch()
    shortest = min(len(old), len(new))
    prefix = 0
    # offsets are single bytes
    while prefix < min(shortest, BLOCK_BYTES - 1) and old[prefix] == new[prefix]:
        prefix += 1
    suffix = 0
    while (suffix < shortest - prefix
           and old[len(old) - 1 - suffix] == new[len(new) - 1 - suffix]):
        suffix += 1
    inserted = new[prefix:len(new) - suffix]
    if len(inserted) > MAX_INSERT_BYTES:
        raise PatchTooLargeError(f"Change of {len(inserted)} bytes does not fit one patch")
    return UpdatePatch(del_start=prefix, del_len=len(old) - prefix - suffix,
                       ins_pos=prefix, ins_bytes=bytes(inserted))


def _patch_from_entry(entry: Any, position: int) -> Tuple[int, UpdatePatch]:
    if not isinstance(entry, dict):
        raise ValidationError(f"Patch entry {position} must be a mapping", field_name="patches")
    missing = [key for key in ("block_no", "del_start", "del_len", "ins_pos") if key not in entry]
    if missing:
        raise ValidationError(f"Patch entry {position} is missing {', '.join(missing)}",
                              errors={key: "required" for key in missing})
    text = entry.get("ins_text", "")
    if not isinstance(text, str):
        raise ValidationError(f"Patch entry {position}: ins_text must be a string",
                              field_name="ins_text")
    try:
        patch = UpdatePatch(int(entry["del_start"]), int(entry["del_len"]),
                            int(entry["ins_pos"]), text.encode("utf-8"))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"Patch entry {position}: {exc}") from exc
    return int(entry["block_no"]), patch


def parse_patch_document(text: str) -> List[Tuple[int, UpdatePatch]]:
    """Parse a YAML patch document.

    The document is either a list of entries or a mapping with a ``patches``
    list. Each entry names ``block_no``, ``del_start``, ``del_len``,
    ``ins_pos`` and optionally ``ins_text``.
    """
    return patches_from_document(yaml.safe_load(text))


def patches_from_document(document: Any) -> List[Tuple[int, UpdatePatch]]:
    """Patches from an already parsed patch document. See :func:`parse_patch_document`."""
    if isinstance(document, dict):
        document = document.get("patches")
    if not isinstance(document, list):
        raise ValidationError("A patch document must hold a list of patches", field_name="patches")
    return [_patch_from_entry(entry, i) for i, entry in enumerate(document)]


def load_patch_document(path: Union[str, Path]) -> List[Tuple[int, UpdatePatch]]:
    """Read a patch document from disk. See :func:`parse_patch_document`."""
    patches = parse_patch_document(Path(path).read_text(encoding="utf-8"))
    logger.info("Loaded %d patches from %s", len(patches), path)
    return patches


def chain_from_records(original: bytes, records: Sequence[bytes]) -> VersionChain:
    """Version chain from the decoded 256-byte records of versions 1..n."""
    return VersionChain(bytes(original), [deserialize_patch(r) for r in records])
