"""Partition layout, manifests, strand framing and primer rules."""

from .encoder import EncodedPartition, add_patches, encode_data, iter_blocks
from .layout import DEFAULT_LAYOUT, PartitionLayout
from .manifest import PartitionManifest
from .primers import PrimerLibrary, PrimerReport, melting_temperature, validate_primer_pair
from .strands import (BLOCK_BYTES, StrandRecord, StrandReject, block_address, build_strands,
                      open_unit, parse_strand, seal_unit)

__all__ = [
    'BLOCK_BYTES',
    'DEFAULT_LAYOUT',
    'EncodedPartition',
    'PartitionLayout',
    'PartitionManifest',
    'PrimerLibrary',
    'PrimerReport',
    'StrandRecord',
    'StrandReject',
    'add_patches',
    'block_address',
    'build_strands',
    'encode_data',
    'iter_blocks',
    'melting_temperature',
    'open_unit',
    'parse_strand',
    'seal_unit',
    'validate_primer_pair',
]
