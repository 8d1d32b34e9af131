"""
blockdna: block-addressable DNA storage with precise random access and in-place updates
"""

from .analysis import CapacityPoint, capacity_density, capacity_table
from .codec import (BASES, Base, keystream, map_bases_to_bits, map_bits_to_bases, randomize,
                    reverse_complement)
from .ecc import DEFAULT_ECC, EccConfig, UnitDecodeResult, decode_unit, rs_decode_unit, rs_encode_unit
from .exceptions import (AddressError, BlockDnaError, ConfigurationError, DecodeFailure,
                         EccDecodeError, MalformedPayloadError, PatchApplicationError, PatchError,
                         PatchTooLargeError, PoolError, SizeError, ValidationError,
                         VersionOverflowError)
from .index_tree import (ElongatedPrimerCache, IndexTree, NodePath, TreeConfig, build_tree,
                         elongate_primer, elongated_primers_for_range, leaf_index, prefix_cover,
                         validate_index_set)
from .logging import logger
from .partition import (EncodedPartition, PartitionLayout, PartitionManifest, StrandRecord,
                        add_patches, build_strands, encode_data, parse_strand)
from .pipeline import (DecoderConfig, RetrievalMetrics, compute_metrics, decode_block, decode_file,
                       decode_partition, decode_with_candidates, stats_histogram)
from .updates import (UpdatePatch, VersionChain, apply_patch, deserialize_patch, diff_patch,
                      resolve_chain, serialize_patch)
from .wetlab_sim import (ChannelModel, MeasurementModel, MixingProtocolRegistry, PcrParams, Pool,
                         multiplex_pcr, pcr, sequence, two_stage_pcr)

__version__ = "0.1.0"

__all__ = [
    # Codec and error correction
    'BASES',
    'Base',
    'DEFAULT_ECC',
    'EccConfig',
    'UnitDecodeResult',
    'decode_unit',
    'keystream',
    'map_bases_to_bits',
    'map_bits_to_bases',
    'randomize',
    'reverse_complement',
    'rs_decode_unit',
    'rs_encode_unit',

    # Index tree
    'ElongatedPrimerCache',
    'IndexTree',
    'NodePath',
    'TreeConfig',
    'build_tree',
    'elongate_primer',
    'elongated_primers_for_range',
    'leaf_index',
    'prefix_cover',
    'validate_index_set',

    # Partitions and updates
    'EncodedPartition',
    'PartitionLayout',
    'PartitionManifest',
    'StrandRecord',
    'UpdatePatch',
    'VersionChain',
    'add_patches',
    'apply_patch',
    'build_strands',
    'deserialize_patch',
    'diff_patch',
    'encode_data',
    'parse_strand',
    'resolve_chain',
    'serialize_patch',

    # Wet lab simulation
    'ChannelModel',
    'MeasurementModel',
    'MixingProtocolRegistry',
    'PcrParams',
    'Pool',
    'multiplex_pcr',
    'pcr',
    'sequence',
    'two_stage_pcr',

    # Decoding and analysis
    'CapacityPoint',
    'DecoderConfig',
    'RetrievalMetrics',
    'capacity_density',
    'capacity_table',
    'compute_metrics',
    'decode_block',
    'decode_file',
    'decode_partition',
    'decode_with_candidates',
    'stats_histogram',

    # Errors
    'AddressError',
    'BlockDnaError',
    'ConfigurationError',
    'DecodeFailure',
    'EccDecodeError',
    'MalformedPayloadError',
    'PatchApplicationError',
    'PatchError',
    'PatchTooLargeError',
    'PoolError',
    'SizeError',
    'ValidationError',
    'VersionOverflowError',

    'logger',
]
