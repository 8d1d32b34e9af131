"""Read-to-data decoding and retrieval metrics."""

from .clustering import Cluster, cluster_payloads
from .decoder import (BlockDecodeResult, DecodeReport, DecoderConfig, PartitionDecodeResult,
                      ReconstructedStrand, assemble_file, decode_block, decode_file,
                      decode_partition, decode_strands, decode_with_candidates, reconstruct_reads)
from .extract import Extraction, extract_payloads, extract_segment, locate_prefix, locate_suffix
from .metrics import (BACKGROUND, MISPRIMED, OTHER_BLOCK, READ_CLASSES, TARGET, ReferenceIndex,
                      RetrievalMetrics, classify_reads, compute_metrics, cost_reduction_factor,
                      histogram_csv, reference_from_decode, sequencing_runs, stats_histogram,
                      unwanted_ratio, update_cost_ratios)
from .reconstruction import reconstruct

__all__ = [
    'BACKGROUND',
    'BlockDecodeResult',
    'Cluster',
    'DecodeReport',
    'DecoderConfig',
    'Extraction',
    'MISPRIMED',
    'OTHER_BLOCK',
    'PartitionDecodeResult',
    'READ_CLASSES',
    'ReconstructedStrand',
    'ReferenceIndex',
    'RetrievalMetrics',
    'TARGET',
    'assemble_file',
    'classify_reads',
    'cluster_payloads',
    'compute_metrics',
    'cost_reduction_factor',
    'decode_block',
    'decode_file',
    'decode_partition',
    'decode_strands',
    'decode_with_candidates',
    'extract_payloads',
    'extract_segment',
    'histogram_csv',
    'locate_prefix',
    'locate_suffix',
    'reconstruct',
    'reconstruct_reads',
    'reference_from_decode',
    'sequencing_runs',
    'stats_histogram',
    'unwanted_ratio',
    'update_cost_ratios',
]
