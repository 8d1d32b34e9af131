"""Simulated wet lab: pools, PCR, sequencing, measurement and mixing."""

from .mixing import (MIXING_CYCLES, MixingProtocolRegistry, mix_amplify_then_measure,
                     mix_measure_then_amplify)
from .pcr import PcrParams, binding_distance, multiplex_pcr, pcr, two_stage_pcr
from .pool import Pool, PoolEntry, Provenance, per_strand_ratio, read_reads, write_reads
from .sequencing import ChannelModel, MeasurementModel, measure, sequence
from .stats import PoolMonitor, PoolStats

__all__ = [
    'ChannelModel',
    'MIXING_CYCLES',
    'MeasurementModel',
    'MixingProtocolRegistry',
    'PcrParams',
    'Pool',
    'PoolEntry',
    'PoolMonitor',
    'PoolStats',
    'Provenance',
    'binding_distance',
    'measure',
    'mix_amplify_then_measure',
    'mix_measure_then_amplify',
    'multiplex_pcr',
    'pcr',
    'per_strand_ratio',
    'read_reads',
    'sequence',
    'two_stage_pcr',
    'write_reads',
]
