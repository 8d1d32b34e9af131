"""Read classification, block histograms and retrieval cost arithmetic.

A read is attributed to the reference strand whose payload it carries. Reads
of the target block (any version) are on target. Reads carrying another
block's payload behind the target's elongated prefix are misprimed; the
remaining attributable reads belong to other blocks. Everything else, reads
without the partition's primers or without a recognizable payload, is
background.
"""

import csv
import io
import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import Levenshtein

from ..index_tree import elongate_primer
from ..partition.manifest import PartitionManifest
from ..partition.strands import StrandRecord, build_strands
from ..types import DnaString, Histogram, Read
from ..updates import serialize_patch
from .decoder import PartitionDecodeResult
from .extract import DEFAULT_TOLERANCE, locate_prefix, locate_suffix

logger = logging.getLogger(__name__)

TARGET = "target"
MISPRIMED = "misprimed"
OTHER_BLOCK = "other_block"
BACKGROUND = "background"
READ_CLASSES = (TARGET, MISPRIMED, OTHER_BLOCK, BACKGROUND)


class ReferenceIndex:
    """Payload lookup over the strands a partition is known to hold."""

    def __init__(self, strands: Iterable[StrandRecord], kmer: int = 12,
                 threshold: float = 0.15) -> None:
        self.kmer = kmer
        self.threshold = threshold
        self._exact: Dict[DnaString, Tuple[int, int]] = {}
        self._payloads: List[Tuple[DnaString, Tuple[int, int]]] = []
        self._postings: Dict[str, Set[int]] = defaultdict(set)
        for strand in strands:
            key = (strand.block_no, strand.version)
            if strand.payload in self._exact:
                continue
            self._exact[strand.payload] = key
            position = len(self._payloads)
            self._payloads.append((strand.payload, key))
            for i in range(len(strand.payload) - kmer + 1):
                self._postings[strand.payload[i:i + kmer]].add(position)

    def __len__(self) -> int:
        return len(self._payloads)

    def lookup(self, payload: DnaString) -> Optional[Tuple[int, int]]:
        """(block_no, version) of the closest reference payload, if close enough."""
        hit = self._exact.get(payload)
        if hit is not None:
            return hit
        limit = int(self.threshold * len(payload))
        best: Optional[Tuple[int, int]] = None
        best_distance = limit + 1
        candidates: Set[int] = set()
        for i in range(0, len(payload) - self.kmer + 1, self.kmer):
            candidates.update(self._postings.get(payload[i:i + self.kmer], ()))
        for position in sorted(candidates):
            reference, key = self._payloads[position]
            distance = Levenshtein.distance(payload, reference, score_cutoff=best_distance - 1)
            if distance < best_distance:
                best, best_distance = key, distance
        return best


def reference_from_decode(result: PartitionDecodeResult,
                          manifest: PartitionManifest) -> List[StrandRecord]:
    """Rebuild the strands of every decoded block version."""
    strands: List[StrandRecord] = []
    for block_no, block in sorted(result.blocks.items()):
        records = [block.original] + [serialize_patch(p) for p in block.chain.patches]
        for version, data in enumerate(records):
            strands.extend(build_strands(block_no, version, data, manifest))
    return strands


@dataclass
class ReadClassification:
    """Per-read attribution: class and (block_no, version) of the carried payload."""
    counts: Counter = field(default_factory=Counter)
    sources: Counter = field(default_factory=Counter)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def _payload_window(read: Read, manifest: PartitionManifest,
                    tolerance: int) -> Optional[DnaString]:
    layout = manifest.layout
    start = locate_prefix(read, manifest.fwd_primer, tolerance)
    stop = locate_suffix(read, manifest.rev_primer, tolerance)
    if start is None or stop is None or stop <= start:
        return None
    offset = start + layout.address_len + layout.intra_index_len
    return read[offset:stop]


def classify_reads(reads: Iterable[Read], manifest: PartitionManifest,
                   reference: ReferenceIndex, target_block: Optional[int] = None,
                   tolerance: int = DEFAULT_TOLERANCE) -> ReadClassification:
    """Attribute reads to reference strands and sort them into the four classes.

    A read of another block counts as misprimed when its leading bases are
    closer to the target's elongated primer than to its own block's prefix.
    Without a target block every attributed read counts as other-block.
    """
    def prefix(block_no: int) -> DnaString:
        return elongate_primer(manifest.fwd_primer, manifest.tree, block_no, manifest.tree_depth)

    target_prefix = prefix(target_block) if target_block is not None else ""
    result = ReadClassification()
    for read in reads:
        window = _payload_window(read, manifest, tolerance)
        source = reference.lookup(window) if window else None
        if source is None:
            result.counts[BACKGROUND] += 1
            continue
        result.sources[source] += 1
        if target_block is None:
            result.counts[OTHER_BLOCK] += 1
        elif source[0] == target_block:
            result.counts[TARGET] += 1
        else:
            head = read[:len(target_prefix)]
            if (Levenshtein.distance(head, target_prefix)
                    < Levenshtein.distance(head, prefix(source[0]))):
                result.counts[MISPRIMED] += 1
            else:
                result.counts[OTHER_BLOCK] += 1
    return result


@dataclass
class RetrievalMetrics:
    """Read classes of one readout and the derived costs.

    Attributes:
        counts: Reads per class
        histogram: (block_no, version, reads) for every attributed payload
        target_block: Block the readout was meant to retrieve
    """
    counts: Dict[str, int] = field(default_factory=dict)
    histogram: Histogram = field(default_factory=list)
    target_block: Optional[int] = None

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def fraction(self, read_class: str) -> float:
        return self.counts.get(read_class, 0) / self.total if self.total else 0.0

    @property
    def on_target_fraction(self) -> float:
        return self.fraction(TARGET)

    @property
    def misprime_fraction(self) -> float:
        return self.fraction(MISPRIMED)

    @property
    def other_block_fraction(self) -> float:
        return self.fraction(OTHER_BLOCK)

    @property
    def background_fraction(self) -> float:
        return self.fraction(BACKGROUND)

    @property
    def unwanted_ratio(self) -> float:
        return unwanted_ratio(self.on_target_fraction)

    def cost_reduction_factor(self, baseline: "RetrievalMetrics") -> float:
        """Reduction in reads needed compared with ``baseline``."""
        return cost_reduction_factor(baseline.unwanted_ratio, self.unwanted_ratio)


def compute_metrics(reads: Sequence[Read], manifest: PartitionManifest, target_block: int,
                    reference: Iterable[StrandRecord]) -> RetrievalMetrics:
    """Classify a readout retrieving ``target_block``."""
    index = reference if isinstance(reference, ReferenceIndex) else ReferenceIndex(reference)
    classified = classify_reads(reads, manifest, index, target_block)
    metrics = RetrievalMetrics(
        counts={c: classified.counts.get(c, 0) for c in READ_CLASSES},
        histogram=sorted((b, v, n) for (b, v), n in classified.sources.items()),
        target_block=target_block,
    )
    logger.info("Block %d readout: %.2f%% on target, %.2f%% misprimed", target_block,
                100 * metrics.on_target_fraction, 100 * metrics.misprime_fraction)
    return metrics


def stats_histogram(reads: Sequence[Read], manifest: PartitionManifest,
                    reference: Iterable[StrandRecord]) -> Histogram:
    """(block_no, version, reads) rows; their sum is the number of attributed reads."""
    index = reference if isinstance(reference, ReferenceIndex) else ReferenceIndex(reference)
    classified = classify_reads(reads, manifest, index)
    return sorted((b, v, n) for (b, v), n in classified.sources.items())


def histogram_csv(histogram: Histogram) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["block_no", "version", "read_count"])
    writer.writerows(histogram)
    return buffer.getvalue()


def unwanted_ratio(on_target_fraction: float) -> float:
    """Unwanted reads per wanted read."""
    if on_target_fraction <= 0:
        return math.inf
    return 1.0 / on_target_fraction - 1.0


def cost_reduction_factor(w_baseline: float, w_precise: float) -> float:
    """Sequencing cost of the baseline readout over that of the precise one."""
    return (w_baseline + 1.0) / (w_precise + 1.0)


def update_cost_ratios(partition_strands: int, strands_per_unit: int = 15,
                       unit_versions_read: int = 2,
                       read_fraction_saved: float = 0.5) -> Tuple[float, float]:
    """Synthesis and read cost of a whole-partition rewrite over a block patch.

    Returns:
        (synthesized strands ratio, read cost ratio); for 8805 strands these
        are 587 and 146.75
    """
    synthesis = partition_strands / strands_per_unit
    reading = read_fraction_saved * partition_strands / (unit_versions_read * strands_per_unit)
    return synthesis, reading


def sequencing_runs(reads_needed: int, run_capacity: int) -> int:
    """Sequencing runs needed to produce ``reads_needed`` reads."""
    if run_capacity <= 0:
        raise ValueError("run_capacity must be positive")
    return max(0, math.ceil(reads_needed / run_capacity))
