"""From reads back to block contents.

Reads are cut between the forward primer and the reverse site, clustered and
reconstructed. Each consensus is framed with the primer again and parsed
under the strict layout. Clusters are visited largest first (ties by
representative); the first reconstruction claiming an address keeps it and
later ones are discarded, which is how misprimed strands carrying a foreign
payload under the target's prefix are outvoted.
"""

import heapq
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .. import signals
from ..ecc import DEFAULT_ECC, UnitDecodeResult, decode_unit
from ..exceptions import BlockDnaError, DecodeFailure, EccDecodeError, MalformedPayloadError
from ..index_tree import elongate_primer
from ..partition.manifest import PartitionManifest
from ..partition.strands import StrandRecord, open_unit, parse_strand
from ..types import Address, DnaString, Read
from ..updates import VersionChain, chain_from_records, resolve_chain
from .clustering import Cluster, cluster_payloads
from .extract import DEFAULT_TOLERANCE, extract_payloads
from .reconstruction import reconstruct

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DecoderConfig:
    """Tuning of the read-to-data pipeline.

    Attributes:
        cluster_threshold: Clustering radius as a fraction of segment length
        kmer: k-mer length of the clustering candidate index
        exhaustive: Compare every segment with every representative; off tries
            k-mer candidates first
        window: BMA lookahead window
        primer_tolerance: Edits allowed when locating either primer
        max_workers: Threads used for reconstruction; None reconstructs inline
    """
    cluster_threshold: float = 0.15
    kmer: int = 12
    exhaustive: bool = True
    window: int = 3
    primer_tolerance: int = DEFAULT_TOLERANCE
    max_workers: Optional[int] = None


@dataclass
class ReconstructedStrand:
    """A cluster's consensus, framed and parsed.

    ``record`` is None when the consensus does not parse; ``reason`` then
    says why.
    """
    consensus: DnaString
    cluster_size: int
    representative: DnaString
    record: Optional[StrandRecord] = None
    reason: Optional[str] = None

    @property
    def address(self) -> Optional[Address]:
        if self.record is None:
            return None
        return (self.record.version, self.record.column)


@dataclass
class DecodeReport:
    """Bookkeeping of one decode."""
    reads: int = 0
    extracted: int = 0
    background: int = 0
    clusters: int = 0
    quarantined: int = 0
    discarded: int = 0
    corrected: Dict[int, List[int]] = field(default_factory=dict)
    missing: List[Address] = field(default_factory=list)


@dataclass
class BlockDecodeResult:
    """Recovered contents of one block.

    Attributes:
        block_no: The block
        original: Version 0 contents (256 bytes)
        resolved: Contents after applying every stored patch in order
        chain: The version chain the resolved contents came from
        report: Bookkeeping of the decode
    """
    block_no: int
    original: bytes
    resolved: bytes
    chain: VersionChain
    report: DecodeReport = field(default_factory=DecodeReport)


def reconstruct_reads(reads: Sequence[Read], manifest: PartitionManifest, fwd: DnaString,
                      config: Optional[DecoderConfig] = None,
                      report: Optional[DecodeReport] = None) -> List[ReconstructedStrand]:
    """Extract, cluster and reconstruct; largest cluster first."""
    config = config or DecoderConfig()
    report = report if report is not None else DecodeReport()
    layout = manifest.layout
    rev = manifest.rev_primer
    expected = layout.strand_len - len(fwd) - len(rev)
    segments, background = extract_payloads(reads, fwd, rev, expected, config.primer_tolerance)
    clusters = sorted(cluster_payloads(segments, config.cluster_threshold, config.kmer,
                                       config.exhaustive),
                      key=Cluster.sort_key)
    report.reads += len(reads)
    report.extracted += len(segments)
    report.background += background
    report.clusters += len(clusters)

    def build(cluster: Cluster) -> ReconstructedStrand:
        consensus = reconstruct(cluster.members, expected, config.window)
        parsed = parse_strand(fwd + consensus + rev, manifest)
        strand = ReconstructedStrand(consensus, cluster.size, cluster.representative)
        if parsed:
            strand.record = parsed
        else:
            strand.reason = parsed.reason
            logger.warning("Quarantined the consensus of a %d-read cluster: %s", cluster.size,
                           parsed.reason)
        if signals.SIGNAL_SUPPORT:
            signals.cluster_reconstructed.send(manifest, strand=strand)
        return strand

    if config.max_workers and len(clusters) > 1:
        with ThreadPoolExecutor(max_workers=config.max_workers) as executor:
            strands = list(executor.map(build, clusters))
    else:
        strands = [build(c) for c in clusters]
    report.quarantined += sum(1 for s in strands if s.record is None)
    return strands


def _candidates(strands: Iterable[ReconstructedStrand], block_no: int, versions: int,
                limit: int) -> Dict[Address, List[bytes]]:
    """Distinct payloads per address of one block, in cluster order."""
    found: Dict[Address, List[bytes]] = {}
    for strand in strands:
        record = strand.record
        if record is None or record.block_no != block_no or record.version >= versions:
            continue
        try:
            payload = record.payload_bytes()
        except MalformedPayloadError:
            continue
        options = found.setdefault((record.version, record.column), [])
        if payload not in options and len(options) < limit:
            options.append(payload)
    return found


def _missing(found: Mapping[Address, List[bytes]], versions: int) -> List[Address]:
    return [(v, c) for v in range(versions) for c in range(DEFAULT_ECC.n) if (v, c) not in found]


def _assemble(block_no: int, units: Mapping[int, bytes], report: DecodeReport,
              manifest: PartitionManifest) -> BlockDecodeResult:
    records = [units[v] for v in sorted(units)]
    chain = chain_from_records(records[0], records[1:])
    resolved = resolve_chain(chain)
    logger.info("Decoded block %d of %s with %d versions", block_no, manifest.name, len(records))
    return BlockDecodeResult(block_no, records[0], resolved, chain, report)


def _open(block_no: int, version: int, columns: Mapping[int, bytes],
          manifest: PartitionManifest) -> Tuple[bytes, UnitDecodeResult]:
    unit = decode_unit(columns)
    data = open_unit(unit.data, block_no, version, manifest.randomizer_seed)
    if signals.SIGNAL_SUPPORT:
        signals.unit_decoded.send(manifest, block_no=block_no, version=version, result=unit)
    return data, unit


def _check_coverage(block_no: int, found: Mapping[Address, List[bytes]], versions: int,
                    report: DecodeReport) -> None:
    report.missing = _missing(found, versions)
    for version in range(versions):
        lost = [a for a in report.missing if a[0] == version]
        if len(lost) > DEFAULT_ECC.parity:
            raise DecodeFailure(
                f"Block {block_no} version {version}: {len(lost)} strands never recovered",
                block_no=block_no, missing=report.missing)


def decode_strands(strands: Sequence[ReconstructedStrand], manifest: PartitionManifest,
                   block_no: int, report: Optional[DecodeReport] = None) -> BlockDecodeResult:
    """Decode one block from reconstructed strands, keeping the first claim per address.

    Raises:
        DecodeFailure: If a unit lacks more strands than the code can erase
        EccDecodeError: If a unit is uncorrectable
    """
    report = report if report is not None else DecodeReport()
    versions = manifest.version_count(block_no)
    found: Dict[Address, List[bytes]] = {}
    for strand in strands:
        record = strand.record
        if record is None or record.block_no != block_no or record.version >= versions:
            continue
        address = (record.version, record.column)
        if address in found:
            report.discarded += 1
            logger.warning("Discarded a %d-read reconstruction claiming %s of block %d",
                           strand.cluster_size, address, block_no)
            if signals.SIGNAL_SUPPORT:
                signals.strand_discarded.send(manifest, strand=strand)
            continue
        try:
            found[address] = [record.payload_bytes()]
        except MalformedPayloadError:
            continue
    _check_coverage(block_no, found, versions, report)
    units = {}
    for version in range(versions):
        columns = {c: found[(v, c)][0] for (v, c) in found if v == version}
        units[version], unit = _open(block_no, version, columns, manifest)
        if unit.corrected:
            report.corrected[version] = sorted(unit.corrected)
    return _assemble(block_no, units, report, manifest)


def _block_primer(manifest: PartitionManifest, block_no: int, fwd: Optional[DnaString]) -> DnaString:
    if fwd is not None:
        return fwd
    return elongate_primer(manifest.fwd_primer, manifest.tree, block_no, manifest.tree_depth)


def decode_block(reads: Sequence[Read], manifest: PartitionManifest, block_no: int,
                 fwd: Optional[DnaString] = None,
                 config: Optional[DecoderConfig] = None) -> BlockDecodeResult:
    """Recover one block, all versions, from a readout.

    Args:
        reads: The sequencing output
        manifest: Manifest of the partition
        block_no: Block to recover
        fwd: Primer the readout was amplified with; the fully elongated
            primer of the block by default
        config: Pipeline tuning

    Raises:
        DecodeFailure: No reads, or too few strands recovered
        EccDecodeError: If a unit is uncorrectable
    """
    if not reads:
        raise DecodeFailure("no reads", block_no=block_no)
    report = DecodeReport()
    strands = reconstruct_reads(reads, manifest, _block_primer(manifest, block_no, fwd), config, report)
    return decode_strands(strands, manifest, block_no, report)


def _assignments(sizes: Sequence[int], limit: int) -> Iterator[Tuple[int, ...]]:
    """Index tuples in order of increasing rank sum, at most ``limit`` of them."""
    start = tuple(0 for _ in sizes)
    heap = [(0, start)]
    seen = {start}
    produced = 0
    while heap and produced < limit:
        _, choice = heapq.heappop(heap)
        yield choice
        produced += 1
        for i, size in enumerate(sizes):
            if choice[i] + 1 < size:
                nxt = choice[:i] + (choice[i] + 1,) + choice[i + 1:]
                if nxt not in seen:
                    seen.add(nxt)
                    heapq.heappush(heap, (sum(nxt), nxt))


def decode_with_candidates(reads: Sequence[Read], manifest: PartitionManifest, block_no: int,
                           max_candidates: int = 3, fwd: Optional[DnaString] = None,
                           config: Optional[DecoderConfig] = None,
                           max_attempts: int = 4096) -> BlockDecodeResult:
    """Decode a block, trying other reconstructions where addresses conflict.

    Every address keeps up to ``max_candidates`` distinct payloads in cluster
    order. Assignments are tried per unit in order of increasing rank sum;
    the first that decodes without any correction wins, otherwise the first
    that decodes at all.

    Raises:
        DecodeFailure: If no assignment of some unit decodes
    """
    if max_candidates < 1:
        raise ValueError("max_candidates must be at least 1")
    if not reads:
        raise DecodeFailure("no reads", block_no=block_no)
    report = DecodeReport()
    strands = reconstruct_reads(reads, manifest, _block_primer(manifest, block_no, fwd), config, report)
    versions = manifest.version_count(block_no)
    found = _candidates(strands, block_no, versions, max_candidates)
    _check_coverage(block_no, found, versions, report)

    units: Dict[int, bytes] = {}
    for version in range(versions):
        addresses = sorted(a for a in found if a[0] == version)
        options = [found[a] for a in addresses]
        fallback: Optional[Tuple[bytes, UnitDecodeResult]] = None
        last_error: Optional[BlockDnaError] = None
        for choice in _assignments([len(o) for o in options], max_attempts):
            columns = {a[1]: options[i][choice[i]] for i, a in enumerate(addresses)}
            try:
                data, unit = _open(block_no, version, columns, manifest)
            except (EccDecodeError, MalformedPayloadError) as exc:
                last_error = exc
                continue
            if not unit.corrected:
                fallback = (data, unit)
                break
            if fallback is None:
                fallback = (data, unit)
        if fallback is None:
            raise DecodeFailure(
                f"No candidate assignment decodes block {block_no} version {version}",
                block_no=block_no, missing=report.missing) from last_error
        units[version] = fallback[0]
        if fallback[1].corrected:
            report.corrected[version] = sorted(fallback[1].corrected)
    return _assemble(block_no, units, report, manifest)


@dataclass
class PartitionDecodeResult:
    """Every block recovered from a whole-partition readout."""
    blocks: Dict[int, BlockDecodeResult] = field(default_factory=dict)
    failures: Dict[int, str] = field(default_factory=dict)
    report: DecodeReport = field(default_factory=DecodeReport)


def decode_partition(reads: Sequence[Read], manifest: PartitionManifest,
                     config: Optional[DecoderConfig] = None) -> PartitionDecodeResult:
    """Decode every block of a readout amplified with the main primers.

    Blocks that fail are listed in ``failures`` rather than raised.
    """
    result = PartitionDecodeResult()
    if not reads:
        raise DecodeFailure("no reads")
    strands = reconstruct_reads(reads, manifest, manifest.fwd_primer, config, result.report)
    by_block: Dict[int, List[ReconstructedStrand]] = {}
    for strand in strands:
        if strand.record is not None and strand.record.block_no < manifest.block_count:
            by_block.setdefault(strand.record.block_no, []).append(strand)
    for block_no in range(manifest.block_count):
        if block_no not in by_block:
            result.failures[block_no] = "no strands recovered"
            continue
        try:
            result.blocks[block_no] = decode_strands(by_block[block_no], manifest, block_no)
        except BlockDnaError as exc:
            result.failures[block_no] = str(exc)
            logger.warning("Block %d failed to decode: %s", block_no, exc)
    return result


def assemble_file(result: PartitionDecodeResult, manifest: PartitionManifest,
                  resolve_updates: bool = True) -> bytes:
    """Concatenate decoded blocks, trimming the last block's zero padding.

    Raises:
        DecodeFailure: If any block is missing
    """
    if result.failures:
        raise DecodeFailure(f"{len(result.failures)} blocks failed: {sorted(result.failures)[:10]}")
    parts = []
    for block_no in range(manifest.block_count):
        block = result.blocks[block_no]
        parts.append(block.resolved if resolve_updates else block.original)
    if parts and manifest.data_length is not None:
        tail = manifest.data_length - 256 * (len(parts) - 1)
        parts[-1] = parts[-1][:tail + len(parts[-1]) - 256]
    return b"".join(parts)


def decode_file(reads: Sequence[Read], manifest: PartitionManifest,
                config: Optional[DecoderConfig] = None, resolve_updates: bool = True) -> bytes:
    """Recover the stored file from a whole-partition readout."""
    return assemble_file(decode_partition(reads, manifest, config), manifest, resolve_updates)
