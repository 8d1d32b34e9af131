"""Simulated DNA pools.

A pool maps distinct sequences to real-valued abundances. Pools behave as
values: every transformation returns a new pool and leaves its input alone.

Pool files hold one entry per line, ``abundance<TAB>sequence``, optionally
followed by a third provenance column. Lines starting with ``#`` are comments.
"""

import logging
import math
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, Iterable, Iterator, List, NamedTuple, Optional, Union

import numpy as np
from Bio.SeqIO.QualityIO import FastqGeneralIterator

from ..exceptions import PoolError
from ..types import DnaString, Read

logger = logging.getLogger(__name__)


class Provenance(str, Enum):
    """How an entry came to be in the pool."""

    ORIGINAL = "original"
    AMPLIFIED = "amplified"
    MISPRIMED = "misprimed"


class PoolEntry(NamedTuple):
    sequence: DnaString
    abundance: float
    provenance: Provenance


class Pool:
    """Sequences with abundances and provenance tags.

    Attributes:
        sequences: Distinct sequences in insertion order
        abundance: Abundance of each sequence
        provenance: Provenance of each sequence
    """

    def __init__(self, sequences: Iterable[DnaString] = (),
                 abundance: Optional[Iterable[float]] = None,
                 provenance: Optional[Iterable[Provenance]] = None) -> None:
        self.sequences: List[DnaString] = []
        self._index: Dict[DnaString, int] = {}
        values: List[float] = []
        tags: List[Provenance] = []
        seqs = list(sequences)
        amounts = [1.0] * len(seqs) if abundance is None else [float(a) for a in abundance]
        origins = [Provenance.ORIGINAL] * len(seqs) if provenance is None else list(provenance)
        if len(amounts) != len(seqs) or len(origins) != len(seqs):
            raise PoolError("Sequences, abundances and provenance tags differ in length")
        for seq, amount, origin in zip(seqs, amounts, origins):
            if not math.isfinite(amount) or amount < 0:
                raise PoolError(f"Abundance {amount} of {seq[:20]}... is not a finite non-negative number")
            position = self._index.get(seq)
            if position is None:
                self._index[seq] = len(self.sequences)
                self.sequences.append(seq)
                values.append(amount)
                tags.append(Provenance(origin))
            else:
                values[position] += amount
        self.abundance = np.asarray(values, dtype=np.float64)
        self.provenance: List[Provenance] = tags

    @classmethod
    def _from_distinct(cls, sequences: List[DnaString], abundance: np.ndarray,
                       provenance: List[Provenance]) -> "Pool":
        pool = cls.__new__(cls)
        pool.sequences = list(sequences)
        pool._index = {seq: i for i, seq in enumerate(pool.sequences)}
        pool.abundance = np.asarray(abundance, dtype=np.float64).copy()
        pool.provenance = list(provenance)
        return pool

    @classmethod
    def from_sequences(cls, sequences: Iterable[DnaString], abundance: float = 1.0,
                       bias_sigma: float = 0.0, seed: int = 0) -> "Pool":
        """A freshly synthesized pool.

        Args:
            sequences: Strands to synthesize
            abundance: Mean copies per strand
            bias_sigma: Sigma of the lognormal per-strand synthesis bias; 0 for
                perfectly uniform synthesis
            seed: Seed of the synthesis bias
        """
        seqs = list(sequences)
        amounts = np.full(len(seqs), float(abundance))
        if bias_sigma > 0 and seqs:
            rng = np.random.default_rng(seed)
            amounts *= rng.lognormal(mean=-bias_sigma ** 2 / 2, sigma=bias_sigma, size=len(seqs))
        return cls(seqs, amounts)

    def __len__(self) -> int:
        return len(self.sequences)

    def __iter__(self) -> Iterator[PoolEntry]:
        for i, seq in enumerate(self.sequences):
            yield PoolEntry(seq, float(self.abundance[i]), self.provenance[i])

    def __contains__(self, sequence: object) -> bool:
        return sequence in self._index

    def __repr__(self) -> str:
        return f"Pool({len(self)} sequences, total={self.total:.4g})"

    def get(self, sequence: DnaString, default: float = 0.0) -> float:
        position = self._index.get(sequence)
        return default if position is None else float(self.abundance[position])

    def index_of(self, sequence: DnaString) -> Optional[int]:
        return self._index.get(sequence)

    @property
    def total(self) -> float:
        return float(self.abundance.sum()) if len(self) else 0.0

    @property
    def unique_count(self) -> int:
        return int(np.count_nonzero(self.abundance > 0))

    def copy(self) -> "Pool":
        return Pool._from_distinct(self.sequences, self.abundance, self.provenance)

    def merge(self, other: "Pool") -> "Pool":
        """Both pools in one tube; abundances of shared sequences add up."""
        return Pool(self.sequences + other.sequences,
                    np.concatenate([self.abundance, other.abundance]),
                    self.provenance + other.provenance)

    def scale(self, factor: float) -> "Pool":
        """Dilute (factor < 1) or concentrate the whole pool."""
        if factor < 0 or not math.isfinite(factor):
            raise PoolError(f"Cannot scale a pool by {factor}")
        return Pool._from_distinct(self.sequences, self.abundance * factor, self.provenance)

    def filter(self, predicate: Callable[[PoolEntry], bool]) -> "Pool":
        kept = [entry for entry in self if predicate(entry)]
        return Pool([e.sequence for e in kept], [e.abundance for e in kept],
                     [e.provenance for e in kept])

    def mass_by_provenance(self) -> Dict[Provenance, float]:
        out = {p: 0.0 for p in Provenance}
        for origin, amount in zip(self.provenance, self.abundance):
            out[origin] += float(amount)
        return out

    def save(self, path: Union[str, Path], include_provenance: bool = False) -> None:
        """Write the pool file, one ``abundance<TAB>sequence`` line per entry."""
        with open(path, "w", encoding="ascii") as handle:
            for entry in self:
                line = f"{entry.abundance!r}\t{entry.sequence}"
                if include_provenance:
                    line += f"\t{entry.provenance.value}"
                handle.write(line + "\n")
        logger.debug("Wrote %d pool entries to %s", len(self), path)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Pool":
        """Read a pool file.

        Raises:
            PoolError: Naming the first malformed line
        """
        seqs: List[DnaString] = []
        amounts: List[float] = []
        tags: List[Provenance] = []
        with open(path, encoding="ascii") as handle:
            for number, line in enumerate(handle, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                fields = line.split("\t")
                if len(fields) not in (2, 3):
                    raise PoolError(f"{path}:{number}: expected abundance<TAB>sequence",
                                    line_number=number)
                try:
                    amount = float(fields[0])
                    origin = Provenance(fields[2]) if len(fields) == 3 else Provenance.ORIGINAL
                except ValueError as exc:
                    raise PoolError(f"{path}:{number}: {exc}", line_number=number) from exc
                if set(fields[1]) - set("ACGT"):
                    raise PoolError(f"{path}:{number}: sequence has letters outside ACGT",
                                    line_number=number)
                seqs.append(fields[1])
                amounts.append(amount)
                tags.append(origin)
        return cls(seqs, amounts, tags)


def per_strand_ratio(pool: Pool, numerator: Iterable[DnaString],
                     denominator: Iterable[DnaString]) -> float:
    """Mean abundance of the ``numerator`` strands over that of ``denominator``."""
    top = [pool.get(s) for s in numerator]
    bottom = [pool.get(s) for s in denominator]
    if not top or not bottom or not sum(bottom):
        raise PoolError("Per-strand ratio needs strands present in both groups")
    return (sum(top) / len(top)) / (sum(bottom) / len(bottom))


def read_reads(path: Union[str, Path]) -> List[Read]:
    """Reads from a plain one-per-line file or a FASTQ file (qualities ignored)."""
    with open(path, encoding="ascii") as handle:
        first = ""
        for line in handle:
            if line.strip():
                first = line
                break
        handle.seek(0)
        if first.startswith("@"):
            return [seq for _, seq, _ in FastqGeneralIterator(handle)]
        return [line.strip() for line in handle if line.strip() and not line.startswith("#")]


def write_reads(reads: Iterable[Read], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="ascii") as handle:
        for read in reads:
            handle.write(read + "\n")
