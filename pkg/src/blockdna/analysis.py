"""Capacity and density of a single partition as a function of index length.

With ``L`` index bases out of the ``avail`` bases left after the primers,
each of the 4**L addresses stores ``2 * (avail - L)`` bits. When the index
takes every available base, the only information left is whether a molecule
with a given address is present, one bit per address.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List

from .exceptions import ConfigurationError


@dataclass(frozen=True)
class CapacityPoint:
    """Capacity of one partition for one index length.

    Attributes:
        index_len: Index bases per strand
        capacity_bits: Bits the partition can hold
        density: Bits stored per synthesized base
    """
    index_len: int
    capacity_bits: int
    density: Fraction

    @property
    def capacity_bytes(self) -> Fraction:
        return Fraction(self.capacity_bits, 8)


def capacity_density(index_len: int, strand_len: int = 150, primer_len: int = 20) -> CapacityPoint:
    """Capacity and density for ``index_len`` index bases.

    Raises:
        ConfigurationError: If ``index_len`` is negative or exceeds the bases
            left after both primers
    """
    avail = strand_len - 2 * primer_len
    if avail <= 0:
        raise ConfigurationError("Primers leave no room in the strand", field_name="primer_len")
    if not 0 <= index_len <= avail:
        raise ConfigurationError(f"Index length must lie in 0..{avail}, got {index_len}",
                                 field_name="index_len")
    if index_len == avail:
        bits_per_strand = 1
    else:
        bits_per_strand = 2 * (avail - index_len)
    return CapacityPoint(
        index_len=index_len,
        capacity_bits=4 ** index_len * bits_per_strand,
        density=Fraction(bits_per_strand, strand_len),
    )


def capacity_table(strand_len: int = 150, primer_len: int = 20, step: int = 1) -> List[CapacityPoint]:
    """Capacity points for every ``step``-th index length, both endpoints included."""
    avail = strand_len - 2 * primer_len
    if avail <= 0 or step < 1:
        raise ConfigurationError("Need room after the primers and a positive step", field_name="step")
    lengths = list(range(0, avail + 1, step))
    if lengths[-1] != avail:
        lengths.append(avail)
    return [capacity_density(n, strand_len, primer_len) for n in lengths]
