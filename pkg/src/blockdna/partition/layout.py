"""Field geometry of a 150-base strand."""

from dataclasses import dataclass
from typing import Dict

from ..ecc import DEFAULT_ECC, EccConfig
from ..exceptions import ConfigurationError


@dataclass(frozen=True)
class PartitionLayout:
    """Lengths of the strand fields, in strand order.

    fwd primer | sync | unit index | version | intra index | payload | rev primer
    """
    fwd_primer_len: int = 20
    sync_len: int = 1
    unit_index_len: int = 10
    version_len: int = 1
    intra_index_len: int = 2
    payload_len: int = 96
    rev_primer_len: int = 20
    strand_len: int = 150
    version_slots: int = 4

    def __post_init__(self) -> None:
        total = sum(self.field_lengths().values())
        if total != self.strand_len:
            raise ConfigurationError(
                f"Strand fields sum to {total} bases, expected {self.strand_len}",
                field_name="strand_len")
        if self.version_len != 1 or not 1 <= self.version_slots <= 4:
            raise ConfigurationError("The version field is one base holding up to 4 slots",
                                     field_name="version_slots")
        if self.unit_index_len % 2:
            raise ConfigurationError("The unit index holds whole tree levels (2 bases each)",
                                     field_name="unit_index_len")

    def field_lengths(self) -> Dict[str, int]:
        return {
            "fwd_primer": self.fwd_primer_len,
            "sync": self.sync_len,
            "unit_index": self.unit_index_len,
            "version": self.version_len,
            "intra_index": self.intra_index_len,
            "payload": self.payload_len,
            "rev_primer": self.rev_primer_len,
        }

    def offsets(self) -> Dict[str, slice]:
        """Field name -> slice of the strand."""
        out = {}
        start = 0
        for name, length in self.field_lengths().items():
            out[name] = slice(start, start + length)
            start += length
        return out

    @property
    def tree_depth(self) -> int:
        return self.unit_index_len // 2

    @property
    def address_len(self) -> int:
        """Sync base, unit index and version base."""
        return self.sync_len + self.unit_index_len + self.version_len

    @property
    def prefix_len(self) -> int:
        """Bases before the intra index: primer plus address."""
        return self.fwd_primer_len + self.address_len

    @property
    def columns(self) -> int:
        return 4 ** self.intra_index_len

    def check_ecc(self, ecc: EccConfig = DEFAULT_ECC) -> None:
        """Raise unless one column of ``ecc`` fills exactly one payload field."""
        if ecc.column_bytes * 4 != self.payload_len:
            raise ConfigurationError(
                f"Payload of {self.payload_len} bases cannot carry a {ecc.column_bytes}-byte column",
                field_name="payload_len")
        if ecc.n > self.columns:
            raise ConfigurationError(
                f"{self.intra_index_len} intra index bases cannot address {ecc.n} columns",
                field_name="intra_index_len")


DEFAULT_LAYOUT = PartitionLayout()
