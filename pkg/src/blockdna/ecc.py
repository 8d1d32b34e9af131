"""GF(16) arithmetic and the RS(15,11) outer code of an encoding unit.

An encoding unit is a matrix of 15 strand payloads (columns). Each column
carries 24 bytes, i.e. 48 four-bit symbols. Symbol row ``r`` of the matrix,
taken across all 15 columns, is one RS(15,11) codeword: columns 0-10 hold data
and columns 11-14 hold parity. Data fills the columns column-major, so the
first 24 bytes of a unit land in column 0. Within a column the high nibble of
each byte comes first.

The field is GF(2^4) reduced by x^4 + x + 1 with generator element 0x2.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import FrozenSet, Iterable, List, Mapping, Optional, Set

import numpy as np
from reedsolo import ReedSolomonError, RSCodec, gf_mult_noLUT

from .exceptions import EccDecodeError, SizeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EccConfig:
    """Outer code parameters.

    Only the (15, 11) code with 48 symbols per strand is used by the storage
    layout, but the values stay symbolic throughout this module.
    """
    n: int = 15
    k: int = 11
    symbol_bits: int = 4
    symbols_per_strand: int = 48
    prim: int = 0x13
    generator: int = 2

    def __post_init__(self) -> None:
        if self.n != (1 << self.symbol_bits) - 1:
            raise ValueError(f"n must be 2^{self.symbol_bits} - 1, got {self.n}")
        if not 0 < self.k < self.n:
            raise ValueError(f"k must lie in (0, {self.n}), got {self.k}")
        if (self.symbols_per_strand * self.symbol_bits) % 8:
            raise ValueError("a strand must carry a whole number of bytes")

    @property
    def parity(self) -> int:
        return self.n - self.k

    @property
    def column_bytes(self) -> int:
        return self.symbols_per_strand * self.symbol_bits // 8

    @property
    def unit_bytes(self) -> int:
        return self.k * self.column_bytes


DEFAULT_ECC = EccConfig()


@lru_cache(maxsize=None)
def _codec(config: EccConfig) -> RSCodec:
    return RSCodec(nsym=config.parity, nsize=config.n, prim=config.prim,
                   generator=config.generator, c_exp=config.symbol_bits)


def gf16_mul(a: int, b: int) -> int:
    """Multiply two symbols in GF(16) modulo x^4 + x + 1."""
    if not (0 <= a < 16 and 0 <= b < 16):
        raise ValueError(f"GF(16) symbols must lie in 0..15, got {a} and {b}")
    return gf_mult_noLUT(a, b, prim=DEFAULT_ECC.prim, field_charac_full=16)


def _to_nibbles(buf: np.ndarray) -> np.ndarray:
    return np.stack([buf >> 4, buf & 0x0F], axis=-1).reshape(*buf.shape[:-1], -1)


def _from_nibbles(nibbles: np.ndarray) -> np.ndarray:
    pairs = nibbles.reshape(*nibbles.shape[:-1], -1, 2)
    return ((pairs[..., 0] << 4) | pairs[..., 1]).astype(np.uint8)


@dataclass
class UnitMatrix:
    """Encoded unit: ``symbols[c, r]`` is symbol ``r`` of column ``c``."""
    symbols: np.ndarray
    config: EccConfig = DEFAULT_ECC

    @property
    def n_columns(self) -> int:
        return self.symbols.shape[0]

    def is_data_column(self, column: int) -> bool:
        return column < self.config.k

    def column_bytes(self, column: int) -> bytes:
        """Payload bytes of one column (strand)."""
        return _from_nibbles(self.symbols[column]).tobytes()

    def columns(self) -> List[bytes]:
        return [self.column_bytes(c) for c in range(self.n_columns)]

    def row(self, r: int) -> List[int]:
        """Symbol row ``r`` across all columns; a codeword after encoding."""
        return [int(s) for s in self.symbols[:, r]]


@dataclass
class UnitDecodeResult:
    """Outcome of decoding one unit.

    Attributes:
        data: The recovered data bytes (k columns)
        erased: Columns treated as erasures
        corrected: Columns in which at least one symbol was corrected
    """
    data: bytes
    erased: FrozenSet[int] = field(default_factory=frozenset)
    corrected: FrozenSet[int] = field(default_factory=frozenset)


def rs_encode_unit(data: bytes, config: EccConfig = DEFAULT_ECC) -> UnitMatrix:
    """Encode one unit of ``config.unit_bytes`` bytes into an n-column matrix.

    Raises:
        SizeError: If ``data`` is not exactly one unit long
    """
    if len(data) != config.unit_bytes:
        raise SizeError(f"An encoding unit takes {config.unit_bytes} bytes, got {len(data)}")
    codec = _codec(config)
    raw = np.frombuffer(bytes(data), dtype=np.uint8).reshape(config.k, config.column_bytes)
    rows = _to_nibbles(raw).T
    encoded = np.empty((config.symbols_per_strand, config.n), dtype=np.uint8)
    for r, row in enumerate(rows):
        encoded[r] = np.frombuffer(bytes(codec.encode(bytearray(row.tolist()))), dtype=np.uint8)
    return UnitMatrix(symbols=np.ascontiguousarray(encoded.T), config=config)


def decode_unit(columns: Mapping[int, bytes], erasures: Iterable[int] = (),
                config: EccConfig = DEFAULT_ECC) -> UnitDecodeResult:
    """Decode a unit from the columns that are present.

    Columns absent from ``columns`` are erasures, as is every index listed in
    ``erasures``. Each row is corrected independently; afterwards the set of
    columns corrected anywhere in the unit must still satisfy the row bound
    2e + f <= n - k, since a faulty strand damages the same column in every row.

    Raises:
        EccDecodeError: Fewer than k columns, an uncorrectable row, or an
            error-column set larger than the code can explain
    """
    erased: Set[int] = set(erasures) | (set(range(config.n)) - set(columns))
    present = {c: columns[c] for c in columns if c not in erased}
    for c, payload in present.items():
        if not 0 <= c < config.n:
            raise EccDecodeError(f"Column index {c} is outside 0..{config.n - 1}", columns=[c])
        if len(payload) != config.column_bytes:
            raise SizeError(f"Column {c} carries {len(payload)} bytes, expected {config.column_bytes}")
    if len(present) < config.k:
        raise EccDecodeError(
            f"Only {len(present)} of {config.n} columns present; at least {config.k} are needed",
            columns=erased)

    matrix = np.zeros((config.n, config.symbols_per_strand), dtype=np.uint8)
    for c, payload in present.items():
        matrix[c] = _to_nibbles(np.frombuffer(bytes(payload), dtype=np.uint8))

    codec = _codec(config)
    erase_pos = sorted(erased)
    corrected_rows = np.empty((config.symbols_per_strand, config.n), dtype=np.uint8)
    failed: List[int] = []
    error_columns: Set[int] = set()
    for r in range(config.symbols_per_strand):
        try:
            _, full, errata = codec.decode(bytearray(matrix[:, r].tolist()), erase_pos=list(erase_pos))
        except ReedSolomonError:
            failed.append(r)
            continue
        corrected_rows[r] = np.frombuffer(bytes(full), dtype=np.uint8)
        error_columns.update(int(p) for p in errata if p not in erased)

    if failed:
        raise EccDecodeError(f"{len(failed)} symbol rows are uncorrectable", rows=failed,
                             columns=erased)
    if 2 * len(error_columns) + len(erased) > config.parity:
        raise EccDecodeError(
            f"Rows disagree on the damaged columns ({sorted(error_columns)}) "
            f"with {len(erased)} erasures", columns=error_columns | erased)
    if error_columns:
        logger.debug("Corrected columns %s (erased %s)", sorted(error_columns), erase_pos)

    data_nibbles = corrected_rows[:, :config.k].T
    data = _from_nibbles(np.ascontiguousarray(data_nibbles)).tobytes()
    return UnitDecodeResult(data=data, erased=frozenset(erased),
                            corrected=frozenset(error_columns))


def rs_decode_unit(columns: Mapping[int, bytes], erasures: Iterable[int] = (),
                   config: Optional[EccConfig] = None) -> bytes:
    """Decode a unit and return only its data bytes. See :func:`decode_unit`."""
    return decode_unit(columns, erasures, config or DEFAULT_ECC).data
