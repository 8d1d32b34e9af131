"""Nucleotide alphabet, binary to base mapping and seeded data randomization.

Bytes map to bases two bits at a time, most significant pair first, using
00->A, 01->C, 10->G, 11->T, so the byte 0x1B renders as ``ACGT``.

Randomization XORs data with a keystream drawn from the Philox4x64-10
counter-based generator. The 128-bit Philox key is ``seed + (stream << 64)``
and the counter starts at zero; the stream is serialised as little-endian
64-bit words. ``stream`` lets every encoding unit of a partition draw an
independent keystream from one 64-bit partition seed. The generator and its
parameters are frozen: stored pools are only decodable while they stay so.
"""

from enum import Enum
from itertools import groupby

import numpy as np
from Bio.Seq import reverse_complement as _bio_reverse_complement
from Bio.SeqUtils import gc_fraction as _bio_gc_fraction

from .exceptions import MalformedPayloadError
from .types import DnaString

BASES = "ACGT"
WEAK = frozenset("AT")
STRONG = frozenset("CG")

_SEED_MASK = (1 << 64) - 1

_BASE_LOOKUP = np.frombuffer(BASES.encode("ascii"), dtype=np.uint8)
_BIT_LOOKUP = np.full(256, 255, dtype=np.uint8)
for _value, _letter in enumerate(BASES):
    _BIT_LOOKUP[ord(_letter)] = _value


class Base(str, Enum):
    """One nucleotide. Members compare in canonical order A < C < G < T."""

    A = "A"
    C = "C"
    G = "G"
    T = "T"

    @property
    def is_strong(self) -> bool:
        """True for the G/C class."""
        return self.value in STRONG

    @property
    def rank(self) -> int:
        return BASES.index(self.value)


def is_strong(base: str) -> bool:
    """Return whether ``base`` is G or C."""
    return base in STRONG


def map_bits_to_bases(data: bytes) -> DnaString:
    """Render bytes as bases, two bits per base, most significant pair first.

    Args:
        data: The bytes to render

    Returns:
        A string four times as long as ``data``
    """
    if not data:
        return ""
    raw = np.frombuffer(bytes(data), dtype=np.uint8)
    pairs = np.stack([(raw >> 6) & 3, (raw >> 4) & 3, (raw >> 2) & 3, raw & 3], axis=1)
    return _BASE_LOOKUP[pairs.reshape(-1)].tobytes().decode("ascii")


def map_bases_to_bits(s: DnaString) -> bytes:
    """Inverse of :func:`map_bits_to_bases`.

    Raises:
        MalformedPayloadError: If the length is not a multiple of four or a
            letter outside A/C/G/T occurs
    """
    if len(s) % 4:
        raise MalformedPayloadError(
            f"Base string of length {len(s)} is not a multiple of 4")
    if not s:
        return b""
    try:
        encoded = s.encode("ascii")
    except UnicodeEncodeError as exc:
        raise MalformedPayloadError("Base string contains non-ASCII characters") from exc
    values = _BIT_LOOKUP[np.frombuffer(encoded, dtype=np.uint8)]
    if (values == 255).any():
        bad = sorted({ch for ch in s if ch not in BASES})
        raise MalformedPayloadError(f"Base string contains invalid letters {bad}")
    quads = values.reshape(-1, 4).astype(np.uint8)
    packed = (quads[:, 0] << 6) | (quads[:, 1] << 4) | (quads[:, 2] << 2) | quads[:, 3]
    return packed.astype(np.uint8).tobytes()


def keystream(seed: int, length: int, stream: int = 0) -> bytes:
    """Return ``length`` keystream bytes for ``seed`` and ``stream``.

    Args:
        seed: 64-bit randomizer seed
        length: Number of bytes wanted
        stream: Sub-stream selector occupying the upper half of the Philox key
    """
    if length <= 0:
        return b""
    key = (seed & _SEED_MASK) | ((stream & _SEED_MASK) << 64)
    generator = np.random.Philox(key=key)
    words = generator.random_raw((length + 7) // 8)
    return words.astype("<u8").tobytes()[:length]


def randomize(data: bytes, seed: int, stream: int = 0) -> bytes:
    """XOR ``data`` with the keystream of ``seed``; applying it twice is the identity."""
    if not data:
        return b""
    key = np.frombuffer(keystream(seed, len(data), stream), dtype=np.uint8)
    return (np.frombuffer(bytes(data), dtype=np.uint8) ^ key).tobytes()


def reverse_complement(s: DnaString) -> DnaString:
    """Reverse complement (A<->T, C<->G, reversed)."""
    return str(_bio_reverse_complement(s))


def gc_fraction(s: DnaString) -> float:
    """Fraction of G/C bases; 0.0 for the empty string."""
    if not s:
        return 0.0
    return float(_bio_gc_fraction(s))


def longest_homopolymer(s: DnaString) -> int:
    """Length of the longest run of one repeated base."""
    return max((sum(1 for _ in run) for _, run in groupby(s)), default=0)


def hamming(a: DnaString, b: DnaString) -> int:
    """Hamming distance of two equal-length strings."""
    if len(a) != len(b):
        raise ValueError(f"Hamming distance needs equal lengths, got {len(a)} and {len(b)}")
    return sum(x != y for x, y in zip(a, b))


def base4(value: int, width: int) -> DnaString:
    """Render ``value`` as ``width`` base-4 digits over A, C, G, T."""
    digits = []
    for _ in range(width):
        digits.append(BASES[value & 3])
        value >>= 2
    if value:
        raise ValueError(f"value does not fit in {width} base-4 digits")
    return "".join(reversed(digits))


def parse_base4(s: DnaString) -> int:
    """Inverse of :func:`base4`; raises ValueError on letters outside A/C/G/T."""
    value = 0
    for ch in s:
        digit = BASES.find(ch)
        if digit < 0:
            raise ValueError(f"invalid base {ch!r}")
        value = value * 4 + digit
    return value
