"""Base mapping, keystream randomization and sequence helpers."""

import numpy as np
import pytest

from blockdna.codec import (Base, base4, gc_fraction, hamming, keystream, longest_homopolymer,
                            map_bases_to_bits, map_bits_to_bases, parse_base4, randomize,
                            reverse_complement)
from blockdna.exceptions import MalformedPayloadError


def test_bits_to_bases_table():
    """Two bits per base, most significant pair first."""
    assert map_bits_to_bases(b"") == ""
    assert map_bits_to_bases(b"\x00") == "AAAA"
    assert map_bits_to_bases(b"\x1b") == "ACGT"
    assert map_bits_to_bases(b"\xff\x1b") == "TTTTACGT"


def test_bases_to_bits_inverts_every_byte():
    data = bytes(range(256))
    assert map_bases_to_bits(map_bits_to_bases(data)) == data
    assert map_bases_to_bits("AAAA") == b"\x00"
    assert map_bases_to_bits("ACGT") == b"\x1b"


@pytest.mark.parametrize("bad", ["ACG", "ACGN", "acgt", "ACGTACG"])
def test_bases_to_bits_rejects_malformed_strings(bad):
    with pytest.raises(MalformedPayloadError):
        map_bases_to_bits(bad)


def test_randomize_is_an_involution():
    rng = np.random.default_rng(5)
    for seed in (0, 1, 2 ** 63 + 17):
        data = rng.integers(0, 256, 777, dtype=np.uint8).tobytes()
        scrambled = randomize(data, seed)
        assert scrambled != data
        assert randomize(scrambled, seed) == data
    assert randomize(b"", 3) == b""


def test_keystream_is_deterministic_and_separated_by_stream():
    assert keystream(42, 64) == keystream(42, 64)
    assert keystream(42, 64) != keystream(43, 64)
    assert keystream(42, 64, stream=1) != keystream(42, 64, stream=0)
    # A longer request extends a shorter one
    assert keystream(42, 100)[:37] == keystream(42, 37)
    assert keystream(42, 0) == b""


def test_randomized_zeros_have_short_runs():
    """Randomized all-zero data must not render as long homopolymers."""
    zeros = bytes(10 * 1024)
    runs = [longest_homopolymer(map_bits_to_bases(randomize(zeros, seed))) for seed in range(1000)]
    assert sum(run <= 12 for run in runs) >= 990


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_randomized_payload_has_uniform_bases(seed):
    bases = map_bits_to_bases(randomize(bytes(100 * 1024), seed))
    counts = np.array([bases.count(b) for b in "ACGT"], dtype=float)
    expected = len(bases) / 4
    assert np.all(np.abs(counts / expected - 1) <= 0.02)
    # chi-squared with three degrees of freedom, p = 0.001
    assert float(((counts - expected) ** 2 / expected).sum()) < 16.27


def test_sequence_helpers():
    assert reverse_complement("AACG") == "CGTT"
    assert gc_fraction("ACGT") == 0.5
    assert gc_fraction("") == 0.0
    assert longest_homopolymer("AAACCA") == 3
    assert longest_homopolymer("") == 0
    assert hamming("ACGT", "ACGA") == 1
    with pytest.raises(ValueError):
        hamming("ACG", "ACGT")


def test_base_enum():
    assert Base("G").is_strong
    assert not Base.A.is_strong
    assert [b.rank for b in Base] == [0, 1, 2, 3]


def test_base4_rendering():
    assert base4(0, 2) == "AA"
    assert base4(6, 2) == "CG"
    assert base4(14, 2) == "TG"
    assert parse_base4("TG") == 14
    with pytest.raises(ValueError):
        base4(16, 2)
    with pytest.raises(ValueError):
        parse_base4("AN")
