"""Shared fixtures: a pair of primers and a small encoded partition."""

import numpy as np
import pytest

from blockdna.partition import encode_data

FWD = "CTACACGACGCTCTTCCGAT"
REV = "AGATCGGAAGAGCACACGTC"

OTHER_FWD = "GTCAGTCTGAATCCTTCCGA"
OTHER_REV = "TGCATCAGGTACTGACCTAG"


def random_bytes(n, seed=0):
    return np.random.default_rng(seed).integers(0, 256, n, dtype=np.uint8).tobytes()


@pytest.fixture
def data():
    """Four blocks and a bit of a fifth."""
    return random_bytes(4 * 256 + 100, seed=1)


@pytest.fixture
def encoded(data):
    return encode_data(data, FWD, REV, tree_seed=11, randomizer_seed=22, name="test")


@pytest.fixture
def manifest(encoded):
    return encoded.manifest
