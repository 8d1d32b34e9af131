"""Capacity and density against index length."""

from fractions import Fraction

import pytest

from blockdna.analysis import capacity_density, capacity_table
from blockdna.exceptions import ConfigurationError


def test_full_index_stores_presence_only():
    point = capacity_density(110)
    assert point.capacity_bytes == 2 ** 217
    assert point.density == Fraction(1, 150)


def test_no_index():
    point = capacity_density(0)
    assert point.capacity_bytes == Fraction(55, 2)
    assert point.density == Fraction(220, 150)


def test_ten_base_index():
    assert capacity_density(10).capacity_bytes == 26214400


def test_index_length_bounds():
    with pytest.raises(ConfigurationError):
        capacity_density(-1)
    with pytest.raises(ConfigurationError):
        capacity_density(111)
    with pytest.raises(ConfigurationError):
        capacity_density(0, strand_len=40, primer_len=20)


def test_table():
    table = capacity_table(step=10)
    assert [p.index_len for p in table] == list(range(0, 111, 10))
    capacities = [p.capacity_bits for p in table]
    assert capacities == sorted(capacities)
    densities = [p.density for p in table]
    assert densities == sorted(densities, reverse=True)
    assert [p.index_len for p in capacity_table(step=25)][-1] == 110
