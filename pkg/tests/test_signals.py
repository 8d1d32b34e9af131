"""Pipeline events delivered through blinker."""

import pytest

pytest.importorskip("blinker")

from blockdna import signals
from blockdna.partition import build_strands, encode_data
from blockdna.pipeline import decode_block
from blockdna.wetlab_sim import PcrParams, Pool, pcr

from conftest import FWD, REV, random_bytes


def test_signal_support_is_detected():
    assert signals.SIGNAL_SUPPORT


def test_encoding_and_decoding_events(manifest):
    built, decoded = [], []

    def on_built(sender, **kwargs):
        built.append((kwargs["block_no"], kwargs["version"], len(kwargs["strands"])))

    def on_decoded(sender, **kwargs):
        decoded.append((kwargs["block_no"], kwargs["version"]))

    signals.strands_built.connect(on_built)
    signals.unit_decoded.connect(on_decoded)
    try:
        strands = build_strands(1, 0, random_bytes(256, 3), manifest)
        decode_block([s.sequence for s in strands] * 2, manifest, 1)
    finally:
        signals.strands_built.disconnect(on_built)
        signals.unit_decoded.disconnect(on_decoded)
    assert built == [(1, 0, 15)]
    assert decoded == [(1, 0)]


def test_pcr_events():
    seen = []

    def on_post(sender, **kwargs):
        seen.append((sender.total, kwargs["primers"]))

    signals.post_pcr.connect(on_post)
    try:
        pcr(Pool([FWD + "ACGT" * 20 + REV]), FWD, REV, PcrParams(cycles=1, efficiency=1.0,
                                                                 primer_budget=None))
    finally:
        signals.post_pcr.disconnect(on_post)
    assert seen == [(2.0, [(FWD, REV)])]


def test_handler_listens_to_one_sender(manifest):
    other = encode_data(random_bytes(300, seed=4), FWD, REV, tree_seed=7, randomizer_seed=8,
                        name="other").manifest
    seen = []

    @signals.handler(signals.strands_built)
    def on_built(sender, **kwargs):
        seen.append((sender.name, kwargs["block_no"]))

    assert on_built.apply(manifest) is manifest
    try:
        build_strands(0, 0, random_bytes(256, 5), other)
        build_strands(2, 0, random_bytes(256, 6), manifest)
    finally:
        signals.strands_built.disconnect(on_built)
    assert seen == [("test", 2)]


def test_sends_are_skipped_without_signal_support(monkeypatch, manifest):
    seen = []

    def on_built(sender, **kwargs):
        seen.append(kwargs["block_no"])

    signals.strands_built.connect(on_built)
    monkeypatch.setattr(signals, "SIGNAL_SUPPORT", False)
    try:
        build_strands(1, 0, random_bytes(256, 3), manifest)
    finally:
        signals.strands_built.disconnect(on_built)
    assert seen == []

