"""Extraction, clustering, reconstruction and block decoding."""

import logging

import Levenshtein
import numpy as np
import pytest

from blockdna.exceptions import BlockDnaError, ConfigurationError, DecodeFailure
from blockdna.index_tree import elongate_primer
from blockdna.partition import add_patches, encode_data
from blockdna.pipeline import (DecoderConfig, cluster_payloads, decode_block, decode_file,
                               decode_partition, decode_with_candidates, extract_payloads,
                               extract_segment, locate_prefix, reconstruct)
from blockdna.updates import UpdatePatch, apply_patch
from blockdna.wetlab_sim import ChannelModel, Pool, sequence

from conftest import FWD, OTHER_FWD, REV, random_bytes

PATCH = UpdatePatch(0, 5, 0, b"HOWDY")


def _random_dna(length, seed):
    rng = np.random.default_rng(seed)
    return "".join("ACGT"[i] for i in rng.integers(0, 4, length))


def _substitute(s, positions):
    out = list(s)
    for p in positions:
        out[p] = "ACGT"[("ACGT".index(out[p]) + 1) % 4]
    return "".join(out)


@pytest.fixture
def patched(manifest):
    """Block 2 with one patch written as version 1."""
    return add_patches(manifest, [(2, PATCH)])


def _block_strands(encoded, block_no):
    return [s.sequence for s in encoded.strands if s.block_no == block_no]


def test_extract_clean_read(encoded):
    strand = encoded.strands[0].sequence
    found = extract_segment(strand, FWD, REV, expected_len=110)
    assert found.segment == strand[20:130]
    assert not found.is_background


def test_extract_tolerates_primer_errors(encoded):
    strand = encoded.strands[0].sequence
    read = _substitute(strand, [3])
    assert locate_prefix(read, FWD) == 20
    assert extract_segment(read, FWD, REV, 110).segment == strand[20:130]


def test_foreign_reads_are_background(encoded):
    strand = encoded.strands[0].sequence
    foreign = OTHER_FWD + strand[20:]
    segments, background = extract_payloads([strand, foreign, "ACGT" * 10], FWD, REV, 110)
    assert segments == [strand[20:130]]
    assert background == 2


def test_extract_rejects_wrong_segment_length(encoded):
    strand = encoded.strands[0].sequence
    assert extract_segment(strand, FWD, REV, expected_len=99).is_background


def test_identical_payloads_form_one_cluster():
    payload = _random_dna(110, 1)
    clusters = cluster_payloads([payload] * 3)
    assert len(clusters) == 1
    assert clusters[0].size == 3


def test_distant_payloads_stay_apart():
    clusters = cluster_payloads([_random_dna(110, s) for s in range(4)])
    assert [c.size for c in clusters] == [1, 1, 1, 1]


def test_noisy_copies_cluster_by_source():
    rng = np.random.default_rng(5)
    sources = [_random_dna(110, 100 + s) for s in range(5)]
    noisy = [_substitute(src, rng.choice(110, 2, replace=False))
             for src in sources for _ in range(20)]
    order = rng.permutation(len(noisy))
    clusters = cluster_payloads([noisy[i] for i in order])
    assert sorted(c.size for c in clusters) == [20] * 5
    for cluster in clusters:
        assert len({noisy.index(m) // 20 for m in cluster.members}) == 1


@pytest.mark.parametrize("exhaustive", [True, False])
def test_copy_without_shared_kmer_joins_its_cluster(exhaustive):
    payload = _random_dna(120, 6)
    # a substitution in every 12-base window
    copy = _substitute(payload, range(0, 120, 12))
    clusters = cluster_payloads([payload, copy], exhaustive=exhaustive)
    assert [c.size for c in clusters] == [2]


@pytest.mark.parametrize("exhaustive", [True, False])
def test_segment_joins_the_earliest_cluster_within_reach(exhaustive):
    a = _random_dna(110, 7)
    positions = list(range(0, 96, 4))
    b = _substitute(a, positions)
    c = _substitute(a, positions[:12])
    assert Levenshtein.distance(a, b) > 16
    clusters = cluster_payloads([b, a, c], exhaustive=exhaustive)
    assert [cluster.members for cluster in clusters] == [[b, c], [a]]


def test_cluster_threshold_validation():
    with pytest.raises(ConfigurationError):
        cluster_payloads(["ACGT"], threshold=1.5)


def test_reconstruct_identical_members():
    payload = _random_dna(110, 2)
    assert reconstruct([payload] * 4, 110) == payload


def test_reconstruct_outvotes_a_bad_copy():
    payload = _random_dna(110, 3)
    members = [payload] * 9 + [_substitute(payload, [5, 50, 90])]
    assert reconstruct(members, 110) == payload


def test_reconstruct_realigns_deletions():
    payload = _random_dna(110, 4)
    members = [payload[:p] + payload[p + 1:] for p in range(10, 101, 10)]
    members += [payload] * 3
    assert reconstruct(members, 110) == payload


def test_reconstruct_recovers_single_deletion_copies():
    rng = np.random.default_rng(11)
    recovered = 0
    for trial in range(100):
        payload = _random_dna(110, 1000 + trial)
        members = []
        for p in rng.integers(0, 110, 10):
            members.append(payload[:p] + payload[p + 1:])
        recovered += reconstruct(members, 110) == payload
    assert recovered >= 99


def test_reconstruct_rejects_empty_cluster():
    with pytest.raises(ValueError):
        reconstruct([], 110)


def test_decode_block_recovers_every_version(encoded, patched, data):
    reads = (_block_strands(encoded, 2) + _block_strands(patched, 2)) * 3
    result = decode_block(reads, patched.manifest, 2)
    original = data[512:768]
    assert result.original == original
    assert result.resolved == apply_patch(original, PATCH)
    assert result.chain.patches == [PATCH]
    assert result.report.missing == []
    assert result.report.discarded == 0


def test_decode_block_without_reads(manifest):
    with pytest.raises(DecodeFailure, match="no reads"):
        decode_block([], manifest, 0)


def test_decode_block_reports_lost_strands(encoded, manifest):
    reads = _block_strands(encoded, 1)[:10]
    with pytest.raises(DecodeFailure) as info:
        decode_block(reads, manifest, 1)
    assert info.value.block_no == 1
    assert info.value.missing == [(0, c) for c in range(10, 15)]


def test_misprimed_strands_are_outvoted(encoded, manifest, data):
    prefix = elongate_primer(FWD, manifest.tree, 2, manifest.tree_depth)
    misprimed = [prefix + s[len(prefix):] for s in _block_strands(encoded, 0)]
    reads = _block_strands(encoded, 2) * 5 + misprimed * 2
    result = decode_block(reads, manifest, 2, config=DecoderConfig(max_workers=4))
    assert result.original == data[512:768]
    assert result.report.discarded == 15


def test_discarded_reconstructions_are_logged(encoded, manifest, caplog):
    prefix = elongate_primer(FWD, manifest.tree, 2, manifest.tree_depth)
    misprimed = [prefix + s[len(prefix):] for s in _block_strands(encoded, 0)]
    with caplog.at_level(logging.WARNING, logger="blockdna.pipeline.decoder"):
        decode_block(_block_strands(encoded, 2) * 5 + misprimed * 2, manifest, 2)
    assert sum("Discarded" in r.getMessage() for r in caplog.records) == 15


def test_candidates_resolve_a_planted_conflict(encoded, manifest, data):
    prefix = elongate_primer(FWD, manifest.tree, 3, manifest.tree_depth)
    target = _block_strands(encoded, 3)
    foreign = {s.column: prefix + s.sequence[len(prefix):]
               for s in encoded.strands if s.block_no == 0 and s.column in (1, 6, 12)}
    reads = target * 5 + list(foreign.values()) * 10
    with pytest.raises(BlockDnaError):
        decode_block(reads, manifest, 3)
    result = decode_with_candidates(reads, manifest, 3, max_candidates=2)
    assert result.original == data[768:1024]
    assert 0 not in result.report.corrected


def test_candidates_recover_planted_conflicts(encoded, manifest, data):
    rng = np.random.default_rng(13)
    recovered = 0
    for _ in range(100):
        target = int(rng.integers(0, 4))
        source = int(rng.choice([b for b in range(5) if b != target]))
        columns = set(int(c) for c in rng.choice(15, 3, replace=False))
        prefix = elongate_primer(FWD, manifest.tree, target, manifest.tree_depth)
        planted = [prefix + s.sequence[len(prefix):] for s in encoded.strands
                   if s.block_no == source and s.column in columns]
        reads = _block_strands(encoded, target) * 5 + planted * 10
        try:
            result = decode_with_candidates(reads, manifest, target, max_candidates=2)
        except BlockDnaError:
            continue
        recovered += result.original == data[target * 256:(target + 1) * 256]
    assert recovered >= 95


def test_candidates_validation(encoded, manifest):
    with pytest.raises(ValueError):
        decode_with_candidates(_block_strands(encoded, 0), manifest, 0, max_candidates=0)
    with pytest.raises(DecodeFailure):
        decode_with_candidates([], manifest, 0)


def test_decode_partition(encoded, manifest, data):
    result = decode_partition(encoded.sequences() * 2, manifest)
    assert result.failures == {}
    assert sorted(result.blocks) == [0, 1, 2, 3, 4]
    assert decode_file(encoded.sequences() * 2, manifest) == data


def test_decode_partition_lists_failed_blocks(encoded, manifest):
    reads = [s for s in encoded.sequences() if not s.startswith(FWD + "A" + manifest.tree.leaf_index(4))]
    result = decode_partition(reads, manifest)
    assert list(result.failures) == [4]
    with pytest.raises(DecodeFailure):
        decode_file(reads, manifest)


def test_decode_file_from_noisy_reads(encoded, manifest, data):
    pool = Pool.from_sequences(encoded.sequences())
    reads = sequence(pool, 1500, ChannelModel(p_sub=0.005, p_ins=0.0025, p_del=0.0025, seed=9))
    assert decode_file(reads, manifest) == data


def test_decode_file_resolves_updates(encoded, patched, data):
    reads = (encoded.sequences() + patched.sequences()) * 2
    decoded = decode_file(reads, patched.manifest)
    expected = data[:512] + apply_patch(data[512:768], PATCH) + data[768:]
    assert decoded == expected
    assert decode_file(reads, patched.manifest, resolve_updates=False) == data


@pytest.mark.slow
def test_full_partition_roundtrip():
    text = random_bytes(587 * 256, seed=8)
    partition = encode_data(text, FWD, REV, tree_seed=3, randomizer_seed=4, name="alice")
    assert len(partition) == 8805
    result = decode_partition(partition.sequences() * 3, partition.manifest)
    assert result.failures == {}
    assert decode_file(partition.sequences() * 3, partition.manifest) == text
