"""Strand framing, manifests, primer rules and file encoding."""

import numpy as np
import pytest

from blockdna.codec import base4
from blockdna.exceptions import (AddressError, ConfigurationError, MalformedPayloadError,
                                 SizeError, ValidationError, VersionOverflowError)
from blockdna.partition import (DEFAULT_LAYOUT, PartitionLayout, PartitionManifest, PrimerLibrary,
                                StrandRecord, StrandReject, add_patches, block_address,
                                build_strands, encode_data, iter_blocks, melting_temperature,
                                open_unit, parse_strand, seal_unit, validate_primer_pair)
from blockdna.partition.strands import REJECT_LENGTH, REJECT_PRIMER, REJECT_REVERSE, REJECT_SYNC
from blockdna.updates import UpdatePatch

from conftest import FWD, OTHER_FWD, REV, random_bytes


@pytest.fixture
def alice():
    """Manifest of a 587-block partition; nothing is encoded."""
    return PartitionManifest(FWD, REV, tree_seed=3, randomizer_seed=4, block_count=587,
                             name="alice")


def test_layout_offsets():
    offsets = DEFAULT_LAYOUT.offsets()
    assert offsets["fwd_primer"] == slice(0, 20)
    assert offsets["sync"] == slice(20, 21)
    assert offsets["unit_index"] == slice(21, 31)
    assert offsets["version"] == slice(31, 32)
    assert offsets["intra_index"] == slice(32, 34)
    assert offsets["payload"] == slice(34, 130)
    assert offsets["rev_primer"] == slice(130, 150)
    assert DEFAULT_LAYOUT.prefix_len == 32
    assert DEFAULT_LAYOUT.tree_depth == 5
    DEFAULT_LAYOUT.check_ecc()


def test_layout_must_fill_the_strand():
    with pytest.raises(ConfigurationError):
        PartitionLayout(payload_len=95)
    with pytest.raises(ConfigurationError):
        PartitionLayout(payload_len=92, strand_len=146).check_ecc()


def test_unit_sealing_roundtrip():
    block = random_bytes(256, seed=2)
    unit = seal_unit(block, 7, 1, seed=99)
    assert len(unit) == 264
    assert open_unit(unit, 7, 1, seed=99) == block
    with pytest.raises(MalformedPayloadError):
        open_unit(unit, 7, 2, seed=99)
    with pytest.raises(SizeError):
        seal_unit(block[:-1], 7, 1, seed=99)


def test_strand_shape(alice):
    strands = build_strands(531, 0, random_bytes(256), alice)
    assert len(strands) == 15
    assert all(len(s.sequence) == 150 for s in strands)
    assert [s.intra_index for s in strands] == [base4(c, 2) for c in range(15)]
    for s in strands:
        assert s.sequence.startswith(FWD + "A" + alice.tree.leaf_index(531) + "A")
        assert s.sequence.endswith(REV)


def test_versions_differ_only_in_the_version_base(alice):
    v0 = build_strands(531, 0, random_bytes(256, 1), alice)
    v1 = build_strands(531, 1, random_bytes(256, 2), alice)
    for a, b in zip(v0, v1):
        differing = [i for i in range(32) if a.sequence[i] != b.sequence[i]]
        assert differing == [31]
    assert v0[0].version_base == "A"
    assert v1[0].version_base == "C"


def test_block_addresses(alice):
    addresses = [block_address(alice, 12, v) for v in range(4)]
    assert len({a[:11] for a in addresses}) == 1
    assert [a[11] for a in addresses] == list("ACGT")
    prefixes = {block_address(alice, b, 0)[:11] for b in range(alice.block_count)}
    assert len(prefixes) == alice.block_count
    with pytest.raises(AddressError):
        block_address(alice, 12, 4)


def test_too_many_versions(alice):
    with pytest.raises(VersionOverflowError):
        build_strands(0, 4, bytes(256), alice)


def test_parse_inverts_build(alice):
    for s in build_strands(200, 2, random_bytes(256, 5), alice):
        parsed = parse_strand(s.sequence, alice)
        assert isinstance(parsed, StrandRecord)
        assert (parsed.block_no, parsed.version, parsed.column, parsed.payload) == (
            200, 2, s.column, s.payload)


def test_parse_rejects(alice):
    strand = build_strands(3, 0, bytes(256), alice)[0].sequence
    cases = {
        REJECT_LENGTH: strand[:-1],
        REJECT_PRIMER: OTHER_FWD + strand[20:],
        REJECT_REVERSE: strand[:130] + OTHER_FWD,
        REJECT_SYNC: strand[:20] + "C" + strand[21:],
    }
    for reason, sequence in cases.items():
        rejected = parse_strand(sequence, alice)
        assert isinstance(rejected, StrandReject)
        assert not rejected
        assert rejected.reason == reason


def test_manifest_roundtrip(alice, tmp_path):
    manifest = alice.with_versions({531: 2})
    path = tmp_path / "alice.manifest.yaml"
    manifest.save(path)
    loaded = PartitionManifest.load(path)
    assert loaded == manifest
    assert loaded.version_count(531) == 2
    assert loaded.version_count(0) == 1
    assert loaded.tree == alice.tree


def test_manifest_validation(alice):
    with pytest.raises(ValidationError):
        PartitionManifest.from_dict({"fwd_primer": FWD})
    with pytest.raises(ConfigurationError):
        PartitionManifest(FWD[:19], REV)
    with pytest.raises(ConfigurationError):
        PartitionManifest(FWD, REV, block_count=1025)
    with pytest.raises(AddressError):
        alice.version_count(587)
    with pytest.raises(ConfigurationError):
        alice.with_versions({1: 5})


def test_primer_rules():
    library = PrimerLibrary()
    assert validate_primer_pair("ACGT" * 5, "TGCA" * 5, library).ok
    library.admit("ACGT" * 5, "TGCA" * 5)
    assert not validate_primer_pair("ACGT" * 5, REV, library).checks["distance"]
    poly_a = validate_primer_pair("A" * 20, "TGCA" * 5, PrimerLibrary())
    assert not poly_a.checks["gc"]
    assert not poly_a.checks["homopolymer"]
    with pytest.raises(ValidationError):
        library.admit("A" * 20, REV)
    assert melting_temperature("ACGT" * 5) == 60.0


def test_generated_primer_pairs_obey_the_library():
    library = PrimerLibrary()
    rng = np.random.default_rng(1)
    for _ in range(3):
        fwd, rev = library.generate_pair(rng)
        assert len(fwd) == len(rev) == 20
    assert len(library.pairs) == 3
    primers = library.primers()
    assert all(sum(c in "GC" for c in p) == 10 for p in primers)


def test_iter_blocks_pads_the_last_block():
    blocks = list(iter_blocks(b"x" * 300))
    assert [len(b) for b in blocks] == [256, 256]
    assert blocks[1] == b"x" * 44 + bytes(212)


def test_encode_small_file(encoded, data):
    manifest = encoded.manifest
    assert manifest.block_count == 5
    assert manifest.data_length == len(data)
    assert len(encoded) == 75
    assert len(set(encoded.sequences())) == 75


def test_encode_rejects_oversized_files():
    with pytest.raises(AddressError):
        encode_data(bytes(4 * 256 + 1), FWD, REV, tree_seed=0, randomizer_seed=0, tree_depth=1,
                    layout=PartitionLayout(unit_index_len=2, payload_len=104))


def test_add_patches_fills_version_slots(manifest):
    updates = add_patches(manifest, [(1, UpdatePatch()), (1, UpdatePatch(0, 1, 0, b"z")),
                                     (3, UpdatePatch())])
    assert len(updates) == 45
    assert updates.manifest.version_count(1) == 3
    assert updates.manifest.version_count(3) == 2
    assert {s.version for s in updates.strands if s.block_no == 1} == {1, 2}
    more = add_patches(updates.manifest, [(1, UpdatePatch())])
    assert {s.version for s in more.strands} == {3}
    with pytest.raises(VersionOverflowError):
        add_patches(more.manifest, [(1, UpdatePatch())])
    with pytest.raises(AddressError):
        add_patches(manifest, [(5, UpdatePatch())])


@pytest.mark.slow
def test_full_partition_strand_count():
    text = random_bytes(587 * 256, seed=11)
    encoded = encode_data(text, FWD, REV, tree_seed=5, randomizer_seed=6, name="alice")
    assert encoded.manifest.block_count == 587
    assert len(encoded) == 8805
    patches = add_patches(encoded.manifest, [(531, UpdatePatch(0, 5, 0, b"HOWDY")),
                                             (12, UpdatePatch()), (400, UpdatePatch())])
    assert len(patches) == 45
