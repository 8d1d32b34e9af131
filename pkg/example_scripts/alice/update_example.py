"""Patch a stored block in place and read back every version."""

from blockdna import (ChannelModel, MeasurementModel, Pool, UpdatePatch, add_patches,
                      decode_block, diff_patch, elongate_primer, encode_data, sequence,
                      two_stage_pcr)
from blockdna.wetlab_sim import mix_measure_then_amplify

FWD = "CTACACGACGCTCTTCCGAT"
REV = "AGATCGGAAGAGCACACGTC"


def main():
    block = b"HELLOWORLD".ljust(256, b".")
    encoded = encode_data(block * 3, FWD, REV, tree_seed=3, randomizer_seed=4, name="patched")

    # An explicit patch and one derived from the edited text
    first = UpdatePatch(del_start=0, del_len=5, ins_pos=0, ins_bytes=b"HOWDY")
    second = diff_patch(b"HOWDY" + block[5:], b"HOWDYTHERE" + block[10:])
    updates = add_patches(encoded.manifest, [(1, first), (1, second)])
    print(f"{len(updates)} update strands; block 1 now holds "
          f"{updates.manifest.version_count(1)} versions")

    stored = Pool.from_sequences(encoded.sequences(), seed=1, bias_sigma=0.1)
    fresh = Pool.from_sequences(updates.sequences(), abundance=50000.0)
    mixed = mix_measure_then_amplify(stored, fresh, (FWD, REV), MeasurementModel(0.1), seed=2)

    manifest = updates.manifest
    elongated = elongate_primer(FWD, manifest.tree, 1, manifest.tree_depth)
    reads = sequence(two_stage_pcr(mixed, (FWD, REV), elongated), 600, ChannelModel(seed=3))
    result = decode_block(reads, manifest, 1)
    print("original:", result.original[:20])
    for version, patch in enumerate(result.chain.patches, start=1):
        print(f"version {version}:", patch)
    print("resolved:", result.resolved[:20])


if __name__ == "__main__":
    main()
