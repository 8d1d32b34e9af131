"""Retrieve one block of a stored file, with and without its elongated primer.

Encodes story.txt, amplifies the pool once with the main primers and once
with the two-stage protocol, and compares how many reads of each readout
carry the wanted block.
"""

from pathlib import Path

from blockdna import (ChannelModel, Pool, compute_metrics, decode_with_candidates, elongate_primer,
                      encode_data, pcr, sequence, two_stage_pcr)

FWD = "CTACACGACGCTCTTCCGAT"
REV = "AGATCGGAAGAGCACACGTC"
TARGET = 3


def main():
    data = (Path(__file__).parent / "story.txt").read_bytes()
    encoded = encode_data(data, FWD, REV, tree_seed=3, randomizer_seed=4, name="alice")
    manifest = encoded.manifest
    print(f"Encoded {len(data)} bytes as {manifest.block_count} blocks, {len(encoded)} strands")

    pool = Pool.from_sequences(encoded.sequences(), bias_sigma=0.1, seed=1)
    elongated = elongate_primer(FWD, manifest.tree, TARGET, manifest.tree_depth)
    print(f"Elongated primer for block {TARGET}: {elongated}")

    readouts = {
        "main primers": pcr(pool, FWD, REV),
        "two-stage": two_stage_pcr(pool, (FWD, REV), elongated),
    }
    metrics = {}
    for label, product in readouts.items():
        reads = sequence(product, 2000, ChannelModel(p_sub=0.001, seed=2))
        metrics[label] = compute_metrics(reads, manifest, TARGET, encoded.strands)
        print(f"{label:>12}: {100 * metrics[label].on_target_fraction:5.1f}% on target, "
              f"{metrics[label].unwanted_ratio:.2f} unwanted reads per wanted read")
        if label == "two-stage":
            block = decode_with_candidates(reads[:225], manifest, TARGET)
            print(block.resolved.rstrip(b"\x00").decode("utf-8", errors="replace"))

    factor = metrics["two-stage"].cost_reduction_factor(metrics["main primers"])
    print(f"Sequencing cost reduced {factor:.1f}x")


if __name__ == "__main__":
    main()
