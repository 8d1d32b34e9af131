"""Command line driver.

Every command reads and writes plain files: manifests and configs are YAML,
pools are ``abundance<TAB>sequence`` lines, reads are one per line (FASTQ is
accepted as input). Output paths default to ``BLOCKDNA_OUTPUT_DIR`` or the
working directory.
"""

import csv
import functools
import io
import logging
import sys
from pathlib import Path
from typing import Any, Callable, List, Optional, Tuple

import click
import yaml

from .analysis import capacity_table
from .config import ExperimentConfig, as_dict, resolve_output_dir
from .exceptions import BlockDnaError
from .index_tree import elongate_primer
from .logging import logger as package_logger
from .partition import PartitionManifest, add_patches, encode_data
from .pipeline import (DecoderConfig, decode_block, decode_file, decode_partition,
                       decode_with_candidates, histogram_csv, reference_from_decode,
                       stats_histogram)
from .updates import VersionChain, load_patch_document, resolve_chain
from .wetlab_sim import (ChannelModel, MeasurementModel, MixingProtocolRegistry, PcrParams, Pool,
                         PoolMonitor, multiplex_pcr, pcr, read_reads, sequence, two_stage_pcr,
                         write_reads)


def _output(path: Optional[str], default_name: str) -> Path:
    if path:
        return Path(path)
    return resolve_output_dir(".") / default_name


def _handle_errors(fn: Callable) -> Callable:
    """Turn library and file errors into a one-line diagnostic and exit status 1."""
    @functools.wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return fn(*args, **kwargs)
        except BlockDnaError as exc:
            package_logger.error("%s failed: %s", fn.__name__, exc)
            field = getattr(exc, "field_name", None)
            raise click.ClickException(f"{exc}" + (f" (field: {field})" if field else "")) from exc
        except OSError as exc:
            package_logger.error("%s failed: %s", fn.__name__, exc)
            raise click.ClickException(f"{exc.filename or ''}: {exc.strerror or exc}") from exc
    return wrapper


def pcr_options(prefix: str = "", cycles: int = 18) -> Callable:
    """Click options for one set of PCR parameters."""
    def decorator(fn: Callable) -> Callable:
        options = [
            click.option(f"--{prefix}cycles", type=int, default=cycles, show_default=True,
                         help="Thermal cycles"),
            click.option(f"--{prefix}efficiency", type=float, default=0.95, show_default=True,
                         help="Copies per exact template per cycle"),
            click.option(f"--{prefix}decay", type=float, default=0.25, show_default=True,
                         help="Efficiency factor per edit of binding distance"),
            click.option(f"--{prefix}max-distance", type=int, default=3, show_default=True,
                         help="Largest binding distance still amplified"),
            click.option(f"--{prefix}budget", type=float, default=None,
                         help="Product mass limit relative to input; unlimited if unset"),
        ]
        for option in reversed(options):
            fn = option(fn)
        return fn
    return decorator


def _params(kwargs: dict, prefix: str = "") -> PcrParams:
    key = prefix.replace("-", "_")
    budget = kwargs.pop(f"{key}budget")
    return PcrParams(
        cycles=kwargs.pop(f"{key}cycles"),
        efficiency=kwargs.pop(f"{key}efficiency"),
        misprime_decay=kwargs.pop(f"{key}decay"),
        max_edit_distance=kwargs.pop(f"{key}max_distance"),
        primer_budget=budget or None,
    )


@click.group()
@click.option("-v", "--verbose", count=True, help="Repeat for more detail")
@click.option("--log-file", type=click.Path(dir_okay=False), help="Also log to this file")
def main(verbose: int, log_file: Optional[str]) -> None:
    """Block-addressable DNA storage simulator."""
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG)
    package_logger.set_level(level)
    if log_file:
        package_logger.add_file_handler(log_file)
    package_logger.debug("Logging at %s", logging.getLevelName(level))


@main.command()
@click.argument("input_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--fwd", required=True, help="Main forward primer")
@click.option("--rev", required=True, help="Reverse primer site")
@click.option("--tree-seed", type=int, default=0, show_default=True)
@click.option("--randomizer-seed", type=int, default=0, show_default=True)
@click.option("--depth", type=int, default=5, show_default=True, help="Index tree depth")
@click.option("--name", default="partition", show_default=True)
@click.option("--bias-sigma", type=float, default=0.0, show_default=True,
              help="Lognormal synthesis bias of the pool")
@click.option("--seed", type=int, default=0, show_default=True, help="Synthesis bias seed")
@click.option("-m", "--manifest", "manifest_path", help="Manifest output path")
@click.option("-o", "--pool", "pool_path", help="Pool output path")
@_handle_errors
def encode(input_file: str, fwd: str, rev: str, tree_seed: int, randomizer_seed: int, depth: int,
           name: str, bias_sigma: float, seed: int, manifest_path: Optional[str],
           pool_path: Optional[str]) -> None:
    """Encode INPUT_FILE into a manifest and a pool."""
    data = Path(input_file).read_bytes()
    encoded = encode_data(data, fwd, rev, tree_seed=tree_seed, randomizer_seed=randomizer_seed,
                          tree_depth=depth, name=name)
    encoded.manifest.save(_output(manifest_path, f"{name}.manifest.yaml"))
    Pool.from_sequences(encoded.sequences(), bias_sigma=bias_sigma, seed=seed).save(
        _output(pool_path, f"{name}.pool.tsv"))
    click.echo(f"{encoded.manifest.block_count} blocks, {len(encoded)} strands")


@main.command()
@click.argument("manifest_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("patch_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--concentration", type=float, default=1.0, show_default=True,
              help="Abundance of each update strand")
@click.option("-m", "--manifest", "manifest_path", help="Updated manifest output path")
@click.option("-o", "--pool", "pool_path", help="Update pool output path")
@_handle_errors
def patch(manifest_file: str, patch_file: str, concentration: float,
          manifest_path: Optional[str], pool_path: Optional[str]) -> None:
    """Write the patches of PATCH_FILE into free version slots."""
    manifest = PartitionManifest.load(manifest_file)
    updates = add_patches(manifest, load_patch_document(patch_file))
    updates.manifest.save(_output(manifest_path or manifest_file, ""))
    Pool.from_sequences(updates.sequences(), abundance=concentration).save(
        _output(pool_path, f"{manifest.name}.update.tsv"))
    click.echo(f"{len(updates)} update strands")


@main.command("pcr")
@click.argument("pool_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--fwd", required=True)
@click.option("--rev", required=True)
@pcr_options()
@click.option("-o", "--output", help="Output pool path")
@_handle_errors
def pcr_command(pool_file: str, fwd: str, rev: str, output: Optional[str], **kwargs: Any) -> None:
    """Amplify POOL_FILE with one primer pair."""
    result = pcr(Pool.load(pool_file), fwd, rev, _params(kwargs))
    result.save(_output(output, "pcr.pool.tsv"), include_provenance=True)
    click.echo(repr(result))


@main.command()
@click.argument("pool_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--pair", "pairs", nargs=2, multiple=True, required=True,
              help="Forward and reverse primer; repeat for every pair")
@pcr_options()
@click.option("-o", "--output", help="Output pool path")
@_handle_errors
def multiplex(pool_file: str, pairs: List[Tuple[str, str]], output: Optional[str],
              **kwargs: Any) -> None:
    """Amplify POOL_FILE with several primer pairs at once."""
    result = multiplex_pcr(Pool.load(pool_file), list(pairs), _params(kwargs))
    result.save(_output(output, "multiplex.pool.tsv"), include_provenance=True)
    click.echo(repr(result))


@main.command("two-stage")
@click.argument("pool_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--manifest", "manifest_file", required=True, type=click.Path(exists=True))
@click.option("--block", "block_no", type=int, required=True, help="Block to retrieve")
@click.option("--levels", type=int, help="Elongation levels; the full depth by default")
@pcr_options("stage1-", cycles=10)
@pcr_options("stage2-", cycles=18)
@click.option("-o", "--output", help="Output pool path")
@_handle_errors
def two_stage(pool_file: str, manifest_file: str, block_no: int, levels: Optional[int],
              output: Optional[str], **kwargs: Any) -> None:
    """Main-primer PCR followed by elongated-primer PCR for one block."""
    manifest = PartitionManifest.load(manifest_file)
    elongated = elongate_primer(manifest.fwd_primer, manifest.tree, block_no,
                                manifest.tree_depth if levels is None else levels)
    stage1 = _params(kwargs, "stage1-")
    stage2 = _params(kwargs, "stage2-")
    result = two_stage_pcr(Pool.load(pool_file), (manifest.fwd_primer, manifest.rev_primer),
                           elongated, stage1, stage2)
    result.save(_output(output, f"block{block_no}.pool.tsv"), include_provenance=True)
    click.echo(f"{elongated} {result!r}")


@main.command("sequence")
@click.argument("pool_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-n", "--reads", "n_reads", type=int, required=True)
@click.option("--p-sub", type=float, default=0.0, show_default=True)
@click.option("--p-ins", type=float, default=0.0, show_default=True)
@click.option("--p-del", type=float, default=0.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--output", help="Reads output path")
@_handle_errors
def sequence_command(pool_file: str, n_reads: int, p_sub: float, p_ins: float, p_del: float,
                     seed: int, output: Optional[str]) -> None:
    """Sample noisy reads from POOL_FILE."""
    channel = ChannelModel(p_sub=p_sub, p_ins=p_ins, p_del=p_del, seed=seed)
    reads = sequence(Pool.load(pool_file), n_reads, channel)
    write_reads(reads, _output(output, "reads.txt"))
    click.echo(f"{len(reads)} reads")


@main.command()
@click.argument("data_pool", type=click.Path(exists=True, dir_okay=False))
@click.argument("update_pool", type=click.Path(exists=True, dir_okay=False))
@click.option("--manifest", "manifest_file", required=True, type=click.Path(exists=True))
@click.option("--protocol", type=click.Choice(MixingProtocolRegistry.list_protocols()),
              default="measure-then-amplify", show_default=True)
@click.option("--relative-error", type=float, default=0.0, show_default=True,
              help="Concentration measurement error bound")
@click.option("--seed", type=int, default=0, show_default=True)
@pcr_options(cycles=15)
@click.option("-o", "--output", help="Output pool path")
@_handle_errors
def mix(data_pool: str, update_pool: str, manifest_file: str, protocol: str, relative_error: float,
        seed: int, output: Optional[str], **kwargs: Any) -> None:
    """Mix an update pool into a data pool."""
    manifest = PartitionManifest.load(manifest_file)
    mixer = MixingProtocolRegistry.get(protocol)
    result = mixer(Pool.load(data_pool), Pool.load(update_pool),
                   (manifest.fwd_primer, manifest.rev_primer),
                   MeasurementModel(relative_error), _params(kwargs), seed)
    result.save(_output(output, "mixed.pool.tsv"), include_provenance=True)
    click.echo(repr(result))


@main.command()
@click.argument("reads_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--manifest", "manifest_file", required=True, type=click.Path(exists=True))
@click.option("--block", "block_no", type=int, help="Decode one block; the whole file otherwise")
@click.option("--main-primer", is_flag=True, help="The readout was amplified with the main primer")
@click.option("--max-candidates", type=int, default=1, show_default=True,
              help="Reconstructions tried per conflicting address")
@click.option("--workers", type=int, help="Reconstruction threads")
@click.option("-o", "--output", help="Output directory")
@_handle_errors
def decode(reads_file: str, manifest_file: str, block_no: Optional[int], main_primer: bool,
           max_candidates: int, workers: Optional[int], output: Optional[str]) -> None:
    """Recover data from READS_FILE."""
    manifest = PartitionManifest.load(manifest_file)
    reads = read_reads(reads_file)
    out_dir = Path(output) if output else resolve_output_dir(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    config = DecoderConfig(max_workers=workers)
    if block_no is None:
        data = decode_file(reads, manifest, config)
        (out_dir / f"{manifest.name}.bin").write_bytes(data)
        click.echo(f"{len(data)} bytes")
        return
    fwd = manifest.fwd_primer if main_primer else None
    if max_candidates > 1:
        block = decode_with_candidates(reads, manifest, block_no, max_candidates, fwd, config)
    else:
        block = decode_block(reads, manifest, block_no, fwd, config)
    (out_dir / f"block{block_no}.v0.bin").write_bytes(block.original)
    (out_dir / f"block{block_no}.bin").write_bytes(block.resolved)
    report = block.report
    (out_dir / f"block{block_no}.report.yaml").write_text(yaml.safe_dump({
        "block_no": block_no,
        "versions": len(block.chain.patches) + 1,
        "reads": report.reads,
        "extracted": report.extracted,
        "background": report.background,
        "clusters": report.clusters,
        "quarantined": report.quarantined,
        "discarded": report.discarded,
        "corrected": {int(v): cols for v, cols in report.corrected.items()},
        "missing": [list(a) for a in report.missing],
    }, sort_keys=False), encoding="utf-8")
    click.echo(block.resolved.rstrip(b"\x00").decode("utf-8", errors="replace"))


@main.command()
@click.argument("reads_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--manifest", "manifest_file", required=True, type=click.Path(exists=True))
@click.option("--pool", "pool_files", multiple=True, type=click.Path(exists=True),
              help="Also print statistics of these pools in Prometheus format")
@click.option("-o", "--output", help="CSV output path; stdout by default")
@_handle_errors
def stats(reads_file: str, manifest_file: str, pool_files: Tuple[str, ...],
          output: Optional[str]) -> None:
    """Per-block read histogram of a whole-partition readout, as CSV."""
    manifest = PartitionManifest.load(manifest_file)
    reads = read_reads(reads_file)
    histogram = []
    if reads:
        reference = reference_from_decode(decode_partition(reads, manifest), manifest)
        histogram = stats_histogram(reads, manifest, reference)
    text = histogram_csv(histogram)
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    if pool_files:
        monitor = PoolMonitor({Path(p).name: Pool.load(p) for p in pool_files})
        click.echo(monitor.export_metrics("prometheus"))


@main.command()
@click.option("--strand-len", type=int, default=150, show_default=True)
@click.option("--primer-len", type=int, default=20, show_default=True)
@click.option("--step", type=int, default=1, show_default=True)
def analyze(strand_len: int, primer_len: int, step: int) -> None:
    """Capacity and density of one partition per index length, as CSV."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["index_len", "capacity_bytes", "density_bits_per_base"])
    try:
        points = capacity_table(strand_len, primer_len, step)
    except BlockDnaError as exc:
        raise click.ClickException(str(exc)) from exc
    for point in points:
        writer.writerow([point.index_len, f"{float(point.capacity_bytes):.6g}",
                         f"{float(point.density):.6f}"])
    click.echo(buffer.getvalue(), nl=False)


@main.command()
@click.argument("config_file", type=click.Path(exists=True, dir_okay=False))
@_handle_errors
def run(config_file: str) -> None:
    """Run the scripted experiment described by CONFIG_FILE."""
    config = ExperimentConfig.load(config_file)
    out_dir = config.output_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    data = config.input.read_bytes()

    encoded = encode_data(data, config.fwd_primer, config.rev_primer, tree_seed=config.tree_seed,
                          randomizer_seed=config.randomizer_seed, tree_depth=config.tree_depth,
                          name=config.name)
    synthesis = config.synthesis
    pool = Pool.from_sequences(encoded.sequences(), synthesis.abundance,
                               synthesis.bias_sigma, synthesis.seed)
    manifest = encoded.manifest
    main_pair = (config.fwd_primer, config.rev_primer)
    if config.patches:
        updates = add_patches(manifest, config.patches)
        manifest = updates.manifest
        update_pool = Pool.from_sequences(updates.sequences(),
                                          synthesis.abundance * config.mixing.concentration,
                                          synthesis.bias_sigma, synthesis.seed + 1)
        try:
            mixer = MixingProtocolRegistry.get(config.mixing.protocol)
        except ValueError as exc:
            raise click.ClickException(str(exc)) from exc
        pool = mixer(pool, update_pool, main_pair, config.mixing.measurement,
                     config.mixing.pcr, config.mixing.seed)
    manifest.save(out_dir / f"{config.name}.manifest.yaml")

    elongated = elongate_primer(config.fwd_primer, manifest.tree, config.target_block,
                                manifest.tree_depth)
    product = two_stage_pcr(pool, main_pair, elongated, config.stage1, config.stage2)
    reads = sequence(product, config.reads, config.channel)
    write_reads(reads, out_dir / "reads.txt")

    block = decode_with_candidates(reads, manifest, config.target_block, config.max_candidates,
                                   config=config.decoder)
    (out_dir / f"block{config.target_block}.bin").write_bytes(block.resolved)

    start = config.target_block * 256
    expected_original = data[start:start + 256].ljust(256, b"\x00")
    expected = resolve_chain(VersionChain(expected_original,
                                          [p for b, p in config.patches if b == config.target_block]))
    matches = block.resolved == expected
    summary = dict(as_dict(config), strands=len(encoded), reads_written=len(reads),
                   decoded_versions=len(block.chain.patches) + 1, matches_input=matches)
    (out_dir / "result.yaml").write_text(yaml.safe_dump(summary, sort_keys=False), encoding="utf-8")
    package_logger.info("Experiment %s: %d strands, %d reads, results in %s", config.name,
                        len(encoded), len(reads), out_dir)
    click.echo(block.resolved.rstrip(b"\x00").decode("utf-8", errors="replace"))
    if not matches:
        package_logger.warning("Block %d decoded to different contents than the input",
                               config.target_block)
        click.echo("decoded block differs from the input", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
