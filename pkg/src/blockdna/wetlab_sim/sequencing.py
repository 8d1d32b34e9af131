"""Read sampling, the sequencing noise channel and concentration measurement."""

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .. import signals
from ..codec import BASES
from ..exceptions import ConfigurationError, PoolError
from ..types import Read
from .pool import Pool

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChannelModel:
    """Independent per-base substitution, insertion and deletion.

    An insertion puts a random base before the current one; a substitution
    always changes the base.
    """
    p_sub: float = 0.0
    p_ins: float = 0.0
    p_del: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("p_sub", "p_ins", "p_del"):
            value = getattr(self, name)
            if not 0 <= value < 1:
                raise ConfigurationError(f"{name} must lie in [0, 1), got {value}", field_name=name)
        if self.p_sub + self.p_ins + self.p_del >= 1:
            raise ConfigurationError("Channel error probabilities must sum to less than 1")

    @property
    def p_error(self) -> float:
        return self.p_sub + self.p_ins + self.p_del


@dataclass(frozen=True)
class MeasurementModel:
    """Concentration measurement with uniform multiplicative error in [1-e, 1+e]."""
    relative_error: float = 0.0

    def __post_init__(self) -> None:
        if not 0 <= self.relative_error < 1:
            raise ConfigurationError("relative_error must lie in [0, 1)", field_name="relative_error")


def _perturb(template: str, events: np.ndarray, channel: ChannelModel,
             rng: np.random.Generator) -> str:
    out: List[str] = []
    sub_cut = channel.p_sub
    del_cut = sub_cut + channel.p_del
    ins_cut = del_cut + channel.p_ins
    for base, u in zip(template, events):
        if u >= ins_cut:
            out.append(base)
        elif u < sub_cut:
            out.append(BASES[(BASES.index(base) + 1 + int(rng.integers(3))) % 4])
        elif u < del_cut:
            continue
        else:
            out.append(BASES[int(rng.integers(4))])
            out.append(base)
    return "".join(out)


def sequence(pool: Pool, n_reads: int, channel: Optional[ChannelModel] = None) -> List[Read]:
    """Sample ``n_reads`` reads in proportion to abundance and pass them through the channel.

    Raises:
        PoolError: If reads are requested from an empty pool
    """
    channel = channel or ChannelModel()
    if n_reads < 0:
        raise ConfigurationError("n_reads must be non-negative", field_name="n_reads")
    if n_reads == 0:
        return []
    total = pool.total
    if total <= 0:
        raise PoolError("Cannot sequence an empty pool")
    rng = np.random.default_rng(channel.seed)
    picks = rng.choice(len(pool), size=n_reads, p=pool.abundance / total)
    templates = [pool.sequences[i] for i in picks]
    if channel.p_error == 0:
        reads = templates
    else:
        lengths = np.fromiter((len(t) for t in templates), dtype=np.int64, count=n_reads)
        draws = rng.random(int(lengths.sum()))
        bounds = np.concatenate([[0], np.cumsum(lengths)])
        hit = np.add.reduceat(draws < channel.p_error, bounds[:-1]) if draws.size else np.zeros(0)
        reads = []
        for r, template in enumerate(templates):
            if hit[r]:
                reads.append(_perturb(template, draws[bounds[r]:bounds[r + 1]], channel, rng))
            else:
                reads.append(template)
    logger.info("Sampled %d reads from %d sequences", n_reads, len(pool))
    if signals.SIGNAL_SUPPORT:
        signals.reads_sampled.send(pool, reads=reads, channel=channel)
    return reads


def measure(pool: Pool, model: Optional[MeasurementModel] = None, seed: int = 0) -> float:
    """Measured total abundance: the truth times a uniform factor in [1-e, 1+e]."""
    model = model or MeasurementModel()
    if model.relative_error == 0:
        return pool.total
    rng = np.random.default_rng(seed)
    return pool.total * float(rng.uniform(1 - model.relative_error, 1 + model.relative_error))
