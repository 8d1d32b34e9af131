"""PCR on simulated pools.

Abundances are expectations, so amplification is deterministic. A strand is a
template when its end carries the reverse primer site exactly and the 3' end
of the forward primer binds near its start: ``d`` is the edit distance
between the last ``anchor_len`` bases of the primer and the bases of the
strand they would pair with. Per cycle a template at distance ``d`` gains
``efficiency * misprime_decay**d`` copies per molecule, up to
``max_edit_distance``.

Every copy starts with the primer itself. Copies of a strand whose prefix
differs from the primer are therefore a new sequence, the primer followed by
the unchanged remainder of the strand; that variant is tagged misprimed and
is an exact template in later cycles.

With ``primer_budget`` set, a reaction can make at most that many times its
input mass and the per-cycle yield falls linearly as the budget is used up.
Without it every template grows by ``1 + rate`` per cycle.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import Levenshtein
import numpy as np

from .. import signals
from ..exceptions import ConfigurationError
from ..types import DnaString
from .pool import Pool, Provenance

logger = logging.getLogger(__name__)

PrimerPair = Tuple[DnaString, DnaString]

MIN_PRIMER_LEN = 20


@dataclass(frozen=True)
class PcrParams:
    """Reaction parameters.

    Attributes:
        cycles: Number of thermal cycles
        efficiency: Copies per exact template per cycle, in (0, 1]
        misprime_decay: Factor applied to the efficiency per edit of distance
        max_edit_distance: Templates farther than this are not copied
        anchor_len: 3'-terminal primer bases that have to bind
        primer_budget: Maximum product over input mass; None for unlimited
    """
    cycles: int = 18
    efficiency: float = 0.95
    misprime_decay: float = 0.25
    max_edit_distance: int = 3
    anchor_len: int = 20
    primer_budget: Optional[float] = None

    def __post_init__(self) -> None:
        if self.cycles < 0:
            raise ConfigurationError("PCR cycles must be non-negative", field_name="cycles")
        if not 0 < self.efficiency <= 1:
            raise ConfigurationError("PCR efficiency must lie in (0, 1]", field_name="efficiency")
        if not 0 <= self.misprime_decay < 1:
            raise ConfigurationError("Misprime decay must lie in [0, 1)", field_name="misprime_decay")
        if self.max_edit_distance < 0:
            raise ConfigurationError("max_edit_distance must be non-negative",
                                     field_name="max_edit_distance")
        if self.anchor_len < 1:
            raise ConfigurationError("anchor_len must be positive", field_name="anchor_len")
        if self.primer_budget is not None and self.primer_budget <= 0:
            raise ConfigurationError("primer_budget must be positive", field_name="primer_budget")

    def rate(self, distance: int, share: float = 1.0) -> float:
        """Copies per template per cycle at ``distance``; 0 beyond the cutoff."""
        if distance > self.max_edit_distance:
            return 0.0
        return self.efficiency * share * self.misprime_decay ** distance


def binding_distance(primer: DnaString, strand: DnaString, anchor_len: int = 20,
                     cutoff: Optional[int] = None) -> int:
    """Edit distance between the primer's 3' anchor and its site on ``strand``.

    With ``cutoff`` set, any distance above it is reported as ``cutoff + 1``.
    """
    start = len(primer) - min(anchor_len, len(primer))
    return Levenshtein.distance(primer[start:], strand[start:len(primer)], score_cutoff=cutoff)


# (primer, copies per template per cycle, rate of the primer's exact templates)
_Step = Optional[Tuple[DnaString, float, float]]


def _run(pool: Pool, plan: Sequence[_Step], params: PcrParams) -> Pool:
    sequences = list(pool.sequences)
    provenance = list(pool.provenance)
    index = {seq: i for i, seq in enumerate(sequences)}
    rates: List[float] = [0.0] * len(sequences)
    dest: List[int] = list(range(len(sequences)))
    for i, step in enumerate(plan):
        if step is None:
            continue
        primer, rate, exact_rate = step
        rates[i] = rate
        strand = sequences[i]
        if strand.startswith(primer):
            continue
        variant = primer + strand[len(primer):]
        j = index.get(variant)
        if j is None:
            j = len(sequences)
            index[variant] = j
            sequences.append(variant)
            provenance.append(Provenance.MISPRIMED)
            rates.append(exact_rate)
            dest.append(j)
        dest[i] = j

    abundance = np.zeros(len(sequences), dtype=np.float64)
    abundance[:len(pool)] = pool.abundance
    rate_arr = np.asarray(rates)
    dest_arr = np.asarray(dest, dtype=np.intp)
    budget = math.inf if params.primer_budget is None else params.primer_budget * pool.total
    produced = 0.0
    for _ in range(params.cycles):
        saturation = 1.0 if math.isinf(budget) else 1.0 - produced / budget
        if saturation <= 0:
            break
        copies = abundance * rate_arr * saturation
        made = float(copies.sum())
        if made <= 0:
            break
        if produced + made > budget:
            copies *= (budget - produced) / made
            made = budget - produced
        np.add.at(abundance, dest_arr, copies)
        produced += made

    if produced > 0:
        for i in np.flatnonzero((rate_arr > 0) & (dest_arr == np.arange(len(sequences)))):
            if provenance[i] is Provenance.ORIGINAL:
                provenance[i] = Provenance.AMPLIFIED
    logger.debug("PCR made %.4g copies into %d new sequences", produced, len(sequences) - len(pool))
    return Pool._from_distinct(sequences, abundance, provenance)


def _check_primer(primer: DnaString) -> None:
    if len(primer) < MIN_PRIMER_LEN:
        raise ConfigurationError(
            f"Forward primers must have at least {MIN_PRIMER_LEN} bases, got {len(primer)}",
            field_name="fwd")


def pcr(pool: Pool, fwd: DnaString, rev: DnaString, params: Optional[PcrParams] = None) -> Pool:
    """Amplify ``pool`` with one primer pair.

    Raises:
        ConfigurationError: If the forward primer is shorter than 20 bases
    """
    return multiplex_pcr(pool, [(fwd, rev)], params)


def multiplex_pcr(pool: Pool, primer_pairs: Sequence[PrimerPair],
                  params: Optional[PcrParams] = None) -> Pool:
    """Amplify with several primer pairs sharing one reaction.

    Each strand is copied by its best binding pair (smallest distance, earlier
    pair on ties). The pairs split the primer mass, so each works at
    ``1/len(primer_pairs)`` of the efficiency.
    """
    params = params or PcrParams()
    if not primer_pairs:
        raise ConfigurationError("multiplex PCR needs at least one primer pair")
    for fwd, _ in primer_pairs:
        _check_primer(fwd)
    if signals.SIGNAL_SUPPORT:
        signals.pre_pcr.send(pool, primers=list(primer_pairs), params=params)
    if params.cycles == 0 or not len(pool):
        result = pool.copy()
        if signals.SIGNAL_SUPPORT:
            signals.post_pcr.send(result, primers=list(primer_pairs), params=params)
        return result

    share = 1.0 / len(primer_pairs)
    cutoff = params.max_edit_distance
    plan: List[_Step] = []
    for strand in pool.sequences:
        best: _Step = None
        best_distance = cutoff + 1
        for fwd, rev in primer_pairs:
            if len(strand) < len(fwd) + len(rev) or not strand.endswith(rev):
                continue
            distance = binding_distance(fwd, strand, params.anchor_len, cutoff)
            if distance < best_distance:
                best_distance = distance
                best = (fwd, params.rate(distance, share), params.rate(0, share))
        plan.append(best)
    result = _run(pool, plan, params)
    if signals.SIGNAL_SUPPORT:
        signals.post_pcr.send(result, primers=list(primer_pairs), params=params)
    return result


def two_stage_pcr(pool: Pool, main_pair: PrimerPair, elongated_fwd: DnaString,
                  params1: Optional[PcrParams] = None,
                  params2: Optional[PcrParams] = None) -> Pool:
    """Amplify the partition with its main primers, then the block with the elongated one.

    Raises:
        ConfigurationError: If ``elongated_fwd`` does not extend the main forward primer
    """
    main_fwd, rev = main_pair
    if not elongated_fwd.startswith(main_fwd):
        raise ConfigurationError("The elongated primer must start with the main forward primer",
                                 field_name="elongated_fwd")
    params1 = params1 or PcrParams(cycles=10)
    params2 = params2 or PcrParams()
    stage1 = pcr(pool, main_fwd, rev, params1)
    return pcr(stage1, elongated_fwd, rev, params2)
