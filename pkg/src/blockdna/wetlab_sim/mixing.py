"""Mixing an update pool into a data pool.

Update strands are synthesized separately and usually arrive far more
concentrated per oligo than the stored data. Both protocols dilute the update
pool so that, per distinct oligo, the two pools contribute comparable mass.
"""

import logging
from typing import Callable, Dict, List, Optional

from .. import signals
from ..exceptions import PoolError
from .pcr import PcrParams, PrimerPair, pcr
from .pool import Pool
from .sequencing import MeasurementModel, measure

logger = logging.getLogger(__name__)

MIXING_CYCLES = 15

MixingProtocol = Callable[..., Pool]


def _check_pools(data_pool: Pool, update_pool: Pool) -> None:
    if data_pool.total <= 0 or update_pool.total <= 0:
        raise PoolError("Both pools must be non-empty to be mixed")


def _update_dilution(data_mass: float, data_oligos: int,
                     update_mass: float, update_oligos: int) -> float:
    """Factor that brings the update pool's per-oligo mass to the data pool's."""
    return (data_mass / data_oligos) / (update_mass / update_oligos)


def mix_measure_then_amplify(data_pool: Pool, update_pool: Pool, main_pair: PrimerPair,
                             model: Optional[MeasurementModel] = None,
                             params: Optional[PcrParams] = None, seed: int = 0) -> Pool:
    """Measure both pools, dilute the update pool, combine, then amplify.

    Args:
        data_pool: The stored partition
        update_pool: Freshly synthesized update strands
        main_pair: Main primers of the partition
        model: Measurement error model
        params: Amplification of the mixture; 15 cycles by default
        seed: Seed of the two measurements
    """
    _check_pools(data_pool, update_pool)
    params = params or PcrParams(cycles=MIXING_CYCLES)
    data_mass = measure(data_pool, model, seed)
    update_mass = measure(update_pool, model, seed + 1)
    factor = _update_dilution(data_mass, data_pool.unique_count, update_mass, update_pool.unique_count)
    logger.info("Diluting update pool by %.4g before mixing", factor)
    mixed = data_pool.merge(update_pool.scale(factor))
    result = pcr(mixed, main_pair[0], main_pair[1], params)
    if signals.SIGNAL_SUPPORT:
        signals.pools_mixed.send(result, protocol="measure-then-amplify", dilution=factor)
    return result


def mix_amplify_then_measure(data_pool: Pool, update_pool: Pool, main_pair: PrimerPair,
                             model: Optional[MeasurementModel] = None,
                             params: Optional[PcrParams] = None, seed: int = 0) -> Pool:
    """Amplify each pool on its own, measure, then mix by distinct-oligo count.

    The mixture carries the two pools in the mass ratio of their distinct
    oligo counts.
    """
    _check_pools(data_pool, update_pool)
    params = params or PcrParams(cycles=MIXING_CYCLES)
    data_amp = pcr(data_pool, main_pair[0], main_pair[1], params)
    update_amp = pcr(update_pool, main_pair[0], main_pair[1], params)
    data_mass = measure(data_amp, model, seed)
    update_mass = measure(update_amp, model, seed + 1)
    factor = _update_dilution(data_mass, data_pool.unique_count, update_mass, update_pool.unique_count)
    logger.info("Mixing amplified pools with update dilution %.4g", factor)
    result = data_amp.merge(update_amp.scale(factor))
    if signals.SIGNAL_SUPPORT:
        signals.pools_mixed.send(result, protocol="amplify-then-measure", dilution=factor)
    return result


class MixingProtocolRegistry:
    """Named mixing protocols, looked up by the command line and experiment configs."""

    _protocols: Dict[str, MixingProtocol] = {}

    @classmethod
    def register(cls, name: str, protocol: MixingProtocol) -> None:
        """Register a protocol.

        Args:
            name: The name to register the protocol under
            protocol: Callable taking (data_pool, update_pool, main_pair, model, params, seed)
        """
        cls._protocols[name] = protocol

    @classmethod
    def get(cls, name: str) -> MixingProtocol:
        """Get a protocol by name.

        Raises:
            ValueError: If no protocol of that name exists
        """
        if name in cls._protocols:
            return cls._protocols[name]
        raise ValueError(f"Unknown mixing protocol '{name}'. "
                         f"Available protocols: {cls.list_protocols()}.")

    @classmethod
    def list_protocols(cls) -> List[str]:
        return sorted(cls._protocols)


MixingProtocolRegistry.register("measure-then-amplify", mix_measure_then_amplify)
MixingProtocolRegistry.register("amplify-then-measure", mix_amplify_then_measure)
