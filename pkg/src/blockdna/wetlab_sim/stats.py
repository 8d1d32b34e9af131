from dataclasses import dataclass
from typing import Dict, Optional

from .pool import Pool, Provenance


@dataclass
class PoolStats:
    pool_name: str
    unique_sequences: int
    total_abundance: float
    original_mass: float = 0.0
    amplified_mass: float = 0.0
    misprimed_mass: float = 0.0
    max_abundance: float = 0.0
    min_abundance: float = 0.0

    @property
    def skew(self) -> float:
        """Largest over smallest non-zero abundance."""
        return self.max_abundance / self.min_abundance if self.min_abundance else 0.0


class PoolMonitor:
    """Collect and export statistics of named pools."""

    def __init__(self, pools: Optional[Dict[str, Pool]] = None):
        """Initializes the monitor with the pools to watch."""
        self.pools: Dict[str, Pool] = dict(pools or {})
        self._stats: Dict[str, PoolStats] = {}

    def add(self, name: str, pool: Pool) -> None:
        self.pools[name] = pool

    def collect_stats(self) -> Dict[str, PoolStats]:
        """Collect statistics from all watched pools."""
        for name, pool in self.pools.items():
            mass = pool.mass_by_provenance()
            present = pool.abundance[pool.abundance > 0]
            self._stats[name] = PoolStats(
                pool_name=name,
                unique_sequences=pool.unique_count,
                total_abundance=pool.total,
                original_mass=mass[Provenance.ORIGINAL],
                amplified_mass=mass[Provenance.AMPLIFIED],
                misprimed_mass=mass[Provenance.MISPRIMED],
                max_abundance=float(present.max()) if present.size else 0.0,
                min_abundance=float(present.min()) if present.size else 0.0,
            )
        return self._stats

    def export_metrics(self, format: str = 'prometheus') -> str:
        """Export metrics in a specified format."""
        if format != 'prometheus':
            raise ValueError("Unsupported format. Only 'prometheus' is supported.")

        self.collect_stats()
        lines = []
        for name, stats in self._stats.items():
            labels = f'pool_name="{name}"'
            lines.append(f'blockdna_pool_unique_sequences{{{labels}}} {stats.unique_sequences}')
            lines.append(f'blockdna_pool_total_abundance{{{labels}}} {stats.total_abundance:.6g}')
            for origin in Provenance:
                value = getattr(stats, f'{origin.value}_mass')
                lines.append(f'blockdna_pool_mass{{{labels}, provenance="{origin.value}"}} {value:.6g}')
            lines.append(f'blockdna_pool_abundance_skew{{{labels}}} {stats.skew:.6g}')

        return "\n".join(lines)
