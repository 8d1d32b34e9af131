"""Main primer design rules.

Admitted primers keep a GC fraction between ``gc_low`` and ``gc_high``, have
no run longer than ``max_homopolymer`` and sit at least
``min_pairwise_hamming`` substitutions away from every other admitted primer.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from Bio.SeqUtils import MeltingTemp

from ..codec import BASES, STRONG, WEAK, gc_fraction, hamming, longest_homopolymer
from ..exceptions import ConfigurationError, ValidationError
from ..types import DnaString

logger = logging.getLogger(__name__)


@dataclass
class PrimerReport:
    """Outcome of :func:`validate_primer_pair`.

    Attributes:
        checks: Check name -> passed
        failures: Description of each failed check
        tm: Wallace melting temperature of each primer (informational)
        min_distance: Smallest Hamming distance to another primer, if any
    """
    checks: Dict[str, bool] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)
    tm: Dict[str, float] = field(default_factory=dict)
    min_distance: Optional[int] = None

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def record(self, check: str, passed: bool, message: str) -> None:
        self.checks[check] = self.checks.get(check, True) and passed
        if not passed:
            self.failures.append(message)


@dataclass
class PrimerLibrary:
    """Primer pairs already in use, with the rules new pairs must meet."""
    pairs: List[Tuple[DnaString, DnaString]] = field(default_factory=list)
    min_pairwise_hamming: int = 6
    gc_low: float = 0.48
    gc_high: float = 0.52
    max_homopolymer: int = 3
    primer_len: int = 20

    def primers(self) -> List[DnaString]:
        return [p for pair in self.pairs for p in pair]

    def admit(self, fwd: DnaString, rev: DnaString) -> PrimerReport:
        """Validate a pair and add it to the library.

        Raises:
            ValidationError: If the pair breaks a rule
        """
        report = validate_primer_pair(fwd, rev, self)
        if not report.ok:
            raise ValidationError("Primer pair rejected: " + "; ".join(report.failures),
                                  errors={k: False for k, v in report.checks.items() if not v})
        self.pairs.append((fwd, rev))
        return report

    def generate_pair(self, rng: np.random.Generator, attempts: int = 10000) -> Tuple[DnaString, DnaString]:
        """Draw and admit a random pair that satisfies the library rules.

        Raises:
            ConfigurationError: If no pair is found within ``attempts`` draws
        """
        for _ in range(attempts):
            fwd, rev = self._draw(rng), self._draw(rng)
            if validate_primer_pair(fwd, rev, self).ok:
                self.pairs.append((fwd, rev))
                logger.debug("Generated primer pair %s / %s", fwd, rev)
                return fwd, rev
        raise ConfigurationError(f"No admissible primer pair found in {attempts} draws")

    def _draw(self, rng: np.random.Generator) -> DnaString:
        target = round(self.primer_len * (self.gc_low + self.gc_high) / 2)
        strong = set(rng.permutation(self.primer_len)[:target].tolist())
        strong_letters = sorted(STRONG)
        weak_letters = sorted(WEAK)
        return "".join(
            strong_letters[rng.integers(2)] if i in strong else weak_letters[rng.integers(2)]
            for i in range(self.primer_len))


def melting_temperature(primer: DnaString) -> float:
    """Wallace rule: 2 degrees per A/T and 4 per G/C."""
    return float(MeltingTemp.Tm_Wallace(primer))


def validate_primer_pair(fwd: DnaString, rev: DnaString, library: PrimerLibrary) -> PrimerReport:
    """Check a primer pair against the library rules. Failures are reported, not raised."""
    report = PrimerReport()
    for label, primer in (("fwd", fwd), ("rev", rev)):
        report.record("length", len(primer) == library.primer_len and not set(primer) - set(BASES),
                      f"{label} primer must be {library.primer_len} bases over ACGT")
        gc = gc_fraction(primer)
        report.record("gc", library.gc_low <= gc <= library.gc_high,
                      f"{label} primer GC {gc:.2f} outside [{library.gc_low}, {library.gc_high}]")
        run = longest_homopolymer(primer)
        report.record("homopolymer", run <= library.max_homopolymer,
                      f"{label} primer has a run of {run}")
        report.tm[label] = melting_temperature(primer) if primer else 0.0

    distances = []
    for label, primer in (("fwd", fwd), ("rev", rev)):
        others = list(library.primers())
        if label == "fwd":
            others.append(rev)
        for other in others:
            if len(other) == len(primer):
                distances.append(hamming(primer, other))
    if distances:
        report.min_distance = min(distances)
        report.record("distance", report.min_distance >= library.min_pairwise_hamming,
                      f"primer within {report.min_distance} substitutions of another primer")
    else:
        report.checks.setdefault("distance", True)
    return report
