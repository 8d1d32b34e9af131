"""Greedy edit-distance clustering of extracted segments."""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set

import Levenshtein

from ..exceptions import ConfigurationError
from ..types import DnaString

logger = logging.getLogger(__name__)


@dataclass
class Cluster:
    """Segments believed to come from one strand.

    The representative is the member that founded the cluster.
    """
    representative: DnaString
    members: List[DnaString] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.members)

    def sort_key(self):
        return (-self.size, self.representative)


class _KmerIndex:
    """k-mer -> clusters whose representative contains it."""

    def __init__(self, k: int) -> None:
        self.k = k
        self._postings: Dict[str, Set[int]] = defaultdict(set)

    def add(self, cluster_id: int, representative: str) -> None:
        for i in range(len(representative) - self.k + 1):
            self._postings[representative[i:i + self.k]].add(cluster_id)

    def candidates(self, segment: str) -> List[int]:
        found: Set[int] = set()
        for i in range(len(segment) - self.k + 1):
            found.update(self._postings.get(segment[i:i + self.k], ()))
        return sorted(found)


def _first_within(segment: str, clusters: List[Cluster], cluster_ids: Iterable[int],
                  limit: int) -> Optional[int]:
    for cluster_id in cluster_ids:
        rep = clusters[cluster_id].representative
        if Levenshtein.distance(segment, rep, score_cutoff=limit) <= limit:
            return cluster_id
    return None


def cluster_payloads(payloads: Iterable[DnaString], threshold: float = 0.15,
                     kmer: int = 12, exhaustive: bool = True) -> List[Cluster]:
    """Single-pass greedy clustering.

    Each segment joins the earliest cluster whose representative lies within
    ``threshold * len(segment)`` edits, or founds a new cluster.

    With ``exhaustive`` off, representatives sharing a ``kmer``-mer with the
    segment are tried first and the segment joins the earliest of those within
    reach. Only when none is within reach are the remaining representatives
    scanned, so a segment still never founds a cluster while one is within
    the threshold.

    Returns:
        Clusters in founding order
    """
    if not 0 < threshold < 1:
        raise ConfigurationError("Clustering threshold must lie in (0, 1)", field_name="threshold")
    clusters: List[Cluster] = []
    exact: Dict[str, int] = {}
    index = _KmerIndex(kmer)
    for segment in payloads:
        home = exact.get(segment)
        if home is None:
            limit = int(threshold * len(segment))
            if exhaustive:
                home = _first_within(segment, clusters, range(len(clusters)), limit)
            else:
                tried = index.candidates(segment)
                home = _first_within(segment, clusters, tried, limit)
                if home is None:
                    skip = set(tried)
                    rest = (i for i in range(len(clusters)) if i not in skip)
                    home = _first_within(segment, clusters, rest, limit)
        if home is None:
            home = len(clusters)
            clusters.append(Cluster(representative=segment))
            if not exhaustive:
                index.add(home, segment)
        exact.setdefault(segment, home)
        clusters[home].members.append(segment)
    logger.debug("Formed %d clusters", len(clusters))
    return clusters
