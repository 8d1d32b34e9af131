"""Locating primers in reads and cutting out the part between them."""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import Levenshtein

from ..types import DnaString, Read

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 2


@dataclass(frozen=True)
class Extraction:
    """Outcome of extracting one read.

    ``segment`` is everything between the forward primer and the reverse
    site, or None when either could not be located.
    """
    read: Read
    segment: Optional[DnaString]

    @property
    def is_background(self) -> bool:
        return self.segment is None


def locate_prefix(read: Read, primer: DnaString, tolerance: int = DEFAULT_TOLERANCE) -> Optional[int]:
    """End offset of ``primer`` at the start of ``read``, allowing ``tolerance`` edits.

    Prefixes from ``len(primer) - tolerance`` to ``len(primer) + tolerance``
    bases long are tried; the closest wins, the exact length on ties.
    """
    best: Optional[Tuple[int, int, int]] = None
    for shift in sorted(range(-tolerance, tolerance + 1), key=abs):
        end = len(primer) + shift
        if end <= 0 or end > len(read):
            continue
        distance = Levenshtein.distance(primer, read[:end], score_cutoff=tolerance)
        if distance <= tolerance and (best is None or distance < best[0]):
            best = (distance, abs(shift), end)
    return None if best is None else best[2]


def locate_suffix(read: Read, site: DnaString, tolerance: int = DEFAULT_TOLERANCE) -> Optional[int]:
    """Start offset of ``site`` at the end of ``read``; see :func:`locate_prefix`."""
    end = locate_prefix(read[::-1], site[::-1], tolerance)
    return None if end is None else len(read) - end


def extract_segment(read: Read, fwd: DnaString, rev: DnaString, expected_len: Optional[int] = None,
                    tolerance: int = DEFAULT_TOLERANCE) -> Extraction:
    """Cut the segment between ``fwd`` and ``rev`` out of one read.

    A segment whose length is more than ``2 * tolerance`` away from
    ``expected_len`` is treated as unlocatable.
    """
    start = locate_prefix(read, fwd, tolerance)
    if start is None:
        return Extraction(read, None)
    stop = locate_suffix(read, rev, tolerance)
    if stop is None or stop <= start:
        return Extraction(read, None)
    segment = read[start:stop]
    if expected_len is not None and abs(len(segment) - expected_len) > 2 * tolerance:
        return Extraction(read, None)
    return Extraction(read, segment)


def extract_payloads(reads: Iterable[Read], fwd: DnaString, rev: DnaString,
                     expected_len: Optional[int] = None,
                     tolerance: int = DEFAULT_TOLERANCE) -> Tuple[List[DnaString], int]:
    """Segments of all locatable reads, and the number of background reads.

    The segment under a primer of length ``p`` holds the strand bases from
    ``p`` up to the reverse site: the rest of the address, the intra index
    and the payload.
    """
    segments: List[DnaString] = []
    background = 0
    for read in reads:
        found = extract_segment(read, fwd, rev, expected_len, tolerance)
        if found.segment is None:
            background += 1
        else:
            segments.append(found.segment)
    logger.debug("Extracted %d segments, %d background reads", len(segments), background)
    return segments, background
