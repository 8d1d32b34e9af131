"""Double-sided bitwise majority alignment (BMA).

The forward pass walks all traces in step. At each position the plurality
base is emitted; traces that disagree are re-synchronized by comparing the
next ``window`` bases against the lookahead consensus of the agreeing traces
under three hypotheses, substitution, deletion and insertion (preferred in
that order on ties). The backward pass does the same on the reversed traces.
Errors drift the forward consensus towards its end and the backward one
towards its start, so the first half of the forward result is joined with
the second half of the backward result.
"""

from collections import Counter
from typing import List, Optional, Sequence

from ..codec import BASES
from ..types import DnaString


def _plurality(letters: Sequence[str]) -> Optional[str]:
    """Most frequent letter; ties go to the earlier letter of ACGT."""
    if not letters:
        return None
    counts = Counter(letters)
    return min(counts, key=lambda b: (-counts[b], BASES.find(b) if b in BASES else len(BASES)))


def _matches(trace: str, start: int, ahead: Sequence[Optional[str]]) -> int:
    return sum(1 for j, base in enumerate(ahead)
               if base is not None and start + j < len(trace) and trace[start + j] == base)


def _forward(traces: Sequence[str], length: int, window: int) -> str:
    positions = [0] * len(traces)
    out: List[str] = []
    for _ in range(length):
        current = [t[p] for t, p in zip(traces, positions) if p < len(t)]
        base = _plurality(current)
        if base is None:
            out.append(BASES[0])
            continue
        out.append(base)
        agreeing = [(t, p) for t, p in zip(traces, positions) if p < len(t) and t[p] == base]
        ahead = [_plurality([t[p + j] for t, p in agreeing if p + j < len(t)])
                 for j in range(1, window + 1)]
        for k, (trace, p) in enumerate(zip(traces, positions)):
            if p >= len(trace):
                continue
            if trace[p] == base:
                positions[k] = p + 1
                continue
            substitution = _matches(trace, p + 1, ahead)
            deletion = _matches(trace, p, ahead)
            insertion = (_matches(trace, p + 2, ahead)
                         if p + 1 < len(trace) and trace[p + 1] == base else -1)
            best = max(substitution, deletion, insertion)
            if substitution == best:
                positions[k] = p + 1
            elif deletion == best:
                positions[k] = p
            else:
                positions[k] = p + 2
    return "".join(out)


def reconstruct(members: Sequence[DnaString], expected_len: int, window: int = 3) -> DnaString:
    """Consensus of a cluster's members, exactly ``expected_len`` bases long."""
    if not members:
        raise ValueError("Cannot reconstruct an empty cluster")
    if len(set(members)) == 1 and len(members[0]) == expected_len:
        return members[0]
    forward = _forward(members, expected_len, window)
    backward = _forward([m[::-1] for m in members], expected_len, window)[::-1]
    half = expected_len // 2
    return forward[:half] + backward[half:]
