"""
Type definitions for blockdna.

Common aliases used across the codebase so signatures read in domain terms.
"""

from typing import List, Tuple

DnaString = str
"""A string over the alphabet A, C, G, T"""

Read = str
"""One sequenced read; may contain substitutions, insertions and deletions"""

Address = Tuple[int, int]
"""Address of a strand within a block: (version, column)"""

HistogramRow = Tuple[int, int, int]
"""(block_no, version, read_count)"""

Histogram = List[HistogramRow]
