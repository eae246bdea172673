"""Bitmask subsets of F_p and colexicographic support enumeration.

Subsets are Python ints used as bitsets (bit x = membership of residue x),
so union/intersection/difference are exact integer ops at any p.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable

import numpy as np


def as_mask(p: int, subset: int | Iterable[int]) -> int:
    """Normalize a subset (iterable of residues, or an int mask) to a bitmask."""
    if isinstance(subset, (int, np.integer)):
        m = int(subset)
        if m < 0 or m >> p:
            raise ValueError(f"mask {m} has bits outside [0, {p})")
        return m
    m = 0
    for x in subset:
        if not 0 <= x < p:
            raise ValueError(f"element {x} not in [0, {p})")
        m |= 1 << x
    return m


def mask_elements(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def mask_size(mask: int) -> int:
    return mask.bit_count()


def rotate_mask(mask: int, d: int, p: int) -> int:
    """Cyclic shift of a p-bit mask: element x maps to (x + d) mod p."""
    d %= p
    full = (1 << p) - 1
    return ((mask << d) | (mask >> (p - d))) & full if d else mask


def indicator_matrix(masks: Iterable[int], p: int) -> np.ndarray:
    """Stack masks into a (len, p) uint8 indicator matrix."""
    masks = list(masks)
    out = np.zeros((len(masks), p), dtype=np.uint8)
    for i, m in enumerate(masks):
        for x in mask_elements(m):
            out[i, x] = 1
    return out


# --- colexicographic order on K-subsets of range(n) ---
#
# Rank of a support {u_0 < ... < u_{K-1}} is sum_j C(u_j, j+1); ranges of
# ranks partition the enumeration deterministically across workers.


def colex_rank(support: Iterable[int]) -> int:
    return sum(math.comb(u, j + 1) for j, u in enumerate(sorted(support)))


def colex_unrank(rank: int, k: int) -> tuple[int, ...]:
    out = [0] * k
    for j in range(k, 0, -1):
        m = j - 1
        while math.comb(m + 1, j) <= rank:
            m += 1
        out[j - 1] = m
        rank -= math.comb(m, j)
    return tuple(out)


def colex_successor(support: list[int], n: int) -> bool:
    """Advance a sorted support in place to its colex successor.

    Returns False when the last support of C(n, k) was given.
    """
    k = len(support)
    for j in range(k):
        nxt = support[j + 1] if j + 1 < k else n
        if support[j] + 1 < nxt:
            support[j] += 1
            for i in range(j):
                support[i] = i
            return True
    return False


def colex_supports(n: int, k: int) -> np.ndarray:
    """All K-subsets of range(n) as an int64 array in colex order."""
    count = math.comb(n, k)
    flat = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(n), k)),
        dtype=np.int64,
        count=count * k,
    )
    arr = flat.reshape(count, k)
    # lex over complements, reversed, is exactly colex
    return np.ascontiguousarray((n - 1) - arr[::-1, ::-1])
