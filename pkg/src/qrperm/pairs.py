"""Blocked enumeration of index pairs j < k, so O(n^2) loops stay in numpy."""

from __future__ import annotations

from typing import Callable, Iterator

import numpy as np

# pairs materialised per block
BLOCK_PAIRS = 1 << 21


def upper_pairs(n: int, start: int = 0,
                block_pairs: int = BLOCK_PAIRS) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield (J, K) index arrays covering start <= j < k < start + n, row blocks at a time."""
    j0 = 0
    while j0 < n - 1:
        rows = max(1, block_pairs // max(1, n - j0))
        j1 = min(n - 1, j0 + rows)
        jj = np.arange(j0, j1, dtype=np.int64)
        lengths = n - 1 - jj
        J = np.repeat(jj, lengths)
        # K runs j+1..n-1 for each j: offsets inside each run
        run_start = np.cumsum(lengths) - lengths
        K = np.arange(J.size, dtype=np.int64) - np.repeat(run_start, lengths) + J + 1
        yield J + start, K + start
        j0 = j1


def count_upper(values: np.ndarray,
                pred: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> int:
    """#{(j, k): j < k, pred(values[j], values[k])} by direct enumeration."""
    values = np.asarray(values)
    total = 0
    for J, K in upper_pairs(values.size):
        total += int(np.count_nonzero(pred(values[J], values[K])))
    return total


def square_pairs(n: int, start: int = 0,
                 block_pairs: int = BLOCK_PAIRS) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield (I, J) covering the full square start <= i, j < start + n."""
    rows = max(1, block_pairs // max(1, n))
    for i0 in range(0, n, rows):
        i1 = min(n, i0 + rows)
        I = np.repeat(np.arange(i0, i1, dtype=np.int64), n)
        J = np.tile(np.arange(n, dtype=np.int64), i1 - i0)
        yield I + start, J + start


def count_dominance(a, b) -> int:
    """#{(j, k): j < k, a[j] < b[k]}, by a level-by-level divide and conquer in numpy.

    At width w, every block of 2w positions contributes the pairs with j in its
    left half and k in its right half; one sort plus one searchsorted per level.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    n = a.size
    if n != b.size:
        raise ValueError("a and b must have equal length")
    if n < 2:
        return 0
    lo = int(min(a.min(), b.min()))
    span = int(max(a.max(), b.max())) - lo + 2
    if span * ((n >> 1) + 2) >= 1 << 62:
        raise OverflowError("values too spread for int64 block keys")
    a = a - lo
    b = b - lo
    pos = np.arange(n, dtype=np.int64)
    total = 0
    w = 1
    while w < n:
        block = pos // (2 * w)
        left = (pos % (2 * w)) < w
        keys = np.sort(block[left] * span + a[left])
        rb = block[~left]
        hits = np.searchsorted(keys, rb * span + b[~left], side="left")
        before = np.searchsorted(keys, rb * span, side="left")
        total += int((hits - before).sum())
        w *= 2
    return total
