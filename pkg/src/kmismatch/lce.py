"""Longest common extension between text and pattern suffixes.

The index is a suffix array over ``T + [sep1] + P + [sep2]`` with its LCP
array and a sparse-table range-minimum structure, so each query is O(1).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .text_model import EncodedPattern, EncodedText


@dataclass
class WorkCounter:
    """Operation tally for instrumented verification (one per worker thread)."""

    lce_queries: int = 0
    mismatches: int = 0
    islands_scanned: int = 0
    sections_scanned: int = 0

    def merge(self, other: "WorkCounter") -> None:
        self.lce_queries += other.lce_queries
        self.mismatches += other.mismatches
        self.islands_scanned += other.islands_scanned
        self.sections_scanned += other.sections_scanned


def suffix_array(s) -> np.ndarray:
    """Suffix array by prefix doubling, O(n log^2 n)."""
    s = np.asarray(s, dtype=np.int64)
    n = len(s)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    _, rank = np.unique(s, return_inverse=True)
    rank = rank.astype(np.int64).reshape(-1)
    order = np.argsort(rank, kind="stable")
    step = 1
    while rank.max() < n - 1:
        second = np.full(n, -1, dtype=np.int64)
        if step < n:
            second[:n - step] = rank[step:]
        order = np.lexsort((second, rank))
        r1, r2 = rank[order], second[order]
        bumps = (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
        rank = np.empty(n, dtype=np.int64)
        rank[order] = np.concatenate(([0], np.cumsum(bumps)))
        step *= 2
    return order


def lcp_array(s, sa) -> np.ndarray:
    """Kasai's algorithm; ``lcp[r]`` is the LCP of suffixes ``sa[r-1]`` and ``sa[r]``."""
    seq = np.asarray(s).tolist()
    sa_list = np.asarray(sa).tolist()
    n = len(seq)
    rank = [0] * n
    for r, pos in enumerate(sa_list):
        rank[pos] = r
    lcp = [0] * n
    h = 0
    for i in range(n):
        r = rank[i]
        if r == 0:
            h = 0
            continue
        j = sa_list[r - 1]
        while i + h < n and j + h < n and seq[i + h] == seq[j + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return np.array(lcp, dtype=np.int64)


class SparseTableRMQ:
    def __init__(self, data):
        level = np.asarray(data, dtype=np.int64)
        self.levels = [level]
        width = 1
        while 2 * width <= len(level):
            prev = self.levels[-1]
            self.levels.append(np.minimum(prev[:-width], prev[width:]))
            width *= 2

    def query(self, lo: int, hi: int) -> int:
        """Minimum of ``data[lo:hi]`` (``hi > lo``)."""
        depth = (hi - lo).bit_length() - 1
        table = self.levels[depth]
        a = table[lo]
        b = table[hi - (1 << depth)]
        return int(a if a < b else b)


class LceIndex:
    def __init__(self, T: EncodedText, P: EncodedPattern):
        t, p = T.codes, P.codes
        self.n, self.m = len(t), len(p)
        top = int(max(t.max(), p.max()))
        concat = np.concatenate((t, [top + 1], p, [top + 2]))
        self.sa = suffix_array(concat)
        rank = np.empty(len(concat), dtype=np.int64)
        rank[self.sa] = np.arange(len(concat))
        self._rank = rank.tolist()
        self._rmq = SparseTableRMQ(lcp_array(concat, self.sa))
        self._pattern_base = self.n + 1

    def lce(self, tpos: int, ppos: int, counter: WorkCounter | None = None) -> int:
        if not (0 <= tpos < self.n and 0 <= ppos < self.m):
            raise IndexError(f"lce({tpos}, {ppos}) outside text [0,{self.n}) / pattern [0,{self.m})")
        if counter is not None:
            counter.lce_queries += 1
        a = self._rank[tpos]
        b = self._rank[self._pattern_base + ppos]
        if a > b:
            a, b = b, a
        return self._rmq.query(a + 1, b + 1)


def build(T: EncodedText, P: EncodedPattern) -> LceIndex:
    return LceIndex(T, P)


def lce(idx: LceIndex, tpos: int, ppos: int, counter: WorkCounter | None = None) -> int:
    return idx.lce(tpos, ppos, counter)


def kangaroo_count(idx: LceIndex, tstart: int, pstart: int, length: int, cap: int,
                   counter: WorkCounter | None = None) -> int:
    """Mismatches between ``T[tstart:tstart+length]`` and ``P[pstart:pstart+length]``.

    Jumps from one mismatch to the next with LCE queries and gives up once the
    count passes ``cap``, returning ``cap + 1``.  At most ``cap + 1`` queries.
    """
    if length < 0 or cap < 0:
        raise ValueError("length and cap must be non-negative")
    if tstart < 0 or pstart < 0 or tstart + length > idx.n or pstart + length > idx.m:
        raise IndexError(f"range of length {length} at text {tstart} / pattern {pstart} out of bounds")
    pos = 0
    found = 0
    while pos < length:
        pos += idx.lce(tstart + pos, pstart + pos, counter)
        if pos >= length:
            break
        found += 1
        if found > cap:
            break
        pos += 1
    if counter is not None:
        counter.mismatches += found
    return found
