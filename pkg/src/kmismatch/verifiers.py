"""Single-alignment decisions: is Hd(P, T_i) <= k?

Three deciders share one contract: the naive scan (the oracle), an island by
island kangaroo scan costing O(q + k) LCE queries, and a section scan that
skips sections already known, via convolution, to match exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .convolution import exact_match_scores
from .lce import LceIndex, WorkCounter, kangaroo_count
from .text_model import EncodedPattern, EncodedText, PatternProfile


@dataclass(frozen=True)
class DistanceVerdict:
    accepted: bool
    distance: int


@dataclass(frozen=True)
class Section:
    start: int
    stop: int
    islands: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class SectionPlan:
    sections: tuple[Section, ...]
    exact: tuple[np.ndarray, ...]

    @property
    def S(self) -> int:
        return len(self.sections)


def _check_alignment(n: int, m: int, i: int) -> None:
    if not 0 <= i <= n - m:
        raise IndexError(f"alignment {i} outside [0, {n - m}]")


def naive_distance(T: EncodedText, P: EncodedPattern, i: int) -> int:
    _check_alignment(T.n, P.m, i)
    window = T.codes[i:i + P.m]
    p = P.codes
    return int(np.count_nonzero((p != 0) & (p != window)))


def naive_distances(T: EncodedText, P: EncodedPattern) -> np.ndarray:
    """Hamming distance with wildcards at every alignment, by brute force."""
    n, m = T.n, P.m
    if m > n:
        raise ValueError(f"pattern length {m} exceeds text length {n}")
    count = n - m + 1
    dist = np.zeros(count, dtype=np.int64)
    t = T.codes
    for j in np.flatnonzero(P.codes):
        dist += t[j:j + count] != P.codes[j]
    return dist


def verify_islands(idx: LceIndex, profile: PatternProfile, i: int, k: int,
                   counter: WorkCounter | None = None) -> DistanceVerdict:
    _check_alignment(idx.n, idx.m, i)
    d = 0
    for start, length in profile.islands:
        if counter is not None:
            counter.islands_scanned += 1
        d += kangaroo_count(idx, i + start, start, length, k - d, counter)
        if d > k:
            return DistanceVerdict(False, k + 1)
    return DistanceVerdict(True, d)


def section_count(q: int, k: int, m: int) -> int:
    """Number of sections balancing convolution preprocessing against scanning."""
    if q < 1:
        return 1
    raw = (k * q / math.log2(max(m, 2))) ** (1.0 / 3.0)
    return min(max(int(math.floor(raw + 0.5)), 1), q)


def split_islands(islands, S: int) -> list[tuple[tuple[int, int], ...]]:
    """Contiguous groups of islands whose sizes differ by at most one (larger first)."""
    q = len(islands)
    base, extra = divmod(q, S)
    groups, at = [], 0
    for s in range(S):
        size = base + (1 if s < extra else 0)
        groups.append(tuple(islands[at:at + size]))
        at += size
    return groups


def build_section_plan(T: EncodedText, P: EncodedPattern, profile: PatternProfile, k: int,
                       S: int | None = None) -> SectionPlan:
    if profile.q < 1:
        raise ValueError("section plan needs at least one island")
    if k < 0:
        raise ValueError("k must be non-negative")
    if S is None:
        S = section_count(profile.q, k, P.m)
    count = T.n - P.m + 1
    sections, exact = [], []
    for group in split_islands(profile.islands, S):
        start = group[0][0]
        stop = group[-1][0] + group[-1][1]
        scores = exact_match_scores(T, P.codes[start:stop])
        flags = scores[start:start + count] == 0
        flags.setflags(write=False)
        sections.append(Section(start, stop, group))
        exact.append(flags)
    return SectionPlan(tuple(sections), tuple(exact))


def verify_sections(idx: LceIndex, plan: SectionPlan, profile: PatternProfile, i: int, k: int,
                    counter: WorkCounter | None = None) -> DistanceVerdict:
    _check_alignment(idx.n, idx.m, i)
    d = 0
    for section, flags in zip(plan.sections, plan.exact):
        if flags[i]:
            continue
        if counter is not None:
            counter.sections_scanned += 1
        for start, length in section.islands:
            if counter is not None:
                counter.islands_scanned += 1
            d += kangaroo_count(idx, i + start, start, length, k - d, counter)
            if d > k:
                return DistanceVerdict(False, k + 1)
    return DistanceVerdict(True, d)
