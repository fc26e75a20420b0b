"""Budgeted marking, filtering and verification: the k-mismatch search driver.

Positions of the pattern are bought greedily, cheapest character first, under
a frequency budget B.  If 2k positions fit, their marks filter the alignments
down to a few candidates that are verified one by one (case 1).  Otherwise the
remaining characters are counted by convolution and every alignment gets an
exact match count (case 2).
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .convolution import exact_match_scores, match_counts_for_char
from .lce import LceIndex, WorkCounter
from .text_model import (DEFAULT_WILDCARD, EncodedPattern, EncodedText, FreqTable, PatternProfile,
                         char_frequencies, encode_strings, profile_pattern)
from .verifiers import (SectionPlan, build_section_plan, naive_distances, verify_islands,
                        verify_sections)

STRATEGIES = ("auto", "islands", "sections", "naive")

CaseTag = Literal["full", "exhausted-budget", "all-positions"]


@dataclass(frozen=True)
class MatchQuery:
    k: int
    strategy: str = "auto"
    threads: int = 1
    v_factor: float = 1.0
    distances: bool = True

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"k must be non-negative, got {self.k}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.v_factor <= 0:
            raise ValueError("v_factor must be positive")


@dataclass(frozen=True)
class SelectionResult:
    A: tuple[int, ...]
    chosen_chars: frozenset[int]
    cost: int
    case_tag: CaseTag


@dataclass
class Diagnostics:
    n: int = 0
    m: int = 0
    q: int = 0
    g: int = 0
    k: int = 0
    strategy: str = ""
    case: str = ""
    budget: int | None = None
    v_estimate: float | None = None
    v_islands: float | None = None
    v_sections: float | None = None
    S: int | None = None
    selected: int = 0
    cost: int = 0
    marks: int = 0
    candidates: int | None = None
    convolutions: int = 0
    lce_queries: int = 0
    direct_comparisons: int = 0
    elapsed: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def alignments(self) -> int:
        return self.n - self.m + 1

    @property
    def comparisons(self) -> int:
        """Machine-independent work tally.

        Marking probes (one per selected-position occurrence in the text), LCE
        queries, one unit per alignment per convolution, and any symbol
        comparisons made by brute force.  Comparable with ``naive_comparisons``.
        """
        return (self.cost + self.lce_queries + self.convolutions * self.alignments
                + self.direct_comparisons)

    @property
    def naive_comparisons(self) -> int:
        return self.alignments * self.g


@dataclass
class MatchReport:
    positions: np.ndarray
    distances: np.ndarray | None
    diagnostics: Diagnostics

    def __iter__(self):
        return iter(self.positions.tolist())

    def __len__(self) -> int:
        return len(self.positions)


def compute_budget(n: int, k: int, m: int, v_estimate: float, v_factor: float = 1.0) -> int:
    if k < 1:
        raise ValueError("budget is only defined for k >= 1")
    v = max(v_estimate * v_factor, 1e-12)
    return math.ceil(n * k * math.sqrt(math.log2(max(m, 2)) / v))


def verification_cost(strategy: str, q: int, k: int, m: int) -> float:
    if strategy == "islands":
        return float(q + k)
    return k + (k * k * q * q * math.log2(max(m, 2))) ** (1.0 / 3.0)


def select_positions(profile: PatternProfile, F: FreqTable, k: int, B: int) -> SelectionResult:
    """Greedy purchase of up to 2k pattern positions, cheapest characters first.

    A character is bought whole unless the 2k cap cuts it; a character that
    does not fit the remaining budget stops the purchase.
    """
    if k < 1:
        raise ValueError("selection needs k >= 1")
    cap = 2 * k
    chosen: list[int] = []
    chars: set[int] = set()
    cost = 0
    for c in sorted(profile.positions_by_char, key=lambda c: (F[c], c)):
        offsets = profile.positions_by_char[c]
        room = cap - len(chosen)
        take = offsets[:room]
        price = len(take) * F[c]
        if cost + price > B:
            return SelectionResult(tuple(sorted(chosen)), frozenset(chars), cost, "exhausted-budget")
        chosen.extend(take)
        cost += price
        if len(take) == len(offsets):
            chars.add(c)
        if len(chosen) == cap:
            return SelectionResult(tuple(sorted(chosen)), frozenset(chars), cost, "full")
    return SelectionResult(tuple(sorted(chosen)), frozenset(chars), cost, "all-positions")


def mark(T: EncodedText, P: EncodedPattern, A) -> np.ndarray:
    """Per alignment, matches between the text and the pattern restricted to offsets A."""
    n, m = T.n, P.m
    count = n - m + 1
    M = np.zeros(count, dtype=np.int64)
    by_char: dict[int, list[int]] = {}
    for j in A:
        c = int(P.codes[j])
        if c == 0:
            raise ValueError(f"offset {j} is a wildcard and cannot be marked")
        by_char.setdefault(c, []).append(j)
    for c, offsets in by_char.items():
        occurrences = np.flatnonzero(T.codes == c)
        for j in offsets:
            starts = occurrences - j
            starts = starts[(starts >= 0) & (starts < count)]
            M += np.bincount(starts, minlength=count)
    return M


def filter_candidates(M: np.ndarray, k: int) -> np.ndarray:
    return np.flatnonzero(M >= k)


def _chunks(items: np.ndarray, parts: int) -> list[np.ndarray]:
    return [c for c in np.array_split(items, parts) if len(c)]


class _Context:
    """Shared, lazily built structures for one (text, pattern) pair."""

    def __init__(self, T: EncodedText, P: EncodedPattern, profile: PatternProfile | None = None):
        self.T, self.P = T, P
        self.profile = profile or profile_pattern(P)
        self._index: LceIndex | None = None
        self._plans: dict[int, SectionPlan] = {}

    @property
    def index(self) -> LceIndex:
        if self._index is None:
            self._index = LceIndex(self.T, self.P)
        return self._index

    def plan(self, k: int) -> SectionPlan:
        if k not in self._plans:
            self._plans[k] = build_section_plan(self.T, self.P, self.profile, k)
        return self._plans[k]


def _verify_all(ctx: _Context, candidates: np.ndarray, k: int, strategy: str, threads: int,
                plan: SectionPlan | None):
    idx, profile = ctx.index, ctx.profile

    def work(chunk):
        counter = WorkCounter()
        accepted, dists = [], []
        for i in chunk.tolist():
            if strategy == "sections":
                verdict = verify_sections(idx, plan, profile, i, k, counter)
            else:
                verdict = verify_islands(idx, profile, i, k, counter)
            if verdict.accepted:
                accepted.append(i)
                dists.append(verdict.distance)
        return accepted, dists, counter

    if threads > 1 and len(candidates) > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(work, _chunks(candidates, threads)))
    else:
        results = [work(candidates)]
    total = WorkCounter()
    positions, distances = [], []
    for acc, dist, counter in results:
        positions.extend(acc)
        distances.extend(dist)
        total.merge(counter)
    return (np.array(positions, dtype=np.int64), np.array(distances, dtype=np.int64), total)


def run_case1(T: EncodedText, P: EncodedPattern, k: int, A, strategy: str = "islands", *,
              threads: int = 1, _ctx: _Context | None = None,
              diagnostics: Diagnostics | None = None) -> MatchReport:
    """Mark with 2k positions, keep alignments with at least k marks, verify them."""
    if len(A) != 2 * k or k < 1:
        raise ValueError(f"case 1 needs exactly 2k = {2 * k} selected positions, got {len(A)}")
    ctx = _ctx or _Context(T, P)
    diag = diagnostics or _base_diagnostics(ctx, k, strategy)
    M = mark(T, P, A)
    candidates = filter_candidates(M, k)
    diag.case = "full"
    diag.marks = int(M.sum())
    diag.candidates = len(candidates)
    plan = None
    if strategy == "sections" and len(candidates):
        try:
            plan = ctx.plan(k)
        except OverflowError as exc:
            diag.notes.append(f"section plan unavailable ({exc}); verified by islands")
            strategy = "islands"
        else:
            diag.S = plan.S
            diag.convolutions += 3 * plan.S
    if len(candidates):
        positions, distances, counter = _verify_all(ctx, candidates, k, strategy, threads, plan)
        diag.lce_queries += counter.lce_queries
    else:
        positions = distances = np.zeros(0, dtype=np.int64)
    return MatchReport(positions, distances, diag)


def _char_counts(T: EncodedText, P: EncodedPattern, chars, threads: int) -> np.ndarray:
    count = T.n - P.m + 1
    total = np.zeros(count, dtype=np.int64)
    chars = sorted(chars)
    if threads > 1 and len(chars) > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = pool.map(lambda c: match_counts_for_char(T, P, c), chars)
            for part in parts:
                total += part
    else:
        for c in chars:
            total += match_counts_for_char(T, P, c)
    return total


def run_case2(T: EncodedText, P: EncodedPattern, k: int, selection: SelectionResult, *,
              threads: int = 1, _ctx: _Context | None = None,
              diagnostics: Diagnostics | None = None) -> MatchReport:
    """Exact match counts: marks for bought characters, convolutions for the rest."""
    if selection.case_tag not in ("exhausted-budget", "all-positions"):
        raise ValueError(f"case 2 does not handle selection case {selection.case_tag!r}")
    ctx = _ctx or _Context(T, P)
    profile = ctx.profile
    diag = diagnostics or _base_diagnostics(ctx, k, "auto")
    M = mark(T, P, selection.A)
    diag.marks = int(M.sum())
    rest = [c for c in profile.positions_by_char if c not in selection.chosen_chars]
    M += _char_counts(T, P, rest, threads)
    diag.convolutions += len(rest)
    diag.case = selection.case_tag
    threshold = profile.g - k
    positions = np.flatnonzero(M >= threshold)
    return MatchReport(positions, profile.g - M[positions], diag)


def _base_diagnostics(ctx: _Context, k: int, strategy: str) -> Diagnostics:
    return Diagnostics(n=ctx.T.n, m=ctx.P.m, q=ctx.profile.q, g=ctx.profile.g, k=k,
                       strategy=strategy)


def match_encoded(T: EncodedText, P: EncodedPattern, query: MatchQuery) -> MatchReport:
    start = time.perf_counter()
    n, m, k = T.n, P.m, query.k
    if m > n:
        raise ValueError(f"pattern length {m} exceeds text length {n}")
    ctx = _Context(T, P)
    profile = ctx.profile
    q, g = profile.q, profile.g
    diag = _base_diagnostics(ctx, k, query.strategy)
    report = None

    if query.strategy == "naive":
        dist = naive_distances(T, P)
        positions = np.flatnonzero(dist <= k)
        diag.case = "naive"
        diag.direct_comparisons = diag.naive_comparisons
        report = MatchReport(positions, dist[positions], diag)
    elif k >= g:
        positions = np.arange(n - m + 1, dtype=np.int64)
        distances = None
        if query.distances:
            distances = g - _char_counts(T, P, profile.positions_by_char, query.threads)
            diag.convolutions = len(profile.positions_by_char)
        diag.case = "all-alignments"
        report = MatchReport(positions, distances, diag)
    elif k == 0:
        diag.case = "exact"
        try:
            scores = exact_match_scores(T, P)
            diag.convolutions = 3
        except OverflowError as exc:
            diag.notes.append(f"exact scores unavailable ({exc}); counted per character")
            scores = g - _char_counts(T, P, profile.positions_by_char, query.threads)
            diag.convolutions = len(profile.positions_by_char)
        positions = np.flatnonzero(scores == 0)
        report = MatchReport(positions, np.zeros(len(positions), dtype=np.int64), diag)

    if report is None:
        strategy = query.strategy
        if strategy == "auto":
            strategy = "islands" if q < k * k else "sections"
        diag.strategy = strategy
        diag.v_islands = verification_cost("islands", q, k, m)
        diag.v_sections = verification_cost("sections", q, k, m)
        diag.v_estimate = diag.v_islands if strategy == "islands" else diag.v_sections
        diag.budget = compute_budget(n, k, m, diag.v_estimate, query.v_factor)
        F = char_frequencies(T)
        selection = select_positions(profile, F, k, diag.budget)
        diag.selected = len(selection.A)
        diag.cost = selection.cost
        if selection.case_tag == "full":
            report = run_case1(T, P, k, selection.A, strategy, threads=query.threads, _ctx=ctx,
                               diagnostics=diag)
        else:
            report = run_case2(T, P, k, selection, threads=query.threads, _ctx=ctx,
                               diagnostics=diag)

    if not query.distances:
        report.distances = None
    diag.elapsed = time.perf_counter() - start
    return report


def match_k_mismatches(text: str, pattern: str, query: MatchQuery | int,
                       wildcard: str = DEFAULT_WILDCARD) -> MatchReport:
    """All 0-based alignments where ``pattern`` meets ``text`` with at most k mismatches."""
    if isinstance(query, int):
        query = MatchQuery(query)
    if not pattern:
        raise ValueError("pattern is empty")
    if len(pattern) > len(text):
        raise ValueError(f"pattern length {len(pattern)} exceeds text length {len(text)}")
    _, T, P = encode_strings(text, pattern, wildcard)
    return match_encoded(T, P, query)
