"""Alphabet discovery, integer encoding and pattern island profiling.

Every numeric kernel in the package works on integer codes: text symbols are
coded 1..sigma (assigned in ascending symbol order) and the pattern wildcard is
coded 0, so a wildcard can never compare equal to any text position.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

DEFAULT_WILDCARD = "?"


def _frozen(values) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class AlphabetMap:
    codes: Mapping[str, int]
    wildcard: str = DEFAULT_WILDCARD

    @property
    def sigma(self) -> int:
        return len(self.codes)

    def symbols(self) -> list[str]:
        """Symbols ordered by code, so ``symbols()[c - 1]`` decodes code ``c``."""
        return sorted(self.codes, key=self.codes.__getitem__)


@dataclass(frozen=True)
class EncodedText:
    codes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "codes", _frozen(self.codes))
        if self.codes.ndim != 1 or len(self.codes) == 0:
            raise ValueError("text must be a non-empty 1-d sequence")
        if self.codes.min() < 1:
            raise ValueError("text codes must be >= 1 (wildcards are not allowed in the text)")

    @property
    def n(self) -> int:
        return len(self.codes)

    def __len__(self) -> int:
        return len(self.codes)


@dataclass(frozen=True)
class EncodedPattern:
    codes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "codes", _frozen(self.codes))
        if self.codes.ndim != 1 or len(self.codes) == 0:
            raise ValueError("pattern must be a non-empty 1-d sequence")
        if self.codes.min() < 0:
            raise ValueError("pattern codes must be >= 0")

    @property
    def m(self) -> int:
        return len(self.codes)

    def __len__(self) -> int:
        return len(self.codes)


@dataclass(frozen=True)
class PatternProfile:
    islands: tuple[tuple[int, int], ...]
    g: int
    positions_by_char: Mapping[int, tuple[int, ...]] = field(default_factory=dict)
    m: int = 0

    @property
    def q(self) -> int:
        return len(self.islands)


@dataclass(frozen=True)
class FreqTable:
    """Occurrence count of every code in the text; index 0 is always zero."""

    counts: np.ndarray

    def __getitem__(self, code: int) -> int:
        if 0 <= code < len(self.counts):
            return int(self.counts[code])
        return 0

    def as_dict(self) -> dict[int, int]:
        return {c: int(v) for c, v in enumerate(self.counts) if c and v}

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def _code_points(s: str) -> np.ndarray:
    return np.frombuffer(s.encode("utf-32-le", "surrogatepass"), dtype="<u4").astype(np.int64)


def build_alphabet(text: str, pattern: str, wildcard: str = DEFAULT_WILDCARD) -> AlphabetMap:
    if len(wildcard) != 1:
        raise ValueError(f"wildcard must be a single character, got {wildcard!r}")
    if not text:
        raise ValueError("text is empty")
    if wildcard in text:
        raise ValueError(f"wildcard {wildcard!r} found in text at offset {text.index(wildcard)}; "
                         "don't-care symbols are only allowed in the pattern")
    symbols = set(np.unique(_code_points(text)).tolist())
    symbols.update(np.unique(_code_points(pattern)).tolist() if pattern else ())
    symbols.discard(ord(wildcard))
    codes = {chr(cp): code for code, cp in enumerate(sorted(symbols), start=1)}
    return AlphabetMap(codes, wildcard)


def _lookup(s: str, alphabet: AlphabetMap, allow_wildcard: bool) -> np.ndarray:
    cps = _code_points(s)
    table = sorted((ord(sym), code) for sym, code in alphabet.codes.items())
    keys = np.array([k for k, _ in table] + [-1], dtype=np.int64)
    values = np.array([v for _, v in table] + [0], dtype=np.int64)
    # the trailing -1 sentinel keeps searchsorted results indexable
    pos = np.minimum(np.searchsorted(keys[:-1], cps), len(keys) - 1)
    known = keys[pos] == cps
    out = np.where(known, values[pos], 0)
    bad = ~known
    if allow_wildcard:
        bad &= cps != ord(alphabet.wildcard)
    if bad.any():
        where = int(np.flatnonzero(bad)[0])
        raise ValueError(f"symbol {s[where]!r} at offset {where} is not in the alphabet")
    return out


def encode(text: str, pattern: str, alphabet: AlphabetMap) -> tuple[EncodedText, EncodedPattern]:
    return (EncodedText(_lookup(text, alphabet, allow_wildcard=False)),
            EncodedPattern(_lookup(pattern, alphabet, allow_wildcard=True)))


def profile_pattern(P: EncodedPattern | Sequence[int]) -> PatternProfile:
    codes = P.codes if isinstance(P, EncodedPattern) else np.asarray(P, dtype=np.int64)
    solid = np.concatenate(([False], codes != 0, [False])).astype(np.int8)
    edges = np.diff(solid)
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1)
    islands = tuple((int(s), int(e - s)) for s, e in zip(starts, stops))

    positions: dict[int, tuple[int, ...]] = {}
    nz = np.flatnonzero(codes)
    order = np.argsort(codes[nz], kind="stable")
    for c, grp in _groupby_sorted(codes[nz][order], nz[order]):
        positions[c] = grp
    return PatternProfile(islands, int(len(nz)), positions, len(codes))


def _groupby_sorted(keys: np.ndarray, values: np.ndarray):
    if len(keys) == 0:
        return
    cuts = np.flatnonzero(np.diff(keys)) + 1
    for ks, vs in zip(np.split(keys, cuts), np.split(values, cuts)):
        yield int(ks[0]), tuple(int(v) for v in vs)


def char_frequencies(T: EncodedText, sigma: int | None = None) -> FreqTable:
    top = int(T.codes.max())
    size = max(top, sigma or 0) + 1
    return FreqTable(_frozen(np.bincount(T.codes, minlength=size)))


def encode_strings(text: str, pattern: str, wildcard: str = DEFAULT_WILDCARD):
    """Build the alphabet and encode both strings in one step."""
    alphabet = build_alphabet(text, pattern, wildcard)
    T, P = encode(text, pattern, alphabet)
    return alphabet, T, P
