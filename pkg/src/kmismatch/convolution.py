"""Exact integer cross-correlation and its two matching applications.

``correlate(a, b)[i] == sum(a[i + j] * b[j] for j in range(len(b)))``, computed
exactly.  Short kernels are summed directly; longer ones go through a float
FFT whose rounding error is bounded a priori, and anything the bound cannot
vouch for is redone with a two-prime number theoretic transform.
"""
from __future__ import annotations

import math

import numpy as np

from .text_model import EncodedPattern, EncodedText

DIRECT_CUTOFF = 64
EXACT_LIMIT = 2 ** 53

# NTT-friendly primes p = c * 2^e + 1 with primitive root 3; their product
# exceeds EXACT_LIMIT so CRT recovers every admissible output.
_NTT_PRIMES = ((469762049, 3, 26), (167772161, 3, 25))


def _as_ints(x) -> np.ndarray:
    if isinstance(x, (EncodedText, EncodedPattern)):
        x = x.codes
    arr = np.asarray(x, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("expected a 1-d integer sequence")
    return arr


def _direct(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out_len = len(a) - len(b) + 1
    out = np.zeros(out_len, dtype=np.int64)
    for j in np.flatnonzero(b):
        out += int(b[j]) * a[j:j + out_len]
    return out


def _fft_error_bound(a: np.ndarray, b: np.ndarray, size: int) -> float:
    # Standard forward-error estimate for FFT convolution in double precision.
    na = math.sqrt(float(np.dot(a.astype(np.float64), a.astype(np.float64))))
    nb = math.sqrt(float(np.dot(b.astype(np.float64), b.astype(np.float64))))
    return na * nb * 2.0 ** -52 * 4 * (math.log2(size) + 1)


def _fft(a: np.ndarray, b: np.ndarray, size: int) -> np.ndarray:
    fa = np.fft.rfft(a.astype(np.float64), size)
    fb = np.fft.rfft(b[::-1].astype(np.float64), size)
    full = np.fft.irfft(fa * fb, size)
    return np.rint(full[len(b) - 1:len(a)]).astype(np.int64)


def _bit_reverse(size: int) -> np.ndarray:
    bits = size.bit_length() - 1
    idx = np.arange(size, dtype=np.int64)
    rev = np.zeros(size, dtype=np.int64)
    for bit in range(bits):
        rev |= ((idx >> bit) & 1) << (bits - 1 - bit)
    return rev


def _ntt(x: np.ndarray, prime: int, root: int, invert: bool, rev: np.ndarray) -> np.ndarray:
    size = len(x)
    a = x[rev] % prime
    length = 2
    while length <= size:
        w = pow(root, (prime - 1) // length, prime)
        if invert:
            w = pow(w, prime - 2, prime)
        half = length // 2
        tw = np.ones(1, dtype=np.int64)
        while len(tw) < half:
            tw = np.concatenate((tw, tw * pow(w, len(tw), prime) % prime))
        blocks = a.reshape(-1, length)
        u = blocks[:, :half]
        v = blocks[:, half:] * tw % prime
        a = np.concatenate(((u + v) % prime, (u - v) % prime), axis=1).reshape(-1)
        length *= 2
    if invert:
        a = a * pow(size, prime - 2, prime) % prime
    return a


def _ntt_correlate(a: np.ndarray, b: np.ndarray, size: int) -> np.ndarray:
    rev = _bit_reverse(size)
    pa = np.zeros(size, dtype=np.int64)
    pb = np.zeros(size, dtype=np.int64)
    pa[:len(a)] = a
    pb[:len(b)] = b[::-1]
    residues = []
    for prime, root, max_log in _NTT_PRIMES:
        if size > 1 << max_log:
            raise OverflowError(f"transform size {size} exceeds NTT capacity 2^{max_log}")
        fa = _ntt(pa, prime, root, False, rev)
        fb = _ntt(pb, prime, root, False, rev)
        residues.append(_ntt(fa * fb % prime, prime, root, True, rev))
    (p1, _, _), (p2, _, _) = _NTT_PRIMES
    r1, r2 = residues
    inv = pow(p1, p2 - 2, p2)
    full = r1 + p1 * ((r2 - r1) % p2 * inv % p2)
    return full[len(b) - 1:len(a)]


def correlate(a, b, *, method: str = "auto") -> np.ndarray:
    """Sliding dot product of ``b`` over ``a`` (length ``len(a) - len(b) + 1``).

    ``method`` is one of ``auto``, ``direct``, ``fft`` or ``ntt``; every method
    returns identical integers.  ``fft`` silently upgrades to ``ntt`` when its
    error bound cannot guarantee correct rounding.
    """
    a, b = _as_ints(a), _as_ints(b)
    if len(b) == 0 or len(b) > len(a):
        raise ValueError(f"kernel length {len(b)} must be in 1..{len(a)}")
    if (a < 0).any() or (b < 0).any():
        raise ValueError("correlate expects non-negative integers")
    bound = int(a.max()) * int(b.sum())
    if bound >= EXACT_LIMIT:
        raise OverflowError(f"correlation output may reach {bound}, beyond exact range 2^53")
    if method == "direct" or (method == "auto" and len(b) <= DIRECT_CUTOFF):
        return _direct(a, b)
    size = 1 << (len(a) + len(b) - 2).bit_length()
    if method == "ntt":
        return _ntt_correlate(a, b, size)
    if method not in ("auto", "fft"):
        raise ValueError(f"unknown method {method!r}")
    if _fft_error_bound(a, b, size) < 0.5:
        return _fft(a, b, size)
    return _ntt_correlate(a, b, size)


def match_counts_for_char(T: EncodedText, P: EncodedPattern, c: int) -> np.ndarray:
    """Per alignment, how many pattern positions holding ``c`` meet ``c`` in the text."""
    t, p = _as_ints(T), _as_ints(P)
    if c < 1:
        raise ValueError("character code must be >= 1")
    pc = (p == c).astype(np.int64)
    if not pc.any():
        return np.zeros(len(t) - len(p) + 1, dtype=np.int64)
    return correlate((t == c).astype(np.int64), pc)


def exact_match_scores(T: EncodedText, Pseg) -> np.ndarray:
    """Sum of (t - p)^2 * t * p per alignment; zero exactly where Pseg matches.

    Wildcards (code 0) contribute nothing, so they match anything.
    """
    t, p = _as_ints(T), _as_ints(Pseg)
    if len(p) > len(t):
        raise ValueError(f"segment length {len(p)} exceeds text length {len(t)}")
    sigma = int(max(t.max(), p.max()))
    if len(p) * sigma ** 4 >= EXACT_LIMIT:
        raise OverflowError(f"m * sigma^4 = {len(p) * sigma ** 4} exceeds exact range 2^53")
    t2 = t * t
    p2 = p * p
    return correlate(t2 * t, p) - 2 * correlate(t2, p2) + correlate(t, p2 * p)
