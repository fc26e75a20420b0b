"""Shared oracles and instance generators.

The oracles are plain Python loops, deliberately independent of the numpy code
paths they check.
"""
import numpy as np
import pytest

from kmismatch.text_model import EncodedPattern, EncodedText

ACCEPTANCE_RESULTS = []


def record_criterion(name, ok, detail=""):
    ACCEPTANCE_RESULTS.append((name, bool(ok), detail))
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


def direct_correlate(a, b):
    a, b = list(map(int, a)), list(map(int, b))
    return [sum(a[i + j] * b[j] for j in range(len(b))) for i in range(len(a) - len(b) + 1)]


def direct_scores(t, p):
    t, p = list(map(int, t)), list(map(int, p))
    return [sum((t[i + j] - p[j]) ** 2 * t[i + j] * p[j] for j in range(len(p)))
            for i in range(len(t) - len(p) + 1)]


def scan_lce(t, p, i, j):
    h = 0
    while i + h < len(t) and j + h < len(p) and t[i + h] == p[j + h]:
        h += 1
    return h


def hamming(t, p, i):
    return sum(1 for j, c in enumerate(p) if c != 0 and c != t[i + j])


def oracle_positions(t, p, k):
    t, p = list(map(int, t)), list(map(int, p))
    return [i for i in range(len(t) - len(p) + 1) if hamming(t, p, i) <= k]


def random_instance(rng, n, m, sigma, density, mutation=0.1):
    """Random text and a pattern cut from it, mutated and punched with wildcards."""
    t = rng.integers(1, sigma + 1, n)
    at = int(rng.integers(0, n - m + 1))
    p = t[at:at + m].copy()
    flip = rng.random(m) < mutation
    p[flip] = rng.integers(1, sigma + 1, int(flip.sum()))
    p[rng.random(m) < density] = 0
    return EncodedText(t), EncodedPattern(p)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
