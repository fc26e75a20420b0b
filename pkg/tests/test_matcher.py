import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import hamming, oracle_positions, random_instance
from kmismatch.matcher import (MatchQuery, SelectionResult, compute_budget, filter_candidates,
                               mark, match_encoded, match_k_mismatches, run_case1, run_case2,
                               select_positions)
from kmismatch.text_model import (EncodedPattern, EncodedText, FreqTable, char_frequencies,
                                  encode_strings, profile_pattern)


def test_budget_examples():
    assert compute_budget(1024, 4, 256, 8) == 4096
    assert compute_budget(1024, 4, 256, 32) == 2048
    assert compute_budget(1024, 4, 256, 8, v_factor=4) == 2048
    with pytest.raises(ValueError):
        compute_budget(1024, 0, 256, 8)


def _freq(**counts):
    arr = np.zeros(3, dtype=np.int64)
    for sym, v in counts.items():
        arr[" ab".index(sym)] = v
    return FreqTable(arr)


def test_select_positions_examples():
    prof = profile_pattern(EncodedPattern([1, 1, 2, 2]))
    F = _freq(a=10, b=2)
    sel = select_positions(prof, F, 1, 100)
    assert sel == SelectionResult((2, 3), frozenset({2}), 4, "full")
    sel = select_positions(prof, F, 1, 3)
    assert sel.A == () and sel.chosen_chars == frozenset() and sel.case_tag == "exhausted-budget"

    prof = profile_pattern(EncodedPattern([1, 0, 2]))
    sel = select_positions(prof, _freq(a=5, b=5), 5, 10 ** 9)
    assert sel.A == (0, 2) and sel.case_tag == "all-positions"


def test_select_partial_character_only_when_cap_cuts():
    prof = profile_pattern(EncodedPattern([1, 1, 1, 1, 2]))
    sel = select_positions(prof, _freq(a=1, b=50), 1, 100)
    assert sel.A == (0, 1) and sel.chosen_chars == frozenset() and sel.case_tag == "full"


@settings(max_examples=200, deadline=None)
@given(codes=st.lists(st.integers(0, 5), min_size=1, max_size=40),
       freqs=st.lists(st.integers(0, 30), min_size=6, max_size=6),
       k=st.integers(1, 8), budget=st.integers(0, 400))
def test_selection_invariants(codes, freqs, k, budget):
    freqs[0] = 0
    F = FreqTable(np.array(freqs))
    prof = profile_pattern(EncodedPattern(codes))
    sel = select_positions(prof, F, k, budget)
    assert len(sel.A) <= 2 * k
    assert sel.cost == sum(F[codes[j]] for j in sel.A) <= budget
    assert len(set(sel.A)) == len(sel.A) and all(codes[j] for j in sel.A)
    picked = [codes[j] for j in sel.A]
    untouched = set(prof.positions_by_char) - set(picked)
    for c in set(picked):
        assert all((F[c], c) < (F[d], d) for d in untouched)
    for c in sel.chosen_chars:
        assert set(prof.positions_by_char[c]) <= set(sel.A)
    if sel.case_tag == "exhausted-budget":
        for c in prof.positions_by_char:
            if c not in sel.chosen_chars:
                assert F[c] > budget / (2 * k)
        assert all(c in sel.chosen_chars for c in picked)
    if sel.case_tag == "all-positions":
        assert len(sel.A) == prof.g < 2 * k
    if sel.case_tag == "full":
        assert len(sel.A) == 2 * k


def test_mark_examples():
    _, T, P = encode_strings("aab", "ab")
    assert mark(T, P, [0, 1]).tolist() == [1, 2]
    assert mark(T, P, []).tolist() == [0, 0]
    _, T, P = encode_strings("aaaa", "aa")
    assert mark(T, P, [0]).tolist() == [1, 1, 1]


def test_mark_rejects_wildcard_offset():
    _, T, P = encode_strings("aab", "a?")
    with pytest.raises(ValueError):
        mark(T, P, [1])


def test_filter_examples():
    assert filter_candidates(np.array([0, 3, 1]), 2).tolist() == [1]
    assert filter_candidates(np.zeros(5, dtype=np.int64), 1).tolist() == []


def test_case2_forced():
    _, T, P = encode_strings("aabacb", "a?b")
    sel = SelectionResult((), frozenset(), 0, "exhausted-budget")
    report = run_case2(T, P, 0, sel)
    assert report.positions.tolist() == [0, 3]
    everything = run_case2(T, P, 2, sel)
    assert everything.positions.tolist() == [0, 1, 2, 3]


def test_case2_all_positions_needs_no_convolution():
    _, T, P = encode_strings("aabacb", "a?b")
    sel = SelectionResult((0, 2), frozenset({1, 2}), 5, "all-positions")
    report = run_case2(T, P, 1, sel)
    assert report.diagnostics.convolutions == 0
    assert report.positions.tolist() == [0, 1, 3]


def test_case2_rejects_full_selection():
    _, T, P = encode_strings("aabacb", "a?b")
    with pytest.raises(ValueError):
        run_case2(T, P, 1, SelectionResult((0, 2), frozenset(), 5, "full"))


def test_case1_zero_candidates():
    _, T, P = encode_strings("cccccc", "ab")
    report = run_case1(T, P, 1, (0, 1))
    assert report.positions.tolist() == [] and report.diagnostics.candidates == 0


def test_case1_all_candidates_accepted():
    _, T, P = encode_strings("ababab", "ab")
    report = run_case1(T, P, 1, (0, 1))
    assert report.positions.tolist() == [0, 2, 4]
    assert report.diagnostics.candidates == 3


@pytest.mark.parametrize("text,pattern,k,expected", [
    ("aabacb", "a?b", 0, [0, 3]),
    ("abcd", "ab", 0, [0]),
    ("abcd", "xy", 2, [0, 1, 2]),
    ("abcd", "??", 0, [0, 1, 2]),
])
def test_match_examples(text, pattern, k, expected):
    for strategy in ("auto", "islands", "sections", "naive"):
        assert list(match_k_mismatches(text, pattern, MatchQuery(k, strategy))) == expected


def test_match_input_errors():
    with pytest.raises(ValueError):
        match_k_mismatches("ab", "abc", 0)
    with pytest.raises(ValueError):
        match_k_mismatches("ab", "", 0)
    with pytest.raises(ValueError):
        MatchQuery(-1)
    with pytest.raises(ValueError):
        MatchQuery(1, strategy="fastest")


def test_auto_dispatch():
    rng = np.random.default_rng(5)
    t = rng.integers(1, 5, 3000)
    p = t[100:160].copy()
    p[::7] = 0
    T, P = EncodedText(t), EncodedPattern(p)
    q = profile_pattern(P).q
    assert match_encoded(T, P, MatchQuery(3)).diagnostics.strategy == ("islands" if q < 9 else "sections")
    assert match_encoded(T, P, MatchQuery(5)).diagnostics.strategy == "islands"


@pytest.mark.parametrize("sigma", [2, 4, 20])
def test_oracle_equivalence_with_invariants(rng, sigma):
    for _ in range(25):
        n = int(rng.integers(60, 800))
        m = int(rng.integers(1, min(n, 120) + 1))
        k = int(rng.choice([1, 2, 3, 10]))
        T, P = random_instance(rng, n, m, sigma, float(rng.choice([0, 0.1, 0.5])))
        t, p = T.codes.tolist(), P.codes.tolist()
        truth = oracle_positions(t, p, k)
        dist = [hamming(t, p, i) for i in range(n - m + 1)]
        for strategy in ("auto", "islands", "sections", "naive"):
            report = match_encoded(T, P, MatchQuery(k, strategy))
            assert report.positions.tolist() == truth
            assert report.distances.tolist() == [dist[i] for i in truth]

        prof = profile_pattern(P)
        F = char_frequencies(T)
        sel = select_positions(prof, F, k, 10 ** 12)
        M = mark(T, P, sel.A)
        assert M.sum() <= sel.cost
        if sel.case_tag == "full":
            cands = set(filter_candidates(M, k).tolist())
            assert set(truth) <= cands
            assert len(cands) <= M.sum() // k
            for i in range(n - m + 1):
                if dist[i] <= k:
                    assert M[i] >= len(sel.A) - dist[i]


def test_case2_exact_counts(rng):
    for _ in range(20):
        T, P = random_instance(rng, 300, int(rng.integers(1, 80)), 4, 0.3)
        prof = profile_pattern(P)
        F = char_frequencies(T)
        sel = select_positions(prof, F, 3, int(rng.integers(0, 400)))
        if sel.case_tag == "full":
            continue
        report = run_case2(T, P, prof.g, sel)
        t, p = T.codes.tolist(), P.codes.tolist()
        assert report.distances.tolist() == [hamming(t, p, i) for i in range(len(t) - len(p) + 1)]


def test_threads_do_not_change_output(rng):
    T, P = random_instance(rng, 3000, 100, 4, 0.2)
    for strategy in ("islands", "sections"):
        a = match_encoded(T, P, MatchQuery(6, strategy, threads=1))
        b = match_encoded(T, P, MatchQuery(6, strategy, threads=4))
        assert a.positions.tolist() == b.positions.tolist()
        assert a.distances.tolist() == b.distances.tolist()
        assert a.diagnostics.lce_queries == b.diagnostics.lce_queries


def test_distances_can_be_skipped():
    report = match_k_mismatches("abcabc", "a?c", MatchQuery(3, distances=False))
    assert report.distances is None and list(report) == [0, 1, 2, 3]
