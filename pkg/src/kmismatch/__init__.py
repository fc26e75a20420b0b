"""Pattern matching with k mismatches and don't-care symbols in the pattern."""
from .convolution import correlate, exact_match_scores, match_counts_for_char
from .lce import LceIndex, WorkCounter, kangaroo_count
from .matcher import (MatchQuery, MatchReport, compute_budget, filter_candidates, mark,
                      match_encoded, match_k_mismatches, run_case1, run_case2, select_positions)
from .text_model import (AlphabetMap, EncodedPattern, EncodedText, FreqTable, PatternProfile,
                         build_alphabet, char_frequencies, encode, profile_pattern)
from .verifiers import (DistanceVerdict, SectionPlan, build_section_plan, naive_distance,
                        naive_distances, verify_islands, verify_sections)

__all__ = [
    "AlphabetMap", "DistanceVerdict", "EncodedPattern", "EncodedText", "FreqTable", "LceIndex",
    "MatchQuery", "MatchReport", "PatternProfile", "SectionPlan", "WorkCounter",
    "build_alphabet", "build_section_plan", "char_frequencies", "compute_budget", "correlate",
    "encode", "exact_match_scores", "filter_candidates", "kangaroo_count", "mark",
    "match_counts_for_char", "match_encoded", "match_k_mismatches", "naive_distance",
    "naive_distances", "profile_pattern", "run_case1", "run_case2", "select_positions",
    "verify_islands", "verify_sections",
]
