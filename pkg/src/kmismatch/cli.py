"""Command line front end: ``kmismatch search`` and ``kmismatch bench``.

All reported positions are 0-based.  Exit status is 0 on success, 2 for bad
input and 3 when the benchmark's cross-check finds strategies disagreeing.
"""
from __future__ import annotations

import argparse
import csv
import itertools
import sys
import time
from typing import Callable, Mapping

import numpy as np

from .matcher import STRATEGIES, MatchQuery, MatchReport, match_encoded, match_k_mismatches
from .text_model import DEFAULT_WILDCARD, EncodedPattern, EncodedText, profile_pattern

EXIT_OK, EXIT_INPUT, EXIT_CROSSCHECK = 0, 2, 3

BENCH_COLUMNS = ("n", "m", "k", "q", "sigma", "strategy", "case", "elapsed_ms", "marks",
                 "candidates")
BENCH_DEFAULTS = {"n": [10000], "m": [100], "k": [1, 4], "sigma": [4], "density": [0.1],
                  "reps": [1]}


class InputError(Exception):
    pass


def read_input(path: str, fmt: str = "raw") -> str:
    try:
        with open(path, "rb") as fh:
            data = fh.read().decode("utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if fmt == "raw":
        text = data[:-1] if data.endswith("\n") else data
    elif fmt == "seq":
        lines = [ln for ln in data.splitlines() if not ln.startswith(">")]
        text = "".join("".join(ln.split()) for ln in lines)
    else:
        raise InputError(f"unknown format {fmt!r}")
    if not text:
        raise InputError(f"{path} holds no sequence data")
    return text


def _summary(report: MatchReport) -> str:
    d = report.diagnostics
    fields = [f"n={d.n}", f"m={d.m}", f"q={d.q}", f"g={d.g}", f"k={d.k}",
              f"strategy={d.strategy}", f"case={d.case}", f"B={d.budget if d.budget is not None else '-'}",
              f"S={d.S if d.S is not None else '-'}",
              f"candidates={d.candidates if d.candidates is not None else '-'}",
              f"matches={len(report)}", f"elapsed={d.elapsed:.3f}s"]
    return "\t".join(fields)


def cmd_search(args, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        text = read_input(args.text, args.format)
        pattern = read_input(args.pattern_file, args.format) if args.pattern_file else args.pattern
        if not pattern:
            raise InputError("pattern is empty")
        query = MatchQuery(args.k, args.strategy, args.threads, distances=args.distances)
        report = match_k_mismatches(text, pattern, query, args.wildcard)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    if args.distances:
        lines = (f"{p}\t{d}\n" for p, d in zip(report.positions.tolist(), report.distances.tolist()))
    else:
        lines = (f"{p}\n" for p in report.positions.tolist())
    out.writelines(lines)
    print(_summary(report), file=err)
    return EXIT_OK


def parse_grid(spec: str) -> list[dict]:
    """``"n=10000;m=100;k=1,4"`` -> cartesian product of settings, in order."""
    grid = {key: list(vals) for key, vals in BENCH_DEFAULTS.items()}
    for part in filter(None, (p.strip() for p in spec.split(";"))):
        key, sep, vals = part.partition("=")
        key = key.strip()
        if not sep or key not in grid:
            raise InputError(f"bad grid entry {part!r}; keys are {', '.join(grid)}")
        cast = float if key == "density" else int
        try:
            grid[key] = [cast(v) for v in vals.split(",") if v.strip()]
        except ValueError as exc:
            raise InputError(f"bad grid value in {part!r}") from exc
    keys = list(grid)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(grid[k] for k in keys))]


def make_instance(seed: int, index: int, n: int, m: int, k: int, sigma: int, density: float):
    """Random text plus a pattern planted from it with about k/2 substitutions."""
    if not (1 <= m <= n) or sigma < 1 or k < 0 or not 0 <= density < 1:
        raise InputError(f"invalid bench setting n={n} m={m} k={k} sigma={sigma} density={density}")
    rng = np.random.default_rng([seed, index])
    t = rng.integers(1, sigma + 1, n)
    at = int(rng.integers(0, n - m + 1))
    p = t[at:at + m].copy()
    flips = rng.choice(m, min(m, k // 2), replace=False)
    p[flips] = (p[flips] + rng.integers(1, max(sigma, 2), len(flips)) - 1) % sigma + 1
    p[rng.random(m) < density] = 0
    if not p.any():
        p[0] = t[at]
    return EncodedText(t), EncodedPattern(p)


Runner = Callable[[EncodedText, EncodedPattern, int, int], MatchReport]


def _default_runner(strategy: str) -> Runner:
    return lambda T, P, k, threads: match_encoded(T, P, MatchQuery(k, strategy, threads))


DEFAULT_RUNNERS: dict[str, Runner] = {s: _default_runner(s) for s in STRATEGIES}


def cmd_bench(args, out=None, err=None, runners: Mapping[str, Runner] | None = None) -> int:
    err = err or sys.stderr
    runners = runners or DEFAULT_RUNNERS
    try:
        settings = parse_grid(args.grid)
    except InputError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    rows = []
    status = EXIT_OK
    for index, setting in enumerate(itertools.chain.from_iterable(
            [s] * s["reps"] for s in settings)):
        params = {key: setting[key] for key in ("n", "m", "k", "sigma", "density")}
        try:
            T, P = make_instance(args.seed, index, **params)
        except InputError as exc:
            print(f"error: {exc}", file=err)
            return EXIT_INPUT
        q = profile_pattern(P).q
        results = {}
        for name, run in runners.items():
            started = time.perf_counter()
            report = run(T, P, params["k"], args.threads)
            results[name] = (report, (time.perf_counter() - started) * 1000.0)
        reference = None
        for name, (report, _) in results.items():
            got = report.positions.tolist()
            if reference is None:
                reference = (name, got)
            elif got != reference[1]:
                print(f"error: strategies {reference[0]!r} and {name!r} disagree on instance "
                      f"seed={args.seed} index={index} " +
                      " ".join(f"{k}={v}" for k, v in params.items()), file=err)
                status = EXIT_CROSSCHECK
                break
        if status != EXIT_OK:
            break
        for name, (report, elapsed_ms) in results.items():
            d = report.diagnostics
            rows.append([params["n"], params["m"], params["k"], q, params["sigma"], name, d.case,
                         f"{elapsed_ms:.3f}", d.marks,
                         "" if d.candidates is None else d.candidates])
    _write_csv(rows, args.out, out)
    return status


def _write_csv(rows, path, out) -> None:
    if path:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            _emit(rows, fh)
    else:
        _emit(rows, out or sys.stdout)


def _emit(rows, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    writer.writerows(rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kmismatch",
        description="Find every alignment of a pattern (with '?' don't-cares) in a text "
                    "with at most k mismatches. Positions are 0-based.")
    sub = parser.add_subparsers(dest="command", required=True)

    search = sub.add_parser("search", help="search a text file")
    search.add_argument("--text", required=True, help="text file")
    search.add_argument("--format", choices=("raw", "seq"), default="raw",
                        help="raw bytes, or FASTA-like sequence (headers dropped)")
    pat = search.add_mutually_exclusive_group(required=True)
    pat.add_argument("--pattern")
    pat.add_argument("--pattern-file")
    search.add_argument("-k", type=int, required=True, help="mismatch threshold")
    search.add_argument("--wildcard", default=DEFAULT_WILDCARD)
    search.add_argument("--strategy", choices=STRATEGIES, default="auto")
    search.add_argument("--distances", action="store_true",
                        help="print position<TAB>distance instead of positions only")
    search.add_argument("--threads", type=int, default=1)
    search.set_defaults(func=cmd_search)

    bench = sub.add_parser("bench", help="time all strategies on synthetic instances")
    bench.add_argument("--seed", type=int, required=True)
    bench.add_argument("--grid", default="",
                       help="e.g. 'n=10000;m=100;k=1,4;sigma=4;density=0.1;reps=1'")
    bench.add_argument("--out", help="CSV destination (default stdout)")
    bench.add_argument("--threads", type=int, default=1)
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
