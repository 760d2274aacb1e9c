"""Synthetic corpora, query workloads, and the timing harness.

The harness runs every requested method over the same queries, gates the
timing on all methods producing byte-identical answers (a benchmark of a
wrong implementation is worthless), and reports per-query statistics
including the serialization cost a real responder would pay.
"""

from __future__ import annotations

import csv
import hashlib
import io
import random
import statistics
import time
from typing import NamedTuple

from .baselines import (
    PerfectIndex,
    Trie,
    brute_force_search,
    forward_backward_search,
    oflazer_search,
)
from .scdawg import Lexicon, make_lexicon
from .search import solve


class CorrectnessError(AssertionError):
    """Benchmarked methods disagreed; no timings are reported."""


def generate_lexicon(count: int, alphabet_size: int, mean_length: float,
                     *, seed: int = 0, distribution: str = "uniform") -> Lexicon:
    """Random distinct entries.

    The alphabet is ``alphabet_size`` consecutive codepoints starting at
    ``'!'`` — which puts ``'#'`` and ``'$'`` in every decent-sized alphabet,
    on purpose.  Lengths are normal around the mean (clamped to 1); symbols
    are drawn uniformly or with a centered binomial skew.
    """
    if alphabet_size < 1:
        raise ValueError("alphabet_size must be positive")
    if distribution not in ("uniform", "binomial"):
        raise ValueError(f"unknown distribution {distribution!r}")
    alphabet = [chr(0x21 + k) for k in range(alphabet_size)]
    rng = random.Random(seed)
    dev = mean_length ** 0.5
    words = set()
    out = []
    while len(out) < count:
        n = max(1, round(rng.normalvariate(mean_length, dev)))
        if distribution == "uniform":
            w = "".join(alphabet[rng.randrange(alphabet_size)] for _ in range(n))
        else:
            w = "".join(
                alphabet[rng.getrandbits(alphabet_size - 1).bit_count()]
                for _ in range(n)
            )
        if w in words:
            continue
        words.add(w)
        out.append(w)
    return make_lexicon(out)


def generate_queries(lexicon: Lexicon, count: int, bound: int, *, seed: int = 0):
    """Patterns made by applying ``bound`` single-character edits to random
    entries, redrawn until the result has at least 3*bound characters so the
    pattern stays decomposable with roomy parts."""
    entries = lexicon.entries
    rng = random.Random(seed)
    alphabet = sorted({c for w in entries for c in w})
    eligible = [w for w in entries if len(w) + bound >= 3 * bound]
    if not eligible:
        raise ValueError(
            f"no entry is long enough to yield a pattern of {3 * bound} characters"
        )
    out = []
    while len(out) < count:
        w = entries[rng.randrange(len(entries))]
        if len(w) < bound:
            continue
        positions = rng.sample(range(len(w)), bound)
        p = w
        for pos in sorted(positions, reverse=True):
            kind = rng.choice(("substitute", "insert", "delete"))
            if kind == "substitute":
                c = rng.choice(alphabet)
                while c == p[pos]:
                    c = rng.choice(alphabet)
                p = p[:pos] + c + p[pos + 1:]
            elif kind == "insert":
                p = p[:pos] + rng.choice(alphabet) + p[pos:]
            else:
                p = p[:pos] + p[pos + 1:]
        if len(p) < 3 * bound:
            continue
        out.append(p)
    return out


def _serialize_answers(answers) -> str:
    buf = io.StringIO()
    for word, dist in answers:
        buf.write(word)
        buf.write("\t")
        buf.write(str(dist))
        buf.write("\n")
    return buf.getvalue()


def _checksum(per_query_answers) -> str:
    h = hashlib.sha256()
    for answers in per_query_answers:
        h.update(_serialize_answers(answers).encode())
        h.update(b"\x00")
    return h.hexdigest()[:16]


class BenchRow(NamedTuple):
    method: str
    bound: int
    queries: int
    mean_us: float
    median_us: float
    total_answers: int
    checksum: str
    ratio_vs_ideal: float


def _method_callables(index, lexicon, ops, bound, methods, reference_answers, queries):
    trie = rtrie = None
    if "oflazer" in methods or "fb" in methods:
        trie = Trie(lexicon.entries)
    if "fb" in methods:
        rtrie = Trie(w[::-1] for w in lexicon.entries)
    table = {}
    for name in methods:
        if name == "new":
            table[name] = lambda p: solve(index, ops, p, bound)
        elif name == "ideal":
            pi = PerfectIndex({
                (p, bound): a for p, a in zip(queries, reference_answers)
            })
            table[name] = lambda p, pi=pi: pi.search(p, bound)
        elif name == "fb":
            table[name] = lambda p: forward_backward_search(trie, rtrie, ops, p, bound)
        elif name == "oflazer":
            table[name] = lambda p: oflazer_search(trie, ops, p, bound)
        elif name == "brute":
            table[name] = lambda p: brute_force_search(lexicon, ops, p, bound)
        else:
            raise ValueError(f"unknown method {name!r}")
    return table


def run_benchmark(index, lexicon: Lexicon, ops, queries, bound: int,
                  methods=("ideal", "new", "fb", "oflazer"), *, repeat: int = 3):
    """Time each method over the queries; returns one BenchRow per method.

    The first (untimed) pass doubles as the correctness gate: every method
    must produce identical answers for every query or CorrectnessError is
    raised and nothing is timed.
    """
    methods = tuple(methods)
    ref_name = next((m for m in methods if m != "ideal"), "new")
    probe = _method_callables(index, lexicon, ops, bound, (ref_name,), None, queries)
    reference_answers = [
        [tuple(pair) for pair in probe[ref_name](p)] for p in queries
    ]
    ref_sum = _checksum(reference_answers)

    table = _method_callables(index, lexicon, ops, bound, methods,
                              reference_answers, queries)
    for name in methods:
        got = [[tuple(pair) for pair in table[name](p)] for p in queries]
        if _checksum(got) != ref_sum:
            for p, a, b in zip(queries, got, reference_answers):
                if a != b:
                    raise CorrectnessError(
                        f"method {name!r} disagrees with {ref_name!r} on "
                        f"{p!r} at bound {bound}: {a} != {b}"
                    )
            raise CorrectnessError(f"method {name!r} checksum mismatch")

    rows = []
    total_answers = sum(len(a) for a in reference_answers)
    means = {}
    for name in methods:
        fn = table[name]
        samples = []
        for _ in range(repeat):
            for p in queries:
                t0 = time.perf_counter()
                answers = fn(p)
                _serialize_answers(answers)
                samples.append((time.perf_counter() - t0) * 1e6)
        means[name] = statistics.fmean(samples)
        rows.append((name, samples))
    out = []
    for name, samples in rows:
        ratio = means[name] / means["ideal"] if "ideal" in means else float("nan")
        out.append(BenchRow(
            method=name,
            bound=bound,
            queries=len(queries),
            mean_us=round(means[name], 3),
            median_us=round(statistics.median(samples), 3),
            total_answers=total_answers,
            checksum=ref_sum,
            ratio_vs_ideal=round(ratio, 3),
        ))
    return out


def format_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BenchRow._fields)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


class Mismatch(NamedTuple):
    pattern: str
    bound: int
    got: list
    want: list


def verify_equivalence(index, lexicon: Lexicon, ops, queries, bound: int):
    """Compare the indexed engine against the exhaustive scan; returns the
    first counterexample, or None when every query agrees."""
    for p in queries:
        got = list(solve(index, ops, p, bound))
        want = list(brute_force_search(lexicon, ops, p, bound))
        if got != want:
            return Mismatch(p, bound, got, want)
    return None
