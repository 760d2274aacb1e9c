import csv
import io
import random

import pytest

import lexiscan.bench as bench
from lexiscan.bench import (
    CorrectnessError,
    format_csv,
    generate_lexicon,
    generate_queries,
    run_benchmark,
    verify_equivalence,
)
from lexiscan.distance import distance, preset_operations
from lexiscan.scdawg import build_index, make_lexicon
from conftest import random_words


# ------------------------------------------------------------------- lexicon


def test_generate_lexicon_deterministic():
    a = generate_lexicon(50, 20, 8.0, seed=9)
    b = generate_lexicon(50, 20, 8.0, seed=9)
    assert a.entries == b.entries
    assert generate_lexicon(50, 20, 8.0, seed=10).entries != a.entries


def test_generate_lexicon_shape():
    lex = generate_lexicon(200, 30, 12.0, seed=1)
    assert len(lex.entries) == 200
    assert len(set(lex.entries)) == 200
    allowed = {chr(0x21 + k) for k in range(30)}
    used = {c for w in lex.entries for c in w}
    assert used <= allowed
    # The alphabet is anchored at '!' so '#' and '$' are ordinary symbols.
    assert "#" in allowed and "$" in allowed
    assert all(len(w) >= 1 for w in lex.entries)
    mean = sum(map(len, lex.entries)) / 200
    assert 10.0 < mean < 14.0


def test_generate_lexicon_binomial():
    lex = generate_lexicon(100, 9, 10.0, seed=3, distribution="binomial")
    counts = {}
    for w in lex.entries:
        for c in w:
            counts[c] = counts.get(c, 0) + 1
    # Middle symbols dominate under the centered draw.
    mid = counts.get(chr(0x21 + 4), 0)
    edge = counts.get(chr(0x21), 0) + counts.get(chr(0x21 + 8), 0)
    assert mid > edge


def test_generate_lexicon_validation():
    with pytest.raises(ValueError):
        generate_lexicon(5, 0, 4.0)
    with pytest.raises(ValueError):
        generate_lexicon(5, 5, 4.0, distribution="zipf")


# -------------------------------------------------------------------- queries


def test_generate_queries_deterministic():
    lex = generate_lexicon(80, 20, 10.0, seed=2)
    a = generate_queries(lex, 25, 2, seed=5)
    assert a == generate_queries(lex, 25, 2, seed=5)
    assert a != generate_queries(lex, 25, 2, seed=6)
    assert len(a) == 25


def test_generate_queries_length_floor_and_distance():
    lev = preset_operations("lev")
    lex = generate_lexicon(60, 15, 9.0, seed=4)
    for bound in (1, 2, 3):
        queries = generate_queries(lex, 20, bound, seed=7)
        for p in queries:
            assert len(p) >= 3 * bound
            best = min(
                d for d in (
                    distance(lev, p, w, cutoff=bound) for w in lex.entries
                ) if isinstance(d, int)
            )
            assert best <= bound


def test_generate_queries_zero_bound_returns_entries():
    lex = generate_lexicon(30, 10, 6.0, seed=11)
    queries = generate_queries(lex, 10, 0, seed=1)
    assert all(p in set(lex.entries) for p in queries)


def test_generate_queries_shortfall():
    lex = make_lexicon(["ab", "ba", "aa"])
    with pytest.raises(ValueError, match="long enough"):
        generate_queries(lex, 5, 4, seed=0)


# ------------------------------------------------------------------ benchmark


def small_setup():
    rng = random.Random(21)
    words = random_words(rng, 60, alphabet="abcdef", max_len=9)
    lex = make_lexicon(words)
    idx = build_index(lex)
    lev = preset_operations("lev")
    queries = generate_queries(lex, 12, 1, seed=13)
    return idx, lex, lev, queries


def test_run_benchmark_rows():
    idx, lex, lev, queries = small_setup()
    rows = run_benchmark(idx, lex, lev, queries, 1, repeat=1)
    assert [r.method for r in rows] == ["ideal", "new", "fb", "oflazer"]
    checks = {r.checksum for r in rows}
    assert len(checks) == 1
    for r in rows:
        assert r.bound == 1 and r.queries == 12
        assert r.mean_us > 0 and r.median_us > 0
        assert r.total_answers >= 12  # every query is one edit from an entry
    ideal = rows[0]
    assert ideal.ratio_vs_ideal == 1.0


def test_run_benchmark_subset_and_brute():
    idx, lex, lev, queries = small_setup()
    rows = run_benchmark(idx, lex, lev, queries, 1, methods=("new", "brute"),
                         repeat=1)
    assert [r.method for r in rows] == ["new", "brute"]
    import math
    assert all(math.isnan(r.ratio_vs_ideal) for r in rows)


def test_run_benchmark_correctness_gate(monkeypatch):
    idx, lex, lev, queries = small_setup()
    monkeypatch.setattr(bench, "solve", lambda index, ops, p, bound: [])
    with pytest.raises(CorrectnessError, match="disagrees"):
        run_benchmark(idx, lex, lev, queries, 1, methods=("new", "oflazer"),
                      repeat=1)


def test_format_csv():
    idx, lex, lev, queries = small_setup()
    rows = run_benchmark(idx, lex, lev, queries, 1, methods=("ideal", "new"),
                         repeat=1)
    text = format_csv(rows)
    parsed = list(csv.reader(io.StringIO(text)))
    assert parsed[0] == [
        "method", "bound", "queries", "mean_us", "median_us",
        "total_answers", "checksum", "ratio_vs_ideal",
    ]
    assert len(parsed) == 3
    assert parsed[1][0] == "ideal" and parsed[2][0] == "new"


# ------------------------------------------------------------------- verifier


def test_verify_equivalence_clean():
    idx, lex, lev, queries = small_setup()
    assert verify_equivalence(idx, lex, lev, queries, 1) is None


def test_verify_equivalence_counterexample(monkeypatch):
    idx, lex, lev, queries = small_setup()
    monkeypatch.setattr(bench, "solve", lambda index, ops, p, bound: [])
    got = verify_equivalence(idx, lex, lev, queries, 1)
    assert got is not None
    assert got.pattern == queries[0] and got.bound == 1
    assert got.got == [] and len(got.want) >= 1
