import random

import pytest

from lexiscan.scdawg import (
    DOLLAR,
    HASH,
    LexiconError,
    add_string_cdawg,
    build_index,
    load_lexicon,
    make_lexicon,
)
from conftest import WORDS3, random_words
from oracles import (
    SENT_L,
    SENT_R,
    oracle_classes,
    oracle_transition_count,
)


def walk(idx, seq):
    """Follow a mixed symbol sequence (chars and boundary constants)."""
    cur = idx.root_cursor()
    for sym in seq:
        cur = idx.extend_right(cur, sym)
        if cur is None:
            return None
    return cur


def to_syms(s):
    return [HASH if c == SENT_L else DOLLAR if c == SENT_R else c for c in s]


def to_ids(idx, s):
    return tuple(
        0 if c == SENT_L else 1 if c == SENT_R else idx.char_id[c] for c in s
    )


# ---------------------------------------------------------------------------
# Lexicon handling
# ---------------------------------------------------------------------------

def test_load_lexicon_roundtrip():
    lex = load_lexicon("lead\nreal\near\n")
    assert lex.entries == WORDS3
    assert load_lexicon("lead\nreal\near").entries == WORDS3


def test_load_lexicon_rejects_bad_input():
    with pytest.raises(LexiconError):
        load_lexicon("a\n\nb\n")
    with pytest.raises(LexiconError):
        load_lexicon("a\nb\na\n")
    with pytest.raises(LexiconError):
        make_lexicon(["ok", ""])


def test_add_word_validation():
    idx = build_index(["ab"])
    with pytest.raises(LexiconError):
        add_string_cdawg(idx, "ab")
    with pytest.raises(LexiconError):
        add_string_cdawg(idx, "")


# ---------------------------------------------------------------------------
# Structure against the oracle
# ---------------------------------------------------------------------------

def test_three_word_example_states():
    idx = build_index(WORDS3)
    assert idx.state_count() == 9
    expected = oracle_classes(WORDS3)
    got = {idx.state_canonical(cid) for cid in range(idx.state_count())}
    want = {c.replace(SENT_L, "#").replace(SENT_R, "$") for c in expected}
    assert got == want


def test_three_word_class_members():
    idx = build_index(WORDS3)
    for canon, members in oracle_classes(WORDS3).items():
        states = set()
        for m in members:
            cur = walk(idx, to_syms(m))
            assert cur is not None, m
            states.add(cur.state)
        assert len(states) == 1, (canon, members)
        cid = states.pop()
        assert idx.fwd.canonical_ids(cid) == to_ids(idx, canon)


@pytest.mark.parametrize("seed", range(12))
def test_random_lexicon_classes_and_bijection(seed):
    rng = random.Random(1000 + seed)
    words = random_words(rng, rng.randint(1, 9), alphabet="abc", max_len=6)
    idx = build_index(words)
    expected = oracle_classes(words)
    assert idx.state_count() == len(expected)
    got = {idx.fwd.canonical_ids(cid) for cid in range(idx.state_count())}
    assert got == {to_ids(idx, c) for c in expected}
    assert idx.transition_count() == oracle_transition_count(words)
    # member grouping
    for canon, members in expected.items():
        states = {walk(idx, to_syms(m)).state for m in members}
        assert len(states) == 1
    # the bijection sends each state to the reverse state of its reversed
    # canonical; reverse-side canonicals must be exactly the reverses
    rev_canons = {idx.rev.canonical_ids(cid) for cid in range(idx.state_count())}
    assert rev_canons == {tuple(reversed(c)) for c in got}
    for cid in range(idx.state_count()):
        img = idx.b_map[cid]
        assert idx.rev.canonical_ids(img) == tuple(reversed(idx.fwd.canonical_ids(cid)))
        assert idx.b_inv[img] == cid


@pytest.mark.parametrize("seed", range(8))
def test_size_bounds_on_random_lexica(seed):
    rng = random.Random(2000 + seed)
    words = random_words(rng, rng.randint(1, 25), alphabet="ab", max_len=10)
    idx = build_index(words)
    norm = sum(len(w) + 1 for w in words)
    assert idx.state_count() <= 2 * norm
    assert idx.transition_count() <= 2 * norm - 1


def test_literal_hash_dollar_are_ordinary():
    words = ["a#b", "$a", "#", "$$"]
    idx = build_index(words)
    assert idx.is_entry(idx.locate("a#b"))
    assert idx.is_entry(idx.locate("#"))
    assert not idx.is_entry(idx.locate("a#"))
    expected = oracle_classes(words)
    assert idx.state_count() == len(expected)
    got = {idx.fwd.canonical_ids(cid) for cid in range(idx.state_count())}
    assert got == {to_ids(idx, c) for c in expected}


# ---------------------------------------------------------------------------
# Incremental adds
# ---------------------------------------------------------------------------

def test_incremental_matches_fresh_build():
    words = ["lead", "real", "ear", "read", "dear"]
    idx = build_index([])
    seen_canons = {}
    for k, w in enumerate(words, 1):
        add_string_cdawg(idx, w)
        fresh = build_index(words[:k])
        assert idx.state_count() == fresh.state_count()
        assert idx.transition_count() == fresh.transition_count()
        mine = {idx.state_canonical(c) for c in range(idx.state_count())}
        theirs = {fresh.state_canonical(c) for c in range(fresh.state_count())}
        assert mine == theirs
        # ids are stable: canonicals observed earlier never change
        for cid, canon in seen_canons.items():
            assert idx.state_canonical(cid) == canon
        seen_canons = {c: idx.state_canonical(c) for c in range(idx.state_count())}


def test_freeze_blocks_adds_but_not_queries():
    idx = build_index(WORDS3)
    idx.freeze()
    assert idx.is_entry(idx.locate("ear"))
    assert idx.state_count() == 9
    with pytest.raises(RuntimeError):
        add_string_cdawg(idx, "new")


# ---------------------------------------------------------------------------
# Boundary bounds
# ---------------------------------------------------------------------------

def direct_bounds(words, u):
    pres, posts = [], []
    for w in words:
        at = w.find(u)
        while at != -1:
            pres.append(at)
            posts.append(len(w) - at - len(u))
            at = w.find(u, at + 1)
    if not pres:
        return None
    return (min(pres), max(pres), min(posts), max(posts))


def test_three_word_bounds_frozen():
    idx = build_index(WORDS3)
    assert idx.boundary_bounds(idx.locate("ad")) == (2, 2, 0, 0)
    assert idx.boundary_bounds(idx.locate("ea")) == (0, 1, 1, 1)
    assert idx.boundary_bounds(idx.locate("d"))[0] == 3
    assert idx.boundary_bounds(idx.root_cursor()) == (0, 4, 0, 4)


@pytest.mark.parametrize("seed", range(10))
def test_bounds_match_direct_enumeration(seed):
    rng = random.Random(3000 + seed)
    words = random_words(rng, rng.randint(1, 12), alphabet="ab", max_len=7)
    idx = build_index(words)
    subs = {w[i:j] for w in words for i in range(len(w)) for j in range(i + 1, len(w) + 1)}
    for u in subs:
        cur = idx.locate(u)
        assert cur is not None, u
        assert idx.boundary_bounds(cur) == direct_bounds(words, u), (words, u)
    assert idx.boundary_bounds(idx.root_cursor()) == (
        0, max(map(len, words)), 0, max(map(len, words)),
    )
