import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lexiscan.scdawg import DOLLAR, HASH, build_index
from conftest import WORDS3, random_words


def all_substrings(words):
    return {w[i:j] for w in words for i in range(len(w)) for j in range(i, len(w) + 1)}


def occurs(words, u):
    return any(u in w for w in words)


# ---------------------------------------------------------------------------
# Worked example
# ---------------------------------------------------------------------------

def test_locate_positions_inside_edge():
    idx = build_index(WORDS3)
    c = idx.locate("e")
    # 'e' sits one symbol short of the edge into the class of "ea"
    assert idx.cursor_string(c) == "e"
    assert c.state == idx.locate("ea").state
    assert idx.fwd.margin_right(c) == 1

    exts = list(idx.right_extensions(c))
    assert [(ch, n.state) for ch, n in exts] == [("a", c.state)]
    assert idx.cursor_string(exts[0][1]) == "ea"


def test_left_extensions_worked_example():
    idx = build_index(WORDS3)
    c = idx.locate("e")
    by_char = {}
    for sym, nxt in idx.left_extensions(c, include_boundaries=True):
        key = "#" if sym is HASH else "$" if sym is DOLLAR else sym
        by_char[key] = nxt
    assert set(by_char) == {"#", "l", "r"}
    assert idx.cursor_string(by_char["l"]) == "le"
    assert idx.cursor_string(by_char["r"]) == "re"
    assert idx.cursor_string(by_char["#"]) == "#e"
    assert idx.state_canonical(by_char["#"].state) == "#ear$"
    assert idx.state_canonical(by_char["l"].state) == "#lead$"
    assert idx.state_canonical(by_char["r"].state) == "#real$"


def test_left_extension_of_ad():
    idx = build_index(WORDS3)
    cur = idx.locate("ad")
    got = {idx.cursor_string(nxt) for _, nxt in idx.left_extensions(cur)}
    assert got == {"ead"}
    deeper = {
        idx.cursor_string(n2)
        for _, n1 in idx.left_extensions(cur)
        for _, n2 in idx.left_extensions(n1)
    }
    assert deeper == {"lead"}


def test_is_entry(lev):
    idx = build_index(WORDS3)
    for w in WORDS3:
        assert idx.is_entry(idx.locate(w))
    for s in ["ea", "lea", "eal", "d", ""]:
        assert not idx.is_entry(idx.locate(s))


def test_locate_misses():
    idx = build_index(WORDS3)
    assert idx.locate("dread") is None
    assert idx.locate("x") is None
    assert idx.locate("aer") is None
    assert idx.locate("") == idx.root_cursor()


# ---------------------------------------------------------------------------
# Exhaustive navigation checks on random lexica
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(10))
def test_every_substring_locates_and_extends(seed):
    rng = random.Random(4000 + seed)
    words = random_words(rng, rng.randint(1, 10), alphabet="abc", max_len=7)
    idx = build_index(words)
    subs = all_substrings(words)
    alphabet = {c for w in words for c in w}
    for u in sorted(subs):
        cur = idx.locate(u)
        assert cur is not None and idx.cursor_string(cur) == u
        assert idx.is_entry(cur) == (u in words)
        # right extension per character agrees with the raw text
        for ch in alphabet:
            nxt = idx.extend_right(cur, ch)
            if occurs(words, u + ch):
                assert nxt is not None and idx.cursor_string(nxt) == u + ch
            else:
                assert nxt is None
            prv = idx.extend_left(cur, ch)
            if occurs(words, ch + u):
                assert prv is not None and idx.cursor_string(prv) == ch + u
            else:
                assert prv is None
        # enumerations are complete and boundary-free by default
        rights = {ch for ch, _ in idx.right_extensions(cur)}
        assert rights == {c for c in alphabet if occurs(words, u + c)}
        lefts = {ch for ch, _ in idx.left_extensions(cur)}
        assert lefts == {c for c in alphabet if occurs(words, c + u)}


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_zigzag_walks_track_strings(data):
    rng = random.Random(data.draw(st.integers(0, 10_000)))
    words = random_words(rng, rng.randint(1, 8), alphabet="ab", max_len=6)
    idx = build_index(words)
    cur = idx.root_cursor()
    u = ""
    for _ in range(data.draw(st.integers(0, 12))):
        side = data.draw(st.sampled_from(["L", "R"]))
        ch = data.draw(st.sampled_from("ab"))
        if side == "R":
            nxt, want = idx.extend_right(cur, ch), u + ch
        else:
            nxt, want = idx.extend_left(cur, ch), ch + u
        if occurs(words, want):
            assert nxt is not None and idx.cursor_string(nxt) == want
            cur, u = nxt, want
        else:
            assert nxt is None
    assert idx.is_entry(cur) == (u in words)
