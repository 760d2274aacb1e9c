"""Bidirectional compacted suffix automaton over a lexicon.

The index stores every entry as a padded block ``# entry $`` (the two
delimiters are out-of-band symbol ids, distinct from any literal ``#`` or
``$`` characters inside entries).  Two suffix automatons are built, one over
the blocks and one over the reversed blocks; both are compacted so that a
state exists exactly for each two-sided-maximal substring class, and a
bijection links each forward state to the reverse state of its reversed
canonical string.  Cursors then support extending a substring by one symbol
on either side in O(1), which is what the search engine needs.

Construction is classic online suffix-automaton insertion (one reset per
block, clone-aware); the compacted view is derived lazily: a state is kept
exactly when it is the root or its out-degree differs from 1, and compact
transitions skip over chains of out-degree-1 states.
"""

from __future__ import annotations

import struct
import zlib
from array import array
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

HASH_ID = 0    # block opener
DOLLAR_ID = 1  # block closer
_FIRST_CHAR_ID = 2

_INF = 1 << 60


def _as_q(np_array):
    arr = array("q")
    arr.frombytes(np.ascontiguousarray(np_array, dtype=np.int64).tobytes())
    return arr


class _Sentinel:
    __slots__ = ("_glyph",)

    def __init__(self, glyph):
        self._glyph = glyph

    def __repr__(self):
        return f"<boundary {self._glyph}>"


#: Entry-boundary symbols accepted by extend_left/extend_right.  They render
#: as '#' and '$' in cursor_string and dumps but are distinct from the literal
#: characters, which entries may freely contain.
HASH = _Sentinel("#")
DOLLAR = _Sentinel("$")


class LexiconError(ValueError):
    """Invalid lexicon content (empty or duplicate entries)."""


@dataclass(frozen=True)
class Lexicon:
    entries: tuple

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @cached_property
    def char_bags(self):
        """Per-entry character counts over the lexicon alphabet (for coarse
        prefilters); rows align with ``entries``."""
        alphabet = sorted({c for w in self.entries for c in w})
        col = {c: k for k, c in enumerate(alphabet)}
        bags = np.zeros((len(self.entries), len(alphabet)), dtype=np.int32)
        for r, w in enumerate(self.entries):
            for c in w:
                bags[r, col[c]] += 1
        return col, bags

    @cached_property
    def lengths(self):
        return np.array([len(w) for w in self.entries], dtype=np.int32)


def make_lexicon(words) -> Lexicon:
    entries = tuple(words)
    seen = set()
    for w in entries:
        if w == "":
            raise LexiconError("empty entry")
        if w in seen:
            raise LexiconError(f"duplicate entry {w!r}")
        seen.add(w)
    return Lexicon(entries)


def load_lexicon(text: str) -> Lexicon:
    """One entry per line; a single trailing newline is tolerated."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return make_lexicon(lines)


class Cursor(NamedTuple):
    """A substring occurrence handle: ``length`` symbols of the indexed text
    starting at ``pos``, positioned inside the recorded occurrence of the
    canonical string of ``state``."""

    state: int
    pos: int
    length: int


# ---------------------------------------------------------------------------
# Suffix automaton with compacted view
# ---------------------------------------------------------------------------

class _Automaton:
    """One direction (forward or reverse) of the index.

    The raw automaton uses parallel ``array('q')`` columns and a linked-list
    edge pool so that clone copies and per-state walks stay cheap at millions
    of states.  The compacted view is rebuilt on demand but state ids persist
    across rebuilds: compactness is monotone, so new view states are only ever
    appended.
    """

    def __init__(self, track_margins=False):
        self.text = array("q")
        self.slen = array("q", [0])
        self.slink = array("q", [-1])
        self.send = array("q", [-1])
        self.outdeg = array("q", [0])
        self.head = array("q", [-1])
        self.enext = array("q")
        self.esym = array("q")
        self.etgt = array("q")
        self.track_margins = track_margins
        if track_margins:
            self.min_f = array("q", [_INF])
            self.max_f = array("q", [-1])
            self.min_g = array("q", [_INF])
            self.max_g = array("q", [-1])
        # compacted view (stable ids, lazily refreshed)
        self.view_of = array("q", [-1])   # raw state -> view state or -1
        self.c_sam = array("q")           # view state -> raw state
        self.c_len = array("q")
        self.c_end = array("q")
        self.c_link = array("q")
        self.ct_ptr = array("q", [0])
        self.ct_sym = array("q")
        self.ct_start = array("q")
        self.ct_len = array("q")
        self.ct_tgt = array("q")
        if track_margins:
            self.c_pre_lo = array("q")
            self.c_pre_hi = array("q")
            self.c_post_lo = array("q")
            self.c_post_hi = array("q")
        self.frozen = False

    # -- raw construction -----------------------------------------------

    def _new_state(self, length, link, end):
        self.slen.append(length)
        self.slink.append(link)
        self.send.append(end)
        self.outdeg.append(0)
        self.head.append(-1)
        if self.track_margins:
            self.min_f.append(_INF)
            self.max_f.append(-1)
            self.min_g.append(_INF)
            self.max_g.append(-1)
        return len(self.slen) - 1

    def _find(self, s, c):
        esym = self.esym
        etgt = self.etgt
        enext = self.enext
        e = self.head[s]
        while e != -1:
            if esym[e] == c:
                return etgt[e]
            e = enext[e]
        return -1

    def _add_edge(self, s, c, t):
        self.esym.append(c)
        self.etgt.append(t)
        self.enext.append(self.head[s])
        self.head[s] = len(self.esym) - 1
        self.outdeg[s] += 1

    def _set_edge(self, s, c, t):
        esym = self.esym
        enext = self.enext
        e = self.head[s]
        while e != -1:
            if esym[e] == c:
                self.etgt[e] = t
                return
            e = enext[e]
        raise AssertionError("edge to retarget not found")

    def _clone(self, q, length):
        nq = self._new_state(length, self.slink[q], self.send[q])
        e = self.head[q]
        while e != -1:
            self._add_edge(nq, self.esym[e], self.etgt[e])
            e = self.enext[e]
        return nq

    def _extend(self, last, c, pos):
        """Online insertion of one symbol at text position ``pos``."""
        q = self._find(last, c)
        if q != -1:
            if self.slen[q] == self.slen[last] + 1:
                return q
            clone = self._clone(q, self.slen[last] + 1)
            p = last
            while p != -1 and self._find(p, c) == q:
                self._set_edge(p, c, clone)
                p = self.slink[p]
            self.slink[q] = clone
            return clone
        cur = self._new_state(self.slen[last] + 1, -1, pos)
        p = last
        while p != -1 and self._find(p, c) == -1:
            self._add_edge(p, c, cur)
            p = self.slink[p]
        if p == -1:
            self.slink[cur] = 0
        else:
            q = self._find(p, c)
            if self.slen[q] == self.slen[p] + 1:
                self.slink[cur] = q
            else:
                clone = self._clone(q, self.slen[p] + 1)
                while p != -1 and self._find(p, c) == q:
                    self._set_edge(p, c, clone)
                    p = self.slink[p]
                self.slink[q] = clone
                self.slink[cur] = clone
        return cur

    def add_block(self, ids):
        """Feed one padded block; returns (start, end) text positions."""
        if self.frozen:
            raise RuntimeError("index is frozen; no further entries can be added")
        start = len(self.text)
        last = 0
        block_end = start + len(ids) - 1
        track = self.track_margins
        for off, c in enumerate(ids):
            pos = start + off
            self.text.append(c)
            last = self._extend(last, c, pos)
            if track:
                f = pos - start
                g = block_end - pos
                if f < self.min_f[last]:
                    self.min_f[last] = f
                if f > self.max_f[last]:
                    self.max_f[last] = f
                if g < self.min_g[last]:
                    self.min_g[last] = g
                if g > self.max_g[last]:
                    self.max_g[last] = g
        return start, block_end

    # -- compacted view ---------------------------------------------------

    def _is_explicit(self, s):
        return s == 0 or self.outdeg[s] != 1

    def refresh(self):
        n = len(self.slen)
        outdeg = self.outdeg
        view_of = self.view_of
        while len(view_of) < n:
            view_of.append(-1)
        for s in range(n):
            if view_of[s] == -1 and (s == 0 or outdeg[s] != 1):
                view_of[s] = len(self.c_sam)
                self.c_sam.append(s)
        # resolve out-degree-1 chains: res_tgt[s] = first compact state reached
        # by following single edges out of s; res_steps = edges walked
        slen_np = np.frombuffer(self.slen, dtype=np.int64)
        order = np.argsort(slen_np, kind="stable")[::-1]
        res_tgt = array("q", bytes(8 * n))
        res_steps = array("q", bytes(8 * n))
        head = self.head
        etgt = self.etgt
        for s in map(int, order):
            if s == 0 or outdeg[s] != 1:
                res_tgt[s] = s
                res_steps[s] = 0
            else:
                t = etgt[head[s]]
                res_tgt[s] = res_tgt[t]
                res_steps[s] = res_steps[t] + 1
        # rebuild compact columns and transitions
        m = len(self.c_sam)
        self.c_len = array("q", bytes(8 * m))
        self.c_end = array("q", bytes(8 * m))
        self.c_link = array("q", bytes(8 * m))
        slen = self.slen
        send = self.send
        slink = self.slink
        esym = self.esym
        enext = self.enext
        src = []
        sym = []
        tgt = []
        lens = []
        for cid in range(m):
            s = self.c_sam[cid]
            self.c_len[cid] = slen[s]
            self.c_end[cid] = send[s]
            if s == 0:
                self.c_link[cid] = -1
            else:
                p = slink[s]
                assert view_of[p] != -1, "link parent of a compact state must be compact"
                self.c_link[cid] = view_of[p]
            e = head[s]
            while e != -1:
                t = etgt[e]
                rt = res_tgt[t]
                src.append(cid)
                sym.append(esym[e])
                tgt.append(view_of[rt])
                lens.append(res_steps[t] + 1)
                e = enext[e]
        src = np.array(src, dtype=np.int64)
        sym = np.array(sym, dtype=np.int64)
        tgt = np.array(tgt, dtype=np.int64)
        lens = np.array(lens, dtype=np.int64)
        order = np.lexsort((sym, src))
        src, sym, tgt, lens = src[order], sym[order], tgt[order], lens[order]
        c_end_np = np.frombuffer(self.c_end, dtype=np.int64)
        starts = c_end_np[tgt] - lens + 1
        counts = np.bincount(src, minlength=m) if len(src) else np.zeros(m, dtype=np.int64)
        ptr = np.zeros(m + 1, dtype=np.int64)
        np.cumsum(counts, out=ptr[1:])
        self.ct_ptr = _as_q(ptr)
        self.ct_sym = _as_q(sym)
        self.ct_start = _as_q(starts)
        self.ct_len = _as_q(lens)
        self.ct_tgt = _as_q(tgt)
        if self.track_margins:
            self._propagate_margins()

    def _propagate_margins(self):
        """Push per-position margin records up the link tree (descending
        length, so every state is finalized before it feeds its parent), then
        bake per-view-state raw bounds."""
        n = len(self.slen)
        slen_np = np.frombuffer(self.slen, dtype=np.int64).copy()
        slink_np = np.frombuffer(self.slink, dtype=np.int64).copy()
        min_f = np.frombuffer(self.min_f, dtype=np.int64).copy()
        max_f = np.frombuffer(self.max_f, dtype=np.int64).copy()
        min_g = np.frombuffer(self.min_g, dtype=np.int64).copy()
        max_g = np.frombuffer(self.max_g, dtype=np.int64).copy()
        order = np.argsort(slen_np, kind="stable")[::-1]
        lens_sorted = slen_np[order]
        # states grouped by length, longest group first
        boundaries = np.nonzero(np.diff(lens_sorted))[0] + 1
        groups = np.split(order, boundaries)
        for group in groups:
            group = group[group != 0]
            if not len(group):
                continue
            parents = slink_np[group]
            np.minimum.at(min_f, parents, min_f[group])
            np.maximum.at(max_f, parents, max_f[group])
            np.minimum.at(min_g, parents, min_g[group])
            np.maximum.at(max_g, parents, max_g[group])
        self.min_f = _as_q(min_f)
        self.max_f = _as_q(max_f)
        self.min_g = _as_q(min_g)
        self.max_g = _as_q(max_g)
        m = len(self.c_sam)
        self.c_pre_lo = array("q", bytes(8 * m))
        self.c_pre_hi = array("q", bytes(8 * m))
        self.c_post_lo = array("q", bytes(8 * m))
        self.c_post_hi = array("q", bytes(8 * m))
        for cid in range(m):
            s = self.c_sam[cid]
            self.c_pre_lo[cid] = self.min_f[s] - self.slen[s]
            self.c_pre_hi[cid] = self.max_f[s] - self.slen[s]
            self.c_post_lo[cid] = self.min_g[s] - 1
            self.c_post_hi[cid] = self.max_g[s] - 1

    def freeze(self):
        """Release raw-automaton storage; the compacted view stays queryable."""
        self.frozen = True
        empty = array("q")
        self.slen = self.slink = self.send = empty
        self.outdeg = self.head = self.enext = self.esym = self.etgt = empty
        self.view_of = empty
        self.c_sam = empty
        if self.track_margins:
            self.min_f = self.max_f = self.min_g = self.max_g = empty

    # -- view queries -------------------------------------------------------

    def state_count(self):
        return len(self.c_len)

    def transition_count(self):
        return len(self.ct_sym)

    def transitions(self, cid):
        lo, hi = self.ct_ptr[cid], self.ct_ptr[cid + 1]
        for e in range(lo, hi):
            yield self.ct_sym[e], self.ct_start[e], self.ct_len[e], self.ct_tgt[e]

    def find_transition(self, cid, sid):
        lo, hi = self.ct_ptr[cid], self.ct_ptr[cid + 1]
        ct_sym = self.ct_sym
        for e in range(lo, hi):
            if ct_sym[e] == sid:
                return self.ct_start[e], self.ct_len[e], self.ct_tgt[e]
        return None

    def canonical_ids(self, cid):
        end = self.c_end[cid]
        length = self.c_len[cid]
        return tuple(self.text[end - length + 1:end + 1])

    # cursor primitives; a cursor's string occupies text[pos : pos+length]
    # inside the recorded occurrence of its state's canonical string

    def margin_right(self, cur):
        return self.c_end[cur.state] - (cur.pos + cur.length - 1)

    def margin_left(self, cur):
        return cur.pos - (self.c_end[cur.state] - self.c_len[cur.state] + 1)

    def extend(self, cur, sid):
        if self.margin_right(cur):
            if self.text[cur.pos + cur.length] == sid:
                return Cursor(cur.state, cur.pos, cur.length + 1)
            return None
        hit = self.find_transition(cur.state, sid)
        if hit is None:
            return None
        start, _, t = hit
        return Cursor(t, start - cur.length, cur.length + 1)

    def extensions(self, cur):
        """Yield (symbol id, cursor) for every one-symbol right extension."""
        L = cur.length
        if self.margin_right(cur):
            sid = self.text[cur.pos + L]
            yield sid, Cursor(cur.state, cur.pos, L + 1)
            return
        lo, hi = self.ct_ptr[cur.state], self.ct_ptr[cur.state + 1]
        for e in range(lo, hi):
            yield self.ct_sym[e], Cursor(self.ct_tgt[e], self.ct_start[e] - L, L + 1)


# ---------------------------------------------------------------------------
# The public index
# ---------------------------------------------------------------------------

class Index:
    """Lexicon index: two compacted automatons plus the state bijection."""

    def __init__(self):
        self._words = []
        self._word_set = set()
        self.char_id = {}
        self.id_char = ["#", "$"]  # display glyphs for the boundary ids
        self.fwd = _Automaton(track_margins=True)
        self.rev = _Automaton()
        self.blocks = []       # (start, end) in fwd text, end = position of closer
        self.rev_blocks = []
        self.b_map = array("q")
        self.b_inv = array("q")
        self.max_entry_len = 0
        self._dirty = True

    # -- construction ---------------------------------------------------

    def _ids_for(self, word, create):
        ids = []
        for ch in word:
            sid = self.char_id.get(ch)
            if sid is None:
                if not create:
                    return None
                sid = len(self.id_char)
                self.char_id[ch] = sid
                self.id_char.append(ch)
            ids.append(sid)
        return ids

    def add_word(self, word):
        if self.fwd.frozen:
            raise RuntimeError("index is frozen; no further entries can be added")
        if word == "":
            raise LexiconError("empty entry")
        if word in self._word_set:
            raise LexiconError(f"duplicate entry {word!r}")
        ids = self._ids_for(word, create=True)
        block = [HASH_ID] + ids + [DOLLAR_ID]
        self.blocks.append(self.fwd.add_block(block))
        self.rev_blocks.append(self.rev.add_block(block[::-1]))
        self._words.append(word)
        self._word_set.add(word)
        self.max_entry_len = max(self.max_entry_len, len(word))
        self._dirty = True

    @property
    def words(self):
        return tuple(self._words)

    def _ensure_view(self):
        if not self._dirty:
            return
        self.fwd.refresh()
        self.rev.refresh()
        self._rebuild_bijection()
        self._dirty = False

    def _rebuild_bijection(self):
        """b maps each forward state to the reverse state whose canonical is
        the reversed forward canonical.  Processing states shortest-first,
        the reversed canonical of a state extends its link parent's reversed
        canonical, so a single reverse transition from the parent's image
        lands exactly on the image."""
        fwd, rev = self.fwd, self.rev
        m = fwd.state_count()
        assert rev.state_count() == m, "view sizes must agree"
        b = array("q", bytes(8 * m))
        order = np.argsort(np.frombuffer(fwd.c_len, dtype=np.int64), kind="stable")
        text = fwd.text
        for cid in map(int, order):
            parent = fwd.c_link[cid]
            if parent == -1:
                b[cid] = 0
                continue
            sid = text[fwd.c_end[cid] - fwd.c_len[parent]]
            hit = rev.find_transition(b[parent], sid)
            assert hit is not None, "reverse image transition missing"
            b[cid] = hit[2]
            assert rev.c_len[hit[2]] == fwd.c_len[cid], "image length mismatch"
        inv = array("q", bytes(8 * m))
        seen = bytearray(m)
        for cid in range(m):
            r = b[cid]
            assert not seen[r], "bijection collision"
            seen[r] = 1
            inv[r] = cid
        self.b_map = b
        self.b_inv = inv

    def freeze(self):
        """Drop construction state; queries keep working, adds raise."""
        self._ensure_view()
        self.fwd.freeze()
        self.rev.freeze()

    # -- sizes ------------------------------------------------------------

    def state_count(self):
        self._ensure_view()
        return self.fwd.state_count()

    def transition_count(self):
        self._ensure_view()
        return self.fwd.transition_count()

    # -- symbols ----------------------------------------------------------

    def symbol_id(self, symbol):
        """Map a 1-char string or boundary constant to its id, or None."""
        if symbol is HASH:
            return HASH_ID
        if symbol is DOLLAR:
            return DOLLAR_ID
        return self.char_id.get(symbol)

    def render_ids(self, ids):
        return "".join(self.id_char[i] for i in ids)

    # -- navigation ---------------------------------------------------------

    def root_cursor(self) -> Cursor:
        self._ensure_view()
        return Cursor(0, 0, 0)

    def extend_right(self, cur: Cursor, symbol):
        self._ensure_view()
        sid = self.symbol_id(symbol)
        if sid is None:
            return None
        return self.fwd.extend(cur, sid)

    def _to_rev(self, cur: Cursor) -> Cursor:
        rstate = int(self.b_map[cur.state])
        o = self.fwd.margin_right(cur)
        rev_start = self.rev.c_end[rstate] - self.rev.c_len[rstate] + 1
        return Cursor(rstate, rev_start + o, cur.length)

    def _from_rev(self, rcur: Cursor) -> Cursor:
        fstate = int(self.b_inv[rcur.state])
        o = self.rev.margin_left(rcur)
        return Cursor(fstate, self.fwd.c_end[fstate] - o - rcur.length + 1, rcur.length)

    def extend_left(self, cur: Cursor, symbol):
        self._ensure_view()
        sid = self.symbol_id(symbol)
        if sid is None:
            return None
        rcur = self.rev.extend(self._to_rev(cur), sid)
        if rcur is None:
            return None
        return self._from_rev(rcur)

    def right_extensions(self, cur: Cursor, include_boundaries=False):
        """(symbol, cursor) pairs for one-symbol right extensions.  By default
        only entry characters are yielded; boundary symbols come out as the
        HASH/DOLLAR constants when requested."""
        self._ensure_view()
        for sid, nxt in self.fwd.extensions(cur):
            if sid >= _FIRST_CHAR_ID:
                yield self.id_char[sid], nxt
            elif include_boundaries:
                yield (HASH if sid == HASH_ID else DOLLAR), nxt

    def left_extensions(self, cur: Cursor, include_boundaries=False):
        self._ensure_view()
        rcur = self._to_rev(cur)
        for sid, rnxt in self.rev.extensions(rcur):
            if sid >= _FIRST_CHAR_ID:
                yield self.id_char[sid], self._from_rev(rnxt)
            elif include_boundaries:
                yield (HASH if sid == HASH_ID else DOLLAR), self._from_rev(rnxt)

    def locate(self, s: str):
        """Cursor for an exact substring of some entry, or None."""
        cur = self.root_cursor()
        for ch in s:
            cur = self.extend_right(cur, ch)
            if cur is None:
                return None
        return cur

    def cursor_string(self, cur: Cursor) -> str:
        self._ensure_view()
        return self.render_ids(self.fwd.text[cur.pos:cur.pos + cur.length])

    def is_entry(self, cur: Cursor) -> bool:
        """Whether the cursor string is exactly a whole entry."""
        opened = self.extend_left(cur, HASH)
        if opened is None:
            return False
        return self.extend_right(opened, DOLLAR) is not None

    def boundary_bounds(self, cur: Cursor):
        """(min_pre, max_pre, min_post, max_post): how many entry characters
        can sit left/right of the cursor string across all its occurrences.
        Defined for cursors whose string contains no boundary symbols."""
        self._ensure_view()
        if cur.length == 0:
            return (0, self.max_entry_len, 0, self.max_entry_len)
        fwd = self.fwd
        a = fwd.margin_left(cur)
        b = fwd.margin_right(cur)
        s = cur.state
        return (
            fwd.c_pre_lo[s] + a,
            fwd.c_pre_hi[s] + a,
            fwd.c_post_lo[s] + b,
            fwd.c_post_hi[s] + b,
        )

    # -- whole-index views (dump/debug) --------------------------------------

    def state_canonical(self, cid: int) -> str:
        self._ensure_view()
        return self.render_ids(self.fwd.canonical_ids(cid))

    def state_transitions(self, cid: int):
        """(first char, full label, target) triples, boundary ids rendered."""
        self._ensure_view()
        fwd = self.fwd
        for sid, start, llen, tgt in fwd.transitions(cid):
            label = self.render_ids(fwd.text[start:start + llen])
            yield self.id_char[sid], label, tgt


def build_index(lexicon) -> Index:
    """Index a Lexicon (or iterable of entries); the result accepts more adds."""
    idx = Index()
    entries = lexicon.entries if isinstance(lexicon, Lexicon) else tuple(lexicon)
    for word in entries:
        idx.add_word(word)
    idx._ensure_view()
    return idx


def add_string_cdawg(index: Index, word: str):
    """Insert one more entry into a live index."""
    index.add_word(word)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

_MAGIC = b"SCDG"
_VERSION = 1


def _pack_array(out, arr):
    out.append(struct.pack("<Q", len(arr)))
    out.append(arr.tobytes())


def _emit_view(out, auto: _Automaton, margins: bool):
    _pack_array(out, auto.text)
    out.append(struct.pack("<Q", len(auto.c_len)))
    for col in (auto.c_len, auto.c_end, auto.c_link):
        out.append(col.tobytes())
    if margins:
        for col in (auto.c_pre_lo, auto.c_pre_hi, auto.c_post_lo, auto.c_post_hi):
            out.append(col.tobytes())
    out.append(struct.pack("<Q", len(auto.ct_sym)))
    # transitions stored per source state in symbol order (already CSR-sorted)
    srcs = array("q")
    for cid in range(len(auto.c_len)):
        srcs.extend([cid] * (auto.ct_ptr[cid + 1] - auto.ct_ptr[cid]))
    for col in (srcs, auto.ct_sym, auto.ct_start, auto.ct_len, auto.ct_tgt):
        out.append(col.tobytes())


def serialize(index: Index) -> bytes:
    """Deterministic byte image of the compacted index (construction state is
    not kept, so a deserialized index is frozen)."""
    index._ensure_view()
    out = [_MAGIC, struct.pack("<I", _VERSION)]
    out.append(struct.pack("<I", len(index.id_char)))
    for ch in index.id_char[_FIRST_CHAR_ID:]:
        out.append(struct.pack("<I", ord(ch)))
    out.append(struct.pack("<Q", len(index.words)))
    for start, end in index.blocks:
        out.append(struct.pack("<QQ", start, end))
    for start, end in index.rev_blocks:
        out.append(struct.pack("<QQ", start, end))
    _emit_view(out, index.fwd, margins=True)
    _emit_view(out, index.rev, margins=False)
    out.append(index.b_map.tobytes())
    blob = b"".join(out)
    return blob + struct.pack("<I", zlib.crc32(blob))


class _Reader:
    def __init__(self, data):
        self.data = data
        self.at = 0

    def take(self, fmt):
        vals = struct.unpack_from(fmt, self.data, self.at)
        self.at += struct.calcsize(fmt)
        return vals if len(vals) > 1 else vals[0]

    def take_i64(self, count):
        arr = array("q")
        arr.frombytes(self.data[self.at:self.at + 8 * count])
        self.at += 8 * count
        return arr


def _read_view(r: _Reader, auto: _Automaton, margins: bool):
    tlen = r.take("<Q")
    auto.text = r.take_i64(tlen)
    m = r.take("<Q")
    auto.c_len = r.take_i64(m)
    auto.c_end = r.take_i64(m)
    auto.c_link = r.take_i64(m)
    if margins:
        auto.c_pre_lo = r.take_i64(m)
        auto.c_pre_hi = r.take_i64(m)
        auto.c_post_lo = r.take_i64(m)
        auto.c_post_hi = r.take_i64(m)
    ecount = r.take("<Q")
    srcs = r.take_i64(ecount)
    auto.ct_sym = r.take_i64(ecount)
    auto.ct_start = r.take_i64(ecount)
    auto.ct_len = r.take_i64(ecount)
    auto.ct_tgt = r.take_i64(ecount)
    ptr = array("q", bytes(8 * (m + 1)))
    for s in srcs:
        ptr[s + 1] += 1
    for s in range(m):
        ptr[s + 1] += ptr[s]
    auto.ct_ptr = ptr
    auto.frozen = True
    return m


class SerializationError(ValueError):
    """Corrupt or incompatible index image."""


def deserialize(data: bytes) -> Index:
    if len(data) < 12 or data[:4] != _MAGIC:
        raise SerializationError("not an index image")
    body, crc = data[:-4], struct.unpack("<I", data[-4:])[0]
    if zlib.crc32(body) != crc:
        raise SerializationError("checksum mismatch")
    r = _Reader(body)
    r.at = 4
    version = r.take("<I")
    if version != _VERSION:
        raise SerializationError(f"unsupported version {version}")
    idx = Index()
    nsym = r.take("<I")
    for _ in range(nsym - _FIRST_CHAR_ID):
        ch = chr(r.take("<I"))
        idx.char_id[ch] = len(idx.id_char)
        idx.id_char.append(ch)
    nwords = r.take("<Q")
    idx.blocks = [tuple(r.take("<QQ")) for _ in range(nwords)]
    idx.rev_blocks = [tuple(r.take("<QQ")) for _ in range(nwords)]
    m = _read_view(r, idx.fwd, margins=True)
    _read_view(r, idx.rev, margins=False)
    idx.b_map = r.take_i64(m)
    inv = array("q", bytes(8 * m))
    for cid in range(m):
        inv[idx.b_map[cid]] = cid
    idx.b_inv = inv
    words = []
    for start, end in idx.blocks:
        words.append(idx.render_ids(idx.fwd.text[start + 1:end]))
    idx._words = words
    idx._word_set = set(words)
    idx.max_entry_len = max((len(w) for w in words), default=0)
    idx._dirty = False
    return idx
