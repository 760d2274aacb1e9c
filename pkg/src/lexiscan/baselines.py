"""Reference search methods the indexed engine is checked and benchmarked against.

All of them answer the same question as ``search.solve`` — entries within a
weighted distance bound of a pattern, with exact distances — at different
points on the preprocessing/speed curve: a plain scan, a filtered trie walk,
a two-pass trie walk that splits the error budget between the pattern halves,
and a precomputed answer table as the lower bound on response time.
"""

from __future__ import annotations

from bisect import bisect_left

import numpy as np

from .distance import (
    _raw_filter_distance,
    _raw_filter_start,
    _raw_filter_step,
    distance,
    reverse_operations,
)

_MAX_CP = 0x10FFFF


class CoverageError(LookupError):
    """A query fell outside a precomputed answer table."""


def brute_force_search(lexicon, ops, pattern: str, bound: int, *, prefilter=None):
    """Exact scan over every entry.

    For large lexica a coarse numpy prefilter drops entries whose length or
    character multiset already differs more than the budget could change
    them; the survivors still get the exact cutoff computation.
    """
    entries = lexicon.entries
    if prefilter is None:
        prefilter = len(entries) >= 2048
    if prefilter and entries:
        col, bags = lexicon.char_bags
        pvec = np.zeros(bags.shape[1], dtype=np.int32)
        stray = 0
        for c in pattern:
            k = col.get(c)
            if k is None:
                stray += 1
            else:
                pvec[k] += 1
        l1 = np.abs(bags - pvec).sum(axis=1) + stray
        ok = (l1 <= bound * ops.bag_rate) & (
            np.abs(lexicon.lengths - len(pattern)) <= bound * ops.len_rate
        )
        candidates = [entries[i] for i in np.nonzero(ok)[0]]
    else:
        candidates = entries
    out = []
    for w in candidates:
        d = distance(ops, pattern, w, cutoff=bound)
        if isinstance(d, int):
            out.append((w, d))
    out.sort()
    return out


class Trie:
    """Implicit trie over the sorted entry array.

    A node is a ``(lo, hi, depth)`` triple: the entries in ``[lo, hi)`` are
    exactly those starting with ``entries[lo][:depth]``.  Children are found
    by bisecting on the character at ``depth``, so no node objects are built.
    """

    __slots__ = ("entries",)

    def __init__(self, words):
        self.entries = tuple(sorted(words))

    @property
    def root(self):
        return (0, len(self.entries), 0)

    def is_final(self, node) -> bool:
        lo, hi, depth = node
        return lo < hi and len(self.entries[lo]) == depth

    def word(self, node) -> str:
        lo, _, depth = node
        return self.entries[lo][:depth]

    def children(self, node):
        lo, hi, depth = node
        ents = self.entries
        k = lo + 1 if self.is_final(node) else lo
        if k >= hi:
            return
        # Every entry in [k, hi) shares this prefix, so the run of a child
        # character c ends where prefix+succ(c) would sort — one key-free
        # bisect per child instead of a key call per probe.
        prefix = ents[k][:depth]
        while k < hi:
            c = ents[k][depth]
            cp = ord(c) + 1
            end = bisect_left(ents, prefix + chr(cp), k, hi) if cp <= _MAX_CP else hi
            yield c, (k, end, depth + 1)
            k = end

    def state_count(self) -> int:
        count = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            count += 1
            stack.extend(child for _, child in self.children(node))
        return count


def oflazer_search(trie: Trie, ops, pattern: str, bound: int):
    """Depth-first trie walk holding a filter state per node; subtrees die as
    soon as no completion could stay within the bound.

    The loop body inlines both the child bisection and the filter advance:
    this walk touches every near-miss node in the trie, so per-node constant
    factors dominate its benchmark profile.
    """
    ents = trie.entries
    if not ents:
        return []
    compiled, rows0, hist0 = _raw_filter_start(ops, pattern, bound)
    step = compiled.step
    cbound = compiled.bound
    n = compiled.n
    max_rhs = compiled.max_rhs
    hist_len = compiled.hist_len
    lev_only = compiled.lev_only
    pat = compiled.pattern
    out = []
    append_out = out.append
    stack = [(trie.root, rows0, hist0)]
    pop = stack.pop
    push = stack.append
    while stack:
        (lo, hi, depth), rows, hist = pop()
        flo, fvals = rows[-1]
        k = lo
        if len(ents[lo]) == depth:
            j = n - flo
            if 0 <= j < len(fvals) and fvals[j] <= cbound:
                append_out((ents[lo], fvals[j]))
            k += 1
        if k >= hi:
            continue
        # With single-character classes, a row whose whole budget is spent
        # only survives a symbol that matches the pattern inside its window;
        # everything else can be rejected without stepping the filter.
        if lev_only and min(fvals) >= cbound:
            window = pat[flo:flo + len(fvals)]
        else:
            window = None
        prefix = ents[k][:depth]
        d1 = depth + 1
        while k < hi:
            c = ents[k][depth]
            cp = ord(c) + 1
            end = bisect_left(ents, prefix + chr(cp), k, hi) if cp <= _MAX_CP else hi
            if window is not None and c not in window:
                k = end
                continue
            row, shadow = step(rows, hist, c)
            if row is None:
                if shadow > cbound:
                    k = end
                    continue
                row = (0, ())
            if max_rhs == 1:
                push(((k, end, d1), (row,), hist))
            else:
                nh = (hist + (c,))[-hist_len:] if hist_len else ()
                push(((k, end, d1), (rows + (row,))[-max_rhs:], nh))
            k = end
    out.sort()
    return out


def _checkpoint_nodes(trie: Trie, ops, prefix_pattern: str, stage_bound: int):
    """All trie nodes whose string is within stage_bound of prefix_pattern."""
    out = []
    compiled, rows0, hist0 = _raw_filter_start(ops, prefix_pattern, stage_bound)
    stack = [(trie.root, rows0, hist0)]
    while stack:
        node, rows, hist = stack.pop()
        if _raw_filter_distance(compiled, rows) is not None:
            out.append(node)
        for c, child in trie.children(node):
            nxt = _raw_filter_step(compiled, rows, hist, c)
            if nxt is not None:
                stack.append((child, *nxt))
    return out


def _finish_from(trie: Trie, ops, pattern: str, bound: int, seeds, found: dict):
    compiled, rows0, hist0 = _raw_filter_start(ops, pattern, bound)
    for node in sorted(set(seeds)):
        state = (rows0, hist0)
        for ch in trie.word(node):
            state = _raw_filter_step(compiled, *state, ch)
            if state is None:
                break
        if state is None:
            continue
        stack = [(node, *state)]
        while stack:
            node, rows, hist = stack.pop()
            if trie.is_final(node):
                d = _raw_filter_distance(compiled, rows)
                if d is not None:
                    w = trie.word(node)
                    if w not in found or d < found[w]:
                        found[w] = d
            for c, child in trie.children(node):
                nxt = _raw_filter_step(compiled, rows, hist, c)
                if nxt is not None:
                    stack.append((child, *nxt))


def forward_backward_search(trie: Trie, rtrie: Trie, ops, pattern: str, bound: int):
    """Two-pass walk splitting the budget at the pattern midpoint.

    Any match spends at most floor(bound/2) on one half of the pattern, so a
    cheap stage-one walk to the midpoint — forward over the trie, or backward
    over the reversed-entry trie with the leftover budget — finds every
    checkpoint node; stage two resumes each with the full budget.  Operations
    spanning the midpoint cede up to omega_max-1 characters, hence the
    trimmed stage-one patterns.
    """
    h = (len(pattern) + 1) // 2
    fwd_bound = bound // 2
    found: dict = {}

    seeds = []
    for k in range(min(ops.omega_max, h + 1)):
        seeds += _checkpoint_nodes(trie, ops, pattern[:h - k], fwd_bound)
    _finish_from(trie, ops, pattern, bound, seeds, found)

    bwd_bound = bound - fwd_bound - 1
    if bwd_bound >= 0:
        rops = reverse_operations(ops)
        rpattern = pattern[::-1]
        hr = len(pattern) - h
        seeds = []
        for k in range(min(ops.omega_max, hr + 1)):
            seeds += _checkpoint_nodes(rtrie, rops, rpattern[:hr - k], bwd_bound)
        rfound: dict = {}
        _finish_from(rtrie, rops, rpattern, bound, seeds, rfound)
        for w, d in rfound.items():
            w = w[::-1]
            if w not in found or d < found[w]:
                found[w] = d
    return sorted(found.items())


class PerfectIndex:
    """Answer table for a known query set; models an oracle responder whose
    per-query work is one lookup."""

    def __init__(self, answers: dict):
        self._answers = dict(answers)

    def search(self, pattern: str, bound: int):
        try:
            return self._answers[pattern, bound]
        except KeyError:
            raise CoverageError(
                f"query {pattern!r} at bound {bound} is not covered"
            ) from None
