"""Bounded-distance lexicon search driven by a query decomposition tree.

A pattern with bound b is cut into b+1 parts, one of which must match a
candidate exactly (pigeonhole over the alignment weight); parts are paired
into a binary tree whose internal nodes carry the partial bounds.  Leaves are
answered by exact index lookup, and every internal node grows its children's
candidate substrings outward — right extensions for left children, left
extensions for right children — while an incremental filter tracks the
alignment weight and occurrence-position bounds prune extensions that could
never reach an entry boundary within the remaining budget.

Patterns shorter than b+1 cannot be decomposed; ``solve`` falls back to a
filtered walk of the whole index and flags the result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .distance import (
    distance,
    filter_distance,
    filter_start,
    filter_step,
    reverse_operations,
)
from .scdawg import Cursor


class QueryTooShort(ValueError):
    """The pattern has fewer than bound+1 characters, so no part can be
    guaranteed to match exactly."""


@dataclass(frozen=True)
class QueryNode:
    """One node of the decomposition: pattern[lo:hi] searched within bound."""

    pattern: str
    lo: int
    hi: int
    bound: int
    children: tuple

    @property
    def text(self) -> str:
        return self.pattern[self.lo:self.hi]

    def reduct(self, trim_left: int = 0, trim_right: int = 0) -> str:
        """The node's pattern with boundary characters ceded to straddling
        operations of the neighbouring parts."""
        if trim_left + trim_right > self.hi - self.lo:
            raise ValueError("trims exceed the part")
        return self.pattern[self.lo + trim_left:self.hi - trim_right]

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


def build_query_tree(pattern: str, bound: int) -> QueryNode:
    """Cut the pattern into bound+1 parts (shorter parts first, so remainders
    go to the last parts) and pair them into a binary tree; an internal node
    covering k parts gets bound k-1."""
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    parts = bound + 1
    if len(pattern) < parts:
        raise QueryTooShort(
            f"pattern of length {len(pattern)} cannot be cut into {parts} nonempty parts"
        )
    base = len(pattern) // parts
    rem = len(pattern) - base * parts
    spans = []
    at = 0
    for k in range(parts):
        size = base + (1 if k >= parts - rem else 0)
        spans.append((at, at + size))
        at += size

    def make(chunk):
        if len(chunk) == 1:
            lo, hi = chunk[0]
            return QueryNode(pattern, lo, hi, 0, ())
        half = (len(chunk) + 1) // 2
        left = make(chunk[:half])
        right = make(chunk[half:])
        return QueryNode(pattern, chunk[0][0], chunk[-1][1], len(chunk) - 1, (left, right))

    return make(spans)


class DerivedQuery(NamedTuple):
    node: QueryNode
    trim_left: int
    trim_right: int


def derived_queries(tree: QueryNode, omega_max: int):
    """Every (node, trims) pair a demand-driven solve can request, preorder.

    The root is asked untrimmed; a child is asked with the parent's trim on
    its outer flank while the inner flank ranges over the 0..omega_max-1
    characters a straddling operation could consume.  Trims that would
    swallow a whole part are dropped.
    """
    out = []

    def visit(node, demands):
        demands = sorted(d for d in demands if d[0] + d[1] <= node.hi - node.lo)
        for ti, tj in demands:
            out.append(DerivedQuery(node, ti, tj))
        if not node.children:
            return
        left, right = node.children
        visit(left, {(i, j1) for i, _ in demands for j1 in range(omega_max)})
        visit(right, {(i1, j) for _, j in demands for i1 in range(omega_max)})

    visit(tree, {(0, 0)})
    return out


class Candidate(NamedTuple):
    cursor: Cursor
    distance: int


class SolveResult(list):
    """Sorted (entry, distance) pairs; ``used_fallback`` reports whether the
    decomposition was abandoned for a plain filtered index walk."""

    used_fallback = False


def positional_prune(index, cursor: Cursor, need_left: int, need_right: int, slack: int) -> bool:
    """Keep the cursor only if some occurrence could still reach an entry
    boundary: the pattern characters remaining on each side, give or take
    ``slack`` for length drift, must fit the occurrence margins."""
    pre_lo, pre_hi, post_lo, post_hi = index.boundary_bounds(cursor)
    return (
        pre_lo - slack <= need_left <= pre_hi + slack
        and post_lo - slack <= need_right <= post_hi + slack
    )


def drift_slack(ops, bound: int) -> int:
    """How far matched lengths can wander from pattern positions: one widest
    operation side, plus the length change the whole budget can buy."""
    return (ops.side_max - 1) + (bound // ops.min_weight) * ops.max_len_delta


def extend_candidates(
    index, ops, candidates, pattern: str, bound: int, side: str = "right",
    *, full_len=None, fixed_outside=0, slack=0,
):
    """Grow candidate substrings on one side until the filter gives up.

    Each candidate's string is replayed through a fresh filter for
    ``pattern``/``bound`` (left extensions run on the reversed pattern with
    reversed operations), then extensions are explored depth-first.  Returns
    candidates for every visited cursor whose string is within the bound.
    When ``full_len`` is given, cursors whose occurrence margins cannot
    accommodate the pattern remainder (within ``slack``) are pruned.
    """
    if side == "right":
        dir_ops, dir_pattern = ops, pattern
        extensions = index.right_extensions
    elif side == "left":
        dir_ops, dir_pattern = reverse_operations(ops), pattern[::-1]
        extensions = index.left_extensions
    else:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    prune_on = full_len is not None
    start = filter_start(dir_ops, dir_pattern, bound)
    out = {}
    for cand in candidates:
        text = index.cursor_string(cand.cursor)
        if side == "left":
            text = text[::-1]
        state = start
        for ch in text:
            state = filter_step(dir_ops, state, ch)
            if state is None:
                break
        if state is None:
            continue
        stack = [(cand.cursor, state)]
        while stack:
            cur, fs = stack.pop()
            got = filter_distance(fs)
            if got is not None:
                prev = out.get(cur)
                if prev is None or got < prev:
                    out[cur] = got
            for ch, nxt in extensions(cur):
                ns = filter_step(dir_ops, fs, ch)
                if ns is None:
                    continue
                if prune_on:
                    used = ns.consumed_length
                    if side == "right":
                        need_left = fixed_outside
                        need_right = max(0, full_len - fixed_outside - used)
                    else:
                        need_right = fixed_outside
                        need_left = max(0, full_len - fixed_outside - used)
                    if not positional_prune(index, nxt, need_left, need_right, slack):
                        continue
                stack.append((nxt, ns))
    return {Candidate(cur, d) for cur, d in out.items()}


def solve_leaf(index, reduct: str):
    """Exact-match candidates for a leaf reduct."""
    if reduct == "":
        return {Candidate(index.root_cursor(), 0)}
    cur = index.locate(reduct)
    return {Candidate(cur, 0)} if cur is not None else set()


def _solve_node(index, ops, node: QueryNode, ti: int, tj: int, memo, prune: bool, slack: int):
    key = (id(node), ti, tj)
    hit = memo.get(key)
    if hit is not None:
        return hit
    plen = node.hi - node.lo
    if ti + tj == plen:
        out = {Candidate(index.root_cursor(), 0)}
    elif not node.children:
        out = solve_leaf(index, node.reduct(ti, tj))
    else:
        out = _solve_internal(index, ops, node, ti, tj, memo, prune, slack)
    memo[key] = out
    return out


def _solve_internal(index, ops, node, ti, tj, memo, prune, slack):
    left, right = node.children
    omega = ops.omega_max
    reduct = node.reduct(ti, tj)
    full_len = len(node.pattern) if prune else None
    merged = {}

    def absorb(cands):
        for cur, d in cands:
            prev = merged.get(cur)
            if prev is None or d < prev:
                merged[cur] = d

    for j1 in range(omega):
        if ti + j1 > left.hi - left.lo:
            continue
        seeds = _solve_node(index, ops, left, ti, j1, memo, prune, slack)
        if seeds:
            absorb(extend_candidates(
                index, ops, seeds, reduct, node.bound, "right",
                full_len=full_len, fixed_outside=node.lo + ti, slack=slack,
            ))
    for i1 in range(omega):
        if i1 + tj > right.hi - right.lo:
            continue
        seeds = _solve_node(index, ops, right, i1, tj, memo, prune, slack)
        if seeds:
            absorb(extend_candidates(
                index, ops, seeds, reduct, node.bound, "left",
                full_len=full_len,
                fixed_outside=len(node.pattern) - (node.hi - tj), slack=slack,
            ))
    return {Candidate(cur, d) for cur, d in merged.items()}


def node_solutions(index, ops, node: QueryNode, trim_left: int = 0, trim_right: int = 0,
                   *, prune: bool = True, bound: int = None):
    """(string, distance) pairs for one node's reduct — the per-part solution
    sets the engine chains together; exposed for inspection and tests."""
    slack = drift_slack(ops, bound if bound is not None else node.bound)
    memo = {}
    cands = _solve_node(index, ops, node, trim_left, trim_right, memo, True, slack)
    return sorted((index.cursor_string(c.cursor), c.distance) for c in cands)


def _finalize(index, ops, pattern, bound, cands, include_substrings):
    if include_substrings:
        best = {}
        for cur, d in cands:
            s = index.cursor_string(cur)
            if s not in best or d < best[s]:
                best[s] = d
        return SolveResult(sorted(best.items()))
    best = {}
    for cur, d in cands:
        if not index.is_entry(cur):
            continue
        entry = index.cursor_string(cur)
        exact = distance(ops, pattern, entry, cutoff=bound)
        assert isinstance(exact, int), "candidate must verify within the bound"
        if entry not in best or exact < best[entry]:
            best[entry] = exact
    return SolveResult(sorted(best.items()))


def solve(index, ops, pattern: str, bound: int, *,
          prune: bool = True, include_substrings: bool = False) -> SolveResult:
    """All entries within the bound of the pattern, with exact distances."""
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    slack = drift_slack(ops, bound)
    try:
        tree = build_query_tree(pattern, bound)
    except QueryTooShort:
        seeds = {Candidate(index.root_cursor(), 0)}
        cands = extend_candidates(
            index, ops, seeds, pattern, bound, "right",
            full_len=len(pattern) if prune else None, fixed_outside=0, slack=slack,
        )
        result = _finalize(index, ops, pattern, bound, cands, include_substrings)
        result.used_fallback = True
        return result
    memo = {}
    cands = _solve_node(index, ops, tree, 0, 0, memo, prune, slack)
    return _finalize(index, ops, pattern, bound, cands, include_substrings)


def solve_node_bottom_up(index, ops, pattern: str, bound: int,
                         *, include_substrings: bool = False) -> SolveResult:
    """Reference solver: fills every node's full trim table eagerly (no demand
    tracking, no pruning) before combining.  Must agree with ``solve``."""
    slack = drift_slack(ops, bound)
    try:
        tree = build_query_tree(pattern, bound)
    except QueryTooShort:
        return solve(index, ops, pattern, bound, prune=False,
                     include_substrings=include_substrings)
    omega = ops.omega_max
    tables = {}
    for node in reversed(list(tree.walk())):
        table = {}
        plen = node.hi - node.lo
        trims = [(0, 0)] if node is tree else [
            (ti, tj) for ti in range(omega) for tj in range(omega)
        ]
        for ti, tj in trims:
            if ti + tj > plen:
                continue
            if ti + tj == plen:
                table[ti, tj] = {Candidate(index.root_cursor(), 0)}
            elif not node.children:
                table[ti, tj] = solve_leaf(index, node.reduct(ti, tj))
            else:
                left, right = node.children
                reduct = node.reduct(ti, tj)
                merged = {}
                for j1 in range(omega):
                    seeds = tables[id(left)].get((ti, j1), set())
                    for cur, d in extend_candidates(index, ops, seeds, reduct,
                                                    node.bound, "right"):
                        if cur not in merged or d < merged[cur]:
                            merged[cur] = d
                for i1 in range(omega):
                    seeds = tables[id(right)].get((i1, tj), set())
                    for cur, d in extend_candidates(index, ops, seeds, reduct,
                                                    node.bound, "left"):
                        if cur not in merged or d < merged[cur]:
                            merged[cur] = d
                table[ti, tj] = {Candidate(c, d) for c, d in merged.items()}
        tables[id(node)] = table
    return _finalize(index, ops, pattern, bound, tables[id(tree)][0, 0], include_substrings)
