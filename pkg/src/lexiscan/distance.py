"""Weighted string-rewriting operations and the distance they induce.

An operation rewrites a chunk of the left-hand string into a chunk of the
right-hand string (``lhs -> rhs``) at a nonnegative integer cost; one-symbol
identities are always available for free.  Six *implicit classes* cover whole
shapes of tuples procedurally (substitute/insert/delete/transpose/merge/split)
so that large alphabets never require enumerating operations; explicit
operations may override the class weight for specific tuples.

The module also provides optimal alignments, alignment splitting, and an
incremental left-to-right filter that decides, for a fixed pattern and bound,
whether a growing candidate string can still be completed within the bound
(viability) and whether it already lies within the bound (acceptance).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import inf

CLASS_NAMES = ("substitute", "insert", "delete", "transpose", "merge", "split")

# Width of each class: (|lhs|, |rhs|) of the tuples it generates.
_CLASS_SHAPE = {
    "substitute": (1, 1),
    "insert": (0, 1),
    "delete": (1, 0),
    "transpose": (2, 2),
    "merge": (2, 1),
    "split": (1, 2),
}


class ParseError(ValueError):
    """Malformed operation-file content; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class NoAlignmentError(ValueError):
    """No sequence of operations links the two strings."""


class _Marker:
    __slots__ = ("_label",)

    def __init__(self, label: str):
        self._label = label

    def __repr__(self):
        return self._label


#: distance() result when the minimum exceeds the requested cutoff.
OVER_CUTOFF = _Marker("OVER_CUTOFF")
#: distance() result when no alignment exists at all (restricted explicit-only
#: operation sets may lack insertions/deletions entirely).
UNREACHABLE = _Marker("UNREACHABLE")


@dataclass(frozen=True, order=True)
class Operation:
    """One rewriting rule: ``lhs`` consumed on the left, ``rhs`` on the right."""

    lhs: str
    rhs: str
    weight: int

    def reversed(self) -> "Operation":
        return Operation(self.lhs[::-1], self.rhs[::-1], self.weight)

    @property
    def is_identity(self) -> bool:
        return self.lhs == self.rhs and len(self.lhs) == 1


@dataclass(frozen=True)
class OperationSet:
    """An immutable bundle of explicit operations plus implicit classes.

    ``explicit`` is sorted and deduplicated; ``classes`` is a sorted tuple of
    (name, weight) pairs; ``omega_max`` is the maximum ``lhs`` length over all
    operations (identities included, so it is at least 1).
    """

    explicit: tuple = ()
    classes: tuple = ()
    omega_max: int = 1

    # -- derived lookup structures (cached, immutable) -----------------------

    @cached_property
    def class_weight(self) -> dict:
        return dict(self.classes)

    @cached_property
    def explicit_map(self) -> dict:
        return {(op.lhs, op.rhs): op.weight for op in self.explicit}

    @cached_property
    def max_rhs(self) -> int:
        widths = [1]
        widths += [_CLASS_SHAPE[name][1] for name, _ in self.classes]
        widths += [len(op.rhs) for op in self.explicit]
        return max(widths)

    @cached_property
    def min_weight(self) -> int:
        """Smallest nonzero operation weight (1 if there are no operations)."""
        weights = [w for _, w in self.classes] + [op.weight for op in self.explicit]
        return min(weights) if weights else 1

    @cached_property
    def max_len_delta(self) -> int:
        """Largest ||lhs| - |rhs|| over non-identity operations."""
        deltas = [abs(_CLASS_SHAPE[name][0] - _CLASS_SHAPE[name][1]) for name, _ in self.classes]
        deltas += [abs(len(op.lhs) - len(op.rhs)) for op in self.explicit]
        return max(deltas, default=0)

    @cached_property
    def len_rate(self) -> float:
        """Max length change per unit weight; bounds how far lengths drift."""
        rates = [abs(_CLASS_SHAPE[n][0] - _CLASS_SHAPE[n][1]) / w for n, w in self.classes]
        rates += [abs(len(op.lhs) - len(op.rhs)) / op.weight for op in self.explicit]
        return max(rates, default=0.0)

    @cached_property
    def bag_rate(self) -> float:
        """Max character-multiset L1 change per unit weight."""
        rates = [(_CLASS_SHAPE[n][0] + _CLASS_SHAPE[n][1]) / w for n, w in self.classes]
        rates += [(len(op.lhs) + len(op.rhs)) / op.weight for op in self.explicit]
        return max(rates, default=0.0)

    @cached_property
    def side_max(self) -> int:
        """Longest operation side (lhs or rhs) including identities."""
        sides = [1]
        sides += [max(_CLASS_SHAPE[name]) for name, _ in self.classes]
        sides += [max(len(op.lhs), len(op.rhs)) for op in self.explicit]
        return max(sides)

    @cached_property
    def can_band(self) -> bool:
        """insert+delete classes make every pair reachable, allowing banded DP."""
        return "insert" in self.class_weight and "delete" in self.class_weight

    @cached_property
    def shadows_needed(self) -> bool:
        """Whether viability must track partially-consumed multi-rhs operations.

        With an insert-any class cheap enough, any alignment using a straddling
        operation can be rerouted through ordinary row cells, so the plain
        cell test is already complete.
        """
        multi = [_CLASS_SHAPE[n][1] for n, _ in self.classes if _CLASS_SHAPE[n][1] >= 2]
        multi_w = [(2, w) for n, w in self.classes if _CLASS_SHAPE[n][1] >= 2]
        multi_w += [(len(op.rhs), op.weight) for op in self.explicit if len(op.rhs) >= 2]
        if not multi_w:
            return False
        w_ins = self.class_weight.get("insert")
        if w_ins is None:
            return True
        return any(w_ins * (rlen - 1) > w for rlen, w in multi_w)


def _make_opset(explicit, classes) -> OperationSet:
    explicit = tuple(sorted(set(explicit)))
    if isinstance(classes, dict):
        classes = classes.items()
    classes = tuple(sorted(classes))
    widths = [1]
    widths += [_CLASS_SHAPE[name][0] for name, _ in classes]
    widths += [len(op.lhs) for op in explicit]
    return OperationSet(explicit, classes, max(widths))


_PRESETS = {
    "lev": ("substitute", "insert", "delete"),
    "lev-transpose": ("substitute", "insert", "delete", "transpose"),
    "lev-merge-split": ("substitute", "insert", "delete", "merge", "split"),
}


def preset_operations(name: str) -> OperationSet:
    """Return a built-in operation set; all non-identity weights are 1."""
    try:
        names = _PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown operation preset {name!r}; expected one of {sorted(_PRESETS)}"
        ) from None
    return _make_opset((), {n: 1 for n in names})


def parse_operations(text: str) -> OperationSet:
    """Parse an operation file.

    Format (UTF-8, LF): an optional first line ``classes: name ...`` declaring
    implicit classes (weight 1 each), then zero or more ``LHS<TAB>RHS<TAB>WEIGHT``
    lines.  Duplicate tuples keep the lowest weight.
    """
    classes = {}
    explicit = {}
    lines = text.split("\n")
    start = 0
    if lines and lines[0].startswith("classes:"):
        for name in lines[0][len("classes:"):].split():
            if name not in CLASS_NAMES:
                raise ParseError(1, f"unknown operation class {name!r}")
            classes[name] = 1
        start = 1
    for idx in range(start, len(lines)):
        line = lines[idx]
        if line == "":
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError(idx + 1, "expected LHS<TAB>RHS<TAB>WEIGHT")
        lhs, rhs, wtext = parts
        if not wtext.isdigit():
            raise ParseError(idx + 1, f"weight must be a decimal integer, got {wtext!r}")
        weight = int(wtext)
        if lhs == rhs and len(lhs) == 1:
            raise ParseError(idx + 1, "identity operations are implicit and carry no weight")
        if weight == 0:
            raise ParseError(idx + 1, "weight 0 is reserved for identity operations")
        if lhs == "" and rhs == "":
            raise ParseError(idx + 1, "operation sides cannot both be empty")
        key = (lhs, rhs)
        if key not in explicit or weight < explicit[key]:
            explicit[key] = weight
    return _make_opset(
        (Operation(l, r, w) for (l, r), w in explicit.items()), classes
    )


def reverse_operations(ops: OperationSet) -> OperationSet:
    """Mirror every operation (both sides reversed); classes map to themselves."""
    return _make_opset((op.reversed() for op in ops.explicit), dict(ops.classes))


# ---------------------------------------------------------------------------
# Distance and alignments
# ---------------------------------------------------------------------------

def _edit_options(ops: OperationSet, v: str, w: str, i: int, j: int):
    """Yield (di, dj, weight, lhs, rhs) for every operation applicable at (i, j).

    (i, j) is the cell *after* applying the operation, i.e. the operation
    consumes v[i-di:i] and w[j-dj:j].  Explicit tuples override class weights
    because the class branches consult the explicit map first.
    """
    cw = ops.class_weight
    em = ops.explicit_map
    if i and j:
        a, b = v[i - 1], w[j - 1]
        if a == b:
            yield 1, 1, 0, a, b
        else:
            wt = em.get((a, b), cw.get("substitute"))
            if wt is not None:
                yield 1, 1, wt, a, b
    if j:
        b = w[j - 1]
        wt = em.get(("", b), cw.get("insert"))
        if wt is not None:
            yield 0, 1, wt, "", b
    if i:
        a = v[i - 1]
        wt = em.get((a, ""), cw.get("delete"))
        if wt is not None:
            yield 1, 0, wt, a, ""
    if i >= 2 and j >= 2 and "transpose" in cw:
        if v[i - 2] == w[j - 1] and v[i - 1] == w[j - 2] and v[i - 2] != v[i - 1]:
            lhs, rhs = v[i - 2:i], w[j - 2:j]
            yield 2, 2, em.get((lhs, rhs), cw["transpose"]), lhs, rhs
    if i >= 2 and j and "merge" in cw:
        lhs, rhs = v[i - 2:i], w[j - 1]
        yield 2, 1, em.get((lhs, rhs), cw["merge"]), lhs, rhs
    if i and j >= 2 and "split" in cw:
        lhs, rhs = v[i - 1], w[j - 2:j]
        yield 1, 2, em.get((lhs, rhs), cw["split"]), lhs, rhs
    for op in ops.explicit:
        ll, lr = len(op.lhs), len(op.rhs)
        if ll <= i and lr <= j and v[i - ll:i] == op.lhs and w[j - lr:j] == op.rhs:
            yield ll, lr, op.weight, op.lhs, op.rhs


def _dp_full(ops: OperationSet, v: str, w: str):
    n, m = len(v), len(w)
    tab = [[inf] * (m + 1) for _ in range(n + 1)]
    tab[0][0] = 0
    for i in range(n + 1):
        row = tab[i]
        for j in range(m + 1):
            if i == 0 and j == 0:
                continue
            best = inf
            for di, dj, wt, _, _ in _edit_options(ops, v, w, i, j):
                cand = tab[i - di][j - dj] + wt
                if cand < best:
                    best = cand
            row[j] = best
    return tab


def _dp_banded(ops: OperationSet, v: str, w: str, cutoff: int):
    """Exact for values <= cutoff; returns cutoff+1 when the minimum exceeds it.

    Only sound when every pair is reachable (insert+delete classes present):
    cells farther than ``band`` off the diagonal provably exceed the cutoff.
    """
    n, m = len(v), len(w)
    over = cutoff + 1
    delta = max(ops.max_len_delta, 1)
    band = (cutoff * delta) // ops.min_weight + ops.omega_max + ops.max_rhs
    if abs(n - m) > band:
        return over
    cw = ops.class_weight
    w_sub = cw.get("substitute")
    w_ins = cw["insert"]
    w_del = cw["delete"]
    w_tra = cw.get("transpose")
    w_mrg = cw.get("merge")
    w_spl = cw.get("split")
    em = ops.explicit_map if ops.explicit else None
    explicit = ops.explicit
    # rows[k] is the row for w[:j-k]; row cells indexed 0..n, capped at `over`.
    prev_rows = []
    row = [0] * (n + 1)
    for i in range(1, n + 1):
        best = row[i - 1] + w_del
        if em:
            wd = em.get((v[i - 1], ""))
            if wd is not None and row[i - 1] + wd < best:
                best = row[i - 1] + wd
            for op in explicit:
                ll = len(op.lhs)
                if op.rhs == "" and ll <= i and v[i - ll:i] == op.lhs:
                    cand = row[i - ll] + op.weight
                    if cand < best:
                        best = cand
        row[i] = min(best, over)
    keep = ops.max_rhs
    # Rows within max_rhs of the frontier can still feed later rows (wide-rhs
    # operations skip rows), so the early exit needs all their minima over.
    row_mins = [min(row)]
    for j in range(1, m + 1):
        sym = w[j - 1]
        prev_rows.append(row)
        if len(prev_rows) > keep:
            prev_rows.pop(0)
        r1 = prev_rows[-1]
        r2 = prev_rows[-2] if len(prev_rows) >= 2 else None
        lo = max(0, j - band)
        hi = min(n, j + band)
        new = [over] * (n + 1)
        best_in_row = over
        for i in range(lo, hi + 1):
            best = r1[i] + w_ins
            if em is not None:
                wi = em.get(("", sym))
                if wi is not None and r1[i] + wi < best:
                    best = r1[i] + wi
            if i >= 1:
                a = v[i - 1]
                s = r1[i - 1]
                if a == sym:
                    if s < best:
                        best = s
                else:
                    wt = em.get((a, sym), w_sub) if em is not None else w_sub
                    if wt is not None and s + wt < best:
                        best = s + wt
            if w_mrg is not None and i >= 2:
                lhs = v[i - 2:i]
                wt = em.get((lhs, sym), w_mrg) if em is not None else w_mrg
                cand = r1[i - 2] + wt
                if cand < best:
                    best = cand
            if r2 is not None and j >= 2:
                if w_spl is not None and i >= 1:
                    rhs = w[j - 2:j]
                    wt = em.get((v[i - 1], rhs), w_spl) if em is not None else w_spl
                    cand = r2[i - 1] + wt
                    if cand < best:
                        best = cand
                if (
                    w_tra is not None
                    and i >= 2
                    and v[i - 2] == sym
                    and v[i - 1] == w[j - 2]
                    and v[i - 2] != v[i - 1]
                ):
                    cand = r2[i - 2] + w_tra
                    if cand < best:
                        best = cand
            if em is not None:
                for op in explicit:
                    ll, lr = len(op.lhs), len(op.rhs)
                    if lr == 0 or lr > j or ll > i:
                        continue
                    if w[j - lr:j] == op.rhs and v[i - ll:i] == op.lhs:
                        src = prev_rows[-lr][i - ll] if lr <= len(prev_rows) else None
                        if src is not None:
                            cand = src + op.weight
                            if cand < best:
                                best = cand
            # deletions close the row from the left
            if i >= 1:
                a = v[i - 1]
                wt = em.get((a, ""), w_del) if em is not None else w_del
                if wt is not None and new[i - 1] + wt < best:
                    best = new[i - 1] + wt
            if em is not None:
                for op in explicit:
                    ll = len(op.lhs)
                    if op.rhs == "" and ll <= i and v[i - ll:i] == op.lhs:
                        cand = new[i - ll] + op.weight
                        if cand < best:
                            best = cand
            if best > over:
                best = over
            new[i] = best
            if best < best_in_row:
                best_in_row = best
        row_mins.append(best_in_row)
        if len(row_mins) > keep:
            row_mins.pop(0)
        if all(x > cutoff for x in row_mins):
            return over
        row = new
    return row[n]


def distance(ops: OperationSet, v: str, w: str, cutoff=None):
    """Minimum total weight rewriting ``v`` into ``w``.

    Returns an int, or OVER_CUTOFF when a cutoff is given and exceeded, or
    UNREACHABLE when no alignment exists at all.
    """
    if cutoff is not None:
        if cutoff < 0:
            raise ValueError("cutoff must be nonnegative")
        if ops.can_band:
            val = _dp_banded(ops, v, w, cutoff)
            return val if val <= cutoff else OVER_CUTOFF
    val = _dp_full(ops, v, w)[len(v)][len(w)]
    if val == inf:
        return UNREACHABLE
    val = int(val)
    if cutoff is not None and val > cutoff:
        return OVER_CUTOFF
    return val


@dataclass(frozen=True)
class Alignment:
    """A sequence of operations; left/right sides and weight are derived."""

    ops: tuple

    @property
    def left(self) -> str:
        return "".join(op.lhs for op in self.ops)

    @property
    def right(self) -> str:
        return "".join(op.rhs for op in self.ops)

    @property
    def weight(self) -> int:
        return sum(op.weight for op in self.ops)


def _op_rank(lhs: str, rhs: str):
    """Backtrace preference: identity, substitution, deletion, insertion, wider."""
    if lhs == rhs and len(lhs) == 1:
        return (0, "", "")
    shape = (len(lhs), len(rhs))
    if shape == (1, 1):
        return (1, lhs, rhs)
    if shape == (1, 0):
        return (2, lhs, rhs)
    if shape == (0, 1):
        return (3, lhs, rhs)
    return (4 + len(lhs) + len(rhs), lhs, rhs)


def align(ops: OperationSet, v: str, w: str) -> Alignment:
    """One optimal alignment of ``v`` against ``w`` with deterministic ties."""
    n, m = len(v), len(w)
    value = [[inf] * (m + 1) for _ in range(n + 1)]
    choice = [[None] * (m + 1) for _ in range(n + 1)]
    value[0][0] = 0
    for i in range(n + 1):
        for j in range(m + 1):
            if i == 0 and j == 0:
                continue
            best = inf
            best_key = None
            best_op = None
            for di, dj, wt, lhs, rhs in _edit_options(ops, v, w, i, j):
                src = value[i - di][j - dj]
                if src == inf:
                    continue
                cand = src + wt
                key = _op_rank(lhs, rhs)
                if cand < best or (cand == best and key < best_key):
                    best, best_key, best_op = cand, key, (di, dj, wt, lhs, rhs)
            value[i][j] = best
            choice[i][j] = best_op
    if value[n][m] == inf:
        raise NoAlignmentError(f"no alignment of {v!r} and {w!r} under this operation set")
    trace = []
    i, j = n, m
    while i or j:
        di, dj, wt, lhs, rhs = choice[i][j]
        trace.append(Operation(lhs, rhs, wt))
        i -= di
        j -= dj
    return Alignment(tuple(reversed(trace)))


def split_alignment(alignment: Alignment, k: int):
    """Cut an alignment at left-side prefix length ``k``.

    Returns (head, straddler, tail): ``head`` consumes the longest prefix of
    the left side that fits inside the k-prefix; ``straddler`` is the single
    operation spanning the cut (absent when the cut lands on a boundary, and
    always absent when all operations have one-symbol left sides).
    """
    if not 0 <= k <= len(alignment.left):
        raise ValueError(f"split point {k} outside left side of length {len(alignment.left)}")
    cum = 0
    for idx, op in enumerate(alignment.ops):
        if cum == k:
            return Alignment(alignment.ops[:idx]), None, Alignment(alignment.ops[idx:])
        nxt = cum + len(op.lhs)
        if nxt > k:
            return Alignment(alignment.ops[:idx]), op, Alignment(alignment.ops[idx + 1:])
        cum = nxt
    return alignment, None, Alignment(())


# ---------------------------------------------------------------------------
# Directional filter
# ---------------------------------------------------------------------------

class _CompiledFilter:
    """Stepping tables for one (operations, pattern, bound) triple.

    Rows hold only the window of cells that are still within the bound (plus
    exact ``over`` markers for interior holes); everything outside the window
    is provably over the bound.  Previous rows are retained so operations with
    a two-symbol right side can reach back one consumed symbol.
    """

    __slots__ = (
        "ops", "pattern", "bound", "n", "over",
        "w_sub", "w_ins", "w_del", "w_tra", "w_mrg", "w_spl",
        "has_explicit", "max_rhs", "hist_len", "shadows_needed", "lev_only",
        "rhs_groups", "expl_dels", "occ",
    )

    def __init__(self, ops: OperationSet, pattern: str, bound: int):
        self.ops = ops
        self.pattern = pattern
        self.bound = bound
        self.n = len(pattern)
        self.over = bound + 1
        cw = ops.class_weight
        self.w_sub = cw.get("substitute")
        self.w_ins = cw.get("insert")
        self.w_del = cw.get("delete")
        self.w_tra = cw.get("transpose")
        self.w_mrg = cw.get("merge")
        self.w_spl = cw.get("split")
        self.has_explicit = bool(ops.explicit)
        self.max_rhs = ops.max_rhs
        self.hist_len = self.max_rhs - 1
        self.shadows_needed = ops.shadows_needed
        self.lev_only = (
            not ops.explicit
            and self.w_tra is None and self.w_mrg is None and self.w_spl is None
            and self.w_sub is not None and self.w_ins is not None
            and self.w_del is not None
        )
        self.rhs_groups = {}
        self.expl_dels = []
        self.occ = {}
        for op in ops.explicit:
            if op.lhs not in self.occ:
                ll = len(op.lhs)
                self.occ[op.lhs] = [
                    i for i in range(ll, self.n + 1) if pattern[i - ll:i] == op.lhs
                ] if op.lhs else list(range(self.n + 1))
            if op.rhs:
                self.rhs_groups.setdefault(op.rhs[-1], []).append(op)
            else:
                self.expl_dels.append(op)

    # -- helpers ------------------------------------------------------------

    def _del_weight(self, ch: str):
        if self.has_explicit:
            w = self.ops.explicit_map.get((ch, ""))
            if w is not None:
                return w if self.w_del is None else min(w, self.w_del)
        return self.w_del

    def _closed(self, lo: int, vals: list):
        """Apply deletion rules left-to-right, then trim to the viable window."""
        n, bound, over = self.n, self.bound, self.over
        if vals and (self.w_del is not None or self.has_explicit):
            # extend rightward while deletions keep cells within the bound
            # (explicit multi-symbol deletions can leave gaps, so with
            # explicit operations present we scan the whole remainder)
            i = lo + len(vals)
            while i <= n:
                best = over
                wd = self._del_weight(self.pattern[i - 1])
                if wd is not None and vals[-1] + wd < best:
                    best = vals[-1] + wd
                for op in self.expl_dels:
                    ll = len(op.lhs)
                    src = i - ll - lo
                    if 0 <= src < len(vals) and self.pattern[i - ll:i] == op.lhs:
                        cand = vals[src] + op.weight
                        if cand < best:
                            best = cand
                if best > bound and not self.has_explicit:
                    break
                vals.append(min(best, over))
                i += 1
        first = last = None
        for idx, val in enumerate(vals):
            if val <= bound:
                if first is None:
                    first = idx
                last = idx
        if first is None:
            return None
        return (lo + first, tuple(vals[first:last + 1]))

    def start_row(self):
        vals = [0]
        if self.w_del is not None or self.has_explicit:
            n, over = self.n, self.over
            full = [0] + [over] * n
            for i in range(1, n + 1):
                best = full[i]
                wd = self._del_weight(self.pattern[i - 1])
                if wd is not None and full[i - 1] + wd < best:
                    best = full[i - 1] + wd
                for op in self.expl_dels:
                    ll = len(op.lhs)
                    if ll <= i and self.pattern[i - ll:i] == op.lhs:
                        cand = full[i - ll] + op.weight
                        if cand < best:
                            best = cand
                full[i] = min(best, over)
            first = last = None
            for idx, val in enumerate(full):
                if val <= self.bound:
                    if first is None:
                        first = idx
                    last = idx
            return (first, tuple(full[first:last + 1]))
        return (0, (0,))

    def step(self, rows, hist, sym):
        """Compute the successor row and shadow value after consuming ``sym``."""
        if self.lev_only:
            return self._step_lev(rows, sym), self.over
        if self.has_explicit:
            row = self._step_general(rows, hist, sym)
        else:
            row = self._step_classes(rows, hist, sym)
        if self.shadows_needed:
            return row, self._shadow(rows, hist, sym)
        return row, self.over

    def _step_lev(self, rows, sym):
        """Tight path for substitute/insert/delete-only class sets.

        With single-character classes the successor row depends on the last
        row alone and every cell takes at most three sources, so the window
        relaxation collapses to one left-to-right pass.
        """
        n, bound, over, P = self.n, self.bound, self.over, self.pattern
        w_ins, w_sub, w_del = self.w_ins, self.w_sub, self.w_del
        lo1, v1 = rows[-1]
        len1 = len(v1)
        hi = lo1 + len1
        if hi > n:
            hi = n
        vals = []
        append = vals.append
        best = v1[0] + w_ins
        if best > over:
            best = over
        append(best)
        prev = best
        for k in range(1, hi - lo1 + 1):
            src = v1[k - 1]
            best = src if P[lo1 + k - 1] == sym else src + w_sub
            if k < len1:
                cand = v1[k] + w_ins
                if cand < best:
                    best = cand
            cand = prev + w_del
            if cand < best:
                best = cand
            if best > over:
                best = over
            append(best)
            prev = best
        i = hi + 1
        while i <= n:
            prev += w_del
            if prev > bound:
                break
            append(prev)
            i += 1
        first = -1
        last = 0
        for idx, val in enumerate(vals):
            if val <= bound:
                if first < 0:
                    first = idx
                last = idx
        if first < 0:
            return None
        return (lo1 + first, tuple(vals[first:last + 1]))

    def _step_classes(self, rows, hist, sym):
        """Fast path for class-only operation sets (no explicit rules)."""
        n, bound, over, P = self.n, self.bound, self.over, self.pattern
        lo1, v1 = rows[-1]
        len1 = len(v1)
        w_ins, w_sub, w_del = self.w_ins, self.w_sub, self.w_del
        w_mrg, w_spl, w_tra = self.w_mrg, self.w_spl, self.w_tra
        if len(rows) >= 2 and hist:
            lo2, v2 = rows[-2]
            len2 = len(v2)
            prevsym = hist[-1]
        else:
            lo2, v2, len2, prevsym = 0, None, 0, None
        hi1 = lo1 + len1 - 1
        lo = lo1
        hi = hi1 + (2 if w_mrg is not None else 1)
        if v2 is not None:
            hi2 = lo2 + len2 - 1
            if w_spl is not None:
                if lo2 + 1 < lo:
                    lo = lo2 + 1
                if hi2 + 1 > hi:
                    hi = hi2 + 1
            if w_tra is not None:
                if lo2 + 2 < lo:
                    lo = lo2 + 2
                if hi2 + 2 > hi:
                    hi = hi2 + 2
        if lo < 0:
            lo = 0
        if hi > n:
            hi = n
        if hi < lo:
            lo, hi = 0, min(n, 1)
        vals = []
        append = vals.append
        prev_new = over
        for i in range(lo, hi + 1):
            best = over
            k = i - lo1
            if w_ins is not None and 0 <= k < len1:
                src = v1[k] + w_ins
                if src < best:
                    best = src
            if i >= 1:
                k -= 1
                if 0 <= k < len1:
                    src = v1[k]
                    if P[i - 1] == sym:
                        if src < best:
                            best = src
                    elif w_sub is not None and src + w_sub < best:
                        best = src + w_sub
                if w_mrg is not None and i >= 2:
                    k = i - 2 - lo1
                    if 0 <= k < len1 and v1[k] + w_mrg < best:
                        best = v1[k] + w_mrg
                if v2 is not None:
                    if w_spl is not None:
                        k = i - 1 - lo2
                        if 0 <= k < len2 and v2[k] + w_spl < best:
                            best = v2[k] + w_spl
                    if (
                        w_tra is not None and i >= 2 and P[i - 2] == sym
                        and P[i - 1] == prevsym and sym != prevsym
                    ):
                        k = i - 2 - lo2
                        if 0 <= k < len2 and v2[k] + w_tra < best:
                            best = v2[k] + w_tra
                if w_del is not None and prev_new + w_del < best:
                    best = prev_new + w_del
            if best > over:
                best = over
            append(best)
            prev_new = best
        if w_del is not None:
            # deletions close the row rightward while they stay in budget
            i = hi + 1
            tail = vals[-1]
            while i <= n:
                tail += w_del
                if tail > bound:
                    break
                append(tail)
                i += 1
        first = -1
        last = -1
        for idx, val in enumerate(vals):
            if val <= bound:
                if first < 0:
                    first = idx
                last = idx
        if first < 0:
            return None
        return (lo + first, tuple(vals[first:last + 1]))

    def _step_general(self, rows, hist, sym):
        n, bound, over, P = self.n, self.bound, self.over, self.pattern
        lo1, v1 = rows[-1]
        hi1 = lo1 + len(v1) - 1
        if len(rows) >= 2:
            lo2, v2 = rows[-2]
            hi2 = lo2 + len(v2) - 1
        else:
            lo2, v2, hi2 = 0, None, -1
        prevsym = hist[-1] if hist else None

        lo = lo1
        hi = hi1 + (2 if self.w_mrg is not None else 1)
        if v2 is not None and prevsym is not None:
            if self.w_spl is not None:
                lo = min(lo, lo2 + 1)
                hi = max(hi, hi2 + 1)
            if self.w_tra is not None:
                lo = min(lo, lo2 + 2)
                hi = max(hi, hi2 + 2)
        if self.has_explicit:
            lo, hi = 0, n
        lo = max(lo, 0)
        hi = min(hi, n)
        if hi < lo:
            lo, hi = 0, min(n, 1)

        w_ins, w_sub, w_mrg = self.w_ins, self.w_sub, self.w_mrg
        w_spl, w_tra = self.w_spl, self.w_tra
        vals = []
        em = self.ops.explicit_map if self.has_explicit else None
        for i in range(lo, hi + 1):
            best = over
            k = i - lo1
            if 0 <= k <= hi1 - lo1:
                src = v1[k]
                if src < over:
                    if w_ins is not None and src + w_ins < best:
                        best = src + w_ins
                    if em is not None:
                        wi = em.get(("", sym))
                        if wi is not None and src + wi < best:
                            best = src + wi
            if i >= 1:
                k = i - 1 - lo1
                if 0 <= k <= hi1 - lo1:
                    src = v1[k]
                    if src < over:
                        pc = P[i - 1]
                        if pc == sym:
                            if src < best:
                                best = src
                        else:
                            wt = em.get((pc, sym), w_sub) if em is not None else w_sub
                            if wt is not None and src + wt < best:
                                best = src + wt
            if w_mrg is not None and i >= 2:
                k = i - 2 - lo1
                if 0 <= k <= hi1 - lo1:
                    src = v1[k]
                    if src < over:
                        lhs = P[i - 2:i]
                        wt = em.get((lhs, sym), w_mrg) if em is not None else w_mrg
                        if src + wt < best:
                            best = src + wt
            if v2 is not None and prevsym is not None:
                if w_spl is not None and i >= 1:
                    k = i - 1 - lo2
                    if 0 <= k <= hi2 - lo2:
                        src = v2[k]
                        if src < over:
                            wt = (
                                em.get((P[i - 1], prevsym + sym), w_spl)
                                if em is not None else w_spl
                            )
                            if src + wt < best:
                                best = src + wt
                if (
                    w_tra is not None
                    and i >= 2
                    and P[i - 2] == sym
                    and P[i - 1] == prevsym
                    and sym != prevsym
                ):
                    k = i - 2 - lo2
                    if 0 <= k <= hi2 - lo2:
                        src = v2[k]
                        if src < over:
                            lhs = P[i - 2:i]
                            wt = em.get((lhs, lhs[::-1]), w_tra) if em is not None else w_tra
                            if src + wt < best:
                                best = src + wt
            if em is not None:
                hsym = self.rhs_groups.get(sym)
                if hsym:
                    tail = ("".join(hist) + sym) if hist else sym
                    for op in hsym:
                        lr = len(op.rhs)
                        if lr > len(rows) or (lr > 1 and not tail.endswith(op.rhs)):
                            continue
                        src_lo, src_vals = rows[-lr]
                        k = i - len(op.lhs) - src_lo
                        if i >= len(op.lhs) and 0 <= k < len(src_vals) and (
                            not op.lhs or P[i - len(op.lhs):i] == op.lhs
                        ):
                            src = src_vals[k]
                            if src < over and src + op.weight < best:
                                best = src + op.weight
            # deletions chain within the new row
            if vals and i >= 1:
                wd = self._del_weight(P[i - 1])
                if wd is not None and vals[-1] < over and vals[-1] + wd < best:
                    best = vals[-1] + wd
            if self.has_explicit:
                for op in self.expl_dels:
                    ll = len(op.lhs)
                    k = i - ll - lo
                    if 0 <= k < len(vals) and P[i - ll:i] == op.lhs:
                        cand = vals[k] + op.weight
                        if cand < best:
                            best = cand
            vals.append(min(best, over))

        return self._closed(lo, vals)

    def _shadow(self, rows, hist, sym):
        """Cheapest partially-consumed multi-rhs operation still in flight."""
        over, bound, P, n = self.over, self.bound, self.pattern, self.n
        best = over
        lo1, v1 = rows[-1]
        hi1 = lo1 + len(v1) - 1
        if self.w_spl is not None:
            # some pattern symbol splits into sym + <future>; source cell i-1 <= n-1
            for k, src in enumerate(v1):
                if src < over and lo1 + k <= n - 1 and src + self.w_spl < best:
                    best = src + self.w_spl
        if self.w_tra is not None:
            for k, src in enumerate(v1):
                i = lo1 + k + 2
                if src >= over or i > n:
                    continue
                if P[i - 1] == sym and P[i - 2] != sym and src + self.w_tra < best:
                    best = src + self.w_tra
        if self.has_explicit:
            tail = ("".join(hist) + sym) if hist else sym
            for ch, group in self.rhs_groups.items():
                for op in group:
                    lr = len(op.rhs)
                    if lr < 2:
                        continue
                    for plen in range(1, lr):
                        if plen > len(tail) or plen > len(rows):
                            continue
                        if tail[-plen:] != op.rhs[:plen]:
                            continue
                        src_lo, src_vals = rows[-plen]
                        for i in self.occ[op.lhs]:
                            k = i - len(op.lhs) - src_lo
                            if 0 <= k < len(src_vals):
                                src = src_vals[k]
                                if src < over and src + op.weight < best:
                                    best = src + op.weight
        return best


@dataclass(frozen=True, eq=False, slots=True)
class FilterState:
    """Immutable snapshot of the filter after consuming some symbols.

    ``dp_row`` exposes one cell per pattern prefix: the exact minimum
    alignment weight of that prefix against the consumed string, or None when
    it exceeds the bound.
    """

    pattern: str
    bound: int
    consumed_length: int
    _compiled: _CompiledFilter = field(repr=False)
    _rows: tuple = field(repr=False)
    _history: tuple = field(repr=False)
    _shadow: int = field(repr=False)

    @property
    def dp_row(self) -> tuple:
        lo, vals = self._rows[-1]
        out = []
        for i in range(len(self.pattern) + 1):
            k = i - lo
            if 0 <= k < len(vals) and vals[k] <= self.bound:
                out.append(vals[k])
            else:
                out.append(None)
        return tuple(out)


def filter_start(ops: OperationSet, pattern: str, bound: int) -> FilterState:
    """Filter state for the empty consumed string."""
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    compiled = _CompiledFilter(ops, pattern, bound)
    row = compiled.start_row()
    return FilterState(pattern, bound, 0, compiled, (row,), (), compiled.over)


def filter_step(ops: OperationSet, state: FilterState, symbol: str):
    """Consume one symbol; None exactly when no completion can meet the bound."""
    compiled = state._compiled
    row, shadow = compiled.step(state._rows, state._history, symbol)
    if row is None and shadow > state.bound:
        return None
    if row is None:
        row = (0, ())
    if compiled.max_rhs == 1:
        rows = (row,)
    else:
        rows = (state._rows + (row,))[-compiled.max_rhs:]
    if compiled.hist_len:
        history = (state._history + (symbol,))[-compiled.hist_len:]
    else:
        history = ()
    return FilterState(
        state.pattern, state.bound, state.consumed_length + 1,
        compiled, rows, history, shadow,
    )


def filter_distance(state: FilterState):
    """Exact distance(pattern, consumed) when it is within the bound, else None."""
    lo, vals = state._rows[-1]
    k = len(state.pattern) - lo
    if 0 <= k < len(vals) and vals[k] <= state.bound:
        return vals[k]
    return None


def _raw_filter_start(ops: OperationSet, pattern: str, bound: int):
    """(compiled, rows, history) triple for the empty consumed string.

    Allocation-light twin of filter_start for bulk walks: the triple carries
    exactly what stepping needs and nothing else, so tight loops skip the
    FilterState object per node.
    """
    compiled = _CompiledFilter(ops, pattern, bound)
    return compiled, (compiled.start_row(),), ()


def _raw_filter_step(compiled, rows, history, symbol):
    """Advance raw (rows, history); None exactly when filter_step would die."""
    row, shadow = compiled.step(rows, history, symbol)
    if row is None:
        if shadow > compiled.bound:
            return None
        row = (0, ())
    if compiled.max_rhs == 1:
        return (row,), ()
    rows = (rows + (row,))[-compiled.max_rhs:]
    if compiled.hist_len:
        history = (history + (symbol,))[-compiled.hist_len:]
    return rows, history


def _raw_filter_distance(compiled, rows):
    """Exact distance(pattern, consumed) within the bound for a raw row stack."""
    lo, vals = rows[-1]
    k = compiled.n - lo
    if 0 <= k < len(vals) and vals[k] <= compiled.bound:
        return vals[k]
    return None
