"""Independent reference implementations used to pin expected test values.

Everything here is written for obviousness, not speed: plain memoized
recursion over the operation semantics, direct substring enumeration for
equivalence classes, and exhaustive extension search for filter viability.
"""

from functools import lru_cache
from math import inf

# Out-of-band block delimiters for oracle texts.  Real input strings in tests
# never contain these code points (printable test alphabets start at '!').
SENT_L = "\x00"
SENT_R = "\x01"

_CLASS_SHAPE = {
    "substitute": (1, 1),
    "insert": (0, 1),
    "delete": (1, 0),
    "transpose": (2, 2),
    "merge": (2, 1),
    "split": (1, 2),
}


def oracle_distance(ops, v, w):
    """Minimum rewrite weight v -> w, or math.inf when unreachable."""
    cw = dict(ops.classes)
    em = {(o.lhs, o.rhs): o.weight for o in ops.explicit}

    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0 and j == 0:
            return 0
        best = inf
        if i and j and v[i - 1] == w[j - 1]:
            best = min(best, d(i - 1, j - 1))
        for (l, r), wt in em.items():
            li, ri = len(l), len(r)
            if li <= i and ri <= j and v[i - li:i] == l and w[j - ri:j] == r:
                best = min(best, d(i - li, j - ri) + wt)

        def implicit(l, r, wt):
            nonlocal best
            if (l, r) not in em:
                best = min(best, d(i - len(l), j - len(r)) + wt)

        if i and j and "substitute" in cw and v[i - 1] != w[j - 1]:
            implicit(v[i - 1], w[j - 1], cw["substitute"])
        if j and "insert" in cw:
            implicit("", w[j - 1], cw["insert"])
        if i and "delete" in cw:
            implicit(v[i - 1], "", cw["delete"])
        if (
            i >= 2 and j >= 2 and "transpose" in cw
            and v[i - 2] == w[j - 1] and v[i - 1] == w[j - 2] and v[i - 2] != v[i - 1]
        ):
            implicit(v[i - 2:i], w[j - 2:j], cw["transpose"])
        if i >= 2 and j and "merge" in cw:
            implicit(v[i - 2:i], w[j - 1], cw["merge"])
        if i and j >= 2 and "split" in cw:
            implicit(v[i - 1], w[j - 2:j], cw["split"])
        return best

    return d(len(v), len(w))


def oracle_search(ops, words, pattern, bound):
    """All (entry, distance) pairs within the bound, sorted."""
    out = []
    for word in sorted(set(words)):
        dist = oracle_distance(ops, pattern, word)
        if dist <= bound:
            out.append((word, dist))
    return out


def max_candidate_length(ops, pattern, bound):
    """Upper bound on |candidate| for candidates within `bound` of `pattern`."""
    delta = max(ops.max_len_delta, 1)
    return len(pattern) + (bound * delta) // ops.min_weight + 1


def oracle_viable(ops, pattern, bound, prefix, alphabet):
    """Whether some extension of `prefix` over `alphabet` meets the bound."""
    limit = max_candidate_length(ops, pattern, bound)

    def walk(u):
        if oracle_distance(ops, pattern, u) <= bound:
            return True
        if len(u) >= limit:
            return False
        return any(walk(u + ch) for ch in alphabet)

    return walk(prefix)


# ---------------------------------------------------------------------------
# Substring equivalence classes over the padded collection
# ---------------------------------------------------------------------------

def padded_blocks(words):
    return [SENT_L + w + SENT_R for w in words]


def _common_prefix(strings):
    if not strings:
        return ""
    first = min(strings, key=len)
    for k in range(len(first)):
        ch = first[k]
        if any(s[k] != ch for s in strings):
            return first[:k]
    return first


def _occurrences(blocks, x):
    n = len(x)
    return [
        (bi, s)
        for bi, b in enumerate(blocks)
        for s in range(len(b) - n + 1)
        if b[s:s + n] == x
    ]


def oracle_canonical(blocks, x):
    """The unique maximal string every occurrence of x sits inside at a fixed
    offset: alpha+x+beta with alpha the common suffix of all left contexts and
    beta the common prefix of all right contexts."""
    occs = _occurrences(blocks, x)
    assert occs, f"{x!r} does not occur"
    alpha = _common_prefix([blocks[bi][:s][::-1] for bi, s in occs])[::-1]
    beta = _common_prefix([blocks[bi][s + len(x):] for bi, s in occs])
    return alpha + x + beta


def oracle_classes(words):
    """canonical -> sorted members, over every distinct substring (incl. '')."""
    blocks = padded_blocks(words)
    subs = {b[i:j] for b in blocks for i in range(len(b) + 1) for j in range(i, len(b) + 1)}
    out = {}
    for x in subs:
        out.setdefault(oracle_canonical(blocks, x), []).append(x)
    return {c: sorted(ms) for c, ms in out.items()}


def oracle_transition_count(words):
    """Number of (class, next symbol) pairs with the extension still present."""
    blocks = padded_blocks(words)
    classes = oracle_classes(words)
    subs = set()
    for b in blocks:
        for i in range(len(b) + 1):
            for j in range(i, len(b) + 1):
                subs.add(b[i:j])
    count = 0
    for canon in classes:
        nexts = {s[len(canon)] for s in subs if len(s) > len(canon) and s.startswith(canon)}
        count += len(nexts)
    return count


def oracle_prefix_count(words):
    """Distinct prefixes over the plain (unpadded) entries, incl. the empty one."""
    return len({w[:i] for w in words for i in range(len(w) + 1)})
