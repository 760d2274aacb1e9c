"""Command-line front end.

Output on stdout is machine-parseable (TSV or CSV); progress and diagnostics
go to stderr.  Exit codes: 0 success, 1 a correctness or coverage failure,
2 bad usage or unreadable input.  ``LEXISCAN_SEED`` overrides any ``--seed``.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from .baselines import (
    CoverageError,
    Trie,
    brute_force_search,
    forward_backward_search,
    oflazer_search,
)
from .bench import (
    CorrectnessError,
    format_csv,
    generate_lexicon,
    generate_queries,
    run_benchmark,
    verify_equivalence,
)
from .distance import ParseError, parse_operations, preset_operations
from .scdawg import (
    LexiconError,
    SerializationError,
    build_index,
    deserialize,
    load_lexicon,
    make_lexicon,
    serialize,
)
from .search import solve, solve_node_bottom_up


def _info(msg):
    print(msg, file=sys.stderr)


def _seed(args) -> int:
    env = os.environ.get("LEXISCAN_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"LEXISCAN_SEED must be an integer, got {env!r}") from None
    return args.seed


def _load_ops(args):
    if args.ops_file is not None:
        with open(args.ops_file, encoding="utf-8") as fh:
            return parse_operations(fh.read())
    return preset_operations(args.ops)


def _read_lexicon(path):
    with open(path, encoding="utf-8") as fh:
        return load_lexicon(fh.read())


def _read_index(path):
    with open(path, "rb") as fh:
        return deserialize(fh.read())


def _add_ops_options(sub):
    sub.add_argument("--ops", default="lev",
                     help="operation preset: lev, lev-transpose, lev-merge-split")
    sub.add_argument("--ops-file", default=None,
                     help="operation file (overrides --ops)")


# ------------------------------------------------------------------ commands


def cmd_build(args):
    lexicon = _read_lexicon(args.lexicon)
    t0 = time.perf_counter()
    index = build_index(lexicon)
    index.freeze()
    blob = serialize(index)
    with open(args.output, "wb") as fh:
        fh.write(blob)
    _info(
        f"indexed {len(lexicon.entries)} entries: {index.state_count()} states, "
        f"{index.transition_count()} transitions, {len(blob)} bytes, "
        f"{time.perf_counter() - t0:.2f}s"
    )
    return 0


def cmd_query(args):
    index = _read_index(args.index)
    ops = _load_ops(args)
    if args.method == "new":
        if args.bottom_up:
            answers = solve_node_bottom_up(index, ops, args.pattern, args.bound,
                                           include_substrings=args.include_substrings)
        else:
            answers = solve(index, ops, args.pattern, args.bound,
                            prune=not args.no_prune,
                            include_substrings=args.include_substrings)
    else:
        if args.include_substrings or args.bottom_up or args.no_prune:
            raise ValueError(
                "--include-substrings, --bottom-up and --no-prune require --method new"
            )
        words = index.words
        if args.method == "brute":
            answers = brute_force_search(make_lexicon(words), ops, args.pattern,
                                         args.bound)
        elif args.method == "oflazer":
            answers = oflazer_search(Trie(words), ops, args.pattern, args.bound)
        else:
            answers = forward_backward_search(
                Trie(words), Trie(w[::-1] for w in words), ops,
                args.pattern, args.bound,
            )
    for word, dist in answers:
        print(f"{word}\t{dist}")
    return 0


def cmd_bench(args):
    index = _read_index(args.index)
    ops = _load_ops(args)
    lexicon = make_lexicon(index.words)
    queries = generate_queries(lexicon, args.queries, args.bound, seed=_seed(args))
    methods = tuple(args.methods.split(","))
    try:
        rows = run_benchmark(index, lexicon, ops, queries, args.bound,
                             methods=methods, repeat=args.repeat)
    except (CorrectnessError, CoverageError) as exc:
        _info(f"benchmark aborted: {exc}")
        return 1
    sys.stdout.write(format_csv(rows))
    return 0


def cmd_verify(args):
    index = _read_index(args.index)
    ops = _load_ops(args)
    lexicon = make_lexicon(index.words)
    queries = generate_queries(lexicon, args.queries, args.bound, seed=_seed(args))
    mismatch = verify_equivalence(index, lexicon, ops, queries, args.bound)
    if mismatch is not None:
        print(f"pattern\t{mismatch.pattern}")
        print(f"bound\t{mismatch.bound}")
        print(f"got\t{mismatch.got}")
        print(f"want\t{mismatch.want}")
        return 1
    _info(f"ok: {len(queries)} queries agree at bound {args.bound}")
    return 0


def cmd_gen_lexicon(args):
    lexicon = generate_lexicon(args.count, args.alphabet_size, args.mean_length,
                               seed=_seed(args), distribution=args.distribution)
    out = sys.stdout if args.output is None else open(args.output, "w", encoding="utf-8")
    try:
        for word in lexicon.entries:
            out.write(word)
            out.write("\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_gen_queries(args):
    lexicon = _read_lexicon(args.lexicon)
    for pattern in generate_queries(lexicon, args.count, args.bound, seed=_seed(args)):
        print(pattern)
    return 0


def cmd_dump(args):
    index = _read_index(args.index)
    n = index.state_count()
    pairs = []  # dashed: left-extension edges between forward states
    for cid in range(n):
        for sid, _start, _llen, rtgt in index.rev.transitions(int(index.b_map[cid])):
            pairs.append((cid, index.id_char[sid], int(index.b_inv[rtgt])))
    if args.dot:
        print("digraph index {")
        print("  rankdir=LR;")
        for cid in range(n):
            label = index.state_canonical(cid).replace('"', '\\"')
            print(f'  s{cid} [label="{cid}: {label}"];')
        for cid in range(n):
            for first, label, tgt in index.state_transitions(cid):
                text = label.replace('"', '\\"')
                print(f'  s{cid} -> s{tgt} [label="{text}"];')
        for src, sym, tgt in pairs:
            glyph = sym.replace('"', '\\"')
            print(f'  s{src} -> s{tgt} [style=dashed, label="{glyph}", '
                  f"constraint=false];")
        print("}")
    else:
        for cid in range(n):
            print(f"state\t{cid}\t{index.state_canonical(cid)}")
        for cid in range(n):
            for first, label, tgt in index.state_transitions(cid):
                print(f"trans\t{cid}\t{label}\t{tgt}")
        for src, sym, tgt in pairs:
            print(f"left\t{src}\t{sym}\t{tgt}")
    return 0


# -------------------------------------------------------------------- parser


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="lexiscan",
        description="approximate lexicon search over a bidirectional substring index",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="index a lexicon file (one entry per line)")
    p.add_argument("lexicon")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="entries within a distance bound of a pattern")
    p.add_argument("index")
    p.add_argument("pattern")
    p.add_argument("-b", "--bound", type=int, required=True)
    p.add_argument("--method", choices=("new", "fb", "oflazer", "brute"),
                   default="new")
    p.add_argument("--no-prune", action="store_true",
                   help="disable occurrence-position pruning")
    p.add_argument("--bottom-up", action="store_true",
                   help="use the eager reference solver")
    p.add_argument("--include-substrings", action="store_true",
                   help="report matching substrings instead of entries")
    _add_ops_options(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("bench", help="time search methods over generated queries")
    p.add_argument("index")
    p.add_argument("-b", "--bound", type=int, required=True)
    p.add_argument("-q", "--queries", type=int, default=100)
    p.add_argument("--methods", default="ideal,new,fb,oflazer")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    _add_ops_options(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="check the engine against the exhaustive scan")
    p.add_argument("index")
    p.add_argument("-b", "--bound", type=int, required=True)
    p.add_argument("-q", "--queries", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    _add_ops_options(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen-lexicon", help="write a synthetic lexicon")
    p.add_argument("count", type=int)
    p.add_argument("--alphabet-size", type=int, required=True)
    p.add_argument("--mean-length", type=float, required=True)
    p.add_argument("--distribution", choices=("uniform", "binomial"),
                   default="uniform")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen_lexicon)

    p = sub.add_parser("gen-queries", help="write patterns derived from entries")
    p.add_argument("lexicon")
    p.add_argument("-b", "--bound", type=int, required=True)
    p.add_argument("-n", "--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen_queries)

    p = sub.add_parser("dump", help="list states, canonicals, and transitions")
    p.add_argument("index")
    p.add_argument("--dot", action="store_true", help="emit graphviz")
    p.set_defaults(func=cmd_dump)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        # reader (e.g. `| head`) went away; suppress the shutdown flush too
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except (LexiconError, ParseError, SerializationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
