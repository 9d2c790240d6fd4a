"""
command line interface

    sofic [--output human|machine] [--threads N] [-v] COMMAND ...
    sofic --fixtures

FILE is a path, '-' for stdin, or the name of a shipped fixture.
Exit codes: 0 success, 1 domain error, 2 usage or parse error.

Machine output is one key=value per line, keys in a fixed order per command.
Commands whose result is a representation or a Markov measure print it in
the RepFile / MarkovFile format in both output modes.
"""

from __future__ import annotations
import argparse
import logging
import sys
import typing as T

from . import find
from .config import check_word_length
from .linrep import (
    LinearRepresentation,
    Word,
    evaluate,
    normalize,
    reduce,
    verify_measure_axioms,
)
from .markov import BlockMap, build_k_block_model, hidden_markov_rep, rep_to_hidden_markov
from .order import (
    INCONCLUSIVE,
    NOT_MARKOV,
    is_k_step,
    lemma_jm_check,
    markov_order,
    rank_drop_harness,
)
from .repfile import ParseError, parse_markov, parse_rep, print_markov, print_rep

Pairs = T.List[T.Tuple[str, T.Any]]


class UsageError(ValueError):
    """bad command-line input that is not caught by argparse"""


def _emit(P: argparse.Namespace, pairs: Pairs):
    if P.output == "machine":
        for k, v in pairs:
            print(f"{k}={v}")
    else:
        print(" ".join(f"{k}={v}" for k, v in pairs))


def _bool(x: bool) -> str:
    return "true" if x else "false"


def _load_rep(name: str) -> LinearRepresentation:
    return parse_rep(find.read_input(name))


def _max_len(max_len: int, extra: int) -> int:
    """--max-len checked against the longest word the command enumerates"""

    try:
        check_word_length(max_len + extra)
    except ValueError as e:
        raise UsageError(f"--max-len {max_len}: {e}") from e
    return max_len


def _word(rep: LinearRepresentation, text: str) -> Word:
    try:
        return rep.alphabet.parse_word(text)
    except ValueError as e:
        raise UsageError(str(e)) from e


def eval_cli(P) -> int:
    rep = _load_rep(P.file)
    value = evaluate(rep, _word(rep, P.word))
    if P.output == "machine":
        _emit(P, [("value", value)])
    else:
        print(value)
    return 0


def reduce_cli(P) -> int:
    print(print_rep(reduce(_load_rep(P.file))), end="")
    return 0


def normalize_cli(P) -> int:
    print(print_rep(normalize(_load_rep(P.file))), end="")
    return 0


def order_cli(P) -> int:
    v = markov_order(_load_rep(P.file), P.depth_cap, workers=P.threads)

    key = {NOT_MARKOV: "proof_depth", INCONCLUSIVE: "depth_reached"}.get(v.kind, "order")
    pairs: Pairs = [("verdict", v.kind), (key, v.depth)]
    _emit(P, pairs + [("minimal_dim", v.minimal_dim), ("cutoff", v.cutoff)])
    return 0


def is_markov_cli(P) -> int:
    ok = is_k_step(_load_rep(P.file), P.k, workers=P.threads)
    if P.output == "machine":
        _emit(P, [("k", P.k), ("k_step", _bool(ok))])
    else:
        print(_bool(ok))
    return 0


def to_hmm_cli(P) -> int:
    m, f = rep_to_hidden_markov(_load_rep(P.file), prune=P.prune)
    print("# map " + ",".join(f"{b}={f.image(b)}" for b in m.states))
    print(print_markov(m), end="")
    return 0


def from_hmm_cli(P) -> int:
    m = parse_markov(find.read_input(P.file))
    try:
        f = BlockMap.from_pairs(m.states, P.map)
    except ValueError as e:
        raise UsageError(f"--map: {e}") from e
    print(print_rep(hidden_markov_rep(m, f)), end="")
    return 0


def axioms_cli(P) -> int:
    rep = _load_rep(P.file)
    report = verify_measure_axioms(rep, _max_len(P.max_len, 1), workers=P.threads)

    pairs: Pairs = [("max_len", report.max_len)]
    for name in ("empty_word", "right_extension", "left_extension"):
        v = getattr(report, name)
        pairs.append((name, "ok" if v is None else f"'{rep.alphabet.format_word(v.word)}'"))
    pairs.append(("ok", _bool(report.ok)))
    _emit(P, pairs)

    return 0 if report.ok else 1


def kblock_cli(P) -> int:
    model = build_k_block_model(_load_rep(P.file), P.k)
    print(print_markov(model.markov), end="")
    return 0


def jm_check_cli(P) -> int:
    rep = _load_rep(P.file)
    report = lemma_jm_check(rep, _max_len(P.max_len, 2), workers=P.threads)

    pairs: Pairs = [("max_len", report.max_len), ("ok", _bool(report.ok))]
    v = report.violation
    if v is not None:
        fmt = rep.alphabet.format_word
        pairs += [
            ("a", fmt((v.a,))),
            ("b", fmt((v.b,))),
            ("w", f"'{fmt(v.w)}'"),
            ("lhs", v.lhs),
            ("rhs", v.rhs),
        ]
    _emit(P, pairs)
    return 0


def harness_cli(P) -> int:
    rep = _load_rep(P.file)
    report = rank_drop_harness(rep.generators, P.rank, P.trials, P.seed, workers=P.threads)
    fmt = rep.alphabet.format_word
    cex = report.counterexample
    _emit(
        P,
        [
            ("n", report.n),
            ("rank", report.r),
            ("target_length", report.target_length),
            ("long_length", report.long_length),
            ("seed", report.seed),
            ("exhaustive", _bool(report.exhaustive)),
            ("hypothesis_holds", _bool(report.hypothesis_holds)),
            ("longest_rank_r", report.longest_rank_r),
            ("counterexample", "none" if cex is None else f"'{fmt(cex)}'"),
            ("consistent", _bool(report.consistent)),
        ],
    )
    return 0 if report.consistent else 1


def list_fixtures(P) -> int:
    cat = find.catalog()
    if P.output == "machine":
        for name, meta in cat.items():
            print(f"{name}={meta['kind']}")
    else:
        width = max(map(len, cat))
        for name, meta in cat.items():
            print(f"{name:<{width}}  {meta['kind']:<6}  {meta['description']}")
    return 0


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return n


def _count(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return n


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sofic", description="exact sofic and hidden Markov measures"
    )
    p.add_argument("--output", choices=["human", "machine"], default="human")
    p.add_argument("--fixtures", help="list shipped example files", action="store_true")
    p.add_argument("--threads", help="worker threads", type=_positive)
    p.add_argument("-v", "--verbose", action="store_true")

    sub = p.add_subparsers(dest="command")

    s = sub.add_parser("eval", help="value of a word")
    s.add_argument("file")
    s.add_argument("word", nargs="?", default="", help="omit for the empty word")
    s.set_defaults(func=eval_cli)

    s = sub.add_parser("reduce", help="minimal equivalent representation")
    s.add_argument("file")
    s.set_defaults(func=reduce_cli)

    s = sub.add_parser("normalize", help="stochastic normal form")
    s.add_argument("file")
    s.set_defaults(func=normalize_cli)

    s = sub.add_parser("order", help="Markov order or a proof there is none")
    s.add_argument("file")
    s.add_argument("--depth-cap", type=_positive)
    s.set_defaults(func=order_cli)

    s = sub.add_parser("is-markov", help="k-step Markov test")
    s.add_argument("file")
    s.add_argument("-k", type=_positive, required=True)
    s.set_defaults(func=is_markov_cli)

    s = sub.add_parser("to-hmm", help="hidden Markov chain of a normalized representation")
    s.add_argument("file")
    s.add_argument("--prune", help="drop unreachable zero-mass states", action="store_true")
    s.set_defaults(func=to_hmm_cli)

    s = sub.add_parser("from-hmm", help="representation of a chain seen through a map")
    s.add_argument("file", help="MarkovFile")
    s.add_argument("--map", required=True, help="state=symbol,...")
    s.set_defaults(func=from_hmm_cli)

    s = sub.add_parser("axioms", help="check the measure equations")
    s.add_argument("file")
    s.add_argument("--max-len", type=_count, required=True)
    s.set_defaults(func=axioms_cli)

    s = sub.add_parser("kblock", help="k-block Markov model")
    s.add_argument("file")
    s.add_argument("-k", type=_positive, required=True)
    s.set_defaults(func=kblock_cli)

    s = sub.add_parser("jm-check", help="one-step Markov identity on short words")
    s.add_argument("file")
    s.add_argument("--max-len", type=_count, required=True)
    s.set_defaults(func=jm_check_cli)

    s = sub.add_parser("harness", help="search for long products that keep full rank")
    s.add_argument("file")
    s.add_argument("--rank", type=_count, required=True)
    s.add_argument("--trials", type=_count)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=harness_cli)

    return p


def cli(argv: list[str] = None) -> int:
    p = _parser()
    P = p.parse_args(argv)

    level = logging.INFO if P.verbose else None
    logging.basicConfig(format="%(message)s", level=level)

    if P.fixtures:
        return list_fixtures(P)
    if not P.command:
        p.print_usage(sys.stderr)
        return 2

    try:
        return P.func(P)
    except (ParseError, UsageError, FileNotFoundError) as e:
        print(f"sofic {P.command}: {e}", file=sys.stderr)
        return 2
    except (ValueError, ZeroDivisionError) as e:
        print(f"sofic {P.command}: {e}", file=sys.stderr)
        return 1


def main():
    raise SystemExit(cli())


if __name__ == "__main__":
    main()
