"""
Markov order of a sofic measure

A measure is k-step Markov exactly when every length-k product of the
generators of its minimal representation has rank at most one. Rank never
grows under right multiplication, so the search only follows products of
rank >= 2, one per class of positive scalar multiples.
"""

from __future__ import annotations
import typing as T
import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactalg import RMatrix, as_matrix, rank
from .config import check_word_length, limit
from .linrep import LinearRepresentation, Word, forward_layers, reduce
from .markov import build_k_block_model, k_block_predict
from .parallel import ordered_map

ORDER = "Order"
NOT_MARKOV = "NotMarkov"
INCONCLUSIVE = "Inconclusive"


class RankMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class OrderVerdict:
    """
    kind is Order, NotMarkov or Inconclusive.

    depth is the order k for Order, the proof depth K for NotMarkov and the
    last depth searched for Inconclusive.
    """

    kind: str
    depth: int
    minimal_dim: int
    cutoff: int

    def __str__(self) -> str:
        return f"{self.kind}({self.depth})"


def cutoff(n: int) -> int:
    """2^(n^2 - 1); a rank >= 2 product of this length rules out every order"""

    return 2 ** (n * n - 1) if n >= 1 else 1


def canonical(m: RMatrix) -> RMatrix:
    """m divided by the absolute value of its first nonzero entry in row-major order"""

    for x in m.flat:
        if x != 0:
            return as_matrix(m / abs(x), cols=m.shape[1])
    return m


def _key(m: RMatrix) -> tuple[Fraction, ...]:
    return tuple(m.flat)


class Frontier:
    """
    products of a fixed length with rank >= min_rank, one per class of
    positive scalar multiples, each with the first word that produced it

    Classes are kept sorted by their canonical entries, so a step gives the
    same frontier for any number of worker threads.
    """

    def __init__(
        self, depth: int, classes: T.Mapping[tuple, tuple[Word, RMatrix]], min_rank: int
    ):
        self.depth = depth
        self.min_rank = min_rank
        self.classes = {k: classes[k] for k in sorted(classes)}

    def __len__(self) -> int:
        return len(self.classes)

    def __bool__(self) -> bool:
        return bool(self.classes)

    @property
    def matrices(self) -> list[RMatrix]:
        return [m for _, m in self.classes.values()]

    def witness(self) -> Word | None:
        """shortest-then-lexicographic word among the stored classes"""

        if not self.classes:
            return None
        return min((w for w, _ in self.classes.values()), key=lambda w: (len(w), w))

    @classmethod
    def start(cls, generators: T.Sequence[RMatrix], min_rank: int = 2, *, workers: int = None):
        items = [((i,), g) for i, g in enumerate(generators)]
        return cls._merge(1, ordered_map(_classify(min_rank), items, workers), min_rank)

    def step(self, generators: T.Sequence[RMatrix], *, workers: int = None) -> Frontier:
        """products P g for every stored P and every generator g"""

        items = [
            (w + (i,), m @ g)
            for w, m in self.classes.values()
            for i, g in enumerate(generators)
        ]
        return self._merge(
            self.depth + 1, ordered_map(_classify(self.min_rank), items, workers), self.min_rank
        )

    @classmethod
    def _merge(cls, depth: int, found, min_rank: int) -> Frontier:
        classes: dict[tuple, tuple[Word, RMatrix]] = {}
        for item in found:
            if item is None:
                continue
            w, m = item
            k = _key(m)
            if k not in classes:
                classes[k] = (w, m)
        return cls(depth, classes, min_rank)


def _classify(min_rank: int):
    def classify(item: tuple[Word, RMatrix]) -> tuple[Word, RMatrix] | None:
        w, m = item
        m = as_matrix(m, cols=m.shape[1])
        if rank(m) < min_rank:
            return None
        return w, canonical(m)

    return classify


def _search(
    generators: T.Sequence[RMatrix],
    max_depth: int,
    *,
    min_rank: int = 2,
    workers: int = None,
    log_every: int = 0,
    max_classes: int = None,
) -> Frontier:
    """
    frontier at max_depth, or the first empty one before it, or the first
    one holding more than max_classes classes
    """

    front = Frontier.start(generators, min_rank, workers=workers)
    while front and front.depth < max_depth:
        if max_classes is not None and len(front) > max_classes:
            logging.warning(
                f"frontier holds {len(front)} classes at depth {front.depth}, "
                f"above order_frontier_max {max_classes}; stopping"
            )
            break
        front = front.step(generators, workers=workers)
        if log_every and front.depth % log_every == 0:
            logging.info(f"frontier depth {front.depth}: {len(front)} classes")
    return front


def _minimal_generators(rep: LinearRepresentation) -> tuple[int, list[RMatrix]]:
    red = reduce(rep)
    return red.dim, red.generators


def is_k_step(rep: LinearRepresentation, k: int, *, workers: int = None) -> bool:
    """every length-k product of the minimal generators has rank <= 1"""

    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")

    n, gens = _minimal_generators(rep)
    if n <= 1:
        return True
    return not _search(gens, k, workers=workers)


def markov_order(
    rep: LinearRepresentation, depth_cap: int = None, *, workers: int = None
) -> OrderVerdict:
    """
    smallest k for which the measure is k-step Markov, or a proof that
    there is none

    Parameters
    ----------

    rep: LinearRepresentation
        any representation, signed or not; it is reduced first
    depth_cap: int, optional
        stop searching at this depth (default: limits.json depth_cap)

    Returns
    -------

    verdict: OrderVerdict
        Order(k) when the frontier empties at depth k, NotMarkov(K) when it
        survives to the cutoff K, Inconclusive(depth) when it stops earlier at
        depth_cap or at more than order_frontier_max classes
    """

    if depth_cap is None:
        depth_cap = limit("depth_cap")
    if depth_cap < 1:
        raise ValueError(f"depth cap must be at least 1, got {depth_cap}")

    n, gens = _minimal_generators(rep)
    K = cutoff(n)
    if n <= 1:
        return OrderVerdict(ORDER, 1, n, K)

    top = min(K, depth_cap)
    if top < K:
        logging.warning(f"depth cap {depth_cap} is below the cutoff 2^{n * n - 1}")

    front = _search(
        gens,
        top,
        workers=workers,
        log_every=limit("log_every"),
        max_classes=limit("order_frontier_max"),
    )
    if not front:
        return OrderVerdict(ORDER, front.depth, n, K)

    w = front.witness()
    logging.info(f"rank >= 2 product of length {front.depth} survives, first word {w}")
    if front.depth >= K:
        return OrderVerdict(NOT_MARKOV, K, n, K)
    return OrderVerdict(INCONCLUSIVE, front.depth, n, K)


class JMViolation(T.NamedTuple):
    a: int
    b: int
    w: Word
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class JMReport:
    max_len: int
    violation: JMViolation | None

    @property
    def ok(self) -> bool:
        return self.violation is None


def lemma_jm_check(
    rep: LinearRepresentation, max_len: int, *, workers: int = None
) -> JMReport:
    """
    check value(abw) value(b) == value(ab) value(bw) for symbols a, b and every
    word w with |w| <= max_len

    Words w are taken shortest first, then lexicographically, then a, then b.
    The first failure is reported.
    Words up to max_len + 2 are enumerated, so max_len + 2 must be within
    max_word_length.
    """

    check_word_length(max_len + 2)
    layers = forward_layers(rep, max_len + 2, workers=workers)
    gamma = rep.gamma

    def value(w: Word) -> Fraction:
        return Fraction(layers[len(w)][w] @ gamma) if rep.dim else Fraction(0)

    k = len(rep.alphabet)
    for L in range(max_len + 1):
        for w in rep.alphabet.words(L):
            for a in range(k):
                for b in range(k):
                    lhs = value((a, b) + w) * value((b,))
                    rhs = value((a, b)) * value((b,) + w)
                    if lhs != rhs:
                        v = JMViolation(a, b, w, lhs, rhs)
                        fmt = rep.alphabet.format_word
                        logging.info(
                            f"jm-check fails at a={fmt((a,))} b={fmt((b,))} w='{fmt(w)}'"
                        )
                        return JMReport(max_len, v)

    return JMReport(max_len, None)


def is_k_step_semantic(
    rep: LinearRepresentation, k: int, horizon: int, *, workers: int = None
) -> bool:
    """the k-block model predicts every word of length <= horizon exactly"""

    if horizon < k + 1:
        raise ValueError(f"horizon {horizon} must be at least k + 1 = {k + 1}")

    model = build_k_block_model(rep, k)
    layers = forward_layers(rep, horizon, workers=workers)

    for layer in layers:
        for w, v in layer.items():
            mu = Fraction(v @ rep.gamma) if rep.dim else Fraction(0)
            if k_block_predict(model, w) != mu:
                logging.info(f"{k}-block model differs at '{rep.alphabet.format_word(w)}'")
                return False

    return True


@dataclass(frozen=True)
class HarnessReport:
    """
    target_length: 2^(n+1), the length at which products must have dropped rank
    hypothesis_holds: no product of length long_length keeps rank r
    longest_rank_r: longest product found that still has rank r
    counterexample: a product of target_length with rank r, if one was found
    exhaustive: the class search finished without hitting its size limit
    """

    n: int
    r: int
    target_length: int
    long_length: int
    trials: int
    seed: int
    exhaustive: bool
    hypothesis_holds: bool
    longest_rank_r: int
    longest_word: Word
    counterexample: Word | None

    @property
    def consistent(self) -> bool:
        return not (self.hypothesis_holds and self.counterexample is not None)


def rank_drop_harness(
    generators: T.Sequence[T.Any],
    r: int,
    trials: int = None,
    seed: int = 0,
    *,
    workers: int = None,
) -> HarnessReport:
    """
    look for a rank-r product of length 2^(n+1) of generators that all have
    rank r

    An exhaustive class search runs first; random products drawn with the
    given seed add evidence when that search grows past harness_frontier_max
    classes.
    """

    gens = [as_matrix(g) for g in generators]
    if not gens:
        raise ValueError("no generators")
    n = gens[0].shape[0]
    for i, g in enumerate(gens):
        if g.shape != (n, n):
            raise ValueError(f"generator {i} has shape {g.shape}, expected {(n, n)}")
        if rank(g) != r:
            raise RankMismatchError(f"generator {i} has rank {rank(g)}, expected {r}")

    if trials is None:
        trials = limit("harness_trials")
    target = 2 ** (n + 1)
    long_length = limit("harness_long_length")
    horizon = max(target, long_length)
    cap = limit("harness_frontier_max")

    longest: Word = (0,)
    counterexample: Word | None = None
    survives_long = False

    front = Frontier.start(gens, r, workers=workers)
    exhaustive = True
    while front:
        longest = front.witness()
        if front.depth == target and counterexample is None:
            counterexample = longest
        if front.depth == long_length:
            survives_long = True
        if front.depth >= horizon:
            break
        if len(front) > cap:
            logging.warning(
                f"harness: {len(front)} classes at depth {front.depth}, sampling instead"
            )
            exhaustive = False
            break
        front = front.step(gens, workers=workers)

    rng = np.random.default_rng(seed)
    for _ in range(trials if not exhaustive else 0):
        w = tuple(int(i) for i in rng.integers(len(gens), size=horizon))
        m = gens[w[0]]
        for d in range(1, horizon + 1):
            if d > 1:
                m = as_matrix(m @ gens[w[d - 1]], cols=n)
            if rank(m) < r:
                break
            if d > len(longest):
                longest = w[:d]
            if d == target and counterexample is None:
                counterexample = w[:d]
            if d == long_length:
                survives_long = True

    report = HarnessReport(
        n=n,
        r=r,
        target_length=target,
        long_length=long_length,
        trials=trials,
        seed=seed,
        exhaustive=exhaustive,
        hypothesis_holds=not survives_long,
        longest_rank_r=len(longest),
        longest_word=longest,
        counterexample=counterexample,
    )
    if not report.consistent:
        logging.error(
            f"rank-{r} product of length {target} despite the rank drop: {counterexample}"
        )

    return report

