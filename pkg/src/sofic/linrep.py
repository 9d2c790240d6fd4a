"""
linear representations (lam, phi, gamma) of measures on words

A word is a tuple of symbol indices into an Alphabet; the value of a word w
is lam phi(w_1) ... phi(w_m) gamma.
"""

from __future__ import annotations
import typing as T
import itertools
import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactalg import (
    RMatrix,
    RVector,
    EchelonBasis,
    DecompositionError,
    as_matrix,
    as_vector,
    identity,
    zeros,
    kernel_basis,
    image_basis,
    project_along,
)
from .config import check_word_length
from .parallel import ordered_map

Word = T.Tuple[int, ...]

EPSILON: Word = ()


class NotNonnegativeError(ValueError):
    pass


class ZeroRepresentationError(ValueError):
    pass


class NormalizationError(ValueError):
    pass


class AlphabetMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if not self.symbols:
            raise ValueError("alphabet needs at least one symbol")
        if any(not isinstance(s, str) or not s or s != s.strip() for s in self.symbols):
            raise ValueError(f"symbols must be non-empty strings without spaces: {self.symbols}")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError(f"duplicate symbols in {self.symbols}")

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> T.Iterator[str]:
        return iter(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise ValueError(f"symbol {symbol!r} not in alphabet {' '.join(self.symbols)}")

    @property
    def compact(self) -> bool:
        """all symbols are single characters, so words print without separators"""
        return all(len(s) == 1 for s in self.symbols)

    def parse_word(self, text: str) -> Word:
        """
        words are concatenated characters when every symbol is one character,
        comma-separated otherwise. "" is the empty word.
        """

        text = text.strip()
        if not text:
            return EPSILON
        parts = list(text) if self.compact else [s.strip() for s in text.split(",")]
        return tuple(self.index(s) for s in parts)

    def format_word(self, w: Word) -> str:
        sep = "" if self.compact else ","
        return sep.join(self.symbols[i] for i in w)

    def words(self, length: int) -> T.Iterator[Word]:
        """all words of a given length, lexicographic in alphabet order"""
        return itertools.product(range(len(self)), repeat=length)


class LinearRepresentation:
    """
    immutable triple (lam, phi, gamma) over an alphabet

    phi maps each symbol to an n x n matrix; lam is a row vector and gamma a
    column vector, both stored as 1-D object arrays.
    """

    def __init__(
        self,
        alphabet: Alphabet,
        lam: T.Iterable[T.Any],
        phi: T.Mapping[str, T.Any],
        gamma: T.Iterable[T.Any],
    ):
        self.alphabet = alphabet
        self.lam = as_vector(lam)
        self.gamma = as_vector(gamma)
        n = len(self.lam)

        if set(phi) != set(alphabet.symbols):
            raise ValueError(f"phi keys {sorted(phi)} do not match alphabet {alphabet.symbols}")

        self.phi: dict[str, RMatrix] = {}
        for s in alphabet:
            m = as_matrix(phi[s], cols=n)
            if m.shape != (n, n):
                raise ValueError(f"phi({s}) has shape {m.shape}, expected {(n, n)}")
            m.setflags(write=False)
            self.phi[s] = m

        if len(self.gamma) != n:
            raise ValueError(f"gamma has length {len(self.gamma)}, expected {n}")

        self.lam.setflags(write=False)
        self.gamma.setflags(write=False)

    @property
    def dim(self) -> int:
        return len(self.lam)

    @property
    def generators(self) -> list[RMatrix]:
        """phi matrices in alphabet order"""
        return [self.phi[s] for s in self.alphabet]

    def transition_matrix(self) -> RMatrix:
        """M = sum over the alphabet of phi(a)"""

        M = zeros(self.dim, self.dim)
        for m in self.generators:
            M = M + m
        return as_matrix(M, cols=self.dim)

    def is_nonnegative(self) -> bool:
        return (
            all(x >= 0 for x in self.lam)
            and all(x >= 0 for x in self.gamma)
            and all(x >= 0 for m in self.generators for x in m.flat)
        )

    def restrict(self, keep: T.Sequence[int]) -> LinearRepresentation:
        """sub-representation on the index subset keep"""

        idx = list(keep)
        return LinearRepresentation(
            self.alphabet,
            self.lam[idx],
            {s: m[np.ix_(idx, idx)] for s, m in self.phi.items()},
            self.gamma[idx],
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearRepresentation):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.dim == other.dim
            and np.array_equal(self.lam, other.lam)
            and np.array_equal(self.gamma, other.gamma)
            and all(np.array_equal(self.phi[s], other.phi[s]) for s in self.alphabet)
        )

    __hash__ = None  # type: ignore

    def __repr__(self) -> str:
        return f"LinearRepresentation(dim={self.dim}, alphabet={' '.join(self.alphabet)})"


@dataclass(frozen=True)
class NormalizationFlags:
    row_stochastic: bool
    lambda_stochastic_fixed: bool
    gamma_all_ones: bool
    nonnegative: bool

    @classmethod
    def of(cls, rep: LinearRepresentation) -> NormalizationFlags:
        """flags are always recomputed from the representation"""

        M = rep.transition_matrix()
        one = Fraction(1)
        return cls(
            row_stochastic=all(sum(r, Fraction(0)) == one for r in M),
            lambda_stochastic_fixed=sum(rep.lam, Fraction(0)) == one
            and np.array_equal(as_vector(rep.lam @ M) if rep.dim else rep.lam, rep.lam),
            gamma_all_ones=all(x == one for x in rep.gamma),
            nonnegative=rep.is_nonnegative(),
        )

    @property
    def normalized(self) -> bool:
        return (
            self.row_stochastic
            and self.lambda_stochastic_fixed
            and self.gamma_all_ones
            and self.nonnegative
        )


def _check_word(rep: LinearRepresentation, w: Word):
    n = len(rep.alphabet)
    if any(not 0 <= i < n for i in w):
        raise ValueError(f"word {w} is not over an alphabet of {n} symbols")


def phi_of_word(rep: LinearRepresentation, w: Word) -> RMatrix:
    _check_word(rep, w)
    m = identity(rep.dim)
    gens = rep.generators
    for i in w:
        m = m @ gens[i]
    return as_matrix(m, cols=rep.dim)


def forward_vector(rep: LinearRepresentation, w: Word) -> RVector:
    """lam phi(w)"""

    _check_word(rep, w)
    v = rep.lam
    gens = rep.generators
    for i in w:
        v = v @ gens[i]
    return as_vector(v)


def evaluate(rep: LinearRepresentation, w: Word) -> Fraction:
    """value of the word w: lam phi(w) gamma, exactly"""

    return Fraction(forward_vector(rep, w) @ rep.gamma) if rep.dim else Fraction(0)


def forward_layers(
    rep: LinearRepresentation, max_len: int, *, workers: int = None
) -> list[dict[Word, RVector]]:
    """
    lam phi(w) for every word of length 0..max_len

    layers[k] maps the words of length k, in lexicographic order, to their
    forward vectors. Each layer is built from the previous one, partitioned by
    prefix across worker threads.
    """

    check_word_length(max_len)
    gens = rep.generators

    def extend(item: tuple[Word, RVector]) -> list[tuple[Word, RVector]]:
        w, v = item
        return [(w + (i,), v @ g) for i, g in enumerate(gens)]

    layers: list[dict[Word, RVector]] = [{EPSILON: rep.lam}]
    for _ in range(max_len):
        chunks = ordered_map(extend, list(layers[-1].items()), workers)
        layers.append(dict(itertools.chain.from_iterable(chunks)))

    return layers


def _value(rep: LinearRepresentation, v: RVector) -> Fraction:
    return Fraction(v @ rep.gamma) if rep.dim else Fraction(0)


def _support_graph(M: RMatrix) -> list[list[int]]:
    n = M.shape[0]
    return [[q for q in range(n) if M[p, q] > 0] for p in range(n)]


def reachable(adj: T.Sequence[T.Sequence[int]], start: T.Iterable[int]) -> set[int]:
    """breadth-first closure of start in the digraph adj"""

    seen = set(start)
    queue = deque(seen)
    while queue:
        p = queue.popleft()
        for q in adj[p]:
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return seen


def _require_nonnegative(rep: LinearRepresentation, op: str):
    if not rep.is_nonnegative():
        raise NotNonnegativeError(f"{op} requires a non-negative representation")


def trim(rep: LinearRepresentation) -> LinearRepresentation:
    """
    keep the indices that are reachable from lam and co-reachable to gamma
    on the support digraph of M = sum phi(a)
    """

    _require_nonnegative(rep, "trim")

    adj = _support_graph(rep.transition_matrix())
    radj: list[list[int]] = [[] for _ in range(rep.dim)]
    for p, qs in enumerate(adj):
        for q in qs:
            radj[q].append(p)

    fwd = reachable(adj, (q for q in range(rep.dim) if rep.lam[q] > 0))
    bwd = reachable(radj, (q for q in range(rep.dim) if rep.gamma[q] > 0))
    keep = sorted(fwd & bwd)

    if not keep:
        raise ZeroRepresentationError("no index is both reachable and co-reachable")

    if len(keep) < rep.dim:
        logging.info(f"trim: dimension {rep.dim} -> {len(keep)}")

    return rep.restrict(keep)


def normalize(rep: LinearRepresentation) -> LinearRepresentation:
    """
    equivalent representation with M row-stochastic, lam stochastic and
    fixed by M, gamma all ones

    gamma is replaced by its Cesaro limit, computed exactly as the projection
    onto ker(M - I) along im(M - I). Indices where that limit vanishes are
    dropped, the rest are rescaled by D = diag(gamma'). lam is then replaced
    by its own Cesaro limit under the new M. Both limits keep every value only
    when the measure is shift-invariant; otherwise NormalizationError is raised.
    """

    _require_nonnegative(rep, "normalize")
    rep = trim(rep)
    source = rep

    total = evaluate(rep, EPSILON)
    if total != 1:
        raise NormalizationError(f"not a probability measure: value of the empty word is {total}")

    n = rep.dim
    A = rep.transition_matrix() - identity(n)
    try:
        g = project_along(rep.gamma, kernel_basis(A), image_basis(A))
    except DecompositionError as e:
        raise NormalizationError(f"powers of M are unbounded: {e}") from e

    if any(x < 0 for x in g):
        raise NormalizationError(f"projected gamma has a negative entry: {list(map(str, g))}")

    keep = [q for q in range(n) if g[q] != 0]
    g = g[keep]
    rep = rep.restrict(keep)
    n = len(keep)

    phi = {}
    for s, m in rep.phi.items():
        c = as_matrix(m)
        for i in range(n):
            for j in range(n):
                c[i, j] = m[i, j] * g[j] / g[i]
        phi[s] = c
    lam = as_vector(rep.lam[i] * g[i] for i in range(n))
    rep = LinearRepresentation(rep.alphabet, lam, phi, [1] * n)

    At = rep.transition_matrix().T - identity(n)
    try:
        lam = project_along(rep.lam, kernel_basis(At), image_basis(At))
    except DecompositionError as e:
        raise NormalizationError(f"powers of M are unbounded: {e}") from e

    out = LinearRepresentation(rep.alphabet, lam, rep.phi, rep.gamma)
    w = find_counterexample(out, source)
    if w is not None:
        fmt = source.alphabet.format_word
        raise NormalizationError(f"not shift-invariant: the value of '{fmt(w)}' would change")
    rep = out

    flags = NormalizationFlags.of(rep)
    if not flags.normalized:
        raise NormalizationError(f"normalization did not converge: {flags}")

    return rep


def backward_reduce(rep: LinearRepresentation) -> tuple[LinearRepresentation, RMatrix]:
    """
    restrict to the span of the vectors phi(w) gamma

    Returns the smaller representation and L (n x r) whose columns are the
    reduced echelon basis of that span, with gamma = L gamma',
    lam' = lam L and phi(a) L = L phi'(a).
    """

    n = rep.dim
    gens = rep.generators
    span = EchelonBasis(n)

    queue: deque[RVector] = deque()
    if span.add(rep.gamma):
        queue.append(as_vector(rep.gamma))
    while queue:
        v = queue.popleft()
        for g in gens:
            u = as_vector(g @ v)
            if span.add(u):
                queue.append(u)

    r = len(span)
    L = span.matrix().T if r else zeros(n, 0)
    phi = {}
    for s, m in rep.phi.items():
        cols = [span.coordinates(as_vector(m @ c)) for c in span.rows]
        phi[s] = as_matrix(cols, cols=r).T if r else zeros(0, 0)

    lam = as_vector(rep.lam @ L) if r else zeros(0)
    small = LinearRepresentation(rep.alphabet, lam, phi, span.coordinates(rep.gamma))
    return small, as_matrix(L, cols=r)


def forward_reduce(rep: LinearRepresentation) -> tuple[LinearRepresentation, RMatrix]:
    """
    restrict to the span of the vectors lam phi(w)

    Returns the smaller representation and R (r x n) whose rows are the
    reduced echelon basis of that span, with lam = lam' R,
    R phi(a) = phi'(a) R and gamma' = R gamma.
    """

    n = rep.dim
    gens = rep.generators
    span = EchelonBasis(n)

    queue: deque[RVector] = deque()
    if span.add(rep.lam):
        queue.append(as_vector(rep.lam))
    while queue:
        v = queue.popleft()
        for g in gens:
            u = as_vector(v @ g)
            if span.add(u):
                queue.append(u)

    r = len(span)
    R = span.matrix()
    phi = {}
    for s, m in rep.phi.items():
        rows = [span.coordinates(as_vector(row @ m)) for row in span.rows]
        phi[s] = as_matrix(rows, cols=r)

    gamma = as_vector(R @ rep.gamma) if r else zeros(0)
    small = LinearRepresentation(rep.alphabet, span.coordinates(rep.lam), phi, gamma)
    return small, R


def reduce(rep: LinearRepresentation) -> LinearRepresentation:
    """
    minimal equivalent representation: backward pass, then forward pass

    Works for signed representations. The zero series reduces to dimension 0.
    """

    back, _ = backward_reduce(rep)
    red, _ = forward_reduce(back)
    if red.dim < rep.dim:
        logging.info(f"reduce: dimension {rep.dim} -> {back.dim} -> {red.dim}")
    return red


def find_counterexample(a: LinearRepresentation, b: LinearRepresentation) -> Word | None:
    """
    a word on which a and b take different values, or None when equivalent

    Explores the joint forward vectors (lam_a phi_a(w), lam_b phi_b(w)) breadth
    first, keeping only words whose joint vector is new. Any disagreement
    shows up on a word of length below dim(a) + dim(b).
    """

    if a.alphabet != b.alphabet:
        raise AlphabetMismatchError(
            f"{' '.join(a.alphabet)} differs from {' '.join(b.alphabet)}"
        )

    na = a.dim
    ga = a.generators
    gb = b.generators
    diff = as_vector(list(a.gamma) + [-x for x in b.gamma])

    def joined(u: RVector, v: RVector) -> RVector:
        return as_vector(list(u) + list(v))

    span = EchelonBasis(na + b.dim)
    queue: deque[tuple[Word, RVector]] = deque([(EPSILON, joined(a.lam, b.lam))])
    span.add(queue[0][1])

    while queue:
        w, x = queue.popleft()
        if x @ diff != 0:
            return w
        for i in range(len(a.alphabet)):
            y = joined(x[:na] @ ga[i], x[na:] @ gb[i])
            if span.add(y):
                queue.append((w + (i,), y))

    return None


def equivalent(a: LinearRepresentation, b: LinearRepresentation) -> bool:
    """True iff a and b define the same map on all words"""

    return find_counterexample(a, b) is None


class Violation(T.NamedTuple):
    word: Word
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class AxiomReport:
    """
    first violation of each measure axiom, None where the axiom held

    empty_word: value of the empty word is 1
    right_extension: pi(w) = sum_a pi(wa)
    left_extension: pi(w) = sum_a pi(aw)
    """

    max_len: int
    empty_word: Violation | None
    right_extension: Violation | None
    left_extension: Violation | None

    @property
    def ok(self) -> bool:
        return all(
            v is None for v in (self.empty_word, self.right_extension, self.left_extension)
        )


def verify_measure_axioms(
    rep: LinearRepresentation, max_len: int, *, workers: int = None
) -> AxiomReport:
    """
    check the three consistency equations on every word of length <= max_len

    Words up to max_len + 1 are enumerated, so max_len + 1 must be within
    max_word_length.
    """

    check_word_length(max_len + 1)
    layers = forward_layers(rep, max_len + 1, workers=workers)
    values = [{w: _value(rep, v) for w, v in layer.items()} for layer in layers]
    k = len(rep.alphabet)

    pe = values[0][EPSILON]
    empty = None if pe == 1 else Violation(EPSILON, pe, Fraction(1))

    right = left = None
    for L in range(max_len + 1):
        nxt = values[L + 1]
        for w, pw in values[L].items():
            if right is None:
                s = sum((nxt[w + (a,)] for a in range(k)), Fraction(0))
                if s != pw:
                    right = Violation(w, pw, s)
            if left is None:
                s = sum((nxt[(a,) + w] for a in range(k)), Fraction(0))
                if s != pw:
                    left = Violation(w, pw, s)
        if right is not None and left is not None:
            break

    report = AxiomReport(max_len, empty, right, left)
    for name in ("empty_word", "right_extension", "left_extension"):
        v = getattr(report, name)
        if v is not None:
            word = rep.alphabet.format_word(v.word)
            logging.error(f"{name} fails at '{word}': {v.lhs} != {v.rhs}")

    return report


def support_words(
    rep: LinearRepresentation, length: int, *, workers: int = None
) -> list[Word]:
    """words of the given length with positive value, lexicographic order"""

    _require_nonnegative(rep, "support_words")
    layer = forward_layers(rep, length, workers=workers)[length]
    return [w for w, v in layer.items() if _value(rep, v) > 0]
