"""
1-step Markov measures, 1-block factor maps and k-block models

The conversions here go both ways between a stationary chain seen through a
letter-to-letter map and a non-negative normalized linear representation.
"""

from __future__ import annotations
import typing as T
import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactalg import (
    RMatrix,
    RVector,
    NoFixedVectorError,
    as_matrix,
    as_vector,
    zeros,
    solve_left_fixed,
)
from .linrep import (
    Alphabet,
    LinearRepresentation,
    NormalizationFlags,
    Word,
    evaluate,
    reachable,
    support_words,
)


class MarkovError(ValueError):
    pass


class NotStochasticError(MarkovError):
    pass


class NotStationaryError(MarkovError):
    pass


class NotIrreducibleError(MarkovError):
    pass


class NotNormalizedError(MarkovError):
    pass


class EmptySupportError(MarkovError):
    pass


class ModelInconsistencyError(MarkovError):
    """a k-block transition row does not sum to one"""


class MarkovMeasure:
    """
    stationary pair (v, M) on a state alphabet

    Build through make_markov, which validates the invariants.
    """

    def __init__(self, states: Alphabet, v: RVector, M: RMatrix):
        self.states = states
        self.v = as_vector(v)
        self.M = as_matrix(M, cols=len(states))
        self.v.setflags(write=False)
        self.M.setflags(write=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MarkovMeasure):
            return NotImplemented
        return (
            self.states == other.states
            and np.array_equal(self.v, other.v)
            and np.array_equal(self.M, other.M)
        )

    __hash__ = None  # type: ignore

    def __repr__(self) -> str:
        return f"MarkovMeasure(states={' '.join(self.states)})"


@dataclass(frozen=True)
class BlockMap:
    source: Alphabet
    target: Alphabet
    f: T.Mapping[str, str]

    def __post_init__(self):
        missing = [b for b in self.source if b not in self.f]
        if missing:
            raise ValueError(f"block map undefined on {missing}")
        bad = {b: a for b, a in self.f.items() if a not in self.target.symbols}
        if bad:
            raise ValueError(f"block map leaves the target alphabet: {bad}")
        unused = set(self.target) - {self.f[b] for b in self.source}
        if unused:
            raise ValueError(f"block map is not onto: {sorted(unused)} never reached")

    def image(self, b: str) -> str:
        return self.f[b]

    @classmethod
    def from_pairs(cls, source: Alphabet, text: str) -> BlockMap:
        """parse 'b1=a,b2=b,...'; target symbols appear in first-use order"""

        f: dict[str, str] = {}
        for item in text.split(","):
            if "=" not in item:
                raise ValueError(f"expected state=symbol, got {item!r}")
            b, a = (x.strip() for x in item.split("=", 1))
            if b in f:
                raise ValueError(f"state {b} mapped twice")
            f[b] = a

        target = list(dict.fromkeys(f[b] for b in source if b in f))
        return cls(source, Alphabet(tuple(target)), f)


def _strongly_connected(M: RMatrix, nodes: T.Sequence[int]) -> bool:
    sub = list(nodes)
    if not sub:
        return False
    inside = set(sub)
    adj = [[q for q in sub if M[p, q] > 0] if p in inside else [] for p in range(M.shape[0])]
    radj: list[list[int]] = [[] for _ in range(M.shape[0])]
    for p in sub:
        for q in adj[p]:
            radj[q].append(p)
    return reachable(adj, [sub[0]]) >= inside and reachable(radj, [sub[0]]) >= inside


def make_markov(states: Alphabet, v: T.Iterable[T.Any] | None, M: T.Any) -> MarkovMeasure:
    """
    validated Markov measure

    When v is None the stationary vector is computed from M and must be unique.
    """

    n = len(states)
    M = as_matrix(M, cols=n)
    if M.shape != (n, n):
        raise ValueError(f"M has shape {M.shape}, expected {(n, n)}")

    if any(x < 0 for x in M.flat):
        raise NotStochasticError("M has a negative entry")
    for i, row in enumerate(M):
        s = sum(row, Fraction(0))
        if s != 1:
            raise NotStochasticError(f"row {states.symbols[i]} of M sums to {s}")

    if v is None:
        v = stationary_vector(M)
    v = as_vector(v)
    if len(v) != n:
        raise ValueError(f"v has length {len(v)}, expected {n}")
    if any(x < 0 for x in v) or sum(v, Fraction(0)) != 1:
        raise NotStochasticError("v is not a probability vector")
    if not np.array_equal(as_vector(v @ M), v):
        raise NotStationaryError("v M != v")

    if not _strongly_connected(M, [q for q in range(n) if v[q] > 0]):
        raise NotIrreducibleError("M is not irreducible on the support of v")

    return MarkovMeasure(states, v, M)


def stationary_vector(M: RMatrix) -> RVector:
    """the left fixed probability vector of M"""

    x = solve_left_fixed(M)
    total = sum(x, Fraction(0))
    if total == 0:
        raise NoFixedVectorError("fixed vector sums to zero")
    x = as_vector(x / total)
    if any(e < 0 for e in x):
        raise NotStationaryError("fixed vector of M has mixed signs")
    return x


def _word_symbols(states: Alphabet, w: Word):
    n = len(states)
    if any(not 0 <= i < n for i in w):
        raise ValueError(f"word {w} is not over {n} states")


def markov_cylinder(m: MarkovMeasure, w: Word) -> Fraction:
    """v_{w1} M_{w1,w2} ... M_{w(n-1),wn}; 1 for the empty word"""

    _word_symbols(m.states, w)
    if not w:
        return Fraction(1)

    p = m.v[w[0]]
    for a, b in zip(w, w[1:]):
        p *= m.M[a, b]
    return Fraction(p)


def hidden_markov_rep(m: MarkovMeasure, f: BlockMap) -> LinearRepresentation:
    """
    representation of the image of m under the 1-block map f

    lam = v, gamma = 1 and phi(a)[p, q] = M[p, q] when f(q) = a.
    """

    if f.source != m.states:
        raise ValueError("block map source must be the Markov state alphabet")

    n = len(m.states)
    phi = {a: zeros(n, n) for a in f.target}
    for q, b in enumerate(m.states):
        col = phi[f.image(b)]
        for p in range(n):
            col[p, q] = m.M[p, q]

    return LinearRepresentation(f.target, m.v, phi, [1] * n)


def rep_to_hidden_markov(
    rep: LinearRepresentation, *, prune: bool = False
) -> tuple[MarkovMeasure, BlockMap]:
    """
    Markov measure on {1..n} x A whose image under (i, a) -> a is rep

    N[(i, a), (j, b)] = phi(b)[i, j] and v[(i, a)] = (lam phi(a))_i, which
    sums to lam_i over a and satisfies v N = v.

    Parameters
    ----------

    rep: LinearRepresentation
        must satisfy NormalizationFlags.normalized
    prune: bool, optional
        drop states with v = 0 and no incoming transition
    """

    flags = NormalizationFlags.of(rep)
    if not flags.normalized:
        raise NotNormalizedError(f"normalize the representation first: {flags}")

    n = rep.dim
    syms = rep.alphabet.symbols
    gens = rep.generators
    states = [(i, a) for i in range(n) for a in range(len(syms))]
    lam_phi = [as_vector(rep.lam @ g) for g in gens]

    v = as_vector(lam_phi[a][i] for i, a in states)
    N = zeros(len(states), len(states))
    for p, (i, _) in enumerate(states):
        for q, (j, b) in enumerate(states):
            N[p, q] = gens[b][i, j]

    keep = list(range(len(states)))
    if prune:
        keep = [q for q in keep if v[q] > 0 or any(N[p, q] > 0 for p in range(len(states)))]
        logging.info(f"rep_to_hidden_markov: pruned {len(states) - len(keep)} states")

    sep = "" if rep.alphabet.compact else ":"
    names = tuple(f"{i + 1}{sep}{syms[a]}" for i, a in states)
    src = Alphabet(tuple(names[q] for q in keep))
    f = BlockMap(src, rep.alphabet, {names[q]: syms[states[q][1]] for q in keep})

    m = make_markov(src, v[keep], N[np.ix_(keep, keep)])

    return m, f


def markov_rank1_rep(m: MarkovMeasure) -> LinearRepresentation:
    """representation over the states with phi(a)[b, c] = M[b, c] iff c = a"""

    n = len(m.states)
    phi = {}
    for a, sym in enumerate(m.states):
        g = zeros(n, n)
        for b in range(n):
            g[b, a] = m.M[b, a]
        phi[sym] = g

    return LinearRepresentation(m.states, m.v, phi, [1] * n)


@dataclass(frozen=True, eq=False)
class KBlockModel:
    """
    candidate 1-step Markov measure on the k-block presentation

    block symbols are named by the support words they stand for
    """

    k: int
    base: Alphabet
    block_alphabet: Alphabet
    markov: MarkovMeasure
    decode: T.Mapping[str, Word]


def build_k_block_model(rep: LinearRepresentation, k: int) -> KBlockModel:
    """
    v_u = value of u, M[u, u'] = value of the (k+1)-word merging u and u'
    divided by the value of u, for the length-k support words u, u'
    """

    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")

    flags = NormalizationFlags.of(rep)
    if not flags.normalized:
        raise NotNormalizedError(f"normalize the representation first: {flags}")

    blocks = support_words(rep, k)
    if not blocks:
        raise EmptySupportError(f"no word of length {k} has positive value")

    index = {u: i for i, u in enumerate(blocks)}
    values = [evaluate(rep, u) for u in blocks]

    nb = len(blocks)
    M = zeros(nb, nb)
    for i, u in enumerate(blocks):
        for a in range(len(rep.alphabet)):
            nxt = u[1:] + (a,)
            j = index.get(nxt)
            if j is not None:
                M[i, j] = evaluate(rep, u + (a,)) / values[i]
        s = sum(M[i], Fraction(0))
        if s != 1:
            raise ModelInconsistencyError(
                f"row {rep.alphabet.format_word(u)} of the {k}-block model sums to {s}"
            )

    names = tuple(rep.alphabet.format_word(u) for u in blocks)
    block_alphabet = Alphabet(names)
    markov = make_markov(block_alphabet, values, M)

    return KBlockModel(k, rep.alphabet, block_alphabet, markov, dict(zip(names, blocks)))


def k_block_predict(model: KBlockModel, w: Word) -> Fraction:
    """
    probability the k-block model gives to w

    Windows outside the support give 0. Words shorter than k get the sum over
    their right extensions to length k.
    """

    n = len(model.base)
    if any(not 0 <= i < n for i in w):
        raise ValueError(f"word {w} is not over {n} symbols")

    k = model.k
    index = {u: i for i, u in enumerate(model.decode[s] for s in model.block_alphabet)}
    v = model.markov.v
    M = model.markov.M

    if len(w) < k:
        return sum(
            (v[i] for u, i in index.items() if u[: len(w)] == tuple(w)), Fraction(0)
        )

    windows = [tuple(w[i : i + k]) for i in range(len(w) - k + 1)]
    if any(u not in index for u in windows):
        return Fraction(0)

    p = v[index[windows[0]]]
    for u, u2 in zip(windows, windows[1:]):
        p *= M[index[u], index[u2]]
    return Fraction(p)


def parametric_cycle(p: Fraction, r: Fraction) -> LinearRepresentation:
    """
    five-state representation over {a, b} with q = 1 - p, s = 1 - r

    Minimal of dimension 4 when p != r, Bernoulli when p == r.
    """

    p, r = Fraction(p), Fraction(r)
    if not (0 < p < 1 and 0 < r < 1):
        raise ValueError("p and r must lie strictly between 0 and 1")
    q, s = 1 - p, 1 - r
    sigma = 2 + r + s * (r + q)

    phi_a = [
        [0, p, 0, 0, 0],
        [0, 0, r, 0, 0],
        [r, 0, 0, 0, 0],
        [0, 0, r, 0, 0],
        [r, 0, 0, 0, 0],
    ]
    phi_b = [
        [0, 0, 0, q, 0],
        [s, 0, 0, 0, 0],
        [0, 0, 0, 0, s],
        [0, 0, 0, 0, s],
        [s, 0, 0, 0, 0],
    ]
    lam = [x / sigma for x in (Fraction(1), p, r, q, s * (r + q))]

    return LinearRepresentation(Alphabet(("a", "b")), lam, {"a": phi_a, "b": phi_b}, [1] * 5)
