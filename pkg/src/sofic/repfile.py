"""
read and write the plain-text formats for representations and Markov measures

RepFile:

    alphabet a b
    dim 3
    lambda 1/3 1/3 1/3
    gamma 1 1 1
    phi a
    <dim rows>
    phi b
    <dim rows>

MarkovFile:

    states 1 2 3
    v 1/3 1/3 1/3
    M
    <one row per state>

Scalars are integers or p/q. Blank lines and lines starting with # are
skipped. A dim 0 RepFile has only its two header lines.
"""

from __future__ import annotations
import typing as T
import re
from fractions import Fraction

from .exactalg import rational, RMatrix, RVector
from .linrep import Alphabet, LinearRepresentation
from .markov import MarkovMeasure, make_markov

__all__ = ["ParseError", "parse_rep", "print_rep", "parse_markov", "print_markov"]

_TOKEN = re.compile(r"\S+")


class ParseError(ValueError):
    def __init__(self, line: int, col: int, message: str):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"line {line}, col {col}: {message}")


class _Line(T.NamedTuple):
    number: int
    tokens: list[tuple[int, str]]

    @property
    def keyword(self) -> str:
        return self.tokens[0][1] if self.tokens else ""


class _Reader:
    """cursor over the significant lines of a text, with 1-based positions"""

    def __init__(self, text: str):
        self.lines: list[_Line] = []
        for i, raw in enumerate(text.splitlines(), start=1):
            if raw.lstrip().startswith("#"):
                continue
            toks = [(m.start() + 1, m.group()) for m in _TOKEN.finditer(raw)]
            if toks:
                self.lines.append(_Line(i, toks))
        self.pos = 0
        self.last = len(text.splitlines()) or 1

    def at_end(self) -> bool:
        return self.pos >= len(self.lines)

    def peek(self) -> _Line | None:
        return None if self.at_end() else self.lines[self.pos]

    def next(self, what: str) -> _Line:
        if self.at_end():
            raise ParseError(self.last, 1, f"unexpected end of input, expected {what}")
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def keyword(self, key: str) -> _Line:
        line = self.next(f"'{key}'")
        if line.keyword != key:
            col, tok = line.tokens[0]
            raise ParseError(line.number, col, f"expected '{key}', got '{tok}'")
        return line


def _scalars(
    line: _Line, tokens: list[tuple[int, str]], count: int, what: str
) -> list[Fraction]:
    if len(tokens) != count:
        col = tokens[count][0] if len(tokens) > count else line.tokens[-1][0]
        raise ParseError(line.number, col, f"{what} has {len(tokens)} entries, expected {count}")

    out = []
    for col, tok in tokens:
        try:
            out.append(rational(tok))
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(line.number, col, str(e)) from e
    return out


def _matrix(rd: _Reader, n: int, what: str) -> list[list[Fraction]]:
    rows = []
    for i in range(n):
        line = rd.next(f"row {i + 1} of {what}")
        rows.append(_scalars(line, line.tokens, n, f"row {i + 1} of {what}"))
    return rows


def _symbols(line: _Line) -> Alphabet:
    try:
        return Alphabet(tuple(tok for _, tok in line.tokens[1:]))
    except ValueError as e:
        raise ParseError(line.number, line.tokens[0][0], str(e)) from e


def _trailing(rd: _Reader):
    if not rd.at_end():
        line = rd.next("end of input")
        col, tok = line.tokens[0]
        raise ParseError(line.number, col, f"unexpected '{tok}' after the last block")


def parse_rep(text: str) -> LinearRepresentation:
    rd = _Reader(text)

    alphabet = _symbols(rd.keyword("alphabet"))

    line = rd.keyword("dim")
    if len(line.tokens) != 2 or not line.tokens[1][1].isdigit():
        raise ParseError(line.number, line.tokens[0][0], "dim takes one non-negative integer")
    n = int(line.tokens[1][1])

    if n == 0:
        _trailing(rd)
        empty: list[list[Fraction]] = []
        return LinearRepresentation(alphabet, [], {s: empty for s in alphabet}, [])

    line = rd.keyword("lambda")
    lam = _scalars(line, line.tokens[1:], n, "lambda")
    line = rd.keyword("gamma")
    gamma = _scalars(line, line.tokens[1:], n, "gamma")

    phi: dict[str, list[list[Fraction]]] = {}
    while not rd.at_end():
        line = rd.keyword("phi")
        if len(line.tokens) != 2:
            raise ParseError(line.number, line.tokens[0][0], "phi takes exactly one symbol")
        col, sym = line.tokens[1]
        if sym not in alphabet.symbols:
            raise ParseError(line.number, col, f"symbol '{sym}' is not in the alphabet")
        if sym in phi:
            raise ParseError(line.number, col, f"phi {sym} given twice")
        phi[sym] = _matrix(rd, n, f"phi {sym}")

    missing = [s for s in alphabet if s not in phi]
    if missing:
        raise ParseError(rd.last, 1, f"no phi block for {' '.join(missing)}")

    return LinearRepresentation(alphabet, lam, phi, gamma)


def _row(v: T.Iterable[T.Any]) -> str:
    return " ".join(str(Fraction(x)) for x in v)


def print_rep(rep: LinearRepresentation) -> str:
    """canonical text: single spaces, symbols in alphabet order, trailing newline"""

    out = [f"alphabet {' '.join(rep.alphabet)}", f"dim {rep.dim}"]
    if rep.dim:
        out.append(f"lambda {_row(rep.lam)}")
        out.append(f"gamma {_row(rep.gamma)}")
        for s in rep.alphabet:
            out.append(f"phi {s}")
            out.extend(_row(r) for r in rep.phi[s])
    return "\n".join(out) + "\n"


def parse_markov(text: str) -> MarkovMeasure:
    """
    the v line may be left out, in which case the stationary vector of M is
    used; the measure is validated by make_markov
    """

    rd = _Reader(text)

    states = _symbols(rd.keyword("states"))
    n = len(states)

    v: list[Fraction] | None = None
    nxt = rd.peek()
    if nxt is not None and nxt.keyword == "v":
        line = rd.next("v")
        v = _scalars(line, line.tokens[1:], n, "v")

    line = rd.keyword("M")
    if len(line.tokens) != 1:
        raise ParseError(line.number, line.tokens[1][0], "M takes no arguments")
    M = _matrix(rd, n, "M")
    _trailing(rd)

    return make_markov(states, v, M)


def print_markov(m: MarkovMeasure) -> str:
    v: RVector = m.v
    M: RMatrix = m.M
    out = [f"states {' '.join(m.states)}", f"v {_row(v)}", "M"]
    out.extend(_row(r) for r in M)
    return "\n".join(out) + "\n"
