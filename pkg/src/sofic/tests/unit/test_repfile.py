from fractions import Fraction as F

import numpy as np
import pytest

from sofic.find import fixture
from sofic.linrep import Alphabet, LinearRepresentation, reduce
from sofic.markov import NotStationaryError
from sofic.repfile import ParseError, parse_markov, parse_rep, print_markov, print_rep

HEAD = "alphabet a b\ndim 3\n"
PHI = "phi a\n0 0 0\n2/3 0 0\n1/3 0 0\nphi b\n0 2/3 1/3\n0 1/3 0\n0 0 2/3\n"


def test_parse_fixture():
    rep = parse_rep(fixture("merged_chain.rep"))
    assert rep.dim == 3
    assert rep.alphabet == Alphabet(("a", "b"))
    assert rep.phi["a"][1, 0] == F(2, 3)


def test_lambda_wrong_length():
    text = HEAD + "lambda 1/3 1/3\ngamma 1 1 1\n" + PHI
    with pytest.raises(ParseError) as e:
        parse_rep(text)
    assert e.value.line == 3


def test_reduces_fractions():
    text = HEAD + "lambda 4/6 1/6 1/6\ngamma 1 1 1\n" + PHI
    assert parse_rep(text).lam[0] == F(2, 3)


def test_decimal_rejected():
    text = HEAD + "lambda 1/3 0.5 1/3\ngamma 1 1 1\n" + PHI
    with pytest.raises(ParseError) as e:
        parse_rep(text)
    assert (e.value.line, e.value.col) == (3, 12)


def test_comments_and_blank_lines():
    text = "# merged chain\n\n" + fixture("merged_chain.rep").replace("phi b", "\nphi b")
    assert parse_rep(text) == parse_rep(fixture("merged_chain.rep"))


@pytest.mark.parametrize(
    "tail",
    [
        "phi a\n0 0 0\n2/3 0 0\n1/3 0 0\n",
        PHI + "phi a\n0 0 0\n0 0 0\n0 0 0\n",
        PHI.replace("phi b", "phi c"),
        PHI.replace("1/3 0 0\n", "1/3 0\n", 1),
        PHI.replace("2/3 0 0", "2/0 0 0"),
    ],
    ids=["missing", "duplicate", "unknown", "short-row", "zero-denominator"],
)
def test_bad_phi(tail):
    with pytest.raises(ParseError):
        parse_rep(HEAD + "lambda 1/3 1/3 1/3\ngamma 1 1 1\n" + tail)


def test_dim_zero():
    rep = parse_rep("alphabet a b\ndim 0\n")
    assert rep.dim == 0
    assert print_rep(rep) == "alphabet a b\ndim 0\n"
    dead = parse_rep("alphabet a b\ndim 1\nlambda 0\ngamma 1\nphi a\n1/2\nphi b\n1/2\n")
    assert print_rep(reduce(dead)) == "alphabet a b\ndim 0\n"


def test_print_fixture():
    text = fixture("merged_chain.rep")
    assert print_rep(parse_rep(text)) == text


def test_print_reduced():
    red = reduce(parse_rep(fixture("four_letter_markov.rep")))
    assert "lambda 5/8 1/2 -1/8\n" in print_rep(red)


def random_rep(rng, A: Alphabet, n: int) -> LinearRepresentation:
    def entries(size):
        num = rng.integers(-9, 10, size)
        den = rng.integers(1, 7, size)
        return [F(int(p), int(q)) for p, q in zip(num, den)]

    phi = {s: [entries(n) for _ in range(n)] for s in A}
    return LinearRepresentation(A, entries(n), phi, entries(n))


@pytest.mark.parametrize("n", [1, 2, 4])
def test_round_trip(n):
    rep = random_rep(np.random.default_rng(n), Alphabet(("x1", "x2", "x3")), n)
    assert parse_rep(print_rep(rep)) == rep


def test_markov_round_trip():
    text = fixture("merged_chain.mkv")
    m = parse_markov(text)
    assert print_markov(m) == text
    assert parse_markov(print_markov(m)) == m


def test_markov_stationary_default():
    text = fixture("uniform_merged_chain.mkv")
    lines = [x for x in text.splitlines() if not x.startswith("v ")]
    m = parse_markov("\n".join(lines))
    assert m == parse_markov(text)


def test_markov_errors():
    with pytest.raises(ParseError):
        parse_markov("states 1 2\nM\n1/2 1/2\n")
    with pytest.raises(ParseError):
        parse_markov("states 1 2\nM x\n1/2 1/2\n1/2 1/2\n")
    with pytest.raises(NotStationaryError):
        parse_markov("states 1 2\nv 1 0\nM\n1/2 1/2\n1/2 1/2\n")
