from __future__ import annotations
from pathlib import Path

from .exactalg import Rational, rational
from .linrep import Alphabet, LinearRepresentation, evaluate, normalize, reduce, trim
from .markov import BlockMap, MarkovMeasure, make_markov
from .order import OrderVerdict, markov_order

PACKAGE_ROOT = Path(__path__[0])  # type: ignore
