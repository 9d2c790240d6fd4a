"""
exact rational linear algebra

Matrices are 2-D numpy arrays of dtype=object holding fractions.Fraction,
vectors are 1-D arrays of the same kind. Nothing here ever touches a float.
"""

from __future__ import annotations
import typing as T
import re
import math
import numbers
from fractions import Fraction
from functools import reduce

import numpy as np

Rational = Fraction
RMatrix = np.ndarray
RVector = np.ndarray

__all__ = [
    "Rational",
    "rational",
    "as_matrix",
    "as_vector",
    "identity",
    "zeros",
    "rank",
    "rref",
    "row_space_basis",
    "kernel_basis",
    "image_basis",
    "solve",
    "project_along",
    "solve_left_fixed",
    "matrix_power",
    "EchelonBasis",
]

_RATIONAL_PAT = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


class DecompositionError(ValueError):
    """the two subspaces do not form a direct sum of the ambient space"""


class NoFixedVectorError(ValueError):
    """no nonzero x with x m = x"""


def rational(text: str | int | Fraction) -> Fraction:
    """
    parse a scalar written as a bare integer or p/q

    Decimals are rejected: "0.5" is not exact notation here.
    """

    if isinstance(text, numbers.Rational):
        return Fraction(text)

    mat = _RATIONAL_PAT.match(text.strip())
    if not mat:
        raise ValueError(f"not a rational number: {text!r}")

    den = int(mat.group(2)) if mat.group(2) else 1
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")

    return Fraction(int(mat.group(1)), den)


def as_matrix(rows: T.Iterable[T.Iterable[T.Any]], cols: int = None) -> RMatrix:
    """build an object array of Fraction from nested sequences"""

    data = [[rational(x) for x in r] for r in rows]
    if not data:
        return np.empty((0, cols or 0), dtype=object)

    width = len(data[0])
    if any(len(r) != width for r in data):
        raise ValueError("ragged rows")

    m = np.empty((len(data), width), dtype=object)
    for i, r in enumerate(data):
        for j, x in enumerate(r):
            m[i, j] = x
    return m


def as_vector(entries: T.Iterable[T.Any]) -> RVector:
    data = [rational(x) for x in entries]
    v = np.empty(len(data), dtype=object)
    for i, x in enumerate(data):
        v[i] = x
    return v


def zeros(rows: int, cols: int = None) -> np.ndarray:
    if cols is None:
        return as_vector([0] * rows)
    return as_matrix([[0] * cols for _ in range(rows)], cols=cols)


def identity(n: int) -> RMatrix:
    m = zeros(n, n)
    for i in range(n):
        m[i, i] = Fraction(1)
    return m


def matrix_power(m: RMatrix, k: int) -> RMatrix:
    if k < 0:
        raise ValueError("negative power")
    return reduce(lambda a, b: a @ b, [m] * k, identity(m.shape[0]))


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _integer_rows(m: RMatrix) -> list[list[int]]:
    """scale each row by the lcm of its denominators; row scaling keeps the rank"""

    rows = []
    for r in m:
        den = reduce(_lcm, (Fraction(x).denominator for x in r), 1)
        rows.append([int(Fraction(x) * den) for x in r])
    return rows


def rank(m: RMatrix) -> int:
    """
    exact rank by fraction-free (Bareiss) elimination

    Every intermediate entry is a minor of the integer-scaled input, so the
    division by the previous pivot is always exact.
    """

    if m.size == 0:
        return 0

    a = _integer_rows(m)
    nrows, ncols = m.shape
    r = 0
    prev = 1

    for c in range(ncols):
        if r == nrows:
            break
        for i in range(r, nrows):
            if a[i][c] != 0:
                break
        else:
            continue

        if i != r:
            a[r], a[i] = a[i], a[r]

        piv = a[r][c]
        for i in range(r + 1, nrows):
            f = a[i][c]
            for j in range(c + 1, ncols):
                a[i][j] = (piv * a[i][j] - f * a[r][j]) // prev
            a[i][c] = 0
        prev = piv
        r += 1

    return r


def rref(m: RMatrix) -> tuple[RMatrix, list[int]]:
    """
    reduced row echelon form, pivots chosen leftmost first

    Returns
    -------

    R: RMatrix
        same shape as m, zero rows last
    pivots: list of int
        pivot column of each nonzero row of R
    """

    a = [[Fraction(x) for x in r] for r in m]
    nrows = len(a)
    ncols = m.shape[1] if m.ndim == 2 else 0
    pivots: list[int] = []
    r = 0

    for c in range(ncols):
        if r == nrows:
            break
        for i in range(r, nrows):
            if a[i][c] != 0:
                break
        else:
            continue

        a[r], a[i] = a[i], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1

    return as_matrix(a, cols=ncols), pivots


def row_space_basis(vectors: T.Sequence[RVector], dim: int) -> list[RVector]:
    """reduced echelon basis of the span of vectors (all of length dim)"""

    if not vectors:
        return []

    R, pivots = rref(as_matrix(vectors, cols=dim))
    return [R[i].copy() for i in range(len(pivots))]


def kernel_basis(m: RMatrix) -> list[RVector]:
    """basis of {x : m x = 0} in reduced echelon form; [] when the kernel is trivial"""

    ncols = m.shape[1]
    R, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]

    vecs = []
    for f in free:
        x = zeros(ncols)
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -R[i, f]
        vecs.append(x)

    return row_space_basis(vecs, ncols)


def image_basis(m: RMatrix) -> list[RVector]:
    """basis of the column space in reduced echelon form"""

    if m.size == 0:
        return []
    return row_space_basis(list(m.T), m.shape[0])


def solve(a: RMatrix, b: RVector) -> RVector:
    """unique solution x of a x = b for square nonsingular a"""

    n = a.shape[0]
    if a.shape != (n, n) or len(b) != n:
        raise ValueError(f"shape mismatch {a.shape} vs {len(b)}")

    aug = np.concatenate([a, np.asarray(b, dtype=object).reshape(n, 1)], axis=1)
    R, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("singular system")

    return as_vector(R[:, n])


def project_along(
    x: RVector, u_basis: T.Sequence[RVector], w_basis: T.Sequence[RVector]
) -> RVector:
    """
    component of x in span(u_basis) for the decomposition span(U) + span(W)

    Parameters
    ----------

    x: RVector
        vector to project
    u_basis: list of RVector
        basis of the target subspace
    w_basis: list of RVector
        basis of the complement projected along

    Raises
    ------

    DecompositionError
        when U and W together are not a basis of the ambient space
    """

    n = len(x)
    cols = list(u_basis) + list(w_basis)
    if len(cols) != n:
        raise DecompositionError(f"{len(u_basis)} + {len(w_basis)} vectors in dimension {n}")
    if n == 0:
        return zeros(0)

    B = as_matrix(cols).T
    if rank(B) != n:
        raise DecompositionError("subspaces intersect nontrivially")

    c = solve(B, x)

    out = zeros(n)
    for ci, u in zip(c[: len(u_basis)], u_basis):
        out = out + ci * u
    return as_vector(out)


def solve_left_fixed(m: RMatrix) -> RVector:
    """
    nonzero row vector x with x m = x

    When the fixed space has dimension > 1, the reduced echelon basis vector
    with the smallest leading index is returned.
    """

    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError(f"square matrix required, got {m.shape}")

    basis = kernel_basis(m.T - identity(n))
    if not basis:
        raise NoFixedVectorError("x m = x has only the zero solution")

    return basis[0]


class EchelonBasis:
    """
    growing basis kept in reduced row echelon form

    Coordinates of a vector in the span are read off at the pivot positions.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[RVector] = []
        self.pivots: list[int] = []

    def __len__(self) -> int:
        return len(self.rows)

    def residual(self, v: RVector) -> RVector:
        r = as_vector(v)
        for row, p in zip(self.rows, self.pivots):
            if r[p] != 0:
                r = r - r[p] * row
        return r

    def contains(self, v: RVector) -> bool:
        return not any(x != 0 for x in self.residual(v))

    def add(self, v: RVector) -> bool:
        """insert v if it is independent of the current rows; True when inserted"""

        r = self.residual(v)
        nz = [i for i, x in enumerate(r) if x != 0]
        if not nz:
            return False

        p = nz[0]
        r = as_vector(r / r[p])
        for i, row in enumerate(self.rows):
            if row[p] != 0:
                self.rows[i] = as_vector(row - row[p] * r)

        k = sum(1 for q in self.pivots if q < p)
        self.rows.insert(k, r)
        self.pivots.insert(k, p)
        return True

    def coordinates(self, v: RVector) -> RVector:
        """coordinates of v (assumed in the span) with respect to self.rows"""

        return as_vector(v[p] for p in self.pivots)

    def matrix(self) -> RMatrix:
        """rows stacked as a len(self) x dim matrix"""

        return as_matrix(self.rows, cols=self.dim)
