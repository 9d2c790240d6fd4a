from fractions import Fraction as F

import numpy as np
import pytest

import sofic.exactalg as ea


PHI_A = [[0, 0, 0], [F(2, 3), 0, 0], [F(1, 3), 0, 0]]
PHI_B = [[0, F(2, 3), F(1, 3)], [0, F(1, 3), 0], [0, 0, F(2, 3)]]
M = [[0, F(2, 3), F(1, 3)], [F(2, 3), F(1, 3), 0], [F(1, 3), 0, F(2, 3)]]


@pytest.mark.parametrize(
    "text,value",
    [("4/6", F(2, 3)), ("-1/8", F(-1, 8)), ("7", F(7)), (" +3/9 ", F(1, 3)), (F(5, 2), F(5, 2))],
)
def test_rational(text, value):
    x = ea.rational(text)
    assert isinstance(x, F)
    assert x == value


@pytest.mark.parametrize("text", ["0.5", "1e3", "a/b", "1//2", ""])
def test_rational_rejects(text):
    with pytest.raises(ValueError):
        ea.rational(text)


def test_rational_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        ea.rational("1/0")


def test_as_matrix():
    m = ea.as_matrix(PHI_B)
    assert m.dtype == object
    assert m.shape == (3, 3)
    assert all(isinstance(x, F) for x in m.flat)

    with pytest.raises(ValueError):
        ea.as_matrix([[1, 2], [3]])


@pytest.mark.parametrize(
    "m,r",
    [
        (PHI_B, 2),
        (PHI_A, 1),
        ([[0, 1], [0, F(1, 2)]], 1),
        ([[0, 0], [0, 0]], 0),
        (M, 3),
        ([[1, 2, 3], [2, 4, 6], [1, 0, 1]], 2),
    ],
)
def test_rank(m, r):
    assert ea.rank(ea.as_matrix(m)) == r


def test_rank_matches_minors():
    rng = np.random.default_rng(7)
    for _ in range(50):
        num = rng.integers(-2, 3, (2, 2))
        den = rng.integers(1, 4, (2, 2))
        m = ea.as_matrix([[F(int(num[i, j]), int(den[i, j])) for j in range(2)] for i in range(2)])
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        expect = 2 if det != 0 else (1 if any(x != 0 for x in m.flat) else 0)
        assert ea.rank(m) == expect


def test_rref():
    R, pivots = ea.rref(ea.as_matrix([[0, 2, 4], [1, 1, 1], [1, 2, 3]]))
    assert pivots == [0, 1]
    assert np.array_equal(R, ea.as_matrix([[1, 0, -1], [0, 1, 2], [0, 0, 0]]))


def test_kernel_basis():
    k = ea.kernel_basis(ea.as_matrix(M) - ea.identity(3))
    assert len(k) == 1
    assert list(k[0]) == [1, 1, 1]

    k = ea.kernel_basis(ea.as_matrix(PHI_A))
    assert [list(v) for v in k] == [[0, 1, 0], [0, 0, 1]]

    assert ea.kernel_basis(ea.identity(2)) == []


def test_image_basis():
    im = ea.image_basis(ea.as_matrix(PHI_A))
    assert len(im) == 1
    assert list(im[0]) == [0, 1, F(1, 2)]


def test_solve():
    x = ea.solve(ea.as_matrix([[2, 1], [1, 3]]), ea.as_vector([3, 5]))
    assert list(x) == [F(4, 5), F(7, 5)]

    with pytest.raises(ValueError):
        ea.solve(ea.as_matrix([[1, 2], [2, 4]]), ea.as_vector([1, 1]))


def test_project_along():
    x = ea.project_along(ea.as_vector([1, 0]), [ea.as_vector([1, 1])], [ea.as_vector([1, -1])])
    assert list(x) == [F(1, 2), F(1, 2)]

    with pytest.raises(ea.DecompositionError):
        ea.project_along(ea.as_vector([1, 0]), [ea.as_vector([1, 0])], [ea.as_vector([2, 0])])

    with pytest.raises(ea.DecompositionError):
        ea.project_along(ea.as_vector([1, 0]), [ea.as_vector([1, 0])], [])


def random_matrix(rng, rows: int, cols: int, top: int = 2):
    num = rng.integers(-top, top + 1, (rows, cols))
    den = rng.integers(1, 4, (rows, cols))
    return ea.as_matrix(
        [[F(int(num[i, j]), int(den[i, j])) for j in range(cols)] for i in range(rows)]
    )


def test_rank_of_product():
    rng = np.random.default_rng(11)
    for _ in range(60):
        n, k, m = (int(x) for x in rng.integers(1, 5, 3))
        A = random_matrix(rng, n, k, top=1)
        B = random_matrix(rng, k, m, top=1)
        assert ea.rank(ea.as_matrix(A @ B)) <= min(ea.rank(A), ea.rank(B))


def test_rank_nullity():
    rng = np.random.default_rng(3)
    for _ in range(60):
        rows, cols = (int(x) for x in rng.integers(1, 6, 2))
        m = random_matrix(rng, rows, cols, top=1)
        kernel = ea.kernel_basis(m)
        assert len(kernel) + ea.rank(m) == cols
        for v in kernel:
            assert all(x == 0 for x in m @ v)


def test_kernel_of_ones():
    (v,) = ea.kernel_basis(ea.as_matrix([[1, 1], [1, 1]]))
    assert v[0] != 0
    assert v[1] == -v[0]


def test_projections_sum():
    rng = np.random.default_rng(5)
    A = ea.as_matrix([[0, 1, 0], [F(1, 2), 0, F(1, 2)], [0, 1, 0]]) - ea.identity(3)
    U, W = ea.kernel_basis(A), ea.image_basis(A)
    for _ in range(20):
        x = ea.as_vector(random_matrix(rng, 1, 3, top=5)[0])
        total = ea.project_along(x, U, W) + ea.project_along(x, W, U)
        assert list(total) == list(x)


def test_cesaro_limit_periodic():
    # powers of a swap never converge, the averaged limit still exists
    A = ea.as_matrix([[0, 1], [1, 0]]) - ea.identity(2)
    g = ea.project_along(ea.as_vector([1, 0]), ea.kernel_basis(A), ea.image_basis(A))
    assert list(g) == [F(1, 2), F(1, 2)]


def test_solve_left_fixed():
    x = ea.solve_left_fixed(ea.as_matrix(M))
    assert x[0] != 0
    assert list(x / x[0]) == [1, 1, 1]

    with pytest.raises(ea.NoFixedVectorError):
        ea.solve_left_fixed(ea.as_matrix([[F(1, 2), 0], [0, F(1, 2)]]))


def test_matrix_power():
    b = ea.as_matrix(PHI_B)
    assert np.array_equal(ea.matrix_power(b, 0), ea.identity(3))
    assert np.array_equal(ea.matrix_power(b, 2), b @ b)

    with pytest.raises(ValueError):
        ea.matrix_power(b, -1)


def test_echelon_basis():
    E = ea.EchelonBasis(3)
    assert E.add(ea.as_vector([1, 1, 1]))
    assert not E.add(ea.as_vector([2, 2, 2]))
    assert E.add(ea.as_vector([0, 2, 1]))

    assert len(E) == 2
    assert E.pivots == [0, 1]
    assert np.array_equal(E.matrix(), ea.as_matrix([[1, 0, F(1, 2)], [0, 1, F(1, 2)]]))

    v = ea.as_vector([1, 2, F(3, 2)])
    assert E.contains(v)
    assert not E.contains(ea.as_vector([0, 0, 1]))

    c = E.coordinates(v)
    assert list(c) == [1, 2]
    assert np.array_equal(c @ E.matrix(), v)
