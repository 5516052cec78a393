import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resgraph.linalg import (
    NotInvertibleError,
    NotSymmetricError,
    determinant,
    is_negative_definite,
    is_symmetric,
    leading_minors,
    solve_linear_system,
)

INDEX4_MATRIX = [[-2, 1, 1, 1], [1, -2, 0, 0], [1, 0, -2, 0], [1, 0, 0, -3]]


def laplace_det(m):
    """Cofactor expansion along the first row; slow but independent of elimination."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        total += (-1) ** j * m[0][j] * laplace_det(minor)
    return total


def test_solve_zero_rhs():
    assert solve_linear_system([[-2]], [0]) == [0]


def test_solve_index4_graph():
    assert solve_linear_system(INDEX4_MATRIX, [0, 0, 0, -1]) == [
        Fraction(1, 2),
        Fraction(1, 4),
        Fraction(1, 4),
        Fraction(1, 2),
    ]


def test_solve_single_minus_five():
    assert solve_linear_system([[-5]], [-3]) == [Fraction(3, 5)]


def test_solve_rational_rhs():
    x = solve_linear_system([[2, 1], [1, 3]], [Fraction(1, 2), Fraction(-2, 3)])
    assert 2 * x[0] + x[1] == Fraction(1, 2)
    assert x[0] + 3 * x[1] == Fraction(-2, 3)


def test_solve_needs_row_swap():
    assert solve_linear_system([[0, 1], [1, 0]], [3, 4]) == [4, 3]


def test_solve_singular():
    with pytest.raises(NotInvertibleError):
        solve_linear_system([[1, 2], [2, 4]], [1, 1])


def test_solve_shape_errors():
    with pytest.raises(ValueError):
        solve_linear_system([[1, 2]], [1])
    with pytest.raises(ValueError):
        solve_linear_system([[1]], [1, 2])
    assert solve_linear_system([], []) == []


def test_negative_definite_examples():
    assert is_negative_definite([[-1]])
    assert is_negative_definite([[-2, 1], [1, -2]])
    assert not is_negative_definite([[0]])
    assert is_negative_definite(INDEX4_MATRIX)
    assert is_negative_definite([])


def test_negative_definite_minors_of_a2():
    assert leading_minors([[-2, 1], [1, -2]]) == [-2, 3]


def test_leading_minors_with_zero_pivot():
    m = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
    assert leading_minors(m) == [0, -1, -1]


def test_negative_definite_refuses_asymmetric():
    with pytest.raises(NotSymmetricError):
        is_negative_definite([[-2, 1], [0, -2]])
    assert not is_symmetric([[-2, 1], [0, -2]])


def test_positive_definite_is_not_negative_definite():
    assert not is_negative_definite([[2, 0], [0, 2]])
    # indefinite but with a negative first pivot
    assert not is_negative_definite([[-1, 2], [2, -1]])


small_ints = st.integers(min_value=-4, max_value=4)


def square(n):
    return st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n)


@given(st.integers(min_value=0, max_value=5).flatmap(square))
def test_determinant_matches_cofactor_expansion(m):
    assert determinant(m) == laplace_det(m)


@given(st.integers(min_value=1, max_value=5).flatmap(square))
def test_leading_minors_match_cofactor_expansion(m):
    assert leading_minors(m) == [laplace_det([row[:k] for row in m[:k]]) for k in range(1, len(m) + 1)]


@st.composite
def negated_gram(draw):
    """``-(A^T A) - I`` is always negative definite."""
    n = draw(st.integers(min_value=1, max_value=5))
    a = draw(square(n))
    return [[-sum(a[k][i] * a[k][j] for k in range(n)) - (i == j) for j in range(n)] for i in range(n)]


@given(negated_gram(), st.data())
def test_solution_substitutes_back(m, data):
    n = len(m)
    rhs = data.draw(
        st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=n, max_size=n)
    )
    x = solve_linear_system(m, rhs)
    for row, b in zip(m, rhs):
        assert sum(c * xi for c, xi in zip(row, x)) == b
    for xi in x:
        assert isinstance(xi, Fraction)


@given(negated_gram())
def test_negated_gram_is_negative_definite(m):
    assert is_negative_definite(m)


def box_witness(m, bound=3):
    """A nonzero integer vector with x^T M x >= 0 inside the box, if there is one."""
    n = len(m)
    for x in itertools.product(range(-bound, bound + 1), repeat=n):
        if any(x) and sum(x[i] * m[i][j] * x[j] for i in range(n) for j in range(n)) >= 0:
            return x
    return None


def sylvester_negative_definite(m):
    """Sylvester's criterion with cofactor-expansion determinants: (-1)^k D_k > 0 for every k."""
    return all((-1) ** k * laplace_det([row[:k] for row in m[:k]]) > 0 for k in range(1, len(m) + 1))


@st.composite
def symmetric(draw, max_n=4):
    n = draw(st.integers(min_value=1, max_value=max_n))
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = draw(st.integers(min_value=-4, max_value=1))
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = draw(st.integers(min_value=-1, max_value=1))
    return m


@settings(max_examples=300)
@given(symmetric())
def test_negative_definite_agrees_with_sylvester_and_box_search(m):
    nd = is_negative_definite(m)
    assert nd == sylvester_negative_definite(m)
    # a small witness always refutes; the converse needs Sylvester (witnesses can lie outside the box)
    if box_witness(m) is not None:
        assert not nd


def test_negative_definite_with_only_a_distant_witness():
    m = [[-3, -1, -1, -1], [-1, -4, 1, 0], [-1, 1, -4, 1], [-1, 0, 1, -1]]
    assert box_witness(m) is None
    x = (7, -3, -5, -12)
    assert sum(x[i] * m[i][j] * x[j] for i in range(4) for j in range(4)) > 0
    assert not is_negative_definite(m)
