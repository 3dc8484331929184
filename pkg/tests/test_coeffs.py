from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vircft.coeffs import (
    C,
    H,
    Definiteness,
    PolyMatrix,
    ScalarPoly,
    bareiss_det,
    binomial,
    char_poly,
    definiteness,
    divmod_poly,
    exact_div,
    format_rational,
    kernel_basis,
    leading_minors,
    matmul,
    parse_rational,
    rank,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def polys(draw, max_deg=3):
    terms = draw(
        st.dictionaries(
            st.tuples(st.integers(0, max_deg), st.integers(0, max_deg)), rationals, max_size=5
        )
    )
    return ScalarPoly(terms)


def leibniz_det(M):
    """Permutation-sum determinant; independent of the elimination code."""
    n = len(M)
    total = 0
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = sign
        for i in range(n):
            term = term * M[i][perm[i]]
        total = total + term
    return total


def test_rational_round_trip():
    for text in ["0", "3", "-7/4", "1/16"]:
        assert format_rational(parse_rational(text)) == text
    assert parse_rational("6/4") == Fraction(3, 2)
    with pytest.raises(ValueError):
        parse_rational("0.5")
    with pytest.raises(ValueError):
        parse_rational("c")


def test_canonical_string():
    det = 32 * H**3 + 4 * C * H**2 - 20 * H**2 + 2 * C * H
    assert str(det) == "32*h^3 + 4*c*h^2 - 20*h^2 + 2*c*h"
    assert str(4 * H + C / 2) == "4*h + 1/2*c"
    assert str(ScalarPoly()) == "0"
    assert str(-H + 1) == "-h + 1"


def test_parse_accepts_compact_form():
    p = ScalarPoly.parse("32*h^3+4*c*h^2-20*h^2+2*c*h")
    assert p == 32 * H**3 + 4 * C * H**2 - 20 * H**2 + 2 * C * H
    with pytest.raises(ValueError):
        ScalarPoly.parse("2*x")


@given(polys())
def test_str_parse_round_trip(p):
    assert ScalarPoly.parse(str(p)) == p


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert p * q == q * p
    assert (p - p) == ScalarPoly()


@given(polys(), polys(), rationals, rationals)
def test_evaluation_is_a_homomorphism(p, q, c0, h0):
    assert (p * q)(c0, h0) == p(c0, h0) * q(c0, h0)
    assert (p + q)(c0, h0) == p(c0, h0) + q(c0, h0)


@given(polys(2), polys(2))
@settings(max_examples=60)
def test_exact_division_recovers_factor(p, q):
    if not q:
        return
    assert exact_div(p * q, q) == p
    quot, rem = divmod_poly(p * q, q)
    assert quot == p and not rem


def test_division_with_remainder():
    quot, rem = divmod_poly(H**2 + C, H)
    assert quot == H and rem == C
    with pytest.raises(ArithmeticError):
        exact_div(H**2 + C, H)


def test_bareiss_matches_leibniz_symbolic():
    M = [[4 * H + C / 2, 6 * H, C], [6 * H, 8 * H**2 + 4 * H, H - 1], [C, H - 1, C * H]]
    assert bareiss_det(PolyMatrix(M)) == leibniz_det(M)


def test_bareiss_needs_pivoting():
    M = [[0, 1, 2], [1, 0, 3], [4, -3, 8]]
    assert bareiss_det(M) == leibniz_det(M) == -2


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(rationals, min_size=n, max_size=n), min_size=n, max_size=n)))
@settings(max_examples=80)
def test_bareiss_matches_leibniz_rational(M):
    assert bareiss_det(M) == leibniz_det(M)


def test_polymatrix_evaluate_and_strings():
    M = PolyMatrix([[4 * H + C / 2, 6 * H], [6 * H, 8 * H**2 + 4 * H]])
    assert M.is_symmetric()
    assert M.evaluate(2, 1) == [[5, 6], [6, 12]]
    assert M.to_strings()[0] == ["4*h + 1/2*c", "6*h"]


def test_definiteness_examples():
    assert definiteness([[2, 1], [1, 2]]) is Definiteness.POSITIVE_DEFINITE
    assert definiteness([[1, 1], [1, 1]]) is Definiteness.POSITIVE_SEMIDEFINITE
    assert definiteness([[0, 0], [0, 0]]) is Definiteness.POSITIVE_SEMIDEFINITE
    assert definiteness([[1, 0], [0, -1]]) is Definiteness.INDEFINITE
    # leading minor 0 but not PSD
    assert definiteness([[0, 1], [1, 0]]) is Definiteness.INDEFINITE
    assert definiteness([]) is Definiteness.POSITIVE_DEFINITE
    with pytest.raises(ValueError):
        definiteness([[1, 2], [3, 4]])
    with pytest.raises(TypeError):
        definiteness(PolyMatrix([[H]]))


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n)))
@settings(max_examples=80)
def test_definiteness_agrees_with_floating_eigenvalues(B):
    # M = B^T B + D is symmetric; classify against numpy eigenvalues when they are well separated from 0
    Bm = np.array(B, dtype=float)
    S = Bm.T @ Bm - np.diag(np.arange(len(B)) % 2)
    M = [[Fraction(int(round(x))) for x in row] for row in S]
    eig = np.linalg.eigvalsh(np.array(M, dtype=float))
    if np.min(np.abs(eig)) < 1e-9 and np.min(eig) > -1e-9:
        expect = {Definiteness.POSITIVE_SEMIDEFINITE}
    elif np.min(eig) > 1e-9:
        expect = {Definiteness.POSITIVE_DEFINITE}
    elif np.min(eig) < -1e-9:
        expect = {Definiteness.INDEFINITE}
    else:
        return
    assert definiteness(M) in expect


def test_char_poly_and_minors():
    M = [[2, 1], [1, 2]]
    # t^2 - 4t + 3, constant term first
    assert char_poly(M) == [3, -4, 1]
    assert leading_minors(M) == [2, 3]


def test_rank_and_kernel():
    A = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    assert rank(A) == 2
    (k,) = kernel_basis(A)
    assert matmul(A, [[x] for x in k]) == [[0], [0], [0]]
    assert rank([[0, 0], [0, 0]]) == 0
    assert len(kernel_basis([[0, 0], [0, 0]])) == 2


def test_kernel_normalization():
    (k,) = kernel_basis([[1, 1], [1, 1]])
    assert k == [1, -1]


def test_binomial_general():
    assert binomial(5, 2) == 10
    assert binomial(2, 5) == 0
    # (-1 choose j) = (-1)^j, (-2 choose j) = (-1)^j (j+1)
    assert [binomial(-1, j) for j in range(4)] == [1, -1, 1, -1]
    assert [binomial(-2, j) for j in range(4)] == [1, -2, 3, -4]
    assert binomial(3, -1) == 0
