from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import c_of_t, h_of_t, minimal_character
from vircft.coeffs import C, H, Definiteness, PolyMatrix, ScalarPoly, bareiss_det
from vircft.partitions import partitions_of
from vircft.verma import (
    NonconstantRatio,
    VermaEngine,
    cocycle_check,
    discrete_c,
    discrete_h,
    discrete_series,
    first_recurrence_failure,
    gram,
    gram_at,
    kac_det_direct,
    kac_det_formula,
    kac_exponents,
    phi_pq,
    point_engine,
    quotient_graded_dims,
    shapovalov,
    singular_vectors,
    unitarity_classify,
    verma_act,
)

small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
partition_st = st.integers(0, 5).flatmap(lambda n: st.sampled_from(partitions_of(n)))


def test_gram_level_two():
    g = gram(2)
    assert g.basis == ((2,), (1, 1))
    assert g.matrix == PolyMatrix([[4 * H + C / 2, 6 * H], [6 * H, 8 * H**2 + 4 * H]])


def test_gram_level_zero_and_one():
    assert gram(0).matrix == PolyMatrix([[ScalarPoly.const(1)]])
    assert gram(1).matrix == PolyMatrix([[2 * H]])


@pytest.mark.parametrize("n", range(1, 6))
def test_norm_of_single_mode(n):
    # <v_n, v_n> = 2nh + c(n^3 - n)/12 follows from one use of the bracket
    assert shapovalov((n,), (n,)) == 2 * n * H + C * Fraction(n**3 - n, 12)


@pytest.mark.parametrize("N", range(5))
def test_gram_symmetric(N):
    assert gram(N).matrix.is_symmetric()


def test_level_three_entries():
    g = gram(3).matrix
    # <v_{1,1,1}, v_{1,1,1}> = 24h(h+1)(2h+1)
    assert g[2, 2] == 24 * H * (H + 1) * (2 * H + 1)
    assert g[0, 1] == 10 * H


@given(
    st.integers(-4, 4),
    st.integers(-4, 4),
    partition_st,
    small_rationals,
    small_rationals,
)
@settings(max_examples=120, deadline=None)
def test_bracket_relation_on_module(m, n, lam, c0, h0):
    """[L_m, L_n] = (m-n) L_{m+n} + c/12 (m^3-m) delta on every basis vector."""
    eng = point_engine(c0, h0)
    v = {lam: Fraction(1)}
    lhs = eng.act(m, eng.act(n, v))
    for k, x in eng.act(n, eng.act(m, v)).items():
        lhs[k] = lhs.get(k, 0) - x
    rhs = {k: (m - n) * x for k, x in eng.act(m + n, v).items()}
    if m + n == 0:
        rhs[lam] = rhs.get(lam, 0) + c0 * Fraction(m**3 - m, 12)
    keys = lhs.keys() | rhs.keys()
    assert all(lhs.get(k, 0) == rhs.get(k, 0) for k in keys)


@given(st.integers(1, 3), partition_st, partition_st)
@settings(max_examples=60, deadline=None)
def test_form_is_contravariant(n, lam, mu):
    eng = VermaEngine()
    lhs = eng.form(eng.act(n, {lam: 1}), {mu: 1})
    rhs = eng.form({lam: 1}, eng.act(-n, {mu: 1}))
    assert lhs == rhs


def test_verma_act_highest_weight():
    assert verma_act(0, {(): ScalarPoly.const(1)}) == {(): H}
    assert verma_act(1, {(): ScalarPoly.const(1)}) == {}
    assert verma_act(-3, {(1,): ScalarPoly.const(1)}) == {(3, 1): ScalarPoly.const(1)}
    # L_{-1} L_{-2} = L_{-2} L_{-1} + L_{-3}
    assert verma_act(-1, {(2,): ScalarPoly.const(1)}) == {(2, 1): 1, (3,): 1}


def test_kac_det_level_two():
    assert str(kac_det_direct(2)) == "32*h^3 + 4*c*h^2 - 20*h^2 + 2*c*h"
    assert kac_det_direct(2) == 2 * H * (16 * H**2 - 10 * H + 2 * H * C + C)


@pytest.mark.parametrize("p,q", [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (4, 1)])
@pytest.mark.parametrize("t", [Fraction(4, 3), Fraction(5, 2), Fraction(-2, 7), Fraction(3)])
def test_phi_vanishes_on_kac_curve(p, q, t):
    """phi_pq is monic in h with roots h_{p,q}, h_{q,p} along c = 13 - 6(t + 1/t)."""
    c0 = c_of_t(t)
    phi = phi_pq(p, q).subs(c=c0)
    assert phi(c0, h_of_t(t, p, q)) == 0
    assert phi(c0, h_of_t(t, q, p)) == 0
    assert phi.degree_in("h") == (1 if p == q else 2)
    assert phi.leading()[1] == 1


def test_phi_rejects_bad_indices():
    with pytest.raises(ValueError):
        phi_pq(1, 2)
    with pytest.raises(ValueError):
        phi_pq(1, 0)


def test_kac_exponents():
    assert kac_exponents(2) == [(1, 1, 1), (2, 1, 1)]
    assert kac_exponents(4) == [(1, 1, 3), (2, 1, 2), (2, 2, 1), (3, 1, 1), (4, 1, 1)]


def test_degree_in_h_matches_exponents():
    # deg_h det A^N = sum over partitions of their length
    for N in range(1, 5):
        expect = sum(len(lam) for lam in partitions_of(N))
        assert kac_det_direct(N).degree_in("h") == expect


GOLDEN_K = {1: 2, 2: 32, 3: 2304, 4: 37748736, 5: 8697308774400}


@pytest.mark.parametrize("N", range(1, 5))
def test_factorization_constant(N):
    fac = kac_det_formula(N)
    assert fac.K == GOLDEN_K[N]
    assert fac.product * fac.K == kac_det_direct(N)


@pytest.mark.parametrize("N", range(1, 5))
def test_K_is_product_of_diagonal_leading_terms(N):
    # top h-degree coefficient of det = product over partitions of the diagonal leading coefficients
    expect = 1
    for lam in partitions_of(N):
        lead = 1
        for part in set(lam):
            k = lam.count(part)
            lead *= (2 * part) ** k * factorial(k)
        expect *= lead
    assert GOLDEN_K[N] == expect


def test_nonconstant_ratio_is_an_error_type():
    assert issubclass(NonconstantRatio, ArithmeticError)


def test_discrete_series_m1():
    ds = discrete_series(1)
    assert ds.c == Fraction(1, 2)
    assert [(p, q, h) for p, q, h in ds.weights] == [
        (1, 1, 0),
        (1, 2, Fraction(1, 16)),
        (2, 2, Fraction(1, 16)),
    ]
    ext = discrete_series(1, extended=True)
    assert sorted({h for _, _, h in ext.weights}) == [0, Fraction(1, 16), Fraction(1, 2)]
    assert discrete_c(0) == 0
    with pytest.raises(ValueError):
        discrete_series(-1)


def test_discrete_h_matches_curve():
    for m in range(1, 5):
        t = Fraction(m + 3, m + 2)
        assert discrete_c(m) == c_of_t(t)
        for p in range(1, m + 2):
            for q in range(1, m + 3):
                assert discrete_h(m, p, q) == h_of_t(t, p, q)


def test_unitarity_at_c1_h_quarter():
    verdicts = unitarity_classify(1, Fraction(1, 4), 3)
    assert [v.verdict for v in verdicts] == [
        Definiteness.POSITIVE_DEFINITE,
        Definiteness.POSITIVE_DEFINITE,
        Definiteness.POSITIVE_SEMIDEFINITE,
        Definiteness.POSITIVE_SEMIDEFINITE,
    ]
    assert [v.nullity for v in verdicts] == [0, 0, 1, 1]


def test_unitarity_at_c0_h1():
    # <v_{1,1,1}> direction turns negative first at level 3
    verdicts = unitarity_classify(0, 1, 3)
    assert [v.verdict for v in verdicts] == [Definiteness.POSITIVE_DEFINITE] * 3 + [Definiteness.INDEFINITE]


def test_unitarity_negative_h():
    assert unitarity_classify(2, -1, 1)[1].verdict is Definiteness.INDEFINITE
    with pytest.raises(ValueError):
        unitarity_classify(1, 1, -1)


def test_singular_vector_c1_h_quarter():
    (v,) = singular_vectors(1, Fraction(1, 4), 2)
    assert v == {(2,): 1, (1, 1): -1}
    eng = point_engine(Fraction(1), Fraction(1, 4))
    assert eng.act(1, v) == {} and eng.act(2, v) == {}


def test_singular_vector_level_one_at_h0():
    (v,) = singular_vectors(Fraction(7, 3), 0, 1)
    assert v == {(1,): 1}


@pytest.mark.parametrize("r,s", [(1, 1), (1, 2), (2, 1)])
def test_quotient_dims_against_characters(r, s):
    # Ising (c = 1/2) irreducible modules
    h = Fraction((4 * r - 3 * s) ** 2 - 1, 48)
    assert quotient_graded_dims(Fraction(1, 2), h, 7) == minimal_character(3, 4, r, s, 7)


def test_quotient_dims_generic_point_is_full():
    assert quotient_graded_dims(Fraction(7, 3), Fraction(2, 5), 5) == [len(partitions_of(N)) for N in range(6)]


def test_cocycle():
    assert cocycle_check(10)
    assert first_recurrence_failure(lambda n: n**2, 10) == 2
    assert first_recurrence_failure(lambda n: 3 * n - 5 * n**3, 12) is None
    with pytest.raises(ValueError):
        cocycle_check(2)


def test_point_gram_is_evaluated_symbolic_gram():
    for N in range(4):
        assert gram_at(Fraction(3, 2), Fraction(-1, 3), N) == gram(N).matrix.evaluate(Fraction(3, 2), Fraction(-1, 3))


def test_point_det_is_evaluated_symbolic_det():
    c0, h0 = Fraction(5, 7), Fraction(-2, 3)
    for N in range(1, 5):
        assert bareiss_det(gram_at(c0, h0, N)) == kac_det_direct(N)(c0, h0)
