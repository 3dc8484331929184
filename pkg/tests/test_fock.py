from fractions import Fraction

import pytest

from vircft.fock import (
    CutoffTooSmall,
    fock_bracket_check,
    fock_inner,
    fock_L,
    heis_act,
    heisenberg_check,
    mono_weight,
    monomial,
    monomials_of_weight,
)

ONE = {(): Fraction(1)}


def test_monomial_encoding():
    assert monomial(1, 1, 2) == ((1, 2), (2, 1))
    assert mono_weight(monomial(3, 1, 1)) == 5
    assert len(monomials_of_weight(4)) == 5
    with pytest.raises(ValueError):
        monomial(0)


def test_heisenberg_modes():
    x1sq = {monomial(1, 1): Fraction(1)}
    assert heis_act(1, x1sq) == {monomial(1): 2}
    assert heis_act(-2, ONE) == {monomial(2): 2}
    assert heis_act(0, ONE, mu=Fraction(1, 2)) == {(): Fraction(1, 2)}
    assert heis_act(0, ONE) == {}


@pytest.mark.parametrize("m", range(-3, 4))
@pytest.mark.parametrize("n", range(-3, 4))
def test_heisenberg_relation(m, n):
    assert heisenberg_check(m, n, 4, mu=Fraction(2))


def test_L0_is_weight_plus_mu_squared():
    for mu in (0, Fraction(1, 2), 3):
        for w in range(5):
            for mono in monomials_of_weight(w):
                f = {mono: Fraction(1)}
                assert fock_L(0, f, mu) == {mono: w + Fraction(mu) ** 2 / 2} or (w == 0 and mu == 0)


def test_L0_example():
    assert fock_L(0, {monomial(1, 2): 1}) == {monomial(1, 2): 3}


def test_L_minus_one_on_vacuum_is_mu_x1():
    assert fock_L(-1, ONE, mu=2) == {monomial(1): 2}
    assert fock_L(-1, ONE) == {}
    # L_{-2} 1 = x1^2 / 2 at mu = 0
    assert fock_L(-2, ONE) == {monomial(1, 1): Fraction(1, 2)}


def test_coefficients_stay_exact():
    out = fock_L(-2, {monomial(1): 1}, mu=1)
    assert all(type(v) is Fraction for v in out.values())


def test_inner_product():
    x1sq = {monomial(1, 1): Fraction(1)}
    assert fock_inner(x1sq, x1sq) == 2
    assert fock_inner({monomial(2): 1}, {monomial(2): 1}) == Fraction(1, 2)
    assert fock_inner({monomial(2): 1}, {monomial(1, 1): 1}) == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_adjointness(n):
    monos = [m for w in range(6) for m in monomials_of_weight(w)]
    for f in monos:
        for g in monos:
            F, G = {f: Fraction(1)}, {g: Fraction(1)}
            assert fock_inner(heis_act(n, F), G) == fock_inner(F, heis_act(-n, G))
            assert fock_inner(fock_L(n, F), G) == fock_inner(F, fock_L(-n, G))


@pytest.mark.parametrize("mu", [0, Fraction(1, 2), 2])
def test_bracket_sample(mu):
    for m, n in [(2, -2), (3, -1), (-1, -2), (1, 2)]:
        rep = fock_bracket_check(m, n, 5, mu)
        assert rep.ok and rep.checked > 0


def test_bracket_counterexample_is_reported():
    # central term present iff m + n = 0; shifting it off would break the check
    rep = fock_bracket_check(2, -2, 4)
    assert rep.ok and rep.counterexample is None


def test_cutoff_guard():
    with pytest.raises(CutoffTooSmall):
        fock_bracket_check(3, 3, 4)
    with pytest.raises(CutoffTooSmall):
        fock_bracket_check(-3, -3, 5)
