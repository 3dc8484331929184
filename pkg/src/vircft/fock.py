"""Bosonic Fock space C[x1, x2, ...] with the Heisenberg and c=1 Virasoro actions.

A monomial is a sorted tuple of ``(index, exponent)`` pairs; ``()`` is the
vacuum polynomial 1. Polynomials are dicts ``{monomial: Fraction}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .partitions import partitions_of

Monomial = tuple[tuple[int, int], ...]

VACUUM: Monomial = ()


class CutoffTooSmall(ValueError):
    pass


def monomial(*indices: int) -> Monomial:
    """``monomial(1, 1, 2)`` is x1^2 x2."""
    exps: dict[int, int] = {}
    for n in indices:
        if n < 1:
            raise ValueError("variable indices start at 1")
        exps[n] = exps.get(n, 0) + 1
    return tuple(sorted(exps.items()))


def mono_weight(m: Monomial) -> int:
    return sum(n * k for n, k in m)


def monomials_of_weight(w: int) -> list[Monomial]:
    return [monomial(*p) for p in partitions_of(w)]


def _add(out: dict, mono: Monomial, coef) -> None:
    new = out.get(mono, 0) + coef
    if new:
        out[mono] = new
    else:
        out.pop(mono, None)


def _times_x(m: Monomial, n: int) -> Monomial:
    exps = dict(m)
    exps[n] = exps.get(n, 0) + 1
    return tuple(sorted(exps.items()))


def _d_dx(m: Monomial, n: int) -> tuple[int, Monomial]:
    exps = dict(m)
    k = exps.get(n, 0)
    if not k:
        return 0, m
    if k == 1:
        del exps[n]
    else:
        exps[n] = k - 1
    return k, tuple(sorted(exps.items()))


def _exact(f: dict) -> dict:
    return {m: Fraction(v) for m, v in f.items() if v}


def heis_act(n: int, f: dict, mu=0) -> dict:
    """a_n = d/dx_n, a_{-n} = n x_n (n > 0), a_0 = mu."""
    f = _exact(f)
    out: dict = {}
    if n == 0:
        mu = Fraction(mu)
        if mu:
            for m, v in f.items():
                _add(out, m, mu * v)
        return out
    if n > 0:
        for m, v in f.items():
            k, m2 = _d_dx(m, n)
            if k:
                _add(out, m2, k * v)
        return out
    for m, v in f.items():
        _add(out, _times_x(m, -n), -n * v)
    return out


def _max_index(f: dict) -> int:
    return max((n for m in f for n, _ in m), default=0)


def fock_L(n: int, f: dict, mu=0) -> dict:
    """``L_n = 1/2 sum_k :a_{n-k} a_k:`` with the lower index placed left."""
    mu = Fraction(mu)
    f = _exact(f)
    out: dict = {}
    if not f:
        return out
    K = _max_index(f)
    # the right-hand factor has the larger index; it annihilates f once it exceeds K
    lo, hi = min(n, 0) - K - 1, max(n, 0) + K + 1
    for k in range(lo, hi + 1):
        i, j = n - k, k
        left, right = (i, j) if i <= j else (j, i)
        if right > K:
            continue
        term = heis_act(left, heis_act(right, f, mu), mu)
        for m, v in term.items():
            _add(out, m, v / 2)
    return out


def fock_inner(f: dict, g: dict) -> Fraction:
    """Distinct monomials are orthogonal; <m, m> = prod k! / n^k."""
    total = Fraction(0)
    for m, v in f.items():
        w = g.get(m)
        if w:
            norm = Fraction(1)
            for n, k in m:
                norm *= Fraction(factorial(k), n**k)
            total += v * w * norm
    return total


@dataclass(frozen=True)
class BracketReport:
    m: int
    n: int
    cutoff: int
    mu: Fraction
    ok: bool
    checked: int
    counterexample: Monomial | None = None


def _sub(f: dict, g: dict) -> dict:
    out = dict(f)
    for m, v in g.items():
        _add(out, m, -v)
    return out


def fock_bracket_check(m: int, n: int, cutoff: int, mu=0) -> BracketReport:
    """``[L_m, L_n] = (m-n) L_{m+n} + (m^3-m)/12 delta_{m+n,0}`` on every monomial
    whose weight, and every intermediate weight, stays at or below ``cutoff``."""
    mu = Fraction(mu)
    if max(abs(m), abs(n), abs(m + n)) > cutoff:
        raise CutoffTooSmall(f"|m|, |n|, |m+n| must be <= cutoff {cutoff}")
    rise = max(0, -m, -n, -m - n)
    if rise > cutoff:
        raise CutoffTooSmall(f"no monomial keeps ({m}, {n}) inside weight {cutoff}")
    checked = 0
    for w in range(cutoff - rise + 1):
        for mono in monomials_of_weight(w):
            f = {mono: Fraction(1)}
            lhs = _sub(fock_L(m, fock_L(n, f, mu), mu), fock_L(n, fock_L(m, f, mu), mu))
            rhs = {k: (m - n) * v for k, v in fock_L(m + n, f, mu).items()}
            if m + n == 0:
                _add(rhs, mono, Fraction(m**3 - m, 12))
            checked += 1
            if _sub(lhs, {k: v for k, v in rhs.items() if v}):
                return BracketReport(m, n, cutoff, mu, False, checked, mono)
    return BracketReport(m, n, cutoff, mu, True, checked)


def heisenberg_check(m: int, n: int, max_weight: int, mu=0) -> bool:
    """``[a_m, a_n] = m delta_{m+n,0}`` on all monomials up to ``max_weight``."""
    for w in range(max_weight + 1):
        for mono in monomials_of_weight(w):
            f = {mono: Fraction(1)}
            lhs = _sub(heis_act(m, heis_act(n, f, mu), mu), heis_act(n, heis_act(m, f, mu), mu))
            rhs = {mono: Fraction(m)} if m + n == 0 and m else {}
            if _sub(lhs, rhs):
                return False
    return True
