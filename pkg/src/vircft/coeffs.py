"""Exact coefficient arithmetic: rationals, polynomials in Q[c, h], and
fraction-free linear algebra over them.

Rationals are :class:`fractions.Fraction`. Everything here is immutable and
exact; no floating point is used anywhere.
"""
from __future__ import annotations

import enum
import re
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

Rational = Fraction

VARS = ("c", "h")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"``, ``"-3"`` or an int into an exact rational."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    s = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
        raise ValueError(f"not an exact rational literal: {text!r}")
    return Fraction(s)


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _sort_key(mono: tuple[int, int]):
    # graded, then higher h-degree first: "32*h^3 + 4*c*h^2 - 20*h^2 + 2*c*h"
    dc, dh = mono
    return (-(dc + dh), -dh)


class ScalarPoly:
    """Polynomial in the indeterminates ``c`` and ``h`` with rational coefficients.

    Terms are stored as ``{(deg_c, deg_h): Fraction}`` with no zero entries.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict[tuple[int, int], Fraction | int] | None = None):
        clean = {}
        if terms:
            for mono, coef in terms.items():
                coef = Fraction(coef)
                if coef:
                    dc, dh = mono
                    if dc < 0 or dh < 0:
                        raise ValueError(f"negative exponent in {mono}")
                    clean[(int(dc), int(dh))] = coef
        self._terms = clean
        self._hash = None

    # constructors
    @classmethod
    def const(cls, value) -> ScalarPoly:
        return cls({(0, 0): Fraction(value)})

    @classmethod
    def c(cls) -> ScalarPoly:
        return cls({(1, 0): 1})

    @classmethod
    def h(cls) -> ScalarPoly:
        return cls({(0, 1): 1})

    @classmethod
    def coerce(cls, x) -> ScalarPoly:
        if isinstance(x, ScalarPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        return NotImplemented

    @property
    def terms(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    # predicates
    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(m == (0, 0) for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((0, 0), Fraction(0))

    def degree(self) -> int:
        return max((a + b for a, b in self._terms), default=-1)

    def degree_in(self, var: str) -> int:
        i = VARS.index(var)
        return max((m[i] for m in self._terms), default=-1)

    # ring operations
    def __eq__(self, other) -> bool:
        other = ScalarPoly.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self) -> ScalarPoly:
        return ScalarPoly({m: -v for m, v in self._terms.items()})

    def __add__(self, other) -> ScalarPoly:
        other = ScalarPoly.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for m, v in other._terms.items():
            out[m] = out.get(m, 0) + v
        return ScalarPoly(out)

    __radd__ = __add__

    def __sub__(self, other) -> ScalarPoly:
        other = ScalarPoly.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> ScalarPoly:
        return (-self) + other

    def __mul__(self, other) -> ScalarPoly:
        if isinstance(other, (int, Fraction)):
            if not other:
                return ScalarPoly()
            return ScalarPoly({m: v * other for m, v in self._terms.items()})
        other = ScalarPoly.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[tuple[int, int], Fraction] = {}
        for (a1, b1), v1 in self._terms.items():
            for (a2, b2), v2 in other._terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + v1 * v2
        return ScalarPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> ScalarPoly:
        # scalar division only; polynomial division goes through divmod_poly
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return ScalarPoly({m: v / other for m, v in self._terms.items()})
        other = ScalarPoly.coerce(other)
        if other.is_constant():
            return self / other.constant_value()
        return exact_div(self, other)

    def __pow__(self, k: int) -> ScalarPoly:
        if k < 0:
            raise ValueError("negative power")
        out = ScalarPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def leading(self) -> tuple[tuple[int, int], Fraction]:
        mono = min(self._terms, key=_sort_key)
        return mono, self._terms[mono]

    def subs(self, c=None, h=None) -> ScalarPoly:
        """Substitute rationals for some indeterminates; result stays a ScalarPoly."""
        out: dict[tuple[int, int], Fraction] = {}
        for (dc, dh), v in self._terms.items():
            coef = v
            if c is not None:
                coef *= Fraction(c) ** dc
                dc = 0
            if h is not None:
                coef *= Fraction(h) ** dh
                dh = 0
            out[(dc, dh)] = out.get((dc, dh), 0) + coef
        return ScalarPoly(out)

    def __call__(self, c0, h0) -> Fraction:
        return poly_eval(self, c0, h0)

    # text form
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono in sorted(self._terms, key=_sort_key):
            coef = self._terms[mono]
            factors = []
            for name, e in zip(VARS, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(coef)
            if factors:
                body = "*".join(factors)
                if mag != 1:
                    body = f"{format_rational(mag)}*{body}"
            else:
                body = format_rational(mag)
            parts.append(("-" if coef < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"ScalarPoly({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> ScalarPoly:
        """Inverse of ``str``; also accepts the compact form without spaces."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial")
        if s[0] not in "+-":
            s = "+" + s
        out = cls()
        for sign, body in re.findall(r"([+-])([^+-]+)", s):
            coef = Fraction(1)
            dc = dh = 0
            for factor in body.split("*"):
                m = re.fullmatch(r"([ch])(?:\^(\d+))?", factor)
                if m:
                    e = int(m.group(2) or 1)
                    if m.group(1) == "c":
                        dc += e
                    else:
                        dh += e
                elif re.fullmatch(r"\d+(/\d+)?", factor):
                    coef *= Fraction(factor)
                else:
                    raise ValueError(f"bad factor {factor!r} in {text!r}")
            term = cls({(dc, dh): coef})
            out = out + term if sign == "+" else out - term
        consumed = "".join(sign + body for sign, body in re.findall(r"([+-])([^+-]+)", s))
        if consumed != s:
            raise ValueError(f"could not parse polynomial {text!r}")
        return out


C = ScalarPoly.c()
H = ScalarPoly.h()
ONE = ScalarPoly.const(1)
ZERO = ScalarPoly()


def poly_eval(p: ScalarPoly, c0, h0) -> Fraction:
    """Evaluate ``p`` at the rational point ``(c0, h0)``."""
    c0, h0 = Fraction(c0), Fraction(h0)
    total = Fraction(0)
    for (dc, dh), v in p.items():
        total += v * c0**dc * h0**dh
    return total


def divmod_poly(p: ScalarPoly, d: ScalarPoly) -> tuple[ScalarPoly, ScalarPoly]:
    """Multivariate division of ``p`` by a single divisor ``d``.

    Returns ``(q, r)`` with ``p = q*d + r`` and no term of ``r`` divisible by
    the leading monomial of ``d``; ``r == 0`` iff ``d`` divides ``p``.
    """
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    (ldc, ldh), lcoef = d.leading()
    q: dict[tuple[int, int], Fraction] = {}
    r: dict[tuple[int, int], Fraction] = {}
    rest = p
    while rest:
        (mc, mh), mcoef = rest.leading()
        if mc >= ldc and mh >= ldh:
            mono = (mc - ldc, mh - ldh)
            coef = mcoef / lcoef
            q[mono] = q.get(mono, 0) + coef
            rest = rest - ScalarPoly({mono: coef}) * d
        else:
            r[(mc, mh)] = mcoef
            rest = rest - ScalarPoly({(mc, mh): mcoef})
    return ScalarPoly(q), ScalarPoly(r)


def exact_div(p: ScalarPoly, d: ScalarPoly) -> ScalarPoly:
    q, r = divmod_poly(p, d)
    if r:
        raise ArithmeticError(f"{d} does not divide {p}")
    return q


class PolyMatrix:
    """Dense rectangular matrix of :class:`ScalarPoly` entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        rows = [tuple(ScalarPoly.coerce(x) for x in row) for row in entries]
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ValueError("ragged matrix")
        self.entries = tuple(rows)
        self.rows = len(rows)
        self.cols = widths.pop() if widths else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            other = PolyMatrix(other)
        return self.entries == other.entries

    def __repr__(self) -> str:
        return f"PolyMatrix({[[str(x) for x in row] for row in self.entries]})"

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.rows)
            for j in range(i)
        )

    def evaluate(self, c0, h0) -> list[list[Fraction]]:
        return [[poly_eval(x, c0, h0) for x in row] for row in self.entries]

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.entries]


def _as_rows(M) -> list[list]:
    if isinstance(M, PolyMatrix):
        return [list(r) for r in M.entries]
    return [list(r) for r in M]


def _div(a, b):
    if isinstance(a, ScalarPoly) or isinstance(b, ScalarPoly):
        a = ScalarPoly.coerce(a)
        b = ScalarPoly.coerce(b)
        if b.is_constant():
            return a / b.constant_value()
        return exact_div(a, b)
    return Fraction(a) / Fraction(b)


def bareiss_det(M):
    """Fraction-free (Bareiss) determinant over Q[c,h] or Q.

    Accepts a :class:`PolyMatrix` or a square nested sequence of rationals or
    polynomials. Every division performed is exact.
    """
    A = _as_rows(M)
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("determinant of a non-square matrix")
    symbolic = isinstance(M, PolyMatrix) or any(
        isinstance(x, ScalarPoly) for row in A for x in row
    )
    one = ONE if symbolic else Fraction(1)
    if n == 0:
        return one
    if symbolic:
        A = [[ScalarPoly.coerce(x) for x in row] for row in A]
    sign = 1
    prev = one
    for k in range(n - 1):
        if not A[k][k]:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return ZERO if symbolic else Fraction(0)
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        piv = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            for j in range(k + 1, n):
                A[i][j] = _div(A[i][j] * piv - aik * A[k][j], prev)
            A[i][k] = ZERO if symbolic else Fraction(0)
        prev = piv
    det = A[n - 1][n - 1]
    return det if sign == 1 else -det


def leading_minors(M: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    n = len(M)
    return [bareiss_det([row[:k] for row in M[:k]]) for k in range(1, n + 1)]


def char_poly(M: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Coefficients ``[a_0, ..., a_n]`` of ``det(t I - M)`` (Faddeev-LeVerrier)."""
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = [[Fraction(0)] * n for _ in range(n)]  # M_0 = 0
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + a_{n-k+1} I
        prod = [[sum(A[i][l] * Mk[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            prod[i][i] += coeffs[n - k + 1]
        Mk = prod
        AM = [[sum(A[i][l] * Mk[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(AM[i][i] for i in range(n)) / k
    return coeffs


class Definiteness(enum.Enum):
    POSITIVE_DEFINITE = "PositiveDefinite"
    POSITIVE_SEMIDEFINITE = "PositiveSemidefinite"
    INDEFINITE = "Indefinite"

    def __str__(self) -> str:
        return self.value


def _check_symmetric(M):
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("definiteness of a non-square matrix")
    for i in range(n):
        for j in range(i):
            if M[i][j] != M[j][i]:
                raise ValueError("definiteness test needs a symmetric matrix")


def definiteness(M) -> Definiteness:
    """Exact definiteness of a symmetric rational matrix.

    Positive definite by Sylvester's criterion; positive semidefinite iff
    ``(-1)^(n-k) a_k >= 0`` for every coefficient ``a_k`` of ``det(tI - M)``.
    """
    if isinstance(M, PolyMatrix):
        raise TypeError("evaluate the PolyMatrix at a rational point first")
    M = [[Fraction(x) for x in row] for row in M]
    _check_symmetric(M)
    n = len(M)
    if all(m > 0 for m in leading_minors(M)):
        return Definiteness.POSITIVE_DEFINITE
    coeffs = char_poly(M)
    if all((-1) ** (n - k) * coeffs[k] >= 0 for k in range(n + 1)):
        return Definiteness.POSITIVE_SEMIDEFINITE
    return Definiteness.INDEFINITE


def rref(M: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    A = [[Fraction(x) for x in row] for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for col in range(cols):
        pr = next((i for i in range(r, rows) if A[i][col]), None)
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        inv = 1 / A[r][col]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][col]:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
        if r == rows:
            break
    return A, pivots


def rank(M) -> int:
    if not M:
        return 0
    return len(rref(M)[1])


def kernel_basis(M: Sequence[Sequence[Fraction]], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right kernel, each vector scaled so its first nonzero entry is 1."""
    if not M:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    R, pivots = rref(M)
    n = len(M[0])
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in enumerate(pivots):
            v[p] = -R[row][f]
        lead = next(x for x in v if x)
        basis.append([x / lead for x in v])
    return basis


def matmul(A, B):
    return [
        [sum((a * B[k][j] for k, a in enumerate(row)), Fraction(0)) for j in range(len(B[0]))]
        for row in A
    ]


def is_zero_matrix(M: Iterable[Iterable]) -> bool:
    return all(not x for row in M for x in row)


def binomial(m: int, j: int) -> int:
    """Binomial coefficient ``m choose j`` for any integer ``m`` (falling factorial / j!)."""
    if j < 0:
        return 0
    if m >= 0:
        return comb(m, j)
    return (-1) ** j * comb(j - m - 1, j)
