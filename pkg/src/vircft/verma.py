"""Verma modules M(c, h) of the Virasoro algebra.

Vectors are dicts ``{partition: coefficient}``; the partition
``(n1, ..., nk)`` stands for ``L_{-n1} ... L_{-nk} v0``. Coefficients live
in whatever ring ``c`` and ``h`` are given in: :class:`ScalarPoly` for the
symbolic module, :class:`~fractions.Fraction` at a rational point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .coeffs import (
    C,
    H,
    Definiteness,
    PolyMatrix,
    ScalarPoly,
    bareiss_det,
    definiteness,
    divmod_poly,
    kernel_basis,
    rank,
)
from .partitions import Partition, partitions_of, weight

Vector = dict  # Partition -> coefficient


class NonconstantRatio(ArithmeticError):
    """det A^N is not a constant multiple of the phi product."""


def _axpy(out: dict, coef, vec: dict) -> None:
    """out += coef * vec, dropping zeros."""
    for k, v in vec.items():
        new = out.get(k, 0) + coef * v
        if new:
            out[k] = new
        else:
            out.pop(k, None)


class VermaEngine:
    """Rewrites words in the ``L_n`` to the partition basis.

    ``min_part=1`` gives the Verma module M(c, h). ``min_part=2`` with
    ``h=0`` gives the vacuum quotient where additionally ``L_{-1} v0 = 0``.
    The memo tables are the only mutable state; entries are written once and
    never change, so sharing one engine between threads is harmless.
    """

    def __init__(self, c=C, h=H, min_part: int = 1):
        if isinstance(c, ScalarPoly) or isinstance(h, ScalarPoly):
            c, h = ScalarPoly.coerce(c), ScalarPoly.coerce(h)
            self.symbolic = True
        else:
            c, h = Fraction(c), Fraction(h)
            self.symbolic = False
        self.c = c
        self.h = h
        self.min_part = min_part
        self._act: dict[tuple[int, Partition], dict] = {}
        self._shap: dict[tuple[Partition, Partition], object] = {}

    @property
    def zero(self):
        return ScalarPoly() if self.symbolic else Fraction(0)

    @property
    def one(self):
        return ScalarPoly.const(1) if self.symbolic else Fraction(1)

    def basis(self, level: int) -> tuple[Partition, ...]:
        return partitions_of(level, self.min_part)

    def act_basis(self, n: int, lam: Partition) -> dict:
        """``L_n v_lam`` as a vector; the returned dict must not be mutated."""
        key = (n, lam)
        hit = self._act.get(key)
        if hit is not None:
            return hit
        out = self._compute(n, lam)
        self._act[key] = out
        return out

    def _compute(self, n: int, lam: Partition) -> dict:
        if n == 0:
            val = self.h + weight(lam)
            return {lam: val} if val else {}
        if not lam:
            if n > 0 or -n < self.min_part:
                return {}
            return {(-n,): self.one}
        first, rest = lam[0], lam[1:]
        out: dict = {}
        if n < 0:
            m = -n
            if m >= first:
                return {(m,) + lam: self.one}
            # L_{-m} L_{-first} = L_{-first} L_{-m} + (first - m) L_{-(m+first)}
            _axpy(out, 1, self.act(-first, self.act_basis(n, rest)))
            _axpy(out, first - m, self.act_basis(-(m + first), rest))
            return out
        # L_n L_{-first} = L_{-first} L_n + (n + first) L_{n-first} + central
        _axpy(out, 1, self.act(-first, self.act_basis(n, rest)))
        _axpy(out, n + first, self.act_basis(n - first, rest))
        if n == first:
            _axpy(out, self.c * Fraction(n**3 - n, 12), {rest: self.one})
        return out

    def act(self, n: int, vec: dict) -> dict:
        out: dict = {}
        for lam, coef in vec.items():
            _axpy(out, coef, self.act_basis(n, lam))
        return out

    def word(self, modes, vec: dict) -> dict:
        """``L_{modes[0]} L_{modes[1]} ... vec`` (rightmost mode acts first)."""
        for n in reversed(tuple(modes)):
            vec = self.act(n, vec)
        return vec

    def shapovalov(self, lam: Partition, mu: Partition):
        """``<v_lam, v_mu>`` = coefficient of v0 in ``L_{lam_k} ... L_{lam_1} v_mu``."""
        if weight(lam) != weight(mu):
            return self.zero
        if not lam:
            return self.one
        key = (lam, mu)
        hit = self._shap.get(key)
        if hit is not None:
            return hit
        total = self.zero
        for nu, coef in self.act_basis(lam[0], mu).items():
            total = total + coef * self.shapovalov(lam[1:], nu)
        self._shap[key] = total
        return total

    def form(self, x: dict, y: dict):
        """Bilinear extension of the Shapovalov form (coefficients are real)."""
        total = self.zero
        for lam, a in x.items():
            for mu, b in y.items():
                if weight(lam) == weight(mu):
                    total = total + a * b * self.shapovalov(lam, mu)
        return total

    def gram_entries(self, level: int) -> list[list]:
        basis = self.basis(level)
        return [[self.shapovalov(a, b) for b in basis] for a in basis]


@lru_cache(maxsize=None)
def symbolic_engine() -> VermaEngine:
    return VermaEngine()


@lru_cache(maxsize=64)
def point_engine(c0: Fraction, h0: Fraction, min_part: int = 1) -> VermaEngine:
    return VermaEngine(Fraction(c0), Fraction(h0), min_part)


def verma_act(n: int, v: dict, engine: VermaEngine | None = None) -> dict:
    return (engine or symbolic_engine()).act(n, v)


def shapovalov(lam: Partition, mu: Partition) -> ScalarPoly:
    return symbolic_engine().shapovalov(tuple(lam), tuple(mu))


@dataclass(frozen=True)
class GramMatrix:
    level: int
    basis: tuple[Partition, ...]
    matrix: PolyMatrix


def gram(level: int) -> GramMatrix:
    eng = symbolic_engine()
    return GramMatrix(level, eng.basis(level), PolyMatrix(eng.gram_entries(level)))


def gram_at(c0, h0, level: int) -> list[list[Fraction]]:
    return point_engine(Fraction(c0), Fraction(h0)).gram_entries(level)


@lru_cache(maxsize=None)
def kac_det_direct(level: int) -> ScalarPoly:
    return bareiss_det(gram(level).matrix)


def phi_pq(p: int, q: int) -> ScalarPoly:
    """Merged Kac factor: ``h - h_{q,q}`` if p == q, else ``(h - h_{p,q})(h - h_{q,p})``."""
    if q < 1 or p < q:
        raise ValueError(f"phi_pq needs p >= q >= 1, got ({p}, {q})")
    cm1 = C - 1
    if p == q:
        return H + cm1 * Fraction(q * q - 1, 24)
    shift = Fraction((p - q) ** 2, 4)
    return (
        (H - shift) ** 2
        + H * cm1 * Fraction(p * p + q * q - 2, 24)
        + cm1**2 * Fraction((p * p - 1) * (q * q - 1), 576)
        + cm1 * Fraction((p - q) ** 2 * (p * q + 1), 48)
    )


def kac_exponents(level: int) -> list[tuple[int, int, int]]:
    """``(p, q, P(N - pq))`` for every merged factor with ``q <= p, pq <= N``."""
    out = []
    for p in range(1, level + 1):
        for q in range(1, p + 1):
            if p * q <= level:
                out.append((p, q, len(partitions_of(level - p * q))))
    return out


@dataclass(frozen=True)
class KacFactorization:
    level: int
    K: Fraction
    product: ScalarPoly
    exponents: tuple[tuple[int, int, int], ...]


@lru_cache(maxsize=None)
def kac_det_formula(level: int) -> KacFactorization:
    exps = kac_exponents(level)
    product = ScalarPoly.const(1)
    for p, q, e in exps:
        product = product * phi_pq(p, q) ** e
    det = kac_det_direct(level)
    quot, rem = divmod_poly(det, product)
    if rem or not quot.is_constant():
        raise NonconstantRatio(f"det A^{level} / phi product = {quot} rem {rem}")
    K = quot.constant_value()
    if K <= 0:
        raise NonconstantRatio(f"K_{level} = {K} is not positive")
    return KacFactorization(level, K, product, tuple(exps))


def discrete_c(m: int) -> Fraction:
    return 1 - Fraction(6, (m + 2) * (m + 3))


def discrete_h(m: int, p: int, q: int) -> Fraction:
    return Fraction(((m + 3) * p - (m + 2) * q) ** 2 - 1, 4 * (m + 2) * (m + 3))


@dataclass(frozen=True)
class DiscreteSeries:
    m: int
    c: Fraction
    weights: tuple[tuple[int, int, Fraction], ...]


def discrete_series(m: int, extended: bool = False) -> DiscreteSeries:
    """Unitary points below c = 1.

    Default index set is ``1 <= p <= q <= m+1``. With ``extended`` the full
    table ``1 <= p <= m+1, 1 <= q <= m+2`` is listed instead.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if extended:
        pairs = [(p, q) for p in range(1, m + 2) for q in range(1, m + 3)]
    else:
        pairs = [(p, q) for p in range(1, m + 2) for q in range(p, m + 2)]
    return DiscreteSeries(m, discrete_c(m), tuple((p, q, discrete_h(m, p, q)) for p, q in pairs))


@dataclass(frozen=True)
class LevelVerdict:
    level: int
    verdict: Definiteness
    nullity: int


def unitarity_classify(c0, h0, n_max: int) -> list[LevelVerdict]:
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    out = []
    for N in range(n_max + 1):
        A = gram_at(c0, h0, N)
        out.append(LevelVerdict(N, definiteness(A), len(A) - rank(A)))
    return out


def singular_vectors(c0, h0, level: int) -> list[dict]:
    """Kernel of the level-N Gram matrix at a rational point, as Verma vectors."""
    basis = partitions_of(level)
    A = gram_at(c0, h0, level)
    out = []
    for vec in kernel_basis(A, len(basis)):
        out.append({lam: x for lam, x in zip(basis, vec) if x})
    return out


def quotient_graded_dims(c0, h0, n_max: int) -> list[int]:
    """``dim L(c,h)_N = P(N) - nullity`` for ``N <= n_max``."""
    return [rank(gram_at(c0, h0, N)) if N else 1 for N in range(n_max + 1)]


def recurrence_holds(f, n: int) -> bool:
    """The 2-cocycle recurrence ``(n-1)f(n+1) = (n+2)f(n) - (2n+1)f(1)`` at ``n``."""
    return (n - 1) * f(n + 1) == (n + 2) * f(n) - (2 * n + 1) * f(1)


def first_recurrence_failure(f, bound: int) -> int | None:
    return next((n for n in range(2, bound + 1) if not recurrence_holds(f, n)), None)


def cocycle_check(bound: int) -> bool:
    """n and n^3 solve the recurrence, and every solution lies in their span."""
    if bound < 3:
        raise ValueError("bound must be >= 3")
    if first_recurrence_failure(lambda n: n, bound) is not None:
        return False
    if first_recurrence_failure(lambda n: n**3, bound) is not None:
        return False
    # propagate from the free values f(1), f(2): track f(n) as (coef of f(1), coef of f(2))
    for init in ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))):
        f = {1: init[0], 2: init[1]}
        for n in range(2, bound):
            f[n + 1] = ((n + 2) * f[n] - (2 * n + 1) * f[1]) / (n - 1)
        # a*n + b*n^3 through f(1), f(2)
        b = (f[2] - 2 * f[1]) / 6
        a = f[1] - b
        if any(f[n] != a * n + b * n**3 for n in range(1, bound + 1)):
            return False
    return True
