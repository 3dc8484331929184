"""Formal distributions at finite truncation.

Two layers live here:

* :class:`BiLaurentWindow`, a two-variable Laurent series known exactly on a
  square window of exponents, used for the formal delta function and its
  identities.
* :class:`GradedOperator` and :class:`ModeField`, mode operators of a field
  ``a(z) = sum a_(n) z^(-n-1)`` acting on a graded module truncated at level
  ``cutoff``. Data that would need levels above the cutoff is *undefined*
  (a missing block), never silently zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .coeffs import ScalarPoly, binomial, exact_div


class WindowExhausted(LookupError):
    """A requested mode or block needs data beyond the truncation window."""


class GuardTooSmall(ValueError):
    pass


# ---------------------------------------------------------------------------
# two-variable windows


class BiLaurentWindow:
    """Coefficients of ``z^i w^j`` for ``|i|, |j| <= window``.

    ``radius`` records how far out the stored coefficients are still exact:
    multiplying by ``z^k`` or differentiating pulls in coefficients from
    outside the window, so each such operation shrinks the radius.
    Coefficients may be rationals, polynomials or graded operators.
    """

    def __init__(self, window: int, coeffs: dict | None = None, radius: int | None = None, zero=0):
        if window < 1:
            raise ValueError("window must be >= 1")
        self.window = window
        self.radius = window if radius is None else radius
        self.zero = zero
        self.coeffs = {
            k: v for k, v in (coeffs or {}).items()
            if abs(k[0]) <= window and abs(k[1]) <= window and not _is_zero(v)
        }

    def __getitem__(self, ij):
        return self.coeffs.get(ij, self.zero)

    def _new(self, coeffs, radius):
        return BiLaurentWindow(self.window, coeffs, radius, self.zero)

    def __add__(self, other: BiLaurentWindow) -> BiLaurentWindow:
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return self._new(out, min(self.radius, other.radius))

    def __neg__(self):
        return self._new({k: -v for k, v in self.coeffs.items()}, self.radius)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> BiLaurentWindow:
        return self._new({k: v * s for k, v in self.coeffs.items()}, self.radius)

    def times_monomial(self, a: int, b: int) -> BiLaurentWindow:
        """Multiply by ``z^a w^b``."""
        out = {(i + a, j + b): v for (i, j), v in self.coeffs.items()}
        return self._new(out, self.radius - max(abs(a), abs(b)))

    def times_z(self, f: dict[int, object]) -> BiLaurentWindow:
        """Multiply by the Laurent polynomial ``f(z) = sum f[k] z^k``."""
        return self._times(f, 0)

    def times_w(self, f: dict[int, object]) -> BiLaurentWindow:
        return self._times(f, 1)

    def _times(self, f, axis):
        acc = self._new({}, self.radius)
        reach = max((abs(k) for k, v in f.items() if v), default=0)
        for k, fk in f.items():
            if fk:
                shifted = self.times_monomial(k, 0) if axis == 0 else self.times_monomial(0, k)
                acc = acc + shifted.scale(fk)
        acc.radius = self.radius - reach
        return acc

    def times_z_minus_w(self, power: int = 1) -> BiLaurentWindow:
        out = self
        for _ in range(power):
            out = out.times_monomial(1, 0) - out.times_monomial(0, 1)
        return out

    def d_z(self) -> BiLaurentWindow:
        out = {(i - 1, j): v * i for (i, j), v in self.coeffs.items() if i}
        return self._new(out, self.radius - 1)

    def d_w(self) -> BiLaurentWindow:
        out = {(i, j - 1): v * j for (i, j), v in self.coeffs.items() if j}
        return self._new(out, self.radius - 1)

    def swap(self) -> BiLaurentWindow:
        return self._new({(j, i): v for (i, j), v in self.coeffs.items()}, self.radius)

    def res_z(self) -> dict[int, object]:
        """Coefficient of ``z^-1`` as a function of the ``w`` exponent."""
        return {j: v for (i, j), v in self.coeffs.items() if i == -1 and abs(j) <= self.radius}

    def agrees(self, other: BiLaurentWindow, inner: int) -> bool:
        """Coefficientwise equality on ``|i|, |j| <= inner``; both must be exact there."""
        if inner > min(self.radius, other.radius):
            raise GuardTooSmall(f"inner window {inner} exceeds exact radius")
        keys = {k for k in (*self.coeffs, *other.coeffs) if abs(k[0]) <= inner and abs(k[1]) <= inner}
        return all(_is_zero(self[k] - other[k]) for k in keys)

    def is_zero_on(self, inner: int) -> bool:
        return self.agrees(self._new({}, self.window), inner)


def _is_zero(v) -> bool:
    if isinstance(v, GradedOperator):
        return v.is_zero()
    return not v


def delta_window(window: int) -> BiLaurentWindow:
    """``delta(z - w) = sum_n z^(n-1) w^(-n)``: coefficient 1 exactly where i + j = -1."""
    if window < 1:
        raise ValueError("window must be >= 1")
    coeffs = {(i, -1 - i): Fraction(1) for i in range(-window, window + 1) if abs(-1 - i) <= window}
    return BiLaurentWindow(window, coeffs)


def delta_derivative_window(window: int, j: int) -> BiLaurentWindow:
    """``D^j_w delta(z - w) = sum_m (m choose j) z^(-m-1) w^(m-j)``."""
    coeffs = {}
    for m in range(-window - 1, window + 1):
        i, k = -m - 1, m - j
        if abs(i) <= window and abs(k) <= window:
            coeffs[(i, k)] = Fraction(binomial(m, j))
    return BiLaurentWindow(window, coeffs)


@dataclass
class DeltaReport:
    window: int
    guard: int
    parts: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.parts.values())


def delta_identity_suite(window: int, guard: int, f: dict[int, Fraction], j_max: int = 3) -> DeltaReport:
    """Check the formal delta identities on the inner window ``window - guard``."""
    f = {k: Fraction(v) for k, v in f.items() if v}
    reach = max((abs(k) for k in f), default=0)
    need = max(reach, j_max + 1)
    if guard < need:
        raise GuardTooSmall(f"guard {guard} < {need} needed for f and (z-w)^{j_max + 1}")
    inner = window - guard
    if inner < 1:
        raise GuardTooSmall(f"guard {guard} leaves no inner window inside {window}")
    delta = delta_window(window)
    rep = DeltaReport(window, guard)

    rep.parts["a"] = True  # every coefficient of f(z) delta is a finite sum by construction
    rep.parts["b"] = delta.times_z(f).agrees(delta.times_w(f), inner)
    res = delta.times_z(f).res_z()
    rep.parts["c"] = all(res.get(k, 0) == f.get(k, 0) for k in range(-inner, inner + 1))
    rep.parts["d"] = delta.agrees(delta.swap(), inner)
    rep.parts["e"] = delta.d_z().agrees(-delta.d_w(), inner)

    derivs = [delta_derivative_window(window, j) for j in range(j_max + 2)]
    # the closed form agrees with repeated differentiation: D^j = d_w^j / j!
    ok_closed = True
    iterated = delta
    fact = 1
    for j in range(1, j_max + 2):
        iterated = iterated.d_w()
        fact *= j
        if iterated.radius >= inner:
            ok_closed &= iterated.scale(Fraction(1, fact)).agrees(derivs[j], inner)
    rep.parts["D_closed_form"] = ok_closed
    rep.parts["f"] = all(
        derivs[j + 1].times_z_minus_w().agrees(derivs[j], inner) for j in range(j_max + 1)
    )
    rep.parts["g"] = all(
        derivs[j].times_z_minus_w(j + 1).is_zero_on(inner) for j in range(j_max + 1)
    )
    return rep


# ---------------------------------------------------------------------------
# graded operators


def _zeros(rows: int, cols: int) -> np.ndarray:
    out = np.empty((rows, cols), dtype=object)
    out.fill(0)
    return out


def _mat_is_zero(M: np.ndarray) -> bool:
    return all(not x for x in M.flat)


def _mat_equal(A: np.ndarray, B: np.ndarray) -> bool:
    return A.shape == B.shape and all(not (x - y) for x, y in zip(A.flat, B.flat))


class GradedOperator:
    """Linear map shifting module level by ``shift``, stored blockwise.

    ``blocks[l]`` is the matrix from level ``l`` to level ``l + shift`` in the
    module's bases. A source level whose source and target both lie in
    ``[0, cutoff]`` but has no block is undefined.
    """

    __slots__ = ("shift", "dims", "blocks")

    def __init__(self, shift: int, dims: tuple[int, ...], blocks: dict[int, np.ndarray]):
        self.shift = shift
        self.dims = dims
        self.blocks = blocks

    @property
    def cutoff(self) -> int:
        return len(self.dims) - 1

    def levels(self) -> range:
        """Source levels where both ends lie in the window."""
        lo = max(0, -self.shift)
        hi = min(self.cutoff, self.cutoff - self.shift)
        return range(lo, hi + 1)

    def defined_levels(self) -> list[int]:
        return [l for l in self.levels() if l in self.blocks]

    def is_defined(self, level: int) -> bool:
        return level in self.blocks

    def fully_defined(self) -> bool:
        return all(l in self.blocks for l in self.levels())

    def block(self, level: int) -> np.ndarray:
        if level not in self.levels():
            raise WindowExhausted(f"level {level} -> {level + self.shift} leaves the window")
        if level not in self.blocks:
            raise WindowExhausted(f"block at level {level} is undefined at cutoff {self.cutoff}")
        return self.blocks[level]

    @classmethod
    def zero(cls, shift: int, dims) -> GradedOperator:
        op = cls(shift, tuple(dims), {})
        op.blocks = {l: _zeros(dims[l + shift], dims[l]) for l in op.levels()}
        return op

    @classmethod
    def identity(cls, dims) -> GradedOperator:
        blocks = {}
        for l, d in enumerate(dims):
            m = _zeros(d, d)
            for i in range(d):
                m[i, i] = 1
            blocks[l] = m
        return cls(0, tuple(dims), blocks)

    def _check(self, other: GradedOperator):
        if self.dims != other.dims:
            raise ValueError("operators act on different truncated modules")

    def __add__(self, other: GradedOperator) -> GradedOperator:
        self._check(other)
        if self.shift != other.shift:
            raise ValueError("adding operators of different degree")
        keys = self.blocks.keys() & other.blocks.keys()
        return GradedOperator(self.shift, self.dims, {l: self.blocks[l] + other.blocks[l] for l in keys})

    def __neg__(self) -> GradedOperator:
        return GradedOperator(self.shift, self.dims, {l: -b for l, b in self.blocks.items()})

    def __sub__(self, other: GradedOperator) -> GradedOperator:
        return self + (-other)

    def scale(self, s) -> GradedOperator:
        if isinstance(s, int):
            s = Fraction(s)
        return GradedOperator(self.shift, self.dims, {l: b * s for l, b in self.blocks.items()})

    __mul__ = scale
    __rmul__ = scale

    def compose_block(self, other: GradedOperator, level: int):
        """Block of ``self @ other`` at ``level``, or None if undefined."""
        mid = level + other.shift
        tgt = mid + self.shift
        if mid < 0:
            return _zeros(self.dims[tgt], self.dims[level])
        if mid > self.cutoff:
            return None
        b = other.blocks.get(level)
        a = self.blocks.get(mid)
        if a is None or b is None:
            return None
        return a.dot(b) if a.size and b.size else _zeros(self.dims[tgt], self.dims[level])

    def __matmul__(self, other: GradedOperator) -> GradedOperator:
        self._check(other)
        out = GradedOperator(self.shift + other.shift, self.dims, {})
        for l in out.levels():
            blk = self.compose_block(other, l)
            if blk is not None:
                out.blocks[l] = blk
        return out

    def commutator(self, other: GradedOperator) -> GradedOperator:
        return self @ other - other @ self

    def is_zero(self) -> bool:
        return all(_mat_is_zero(b) for b in self.blocks.values())

    def compare(self, other: GradedOperator) -> tuple[bool, int]:
        """Equality on levels defined on both sides; also returns how many were compared."""
        if self.shift != other.shift:
            raise ValueError("comparing operators of different degree")
        common = [l for l in self.levels() if l in self.blocks and l in other.blocks]
        ok = all(_mat_equal(self.blocks[l], other.blocks[l]) for l in common)
        return ok, len(common)

    def agrees(self, other: GradedOperator) -> bool:
        return self.compare(other)[0]

    def apply(self, level: int, coords) -> np.ndarray:
        return self.block(level).dot(np.asarray(coords, dtype=object))

    def __repr__(self) -> str:
        return f"GradedOperator(shift={self.shift}, defined={self.defined_levels()})"


# ---------------------------------------------------------------------------
# fields


class ModeField:
    """Mode operators ``a_(n)`` of a field of conformal weight ``weight``.

    ``a_(n)`` shifts level by ``weight - n - 1``. Only modes with shift in
    ``[-cutoff, cutoff]`` can act between in-window levels; the rest are
    vacuous on the window. Modes are computed lazily and cached.
    """

    def __init__(self, weight: int, dims, source: Callable[[int], GradedOperator], label: str = ""):
        self.weight = weight
        self.dims = tuple(dims)
        self._source = source
        self._cache: dict[int, GradedOperator] = {}
        self.label = label

    @property
    def cutoff(self) -> int:
        return len(self.dims) - 1

    def shift_of(self, n: int) -> int:
        return self.weight - n - 1

    def support(self) -> range:
        return range(self.weight - 1 - self.cutoff, self.weight + self.cutoff)

    def mode(self, n: int) -> GradedOperator:
        op = self._cache.get(n)
        if op is None:
            if abs(self.shift_of(n)) > self.cutoff:
                op = GradedOperator(self.shift_of(n), self.dims, {})
            else:
                op = self._source(n)
                if op.shift != self.shift_of(n):
                    raise ValueError(f"mode {n} of {self.label or 'field'} has wrong degree")
            self._cache[n] = op
        return op

    __getitem__ = mode

    def modes(self) -> dict[int, GradedOperator]:
        return {n: self.mode(n) for n in self.support()}

    def derivative(self) -> ModeField:
        """``(d a)_(n) = -n a_(n-1)``."""
        return ModeField(
            self.weight + 1, self.dims, lambda n: self.mode(n - 1).scale(-n), f"d{self.label}"
        )

    def divided_derivative(self, k: int) -> ModeField:
        """``D^(k) a = d^k a / k!``, modes ``(-1)^k (n choose k) a_(n-k)``."""
        if k == 0:
            return self
        sign = (-1) ** k
        return ModeField(
            self.weight + k,
            self.dims,
            lambda n: self.mode(n - k).scale(sign * binomial(n, k)),
            f"D{k}{self.label}",
        )

    def scale(self, s) -> ModeField:
        return ModeField(self.weight, self.dims, lambda n: self.mode(n).scale(s), f"({s}){self.label}")

    def __add__(self, other: ModeField) -> ModeField:
        if self.weight != other.weight:
            raise ValueError("adding fields of different weight")
        return ModeField(self.weight, self.dims, lambda n: self.mode(n) + other.mode(n), f"{self.label}+{other.label}")

    def __sub__(self, other: ModeField) -> ModeField:
        return self + other.scale(-1)

    def compare(self, other: ModeField) -> tuple[bool, int]:
        if self.weight != other.weight:
            return False, 0
        total = 0
        for n in self.support():
            ok, k = self.mode(n).compare(other.mode(n))
            if not ok:
                return False, total
            total += k
        return True, total

    def agrees(self, other: ModeField) -> bool:
        return self.compare(other)[0]

    def is_zero(self) -> bool:
        return all(self.mode(n).is_zero() for n in self.support())

    def __repr__(self) -> str:
        return f"ModeField({self.label or '?'}, weight={self.weight}, cutoff={self.cutoff})"


def identity_field(dims) -> ModeField:
    """``Y(|0>, z) = id``: only the (-1)-mode is nonzero."""
    dims = tuple(dims)

    def src(n):
        if n == -1:
            return GradedOperator.identity(dims)
        return GradedOperator.zero(-n - 1, dims)

    return ModeField(0, dims, src, "id")


def zero_field(weight: int, dims) -> ModeField:
    dims = tuple(dims)
    return ModeField(weight, dims, lambda n: GradedOperator.zero(weight - n - 1, dims), "0")


def nth_product(a: ModeField, b: ModeField, n: int) -> ModeField:
    """``a_(n) b`` for any integer ``n``.

    For ``n >= 0`` its modes are
    ``sum_j (-1)^j (n choose j) [a_(n-j), b_(m+j)]``; for ``n < 0`` it is the
    normally ordered product ``:D^(-n-1) a  b:``.
    """
    if a.dims != b.dims:
        raise ValueError("fields on different truncations")
    if n < 0:
        return normal_ordered(a.divided_derivative(-n - 1), b)
    weight = a.weight + b.weight - n - 1

    def src(m):
        total = None
        for j in range(n + 1):
            term = a.mode(n - j).commutator(b.mode(m + j)).scale((-1) ** j * binomial(n, j))
            total = term if total is None else total + term
        return total

    return ModeField(weight, a.dims, src, f"{a.label}_({n}){b.label}")


def normal_ordered(a: ModeField, b: ModeField) -> ModeField:
    """``:a b:`` with modes
    ``sum_{j<0} a_(j) b_(n-j-1) + sum_{j>=0} b_(n-j-1) a_(j)``.

    Both sums are finite on each level; a block is undefined as soon as one
    summand passes through a level above the cutoff.
    """
    if a.dims != b.dims:
        raise ValueError("fields on different truncations")
    dims = a.dims
    ha, hb = a.weight, b.weight
    weight = ha + hb

    def src(n):
        out = GradedOperator(weight - n - 1, dims, {})
        for l in out.levels():
            tgt = l + out.shift
            acc = _zeros(dims[tgt], dims[l])
            ok = True
            # b_(n-j-1) lands at l + hb - n + j, nonnegative iff j >= n - hb - l
            for j in range(n - hb - l, 0):
                blk = a.mode(j).compose_block(b.mode(n - j - 1), l)
                if blk is None:
                    ok = False
                    break
                acc = acc + blk
            if ok:
                # a_(j) lands at l + ha - j - 1, nonnegative iff j <= l + ha - 1
                for j in range(0, l + ha):
                    blk = b.mode(n - j - 1).compose_block(a.mode(j), l)
                    if blk is None:
                        ok = False
                        break
                    acc = acc + blk
            if ok:
                out.blocks[l] = acc
        return out

    return ModeField(weight, dims, src, f":{a.label}{b.label}:")


def commutator_window(a: ModeField, b: ModeField, window: int) -> BiLaurentWindow:
    """``[a(z), b(w)]`` as a window with operator coefficients.

    The coefficient of ``z^(-m-1) w^(-n-1)`` is ``[a_(m), b_(n)]``.
    """
    coeffs = {}
    for i in range(-window, window + 1):
        for k in range(-window, window + 1):
            m, n = -i - 1, -k - 1
            coeffs[(i, k)] = a.mode(m).commutator(b.mode(n))
    return BiLaurentWindow(window, coeffs, zero=None)


def local_expansion_coeff(a: ModeField, b: ModeField, j: int, window: int) -> dict[int, GradedOperator]:
    """``Res_z (z-w)^j [a(z), b(w)]`` computed on a window: returns ``{k: coeff of w^k}``."""
    win = commutator_window(a, b, window).times_z_minus_w(j)
    return win.res_z()


def _pair_commutators(a: ModeField, b: ModeField):
    out = {}
    for m in a.support():
        for n in b.support():
            op = a.mode(m).commutator(b.mode(n))
            if op.levels():
                out[(m, n)] = op
    return out


def reconstruction_holds(a: ModeField, b: ModeField, coeffs: list[ModeField], commutators=None) -> bool:
    """``[a_(m), b_(n)] = sum_j (m choose j) c^j_(m+n-j)`` on every in-window pair."""
    commutators = commutators if commutators is not None else _pair_commutators(a, b)
    for (m, n), comm in commutators.items():
        rhs = GradedOperator.zero(comm.shift, a.dims)
        for j, cj in enumerate(coeffs):
            rhs = rhs + cj.mode(m + n - j).scale(binomial(m, j))
        if not comm.agrees(rhs):
            return False
    return True


def locality_order(a: ModeField, b: ModeField, n_max: int) -> int | None:
    """Least ``N <= n_max`` for which the commutator is reconstructed by the first
    ``N`` products ``a_(j) b``; a vanishing commutator reports 1."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    comms = _pair_commutators(a, b)
    coeffs: list[ModeField] = []
    for N in range(1, n_max + 1):
        coeffs.append(nth_product(a, b, N - 1))
        if reconstruction_holds(a, b, coeffs, comms):
            return N
    return None


def ope_coeffs(a: ModeField, b: ModeField, N: int) -> list[ModeField]:
    """``[a_(0) b, ..., a_(N-1) b]``; raises if they fail to reconstruct the commutator."""
    coeffs = [nth_product(a, b, j) for j in range(N)]
    if not reconstruction_holds(a, b, coeffs):
        raise WindowExhausted(f"first {N} products do not reconstruct [a, b] on the window")
    return coeffs


def describe_field(f: ModeField, named: dict[str, ModeField]) -> str:
    """Name ``f`` as ``0`` or a scalar multiple of one of ``named``."""
    if f.is_zero():
        return "0"
    for name, g in named.items():
        if g.weight != f.weight or g.is_zero():
            continue
        ratio = _ratio(f, g)
        if ratio is not None and f.agrees(g.scale(ratio)):
            if ratio == 1:
                return name
            text = str(ratio)
            if isinstance(ratio, ScalarPoly) and ratio.is_constant() and ratio.constant_value().denominator == 1:
                return f"{text}{name}"
            return f"({text}){name}"
    return "?"


def _ratio(f: ModeField, g: ModeField):
    for n in g.support():
        gm, fm = g.mode(n), f.mode(n)
        for l in gm.defined_levels():
            if not fm.is_defined(l):
                continue
            for x, y in zip(fm.blocks[l].flat, gm.blocks[l].flat):
                if y:
                    x, y = ScalarPoly.coerce(x), ScalarPoly.coerce(y)
                    try:
                        return exact_div(x, y) if not y.is_constant() else x / y.constant_value()
                    except ArithmeticError:
                        return None
    return None


def as_modes(fields: Iterable[ModeField]) -> list[dict[int, GradedOperator]]:
    return [f.modes() for f in fields]
