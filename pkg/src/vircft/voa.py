"""The Virasoro vertex operator algebra on the vacuum quotient of M(c, 0).

Basis vectors are partitions with all parts >= 2; ``()`` is the vacuum and
``(2,)`` the conformal vector. Operators are built from the same rewriting
engine as the Verma module, with ``L_{-1}|0> = 0`` imposed.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .coeffs import C, ScalarPoly, binomial, rank
from .formal import (
    GradedOperator,
    ModeField,
    WindowExhausted,
    identity_field,
    locality_order,
    nth_product,
)
from .partitions import Partition, partitions_of, weight
from .verma import VermaEngine, _axpy

VACUUM: Partition = ()
NU: Partition = (2,)


class VOAModule:
    """M(c,0) / U(Vir) L_{-1}|0>, truncated at level ``cutoff``."""

    def __init__(self, c=C, cutoff: int = 6):
        if cutoff < 2:
            raise ValueError("cutoff must be >= 2")
        self.c = c
        self.cutoff = cutoff
        self.engine = VermaEngine(c, 0, min_part=2)
        self.bases = tuple(partitions_of(N, 2) for N in range(cutoff + 1))
        self.dims = tuple(len(b) for b in self.bases)
        self._index = [{lam: i for i, lam in enumerate(b)} for b in self.bases]
        self._L: dict[int, GradedOperator] = {}
        self._Y: dict[Partition, ModeField] = {}

    @property
    def symbolic(self) -> bool:
        return self.engine.symbolic

    @property
    def zero(self):
        return self.engine.zero

    def basis(self, level: int) -> tuple[Partition, ...]:
        return self.bases[level]

    def all_basis(self, max_level: int | None = None) -> list[Partition]:
        top = self.cutoff if max_level is None else max_level
        return [lam for N in range(top + 1) for lam in self.bases[N]]

    # vectors <-> coordinates
    def coords(self, vec: dict, level: int) -> np.ndarray:
        out = np.empty(self.dims[level], dtype=object)
        out.fill(0)
        for lam, v in vec.items():
            if weight(lam) != level:
                raise ValueError(f"{lam} is not at level {level}")
            out[self._index[level][lam]] = v
        return out

    def vector(self, coords, level: int) -> dict:
        return {lam: x for lam, x in zip(self.bases[level], coords) if x}

    # Virasoro action
    def act(self, n: int, vec: dict) -> dict:
        return self.engine.act(n, vec)

    def L(self, n: int) -> GradedOperator:
        op = self._L.get(n)
        if op is None:
            op = GradedOperator(-n, self.dims, {})
            for l in op.levels():
                blk = np.empty((self.dims[l - n], self.dims[l]), dtype=object)
                blk.fill(0)
                for col, lam in enumerate(self.bases[l]):
                    for mu, v in self.engine.act_basis(n, lam).items():
                        blk[self._index[l - n][mu], col] = v
                op.blocks[l] = blk
            self._L[n] = op
        return op

    def L_field(self) -> ModeField:
        """``Y(nu, z) = sum L_n z^(-n-2)``, i.e. ``nu_(n) = L_(n-1)``."""
        return self.state_field({NU: 1})

    def identity_field(self) -> ModeField:
        return self.state_field({VACUUM: 1})

    def _L_field(self) -> ModeField:
        return ModeField(2, self.dims, lambda n: self.L(n - 1), "L")

    # state-field correspondence
    def basis_field(self, lam: Partition) -> ModeField:
        """``Y(v_lam)`` by right-nested n-th products with ``L_{-p} = nu_(1-p)``."""
        hit = self._Y.get(lam)
        if hit is not None:
            return hit
        if not lam:
            field = identity_field(self.dims)
        elif lam == NU:
            field = self._L_field()
        else:
            field = nth_product(self._L_field(), self.basis_field(lam[1:]), 1 - lam[0])
        field.label = _label(lam)
        self._Y[lam] = field
        return field

    def state_field(self, a: dict) -> ModeField:
        """``Y(a, z)`` for a weight-homogeneous state ``a``."""
        levels = {weight(lam) for lam in a}
        if len(levels) > 1:
            raise ValueError("state_field needs a homogeneous state")
        if not a:
            raise ValueError("zero state has no weight; use formal.zero_field")
        (lev,) = levels
        if lev > self.cutoff:
            raise WindowExhausted(f"state at level {lev} beyond cutoff {self.cutoff}")
        items = sorted(a.items())
        if len(items) == 1 and items[0][1] == 1:
            return self.basis_field(items[0][0])
        out = None
        for lam, v in items:
            term = self.basis_field(lam).scale(v)
            out = term if out is None else out + term
        return out

    def mode_on_vector(self, lam: Partition, n: int, vec: dict) -> dict:
        """``Y(v_lam)_(n) vec`` by the iterate (associativity) formula, evaluated
        vector by vector through the rewriting engine with no truncation.

        For ``a = nu_(j) x``:
        ``(a)_(n) = sum_i (-1)^i (j choose i) [nu_(j-i) x_(n+i) - (-1)^j x_(j+n-i) nu_(i)]``.
        """
        if not lam:
            return dict(vec) if n == -1 else {}
        out: dict = {}
        for mu, v in vec.items():
            _axpy(out, v, self._mode_basis(lam, n, mu))
        return out

    @lru_cache(maxsize=None)
    def _mode_basis(self, lam: Partition, n: int, mu: Partition) -> dict:
        if not lam:
            return {mu: self.engine.one} if n == -1 else {}
        wa = weight(lam)
        target = weight(mu) + wa - n - 1
        if target < 0:
            return {}
        if lam == NU:
            return dict(self.engine.act_basis(n - 1, mu))
        j = 1 - lam[0]
        x = lam[1:]
        wx = weight(x)
        lmu = weight(mu)
        out: dict = {}
        # nu_(j-i) x_(n+i) mu: x_(n+i) lands at lmu + wx - n - i - 1 >= 0
        for i in range(0, lmu + wx - n):
            coef = (-1 if i % 2 else 1) * binomial(j, i)
            if coef:
                inner = self.mode_on_vector(x, n + i, {mu: 1})
                _axpy(out, coef, self.engine.act(j - i - 1, inner))
        # x_(j+n-i) nu_(i) mu: nu_(i) = L_(i-1) lands at lmu - i + 1 >= 0
        for i in range(0, lmu + 2):
            coef = (1 if (i + j) % 2 else -1) * binomial(j, i)
            if coef:
                inner = self.engine.act_basis(i - 1, mu)
                _axpy(out, coef, self.mode_on_vector(x, j + n - i, inner))
        return out

    def product_state(self, a: dict, j: int, b: dict) -> dict:
        """``a_(j) b`` as a state."""
        out: dict = {}
        for lam, v in a.items():
            _axpy(out, v, self.mode_on_vector(lam, j, b))
        return out

    def form(self, x: dict, y: dict):
        return self.engine.form(x, y)

    def gram_entries(self, level: int):
        return self.engine.gram_entries(level)


def _label(lam: Partition) -> str:
    if not lam:
        return "id"
    if lam == NU:
        return "L"
    return "Y(v_" + ",".join(map(str, lam)) + ")"


@lru_cache(maxsize=16)
def build_voa(c=C, cutoff: int = 6) -> VOAModule:
    if not isinstance(c, ScalarPoly):
        c = Fraction(c)
    return VOAModule(c, cutoff)


def state_field(voa: VOAModule, a: dict) -> ModeField:
    return voa.state_field(a)


# ---------------------------------------------------------------------------
# axiom checks


@dataclass
class AxiomReport:
    axiom: str
    cutoff: int
    ok: bool = True
    failures: list = field(default_factory=list)
    compared: int = 0

    def fail(self, what):
        self.ok = False
        self.failures.append(what)

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "cutoff": self.cutoff, "ok": self.ok, "failures": [str(f) for f in self.failures]}


def _vec_eq(x: dict, y: dict) -> bool:
    keys = x.keys() | y.keys()
    return all(not (x.get(k, 0) - y.get(k, 0)) for k in keys)


def vacuum_axiom_check(voa: VOAModule) -> AxiomReport:
    """``T|0> = 0``, ``Y(|0>) = id`` and ``Y(a,z)|0>|_{z=0} = a`` for levels <= cutoff-2."""
    rep = AxiomReport("V3", voa.cutoff)
    if voa.act(-1, {VACUUM: 1}):
        rep.fail("T|0> != 0")
    ident = identity_field(voa.dims)
    ok, k = voa.basis_field(VACUUM).compare(ident)
    rep.compared += k
    if not ok:
        rep.fail("Y(|0>) != id")
    for lam in voa.all_basis(voa.cutoff - 2):
        Y = voa.basis_field(lam)
        vac = voa.coords({VACUUM: 1}, 0)
        # creation: a_(n)|0> = 0 for n >= 0, and a_(-1)|0> = a
        for n in range(0, weight(lam)):
            op = Y.mode(n)
            if 0 in op.levels():
                if not op.is_defined(0):
                    rep.fail(f"{lam}: mode {n} undefined on |0>")
                elif any(op.apply(0, vac)):
                    rep.fail(f"{lam}: mode {n} does not kill |0>")
        op = Y.mode(-1)
        if not op.is_defined(0):
            rep.fail(f"{lam}: (-1)-mode undefined on |0>")
            continue
        got = voa.vector(op.apply(0, vac), weight(lam))
        rep.compared += 1
        if not _vec_eq(got, {lam: 1}):
            rep.fail(f"Y({lam})|0> at z=0 gives {got}")
    return rep


def translation_axiom_check(voa: VOAModule) -> AxiomReport:
    """``[L_{-1}, a_(n)] = -n a_(n-1)`` and ``(L_{-1} a)_(n) = -n a_(n-1)``."""
    rep = AxiomReport("V1", voa.cutoff)
    T = voa.L(-1)
    for lam in voa.all_basis(voa.cutoff - 2):
        Y = voa.basis_field(lam)
        Ta = voa.act(-1, {lam: 1})
        YT = voa.state_field(Ta) if Ta else None
        for n in Y.support():
            expect = Y.mode(n - 1).scale(-n)
            ok, k = T.commutator(Y.mode(n)).compare(expect)
            rep.compared += k
            if not ok:
                rep.fail(f"[T, {lam}_({n})]")
            if YT is not None:
                ok, k = YT.mode(n).compare(expect)
                rep.compared += k
                if not ok:
                    rep.fail(f"(T {lam})_({n})")
            elif not expect.is_zero():
                rep.fail(f"T{lam}=0 but d Y != 0 at {n}")
    return rep


def locality_check(voa: VOAModule, max_level: int | None = None) -> AxiomReport:
    """V2: every pair of basis fields up to ``max_level`` has a finite locality order."""
    top = voa.cutoff - 3 if max_level is None else max_level
    rep = AxiomReport("V2", voa.cutoff)
    basis = voa.all_basis(top)
    for a in basis:
        for b in basis:
            N = locality_order(voa.basis_field(a), voa.basis_field(b), weight(a) + weight(b) + 1)
            rep.compared += 1
            if N is None:
                rep.fail(f"no locality order for ({a}, {b})")
    return rep


def borcherds_check(voa: VOAModule, a: Partition, b: Partition, rep: AxiomReport | None = None) -> AxiomReport:
    """``[a_(m), b_(n)] = sum_j (m choose j) (a_(j) b)_(m+n-j)`` on the window."""
    rep = rep or AxiomReport("borcherds", voa.cutoff)
    Ya, Yb = voa.basis_field(a), voa.basis_field(b)
    products = []
    for j in range(weight(a) + weight(b)):
        st = voa.product_state({a: 1}, j, {b: 1})
        if st and weight(next(iter(st))) > voa.cutoff:
            raise WindowExhausted(f"{a}_({j}){b} beyond cutoff")
        products.append(voa.state_field(st) if st else None)
    for m in Ya.support():
        for n in Yb.support():
            lhs = Ya.mode(m).commutator(Yb.mode(n))
            if not lhs.levels():
                continue
            rhs = GradedOperator.zero(lhs.shift, voa.dims)
            for j, Yj in enumerate(products):
                if Yj is not None:
                    rhs = rhs + Yj.mode(m + n - j).scale(binomial(m, j))
            ok, k = lhs.compare(rhs)
            rep.compared += k
            if not ok:
                rep.fail(f"({a})_({m}), ({b})_({n})")
    return rep


def borcherds_suite(voa: VOAModule, max_level: int = 3) -> AxiomReport:
    rep = AxiomReport("borcherds", voa.cutoff)
    basis = voa.all_basis(max_level)
    for a in basis:
        for b in basis:
            borcherds_check(voa, a, b, rep)
    return rep


def sl2_check(voa: VOAModule) -> AxiomReport:
    """``[L0, L-1] = L-1``, ``[L0, L1] = -L1``, ``[L1, L-1] = 2 L0`` on levels <= cutoff-1."""
    rep = AxiomReport("sl2", voa.cutoff)
    L0, Lm, Lp = voa.L(0), voa.L(-1), voa.L(1)
    relations = {
        "[H,T]=T": (L0.commutator(Lm), Lm),
        "[H,T*]=-T*": (L0.commutator(Lp), -Lp),
        "[T*,T]=2H": (Lp.commutator(Lm), L0.scale(2)),
    }
    for name, (lhs, rhs) in relations.items():
        for l in lhs.levels():
            if l > voa.cutoff - 1:
                continue
            if not (lhs.is_defined(l) and rhs.is_defined(l)):
                rep.fail(f"{name} undefined at level {l}")
                continue
            rep.compared += 1
            if not all(not (x - y) for x, y in zip(lhs.blocks[l].flat, rhs.blocks[l].flat)):
                rep.fail(f"{name} at level {l}")
    for n in (0, 1, -1):
        if voa.act(n, {VACUUM: 1}):
            rep.fail(f"L{n}|0> != 0")
    return rep


class StateKind(enum.Enum):
    PRIMARY = "Primary"
    QUASIPRIMARY = "Quasiprimary"
    NEITHER = "Neither"
    NOT_HOMOGENEOUS = "NotHomogeneous"


@dataclass(frozen=True)
class StateClass:
    kind: StateKind
    weight: int | None = None

    def __str__(self) -> str:
        if self.weight is None:
            return self.kind.value
        return f"{self.kind.value}({self.weight})"


def classify_state(voa: VOAModule, a: dict) -> StateClass:
    """Primary iff ``L_1 a = L_2 a = 0`` (the higher ``L_n`` are generated by these);
    quasiprimary iff ``L_1 a = 0``."""
    a = {k: v for k, v in a.items() if v}
    levels = {weight(lam) for lam in a}
    if len(levels) != 1:
        return StateClass(StateKind.NOT_HOMOGENEOUS)
    (h,) = levels
    if voa.act(1, a):
        return StateClass(StateKind.NEITHER, h)
    if voa.act(2, a):
        return StateClass(StateKind.QUASIPRIMARY, h)
    return StateClass(StateKind.PRIMARY, h)


def invariant_form_check(voa: VOAModule, n_max: int = 3) -> AxiomReport:
    """``(L_n a, b) = (a, L_{-n} b)`` for ``|n| <= n_max`` on levels <= cutoff-3, plus
    orthogonality of distinct levels and ``(|0>, |0>) = 1``."""
    rep = AxiomReport("invariant_form", voa.cutoff)
    if voa.form({VACUUM: 1}, {VACUUM: 1}) != 1:
        rep.fail("(|0>,|0>) != 1")
    basis = voa.all_basis(voa.cutoff - 3)
    for n in range(-n_max, n_max + 1):
        for a in basis:
            La = voa.act(n, {a: 1})
            for b in basis:
                lhs = voa.form(La, {b: 1})
                rhs = voa.form({a: 1}, voa.act(-n, {b: 1}))
                rep.compared += 1
                if lhs - rhs:
                    rep.fail(f"n={n}, a={a}, b={b}")
    for a in voa.all_basis():
        for b in voa.all_basis():
            if weight(a) != weight(b) and voa.form({a: 1}, {b: 1}):
                rep.fail(f"levels of {a} and {b} not orthogonal")
    return rep


def quotient_voa_dims(c0, cutoff: int) -> list[int]:
    """Graded dimensions of L(c, 0) as ranks of the Gram matrices on the parts >= 2 basis."""
    eng = VermaEngine(Fraction(c0), 0, min_part=2)
    return [rank(eng.gram_entries(N)) if N else 1 for N in range(cutoff + 1)]


def verify_all(voa: VOAModule, borcherds_level: int = 3) -> list[AxiomReport]:
    return [
        translation_axiom_check(voa),
        locality_check(voa),
        vacuum_axiom_check(voa),
        borcherds_suite(voa, borcherds_level),
        sl2_check(voa),
        invariant_form_check(voa),
    ]
