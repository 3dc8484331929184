"""Independent reference values used across the test modules."""
from fractions import Fraction


def c_of_t(t: Fraction) -> Fraction:
    """Central charge on the curve c = 13 - 6(t + 1/t)."""
    return 13 - 6 * (t + 1 / t)


def h_of_t(t: Fraction, p: int, q: int) -> Fraction:
    """Root of the (p, q) Kac factor on the same curve."""
    return ((t * p - q) ** 2 - (t - 1) ** 2) / (4 * t)


def minimal_character(p: int, pp: int, r: int, s: int, n_max: int) -> list[int]:
    """q-expansion of the irreducible minimal-model character chi_{r,s} for
    the coprime pair (p, pp), leading q^h stripped, from the alternating sum
    over the affine Weyl orbit divided by the Euler function."""
    num = [0] * (n_max + 1)
    h = Fraction((pp * r - p * s) ** 2 - (pp - p) ** 2, 4 * p * pp)
    span = n_max + 2
    for k in range(-span, span + 1):
        a = Fraction((2 * p * pp * k + pp * r - p * s) ** 2 - (pp - p) ** 2, 4 * p * pp) - h
        b = Fraction((2 * p * pp * k + pp * r + p * s) ** 2 - (pp - p) ** 2, 4 * p * pp) - h
        if a.denominator == 1 and 0 <= a <= n_max:
            num[int(a)] += 1
        if b.denominator == 1 and 0 <= b <= n_max:
            num[int(b)] -= 1
    # divide by prod (1 - q^n): multiply by the partition generating function
    parts = [1] + [0] * n_max
    for n in range(1, n_max + 1):
        for k in range(n, n_max + 1):
            parts[k] += parts[k - n]
    return [sum(num[i] * parts[k - i] for i in range(k + 1)) for k in range(n_max + 1)]
