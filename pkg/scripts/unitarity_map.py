"""Print the first level at which the Gram matrix stops being positive
semidefinite, over a rational (c, h) grid.

    python scripts/unitarity_map.py --level-max 5 --workers 4
"""
import argparse
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from vircft.coeffs import Definiteness, format_rational
from vircft.verma import unitarity_classify

C_GRID = [Fraction(k, 4) for k in range(-2, 7)]
H_GRID = [Fraction(k, 8) for k in range(-2, 9)]


def first_bad_level(point):
    c0, h0, n_max = point
    for v in unitarity_classify(c0, h0, n_max):
        if v.verdict is Definiteness.INDEFINITE:
            return v.level
    return None


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--level-max", type=int, default=5)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    points = [(c0, h0, args.level_max) for c0 in C_GRID for h0 in H_GRID]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            bad = list(pool.map(first_bad_level, points))
    else:
        bad = [first_bad_level(p) for p in points]
    table = dict(zip([(c, h) for c, h, _ in points], bad))

    print("c \\ h " + " ".join(f"{format_rational(h):>5}" for h in H_GRID))
    for c0 in C_GRID:
        cells = [table[c0, h0] for h0 in H_GRID]
        print(f"{format_rational(c0):>6} " + " ".join(f"{'.' if b is None else b:>5}" for b in cells))
    print(f"'.' = no negative direction up to level {args.level_max}")


if __name__ == "__main__":
    main()
