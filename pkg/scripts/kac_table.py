"""Tabulate the discrete-series points and check that the Gram determinant
vanishes at level pq for each (p, q).

    python scripts/kac_table.py --m-max 3 --level-max 6
"""
import argparse

from vircft.coeffs import format_rational
from vircft.verma import discrete_series, kac_det_direct, quotient_graded_dims


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--m-max", type=int, default=3)
    ap.add_argument("--level-max", type=int, default=6)
    ap.add_argument("--extended", action="store_true")
    args = ap.parse_args()

    print(f"{'m':>2} {'c':>7} {'p':>2} {'q':>2} {'h':>8}  det(pq)=0  dims")
    for m in range(1, args.m_max + 1):
        ds = discrete_series(m, args.extended)
        for p, q, h in ds.weights:
            if p * q <= args.level_max:
                vanishes = kac_det_direct(p * q)(ds.c, h) == 0
                flag = "yes" if vanishes else "NO"
            else:
                flag = "-"
            dims = quotient_graded_dims(ds.c, h, args.level_max)
            print(f"{m:>2} {format_rational(ds.c):>7} {p:>2} {q:>2} {format_rational(h):>8}  {flag:>9}  {dims}")


if __name__ == "__main__":
    main()
