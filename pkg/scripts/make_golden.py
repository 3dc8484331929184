"""Regenerate the golden regression corpus in tests/golden/corpus.json.

K_N comes from exact division of the Gram determinant by the merged Kac
product; the quotient dimensions are Gram ranks. Nothing in the corpus is
typed in by hand.

    python scripts/make_golden.py [--k-max 6] [--levels 10]
"""
import argparse
import json
import time
from fractions import Fraction
from pathlib import Path

from vircft.coeffs import format_rational
from vircft.verma import kac_det_direct, kac_det_formula, quotient_graded_dims
from vircft.voa import quotient_voa_dims

OUT = Path(__file__).resolve().parent.parent / "tests" / "golden" / "corpus.json"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--k-max", type=int, default=6)
    ap.add_argument("--levels", type=int, default=10)
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args()

    corpus = {"K": {}, "det_terms": {}, "vacuum_quotient_dims": {}, "verma_quotient_dims": {}}
    for N in range(1, args.k_max + 1):
        t0 = time.perf_counter()
        fac = kac_det_formula(N)
        corpus["K"][str(N)] = format_rational(fac.K)
        corpus["det_terms"][str(N)] = len(kac_det_direct(N).terms)
        print(f"K_{N} = {fac.K}  ({time.perf_counter() - t0:.1f}s)")
    for c0 in (Fraction(0), Fraction(1, 2)):
        key = format_rational(c0)
        corpus["vacuum_quotient_dims"][key] = quotient_voa_dims(c0, args.levels)
        corpus["verma_quotient_dims"][key] = quotient_graded_dims(c0, 0, args.levels)
        print(f"c = {key}: vacuum {corpus['vacuum_quotient_dims'][key]}")
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(corpus, indent=2) + "\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
