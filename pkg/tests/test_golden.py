"""Regression against tests/golden/corpus.json (written by scripts/make_golden.py)."""
import json
from fractions import Fraction
from pathlib import Path

import pytest

from vircft.coeffs import parse_rational
from vircft.verma import kac_det_direct, kac_det_formula, quotient_graded_dims
from vircft.voa import quotient_voa_dims

CORPUS = json.loads((Path(__file__).parent / "golden" / "corpus.json").read_text())


@pytest.mark.parametrize("N", range(1, 6))
def test_K(N):
    assert kac_det_formula(N).K == parse_rational(CORPUS["K"][str(N)])
    assert len(kac_det_direct(N).terms) == CORPUS["det_terms"][str(N)]


def test_K6_recorded():
    # level 6 takes ~15 s, so only its presence and sign are checked here
    assert parse_rational(CORPUS["K"]["6"]) > 0


@pytest.mark.parametrize("c0", ["0", "1/2"])
def test_quotient_dims(c0):
    levels = len(CORPUS["vacuum_quotient_dims"][c0]) - 1
    assert quotient_voa_dims(parse_rational(c0), levels) == CORPUS["vacuum_quotient_dims"][c0]
    assert quotient_graded_dims(parse_rational(c0), Fraction(0), levels) == CORPUS["verma_quotient_dims"][c0]
