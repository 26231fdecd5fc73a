"""Agreement and precision metrics for annotation audits.

Kappa is computed in exact rational arithmetic and converted to float at the
end, so perfect agreement is exactly 1.0 and permutation invariance is exact.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import DegenerateAgreement, EmptyPrediction


def fleiss_kappa(ratings: Sequence[Sequence[int]]) -> float:
    """Fleiss' kappa over an items x categories count matrix.

    Every row must sum to the same rater count n >= 2.
    """
    rows = [tuple(int(x) for x in row) for row in ratings]
    if not rows:
        raise ValueError("rating matrix has no items")
    width = len(rows[0])
    if width < 1:
        raise ValueError("rating matrix has no categories")
    if any(len(row) != width for row in rows):
        raise ValueError("ragged rating matrix")
    if any(x < 0 for row in rows for x in row):
        raise ValueError("negative rating count")
    n = sum(rows[0])
    if n < 2:
        raise ValueError(f"need at least 2 raters, rows sum to {n}")
    if any(sum(row) != n for row in rows):
        raise ValueError("rows do not all sum to the same rater count")

    count = len(rows)
    p_bar = Fraction(0)
    for row in rows:
        agree = Fraction(sum(x * x for x in row) - n, n * (n - 1))
        p_bar += agree
    p_bar /= count

    p_e = Fraction(0)
    for j in range(width):
        share = Fraction(sum(row[j] for row in rows), count * n)
        p_e += share * share

    if p_e == 1:
        raise DegenerateAgreement("all ratings fall in one category; kappa undefined")
    return float((p_bar - p_e) / (1 - p_e))


def precision(predicted: Iterable, gold: Iterable) -> float:
    """|predicted ∩ gold| / |predicted| over labeled items."""
    pred = set(predicted)
    if not pred:
        raise EmptyPrediction("no predicted items")
    return len(pred & set(gold)) / len(pred)
