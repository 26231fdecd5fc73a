import random
from fractions import Fraction

import pytest

from conch.annotate.metrics import fleiss_kappa, precision
from conch.errors import DegenerateAgreement, EmptyPrediction


class TestFleissKappa:
    def test_hand_value_minus_one_fifth(self):
        # rows (3,0) and (2,1): P1=1, P2=1/3, Pbar=2/3, Pe=13/18
        assert fleiss_kappa([(3, 0), (2, 1)]) == float(Fraction(-1, 5))

    def test_perfect_agreement_is_exactly_one(self):
        assert fleiss_kappa([(3, 0), (0, 3)]) == 1.0
        assert fleiss_kappa([(0, 5), (5, 0), (0, 5)]) == 1.0

    def test_known_textbook_value(self):
        # two raters, two items, full disagreement on one item
        # P1=1, P2=(1+1-2)/2=0, Pbar=1/2; cols 3,1 -> Pe=10/16
        value = fleiss_kappa([(2, 0), (1, 1)])
        assert value == float((Fraction(1, 2) - Fraction(5, 8))
                              / (1 - Fraction(5, 8)))

    def test_degenerate_single_column(self):
        with pytest.raises(DegenerateAgreement):
            fleiss_kappa([(3, 0), (3, 0)])

    def test_rejects_ragged_matrix(self):
        with pytest.raises(ValueError):
            fleiss_kappa([(3, 0), (2, 1, 0)])

    def test_rejects_negative_counts(self):
        with pytest.raises(ValueError):
            fleiss_kappa([(3, -1), (2, 2)])

    def test_rejects_unequal_row_sums(self):
        with pytest.raises(ValueError):
            fleiss_kappa([(3, 0), (2, 2)])

    def test_rejects_single_rater(self):
        with pytest.raises(ValueError):
            fleiss_kappa([(1, 0), (0, 1)])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            fleiss_kappa([])

    def test_permutation_invariance_exact(self):
        rng = random.Random(42)
        for _ in range(50):
            items = rng.randint(2, 8)
            cats = rng.randint(2, 5)
            raters = rng.randint(2, 6)
            rows = []
            for _ in range(items):
                counts = [0] * cats
                for _ in range(raters):
                    counts[rng.randrange(cats)] += 1
                rows.append(tuple(counts))
            try:
                base = fleiss_kappa(rows)
            except DegenerateAgreement:
                continue
            shuffled = rows[:]
            rng.shuffle(shuffled)
            col_perm = list(range(cats))
            rng.shuffle(col_perm)
            permuted = [tuple(row[j] for j in col_perm) for row in shuffled]
            assert fleiss_kappa(shuffled) == base
            assert fleiss_kappa(permuted) == base

class TestPrecision:
    def test_hand_value(self):
        assert precision({"a", "b", "c", "d"}, {"b", "c"}) == 0.5

    def test_perfect(self):
        assert precision({"a", "b"}, {"a", "b", "c"}) == 1.0

    def test_zero_overlap(self):
        assert precision({"a"}, {"b"}) == 0.0

    def test_empty_prediction(self):
        with pytest.raises(EmptyPrediction):
            precision(set(), {"a"})

    def test_deduplicates_iterables(self):
        assert precision(["a", "a", "b"], ["b"]) == 0.5
