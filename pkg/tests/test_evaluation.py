import numpy as np
import pytest

from ratingkit import evaluation
from ratingkit.errors import EmptyInput, LengthMismatch


def brute_force(actual, predicted):
    """Independent recount of every reported share."""
    deltas = [p - a for a, p in zip(actual, predicted)]
    n = len(deltas)
    hist = {}
    for d in deltas:
        hist[d] = hist.get(d, 0) + 1
    return {
        "share_exact": sum(1 for d in deltas if d == 0) / n,
        "share_abs1": sum(1 for d in deltas if abs(d) == 1) / n,
        "share_abs2": sum(1 for d in deltas if abs(d) == 2) / n,
        "share_within1": sum(1 for d in deltas if abs(d) <= 1) / n,
        "share_within2": sum(1 for d in deltas if abs(d) <= 2) / n,
        "histogram": hist,
    }


class TestEvaluate:
    def test_hand_example(self):
        actual = [3, 3, 3, 3, 3]
        predicted = [3, 4, 2, 5, 1]
        report = evaluation.evaluate(actual, predicted)
        assert report.n == 5
        assert report.share_exact == pytest.approx(0.2)
        assert report.share_abs1 == pytest.approx(0.4)
        assert report.share_abs2 == pytest.approx(0.4)
        assert report.share_within1 == pytest.approx(0.6)
        assert report.share_within2 == pytest.approx(1.0)
        assert report.histogram == {-2: 1, -1: 1, 0: 1, 1: 1, 2: 1}

    def test_delta_sign(self):
        report = evaluation.evaluate([2], [5])
        assert report.delta.tolist() == [3]

    def test_matches_brute_force(self):
        rng = np.random.default_rng(21)
        for _ in range(50):
            n = int(rng.integers(1, 60))
            actual = rng.integers(1, 9, n)
            predicted = rng.integers(1, 9, n)
            report = evaluation.evaluate(actual, predicted)
            want = brute_force(actual, predicted)
            for key in ("share_exact", "share_abs1", "share_abs2",
                        "share_within1", "share_within2"):
                assert getattr(report, key) == pytest.approx(want[key], abs=1e-15)
            assert report.histogram == want["histogram"]
            assert sum(report.histogram.values()) == n

    def test_swap_negates_histogram(self):
        rng = np.random.default_rng(22)
        actual = rng.integers(1, 9, 200)
        predicted = rng.integers(1, 9, 200)
        fwd = evaluation.evaluate(actual, predicted)
        rev = evaluation.evaluate(predicted, actual)
        assert rev.histogram == {-d: c for d, c in fwd.histogram.items()}
        assert rev.share_exact == fwd.share_exact
        assert rev.share_within2 == fwd.share_within2

    def test_errors(self):
        with pytest.raises(LengthMismatch):
            evaluation.evaluate([1, 2], [1])
        with pytest.raises(EmptyInput):
            evaluation.evaluate([], [])


class TestHistogramCsv:
    def test_format(self):
        report = evaluation.evaluate([3, 3, 3], [1, 3, 4])
        text = evaluation.histogram_csv(report)
        assert text == "delta,count\n-2,1\n0,1\n1,1\n"

    def test_to_dict_keys(self):
        report = evaluation.evaluate([3], [5])
        d = report.to_dict()
        assert d["n"] == 1
        assert d["histogram"] == {"2": 1}
