import math

import numpy as np
import pytest

from ratingkit import normal

scipy_stats = pytest.importorskip("scipy.stats")


class TestAgainstScipy:
    def test_cdf_grid(self):
        # deep-tail relative error is dominated by |x| * ulp(x); allow for it
        x = np.linspace(-37.0, 8.0, 4001)
        ours = normal.norm_cdf(x)
        ref = scipy_stats.norm.cdf(x)
        rel = np.abs(ours - ref) / np.maximum(ref, 1e-300)
        assert np.max(rel) < 5e-13
        assert np.max(rel[x > -6.0]) < 1e-14

    def test_sf_grid(self):
        x = np.linspace(-8.0, 37.0, 4001)
        ours = normal.norm_sf(x)
        ref = scipy_stats.norm.sf(x)
        rel = np.abs(ours - ref) / np.maximum(ref, 1e-300)
        assert np.max(rel) < 5e-13
        assert np.max(rel[x < 6.0]) < 1e-14

    def test_pdf_grid(self):
        x = np.linspace(-10.0, 10.0, 2001)
        assert np.allclose(normal.norm_pdf(x), scipy_stats.norm.pdf(x),
                           rtol=1e-14, atol=0)

    def test_ppf(self):
        for q in (1e-12, 1e-6, 0.01, 0.15865525393145707, 0.5, 0.975,
                  1 - 1e-6):
            assert normal.norm_ppf(q) == pytest.approx(
                scipy_stats.norm.ppf(q), abs=1e-10)


class TestIdentities:
    def test_cdf_sf_complement(self):
        x = np.linspace(-6.0, 6.0, 241)
        assert np.allclose(normal.norm_cdf(x) + normal.norm_sf(x), 1.0,
                           rtol=0, atol=1e-15)

    def test_symmetry(self):
        x = np.linspace(0.0, 10.0, 101)
        assert np.allclose(normal.norm_cdf(-x), normal.norm_sf(x),
                           rtol=1e-15, atol=0)

    def test_known_values(self):
        assert normal.norm_cdf(0.0) == pytest.approx(0.5, abs=1e-16)
        assert normal.norm_cdf(-1.0) == pytest.approx(
            0.15865525393145707, abs=1e-16)
        assert normal.norm_pdf(0.0) == pytest.approx(
            1.0 / math.sqrt(2.0 * math.pi), abs=1e-16)

    def test_erfc_against_math(self):
        xs = np.linspace(-5.0, 5.0, 501)
        worst = max(
            abs(float(normal.erfc(np.array([x]))[0]) - math.erfc(x))
            / max(math.erfc(x), 1e-300)
            for x in xs)
        assert worst < 1e-13

    def test_ppf_roundtrip(self):
        # upper-tail roundtrip loses ~ulp(q)/pdf(x); tolerance covers x=6
        for x in (-8.0, -3.2, -0.5, 0.0, 1.7, 6.0):
            assert normal.norm_ppf(float(normal.norm_cdf(x))) == \
                pytest.approx(x, abs=5e-8)

    def test_tails_monotone_and_bounded(self):
        x = np.linspace(-38.0, 38.0, 5000)
        c = np.asarray(normal.norm_cdf(x), dtype=float)
        assert np.all(np.diff(c) >= 0)
        assert np.all(c >= 0.0) and np.all(c <= 1.0)
        assert c[0] > 0.0 and c[-1] == 1.0
