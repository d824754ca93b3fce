import numpy as np
import pytest

from conftest import make_observation
from ratingkit import compare, scales
from ratingkit.errors import EmptyInput
from ratingkit.modelspec import ModelSpec, Regressor
from ratingkit.scales import ScaleKind


def paired(sp, moodys, cid="X", **overrides):
    return make_observation(company_id=cid, sp_rating=sp,
                            moodys_rating=moodys, **overrides)


class TestPair:
    def test_skips_single_agency_rows(self):
        rows = [
            paired("BB", "Ba2", "both"),
            make_observation(company_id="sp-only", moodys_rating=None),
            make_observation(company_id="moodys-only", sp_rating=None),
        ]
        pairs = compare.pair(rows)
        assert [p.company_id for p in pairs] == ["both", "sp-only"][:1]

    def test_common_scale_encoding(self):
        pairs = compare.pair([paired("BB", "Ba2")], ScaleKind.GRADATIONS18)
        assert pairs[0].sp_code == 12
        assert pairs[0].moodys_code == 12

    def test_classes_scale(self):
        pairs = compare.pair([paired("BB+", "B1")], ScaleKind.CLASSES8)
        assert pairs[0].sp_code == 5   # BB class
        assert pairs[0].moodys_code == 6  # B class


class TestMeasures:
    def test_agreement(self):
        p = compare.pair([paired("BB", "Ba2")])[0]
        m = compare.compute_measures(p)
        assert (m.delta, m.fds, m.split) == (0, 0, 0)

    def test_sp_better_is_negative(self):
        # S&P one gradation better than Moody's
        p = compare.pair([paired("BB+", "Ba2")])[0]
        m = compare.compute_measures(p)
        assert (m.delta, m.fds, m.split) == (-1, 1, 1)

    def test_sign_flip(self):
        p = compare.pair([paired("BB+", "Ba2")])[0]
        m = compare.compute_measures(p, compare.MOODYS_MINUS_SP)
        assert (m.delta, m.fds, m.split) == (1, 1, 1)

    def test_unknown_sign(self):
        p = compare.pair([paired("BB", "Ba2")])[0]
        with pytest.raises(ValueError):
            compare.compute_measures(p, "backwards")

    def test_fds_and_split_derived_exactly(self):
        rng = np.random.default_rng(9)
        ladder = scales.SP_LADDER
        moodys = scales.MOODYS_LADDER
        rows = [paired(ladder[rng.integers(0, len(ladder))],
                       moodys[rng.integers(0, len(moodys))], str(i))
                for i in range(100)]
        for p in compare.pair(rows):
            m = compare.compute_measures(p)
            assert m.fds == abs(m.delta)
            assert m.split == (1 if m.delta != 0 else 0)


class TestSummaries:
    def _pairs(self):
        rows = [paired("BB", "Ba2", "a"), paired("BB+", "Ba2", "b"),
                paired("BB-", "Ba2", "c"), paired("B+", "Ba2", "d")]
        return compare.pair(rows)

    def test_summarize(self):
        mean_delta, histogram = compare.summarize(self._pairs())
        assert mean_delta == pytest.approx((0 - 1 + 1 + 2) / 4)
        assert histogram == {-1: 1, 0: 1, 1: 1, 2: 1}

    def test_summarize_empty(self):
        with pytest.raises(EmptyInput):
            compare.summarize([])

    def test_measures_csv(self):
        text = compare.measures_csv(self._pairs())
        lines = text.splitlines()
        assert lines[0] == "company_id,delta,fds,split"
        assert lines[1] == "a,0,0,0"
        assert lines[2] == "b,-1,1,1"
        assert len(lines) == 5 and text.endswith("\n")

    def test_delta_histogram_csv(self):
        text = compare.delta_histogram_csv(self._pairs())
        assert text == "delta,count\n-1,1\n0,1\n1,1\n2,1\n"


class TestDisagreementModels:
    def test_fit_on_synthetic_pairs(self, synth_dataset):
        _, observations, _, _, _ = synth_dataset
        pairs = compare.pair(observations, ScaleKind.CLASSES8)
        assert len(pairs) > 1000
        spec = ModelSpec("d", (Regressor("mkt_cap"), Regressor("roa"),
                               Regressor("developed")))
        models = compare.fit_disagreement_models(pairs, spec)
        deltas = np.array([compare.compute_measures(p).delta for p in pairs])
        assert models.n_used == len(pairs)
        assert models.delta_offset == deltas.min()
        assert models.delta_model.k == deltas.max() - deltas.min() + 1
        assert models.fds_model.k == np.abs(deltas).max() + 1
        assert models.split_model.k == 2
        assert models.split_diag.converged

    def test_rows_without_regressors_dropped(self):
        good = [paired("BB", "Ba2", str(i)) for i in range(10)]
        good += [paired("BB+", "Ba2", "g%d" % i) for i in range(10)]
        bad = paired("BB", "Ba2", "bad", numbers={"mkt_cap_musd": None})
        spec = ModelSpec("d", (Regressor("mkt_cap"),))
        # vary the regressor but keep the two delta groups overlapping,
        # otherwise the probit separates and has no finite MLE
        for i, p in enumerate(good):
            p.numbers["mkt_cap_musd"] = 1000.0 * (i % 10 + 1)
        models = compare.fit_disagreement_models(
            compare.pair(good + [bad]), spec)
        assert models.n_used == 20
        assert models.n_dropped == 1

    def test_all_rows_incomplete(self):
        bad = paired("BB", "Ba2", numbers={"mkt_cap_musd": None})
        spec = ModelSpec("d", (Regressor("mkt_cap"),))
        with pytest.raises(EmptyInput):
            compare.fit_disagreement_models(compare.pair([bad]), spec)
