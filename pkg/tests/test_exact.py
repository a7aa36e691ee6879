"""
Tests for the exact enumeration engine
"""

import pytest

from oscillab.bounds import BoundVerdict
from oscillab.errors import EnumerationLimitError
from oscillab.lab import load_config, run_exact, run_monte_carlo


class TestExactEngine:
    """Tests for run_exact"""

    def test_oscillator_is_martingale(self):
        """E[X_12] = 1 and every one-step defect vanishes"""
        summary = run_exact(load_config(overrides={"horizon": 12}))
        assert summary.mode == "exact"
        assert summary.trials == 2 ** 12
        assert summary.max_defect < 1e-9
        assert summary.expectation_defect < 1e-9
        assert summary.trace[-1].mean == pytest.approx(1.0, abs=1e-9)
        assert all(e.std_err == 0.0 for e in summary.trace)

    def test_horizon_zero(self):
        """Only the empty prefix: E[X_0] = X_0 exactly"""
        summary = run_exact(load_config(overrides={"horizon": 0}))
        assert summary.trace[0].mean == 1.0
        assert summary.trace_times == [0]
        assert summary.bands[0].tail[0].mean == pytest.approx(1.0)
        assert summary.bands[0].mean.mean == 0.0

    def test_no_asymptotic_reports(self):
        """Lower bounds that only hold as t → ∞ are not judged on a short tree"""
        summary = run_exact(load_config(overrides={"horizon": 10}))
        names = {r.name for r in summary.reports}
        assert "oscillation_event" not in names
        assert "expected_upcrossings" not in names
        assert "dubins" in names
        assert not summary.violated

    def test_doob_cap_per_band(self):
        """Every band with a positive lower edge is checked against (c − ε)/(2ε)"""
        summary = run_exact(load_config(overrides={"horizon": 10}))
        caps = [r for r in summary.reports if r.name == "doob_xu_cap"]
        assert len(caps) == len(summary.bands)
        for report, band in zip(caps, summary.bands):
            assert report.band == (band.lo, band.hi)
            assert report.theoretical == pytest.approx((band.c - band.eps) / (2 * band.eps))
            assert not report.violated

    def test_tail_probabilities(self):
        """P[U ≥ 0] = 1 and tails decrease"""
        summary = run_exact(load_config(overrides={"horizon": 10}))
        for band in summary.bands:
            tail = [e.mean for e in band.tail]
            assert tail[0] == pytest.approx(1.0, abs=1e-12)
            assert all(b <= a + 1e-15 for a, b in zip(tail, tail[1:]))

    def test_doob_tight_exact(self):
        """Exact tail of the doob-tight process stays under (a/b)^k"""
        summary = run_exact(load_config(overrides={"horizon": 14, "process": "doob_tight"}))
        (band,) = summary.bands
        assert band.tail[1].mean <= 0.5 + 1e-9
        assert summary.max_defect < 1e-9
        assert not summary.violated

    def test_tightness_identity(self):
        """E[U_t] equals E[max{a − X_t, 0}]/(b − a) at a finite horizon"""
        summary = run_exact(load_config(overrides={"horizon": 12, "process": "doob_tight"}))
        (band,) = summary.bands
        (report,) = [r for r in summary.reports if r.name == "tightness_identity"]
        assert report.verdict is BoundVerdict.TIGHT
        assert band.mean.mean == pytest.approx(band.mean_shortfall / (band.hi - band.lo), abs=1e-9)

    def test_no_identity_report_for_oscillator(self):
        """Only the doob-tight process carries the identity check"""
        summary = run_exact(load_config(overrides={"horizon": 8}))
        assert all(r.name != "tightness_identity" for r in summary.reports)

    def test_bounded_split_alternations(self):
        """Exact alternation tails respect ((1 − α)/(1 + α))^k"""
        summary = run_exact(load_config(overrides={
            "horizon": 12, "process": "bounded_split", "measure": "bernoulli:0.5",
        }))
        (alt,) = summary.alternations
        for k, estimate in enumerate(alt.tail):
            assert estimate.mean <= ((1 - 0.2) / (1 + 0.2)) ** k + 1e-9
        assert not summary.violated

    def test_enumeration_limit(self):
        """2^25 leaves are refused"""
        with pytest.raises(EnumerationLimitError):
            run_exact(load_config(overrides={"horizon": 25}))

    def test_non_martingale_defect(self):
        """Doubling under the fair coin drifts upward"""
        config = load_config(overrides={"horizon": 6, "process": "doubling", "measure": "bernoulli:0.5"})
        summary = run_exact(config)
        assert summary.max_defect >= 0.25
        assert summary.expectation_defect > 0.0


class TestEnginesAgree:
    """Exact and Monte Carlo summaries of the same run"""

    def test_expected_upcrossings_within_three_sigma(self):
        """E[U_12(1 − 1/30, 1 + 1/30)] from both engines"""
        exact = run_exact(load_config(overrides={"horizon": 12}))
        sampled = run_monte_carlo(load_config(overrides={"horizon": 12, "trials": 20_000, "seed": 99}))
        for e_band, s_band in zip(exact.bands, sampled.bands):
            assert abs(e_band.mean.mean - s_band.mean.mean) <= 3 * s_band.mean.std_err + 1e-12
            assert abs(e_band.tail[1].mean - s_band.tail[1].mean) <= 3 * s_band.tail[1].std_err + 1e-12
