"""
Tests for MDL selection and the non-convergence experiment
"""

from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oscillab.crossings import event_emm
from oscillab.errors import ContractError, DomainError, NoModelError
from oscillab.martingale import induced_measure
from oscillab.mdl import ModelClass, MdlTrace, mdl_oscillation_experiment, mdl_select, mdl_trace
from oscillab.measure import bernoulli_measure, categorical_measure, sample_path
from oscillab.oscillator import build_oscillator, schedule_finite


@lru_cache(maxsize=None)
def _oscillator_models():
    p = bernoulli_measure(1.0 / 3.0)
    process = build_oscillator(p, schedule_finite(0.2, 3))
    return p, process, ModelClass([(p, 1), (induced_measure(process, p), 1)])


@pytest.fixture
def oscillator_class(oscillator, third):
    """{(P, 1), (Q, 1)} with Q induced by the oscillator under P = Bernoulli(1/3)."""
    return ModelClass([(third, 1), (induced_measure(oscillator, third), 1)])


class TestModelClass:
    """Tests for model class validation"""

    def test_kraft_inequality(self, third, two_thirds):
        """Σ 2^{−K} > 1 is rejected"""
        with pytest.raises(ContractError):
            ModelClass([(third, 1), (two_thirds, 0.5)])
        assert len(ModelClass([(third, 1), (two_thirds, 1)])) == 2

    def test_empty_class(self):
        """At least one model"""
        with pytest.raises(DomainError):
            ModelClass([])

    def test_negative_complexity(self, third):
        """K ≥ 0"""
        with pytest.raises(DomainError):
            ModelClass([(third, -1)])

    def test_mixed_alphabets(self, third):
        """Models must share one alphabet"""
        with pytest.raises(DomainError):
            ModelClass([(third, 2), (categorical_measure([0.2, 0.3, 0.5]), 2)])


class TestMdlSelect:
    """Tests for mdl_select"""

    def test_likelier_model_wins(self, third, two_thirds):
        """A run of ones favours Bernoulli(2/3)"""
        models = ModelClass([(third, 1), (two_thirds, 1)])
        assert mdl_select(models, "1111") == 1
        assert mdl_select(models, "0000") == 0

    def test_tie_goes_to_lowest_index(self, third, two_thirds):
        """Equal code lengths select the first model"""
        models = ModelClass([(third, 1), (two_thirds, 1)])
        assert mdl_select(models, "") == 0
        assert mdl_select(models, "01") == 0
        swapped = ModelClass([(two_thirds, 1), (third, 1)])
        assert mdl_select(swapped, "01") == 0

    def test_complexity_penalty(self, third, two_thirds):
        """A heavier model needs more evidence"""
        models = ModelClass([(third, 1), (two_thirds, 3)])
        assert mdl_select(models, "1") == 0
        assert mdl_select(models, "1111") == 1

    def test_no_model(self):
        """Every model gives the prefix probability 0"""
        zero = bernoulli_measure(0.0)
        with pytest.raises(NoModelError):
            mdl_select(ModelClass([(zero, 1), (zero, 1)]), "1")

    @given(st.lists(st.integers(0, 1), max_size=12))
    def test_follows_quotient(self, u):
        """With equal complexities Q is chosen exactly when X_t(u) > 1"""
        p, process, models = _oscillator_models()
        x = process.value_at(p, u)
        if x > 1.0 + 1e-9:
            assert mdl_select(models, u) == 1
        elif x < 1.0 - 1e-9:
            assert mdl_select(models, u) == 0


class TestMdlTrace:
    """Tests for mdl_trace"""

    def test_single_model(self, third):
        """One model never flips"""
        trace = mdl_trace(ModelClass([(third, 0)]), "0110100110", 10)
        assert trace.flips == 0
        assert trace.selections == [0] * 11

    def test_selections_match_select(self, third, two_thirds):
        """Incremental selections equal selections on each prefix"""
        models = ModelClass([(third, 1), (two_thirds, 1)])
        path = "1101110001011"
        trace = mdl_trace(models, path)
        assert trace.selections == [mdl_select(models, path[:t]) for t in range(len(path) + 1)]

    def test_flip_count(self):
        """Flips are adjacent unequal pairs"""
        assert MdlTrace.from_selections([0, 1, 1, 0, 1]).flips == 3

    def test_horizon_domain(self, third):
        """horizon ≤ path length"""
        with pytest.raises(DomainError):
            mdl_trace(ModelClass([(third, 0)]), "01", 3)

    def test_flips_follow_crossings_of_one(self, oscillator, oscillator_class, third):
        """Each crossing of X_t over 1 is a flip"""
        path = sample_path(third, 3, 0, 400)
        values = oscillator.path_values(third, path)
        above = [x > 1.0 + 1e-9 for x in values]
        changes = sum(1 for a, b in zip(above, above[1:]) if a != b)
        assert mdl_trace(oscillator_class, path).flips == changes

    def test_three_upcrossings_give_five_flips(self, oscillator, oscillator_class, third, finite_schedule):
        """A path in E_{3,3} switches to Q and back at least 2·3 − 1 times"""
        for trial in range(50):
            path = sample_path(third, 5, trial, 2000)
            if event_emm(oscillator.path_values(third, path), finite_schedule, 3):
                assert mdl_trace(oscillator_class, path).flips >= 5
                return
        pytest.fail("no path in the event among 50 trials")


class TestMdlExperiment:
    """Tests for mdl_oscillation_experiment"""

    def test_zero_bands(self, third):
        """m = 0: every path has at least −1 flips"""
        result = mdl_oscillation_experiment(third, 0.2, 0, 50, 20, seed=1)
        assert result.threshold == -1
        assert result.fraction == 1.0
        assert result.passed
        assert result.min_flips == 0

    def test_deterministic(self, third):
        """Same seed, same flips, whatever the batching"""
        a = mdl_oscillation_experiment(third, 0.2, 2, 300, 40, seed=11, batch_size=7)
        b = mdl_oscillation_experiment(third, 0.2, 2, 300, 40, seed=11, batch_size=64)
        assert np.array_equal(a.flips, b.flips)

    def test_single_trial(self, third):
        """trials = 1 replays one trace"""
        a = mdl_oscillation_experiment(third, 0.2, 2, 300, 1, seed=4)
        b = mdl_oscillation_experiment(third, 0.2, 2, 300, 1, seed=4)
        assert a.flips.tolist() == b.flips.tolist()
        assert a.flips.shape == (1,)

    def test_vectorized_matches_replay(self, third):
        """Batch flip counts equal mdl_trace on the same sampled paths"""
        result = mdl_oscillation_experiment(third, 0.2, 2, 300, 12, seed=8, batch_size=5)
        for trial in range(12):
            path = sample_path(third, 8, trial, 300)
            assert result.flips[trial] == mdl_trace(result.model_class, path).flips

    def test_summary_keys(self, third):
        """Summary carries fraction, threshold and slack"""
        summary = mdl_oscillation_experiment(third, 0.2, 1, 100, 10, seed=2).to_summary()
        assert summary["threshold"] == 1
        assert summary["slack"] == pytest.approx(0.02)
        assert 0.0 <= summary["fraction"] <= 1.0

    def test_domain(self, third):
        """δ in (0, 1/2), m ≥ 0, trials ≥ 1"""
        with pytest.raises(DomainError):
            mdl_oscillation_experiment(third, 0.6, 1, 10, 10, seed=0)
        with pytest.raises(DomainError):
            mdl_oscillation_experiment(third, 0.2, -1, 10, 10, seed=0)
        with pytest.raises(DomainError):
            mdl_oscillation_experiment(third, 0.2, 1, 10, 0, seed=0)

    @pytest.mark.slow
    def test_non_convergence_fraction(self, third):
        """Most paths flip at least 2m − 1 times"""
        result = mdl_oscillation_experiment(third, 0.2, 3, 10_000, 5_000, seed=2024)
        assert result.fraction >= 0.78
        assert result.passed
