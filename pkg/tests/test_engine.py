"""
Tests for the seeded Monte Carlo engine
"""

import numpy as np
import pytest

from oscillab.bounds import Direction
from oscillab.errors import ConfigError
from oscillab.lab import LabConfig, MeasureSpec, ProcessSpec, build_process, load_config, run_monte_carlo
from oscillab.lab.engine import BatchJob, _run_scalar, _run_vectorized
from oscillab.lab.summary import trace_times


def small_config(**overrides):
    base = {"trials": 300, "horizon": 150, "seed": 17, "batch_size": 64}
    base.update(overrides)
    return load_config(overrides=base)


class TestTraceTimes:
    """Tests for trace_times"""

    def test_includes_ends(self):
        """0 and the horizon are always traced"""
        times = trace_times(100, 8)
        assert times[0] == 0
        assert times[-1] == 100
        assert times == sorted(set(times))

    def test_short_horizon(self):
        """Every time when the horizon is short"""
        assert trace_times(3, 32) == [0, 1, 2, 3]
        assert trace_times(0, 32) == [0]


class TestMonteCarlo:
    """Tests for run_monte_carlo"""

    def test_constant_process(self):
        """X ≡ 1 never crosses its band and keeps E[X_t] = 1"""
        summary = run_monte_carlo(small_config(process="constant"))
        assert summary.process == "constant"
        (band,) = summary.bands
        assert band.mean.mean == 0.0
        assert all(e.mean == 0.0 for e in summary.bands[0].tail[1:])
        assert all(e.mean == 1.0 for e in summary.trace)
        assert not summary.violated

    def test_horizon_zero_rejected(self):
        """Monte Carlo needs at least one step"""
        with pytest.raises(ConfigError):
            run_monte_carlo(small_config(horizon=0))

    def test_oscillator_summary(self):
        """Three schedule bands, three nested events, upper bounds hold"""
        summary = run_monte_carlo(small_config())
        assert summary.mode == "monte_carlo"
        assert len(summary.bands) == 3
        assert len(summary.events) == 3
        probs = [e.mean for e in summary.events]
        assert probs == sorted(probs, reverse=True)
        assert not any(r.violated for r in summary.reports if r.direction is Direction.UPPER)
        names = {r.name for r in summary.reports}
        assert {"dubins", "doob_xu", "oscillation_event", "expected_upcrossings"} <= names

    def test_mean_preserved(self):
        """E[X_t] stays within sampling error of 1"""
        summary = run_monte_carlo(small_config(trials=2000))
        for estimate in summary.trace:
            assert abs(estimate.mean - 1.0) <= 4 * estimate.std_err + 1e-12

    def test_nonnegative_values(self):
        """Final values are never negative"""
        summary = run_monte_carlo(small_config())
        assert (summary.paths.final >= 0.0).all()

    def test_same_seed_same_bits(self):
        """Repeated runs are identical"""
        a = run_monte_carlo(small_config())
        b = run_monte_carlo(small_config())
        assert a.to_dict() == b.to_dict()

    def test_batch_size_independent(self):
        """Batching never changes a result"""
        a = run_monte_carlo(small_config(batch_size=7))
        b = run_monte_carlo(small_config(batch_size=300))
        assert a.to_dict() == b.to_dict()
        assert np.array_equal(a.paths.upcrossings, b.paths.upcrossings)

    def test_worker_count_independent(self):
        """Worker processes never change a result"""
        a = run_monte_carlo(small_config(workers=1))
        b = run_monte_carlo(small_config(workers=3))
        assert a.to_dict() == b.to_dict()

    def test_seed_matters(self):
        """Different seeds sample different paths"""
        a = run_monte_carlo(small_config(seed=1))
        b = run_monte_carlo(small_config(seed=2))
        assert not np.array_equal(a.paths.final, b.paths.final)

    def test_doob_tight_dubins(self):
        """P[U ≥ k] stays under (a/b)^k and the tight reports hold"""
        summary = run_monte_carlo(small_config(process="doob_tight", trials=4000, horizon=1000))
        (band,) = summary.bands
        assert (band.lo, band.hi) == (1.0, 2.0)
        assert band.tail[1].mean <= 0.5 + 3 * band.tail[1].std_err
        assert band.tail[1].mean == pytest.approx(0.5, abs=0.05)
        assert not summary.violated

    def test_bounded_split_alternations(self):
        """[0,1]-valued processes get alternation reports"""
        summary = run_monte_carlo(small_config(process="bounded_split", measure="bernoulli:0.5"))
        assert summary.alternations[0].alpha == 0.2
        names = {r.name for r in summary.reports}
        assert {"alternation_probability", "davis", "alternation_expectation"} <= names
        assert not summary.violated

    def test_belief_process_runs_path_by_path(self):
        """Non-i.i.d. mixtures fall back to per-path sampling"""
        config = LabConfig(
            process=ProcessSpec(kind="belief", q=MeasureSpec.parse("bernoulli:0.6667")),
            trials=40, horizon=30, seed=3,
        )
        summary = run_monte_carlo(config)
        assert summary.process == "belief"
        assert summary.trials == 40
        assert not summary.violated


class TestBatchRunners:
    """Tests for the two batch runners"""

    def test_vectorized_matches_scalar(self):
        """Kernel and per-path replay agree on every tally"""
        config = small_config(trials=40, horizon=120)
        process, measure = build_process(config)
        job = BatchJob(
            process=process, measure=measure,
            bands=((1.0, 0.2 / 6), (1.0, 0.1)), alphas=(0.1,), times=(0, 30, 60, 120),
            seed=5, start=10, stop=50, horizon=120,
        )
        fast = _run_vectorized(job)
        slow = _run_scalar(job)
        assert np.array_equal(fast.upcrossings, slow.upcrossings)
        assert np.array_equal(fast.in_progress, slow.in_progress)
        assert np.array_equal(fast.alternations, slow.alternations)
        assert np.array_equal(fast.final, slow.final)
        assert np.array_equal(fast.trace, slow.trace)
