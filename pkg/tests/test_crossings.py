"""
Tests for upcrossing and alternation counters
"""

from functools import lru_cache
import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oscillab.crossings import (
    DOWN_FIRST,
    UP_FIRST,
    AlternationScan,
    AlternationTracker,
    UpcrossingScan,
    UpcrossingTracker,
    check_tightness_criterion,
    count_alternations,
    count_downcrossings,
    count_upcrossings,
    event_emm,
)
from oscillab.errors import DomainError
from oscillab.oscillator import custom_schedule, schedule_finite

GRID = (0.2, 0.6, 1.0, 1.4, 1.8)

values_strategy = st.lists(st.floats(min_value=0.0, max_value=3.0), min_size=1, max_size=40)


def grid_walk(bits):
    """Start at 1.0 and move one grid level per bit, clamped to the grid."""
    level = 2
    values = [GRID[level]]
    for bit in bits:
        level = min(max(level + (1 if bit else -1), 0), len(GRID) - 1)
        values.append(GRID[level])
    return values


def brute_force_upcrossings(values, lo, hi):
    """Largest k over every choice of times 0 < t1 < … < t2k alternating ≤ lo and ≥ hi."""
    n = len(values)

    @lru_cache(maxsize=None)
    def best(pos, waiting_high):
        if pos >= n:
            return 0
        skip = best(pos + 1, waiting_high)
        x = values[pos]
        if not waiting_high and x <= lo:
            return max(skip, best(pos + 1, True))
        if waiting_high and x >= hi:
            return max(skip, 1 + best(pos + 1, False))
        return skip

    return best(1, False)


class TestUpcrossings:
    """Tests for count_upcrossings"""

    def test_two_upcrossings(self):
        """Stops at every step of a clean oscillation"""
        tally = count_upcrossings([1, 0.5, 1.5, 0.5, 1.5], 1.0, 0.3)
        assert tally.count == 2
        assert tally.stop_times == [1, 2, 3, 4]
        assert not tally.in_progress

    def test_flat_path(self):
        """A constant path never crosses"""
        assert count_upcrossings([1, 1, 1], 1.0, 0.2).count == 0

    def test_time_zero_does_not_start_a_crossing(self):
        """The first stop must come strictly after t = 0"""
        assert count_upcrossings([0.5, 1.5], 1.0, 0.5).count == 0
        assert count_upcrossings([1.0, 0.5, 1.5], 1.0, 0.5).count == 1

    def test_in_progress(self):
        """A path ending below the band with positive value has an open crossing"""
        assert count_upcrossings([1.0, 0.5], 1.0, 0.3).in_progress
        assert not count_upcrossings([1.0, 0.0], 1.0, 0.3).in_progress

    def test_domain(self):
        """eps must be positive and the path non-empty"""
        with pytest.raises(DomainError):
            count_upcrossings([1.0, 2.0], 1.0, 0.0)
        with pytest.raises(DomainError):
            count_upcrossings([], 1.0, 0.1)

    def test_tally_dict(self):
        """Serialized tallies carry the band edges"""
        d = count_upcrossings([1, 0.5, 1.5], 1.0, 0.25).to_dict()
        assert d["band_lo"] == 0.75
        assert d["band_hi"] == 1.25
        assert d["upcrossings"] == 1

    def test_downcrossings(self):
        """Downcrossings of the band"""
        assert count_downcrossings([1.5, 0.5, 1.5, 0.5], 1.0, 0.3).count == 1
        assert count_downcrossings([1.0, 1.5, 0.5, 1.5, 0.5], 1.0, 0.3).count == 2

    @pytest.mark.parametrize("eps", [0.2, 0.4])
    def test_matches_brute_force_on_grid(self, eps):
        """Scan equals the supremum over stopping sequences on all 2^14 grid walks"""
        lo, hi = 1.0 - eps, 1.0 + eps
        for bits in itertools.product((0, 1), repeat=14):
            values = grid_walk(bits)
            assert count_upcrossings(values, 1.0, eps).count == brute_force_upcrossings(tuple(values), lo, hi)

    @given(values_strategy, st.integers(min_value=0, max_value=40))
    def test_prefix_monotone(self, values, cut):
        """Counting on a prefix never gives more upcrossings"""
        prefix = values[: max(1, cut)]
        assert count_upcrossings(prefix, 1.0, 0.2).count <= count_upcrossings(values, 1.0, 0.2).count

    @given(values_strategy, st.floats(min_value=0.05, max_value=0.5), st.floats(min_value=0.0, max_value=1.0))
    def test_band_monotone(self, values, eps, shrink):
        """A narrower band inside a wider one is crossed at least as often"""
        inner = eps * (1.0 - 0.9 * shrink)
        assert count_upcrossings(values, 1.0, inner).count >= count_upcrossings(values, 1.0, eps).count

    @given(values_strategy)
    def test_scan_matches_counter(self, values):
        """The immutable scan agrees with the batch counter"""
        scan = UpcrossingScan.for_band(1.0, 0.3)
        for x in values:
            scan = scan.push(x)
        tally = count_upcrossings(values, 1.0, 0.3)
        assert scan.count == tally.count
        assert scan.in_progress == tally.in_progress


class TestEventEmm:
    """Tests for the uniform events E_{m,m}"""

    def test_empty_conjunction(self, finite_schedule):
        """m = 0 always holds"""
        assert event_emm([1.0], finite_schedule, 0)

    def test_flat_path(self, finite_schedule):
        """No crossings, no event"""
        assert not event_emm([1.0] * 10, finite_schedule, 1)

    def test_three_crossings(self, finite_schedule):
        """Three upcrossings of every band (1 − 1/30, 1 + 1/30)"""
        values = [1.0, 0.9, 1.1, 0.9, 1.1, 0.9, 1.1]
        assert event_emm(values, finite_schedule, 3)
        assert not event_emm(values[:5], finite_schedule, 3)

    def test_vanishing_schedule(self):
        """A band of width 0 admits no upcrossing; a negative m is rejected"""
        values = [1.0, 0.5, 1.5]
        assert event_emm(values, schedule_finite(0.2, 1), 1)
        assert not event_emm(values, schedule_finite(0.2, 1), 2)
        with pytest.raises(DomainError):
            event_emm([1.0], custom_schedule(lambda t: 0.1), -1)


class TestAlternations:
    """Tests for α-alternations"""

    def test_down_first(self):
        """Drop at t = 1, rise at t = 2"""
        tally = count_alternations([0.9, 0.4, 0.9], 0.4)
        assert tally.count == 2
        assert tally.chain == DOWN_FIRST

    def test_flat(self):
        """No moves, no alternations"""
        assert count_alternations([0.5, 0.5, 0.5], 0.1).count == 0

    def test_up_first(self):
        """Rise then drop is counted by the mirrored chain"""
        tally = count_alternations([0.1, 0.6, 0.1], 0.5)
        assert tally.count == 2
        assert tally.chain == UP_FIRST
        assert tally.stop_times == [1, 2]

    def test_anchors_reset(self):
        """Each move is measured from the value reached by the previous one"""
        assert count_alternations([0.5, 0.3, 0.45, 0.6], 0.2).count == 2

    def test_domain(self):
        """α must be positive"""
        with pytest.raises(DomainError):
            count_alternations([0.5], 0.0)

    @given(st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=1, max_size=40),
           st.floats(min_value=0.05, max_value=0.9))
    def test_scan_matches_counter(self, values, alpha):
        """The immutable scan agrees with the two-chain counter"""
        scan = AlternationScan(alpha)
        for x in values:
            scan = scan.push(x)
        assert scan.count == count_alternations(values, alpha).count


class TestTrackers:
    """Tests for the vectorized trackers"""

    @given(st.lists(st.lists(st.floats(min_value=0.0, max_value=3.0), min_size=12, max_size=12), min_size=1, max_size=8))
    def test_upcrossing_tracker(self, paths):
        """Column-fed tracker equals the scalar counter on every path"""
        matrix = np.array(paths)
        tracker = UpcrossingTracker(len(paths), 1.0, 0.3)
        for t in range(matrix.shape[1]):
            tracker.push(matrix[:, t])
        for i, path in enumerate(paths):
            tally = count_upcrossings(path, 1.0, 0.3)
            assert tracker.count[i] == tally.count
            assert tracker.in_progress(matrix[:, -1])[i] == tally.in_progress

    def test_alternation_tracker(self):
        """Column-fed tracker equals the scalar counter on random walks"""
        rng = np.random.default_rng(4)
        matrix = np.clip(0.5 + np.cumsum(rng.normal(0.0, 0.15, size=(30, 50)), axis=1), 0.0, 1.0)
        tracker = AlternationTracker(30, 0.2)
        for t in range(50):
            tracker.push(matrix[:, t])
        for i in range(30):
            assert tracker.count[i] == count_alternations(matrix[i].tolist(), 0.2).count

    def test_keep(self):
        """Dropping paths keeps the survivors' state"""
        tracker = UpcrossingTracker(3, 1.0, 0.3)
        tracker.push(np.array([1.0, 1.0, 1.0]))
        tracker.push(np.array([0.5, 1.0, 0.5]))
        tracker.keep(np.array([True, False, True]))
        tracker.push(np.array([1.5, 0.2]))
        assert tracker.count.tolist() == [1, 0]

    def test_band_domain(self):
        """Trackers reject empty bands"""
        with pytest.raises(DomainError):
            UpcrossingTracker(2, 1.0, 0.0)
        with pytest.raises(DomainError):
            AlternationTracker(2, -0.1)


class TestTightnessCriterion:
    """Tests for check_tightness_criterion"""

    def test_clean_oscillation_passes(self):
        """Values alternate between exactly a and b"""
        verdict = check_tightness_criterion([[1.0, 1.0, 2.0, 1.0, 2.0, 3.0]], 1.0, 2.0)
        assert verdict.passed

    def test_value_inside_band_fails(self):
        """1.5 after hitting 1 violates the criterion"""
        verdict = check_tightness_criterion([[1.0, 1.0, 1.5, 2.0]], 1.0, 2.0)
        assert not verdict.passed
        assert verdict.failures[0][0] == 0

    def test_overshoot_fails(self):
        """A stop below a is not tight"""
        verdict = check_tightness_criterion([[1.0, 0.8, 2.5]], 1.0, 2.0)
        assert not verdict.passed

    def test_constant_at_a_passes(self):
        """No crossings: vacuous pass"""
        verdict = check_tightness_criterion([[1.0] * 6], 1.0, 2.0)
        assert verdict.passed
        assert verdict.to_dict()["paths"] == 1

    def test_domain(self):
        """0 < a < b"""
        with pytest.raises(DomainError):
            check_tightness_criterion([], 2.0, 1.0)
