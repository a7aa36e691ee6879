"""
Tests for martingale processes, exact verification and the measure conversions
"""

import math

import pytest

from oscillab.errors import AbsoluteContinuityError, ContractError, DomainError
from oscillab.martingale import (
    UNDEFINED,
    Condition,
    MartingaleProcess,
    Verdict,
    belief_process,
    bounded_split_process,
    constant_process,
    doubling_process,
    expectation_trace,
    expected_value,
    induced_measure,
    iter_tree,
    multiplicative_process,
    quotient_martingale,
    round_trip_defects,
    verify_martingale,
)
from oscillab.measure import bernoulli_measure


class DriftingProcess(MartingaleProcess):
    """X(ua) = X(u) + 1: a submartingale, never a martingale."""

    name = "drifting"

    def initial_state(self):
        return 0.0

    def step(self, state, probs, symbol):
        return state + 1.0, state + 1.0

    def value(self, state):
        return state


class TestQuotientMartingale:
    """Tests for X = Q/P"""

    def test_remark_values(self, third, two_thirds):
        """Q = Bernoulli(1/3) over P = Bernoulli(2/3) doubles on 0 and halves on 1"""
        x = quotient_martingale(third, two_thirds)
        assert x.value_at(two_thirds, "") == 1.0
        assert x.value_at(two_thirds, "0") == pytest.approx(2.0, abs=1e-15)
        assert x.value_at(two_thirds, "1") == pytest.approx(0.5, abs=1e-15)

    def test_matches_ratio_of_cylinders(self, third, two_thirds):
        """Incremental ratios equal Q(Γ_u)/P(Γ_u)"""
        x = quotient_martingale(third, two_thirds)
        for u in ("0110", "111", "000100"):
            expected = third.cylinder_prob(u) / two_thirds.cylinder_prob(u)
            assert x.value_at(two_thirds, u) == pytest.approx(expected, rel=1e-12)

    def test_is_martingale(self, third, two_thirds):
        """Q/P passes the exact check"""
        report = verify_martingale(quotient_martingale(third, two_thirds), two_thirds, 10, 1e-12)
        assert report.passed

    def test_absolute_continuity_violation(self, fair_coin):
        """Q puts mass where P has none"""
        p = bernoulli_measure(0.0)
        x = quotient_martingale(fair_coin, p)
        with pytest.raises(AbsoluteContinuityError) as info:
            x.value_at(p, "1")
        assert info.value.prefix == (1,)
        assert isinstance(info.value, ContractError)

    def test_null_prefix_is_undefined(self, fair_coin):
        """Q and P both null on the prefix: value undefined"""
        p = bernoulli_measure(0.0)
        q = bernoulli_measure(0.0)
        x = quotient_martingale(q, p)
        assert x.value_at(p, "1") is UNDEFINED
        assert x.value_at(p, "10") is UNDEFINED

    def test_alphabet_mismatch(self, fair_coin):
        """Q and P must share an alphabet"""
        from oscillab.measure import categorical_measure
        with pytest.raises(DomainError):
            quotient_martingale(categorical_measure([0.2, 0.3, 0.5]), fair_coin)


class TestInducedMeasure:
    """Tests for q(u) = X(u)·P(Γ_u)"""

    def test_doubling_values(self, two_thirds):
        """The doubling martingale under Bernoulli(2/3) induces Bernoulli(1/3)"""
        q = induced_measure(doubling_process(), two_thirds)
        assert q.cylinder_prob("") == pytest.approx(1.0)
        assert q.cylinder_prob("0") == pytest.approx(2.0 / 3.0, abs=1e-15)
        assert q.cylinder_prob("11") == pytest.approx(1.0 / 9.0, abs=1e-15)

    def test_semimeasure_condition(self, oscillator, third):
        """Σ_a q(ua) = q(u) for the oscillator-induced measure"""
        q = induced_measure(oscillator, third)
        for u in ("", "0", "01", "0010", "111"):
            total = sum(q.cylinder_prob(u + a) for a in "01")
            assert total == pytest.approx(q.cylinder_prob(u), abs=1e-12)

    def test_rejects_non_martingale(self, fair_coin):
        """A process failing the check cannot induce a measure"""
        with pytest.raises(ContractError):
            induced_measure(multiplicative_process((3.0, 0.5)), fair_coin)

    def test_rejects_wrong_start(self, fair_coin):
        """X_0 must be 1"""
        with pytest.raises(ContractError):
            induced_measure(constant_process(2.0), fair_coin)

    def test_round_trip(self, third, two_thirds):
        """quotient(induced(X)) = X and q is additive, to depth 10"""
        report = round_trip_defects(quotient_martingale(third, two_thirds), two_thirds, 10)
        assert report.max_ratio_defect <= 1e-12
        assert report.max_semimeasure_defect <= 1e-12
        assert report.passed()
        assert report.nodes == 2 ** 11 - 1

    def test_round_trip_oscillator(self, oscillator, third):
        """The oscillator survives the round trip as well"""
        report = round_trip_defects(oscillator, third, 10)
        assert report.passed(1e-9)


class TestVerification:
    """Tests for the exact tree check"""

    def test_doubling_martingale(self, two_thirds):
        """×2 / ×½ under Bernoulli(2/3)"""
        report = verify_martingale(doubling_process(), two_thirds, 6)
        assert report.max_martingale_defect < 1e-12
        assert report.verdict is Verdict.PASS

    def test_constant_process(self, fair_coin):
        """X ≡ 1 has zero defect"""
        report = verify_martingale(constant_process(), fair_coin, 8)
        assert report.max_martingale_defect == 0.0
        assert report.passed

    def test_drifting_process_fails(self, fair_coin):
        """Expectation exceeds X(u) by 1"""
        report = verify_martingale(DriftingProcess(), fair_coin, 2)
        assert report.max_martingale_defect == pytest.approx(1.0)
        assert report.verdict is Verdict.FAIL

    def test_drifting_is_submartingale(self, fair_coin):
        """The submartingale condition only bounds from one side"""
        report = verify_martingale(DriftingProcess(), fair_coin, 3, condition=Condition.SUBMARTINGALE)
        assert report.passed
        report = verify_martingale(DriftingProcess(), fair_coin, 3, condition=Condition.SUPERMARTINGALE)
        assert not report.passed

    def test_report_dict(self, fair_coin):
        """Report keys are fixed"""
        report = verify_martingale(constant_process(), fair_coin, 2)
        assert set(report.to_dict()) == {"depth", "max_defect", "expectation_defect", "min_value", "verdict"}

    def test_bounded_split_under_fair_coin(self, fair_coin):
        """X ± min{X, 1 − X}/2 is a [0,1] martingale under the fair coin"""
        report = verify_martingale(bounded_split_process(), fair_coin, 10)
        assert report.passed
        assert report.min_value >= 0.0


class TestExpectations:
    """Tests for exact expectations"""

    def test_oscillator_expectation(self, oscillator, third):
        """E[X_10] = 1 for the oscillator"""
        assert expected_value(oscillator, third, 10) == pytest.approx(1.0, abs=1e-9)

    def test_constant(self, fair_coin):
        """E[X_t] of X ≡ 1 is 1 exactly"""
        assert expected_value(constant_process(), fair_coin, 5) == 1.0

    def test_doubling(self, two_thirds):
        """E[X_7] = 1 for the doubling martingale"""
        assert expected_value(doubling_process(), two_thirds, 7) == pytest.approx(1.0, abs=1e-12)

    def test_trace_length(self, fair_coin):
        """The trace covers t = 0..horizon"""
        assert len(expectation_trace(constant_process(), fair_coin, 4)) == 5

    def test_tree_probabilities_sum_to_one(self, third):
        """Leaf probabilities at full depth sum to 1"""
        total = sum(node.prob for node in iter_tree(doubling_process(), third, 6) if len(node.prefix) == 6)
        assert total == pytest.approx(1.0, abs=1e-12)


class TestBeliefProcess:
    """Tests for the posterior of a hypothesis under the Bayes mixture"""

    def test_starts_at_prior(self, third, two_thirds):
        """X_0 is the prior weight"""
        process, _ = belief_process(third, two_thirds, 0.3)
        assert process.initial_value == pytest.approx(0.3)
        assert process.name == "belief"

    def test_martingale_under_mixture(self, third, two_thirds):
        """The posterior is a martingale under the mixture it came from"""
        process, mixture = belief_process(third, two_thirds, 0.5)
        report = verify_martingale(process, mixture, 8)
        assert report.passed
        assert 0.0 <= report.min_value

    def test_matches_bayes_rule(self, third, two_thirds):
        """Posterior after u equals w·H(u)/(w·H(u) + (1 − w)·A(u))"""
        process, mixture = belief_process(third, two_thirds, 0.5)
        u = "0101100"
        h = third.cylinder_prob(u)
        a = two_thirds.cylinder_prob(u)
        assert process.value_at(mixture, u) == pytest.approx(0.5 * h / (0.5 * h + 0.5 * a), rel=1e-12)

    def test_prior_domain(self, third, two_thirds):
        """Degenerate priors are rejected"""
        with pytest.raises(DomainError):
            belief_process(third, two_thirds, 1.0)

    def test_constant_process_domain(self):
        """Negative constants are not nonnegative martingales"""
        with pytest.raises(DomainError):
            constant_process(-1.0)
        assert math.isfinite(constant_process(0.0).initial_value)
