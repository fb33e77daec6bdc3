import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from qledger.errors import ExtractionFailure, InvalidArgumentError
from qledger.ledger import CostLedger
from qledger.period import (
    PeriodicFunctionSpec, continued_fraction_period, estimate_period, factor_demo, modexp_table,
    multiplicative_order, post_qft_distribution, prepare_period_state, run_period_trial,
)
from qledger.state import schmidt_rank


def brute_order(a, N):
    return next(k for k in range(1, N + 1) if pow(a, k, N) == 1)


def brute_distribution(a, N, n):
    """P(j) = sum_y P(y) |sum_{x: a^x=y} w^{xj}|^2 / (|S_y| q), evaluated term by term."""
    q = 2**n
    combs = {}
    for x in range(q):
        combs.setdefault(pow(a, x, N), []).append(x)
    dist = [0.0] * q
    for xs in combs.values():
        weight = len(xs) / q
        for j in range(q):
            amp = sum(cmath.exp(2j * cmath.pi * x * j / q) for x in xs)
            dist[j] += weight * abs(amp) ** 2 / (len(xs) * q)
    return np.array(dist)


def brute_smallest_denominator(sample, q, r_max):
    """Smallest d <= r_max such that some c/d (c >= 1) lies within 1/(2q) of sample/q."""
    x = Fraction(sample, q)
    for d in range(1, r_max + 1):
        for c in range(1, d + 1):
            if abs(x - Fraction(c, d)) <= Fraction(1, 2 * q):
                return d
    return None


def coprime_pairs(N):
    return [a for a in range(1, N) if math.gcd(a, N) == 1]


class TestSpec:
    def test_default_register(self):
        spec = PeriodicFunctionSpec(15, 7)
        assert (spec.input_bits, spec.output_bits, spec.q) == (8, 4, 256)
        assert PeriodicFunctionSpec(21, 2).input_bits == 9
        assert PeriodicFunctionSpec(35, 2).input_bits == 11

    def test_rejects_shared_factor(self):
        with pytest.raises(InvalidArgumentError):
            PeriodicFunctionSpec(15, 6)

    def test_rejects_small_register(self):
        with pytest.raises(InvalidArgumentError):
            PeriodicFunctionSpec(15, 7, input_bits=7)


class TestModexpTable:
    def test_seven_mod_fifteen(self):
        table = modexp_table(PeriodicFunctionSpec(15, 7))
        assert list(table[:5]) == [1, 7, 4, 13, 1]
        assert list(table) == [pow(7, x, 15) for x in range(256)]

    def test_base_one(self):
        assert set(modexp_table(PeriodicFunctionSpec(15, 1))) == {1}

    def test_two_mod_fifteen(self):
        table = modexp_table(PeriodicFunctionSpec(15, 2))
        assert list(table[:5]) == [1, 2, 4, 8, 1]
        assert brute_order(2, 15) == multiplicative_order(2, 15) == 4


class TestTrial:
    def test_seven_fifteen_concentrates(self):
        spec = PeriodicFunctionSpec(15, 7)
        dist = post_qft_distribution(spec)
        np.testing.assert_allclose(dist, brute_distribution(7, 15, 8), atol=1e-12)
        assert dist[[0, 64, 128, 192]].sum() > 0.9
        samples = [run_period_trial(spec, s) for s in range(200)]
        assert set(samples) <= {0, 64, 128, 192}

    def test_period_one_gives_zero(self):
        spec = PeriodicFunctionSpec(15, 1)
        assert post_qft_distribution(spec)[0] == pytest.approx(1.0, abs=1e-12)
        assert {run_period_trial(spec, s) for s in range(20)} == {0}

    def test_seed_determinism(self):
        spec = PeriodicFunctionSpec(21, 2)
        assert [run_period_trial(spec, s) for s in range(30)] == [run_period_trial(spec, s) for s in range(30)]

    @pytest.mark.parametrize("a", coprime_pairs(15))
    def test_prepared_state_rank_is_period(self, a):
        spec = PeriodicFunctionSpec(15, a)
        psi = prepare_period_state(spec)
        n, m = spec.input_bits, spec.output_bits
        distinct = len({pow(a, x, 15) for x in range(spec.q)})
        assert schmidt_rank(psi, (range(1, n + 1), range(n + 1, n + m + 1))) == distinct == brute_order(a, 15)

    @pytest.mark.parametrize("N, a", [(15, 7), (21, 2), (15, 1), (33, 5)])
    def test_ledger(self, N, a):
        spec = PeriodicFunctionSpec(N, a)
        led = CostLedger()
        run_period_trial(spec, 0, led)
        n = spec.input_bits
        assert led.gate_count == n + n * (n + 1) // 2
        assert led.oracle_calls == 1
        assert led.phases["qft"].gate_count == n * (n + 1) // 2

    @pytest.mark.parametrize("N", [15, 21])
    def test_peaks_carry_mass(self, N):
        for a in coprime_pairs(N):
            spec = PeriodicFunctionSpec(N, a)
            r, q = brute_order(a, N), spec.q
            dist = post_qft_distribution(spec)
            for k in range(r):
                near = [j for j in range(q) if abs(j - k * q / r) <= 0.5]
                assert dist[near].sum() > 0.4 / r


class TestContinuedFraction:
    def test_examples(self):
        assert continued_fraction_period(192, 256, 15) == 4
        assert continued_fraction_period(0, 256, 15) is None
        assert continued_fraction_period(128, 256, 15) == 2

    @pytest.mark.parametrize("q, r_max", [(256, 15), (512, 21)])
    def test_matches_brute_search(self, q, r_max):
        for s in range(1, q):
            assert continued_fraction_period(s, q, r_max) == brute_smallest_denominator(s, q, r_max)

    def test_out_of_range(self):
        assert continued_fraction_period(300, 256, 15) is None


class TestEstimatePeriod:
    def test_seven_fifteen(self):
        est = estimate_period(PeriodicFunctionSpec(15, 7, 8), 20, 0)
        assert est.period == 4 == brute_order(7, 15)
        assert 0 <= est.confidence <= 1 and est.trials == 20

    def test_two_twenty_one(self):
        assert estimate_period(PeriodicFunctionSpec(21, 2, 9), 20, 0).period == 6 == brute_order(2, 21)

    def test_base_one(self):
        est = estimate_period(PeriodicFunctionSpec(15, 1), 5, 0)
        assert est.period == 1 and est.confidence == 1.0

    def test_trials_positive(self):
        with pytest.raises(InvalidArgumentError):
            estimate_period(PeriodicFunctionSpec(15, 7), 0, 0)

    def test_failure_is_reported(self):
        # a single trial of a period-4 function lands on 0 or 128 with probability 1/2
        spec = PeriodicFunctionSpec(15, 7)
        failures = 0
        for seed in range(20):
            try:
                assert estimate_period(spec, 1, seed).period == 4
            except ExtractionFailure:
                failures += 1
        assert 0 < failures < 20

    def test_ledger_sums_trials(self):
        spec = PeriodicFunctionSpec(15, 7)
        est = estimate_period(spec, 7, 3)
        assert est.ledger.oracle_calls == 7
        assert est.ledger.gate_count == 7 * (8 + 36)

    def test_every_modulus_up_to_64(self):
        for N in range(2, 65):
            for a in coprime_pairs(N):
                est = estimate_period(PeriodicFunctionSpec(N, a), 20, N * 1000 + a)
                assert est.period == brute_order(a, N), (a, N)

    def test_repetition_success_rate(self):
        gen = np.random.default_rng(64)
        pairs = [(N, a) for N in range(40, 65) for a in coprime_pairs(N)]
        for idx in gen.choice(len(pairs), 4, replace=False):
            N, a = pairs[idx]
            spec = PeriodicFunctionSpec(N, a)
            ok = 0
            for rep in range(100):
                try:
                    ok += estimate_period(spec, 20, rep).period == brute_order(a, N)
                except ExtractionFailure:
                    pass
            assert ok >= 99, (N, a, ok)


class TestFactorDemo:
    def test_fifteen(self):
        assert factor_demo(15, 0).factors == (3, 5)

    def test_twenty_one(self):
        assert factor_demo(21, 0).factors == (3, 7)

    @pytest.mark.parametrize("N", [9, 25, 27, 49, 13, 16, 65])
    def test_rejected(self, N):
        with pytest.raises(InvalidArgumentError):
            factor_demo(N, 0)

    def test_exhaustion_is_not_exceptional(self):
        res = factor_demo(15, 0, trials=1, max_attempts=1)
        assert res.succeeded == (res.factors is not None)
        assert len(res.attempts) == 1
