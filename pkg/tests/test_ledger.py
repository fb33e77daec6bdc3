import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qledger.errors import InvalidArgumentError
from qledger.ledger import CostLedger, scaling_fit


def test_empty():
    led = CostLedger()
    assert (led.multiply_adds, led.gate_count, led.oracle_calls) == (0, 0, 0)


def test_record_and_subtally():
    led = CostLedger()
    led.record("a", multiply_adds=4)
    assert led.multiply_adds == 4
    led.record("a", multiply_adds=3, gates=2)
    assert led.phases["a"].multiply_adds == 7
    assert led.phases["a"].gate_count == 2


def test_negative_rejected():
    with pytest.raises(InvalidArgumentError):
        CostLedger().record("a", multiply_adds=-1)


increments = st.lists(st.tuples(st.sampled_from("abc"), st.integers(0, 10**6), st.integers(0, 50),
                                st.integers(0, 3)), max_size=30)


@given(increments)
def test_subtallies_sum_to_totals(incs):
    led = CostLedger()
    last = (0, 0, 0)
    for phase, m, g, o in incs:
        led.record(phase, m, g, o)
        now = (led.multiply_adds, led.gate_count, led.oracle_calls)
        assert all(x >= y for x, y in zip(now, last))
        last = now
    assert sum(t.multiply_adds for t in led.phases.values()) == led.multiply_adds
    assert sum(t.gate_count for t in led.phases.values()) == led.gate_count
    assert sum(t.oracle_calls for t in led.phases.values()) == led.oracle_calls
    assert CostLedger.from_dict(led.to_dict()).to_dict() == led.to_dict()


@given(increments, increments, increments)
def test_merge_is_associative(x, y, z):
    def build(incs):
        led = CostLedger()
        for inc in incs:
            led.record(*inc)
        return led
    a, b, c = build(x), build(y), build(z)
    assert a.merge(b).merge(c).to_dict() == a.merge(b.merge(c)).to_dict()


def test_from_dict_rejects_inconsistent():
    d = CostLedger().record("a", 3).to_dict()
    d["multiply_adds"] = 4
    with pytest.raises(InvalidArgumentError):
        CostLedger.from_dict(d)


class TestScalingFit:
    def test_dense_exponential_slope(self):
        rep = scaling_fit([(4, 256), (6, 4096), (8, 65536)])
        assert rep.fitted_exponent == pytest.approx(2.0, abs=1e-12)
        assert rep.residual == pytest.approx(0.0, abs=1e-12)
        assert rep.preferred_model == "exponential"

    def test_qft_polynomial_slope(self):
        rep = scaling_fit([(4, 10), (6, 21), (8, 36)])
        assert abs(rep.poly_exponent - 2) / 2 < 0.15
        # least-squares slope of log2 count on log2 n, by hand
        xs = [math.log2(n) for n in (4, 6, 8)]
        ys = [math.log2(c) for c in (10, 21, 36)]
        mx, my = sum(xs) / 3, sum(ys) / 3
        slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)
        assert rep.poly_exponent == pytest.approx(slope, abs=1e-12)

    def test_constant(self):
        rep = scaling_fit([(3, 7), (5, 7), (9, 7)])
        assert rep.fitted_exponent == pytest.approx(0.0, abs=1e-12)
        assert rep.poly_exponent == pytest.approx(0.0, abs=1e-12)

    def test_needs_three_points(self):
        with pytest.raises(InvalidArgumentError):
            scaling_fit([(1, 2), (2, 4)])
        with pytest.raises(InvalidArgumentError):
            scaling_fit([(1, 2), (2, 0), (3, 1)])
