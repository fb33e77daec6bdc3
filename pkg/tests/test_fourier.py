import cmath

import numpy as np
import pytest

from qledger.errors import CapacityError, InvalidArgumentError
from qledger.fourier import (
    CONVENTION, dft_direct, dft_matrix, fft, inverse_qft_apply, qft_apply, qft_circuit,
)
from qledger.gates import H, ControlledGate
from qledger.ledger import CostLedger, fft_cost, qft_gate_count, scaling_fit
from qledger.state import basis_state, random_state


def brute_dft(v):
    N = len(v)
    return [sum(cmath.exp(2j * cmath.pi * i * j / N) * v[i] for i in range(N)) / N**0.5 for j in range(N)]


def test_convention():
    assert CONVENTION.to_dict() == {"root_sign": 1, "normalization": "1/sqrt(N)"}


class TestDftDirect:
    def test_e0(self):
        np.testing.assert_allclose(dft_direct([1, 0, 0, 0]), [0.5] * 4, atol=1e-15)

    def test_e1(self):
        # brute_dft([0, 1, 0, 0]) = (1/2)(1, i, -1, -i)
        np.testing.assert_allclose(brute_dft([0, 1, 0, 0]), [0.5, 0.5j, -0.5, -0.5j], atol=1e-15)
        np.testing.assert_allclose(dft_direct([0, 1, 0, 0]), [0.5, 0.5j, -0.5, -0.5j], atol=1e-15)

    def test_n2_is_hadamard(self):
        np.testing.assert_allclose(dft_matrix(2), H.entries, atol=1e-15)
        for e in np.eye(2):
            np.testing.assert_allclose(dft_direct(e), H.entries @ e, atol=1e-15)

    def test_against_brute_force(self):
        v = random_state(5, 1).amplitudes
        np.testing.assert_allclose(dft_direct(v), brute_dft(list(v)), atol=1e-12)

    def test_not_power_of_two(self):
        with pytest.raises(InvalidArgumentError):
            dft_direct(np.ones(6))
        with pytest.raises(InvalidArgumentError):
            fft(np.ones(12))

    @pytest.mark.parametrize("n", [0, 3, 8, 11])
    def test_count_and_norm(self, n):
        led = CostLedger()
        v = np.random.default_rng(n).standard_normal(2**n) + 0j
        w = dft_direct(v, led)
        assert led.multiply_adds == 4**n
        assert np.linalg.norm(w) == pytest.approx(np.linalg.norm(v), abs=1e-9)


class TestFFT:
    def test_matches_direct(self):
        gen = np.random.default_rng(2)
        worst = 0.0
        for _ in range(100):
            n = int(gen.integers(0, 11))
            v = gen.standard_normal(2**n) + 1j * gen.standard_normal(2**n)
            worst = max(worst, float(np.max(np.abs(fft(v) - dft_direct(v)))))
        assert worst < 1e-9

    def test_n1_identity(self):
        led = CostLedger()
        np.testing.assert_array_equal(fft([3 + 1j], led), [3 + 1j])
        assert led.multiply_adds == 0

    @pytest.mark.parametrize("n", range(0, 13))
    def test_exact_count(self, n):
        led = CostLedger()
        fft(np.ones(2**n), led)
        # n stages x 2^(n-1) butterflies x 4 multiply-adds
        assert led.multiply_adds == n * 2 ** (n - 1) * 4 == fft_cost(n)

    def test_count_ratio(self):
        assert fft_cost(10) / fft_cost(9) == pytest.approx(2 * 10 / 9, rel=0.05)
        assert fft_cost(10) * 9 == fft_cost(9) * 2 * 10


def standard_qft_gate_count(n):
    """Enumerate the schoolbook decomposition: one H per qubit, one controlled phase per pair."""
    return sum(1 for _ in range(n)) + sum(1 for j in range(n) for k in range(j + 1, n))


class TestQFTCircuit:
    @pytest.mark.parametrize("n, count", [(1, 1), (3, 6), (5, 15)])
    def test_gate_counts(self, n, count):
        circ = qft_circuit(n)
        assert len(circ) == count == standard_qft_gate_count(n) == qft_gate_count(n)
        assert circ.reversed_output

    def test_n1_is_hadamard(self):
        (gate, target), = qft_circuit(1)
        assert gate is H and target == 1

    def test_composition(self):
        circ = qft_circuit(4)
        assert circ.counts() == {"hadamard": 4, "controlled_phase": 6}
        phases = sorted(np.angle(g.gate.entries[1, 1]) for g in circ if isinstance(g, ControlledGate))
        np.testing.assert_allclose(phases, sorted(2 * np.pi / 2 ** (k - j + 1)
                                                  for j in range(1, 5) for k in range(j + 1, 5)))

    def test_capacity(self):
        with pytest.raises(CapacityError):
            qft_circuit(25)


class TestQFTApply:
    def test_zero_to_uniform(self):
        np.testing.assert_allclose(qft_apply(basis_state(3, [0, 0, 0])).amplitudes, [8**-0.5] * 8, atol=1e-15)

    @pytest.mark.parametrize("n", range(1, 11))
    def test_matches_dft(self, n):
        gen = np.random.default_rng(100 + n)
        worst = 0.0
        for _ in range(100):
            psi = random_state(n, gen)
            worst = max(worst, float(np.max(np.abs(qft_apply(psi).amplitudes - dft_direct(psi.amplitudes)))))
        assert worst < 1e-9

    def test_n8_counts(self):
        led, dled = CostLedger(), CostLedger()
        psi = random_state(8, 0)
        qft_apply(psi, led)
        dft_direct(psi.amplitudes, dled)
        assert led.gate_count == 36
        assert dled.multiply_adds == 65536

    def test_inverse(self):
        gen = np.random.default_rng(9)
        for n in range(1, 9):
            psi = random_state(n, gen)
            led = CostLedger()
            back = inverse_qft_apply(qft_apply(psi, led), led)
            np.testing.assert_allclose(back.amplitudes, psi.amplitudes, atol=1e-9)
            assert led.gate_count == 2 * qft_gate_count(n)
            np.testing.assert_allclose(qft_apply(inverse_qft_apply(psi)).amplitudes, psi.amplitudes, atol=1e-9)


def test_cost_hierarchy():
    for n in range(4, 11):
        psi = random_state(n, n)
        d, f, q = CostLedger(), CostLedger(), CostLedger()
        dft_direct(psi.amplitudes, d)
        fft(psi.amplitudes, f)
        qft_apply(psi, q)
        assert d.multiply_adds == 4**n
        assert f.multiply_adds == fft_cost(n)
        assert q.gate_count == n * (n + 1) // 2
        assert d.multiply_adds > f.multiply_adds > q.gate_count


def test_dft_loglog_slope():
    pts = []
    for n in range(6, 13):
        led = CostLedger()
        dft_direct(np.ones(2**n), led)
        pts.append((n, led.multiply_adds))
    # slope of log2(count) in n is 2, i.e. 2*ln 2 in natural-log units
    assert scaling_fit(pts).fitted_exponent * np.log(2) == pytest.approx(2 * np.log(2), rel=0.02)
