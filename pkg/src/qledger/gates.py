"""Three engines for applying unitaries, each crediting a cost ledger.

``apply_single``/``apply_controlled`` sweep amplitude pairs (the quantum-gate
view), ``apply_factored`` chains one sweep per factor of a tensor-product
operator, and ``apply_dense`` multiplies by the full 2^n x 2^n matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapacityError, InvalidArgumentError
from .ledger import MADDS_PER_PAIR, CostLedger, record
from .state import ALGEBRA_TOL, QuantumState, as_rng

KRON_CAP = 12
DENSE_UNITARY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class OneQubitGate:
    entries: np.ndarray
    name: str = "U"

    def __post_init__(self):
        u = np.array(self.entries, dtype=np.complex128)
        if u.shape != (2, 2):
            raise InvalidArgumentError(f"one-qubit gate must be 2x2, got {u.shape}")
        if np.max(np.abs(u @ u.conj().T - np.eye(2))) > ALGEBRA_TOL:
            raise InvalidArgumentError(f"gate {self.name} is not unitary")
        u.flags.writeable = False
        object.__setattr__(self, "entries", u)

    def dagger(self) -> "OneQubitGate":
        return OneQubitGate(self.entries.conj().T, self.name + "^dg")


_S = 1 / np.sqrt(2)
I = OneQubitGate(np.eye(2), "I")
H = OneQubitGate([[_S, _S], [_S, -_S]], "H")
X = OneQubitGate([[0, 1], [1, 0]], "X")
Y = OneQubitGate([[0, -1j], [1j, 0]], "Y")
Z = OneQubitGate([[1, 0], [0, -1]], "Z")


def phase(theta: float) -> OneQubitGate:
    """diag(1, e^{i theta})."""
    return OneQubitGate([[1, 0], [0, np.exp(1j * theta)]], f"P({theta:.6g})")


def random_gate(seed) -> OneQubitGate:
    """Haar-random 2x2 unitary (QR of a complex Gaussian with phase fix)."""
    rng = as_rng(seed)
    z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return OneQubitGate(q * (d / np.abs(d)), "rand")


@dataclass(frozen=True)
class ControlledGate:
    control: int
    target: int
    gate: OneQubitGate

    def __post_init__(self):
        if self.control == self.target:
            raise InvalidArgumentError(f"control and target are both qubit {self.control}")


@dataclass(frozen=True)
class FactoredOperator:
    """S1 ⊗ S2 ⊗ ... ⊗ Sn, factor k acting on qubit k."""

    factors: tuple[OneQubitGate, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise InvalidArgumentError("factored operator needs at least one factor")

    @property
    def num_qubits(self) -> int:
        return len(self.factors)


def random_factored(n: int, seed) -> FactoredOperator:
    rng = as_rng(seed)
    return FactoredOperator(tuple(random_gate(rng) for _ in range(n)))


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """Full 2^n x 2^n matrix. ``check_unitary=False`` admits arbitrary M for cost runs."""

    entries: np.ndarray
    check_unitary: bool = True

    def __post_init__(self):
        m = np.array(self.entries, dtype=np.complex128)
        d = m.shape[0]
        if m.ndim != 2 or m.shape[1] != d or d < 2 or d & (d - 1):
            raise InvalidArgumentError(f"dense operator must be square with power-of-2 size, got {m.shape}")
        if self.check_unitary and np.max(np.abs(m @ m.conj().T - np.eye(d))) > DENSE_UNITARY_TOL:
            raise InvalidArgumentError("dense operator is not unitary")
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def _check_target(n: int, q: int) -> None:
    if not 1 <= q <= n:
        raise InvalidArgumentError(f"qubit {q} out of range 1..{n}")


def _pair_sweep(psi: np.ndarray, u: np.ndarray, lo: tuple, hi: tuple) -> None:
    """In place: (psi[lo], psi[hi]) <- u @ (psi[lo], psi[hi]) for every pair."""
    a0 = psi[lo].copy()
    a1 = psi[hi]
    psi[lo] = u[0, 0] * a0 + u[0, 1] * a1
    psi[hi] = u[1, 0] * a0 + u[1, 1] * a1


def _sweep_single(amps: np.ndarray, n: int, u: np.ndarray, target: int) -> np.ndarray:
    # Pairs differ only in the target bit: stride 2^(n-target) apart.
    psi = np.array(amps).reshape(2 ** (target - 1), 2, 2 ** (n - target))
    _pair_sweep(psi, u, (slice(None), 0), (slice(None), 1))
    return psi.reshape(-1)


def apply_single(state: QuantumState, gate: OneQubitGate, target: int,
                 ledger: CostLedger | None = None, phase: str = "single") -> QuantumState:
    n = state.num_qubits
    _check_target(n, target)
    out = _sweep_single(state.amplitudes, n, gate.entries, target)
    record(ledger, phase, multiply_adds=MADDS_PER_PAIR * 2 ** (n - 1), gates=1)
    return QuantumState(n, out)


def apply_controlled(state: QuantumState, cg: ControlledGate,
                     ledger: CostLedger | None = None, phase: str = "controlled") -> QuantumState:
    n = state.num_qubits
    _check_target(n, cg.control)
    _check_target(n, cg.target)
    psi = np.array(state.amplitudes).reshape((2,) * n)
    lo = [slice(None)] * n
    lo[cg.control - 1] = 1
    hi = list(lo)
    lo[cg.target - 1] = 0
    hi[cg.target - 1] = 1
    _pair_sweep(psi, cg.gate.entries, tuple(lo), tuple(hi))
    record(ledger, phase, multiply_adds=MADDS_PER_PAIR * 2 ** (n - 2), gates=1)
    return QuantumState(n, psi.reshape(-1))


def apply_factored(state: QuantumState, op: FactoredOperator,
                   ledger: CostLedger | None = None) -> QuantumState:
    """Apply each factor once to its own qubit: n sweeps of 2^(n-1) pairs."""
    n = state.num_qubits
    if op.num_qubits != n:
        raise InvalidArgumentError(f"{op.num_qubits} factors for a {n}-qubit state")
    out = state
    for k, factor in enumerate(op.factors, start=1):
        out = apply_single(out, factor, k, ledger, phase="factored")
    return out


def apply_dense(state: QuantumState, op: DenseOperator,
                ledger: CostLedger | None = None) -> QuantumState:
    if op.dim != state.dim:
        raise InvalidArgumentError(f"operator of size {op.dim} on a state of dimension {state.dim}")
    w = op.entries @ state.amplitudes
    record(ledger, "dense", multiply_adds=op.dim * op.dim)
    return QuantumState(state.num_qubits, w)


def kron_expand(op: FactoredOperator) -> DenseOperator:
    if op.num_qubits > KRON_CAP:
        raise CapacityError(f"kron_expand limited to {KRON_CAP} factors, got {op.num_qubits}")
    m = np.ones((1, 1), dtype=np.complex128)
    for factor in op.factors:
        m = np.kron(m, factor.entries)
    # Factors are unitary already; skip the O(8^n) product check.
    return DenseOperator(m, check_unitary=False)


def apply_circuit(state: QuantumState, instructions: Sequence, ledger: CostLedger | None = None,
                  phase: str = "circuit") -> QuantumState:
    """Run ``(gate, target)`` pairs and :class:`ControlledGate` items in order.

    Same sweeps and ledger credits as calling :func:`apply_single` and
    :func:`apply_controlled` one by one, but on a single working buffer.
    """
    n = state.num_qubits
    psi = np.array(state.amplitudes).reshape((2,) * n)
    singles = controlled = 0
    for item in instructions:
        if isinstance(item, ControlledGate):
            _check_target(n, item.control)
            _check_target(n, item.target)
            lo = [slice(None)] * n
            lo[item.control - 1] = 1
            hi = list(lo)
            lo[item.target - 1], hi[item.target - 1] = 0, 1
            _pair_sweep(psi, item.gate.entries, tuple(lo), tuple(hi))
            controlled += 1
        else:
            gate, target = item
            _check_target(n, target)
            lo = [slice(None)] * n
            hi = list(lo)
            lo[target - 1], hi[target - 1] = 0, 1
            _pair_sweep(psi, gate.entries, tuple(lo), tuple(hi))
            singles += 1
    madds = MADDS_PER_PAIR * (singles * 2 ** (n - 1) + (controlled * 2 ** (n - 2) if controlled else 0))
    record(ledger, phase, multiply_adds=madds, gates=singles + controlled)
    return QuantumState(n, psi.reshape(-1))
