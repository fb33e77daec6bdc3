"""Direct DFT, radix-2 FFT and the gate-level QFT, all under one convention.

Convention: w_j = N^(-1/2) sum_i exp(+2 pi i ij/N) v_i, so the N=2 transform
is exactly the Hadamard gate.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidArgumentError
from .gates import H, ControlledGate, apply_circuit, phase
from .ledger import MADDS_PER_PAIR, CostLedger, record
from .state import QuantumState, check_capacity

_DFT_BLOCK_ROWS = 256


@dataclass(frozen=True)
class FourierConvention:
    root_sign: int = +1
    normalization: str = "1/sqrt(N)"

    def to_dict(self) -> dict:
        return {"root_sign": self.root_sign, "normalization": self.normalization}


CONVENTION = FourierConvention()


def _log2_length(v: np.ndarray) -> int:
    N = v.shape[0]
    if v.ndim != 1 or N < 1 or N & (N - 1):
        raise InvalidArgumentError(f"length {N} is not a power of 2")
    return N.bit_length() - 1


def dft_direct(v, ledger: CostLedger | None = None) -> np.ndarray:
    """Row-by-row matrix product with the DFT matrix; N^2 multiply-adds."""
    v = np.asarray(v, dtype=np.complex128)
    _log2_length(v)
    N = v.shape[0]
    roots = np.exp(2j * np.pi * np.arange(N) / N)
    cols = np.arange(N, dtype=np.int64)
    w = np.empty(N, dtype=np.complex128)
    # Blocks of rows keep memory at O(N * block) while the count stays N^2.
    for start in range(0, N, _DFT_BLOCK_ROWS):
        rows = np.arange(start, min(start + _DFT_BLOCK_ROWS, N), dtype=np.int64)
        w[rows] = roots[np.outer(rows, cols) % N] @ v
    record(ledger, "dft", multiply_adds=N * N)
    return w / np.sqrt(N)


def _bit_reverse_permutation(n: int) -> np.ndarray:
    idx = np.arange(2**n, dtype=np.int64)
    rev = np.zeros_like(idx)
    for _ in range(n):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return rev


def fft(v, ledger: CostLedger | None = None) -> np.ndarray:
    """Iterative radix-2 decimation-in-time FFT.

    Each butterfly is the 2x2 map (a, b) -> ((a + t b)/sqrt2, (a - t b)/sqrt2),
    so the 1/sqrt(N) normalization is spread over the n stages and every
    butterfly costs one pair application. Count: n * 2^(n-1) * 4 = 2n * 2^n.
    """
    v = np.asarray(v, dtype=np.complex128)
    n = _log2_length(v)
    N = v.shape[0]
    x = v[_bit_reverse_permutation(n)]
    s2 = 1 / np.sqrt(2)
    for stage in range(1, n + 1):
        half = 2 ** (stage - 1)
        tw = np.exp(2j * np.pi * np.arange(half) / (2 * half))
        blocks = x.reshape(N // (2 * half), 2, half)
        a = blocks[:, 0, :].copy()
        t = tw * blocks[:, 1, :]
        blocks[:, 0, :] = s2 * (a + t)
        blocks[:, 1, :] = s2 * (a - t)
        record(ledger, "fft", multiply_adds=MADDS_PER_PAIR * (N // 2))
    return x


@dataclass(frozen=True)
class QFTCircuit:
    """Gate list for the QFT on n qubits.

    ``instructions`` holds ``(gate, target)`` pairs and :class:`ControlledGate`
    items in execution order. The output qubit order is reversed relative to
    the DFT index; that reversal is a relabeling, not a gate, and ``len()``
    counts gates only.
    """

    num_qubits: int
    instructions: tuple = field(repr=False)
    reversed_output: bool = True
    inverse: bool = False

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)

    @property
    def gate_count(self) -> int:
        return len(self.instructions)

    def counts(self) -> dict[str, int]:
        hadamards = sum(1 for g in self.instructions if not isinstance(g, ControlledGate))
        return {"hadamard": hadamards, "controlled_phase": len(self) - hadamards}


@lru_cache(maxsize=64)
def qft_circuit(n: int, inverse: bool = False) -> QFTCircuit:
    check_capacity(n)
    sign = -1 if inverse else 1
    gates: list = []
    for j in range(1, n + 1):
        gates.append((H, j))
        for k in range(j + 1, n + 1):
            # Controlled-phase is symmetric in its two qubits.
            gates.append(ControlledGate(k, j, phase(sign * 2 * np.pi / 2 ** (k - j + 1))))
    if inverse:
        gates.reverse()
    return QFTCircuit(n, tuple(gates), inverse=inverse)


def _run(state: QuantumState, circuit: QFTCircuit, ledger: CostLedger | None) -> QuantumState:
    return apply_circuit(state, circuit.instructions, ledger, phase="qft")


def _relabel(state: QuantumState) -> QuantumState:
    return QuantumState(state.num_qubits, state.amplitudes[_bit_reverse_permutation(state.num_qubits)])


def qft_apply(state: QuantumState, ledger: CostLedger | None = None) -> QuantumState:
    """QFT by n(n+1)/2 gates; the returned amplitudes equal ``dft_direct`` of the input."""
    return _relabel(_run(state, qft_circuit(state.num_qubits), ledger))


def inverse_qft_apply(state: QuantumState, ledger: CostLedger | None = None) -> QuantumState:
    return _run(_relabel(state), qft_circuit(state.num_qubits, inverse=True), ledger)


def dft_matrix(N: int) -> np.ndarray:
    """Explicit N x N transform matrix, for small-N checks."""
    idx = np.arange(N)
    return np.exp(2j * np.pi * np.outer(idx, idx) / N) / np.sqrt(N)
