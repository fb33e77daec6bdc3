"""Amplitude-vector registers, measurement, and entanglement diagnostics.

Basis index ``i`` encodes the bit string ``i_1 ... i_n`` with qubit 1 as the
most significant bit. Qubits are addressed 1..n throughout the package.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, InvalidArgumentError, InvalidStateError

MAX_QUBITS = 24
ALGEBRA_TOL = 1e-10
GUARD_TOL = 1e-8


def as_rng(seed) -> np.random.Generator:
    """Seeded PCG64 generator; a Generator passes through untouched."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def check_capacity(n: int) -> None:
    if n < 1:
        raise InvalidArgumentError(f"register width must be positive, got {n}")
    if n > MAX_QUBITS:
        raise CapacityError(f"{n} qubits exceeds the cap of {MAX_QUBITS}")


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Immutable n-qubit state vector.

    Normalization is not enforced on construction so that cost experiments
    with non-unitary operators can still carry their vectors; operations that
    need a physical state check it with :meth:`require_normalized`.
    """

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        check_capacity(self.num_qubits)
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 2**self.num_qubits:
            raise InvalidArgumentError(
                f"{amps.shape[0]} amplitudes do not match {self.num_qubits} qubits"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes) -> "QuantumState":
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        n = amps.shape[0].bit_length() - 1
        if amps.shape[0] < 2 or 2**n != amps.shape[0]:
            raise InvalidArgumentError(f"length {amps.shape[0]} is not 2^n with n >= 1")
        return cls(n, amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = GUARD_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def require_normalized(self, tol: float = GUARD_TOL) -> None:
        if not self.is_normalized(tol):
            raise InvalidStateError(f"state norm {self.norm():.12g} deviates from 1 by more than {tol}")

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def tensor(self, other: "QuantumState") -> "QuantumState":
        """Return ``self ⊗ other``; ``self`` occupies the leading qubits."""
        return QuantumState(self.num_qubits + other.num_qubits, np.kron(self.amplitudes, other.amplitudes))

    def __repr__(self) -> str:
        return f"QuantumState(num_qubits={self.num_qubits}, amplitudes={self.amplitudes!r})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    dim: int
    entries: np.ndarray

    def __post_init__(self):
        rho = np.array(self.entries, dtype=np.complex128)
        if rho.shape != (self.dim, self.dim):
            raise InvalidArgumentError(f"density matrix shape {rho.shape} is not {self.dim}x{self.dim}")
        if np.max(np.abs(rho - rho.conj().T)) > GUARD_TOL:
            raise InvalidStateError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > GUARD_TOL:
            raise InvalidStateError(f"density matrix trace {np.trace(rho).real:.12g} is not 1")
        rho.flags.writeable = False
        object.__setattr__(self, "entries", rho)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))


@dataclass(frozen=True, eq=False)
class MeasurementOutcome:
    bits: tuple[int, ...]
    probability: float
    post_state: QuantumState


def index_to_bits(index: int, n: int) -> tuple[int, ...]:
    return tuple((index >> (n - 1 - k)) & 1 for k in range(n))


def bits_to_index(bits: Sequence[int]) -> int:
    index = 0
    for b in bits:
        index = (index << 1) | b
    return index


def _check_bits(bits: Sequence[int]) -> tuple[int, ...]:
    bits = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in bits):
        raise InvalidArgumentError(f"bit string {bits} has entries outside {{0, 1}}")
    return bits


def _check_qubits(n: int, qubits: Iterable[int], allow_empty: bool = False) -> tuple[int, ...]:
    qs = tuple(int(q) for q in qubits)
    if not qs and not allow_empty:
        raise InvalidArgumentError("qubit selection is empty")
    if len(set(qs)) != len(qs):
        raise InvalidArgumentError(f"repeated qubit indices in {qs}")
    for q in qs:
        if not 1 <= q <= n:
            raise InvalidArgumentError(f"qubit {q} out of range 1..{n}")
    return qs


def basis_state(n: int, bits: Sequence[int]) -> QuantumState:
    bits = _check_bits(bits)
    if len(bits) != n:
        raise InvalidArgumentError(f"{len(bits)} bits given for {n} qubits")
    check_capacity(n)
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[bits_to_index(bits)] = 1.0
    return QuantumState(n, amps)


def zero_state(n: int) -> QuantumState:
    return basis_state(n, (0,) * n)


def random_state(n: int, seed) -> QuantumState:
    """Haar-random pure state from normalized complex Gaussians."""
    rng = as_rng(seed)
    v = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return QuantumState(n, v / np.linalg.norm(v))


def sample_index(probs: np.ndarray, rng: np.random.Generator) -> int:
    cdf = np.cumsum(probs)
    u = rng.random() * cdf[-1]
    # side="right" never lands on a zero-probability index.
    return int(min(np.searchsorted(cdf, u, side="right"), len(probs) - 1))


def measure_all(state: QuantumState, seed) -> MeasurementOutcome:
    state.require_normalized()
    rng = as_rng(seed)
    probs = state.probabilities()
    idx = sample_index(probs, rng)
    bits = index_to_bits(idx, state.num_qubits)
    return MeasurementOutcome(bits, float(probs[idx]), basis_state(state.num_qubits, bits))


def _as_tensor(state: QuantumState) -> np.ndarray:
    return state.amplitudes.reshape((2,) * state.num_qubits)


def _bipartite_matrix(state: QuantumState, part: Sequence[int]) -> np.ndarray:
    """Amplitudes reshaped to a 2^|part| x 2^(n-|part|) matrix, rows indexed by ``part``."""
    n = state.num_qubits
    rest = [q for q in range(1, n + 1) if q not in part]
    axes = [q - 1 for q in part] + [q - 1 for q in rest]
    return np.transpose(_as_tensor(state), axes).reshape(2 ** len(part), 2 ** len(rest))


def marginal_probabilities(state: QuantumState, qubits: Sequence[int]) -> np.ndarray:
    """Born probabilities of the bit patterns on ``qubits`` (listed order, first = most significant)."""
    qs = _check_qubits(state.num_qubits, qubits)
    m = _bipartite_matrix(state, qs)
    return np.sum(np.abs(m) ** 2, axis=1)


def project(state: QuantumState, qubits: Sequence[int], bits: Sequence[int]) -> tuple[float, QuantumState]:
    """Probability of reading ``bits`` on ``qubits`` and the renormalized collapsed state."""
    qs = _check_qubits(state.num_qubits, qubits)
    bits = _check_bits(bits)
    if len(bits) != len(qs):
        raise InvalidArgumentError("one bit per measured qubit is required")
    psi = np.array(_as_tensor(state))
    mask = np.zeros_like(psi, dtype=bool)
    sel = [slice(None)] * state.num_qubits
    for q, b in zip(qs, bits):
        sel[q - 1] = b
    mask[tuple(sel)] = True
    psi[~mask] = 0.0
    prob = float(np.sum(np.abs(psi) ** 2))
    if prob == 0.0:
        raise InvalidArgumentError(f"outcome {bits} on qubits {qs} has probability zero")
    return prob, QuantumState(state.num_qubits, psi.reshape(-1) / np.sqrt(prob))


def measure_qubits(state: QuantumState, qubits: Sequence[int], seed) -> MeasurementOutcome:
    """Measure a subset of qubits; ``post_state`` is the full collapsed register."""
    state.require_normalized()
    qs = _check_qubits(state.num_qubits, qubits)
    probs = marginal_probabilities(state, qs)
    idx = sample_index(probs, as_rng(seed))
    bits = index_to_bits(idx, len(qs))
    prob, post = project(state, qs, bits)
    return MeasurementOutcome(bits, prob, post)


def residual_state(state: QuantumState, qubits: Sequence[int], bits: Sequence[int]) -> QuantumState:
    """State of the unmeasured qubits given ``bits`` were read on ``qubits``.

    Remaining qubits keep their relative order.
    """
    qs = _check_qubits(state.num_qubits, qubits)
    bits = _check_bits(bits)
    if len(qs) >= state.num_qubits:
        raise InvalidArgumentError("no qubits would remain")
    m = _bipartite_matrix(state, qs)
    row = m[bits_to_index(bits)]
    nrm = np.linalg.norm(row)
    if nrm == 0.0:
        raise InvalidArgumentError(f"outcome {bits} on qubits {qs} has probability zero")
    return QuantumState(state.num_qubits - len(qs), row / nrm)


def reduced_density(state: QuantumState, keep: Iterable[int]) -> DensityMatrix:
    """Partial trace onto ``keep``; kept qubits are ordered by ascending index."""
    qs = tuple(sorted(_check_qubits(state.num_qubits, keep)))
    m = _bipartite_matrix(state, qs)
    return DensityMatrix(2 ** len(qs), m @ m.conj().T)


def _check_cut(n: int, cut) -> tuple[tuple[int, ...], tuple[int, ...]]:
    try:
        left, right = cut
    except (TypeError, ValueError):
        raise InvalidArgumentError("cut must be a pair of qubit sets") from None
    left = tuple(sorted(_check_qubits(n, left)))
    right = tuple(sorted(_check_qubits(n, right)))
    if set(left) & set(right) or len(left) + len(right) != n:
        raise InvalidArgumentError(f"cut {left}|{right} does not partition qubits 1..{n}")
    return left, right


def schmidt_coefficients(state: QuantumState, cut) -> np.ndarray:
    """Singular values of the amplitude matrix reshaped along ``cut``, descending."""
    left, _ = _check_cut(state.num_qubits, cut)
    return np.linalg.svd(_bipartite_matrix(state, left), compute_uv=False)


def schmidt_rank(state: QuantumState, cut, tol: float = ALGEBRA_TOL) -> int:
    if tol <= 0:
        raise InvalidArgumentError("tol must be positive")
    return int(np.sum(schmidt_coefficients(state, cut) > tol))


def inner_product(a: QuantumState, b: QuantumState) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    if a.num_qubits != b.num_qubits:
        raise InvalidArgumentError(f"cannot pair {a.num_qubits}- and {b.num_qubits}-qubit states")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: QuantumState, b: QuantumState) -> float:
    return abs(inner_product(a, b)) ** 2
