"""Reversible oracles for Boolean functions and evaluation by quantum parallelism."""
from __future__ import annotations

from dataclasses import dataclass
from os import PathLike
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError
from .gates import H, apply_single
from .ledger import CostLedger, record
from .state import QuantumState, check_capacity, zero_state

ORACLE_ARITY_CAP = 16


@dataclass(frozen=True)
class TruthTable:
    """f: B^n -> B as 2^n output bits, indexed by the input read as a binary number."""

    arity: int
    values: tuple[int, ...]

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if not 1 <= self.arity <= ORACLE_ARITY_CAP:
            raise InvalidArgumentError(f"arity must be in 1..{ORACLE_ARITY_CAP}, got {self.arity}")
        if len(values) != 2**self.arity:
            raise InvalidArgumentError(f"{len(values)} entries for arity {self.arity}")
        if any(v not in (0, 1) for v in values):
            raise InvalidArgumentError("truth-table entries must be 0 or 1")

    @classmethod
    def from_values(cls, values: Sequence[int]) -> "TruthTable":
        n = len(values).bit_length() - 1
        if len(values) < 2 or 2**n != len(values):
            raise InvalidArgumentError(f"table length {len(values)} is not 2^n with n >= 1")
        return cls(n, tuple(values))

    @classmethod
    def parse(cls, text: str) -> "TruthTable":
        line = text.strip()
        if not line or "\n" in line or set(line) - {"0", "1"}:
            raise InvalidArgumentError("truth table must be one line of 0/1 characters")
        return cls.from_values([int(c) for c in line])

    def is_constant(self) -> bool:
        return len(set(self.values)) == 1

    def __str__(self) -> str:
        return "".join(map(str, self.values))


def load_truth_table(path: str | PathLike) -> TruthTable:
    with open(path, encoding="ascii") as fh:
        return TruthTable.parse(fh.read())


@dataclass(frozen=True, eq=False)
class Oracle:
    """U_f on n+1 qubits: |i>|b> -> |i>|b XOR f(i)>, output bit is the last qubit.

    ``permutation[k]`` is the basis index that basis state ``k`` is sent to.
    """

    table: TruthTable
    permutation: np.ndarray

    @property
    def width(self) -> int:
        return self.table.arity + 1


def table_permutation(values: Sequence[int], out_bits: int) -> np.ndarray:
    """Basis permutation |x>|y> -> |x>|y XOR values[x]> with a ``out_bits``-wide output register."""
    f = np.asarray(values, dtype=np.int64)
    if f.size and (f.min() < 0 or f.max() >= 2**out_bits):
        raise InvalidArgumentError(f"table values do not fit in {out_bits} output bits")
    k = np.arange(f.size << out_bits, dtype=np.int64)
    perm = k ^ f[k >> out_bits]
    perm.flags.writeable = False
    return perm


def build_oracle(table: TruthTable) -> Oracle:
    if not isinstance(table, TruthTable):
        raise InvalidArgumentError("build_oracle expects a TruthTable")
    return Oracle(table, table_permutation(table.values, 1))


def apply_permutation(state: QuantumState, permutation: np.ndarray,
                      ledger: CostLedger | None = None) -> QuantumState:
    """One oracle call: amplitude of basis state k moves to ``permutation[k]``."""
    if permutation.shape[0] != state.dim:
        raise InvalidArgumentError(f"oracle of dimension {permutation.shape[0]} on a state of dimension {state.dim}")
    out = np.empty_like(state.amplitudes)
    out[permutation] = state.amplitudes
    record(ledger, "oracle", oracles=1)
    return QuantumState(state.num_qubits, out)


def apply_oracle(state: QuantumState, oracle: Oracle, ledger: CostLedger | None = None) -> QuantumState:
    if state.num_qubits != oracle.width:
        raise InvalidArgumentError(f"oracle of width {oracle.width} on {state.num_qubits} qubits")
    return apply_permutation(state, oracle.permutation, ledger)


def uniform_superposition(n: int, ledger: CostLedger | None = None) -> QuantumState:
    """H on each of n qubits of |0...0>: n gates, amplitudes 2^(-n/2)."""
    check_capacity(n)
    psi = zero_state(n)
    for q in range(1, n + 1):
        psi = apply_single(psi, H, q, ledger, phase="superpose")
    return psi


def parallel_evaluate(oracle: Oracle, ledger: CostLedger | None = None) -> QuantumState:
    """2^(-n/2) sum_i |i>|f(i)> from n Hadamards and a single oracle call."""
    n = oracle.table.arity
    check_capacity(n + 1)
    psi = zero_state(n + 1)
    for q in range(1, n + 1):
        psi = apply_single(psi, H, q, ledger, phase="superpose")
    return apply_oracle(psi, oracle, ledger)
