"""Order finding for f(x) = a^x mod N on a simulated register, plus a factoring demo.

Pipeline per trial: H on the n input qubits, one table-driven oracle call
writing f(x) into an output register, measure the output register (leaving a
periodic comb on the input), QFT the input register, measure it. Periods are
read off the sample by continued fractions and combined across trials.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ExtractionFailure, InvalidArgumentError
from .fourier import qft_apply
from .gates import H, apply_single
from .ledger import CostLedger
from .oracle import apply_permutation, table_permutation
from .state import QuantumState, as_rng, check_capacity, measure_all, sample_index, zero_state

FACTOR_DEMO_MAX_N = 64


@dataclass(frozen=True)
class PeriodicFunctionSpec:
    """f(x) = base^x mod modulus on ``input_bits`` input qubits (defaults to the smallest n with 2^n >= N^2)."""

    modulus: int
    base: int
    input_bits: int | None = None

    def __post_init__(self):
        N, a = self.modulus, self.base
        if N < 2:
            raise InvalidArgumentError(f"modulus must be at least 2, got {N}")
        if math.gcd(a, N) != 1:
            raise InvalidArgumentError(f"base {a} is not coprime to {N}")
        if self.input_bits is None:
            object.__setattr__(self, "input_bits", max(1, (N * N - 1).bit_length()))
        if 2**self.input_bits < N * N:
            raise InvalidArgumentError(f"2^{self.input_bits} < N^2 = {N * N}")
        check_capacity(self.total_qubits)

    @property
    def output_bits(self) -> int:
        return max(1, (self.modulus - 1).bit_length())

    @property
    def total_qubits(self) -> int:
        return self.input_bits + self.output_bits

    @property
    def q(self) -> int:
        return 2**self.input_bits


@dataclass(frozen=True)
class PeriodEstimate:
    period: int
    confidence: float
    trials: int
    samples: tuple[int, ...] = ()
    candidates: tuple[int | None, ...] = ()
    ledger: CostLedger = field(default_factory=CostLedger, compare=False, repr=False)


def multiplicative_order(a: int, N: int) -> int:
    """Smallest r > 0 with a^r = 1 mod N, by iteration."""
    if math.gcd(a, N) != 1:
        raise InvalidArgumentError(f"{a} has no order modulo {N}")
    r, x = 1, a % N
    while x != 1 % N:
        x = (x * a) % N
        r += 1
    return r


def modexp_table(spec: PeriodicFunctionSpec) -> np.ndarray:
    """table[x] = a^x mod N for x < 2^n by iterated multiplication."""
    N = spec.modulus
    out = np.empty(spec.q, dtype=np.int64)
    x = 1 % N
    for k in range(spec.q):
        out[k] = x
        x = (x * spec.base) % N
    return out


@dataclass(frozen=True, eq=False)
class _Prepared:
    state: QuantumState
    cost: CostLedger
    # amplitudes as a 2^n x 2^m matrix: rows index x, columns index f(x).
    by_output: np.ndarray
    output_probs: np.ndarray


@lru_cache(maxsize=16)
def _prepared(spec: PeriodicFunctionSpec) -> _Prepared:
    ledger = CostLedger()
    n = spec.input_bits
    psi = zero_state(spec.total_qubits)
    for q in range(1, n + 1):
        psi = apply_single(psi, H, q, ledger, phase="superpose")
    psi = apply_permutation(psi, table_permutation(modexp_table(spec), spec.output_bits), ledger)
    by_output = psi.amplitudes.reshape(spec.q, 2**spec.output_bits)
    return _Prepared(psi, ledger, by_output, np.sum(np.abs(by_output) ** 2, axis=0))


def prepare_period_state(spec: PeriodicFunctionSpec, ledger: CostLedger | None = None) -> QuantumState:
    """2^(-n/2) sum_x |x>|a^x mod N>: n Hadamards and one oracle call.

    The state is deterministic, so it is built once per spec; its cost is
    still credited to ``ledger`` on every call.
    """
    prep = _prepared(spec)
    if ledger is not None:
        for name, t in prep.cost.phases.items():
            ledger.record(name, t.multiply_adds, t.gate_count, t.oracle_calls)
    return prep.state


def _collapse_output(spec: PeriodicFunctionSpec, y: int) -> QuantumState:
    """Input-register state after the output register reads y (the periodic comb)."""
    col = _prepared(spec).by_output[:, y]
    return QuantumState(spec.input_bits, col / np.linalg.norm(col))


def run_period_trial(spec: PeriodicFunctionSpec, seed, ledger: CostLedger | None = None) -> int:
    """One seeded pass of the pipeline; returns the sampled input-register index."""
    rng = as_rng(seed)
    prepare_period_state(spec, ledger)
    y = sample_index(_prepared(spec).output_probs, rng)
    comb = _collapse_output(spec, y)
    return int(_index(measure_all(qft_apply(comb, ledger), rng).bits))


def _index(bits) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | b
    return idx


def post_qft_distribution(spec: PeriodicFunctionSpec) -> np.ndarray:
    """Exact probability of each input-register sample, from the simulated amplitudes.

    Sums over every output-register value: P(y) * |QFT(comb_y)|^2.
    """
    p_out = _prepared(spec).output_probs
    dist = np.zeros(spec.q)
    for y in np.flatnonzero(p_out > 0):
        dist += p_out[y] * qft_apply(_collapse_output(spec, int(y))).probabilities()
    return dist


def convergents(num: int, den: int):
    """Yield the continued-fraction convergents of num/den as Fractions."""
    h0, h1, k0, k1 = 0, 1, 1, 0
    while den:
        a, rem = divmod(num, den)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        yield Fraction(h1, k1)
        num, den = den, rem


def continued_fraction_period(sample: int, q: int, r_max: int) -> int | None:
    """Smallest convergent denominator d <= r_max with |sample/q - c/d| <= 1/(2q)."""
    if not 0 <= sample < q:
        return None
    if sample == 0:
        return None
    target = Fraction(sample, q)
    best = None
    for c in convergents(sample, q):
        if c.numerator == 0 or c.denominator > r_max:
            continue
        if abs(target - c) <= Fraction(1, 2 * q):
            if best is None or c.denominator < best:
                best = c.denominator
    return best


def _smallest_order_divisor(a: int, N: int, L: int) -> int:
    """Reduce a multiple L of the order to the order itself (smallest d | L with a^d = 1)."""
    for d in range(1, L + 1):
        if L % d == 0 and pow(a, d, N) == 1 % N:
            return d
    return L


def estimate_period(spec: PeriodicFunctionSpec, trials: int, seed) -> PeriodEstimate:
    """Combine per-trial continued-fraction candidates by lcm and certify a^r = 1 mod N.

    A zero sample carries only the trivial denominator 1. The lcm of the
    candidates is a multiple of the order whenever it certifies, and is
    reduced to the smallest certifying divisor.
    """
    if trials < 1:
        raise InvalidArgumentError("trials must be at least 1")
    a, N = spec.base, spec.modulus
    ledger = CostLedger()
    samples, candidates = [], []
    for t in range(trials):
        s = run_period_trial(spec, np.random.default_rng([seed, t]), ledger)
        samples.append(s)
        candidates.append(1 if s == 0 else continued_fraction_period(s, spec.q, N))
    L = math.lcm(*[c for c in candidates if c is not None])
    if pow(a, L, N) != 1 % N:
        raise ExtractionFailure(
            f"candidates {candidates} give lcm {L} with {a}^{L} mod {N} != 1"
        )
    r = _smallest_order_divisor(a, N, L)
    agree = sum(1 for c in candidates if c is not None and r % c == 0)
    return PeriodEstimate(r, agree / trials, trials, tuple(samples), tuple(candidates), ledger)


def _is_prime_power(N: int) -> bool:
    for p in range(2, N + 1):
        if N % p == 0:
            while N % p == 0:
                N //= p
            return N == 1
    return False


@dataclass(frozen=True)
class FactorResult:
    factors: tuple[int, int] | None
    attempts: tuple[dict, ...]

    @property
    def succeeded(self) -> bool:
        return self.factors is not None


def factor_demo(N: int, seed, trials: int = 20, max_attempts: int = 10) -> FactorResult:
    """Split an odd composite N <= 64 from the order of a random coprime base.

    Exhausting ``max_attempts`` bases is reported as ``factors=None``.
    """
    if N > FACTOR_DEMO_MAX_N or N < 9 or N % 2 == 0:
        raise InvalidArgumentError(f"N must be odd with 9 <= N <= {FACTOR_DEMO_MAX_N}, got {N}")
    if _is_prime_power(N):
        raise InvalidArgumentError(f"{N} is prime or a prime power")
    rng = as_rng(seed)
    bases = [a for a in range(2, N - 1) if math.gcd(a, N) == 1]
    attempts = []
    for attempt in range(max_attempts):
        a = int(rng.choice(bases))
        record = {"base": a, "period": None, "outcome": ""}
        try:
            est = estimate_period(PeriodicFunctionSpec(N, a), trials, [int(rng.integers(2**32)), attempt])
        except ExtractionFailure:
            record["outcome"] = "extraction failed"
            attempts.append(record)
            continue
        r = est.period
        record["period"] = r
        if r % 2:
            record["outcome"] = "odd period"
        elif pow(a, r // 2, N) == N - 1:
            record["outcome"] = "a^(r/2) = -1 mod N"
        else:
            h = pow(a, r // 2, N)
            p, q = math.gcd(h - 1, N), math.gcd(h + 1, N)
            if 1 < p < N:
                record["outcome"] = "split"
                attempts.append(record)
                return FactorResult(tuple(sorted((p, N // p))), tuple(attempts))
            if 1 < q < N:
                record["outcome"] = "split"
                attempts.append(record)
                return FactorResult(tuple(sorted((q, N // q))), tuple(attempts))
            record["outcome"] = "trivial gcd"
        attempts.append(record)
    return FactorResult(None, tuple(attempts))
