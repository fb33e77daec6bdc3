"""Exact operation accounting and scaling-law fits.

Every engine credits a :class:`CostLedger` with closed-form counts per sweep.
The unit of classical work is one complex multiply-add; a 2x2 matrix applied to
an amplitude pair costs 4 units.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgumentError

MADDS_PER_PAIR = 4


@dataclass
class Tally:
    multiply_adds: int = 0
    gate_count: int = 0
    oracle_calls: int = 0

    def add(self, multiply_adds: int, gates: int, oracles: int) -> None:
        self.multiply_adds += multiply_adds
        self.gate_count += gates
        self.oracle_calls += oracles

    def to_dict(self) -> dict:
        return {
            "multiply_adds": self.multiply_adds,
            "gate_count": self.gate_count,
            "oracle_calls": self.oracle_calls,
        }


@dataclass
class CostLedger:
    """Running totals plus per-phase sub-tallies that always sum to the totals."""

    multiply_adds: int = 0
    gate_count: int = 0
    oracle_calls: int = 0
    phases: dict[str, Tally] = field(default_factory=dict)

    def record(self, phase: str, multiply_adds: int = 0, gates: int = 0, oracles: int = 0) -> "CostLedger":
        if min(multiply_adds, gates, oracles) < 0:
            raise InvalidArgumentError("ledger increments must be non-negative")
        self.multiply_adds += int(multiply_adds)
        self.gate_count += int(gates)
        self.oracle_calls += int(oracles)
        self.phases.setdefault(phase, Tally()).add(int(multiply_adds), int(gates), int(oracles))
        return self

    def merge(self, other: "CostLedger") -> "CostLedger":
        """Return a new ledger holding the sum of ``self`` and ``other``."""
        out = CostLedger()
        for src in (self, other):
            for name, t in src.phases.items():
                out.record(name, t.multiply_adds, t.gate_count, t.oracle_calls)
        return out

    def copy(self) -> "CostLedger":
        return self.merge(CostLedger())

    def to_dict(self) -> dict:
        return {
            "multiply_adds": self.multiply_adds,
            "gate_count": self.gate_count,
            "oracle_calls": self.oracle_calls,
            "phases": {name: self.phases[name].to_dict() for name in sorted(self.phases)},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CostLedger":
        out = cls()
        for name, t in data.get("phases", {}).items():
            out.record(name, t["multiply_adds"], t["gate_count"], t["oracle_calls"])
        if (out.multiply_adds, out.gate_count, out.oracle_calls) != (
            data["multiply_adds"], data["gate_count"], data["oracle_calls"]
        ):
            raise InvalidArgumentError("ledger phases do not sum to its totals")
        return out


def record(ledger: CostLedger | None, phase: str, multiply_adds: int = 0, gates: int = 0,
           oracles: int = 0) -> CostLedger | None:
    """Credit ``ledger`` if one was supplied; engines call this unconditionally."""
    if ledger is not None:
        ledger.record(phase, multiply_adds, gates, oracles)
    return ledger


# Closed forms for the engines' counts. Tests assert the ledgers equal these.

def dense_cost(n: int) -> int:
    return 4**n


def factored_cost(n: int) -> int:
    return 2 * n * 2**n


def fft_cost(n: int) -> int:
    # n stages of 2^(n-1) normalized butterflies, each a 2x2 application.
    return MADDS_PER_PAIR * n * 2 ** (n - 1) if n > 0 else 0


def qft_gate_count(n: int) -> int:
    return n * (n + 1) // 2


@dataclass(frozen=True)
class ScalingReport:
    """Two competing fits of operation counts against register width n.

    ``fitted_exponent`` is the slope of log2(count) against n (exponential
    model, count ~ 2^(slope*n)); ``poly_exponent`` is the slope of log2(count)
    against log2(n) (polynomial model, count ~ n^slope). Residuals are RMS in
    log2 units.
    """

    points: tuple[tuple[int, int], ...]
    fitted_exponent: float
    residual: float
    poly_exponent: float
    poly_residual: float

    @property
    def preferred_model(self) -> str:
        return "exponential" if self.residual <= self.poly_residual else "polynomial"

    def to_dict(self) -> dict:
        return {
            "points": [list(p) for p in self.points],
            "fitted_exponent": self.fitted_exponent,
            "residual": self.residual,
            "poly_exponent": self.poly_exponent,
            "poly_residual": self.poly_residual,
            "preferred_model": self.preferred_model,
        }


def _line_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    rms = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), rms


def scaling_fit(points: Iterable[Sequence[int]]) -> ScalingReport:
    pts = tuple((int(n), int(c)) for n, c in points)
    if len(pts) < 3:
        raise InvalidArgumentError("scaling_fit needs at least 3 points")
    if any(n < 1 or c <= 0 for n, c in pts):
        raise InvalidArgumentError("scaling_fit needs n >= 1 and positive counts")
    n = np.array([p[0] for p in pts], dtype=float)
    y = np.log2(np.array([p[1] for p in pts], dtype=float))
    exp_slope, exp_res = _line_fit(n, y)
    poly_slope, poly_res = _line_fit(np.log2(n), y)
    return ScalingReport(pts, exp_slope, exp_res, poly_slope, poly_res)
