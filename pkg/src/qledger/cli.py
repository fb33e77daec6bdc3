"""Command-line experiments; each run emits a RunRecord as JSON or a CSV series.

Exit codes: 0 success, 2 invalid input (including capacity and I/O errors),
3 algorithmic failure such as exhausted period extraction.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import __version__
from .errors import ExtractionFailure, InvalidArgumentError, InvalidStateError
from .fourier import CONVENTION, fft, qft_apply
from .gates import apply_dense, apply_factored, kron_expand, random_factored
from .ledger import CostLedger, dense_cost, factored_cost, fft_cost, qft_gate_count, scaling_fit
from .oracle import build_oracle, load_truth_table, parallel_evaluate, uniform_superposition
from .period import PeriodicFunctionSpec, estimate_period, factor_demo
from .state import (
    QuantumState, check_capacity, inner_product, random_state, reduced_density, schmidt_rank,
)
from .teleport import teleport

EXIT_OK, EXIT_INVALID, EXIT_FAILURE = 0, 2, 3

CSV_COLUMNS = {
    "scaling": ("n", "count", "engine"),
    "period": ("trial", "sample", "candidate"),
    "teleport": ("trial", "b1", "b2", "fidelity"),
}


class CommandFailure(Exception):
    """Algorithmic failure carrying the partial record."""

    def __init__(self, message: str, record: "RunRecord"):
        super().__init__(message)
        self.record = record


@dataclass
class RunRecord:
    command: str
    parameters: dict
    seed: int | None
    ledger: dict
    outputs: dict
    convention: dict = field(default_factory=CONVENTION.to_dict)
    version: str = __version__

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
            "ledger": self.ledger,
            "outputs": self.outputs,
            "convention": self.convention,
            "version": self.version,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        return cls(**json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        columns = CSV_COLUMNS.get(self.command)
        if columns is None:
            writer.writerow(("field", "value"))
            for key in sorted(self.outputs):
                value = self.outputs[key]
                if not isinstance(value, (list, dict)):
                    writer.writerow((key, value))
        else:
            writer.writerow(columns)
            for row in self.outputs["series"]:
                writer.writerow(row[c] for c in columns)
        return buf.getvalue()


def _complex_pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _matrix(m: np.ndarray) -> list:
    return [[_complex_pair(z) for z in row] for row in m]


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError:
        raise InvalidArgumentError(f"range must look like a..b, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise InvalidArgumentError(f"invalid range {lo}..{hi}")
    return lo, hi


def cmd_superpose(n: int, seed: int = 0) -> RunRecord:
    check_capacity(n)
    ledger = CostLedger()
    psi = uniform_superposition(n, ledger)
    expected = 2 ** (-n / 2)
    outputs = {
        "gate_count": ledger.gate_count,
        "num_amplitudes": psi.dim,
        "max_deviation": float(np.max(np.abs(psi.amplitudes - expected))),
        "expected_amplitude": expected,
    }
    if n <= 6:
        outputs["amplitudes"] = [_complex_pair(z) for z in psi.amplitudes]
    return RunRecord("superpose", {"qubits": n}, seed, ledger.to_dict(), outputs)


def _engine_count(engine: str, n: int, rng: np.random.Generator) -> tuple[int, int, dict]:
    ledger = CostLedger()
    if engine == "dense":
        op = kron_expand(random_factored(n, rng))
        apply_dense(random_state(n, rng), op, ledger)
        return ledger.multiply_adds, dense_cost(n), ledger.to_dict()
    if engine == "factored":
        apply_factored(random_state(n, rng), random_factored(n, rng), ledger)
        return ledger.multiply_adds, factored_cost(n), ledger.to_dict()
    if engine == "fft":
        fft(random_state(n, rng).amplitudes, ledger)
        return ledger.multiply_adds, fft_cost(n), ledger.to_dict()
    if engine == "qft":
        qft_apply(random_state(n, rng), ledger)
        return ledger.gate_count, qft_gate_count(n), ledger.to_dict()
    raise InvalidArgumentError(f"unknown engine {engine!r}")


def cmd_scaling(engine: str, n_range: tuple[int, int], seed: int = 0) -> RunRecord:
    lo, hi = n_range
    check_capacity(hi)
    total = CostLedger()
    series, closed = [], []
    for n in range(lo, hi + 1):
        count, formula, led = _engine_count(engine, n, np.random.default_rng([seed, n]))
        total = total.merge(CostLedger.from_dict(led))
        series.append({"n": n, "count": count, "engine": engine})
        closed.append(formula)
    points = [(r["n"], r["count"]) for r in series]
    outputs = {
        "series": series,
        "closed_form": closed,
        "matches_closed_form": [r["count"] for r in series] == closed,
        "unit": "gates" if engine == "qft" else "multiply_adds",
        "fit": scaling_fit(points).to_dict() if len(points) >= 3 else None,
    }
    params = {"engine": engine, "range": [lo, hi]}
    return RunRecord("scaling", params, seed, total.to_dict(), outputs)


def cmd_period(a: int, N: int, trials: int, seed: int = 0, input_bits: int | None = None) -> RunRecord:
    spec = PeriodicFunctionSpec(N, a, input_bits)
    params = {"a": a, "N": N, "trials": trials, "input_bits": spec.input_bits,
              "output_bits": spec.output_bits}
    try:
        est = estimate_period(spec, trials, seed)
    except ExtractionFailure as exc:
        record = RunRecord("period", params, seed, CostLedger().to_dict(), {"error": str(exc)})
        raise CommandFailure(str(exc), record) from exc
    series = [{"trial": t, "sample": s, "candidate": c if c is not None else ""}
              for t, (s, c) in enumerate(zip(est.samples, est.candidates))]
    outputs = {
        "period": est.period,
        "confidence": est.confidence,
        "certified": pow(a, est.period, N) == 1 % N,
        "series": series,
    }
    return RunRecord("period", params, seed, est.ledger.to_dict(), outputs)


def cmd_factor(N: int, seed: int = 0, trials: int = 20) -> RunRecord:
    res = factor_demo(N, seed, trials=trials)
    outputs = {"factors": list(res.factors) if res.factors else None, "attempts": list(res.attempts)}
    record = RunRecord("factor", {"N": N, "trials": trials}, seed, CostLedger().to_dict(), outputs)
    if not res.succeeded:
        raise CommandFailure(f"no factor of {N} after {len(res.attempts)} bases", record)
    return record


def cmd_teleport(trials: int, seed: int = 0) -> RunRecord:
    if trials < 1:
        raise InvalidArgumentError("trials must be at least 1")
    series = []
    counts = np.zeros(4, dtype=int)
    bob_dev = 0.0
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        tr = teleport(random_state(1, rng), rng)
        b1, b2 = tr.classical_bits
        counts[2 * b1 + b2] += 1
        bob_dev = max(bob_dev, float(np.max(np.abs(tr.bob_before.entries - np.eye(2) / 2))))
        series.append({"trial": t, "b1": b1, "b2": b2, "fidelity": tr.fidelity})
    outputs = {
        "min_fidelity": min(r["fidelity"] for r in series),
        "frequencies": {f"{k >> 1}{k & 1}": float(counts[k] / trials) for k in range(4)},
        "chi2_pvalue": float(stats.chisquare(counts).pvalue),
        "bob_pre_correction_max_deviation": bob_dev,
        "classical_bits_per_run": 2,
        "series": series,
    }
    return RunRecord("teleport", {"trials": trials}, seed, CostLedger().to_dict(), outputs)


def bell_states() -> dict[str, QuantumState]:
    s = 1 / np.sqrt(2)
    return {"phi_plus": QuantumState(2, [s, 0, 0, s]), "psi_plus": QuantumState(2, [0, s, s, 0])}


def cmd_entangle_demo() -> RunRecord:
    bells = bell_states()
    cut = ((1,), (2,))
    local = {name: {str(q): reduced_density(psi, {q}).entries for q in (1, 2)}
             for name, psi in bells.items()}
    diff = max(float(np.max(np.abs(local["phi_plus"][q] - local["psi_plus"][q]))) for q in ("1", "2"))
    outputs = {
        "reduced_density": {name: {q: _matrix(m) for q, m in d.items()} for name, d in local.items()},
        "max_local_difference": diff,
        "global_inner_product": _complex_pair(inner_product(bells["phi_plus"], bells["psi_plus"])),
        "schmidt_ranks": {name: schmidt_rank(psi, cut) for name, psi in bells.items()},
    }
    return RunRecord("entangle", {}, None, CostLedger().to_dict(), outputs)


def cmd_parallel(table_path: str) -> RunRecord:
    table = load_truth_table(table_path)
    ledger = CostLedger()
    psi = parallel_evaluate(build_oracle(table), ledger)
    n = table.arity
    outputs = {
        "arity": n,
        "table": str(table),
        "values_evaluated": 2**n,
        "gate_count": ledger.gate_count,
        "oracle_calls": ledger.oracle_calls,
        "schmidt_rank": schmidt_rank(psi, (range(1, n + 1), (n + 1,))),
        "constant": table.is_constant(),
    }
    return RunRecord("parallel", {"table": str(table)}, None, ledger.to_dict(), outputs)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qledger", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="-", help="output path (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("superpose", parents=[common], help="uniform superposition by n Hadamards")
    p.add_argument("-n", "--qubits", type=int, required=True)

    p = sub.add_parser("scaling", parents=[common], help="exact operation counts over a range of n")
    p.add_argument("--engine", choices=("dense", "factored", "fft", "qft"), required=True)
    p.add_argument("--range", dest="n_range", default="4..10", help="a..b (inclusive)")

    p = sub.add_parser("period", parents=[common], help="estimate the order of a mod N")
    p.add_argument("-a", type=int, required=True)
    p.add_argument("-N", type=int, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("-n", "--qubits", type=int, default=None, help="input register width")

    p = sub.add_parser("factor", parents=[common], help="factor N <= 64 via order finding")
    p.add_argument("-N", type=int, required=True)
    p.add_argument("--trials", type=int, default=20)

    p = sub.add_parser("teleport", parents=[common], help="teleport random qubits")
    p.add_argument("--trials", type=int, default=1000)

    sub.add_parser("entangle", parents=[common], help="Bell-state local/global comparison")

    p = sub.add_parser("parallel", parents=[common], help="evaluate a truth table in superposition")
    p.add_argument("table", help="file with one line of 2^n characters from {0,1}")
    return parser


def _run(args: argparse.Namespace) -> RunRecord:
    if args.command == "superpose":
        return cmd_superpose(args.qubits, args.seed)
    if args.command == "scaling":
        return cmd_scaling(args.engine, _parse_range(args.n_range), args.seed)
    if args.command == "period":
        return cmd_period(args.a, args.N, args.trials, args.seed, args.qubits)
    if args.command == "factor":
        return cmd_factor(args.N, args.seed, args.trials)
    if args.command == "teleport":
        return cmd_teleport(args.trials, args.seed)
    if args.command == "entangle":
        return cmd_entangle_demo()
    return cmd_parallel(args.table)


def _emit(record: RunRecord, fmt: str, out: str) -> None:
    text = record.to_json() if fmt == "json" else record.to_csv()
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _emit(_run(args), args.format, args.out)
    except CommandFailure as exc:
        _emit(exc.record, args.format, args.out)
        print(f"qledger: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except (InvalidArgumentError, InvalidStateError, OSError) as exc:
        print(f"qledger: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
