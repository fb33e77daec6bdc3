"""State-vector quantum circuit simulation with exact operation counting."""

__version__ = "0.1.0"

from .errors import CapacityError, ExtractionFailure, InvalidArgumentError, InvalidStateError
from .ledger import CostLedger, ScalingReport, scaling_fit
from .state import (
    DensityMatrix, MeasurementOutcome, QuantumState, basis_state, inner_product, measure_all,
    reduced_density, schmidt_rank,
)
from .gates import (
    ControlledGate, DenseOperator, FactoredOperator, OneQubitGate, apply_controlled, apply_dense,
    apply_factored, apply_single, kron_expand,
)
from .oracle import Oracle, TruthTable, build_oracle, parallel_evaluate, uniform_superposition
from .fourier import CONVENTION, FourierConvention, dft_direct, fft, inverse_qft_apply, qft_apply, qft_circuit
from .period import (
    PeriodEstimate, PeriodicFunctionSpec, continued_fraction_period, estimate_period, factor_demo,
    modexp_table, run_period_trial,
)
from .teleport import TeleportTranscript, entanglement_consumed, make_epr, teleport
