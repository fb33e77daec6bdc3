"""Teleportation of one qubit over a shared EPR pair and a two-bit classical channel.

Qubit 1 holds the unknown state, qubits 2 and 3 the shared pair. Alice owns
qubits 1-2 and Bob owns qubit 3; each party can only touch its own qubits,
and the only thing that passes from Alice to Bob is a :class:`TwoBits`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError
from .gates import H, X, Z, ControlledGate, OneQubitGate, apply_controlled, apply_single
from .state import (
    DensityMatrix, QuantumState, as_rng, fidelity, measure_qubits, project, reduced_density,
    residual_state, schmidt_rank,
)

ALICE = (1, 2)
BOB = (3,)
ALICE_BOB_CUT = (ALICE, BOB)

_S = 1 / np.sqrt(2)


def make_epr() -> QuantumState:
    return QuantumState(2, [_S, 0, 0, _S])


@dataclass(frozen=True)
class TwoBits:
    """The whole classical message: Alice's two measurement results."""

    b1: int
    b2: int

    def __post_init__(self):
        if self.b1 not in (0, 1) or self.b2 not in (0, 1):
            raise InvalidArgumentError(f"classical bits must be 0 or 1, got ({self.b1}, {self.b2})")

    def as_tuple(self) -> tuple[int, int]:
        return (self.b1, self.b2)


class ClassicalChannel:
    """One-shot Alice -> Bob channel that only carries a :class:`TwoBits`."""

    def __init__(self):
        self._message: TwoBits | None = None

    def send(self, message: TwoBits) -> None:
        if not isinstance(message, TwoBits):
            raise TypeError("the channel carries exactly two classical bits")
        if self._message is not None:
            raise RuntimeError("channel already used")
        self._message = message

    def receive(self) -> TwoBits:
        if self._message is None:
            raise RuntimeError("nothing sent")
        return self._message


class SharedRegister:
    """The joint three-qubit state; parties mutate it only through their own qubits."""

    def __init__(self, state: QuantumState):
        self.state = state


class _Party:
    qubits: tuple[int, ...] = ()

    def __init__(self, register: SharedRegister):
        self.register = register

    def _own(self, *qubits: int) -> None:
        if not set(qubits) <= set(self.qubits):
            raise PermissionError(f"{type(self).__name__} does not hold qubits {qubits}")

    def apply(self, gate: OneQubitGate, target: int) -> None:
        self._own(target)
        self.register.state = apply_single(self.register.state, gate, target)


class Alice(_Party):
    qubits = ALICE

    def entangle(self) -> None:
        """Rotate the Bell basis of qubits 1-2 onto the computational basis."""
        self._own(1, 2)
        self.register.state = apply_controlled(self.register.state, ControlledGate(1, 2, X))
        self.apply(H, 1)

    def measure(self, rng=None, forced: Sequence[int] | None = None) -> TwoBits:
        if forced is not None:
            _, self.register.state = project(self.register.state, ALICE, forced)
            return TwoBits(*forced)
        outcome = measure_qubits(self.register.state, ALICE, rng)
        self.register.state = outcome.post_state
        return TwoBits(*outcome.bits)


class Bob(_Party):
    qubits = BOB

    def correct(self, message: TwoBits) -> None:
        """Undo X^b2 Z^b1: X if b2, then Z if b1."""
        if message.b2:
            self.apply(X, 3)
        if message.b1:
            self.apply(Z, 3)


@dataclass(frozen=True, eq=False)
class TeleportTranscript:
    input_state: QuantumState
    classical_bits: tuple[int, int]
    output_state: QuantumState
    fidelity: float
    branch_probability: float
    bob_before: DensityMatrix
    pre_state: QuantumState
    post_state: QuantumState


def _protocol(psi: QuantumState, resource: QuantumState | None, rng=None,
              forced: Sequence[int] | None = None) -> TeleportTranscript:
    if psi.num_qubits != 1:
        raise InvalidArgumentError("teleport moves a single qubit")
    psi.require_normalized()
    resource = make_epr() if resource is None else resource
    if resource.num_qubits != 2:
        raise InvalidArgumentError("the shared resource must be a two-qubit state")
    resource.require_normalized()

    pre = psi.tensor(resource)
    register = SharedRegister(pre)
    alice, bob, channel = Alice(register), Bob(register), ClassicalChannel()

    alice.entangle()
    # Everything Bob can see before the message arrives.
    bob_before = reduced_density(register.state, BOB)
    before_measure = register.state
    channel.send(alice.measure(rng, forced))
    message = channel.receive()
    branch_p, _ = project(before_measure, ALICE, message.as_tuple())
    bob.correct(message)

    out = residual_state(register.state, ALICE, message.as_tuple())
    return TeleportTranscript(
        input_state=psi,
        classical_bits=message.as_tuple(),
        output_state=out,
        fidelity=fidelity(psi, out),
        branch_probability=branch_p,
        bob_before=bob_before,
        pre_state=pre,
        post_state=register.state,
    )


def teleport(psi: QuantumState, seed, resource: QuantumState | None = None) -> TeleportTranscript:
    """Run the protocol once; Alice's measurement is drawn from ``seed``.

    ``resource`` replaces the shared EPR pair (e.g. a product state, to show
    what is lost without entanglement).
    """
    return _protocol(psi, resource, rng=as_rng(seed))


def teleport_branch(psi: QuantumState, bits: Sequence[int],
                    resource: QuantumState | None = None) -> TeleportTranscript:
    """Deterministic run with Alice's outcome fixed to ``bits``."""
    return _protocol(psi, resource, forced=tuple(bits))


def entanglement_consumed(transcript: TeleportTranscript, pre_state: QuantumState | None = None,
                          post_state: QuantumState | None = None) -> dict:
    """Schmidt rank across Alice|Bob before and after the run."""
    pre = transcript.pre_state if pre_state is None else pre_state
    post = transcript.post_state if post_state is None else post_state
    before = schmidt_rank(pre, ALICE_BOB_CUT)
    after = schmidt_rank(post, ALICE_BOB_CUT)
    return {"cut": [list(ALICE), list(BOB)], "rank_before": before, "rank_after": after}
