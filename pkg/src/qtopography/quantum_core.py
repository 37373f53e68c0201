"""State-level algebra for isotropic and Bell-diagonal two-qubit states.

Covers the concurrence law of isotropic (Werner-type) states, entanglement
swapping of isotropic states, and Deutsch-style purification / pumping of
Bell-diagonal states.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import NamedTuple, Sequence

import numpy as np

ENTANGLEMENT_BOUNDARY = 2.0 / 3.0
_SUM_TOL = 1e-12


class DomainError(ValueError):
    """A parameter lies outside its physical domain."""


class DegenerateInputError(ValueError):
    """Purification post-selection has zero success probability."""


def _check_q(q: float, name: str = "q") -> float:
    q = float(q)
    if not 0.0 <= q <= 1.0 or np.isnan(q):
        raise DomainError(f"{name}={q!r} outside [0, 1]")
    return q


@dataclass(frozen=True)
class IsotropicState:
    """``(1 - q)|phi+><phi+| + q * 1/4``."""

    q: float

    def __post_init__(self):
        _check_q(self.q)

    @property
    def concurrence(self) -> float:
        return concurrence_isotropic(self.q)

    @property
    def entangled(self) -> bool:
        return self.q < ENTANGLEMENT_BOUNDARY

    @classmethod
    def from_concurrence(cls, c: float) -> "IsotropicState":
        return cls(q_from_concurrence(c))

    def to_bell_diagonal(self) -> "BellDiagonalState":
        q = self.q
        return BellDiagonalState(1.0 - 0.75 * q, 0.25 * q, 0.25 * q, 0.25 * q)


@dataclass(frozen=True)
class BellDiagonalState:
    """Mixture of the four Bell states with the given weights."""

    w_phi_plus: float
    w_phi_minus: float
    w_psi_plus: float
    w_psi_minus: float

    def __post_init__(self):
        w = self.weights
        if np.any(w < 0) or abs(w.sum() - 1.0) > _SUM_TOL:
            raise DomainError(f"invalid Bell-diagonal weights {w.tolist()}")

    @property
    def weights(self) -> np.ndarray:
        return np.array(
            [self.w_phi_plus, self.w_phi_minus, self.w_psi_plus, self.w_psi_minus]
        )

    @property
    def concurrence(self) -> float:
        return max(0.0, 2.0 * float(self.weights.max()) - 1.0)

    @property
    def fidelity(self) -> float:
        return self.w_phi_plus

    @classmethod
    def from_weights(cls, weights: Sequence[float]) -> "BellDiagonalState":
        """Build from raw weights, clamping round-off negatives and renormalising."""
        w = np.asarray(weights, dtype=float)
        if np.any(w < -1e-15):
            raise DomainError(f"negative Bell weight in {w.tolist()}")
        w = np.clip(w, 0.0, None)
        w = w / w.sum()
        return cls(*map(float, w))

    @classmethod
    def isotropic(cls, q: float) -> "BellDiagonalState":
        return IsotropicState(q).to_bell_diagonal()


class PurificationOutcome(NamedTuple):
    state: BellDiagonalState
    success_probability: float


class PumpResult(NamedTuple):
    state: BellDiagonalState
    combined_probability: float
    accepted_count: int


def concurrence_isotropic(q: float) -> float:
    """Concurrence ``max(0, 1 - 3q/2)`` of an isotropic state."""
    q = _check_q(q)
    # evaluated through the phi+ weight so it is bit-identical to the
    # Bell-diagonal concurrence of the embedded state
    return max(0.0, 2.0 * (1.0 - 0.75 * q) - 1.0)


def q_from_concurrence(c: float) -> float:
    """Inverse of :func:`concurrence_isotropic` on its entangled branch."""
    c = float(c)
    if not 0.0 <= c <= 1.0:
        raise DomainError(f"concurrence={c!r} outside [0, 1]")
    return 2.0 * (1.0 - c) / 3.0


def swap(q1: float, q2: float) -> float:
    """Mixing parameter after swapping two isotropic pairs at a common node."""
    q1 = _check_q(q1, "q1")
    q2 = _check_q(q2, "q2")
    return 1.0 - (1.0 - q1) * (1.0 - q2)


def swap_chain(qs: Sequence[float]) -> float:
    """End-to-end mixing parameter of a chain swapped at every inner node."""
    if len(qs) == 0:
        raise ValueError("swap_chain needs at least one edge")
    if len(qs) == 1:
        return _check_q(qs[0])
    return reduce(swap, qs)


def deutsch_purify(s1: BellDiagonalState, s2: BellDiagonalState) -> PurificationOutcome:
    """One round of the Deutsch et al. (DEJMPS) recurrence on two pairs.

    The local rotations exchange the roles of phi- and psi-, so the
    coincident-parity post-selection pairs phi+ with psi- and psi+ with phi-.

    Returns:
        The post-selected output state and the probability that the two
        target-pair measurements coincide.
    """
    a1, b1, c1, d1 = s1.weights
    a2, b2, c2, d2 = s2.weights
    norm = (a1 + d1) * (a2 + d2) + (b1 + c1) * (b2 + c2)
    if norm <= 0.0:
        raise DegenerateInputError("purification succeeds with probability 0")
    out = [
        a1 * a2 + d1 * d2,
        a1 * d2 + d1 * a2,
        c1 * c2 + b1 * b2,
        c1 * b2 + b1 * c2,
    ]
    return PurificationOutcome(
        BellDiagonalState.from_weights(np.array(out) / norm), float(norm)
    )


def pump_sequence_detailed(
    states: Sequence[BellDiagonalState], improve_only: bool = False
) -> tuple[BellDiagonalState, float, list[int]]:
    """Entanglement pumping with bookkeeping of which inputs were consumed.

    Returns:
        ``(state, product of step success probabilities, accepted indices)``
        where indices refer to positions in ``states``.
    """
    if len(states) == 0:
        raise ValueError("pump_sequence needs at least one state")
    # stable sort keeps input order among equal concurrences
    order = sorted(range(len(states)), key=lambda i: -states[i].concurrence)
    current = states[order[0]]
    prob = 1.0
    accepted = [order[0]]
    for i in order[1:]:
        out = deutsch_purify(current, states[i])
        if improve_only and not out.state.concurrence > current.concurrence:
            continue
        current = out.state
        prob *= out.success_probability
        accepted.append(i)
    return current, prob, accepted


def pump_sequence(
    states: Sequence[BellDiagonalState], improve_only: bool = False
) -> PumpResult:
    """Pump the best state with each remaining state in descending concurrence.

    With ``improve_only`` a step is kept only if it strictly raises the
    concurrence of the running state.
    """
    state, prob, accepted = pump_sequence_detailed(states, improve_only)
    return PumpResult(state, prob, len(accepted))
