"""Dual Born rule extraction.

Decision probabilities are the squared branch weights of a trinary state in
the programming basis (the diagonal of the reduced state on P); outcome
probabilities inside a branch are the squared Schmidt coefficients of the
branch state across the S|A cut.  Nothing here samples anything: the output
is exact probability tables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import StateVector, schmidt_decompose
from .trinary import EMPTY_BRANCH_TOL, TrinaryState

CLAMP_TOL = 1e-12
DEGENERACY_TOL = 1e-8


class EmptyBranchError(ValueError):
    """Requested branch carries (numerically) zero weight."""


def _clamp(p: np.ndarray) -> np.ndarray:
    if np.min(p) < -CLAMP_TOL:
        raise ValueError("probability below the round-off clamp window")
    return np.where(p < 0, 0.0, p)


def decision_probabilities(state: TrinaryState) -> np.ndarray:
    """Probability of each programmed operation: |g_r|^2 per programming state."""
    return _clamp(state.branch_weights())


@dataclass(frozen=True)
class OutcomeTable:
    """Per-branch outcome statistics.

    ``probabilities`` are descending squared Schmidt coefficients padded with
    zeros to d_s; ``measured_basis`` holds the matching S-side Schmidt
    vectors.  ``degenerate`` flags repeated Schmidt values, in which case the
    basis is not unique and should not be read as a sharp observable.
    """

    probabilities: np.ndarray
    measured_basis: tuple[StateVector, ...]
    degenerate: bool


def outcome_probabilities(state: TrinaryState, branch: int) -> OutcomeTable:
    """Outcome distribution of the measurement carried by one branch."""
    weights = state.branch_weights()
    if weights[branch] <= EMPTY_BRANCH_TOL:
        raise EmptyBranchError(f"branch {branch} carries no weight")
    sa = state.branch_state(branch)
    sd = schmidt_decompose(sa, (state.dims.d_s, state.dims.d_a))
    probs = _clamp(sd.coefficients**2)
    padded = np.zeros(state.dims.d_s)
    padded[: probs.size] = probs
    nonzero = sd.coefficients[sd.coefficients > EMPTY_BRANCH_TOL]
    degenerate = bool(np.any(np.abs(np.diff(nonzero)) < DEGENERACY_TOL))
    return OutcomeTable(
        probabilities=padded,
        measured_basis=sd.left_basis,
        degenerate=degenerate,
    )


def conventional_oracle(psi_s: StateVector, basis: np.ndarray) -> np.ndarray:
    """Textbook Born rule |<b_j|psi>|^2, the reference the dual rule must match."""
    b = np.asarray(basis, dtype=complex)
    if b.shape != (psi_s.dim, psi_s.dim):
        raise ValueError("basis must be a square matrix of columns on S")
    amps = b.conj().T @ psi_s.amplitudes
    return _clamp(np.abs(amps) ** 2)


@dataclass(frozen=True)
class DualBornReport:
    """Decision row plus one outcome row per branch.

    Branches with no weight get an all-zero outcome row and an ``empty``
    flag instead of an error, so a report exists for every state.
    """

    decision_probs: np.ndarray
    outcome_probs: np.ndarray  # shape (d_p, d_s)
    degenerate: tuple[bool, ...]
    empty: tuple[bool, ...]
    branch_observable_labels: tuple[str | None, ...] | None = None


def dual_born_report(
    state: TrinaryState, labels: tuple[str | None, ...] | None = None
) -> DualBornReport:
    """Assemble the full dual-probability report for a trinary state."""
    d_p, d_s = state.dims.d_p, state.dims.d_s
    decision = decision_probabilities(state)
    outcome = np.zeros((d_p, d_s))
    degenerate = []
    empty = []
    for r in range(d_p):
        if decision[r] <= EMPTY_BRANCH_TOL:
            empty.append(True)
            degenerate.append(False)
            continue
        table = outcome_probabilities(state, r)
        outcome[r] = table.probabilities
        degenerate.append(table.degenerate)
        empty.append(False)
    return DualBornReport(
        decision_probs=decision,
        outcome_probs=outcome,
        degenerate=tuple(degenerate),
        empty=tuple(empty),
        branch_observable_labels=labels,
    )
