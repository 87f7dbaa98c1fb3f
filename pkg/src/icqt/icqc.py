"""Qubit-register trinary computer: n system, n apparatus, 2n programming qubits.

State layout matches TrinaryState: composite index p * 4^n + s * 2^n + a,
with qubit 0 of each register the most significant bit of that register's
index.  The programmed operation conditions on the programming register and
runs one branch circuit per programming value over the S x A amplitudes; the
full-space square matrix is never assembled (the dense reference used in
tests lives in the test suite, not here).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import sqrt
from typing import Sequence

import numpy as np

from .born import DualBornReport, dual_born_report
from .linalg import StateVector
from .trinary import TrinaryDims, TrinaryState, dual_entropies

DEFAULT_MAX_DIM = 4096

_SQ2 = 1.0 / sqrt(2.0)
_FIXED_GATES = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "SDG": np.array([[1, 0], [0, -1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
    "TDG": np.array([[1, 0], [0, np.exp(-1j * np.pi / 4)]], dtype=complex),
}
for _m in _FIXED_GATES.values():
    _m.setflags(write=False)
_ROTATIONS = ("RX", "RY", "RZ")
REGISTERS = ("P", "S", "A")


class CapacityError(ValueError):
    """Requested register sizes exceed the configured dimension cap."""


def max_total_dim() -> int:
    """Capacity cap on the full-space dimension; ICQT_MAX_DIM overrides."""
    return int(os.environ.get("ICQT_MAX_DIM", DEFAULT_MAX_DIM))


def _rotation(kind: str, angle: float) -> np.ndarray:
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    if kind == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind == "RY":
        return np.array([[c, -s], [s, c]], dtype=complex)
    return np.array([[np.exp(-1j * angle / 2), 0], [0, np.exp(1j * angle / 2)]], dtype=complex)


@dataclass(frozen=True)
class GateOp:
    """One gate: a named single-qubit gate, a rotation, or CNOT.

    Targets are (register, qubit) pairs; CNOT takes (control, target) and may
    span registers.
    """

    kind: str
    targets: tuple[tuple[str, int], ...]
    angle: float | None = None

    def __post_init__(self):
        targets = tuple((str(reg), int(q)) for reg, q in self.targets)
        object.__setattr__(self, "targets", targets)
        for reg, _ in targets:
            if reg not in REGISTERS:
                raise ValueError(f"unknown register {reg!r}")
        if len(set(targets)) != len(targets):
            raise ValueError("gate targets must be distinct")
        if self.kind == "CNOT":
            if len(targets) != 2:
                raise ValueError("CNOT takes (control, target)")
            if self.angle is not None:
                raise ValueError("CNOT takes no angle")
        elif self.kind in _FIXED_GATES:
            if len(targets) != 1:
                raise ValueError(f"{self.kind} takes one target")
            if self.angle is not None:
                raise ValueError(f"{self.kind} takes no angle")
        elif self.kind in _ROTATIONS:
            if len(targets) != 1:
                raise ValueError(f"{self.kind} takes one target")
            if self.angle is None:
                raise ValueError(f"{self.kind} needs an angle")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")

    def matrix(self) -> np.ndarray:
        if self.kind in _FIXED_GATES:
            return _FIXED_GATES[self.kind]
        return _rotation(self.kind, float(self.angle))


def _register_axis(reg: str, qubit: int, layout: dict[str, tuple[int, int]]) -> int:
    if reg not in layout:
        raise IndexError(f"register {reg} not present in this context")
    offset, size = layout[reg]
    if not 0 <= qubit < size:
        raise IndexError(f"qubit {qubit} out of range for register {reg} of size {size}")
    return offset + qubit


def _apply_single(arr: np.ndarray, m: np.ndarray, axis: int) -> np.ndarray:
    out = np.tensordot(m, arr, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def _apply_cnot(arr: np.ndarray, control: int, target: int) -> np.ndarray:
    out = arr.copy()
    sel: list = [slice(None)] * arr.ndim
    sel[control] = 1
    one = tuple(sel)
    out[one] = np.flip(arr[one], axis=target - (1 if target > control else 0))
    return out


def _apply_gates_nd(
    arr: np.ndarray, gates: Sequence[GateOp], layout: dict[str, tuple[int, int]]
) -> np.ndarray:
    for gate in gates:
        if gate.kind == "CNOT":
            (creg, cq), (treg, tq) = gate.targets
            c = _register_axis(creg, cq, layout)
            t = _register_axis(treg, tq, layout)
            arr = _apply_cnot(arr, c, t)
        else:
            reg, q = gate.targets[0]
            arr = _apply_single(arr, gate.matrix(), _register_axis(reg, q, layout))
    return arr


def _full_layout(n: int) -> dict[str, tuple[int, int]]:
    return {"P": (0, 2 * n), "S": (2 * n, n), "A": (3 * n, n)}


def _sa_layout(n: int) -> dict[str, tuple[int, int]]:
    return {"S": (0, n), "A": (n, n)}


@dataclass(frozen=True)
class IcqcConfig:
    """Run configuration: registers, gate stage, and the programmed stage.

    ``program_table`` needs exactly 4^n entries, each a branch circuit (gate
    list) on S and A; raw 4x4 matrices are accepted for n = 1 only, as dense
    test oracles.  The optional P-only circuit is applied after the branch
    stage.  Register sizes other than n_a = n and n_p = 2n are rejected.
    """

    n: int
    gate_sequence: tuple[GateOp, ...] = ()
    program_table: tuple = ()
    post_program_p_circuit: tuple[GateOp, ...] = ()
    initial: str = "uniform"
    n_a: int | None = None
    n_p: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        n_a = self.n if self.n_a is None else self.n_a
        n_p = 2 * self.n if self.n_p is None else self.n_p
        if n_a != self.n or n_p != 2 * self.n:
            raise ValueError(
                f"register law violated: need n_a = n and n_p = 2n, got "
                f"n={self.n}, n_a={n_a}, n_p={n_p}"
            )
        object.__setattr__(self, "n_a", n_a)
        object.__setattr__(self, "n_p", n_p)
        if self.initial not in ("uniform", "zeros"):
            raise ValueError("initial must be 'uniform' or 'zeros'")
        if len(self.program_table) != 4**self.n:
            raise ValueError(
                f"program table needs {4 ** self.n} entries, got {len(self.program_table)}"
            )
        d_sa = 4**self.n
        for p, entry in enumerate(self.program_table):
            if isinstance(entry, np.ndarray):
                if self.n != 1:
                    raise ValueError("raw-matrix branches are allowed for n = 1 only")
                if entry.shape != (d_sa, d_sa):
                    raise ValueError(f"branch {p} matrix must be {d_sa}x{d_sa}")
            else:
                for gate in entry:
                    for reg, _ in gate.targets:
                        if reg == "P":
                            raise ValueError(
                                f"branch {p} touches the programming register"
                            )
        for gate in self.post_program_p_circuit:
            for reg, _ in gate.targets:
                if reg != "P":
                    raise ValueError("post-program circuit may touch P only")

    @property
    def dims(self) -> TrinaryDims:
        return TrinaryDims(d_s=2**self.n, d_a=2**self.n, d_p=4**self.n)


def init_state(n: int, initial: str = "uniform") -> TrinaryState:
    """Uniform superposition on every register (or all-zeros with 'zeros')."""
    if n < 1:
        raise ValueError("n must be >= 1")
    total = 2 ** (4 * n)
    cap = max_total_dim()
    if total > cap:
        raise CapacityError(
            f"full dimension 2^{4 * n} = {total} exceeds the cap {cap} "
            f"(set ICQT_MAX_DIM to raise it)"
        )
    dims = TrinaryDims(d_s=2**n, d_a=2**n, d_p=4**n)
    if initial == "uniform":
        chi = StateVector.uniform(dims.d_p)
        psi = StateVector.uniform(dims.d_s)
        phi = StateVector.uniform(dims.d_a)
    elif initial == "zeros":
        chi = StateVector.basis(dims.d_p, 0)
        psi = StateVector.basis(dims.d_s, 0)
        phi = StateVector.basis(dims.d_a, 0)
    else:
        raise ValueError("initial must be 'uniform' or 'zeros'")
    return TrinaryState.from_product(dims, chi, psi, phi)


def apply_gates(state: TrinaryState, gates: Sequence[GateOp], n: int) -> TrinaryState:
    """Standard state-vector gate application over all three registers."""
    if state.dims.total != 2 ** (4 * n):
        raise ValueError("state does not match an n-qubit trinary register layout")
    arr = state.dense.amplitudes.reshape([2] * (4 * n))
    arr = _apply_gates_nd(arr, gates, _full_layout(n))
    return TrinaryState.from_dense(state.dims, StateVector(arr.reshape(-1)))


def apply_programmed_op(state: TrinaryState, config: IcqcConfig) -> TrinaryState:
    """Branch circuits conditioned on P, then the optional P-only circuit.

    Works row by row over programming values; per-branch workspace is one
    S x A block of 4^n amplitudes.
    """
    n = config.n
    dims = config.dims
    if state.dims != dims:
        raise ValueError("state dims do not match the configuration")
    rows = state.as_matrix().copy()
    sa_layout = _sa_layout(n)
    for p, entry in enumerate(config.program_table):
        if isinstance(entry, np.ndarray):
            rows[p] = entry @ rows[p]
        else:
            block = rows[p].reshape([2] * (2 * n))
            rows[p] = _apply_gates_nd(block, entry, sa_layout).reshape(-1)
    out = TrinaryState.from_dense(dims, StateVector(rows.reshape(-1)))
    if config.post_program_p_circuit:
        out = apply_gates(out, config.post_program_p_circuit, n)
    return out


@dataclass(frozen=True)
class IcqcRunReport:
    final_state: TrinaryState
    s_psa: float
    s_sa_branches: np.ndarray
    mean_s_sa: float
    born: DualBornReport


def run(config: IcqcConfig) -> IcqcRunReport:
    """init -> gate stage -> programmed stage -> dual entropies and Born report."""
    state = init_state(config.n, config.initial)
    if config.gate_sequence:
        state = apply_gates(state, config.gate_sequence, config.n)
    state = apply_programmed_op(state, config)
    s_psa, branches = dual_entropies(state)
    return IcqcRunReport(
        final_state=state,
        s_psa=s_psa,
        s_sa_branches=branches,
        mean_s_sa=float(np.mean(branches)),
        born=dual_born_report(state),
    )


def pointer_branch_circuit(basis_name: str) -> tuple[GateOp, ...]:
    """Single-qubit pointer measurement of a named basis as an S0->A0 circuit."""
    cnot = GateOp("CNOT", (("S", 0), ("A", 0)))
    if basis_name == "Z":
        return (cnot,)
    if basis_name == "X":
        h = GateOp("H", (("S", 0),))
        return (h, cnot, h)
    if basis_name == "Y":
        return (
            GateOp("SDG", (("S", 0),)),
            GateOp("H", (("S", 0),)),
            cnot,
            GateOp("H", (("S", 0),)),
            GateOp("S", (("S", 0),)),
        )
    raise ValueError(f"unknown basis name {basis_name!r}")


def tomographic_program_n1() -> tuple[tuple[GateOp, ...], ...]:
    """The informationally complete (Z, X, Y, Z) branch table for n = 1."""
    return tuple(pointer_branch_circuit(b) for b in ("Z", "X", "Y", "Z"))
