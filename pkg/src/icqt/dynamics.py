"""Trinary Hamiltonians, measurability checks, and the dual dynamics.

A trinary Hamiltonian is H_P on the programming space plus one Hermitian
block per programming basis state acting on S x A.  When the programmed part
commutes with H_P (the measurability condition) the propagator factorizes
into a programming-side propagator times independent per-branch propagators,
and evolution runs block-by-block without ever forming the full-space matrix.
``evolve_full`` is the dense brute-force reference for exactly that claim.

Time dependence is piecewise constant: a schedule is a list of
(duration, hamiltonian) segments evolved back to back.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import (
    DimensionError,
    HermiticityError,
    Operator,
    StateVector,
    commutator_norm,
    hermitian_propagator,
    seeded_random,
)
from .trinary import TrinaryDims, TrinaryState, _check_orthonormal, dual_entropies

COMMUTATION_TOL = 1e-10
HERMITICITY_TOL = 1e-12
_DIAG_TOL = 1e-13  # below this the programming Hamiltonian counts as diagonal


class FactorizationPreconditionError(ValueError):
    """Factorized evolution requested while the measurability condition fails."""


def _require_hermitian(entries: np.ndarray, what: str) -> np.ndarray:
    arr = np.asarray(entries, dtype=complex)
    if np.max(np.abs(arr - arr.conj().T)) > HERMITICITY_TOL:
        raise HermiticityError(f"{what} is not Hermitian")
    return arr


@dataclass(frozen=True)
class CommutatorCheck:
    commutator_norm: float
    satisfied: bool


@dataclass(frozen=True)
class TrinaryHamiltonian:
    """H_P plus one S x A block per programming basis state.

    ``programming_basis`` is a d_p x d_p matrix whose columns are the
    programming states the blocks are conditioned on; None means the
    computational basis.
    """

    dims: TrinaryDims
    h_p: Operator
    blocks: tuple[Operator, ...]
    programming_basis: np.ndarray | None = None

    def __post_init__(self):
        if self.h_p.dim != self.dims.d_p:
            raise DimensionError("h_p must act on the programming space")
        _require_hermitian(self.h_p.entries, "h_p")
        if len(self.blocks) != self.dims.d_p:
            raise DimensionError(f"need {self.dims.d_p} blocks, got {len(self.blocks)}")
        for n, b in enumerate(self.blocks):
            if b.dim != self.dims.d_sa:
                raise DimensionError(f"block {n} must act on S x A")
            _require_hermitian(b.entries, f"block {n}")
        if self.programming_basis is not None:
            basis = _check_orthonormal(
                np.asarray(self.programming_basis, dtype=complex),
                self.dims.d_p,
                "programming basis",
            )
            object.__setattr__(self, "programming_basis", basis)

    def _basis(self) -> np.ndarray:
        if self.programming_basis is None:
            return np.eye(self.dims.d_p, dtype=complex)
        return self.programming_basis

    def programmed_part(self) -> Operator:
        """sum_n |e_n><e_n| (x) block_n on the full space."""
        w = self._basis()
        total = self.dims.total
        out = np.zeros((total, total), dtype=complex)
        for n in range(self.dims.d_p):
            proj = np.outer(w[:, n], w[:, n].conj())
            out += np.kron(proj, self.blocks[n].entries)
        return Operator(out)

    def full_operator(self) -> Operator:
        """H_P (x) I plus the programmed part, densely assembled."""
        h = np.kron(self.h_p.entries, np.eye(self.dims.d_sa)) + self.programmed_part().entries
        return Operator(h)


@dataclass(frozen=True)
class ProgrammedBlockStructure:
    """Second-level structure of one S x A block.

    The block decomposes as sum_i |eps_i><eps_i| (x) H_A[i] + H_S (x) I over
    an orthonormal S basis (columns of ``s_basis``).
    """

    s_basis: np.ndarray
    a_generators: tuple[Operator, ...]
    h_s: Operator

    def __post_init__(self):
        basis = _check_orthonormal(
            np.asarray(self.s_basis, dtype=complex), self.d_s, "S basis"
        )
        object.__setattr__(self, "s_basis", basis)
        if len(self.a_generators) != self.d_s:
            raise DimensionError(f"need {self.d_s} apparatus generators")
        d_a = self.a_generators[0].dim
        for i, g in enumerate(self.a_generators):
            if g.dim != d_a:
                raise DimensionError("apparatus generators must share one dim")
            _require_hermitian(g.entries, f"apparatus generator {i}")
        _require_hermitian(self.h_s.entries, "h_s")

    @property
    def d_s(self) -> int:
        return self.h_s.dim

    @property
    def d_a(self) -> int:
        return self.a_generators[0].dim

    def assemble(self) -> Operator:
        out = np.kron(self.h_s.entries, np.eye(self.d_a))
        for i in range(self.d_s):
            proj = np.outer(self.s_basis[:, i], self.s_basis[:, i].conj())
            out = out + np.kron(proj, self.a_generators[i].entries)
        return Operator(out)


def check_pmc(h: TrinaryHamiltonian) -> CommutatorCheck:
    """Measurability of the programming side: [programmed part, H_P (x) I]."""
    h_p_full = Operator(np.kron(h.h_p.entries, np.eye(h.dims.d_sa)))
    norm = commutator_norm(h.programmed_part(), h_p_full)
    return CommutatorCheck(commutator_norm=norm, satisfied=norm <= COMMUTATION_TOL)


def check_sapmc(block: ProgrammedBlockStructure) -> CommutatorCheck:
    """Programmed measurability inside one block: [block, H_S (x) I]."""
    h_s_full = Operator(np.kron(block.h_s.entries, np.eye(block.d_a)))
    norm = commutator_norm(block.assemble(), h_s_full)
    return CommutatorCheck(commutator_norm=norm, satisfied=norm <= COMMUTATION_TOL)


def _eig(entries: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return np.linalg.eigh(entries)


def _expi(eig: tuple[np.ndarray, np.ndarray], t: float) -> np.ndarray:
    w, v = eig
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def _program_propagate(
    h_program: np.ndarray, psi: np.ndarray, t: float
) -> np.ndarray:
    """Apply exp(-i h_program t) to the program index of a (d_q, d_t) matrix."""
    off = h_program - np.diag(np.diag(h_program))
    if np.max(np.abs(off)) <= _DIAG_TOL:
        # exact per-component phases: keeps empty program components at exact zero
        phases = np.exp(-1j * np.real(np.diag(h_program)) * t)
        return phases[:, None] * psi
    return _expi(_eig(h_program), t) @ psi


def _blockwise_propagate(
    h_program: np.ndarray,
    block_eigs: Sequence[tuple[np.ndarray, np.ndarray]],
    psi: np.ndarray,
    t: float,
) -> np.ndarray:
    """Factorized propagator on a (program_dim, target_dim) amplitude matrix.

    The program-side propagator acts first, then every program component is
    evolved by its own block propagator; no full-space matrix is built.
    """
    out = _program_propagate(h_program, psi, t)
    for n, eig in enumerate(block_eigs):
        out[n] = _expi(eig, t) @ out[n]
    return out


def evolve_full(h: TrinaryHamiltonian, state: TrinaryState, t: float) -> TrinaryState:
    """Dense full-space propagator: the brute-force oracle."""
    if h.dims != state.dims:
        raise DimensionError("hamiltonian and state dims differ")
    u = hermitian_propagator(h.full_operator(), t)
    return TrinaryState.from_dense(state.dims, u.apply(state.dense))


def evolve_factorized(
    h: TrinaryHamiltonian, state: TrinaryState, t: float, force: bool = False
) -> TrinaryState:
    """Blockwise dual evolution; requires the measurability condition.

    ``force=True`` skips the condition and applies the factorized formula
    anyway (used to demonstrate that the condition is not vacuous).
    """
    if h.dims != state.dims:
        raise DimensionError("hamiltonian and state dims differ")
    if not force:
        chk = check_pmc(h)
        if not chk.satisfied:
            raise FactorizationPreconditionError(
                f"measurability condition violated (commutator norm {chk.commutator_norm:.3e})"
            )
    psi = state.as_matrix()
    w = h.programming_basis
    if w is not None:
        psi = w.conj().T @ psi
        h_program = w.conj().T @ h.h_p.entries @ w
    else:
        h_program = h.h_p.entries
    block_eigs = [_eig(b.entries) for b in h.blocks]
    out = _blockwise_propagate(h_program, block_eigs, psi, t)
    if w is not None:
        out = w @ out
    return TrinaryState.from_dense(state.dims, StateVector(out.reshape(-1)))


def evolve_programmed_block(
    block: ProgrammedBlockStructure, sa_state: StateVector, t: float, force: bool = False
) -> StateVector:
    """Second-level factorized evolution of one S x A block."""
    if sa_state.dim != block.d_s * block.d_a:
        raise DimensionError("state does not live on this block's S x A space")
    if not force:
        chk = check_sapmc(block)
        if not chk.satisfied:
            raise FactorizationPreconditionError(
                f"programmed measurability violated (commutator norm {chk.commutator_norm:.3e})"
            )
    psi = sa_state.amplitudes.reshape(block.d_s, block.d_a)
    b = block.s_basis
    psi = b.conj().T @ psi
    h_program = b.conj().T @ block.h_s.entries @ b
    eigs = [_eig(g.entries) for g in block.a_generators]
    out = _blockwise_propagate(h_program, eigs, psi, t)
    out = b @ out
    return StateVector(out.reshape(-1))


def evolve(h: TrinaryHamiltonian, state: TrinaryState, t: float) -> TrinaryState:
    """Factorized when the measurability condition holds, dense otherwise."""
    if check_pmc(h).satisfied:
        return evolve_factorized(h, state, t)
    return evolve_full(h, state, t)


def evolve_schedule(
    segments: Sequence[tuple[float, TrinaryHamiltonian]], state: TrinaryState
) -> TrinaryState:
    """Piecewise-constant time dependence, one closed-form segment at a time."""
    current = state
    for duration, h in segments:
        if duration < 0:
            raise ValueError("segment durations must be nonnegative")
        current = evolve(h, current, duration)
    return current


def evolve_swapped_factorized(
    h_sa: Operator,
    blocks_on_p: Sequence[Operator],
    state: TrinaryState,
    t: float,
    sa_basis: np.ndarray | None = None,
    force: bool = False,
) -> TrinaryState:
    """Symmetric variant where S x A programs the evolution of P.

    Realized by transposing the (P, SA) amplitude matrix and reusing the same
    blockwise engine with the roles exchanged; ``blocks_on_p`` holds one
    Hermitian P-space generator per SA programming state.
    """
    dims = state.dims
    if h_sa.dim != dims.d_sa or len(blocks_on_p) != dims.d_sa:
        raise DimensionError("swapped-role dims do not match the state")
    _require_hermitian(h_sa.entries, "h_sa")
    for m, b in enumerate(blocks_on_p):
        if b.dim != dims.d_p:
            raise DimensionError("swapped blocks must act on the programming space")
        _require_hermitian(b.entries, f"swapped block {m}")
    if not force:
        norm = _swapped_pmc_norm(h_sa, blocks_on_p, sa_basis, dims)
        if norm > COMMUTATION_TOL:
            raise FactorizationPreconditionError(
                f"measurability condition violated (commutator norm {norm:.3e})"
            )
    psi = state.as_matrix().T  # (d_sa, d_p): SA is now the program side
    if sa_basis is not None:
        basis = _check_orthonormal(np.asarray(sa_basis, dtype=complex), dims.d_sa, "SA basis")
        psi = basis.conj().T @ psi
        h_program = basis.conj().T @ h_sa.entries @ basis
    else:
        h_program = h_sa.entries
    eigs = [_eig(b.entries) for b in blocks_on_p]
    out = _blockwise_propagate(h_program, eigs, psi, t)
    if sa_basis is not None:
        out = basis @ out
    return TrinaryState.from_dense(dims, StateVector(out.T.reshape(-1)))


def swapped_full_operator(
    h_sa: Operator,
    blocks_on_p: Sequence[Operator],
    dims: TrinaryDims,
    sa_basis: np.ndarray | None = None,
) -> Operator:
    """Dense oracle for the swapped-role Hamiltonian, in P x SA index order."""
    basis = (
        np.eye(dims.d_sa, dtype=complex)
        if sa_basis is None
        else np.asarray(sa_basis, dtype=complex)
    )
    out = np.kron(np.eye(dims.d_p), h_sa.entries)
    for m in range(dims.d_sa):
        proj = np.outer(basis[:, m], basis[:, m].conj())
        out = out + np.kron(blocks_on_p[m].entries, proj)
    return Operator(out)


def _swapped_pmc_norm(
    h_sa: Operator,
    blocks_on_p: Sequence[Operator],
    sa_basis: np.ndarray | None,
    dims: TrinaryDims,
) -> float:
    full = swapped_full_operator(h_sa, blocks_on_p, dims, sa_basis)
    programmed = Operator(full.entries - np.kron(np.eye(dims.d_p), h_sa.entries))
    return commutator_norm(programmed, Operator(np.kron(np.eye(dims.d_p), h_sa.entries)))


@dataclass(frozen=True)
class EntanglementTrajectory:
    """Entropies along an evolution: P|(SA) and per-branch S|A, per time."""

    times: tuple[float, ...]
    s_psa: np.ndarray
    s_sa_branches: np.ndarray  # shape (len(times), d_p)
    used_factorized: bool

    def __post_init__(self):
        object.__setattr__(self, "s_psa", np.asarray(self.s_psa, dtype=float))
        object.__setattr__(self, "s_sa_branches", np.asarray(self.s_sa_branches, dtype=float))

    @property
    def monotone_psa(self) -> bool:
        """Whether the P|(SA) entropy never decreased (recorded, not promised)."""
        return bool(np.all(np.diff(self.s_psa) >= -1e-9))


def entanglement_trajectory(
    h: TrinaryHamiltonian, state: TrinaryState, times: Sequence[float]
) -> EntanglementTrajectory:
    """Record dual entropies at the given times (ascending, starting at 0)."""
    times = tuple(float(t) for t in times)
    if len(times) == 0 or times[0] != 0.0 or any(b < a for a, b in zip(times, times[1:])):
        raise ValueError("times must ascend and start at 0")
    factorized = check_pmc(h).satisfied

    if factorized:
        psi0 = state.as_matrix()
        w = h.programming_basis
        if w is not None:
            psi0 = w.conj().T @ psi0
            h_program = w.conj().T @ h.h_p.entries @ w
        else:
            h_program = h.h_p.entries
        block_eigs = [_eig(b.entries) for b in h.blocks]
    else:
        full_eig = _eig(h.full_operator().entries)

    s_psa = np.zeros(len(times))
    s_branches = np.zeros((len(times), h.dims.d_p))
    for k, t in enumerate(times):
        if factorized:
            out = _blockwise_propagate(h_program, block_eigs, psi0, t)
            if w is not None:
                out = w @ out
            st = TrinaryState.from_dense(h.dims, StateVector(out.reshape(-1)))
        else:
            amp = _expi(full_eig, t) @ state.dense.amplitudes
            st = TrinaryState.from_dense(h.dims, StateVector(amp))
        s_psa[k], s_branches[k] = dual_entropies(st)
    return EntanglementTrajectory(
        times=times, s_psa=s_psa, s_sa_branches=s_branches, used_factorized=factorized
    )


def random_trinary_hamiltonian(
    dims: TrinaryDims, seed, kind: str = "pmc"
) -> TrinaryHamiltonian:
    """Seeded Hamiltonian families for verification runs.

    kind "pmc": H_P diagonal in the programming basis, distinct blocks (the
    measurability condition holds exactly).  kind "coupled": H_P mixes
    programming states pairwise while paired blocks are identical, so the
    condition still holds with a non-diagonal H_P.  kind "violating": generic
    H_P with distinct blocks, so the condition fails.
    """
    rng = np.random.default_rng(seed)
    d_p, d_sa = dims.d_p, dims.d_sa

    def herm(dim: int) -> Operator:
        m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        return Operator(0.5 * (m + m.conj().T))

    if kind == "pmc":
        h_p = Operator(np.diag(rng.normal(size=d_p)).astype(complex))
        blocks = tuple(herm(d_sa) for _ in range(d_p))
    elif kind == "coupled":
        h_p_entries = np.zeros((d_p, d_p), dtype=complex)
        blocks_list: list[Operator] = [None] * d_p  # type: ignore[list-item]
        pairs = [(i, i + 1) for i in range(0, d_p - 1, 2)]
        leftovers = [d_p - 1] if d_p % 2 else []
        for i, j in pairs:
            sub = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            sub = 0.5 * (sub + sub.conj().T)
            h_p_entries[np.ix_([i, j], [i, j])] = sub
            shared = herm(d_sa)
            blocks_list[i] = shared
            blocks_list[j] = shared
        for i in leftovers:
            h_p_entries[i, i] = rng.normal()
            blocks_list[i] = herm(d_sa)
        h_p = Operator(h_p_entries)
        blocks = tuple(blocks_list)
    elif kind == "violating":
        h_p = seeded_random("hermitian", d_p, rng.integers(2**32))
        blocks = tuple(herm(d_sa) for _ in range(d_p))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return TrinaryHamiltonian(dims=dims, h_p=h_p, blocks=blocks)


def random_block_structure(
    d_s: int, d_a: int, seed, kind: str = "sapmc"
) -> ProgrammedBlockStructure:
    """Seeded second-level block structures.

    kind "sapmc": H_S diagonal in the block's S basis (condition holds);
    kind "shared": identical apparatus generators with a generic H_S
    (condition holds through the identity structure); kind "violating":
    generic H_S against distinct generators.
    """
    rng = np.random.default_rng(seed)

    def herm(dim: int) -> Operator:
        m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        return Operator(0.5 * (m + m.conj().T))

    basis = seeded_random("unitary", d_s, rng.integers(2**32)).entries
    if kind == "sapmc":
        h_s = Operator(basis @ np.diag(rng.normal(size=d_s)).astype(complex) @ basis.conj().T)
        gens = tuple(herm(d_a) for _ in range(d_s))
    elif kind == "shared":
        h_s = herm(d_s)
        shared = herm(d_a)
        gens = tuple(shared for _ in range(d_s))
        basis = np.eye(d_s, dtype=complex)
    elif kind == "violating":
        h_s = herm(d_s)
        gens = tuple(herm(d_a) for _ in range(d_s))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return ProgrammedBlockStructure(s_basis=basis, a_generators=gens, h_s=h_s)
