"""Trinary (programming / system / apparatus) states and programmed unitaries.

A trinary state lives on P x S x A with composite index
``(p * d_s + s) * d_a + a``.  A programmed unitary is a family of d_P
unitary blocks on S x A, one per programming basis state; it is stored as
blocks and only densified on request.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import (
    DimensionError,
    Operator,
    StateVector,
    entanglement_entropy,
    schmidt_decompose,
)

BASIS_ORTHO_TOL = 1e-10
GRAM_RANK_TOL = 1e-8
EMPTY_BRANCH_TOL = 1e-14
BRANCH_VIEW_TOL = 1e-10


class PointerCapacityError(ValueError):
    """Apparatus has fewer levels than the measured system needs."""


class BranchCountError(ValueError):
    """Number of program branches does not match the programming dimension."""


@dataclass(frozen=True)
class TrinaryDims:
    """Dimension triple (d_s, d_a, d_p) with the validity predicates."""

    d_s: int
    d_a: int
    d_p: int

    def __post_init__(self):
        for name in ("d_s", "d_a", "d_p"):
            if getattr(self, name) < 1:
                raise DimensionError(f"{name} must be positive")

    @property
    def d_sa(self) -> int:
        return self.d_s * self.d_a

    @property
    def total(self) -> int:
        return self.d_p * self.d_s * self.d_a

    @property
    def measurability_valid(self) -> bool:
        """Programming side matches the programmed side: d_p = d_s*d_a, d_a = d_s."""
        return self.d_p == self.d_s * self.d_a and self.d_a == self.d_s

    @property
    def minimal_complete(self) -> bool:
        """Programming space can address a complete operator set: d_p >= d_s^2."""
        return self.d_p >= self.d_s * self.d_s


def _check_orthonormal(basis: np.ndarray, dim: int, what: str) -> np.ndarray:
    b = np.asarray(basis, dtype=complex)
    if b.shape != (dim, dim):
        raise DimensionError(f"{what} must be a {dim}x{dim} matrix of basis columns")
    if np.max(np.abs(b.conj().T @ b - np.eye(dim))) > BASIS_ORTHO_TOL:
        raise ValueError(f"{what} columns are not orthonormal")
    return b


def standard_basis(name: str, dim: int) -> np.ndarray:
    """Named measurement basis as a matrix of columns.

    Z is the computational basis for any dim; X is the Fourier basis
    (the Hadamard basis at dim 2); Y exists for dim 2 only.
    """
    if name == "Z":
        return np.eye(dim, dtype=complex)
    if name == "X":
        j = np.arange(dim)
        return np.exp(2j * np.pi * np.outer(j, j) / dim) / np.sqrt(dim)
    if name == "Y":
        if dim != 2:
            raise ValueError("Y basis is only defined for dim 2")
        return np.array([[1, 1], [1j, -1j]], dtype=complex) / np.sqrt(2)
    raise ValueError(f"unknown basis name {name!r}")


def cyclic_shift(dim: int) -> Operator:
    """The pointer shift X with X|k> = |k+1 mod dim>."""
    x = np.zeros((dim, dim), dtype=complex)
    x[(np.arange(dim) + 1) % dim, np.arange(dim)] = 1.0
    return Operator(x)


def build_pointer_measurement(basis: np.ndarray, d_a: int) -> Operator:
    """Pointer-measurement unitary sum_j |b_j><b_j| (x) X^j on S x A.

    The apparatus realizes the momentum-shift pointer as a cyclic shift, so
    applying the result to |psi> (x) |0,A> leaves the apparatus pointing at
    the measured basis index.
    """
    b = np.asarray(basis, dtype=complex)
    d_s = b.shape[0]
    if d_a < d_s:
        raise PointerCapacityError(
            f"apparatus dim {d_a} < system dim {d_s}: not enough pointer positions"
        )
    b = _check_orthonormal(b, d_s, "pointer basis")
    shift = cyclic_shift(d_a).entries
    u = np.zeros((d_s * d_a, d_s * d_a), dtype=complex)
    power = np.eye(d_a, dtype=complex)
    for j in range(d_s):
        proj = np.outer(b[:, j], b[:, j].conj())
        u += np.kron(proj, power)
        power = shift @ power
    return Operator(u)


@dataclass(frozen=True)
class ProgramBranch:
    """One block of a programmed unitary: what happens if P reads ``index``."""

    index: int
    branch_unitary: Operator
    label: str | None = None

    def __post_init__(self):
        if not self.branch_unitary.is_unitary():
            raise ValueError(f"branch {self.index} is not unitary")


@dataclass(frozen=True)
class ProgrammedUnitary:
    """Block family {(|r,P>, U_SA(r))}; one unitary per programming state."""

    dims: TrinaryDims
    branches: tuple[ProgramBranch, ...]

    def __post_init__(self):
        if len(self.branches) != self.dims.d_p:
            raise BranchCountError(
                f"got {len(self.branches)} branches for d_p = {self.dims.d_p}"
            )
        for r, br in enumerate(self.branches):
            if br.branch_unitary.dim != self.dims.d_sa:
                raise DimensionError(f"branch {r} acts on dim {br.branch_unitary.dim}, "
                                     f"expected {self.dims.d_sa}")

    def branch_matrix(self, r: int) -> np.ndarray:
        return self.branches[r].branch_unitary.entries

    def densify(self) -> Operator:
        """Full block-diagonal unitary on P x S x A (test/oracle use)."""
        d_sa, total = self.dims.d_sa, self.dims.total
        full = np.zeros((total, total), dtype=complex)
        for r in range(self.dims.d_p):
            sl = slice(r * d_sa, (r + 1) * d_sa)
            full[sl, sl] = self.branch_matrix(r)
        return Operator(full)


def build_programmed_unitary(
    dims: TrinaryDims,
    branch_bases: Sequence[np.ndarray],
    labels: Sequence[str] | None = None,
) -> ProgrammedUnitary:
    """Programmed unitary whose branch r pointer-measures branch_bases[r]."""
    if len(branch_bases) != dims.d_p:
        raise BranchCountError(
            f"need {dims.d_p} branch bases, got {len(branch_bases)}"
        )
    if labels is not None and len(labels) != dims.d_p:
        raise BranchCountError("labels length must match d_p")
    branches = []
    for r, basis in enumerate(branch_bases):
        u = build_pointer_measurement(basis, dims.d_a)
        label = labels[r] if labels is not None else None
        branches.append(ProgramBranch(index=r, branch_unitary=u, label=label))
    return ProgrammedUnitary(dims=dims, branches=tuple(branches))


@dataclass(frozen=True)
class TrinaryState:
    """Pure state of P x S x A with an optional branch view.

    ``branch_view`` holds (g_r, |r,SA>) pairs such that the dense state is
    sum_r g_r |r,P> (x) |r,SA>.  With ``p_basis`` unset the P-side vectors are
    the programming (computational) basis and the view has d_p entries; after
    ``to_schmidt_form`` the view is over the Schmidt basis carried in
    ``p_basis`` and has min(d_p, d_sa) entries.
    """

    dims: TrinaryDims
    dense: StateVector
    branch_view: tuple[tuple[complex, StateVector], ...] | None = None
    p_basis: tuple[StateVector, ...] | None = None

    def __post_init__(self):
        if self.dense.dim != self.dims.total:
            raise DimensionError(
                f"dense dim {self.dense.dim} != d_p*d_s*d_a = {self.dims.total}"
            )
        if self.branch_view is not None:
            weights = np.array([abs(g) ** 2 for g, _ in self.branch_view])
            if abs(weights.sum() - 1.0) > BRANCH_VIEW_TOL:
                raise ValueError("branch weights do not sum to 1")
            if np.max(np.abs(self._reassemble() - self.dense.amplitudes)) > BRANCH_VIEW_TOL:
                raise ValueError("branch view does not reconstruct the dense state")

    def _reassemble(self) -> np.ndarray:
        amp = np.zeros(self.dims.total, dtype=complex)
        for r, (g, sa) in enumerate(self.branch_view):
            p_vec = (
                self.p_basis[r].amplitudes
                if self.p_basis is not None
                else np.eye(self.dims.d_p, dtype=complex)[r]
            )
            amp += g * np.kron(p_vec, sa.amplitudes)
        return amp

    @staticmethod
    def from_product(
        dims: TrinaryDims, chi: StateVector, psi: StateVector, phi: StateVector
    ) -> TrinaryState:
        """Separable start |chi,P> (x) |psi,S> (x) |phi,A>."""
        if (chi.dim, psi.dim, phi.dim) != (dims.d_p, dims.d_s, dims.d_a):
            raise DimensionError("factor dims do not match TrinaryDims")
        sa = StateVector(np.kron(psi.amplitudes, phi.amplitudes))
        dense = StateVector(np.kron(chi.amplitudes, sa.amplitudes))
        view = tuple((complex(chi.amplitudes[r]), sa) for r in range(dims.d_p))
        return TrinaryState(dims=dims, dense=dense, branch_view=view)

    @staticmethod
    def from_branches(
        dims: TrinaryDims,
        pairs: Sequence[tuple[complex, StateVector]],
        p_basis: Sequence[StateVector] | None = None,
    ) -> TrinaryState:
        amp = np.zeros(dims.total, dtype=complex)
        for r, (g, sa) in enumerate(pairs):
            p_vec = (
                p_basis[r].amplitudes
                if p_basis is not None
                else np.eye(dims.d_p, dtype=complex)[r]
            )
            amp += g * np.kron(p_vec, sa.amplitudes)
        return TrinaryState(
            dims=dims,
            dense=StateVector(amp),
            branch_view=tuple((complex(g), sa) for g, sa in pairs),
            p_basis=tuple(p_basis) if p_basis is not None else None,
        )

    @staticmethod
    def from_dense(dims: TrinaryDims, dense: StateVector) -> TrinaryState:
        return TrinaryState(dims=dims, dense=dense)

    def as_matrix(self) -> np.ndarray:
        """Amplitudes as a (d_p, d_sa) matrix over the programming basis."""
        return self.dense.amplitudes.reshape(self.dims.d_p, self.dims.d_sa)

    def branch_weights(self) -> np.ndarray:
        """|g_r|^2 per programming basis state (rows of the dense state)."""
        rows = self.as_matrix()
        return np.sum(np.abs(rows) ** 2, axis=1)

    def branch_state(self, r: int) -> StateVector:
        """Normalized S x A state conditioned on programming index r."""
        if self.branch_view is not None and self.p_basis is None:
            return self.branch_view[r][1]
        row = self.as_matrix()[r]
        nrm = np.linalg.norm(row)
        if nrm * nrm <= EMPTY_BRANCH_TOL:
            raise ValueError(f"branch {r} carries no weight")
        return StateVector(row / nrm)


def dual_entropies(state: TrinaryState) -> tuple[float, np.ndarray]:
    """P|(SA) entropy plus each nonempty branch's S|A entropy (0 when empty)."""
    dims = state.dims
    s_psa = entanglement_entropy(state.dense, (dims.d_p, dims.d_sa))
    rows = state.as_matrix()
    branch = np.zeros(dims.d_p)
    for r in range(dims.d_p):
        nrm = np.linalg.norm(rows[r])
        if nrm * nrm > EMPTY_BRANCH_TOL:
            branch[r] = entanglement_entropy(
                StateVector(rows[r] / nrm), (dims.d_s, dims.d_a)
            )
    return s_psa, branch


def apply_programmed(pu: ProgrammedUnitary, state: TrinaryState) -> TrinaryState:
    """Apply a programmed unitary block-wise (no full-space matrix is built)."""
    if pu.dims != state.dims:
        raise DimensionError("programmed unitary and state dims differ")
    if state.branch_view is not None and state.p_basis is None:
        pairs = [
            (g, StateVector(pu.branch_matrix(r) @ sa.amplitudes))
            for r, (g, sa) in enumerate(state.branch_view)
        ]
        return TrinaryState.from_branches(state.dims, pairs)
    rows = state.as_matrix()
    out = np.empty_like(rows)
    for r in range(pu.dims.d_p):
        out[r] = pu.branch_matrix(r) @ rows[r]
    return TrinaryState.from_dense(state.dims, StateVector(out.reshape(-1)))


def to_schmidt_form(state: TrinaryState) -> TrinaryState:
    """Rewrite the branch view in the Schmidt form of the P|(SA) cut.

    Coefficients become real, nonnegative and descending, the branch states
    orthonormal; the dense amplitudes are untouched.  The P-side Schmidt
    basis rides along in ``p_basis`` (it equals the programming basis only
    when the reduced state on P is already diagonal there).
    """
    sd = schmidt_decompose(state.dense, (state.dims.d_p, state.dims.d_sa))
    pairs = [(complex(c), rv) for c, rv in zip(sd.coefficients, sd.right_basis)]
    return TrinaryState(
        dims=state.dims,
        dense=state.dense,
        branch_view=tuple(pairs),
        p_basis=sd.left_basis,
    )


def pointer_readout_operators(branch_unitary: Operator, d_a: int, probe_a: StateVector) -> list[np.ndarray]:
    """Induced system measurement operators of one branch.

    For each apparatus reading ``a`` this returns
    K_a^dag K_a with K_a = (I (x) <a|) U (I (x) |probe_a>), i.e. the
    probability operator for the pointer to land on ``a`` when the apparatus
    starts in the probe state.  For a pointer measurement these are exactly
    the projectors onto the measured basis.
    """
    d_sa = branch_unitary.dim
    if d_sa % d_a != 0:
        raise DimensionError("branch dim is not divisible by apparatus dim")
    d_s = d_sa // d_a
    if probe_a.dim != d_a:
        raise DimensionError("probe state must live on the apparatus")
    u = branch_unitary.entries.reshape(d_s, d_a, d_s, d_a)
    # K_a[s_out, s_in] = sum_a_in U[s_out, a, s_in, a_in] probe[a_in]
    kraus = np.einsum("iasb,b->ias", u, probe_a.amplitudes)
    return [kraus[:, a, :].conj().T @ kraus[:, a, :] for a in range(d_a)]


@dataclass(frozen=True)
class CompletenessReport:
    """Outcome of the informational-completeness validation."""

    dims_ok: bool
    minimal_dims_ok: bool
    tomographic_rank: int
    complete: bool


def validate_informational_completeness(
    pu: ProgrammedUnitary, probe_a: StateVector | None = None
) -> CompletenessReport:
    """Check whether the program suffices to measure a complete operator set.

    The induced measurement operators of every branch are collected and the
    rank of their Hilbert-Schmidt Gram matrix is compared against d_s^2.
    Both dimension predicates are reported separately.
    """
    dims = pu.dims
    if probe_a is None:
        probe_a = StateVector.basis(dims.d_a, 0)
    ops = []
    for br in pu.branches:
        for e in pointer_readout_operators(br.branch_unitary, dims.d_a, probe_a):
            if np.max(np.abs(e)) > EMPTY_BRANCH_TOL:
                ops.append(e.reshape(-1))
    if ops:
        stacked = np.array(ops)
        gram = stacked @ stacked.conj().T
        rank = int(np.sum(np.linalg.svd(gram, compute_uv=False) > GRAM_RANK_TOL))
    else:
        rank = 0
    dims_ok = dims.measurability_valid
    return CompletenessReport(
        dims_ok=dims_ok,
        minimal_dims_ok=dims.minimal_complete,
        tomographic_rank=rank,
        complete=bool(dims_ok and rank >= dims.d_s * dims.d_s),
    )
