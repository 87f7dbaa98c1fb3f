"""Dense complex linear algebra over finite-dimensional Hilbert spaces.

Everything here is a pure function over immutable value types; desk-scale
dimensions only (dense ndarrays, no sparse formats).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

NORM_TOL = 1e-12
HERMITICITY_TOL = 1e-12
UNITARITY_TOL = 1e-10
SCHMIDT_TOL = 1e-12  # coefficients below this count as rank zero


class DimensionError(ValueError):
    """Operands have incompatible or non-factorizable dimensions."""


class KindMismatchError(TypeError):
    """Mixed state/operator operands where one kind is required."""


class NormalizationError(ValueError):
    """State vector is not normalized to 1 within tolerance."""


class HermiticityError(ValueError):
    """Operator that must be Hermitian is not."""


def _as_complex(a, ndim: int) -> np.ndarray:
    arr = np.array(a, dtype=complex, order="C")  # owned copy, safe to freeze
    if arr.ndim != ndim:
        raise DimensionError(f"expected {ndim}-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError("non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StateVector:
    """Normalized pure state on a dim-dimensional Hilbert space."""

    amplitudes: np.ndarray

    def __post_init__(self):
        arr = _as_complex(self.amplitudes, 1)
        if arr.size < 1:
            raise DimensionError("empty state vector")
        nrm = float(np.linalg.norm(arr))
        if abs(nrm * nrm - 1.0) > NORM_TOL:
            raise NormalizationError(f"squared norm {nrm * nrm!r} != 1")
        object.__setattr__(self, "amplitudes", arr)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @staticmethod
    def basis(dim: int, index: int) -> StateVector:
        amp = np.zeros(dim, dtype=complex)
        amp[index] = 1.0
        return StateVector(amp)

    @staticmethod
    def uniform(dim: int) -> StateVector:
        return StateVector(np.full(dim, 1.0 / np.sqrt(dim), dtype=complex))

    @staticmethod
    def from_array(a) -> StateVector:
        """Normalize an arbitrary nonzero vector into a StateVector."""
        arr = np.asarray(a, dtype=complex)
        nrm = np.linalg.norm(arr)
        if nrm == 0:
            raise NormalizationError("cannot normalize the zero vector")
        return StateVector(arr / nrm)

    def inner(self, other: StateVector) -> complex:
        if other.dim != self.dim:
            raise DimensionError("inner product of unequal dims")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def projector(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class Operator:
    """Square complex matrix acting on a dim-dimensional space."""

    entries: np.ndarray

    def __post_init__(self):
        arr = _as_complex(self.entries, 2)
        if arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise DimensionError(f"operator must be square, got {arr.shape}")
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @staticmethod
    def identity(dim: int) -> Operator:
        return Operator(np.eye(dim, dtype=complex))

    def dagger(self) -> Operator:
        return Operator(self.entries.conj().T)

    def is_unitary(self, tol: float = UNITARITY_TOL) -> bool:
        gram = self.entries.conj().T @ self.entries
        return bool(np.max(np.abs(gram - np.eye(self.dim))) <= tol)

    def is_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        return bool(np.max(np.abs(self.entries - self.entries.conj().T)) <= tol)

    def apply(self, psi: StateVector) -> StateVector:
        if psi.dim != self.dim:
            raise DimensionError("operator/state dim mismatch")
        return StateVector(self.entries @ psi.amplitudes)

    def __matmul__(self, other: Operator) -> Operator:
        if not isinstance(other, Operator):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionError("operator dim mismatch")
        return Operator(self.entries @ other.entries)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix."""

    entries: np.ndarray

    def __post_init__(self):
        arr = _as_complex(self.entries, 2)
        if arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"density matrix must be square, got {arr.shape}")
        if np.max(np.abs(arr - arr.conj().T)) > HERMITICITY_TOL:
            raise HermiticityError("density matrix is not Hermitian")
        tr = complex(np.trace(arr))
        if abs(tr - 1.0) > NORM_TOL:
            raise ValueError(f"trace {tr!r} != 1")
        if float(np.min(np.linalg.eigvalsh(arr))) < -1e-10:
            raise ValueError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Ascending real spectrum."""
        return np.linalg.eigvalsh(self.entries)

    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.entries))


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Bipartite Schmidt form: coefficients plus paired orthonormal bases.

    coefficients are nonnegative and descending; reconstruction is
    sum_k c_k |left_k> x |right_k|.
    """

    coefficients: np.ndarray
    left_basis: tuple[StateVector, ...]
    right_basis: tuple[StateVector, ...]
    cut: tuple[int, int]

    def __post_init__(self):
        coeffs = np.array(self.coefficients, dtype=float)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def rank(self) -> int:
        return int(np.sum(self.coefficients > SCHMIDT_TOL))

    def reconstruct(self) -> StateVector:
        dim_l, dim_r = self.cut
        amp = np.zeros(dim_l * dim_r, dtype=complex)
        for c, lv, rv in zip(self.coefficients, self.left_basis, self.right_basis):
            amp += c * np.kron(lv.amplitudes, rv.amplitudes)
        return StateVector(amp)


def tensor_product(a, b):
    """Kronecker product of two states or two operators (never mixed)."""
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, Operator) and isinstance(b, Operator):
        return Operator(np.kron(a.entries, b.entries))
    raise KindMismatchError(
        f"cannot tensor {type(a).__name__} with {type(b).__name__}"
    )


def partial_trace(
    rho: DensityMatrix, dims: tuple[int, int], keep: Literal["left", "right"]
) -> DensityMatrix:
    """Trace out one side of a bipartite density matrix."""
    dim_l, dim_r = dims
    if dim_l * dim_r != rho.dim:
        raise DimensionError(f"{dims} does not factor dim {rho.dim}")
    blocks = rho.entries.reshape(dim_l, dim_r, dim_l, dim_r)
    if keep == "left":
        reduced = np.einsum("ikjk->ij", blocks)
    elif keep == "right":
        reduced = np.einsum("kikj->ij", blocks)
    else:
        raise ValueError(f"keep must be 'left' or 'right', got {keep!r}")
    # symmetrize away round-off so the DensityMatrix invariants hold exactly
    reduced = 0.5 * (reduced + reduced.conj().T)
    return DensityMatrix(reduced)


def schmidt_decompose(psi: StateVector, dims: tuple[int, int]) -> SchmidtDecomposition:
    """Schmidt decomposition of a pure state across the (dimL, dimR) cut."""
    dim_l, dim_r = dims
    if dim_l * dim_r != psi.dim:
        raise DimensionError(f"{dims} does not factor dim {psi.dim}")
    matrix = psi.amplitudes.reshape(dim_l, dim_r)
    u, s, vh = np.linalg.svd(matrix, full_matrices=False)
    left = tuple(StateVector(u[:, k]) for k in range(s.size))
    right = tuple(StateVector(vh[k, :]) for k in range(s.size))
    return SchmidtDecomposition(coefficients=s, left_basis=left, right_basis=right, cut=dims)


def entanglement_entropy(psi: StateVector, dims: tuple[int, int]) -> float:
    """Von Neumann entropy (nats) of either reduced state of a pure state."""
    s = schmidt_decompose(psi, dims).coefficients
    p = s * s
    p = p[p > 0]
    return float(max(0.0, -np.sum(p * np.log(p))))


def shannon_entropy(probs: Sequence[float]) -> float:
    """Shannon entropy (nats) of a probability vector."""
    p = np.asarray(probs, dtype=float)
    p = p[p > 0]
    return float(max(0.0, -np.sum(p * np.log(p))))


def hermitian_propagator(h: Operator, t: float) -> Operator:
    """exp(-i H t) for Hermitian H, via eigendecomposition."""
    if not h.is_hermitian():
        raise HermiticityError("propagator generator must be Hermitian")
    w, v = np.linalg.eigh(h.entries)
    phases = np.exp(-1j * w * t)
    return Operator((v * phases) @ v.conj().T)


def commutator_norm(a: Operator, b: Operator) -> float:
    """Max-entry magnitude of AB - BA."""
    if a.dim != b.dim:
        raise DimensionError("commutator of unequal dims")
    comm = a.entries @ b.entries - b.entries @ a.entries
    return float(np.max(np.abs(comm)))


def seeded_random(kind: Literal["state", "unitary", "hermitian"], dim: int, seed) -> StateVector | Operator:
    """Deterministic random state / Haar-like unitary / Hermitian operator."""
    if dim < 1:
        raise DimensionError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    if kind == "state":
        raw = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        return StateVector(raw / np.linalg.norm(raw))
    if kind == "unitary":
        z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
        q, r = np.linalg.qr(z)
        # fix the phase ambiguity of QR so the distribution is Haar-like
        d = np.diag(r)
        q = q * (d / np.abs(d))
        return Operator(q)
    if kind == "hermitian":
        m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        return Operator(0.5 * (m + m.conj().T))
    raise ValueError(f"unknown kind {kind!r}")


def random_orthonormal_basis(dim: int, seed) -> np.ndarray:
    """Columns form a random orthonormal basis of C^dim."""
    op = seeded_random("unitary", dim, seed)
    return op.entries
