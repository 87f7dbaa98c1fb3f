"""Independent reference implementations used to check the library.

Nothing here imports library internals beyond plain data access; every
routine recomputes its quantity from first principles (index formulas,
explicit integration, dense matrix assembly) so agreement is meaningful.
"""

import numpy as np


def kron_entry_vector(a: np.ndarray, b: np.ndarray, i: int, j: int) -> complex:
    """(a (x) b)[i*len(b)+j] from the index formula."""
    return a[i] * b[j]


def kron_entry_matrix(a: np.ndarray, b: np.ndarray, i, j, k, l) -> complex:
    """(A (x) B)[(i,j),(k,l)] = A[i,k] * B[j,l]."""
    return a[i, k] * b[j, l]


def dense_kron(*factors: np.ndarray) -> np.ndarray:
    out = np.array([[1.0 + 0j]]) if factors[0].ndim == 2 else np.array([1.0 + 0j])
    for f in factors:
        out = np.kron(out, f)
    return out


def reduced_density(psi: np.ndarray, dims: tuple[int, int], keep: str) -> np.ndarray:
    """Partial trace of |psi><psi| by explicit double loop."""
    d_l, d_r = dims
    m = psi.reshape(d_l, d_r)
    if keep == "left":
        return m @ m.conj().T
    return m.T @ m.conj()


def eigenvalue_entropy(rho: np.ndarray) -> float:
    """Von Neumann entropy from the eigenvalues of a density matrix."""
    w = np.linalg.eigvalsh(rho)
    w = w[w > 1e-15]
    return float(-np.sum(w * np.log(w)))


def rk4_propagator(h: np.ndarray, t: float, dt: float = 1e-4) -> np.ndarray:
    """Integrate dU/dt = -i H U from the identity with classic Runge-Kutta."""
    dim = h.shape[0]
    u = np.eye(dim, dtype=complex)
    steps = int(round(t / dt))

    def f(mat):
        return -1j * (h @ mat)

    for _ in range(steps):
        k1 = f(u)
        k2 = f(u + 0.5 * dt * k1)
        k3 = f(u + 0.5 * dt * k2)
        k4 = f(u + dt * k3)
        u = u + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return u


def dense_programmed_matrix(branch_matrices) -> np.ndarray:
    """Block-diagonal matrix over the programming index, assembled directly."""
    d_p = len(branch_matrices)
    d_sa = branch_matrices[0].shape[0]
    full = np.zeros((d_p * d_sa, d_p * d_sa), dtype=complex)
    for r, block in enumerate(branch_matrices):
        full[r * d_sa : (r + 1) * d_sa, r * d_sa : (r + 1) * d_sa] = block
    return full


def dense_trinary_hamiltonian(h_p: np.ndarray, blocks, basis: np.ndarray | None = None) -> np.ndarray:
    """H_P (x) I + sum_n |e_n><e_n| (x) B_n assembled without the library."""
    d_p = h_p.shape[0]
    d_sa = blocks[0].shape[0]
    if basis is None:
        basis = np.eye(d_p, dtype=complex)
    full = np.kron(h_p, np.eye(d_sa))
    for n in range(d_p):
        proj = np.outer(basis[:, n], basis[:, n].conj())
        full = full + np.kron(proj, blocks[n])
    return full


def expm_hermitian(h: np.ndarray, t: float) -> np.ndarray:
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def born_probabilities(psi: np.ndarray, basis_columns: np.ndarray) -> np.ndarray:
    """|<b_j|psi>|^2 computed per column with explicit inner products."""
    return np.array(
        [abs(np.vdot(basis_columns[:, j], psi)) ** 2 for j in range(basis_columns.shape[1])]
    )


def operator_span_rank(operators, tol: float = 1e-8) -> int:
    """Rank of the linear span of matrices via their Gram matrix."""
    vecs = np.array([op.reshape(-1) for op in operators])
    gram = vecs @ vecs.conj().T
    return int(np.sum(np.linalg.svd(gram, compute_uv=False) > tol))


def pauli_projectors():
    """Rank-1 projectors of the three qubit Pauli eigenbases."""
    z0 = np.array([1, 0], dtype=complex)
    z1 = np.array([0, 1], dtype=complex)
    x0 = np.array([1, 1], dtype=complex) / np.sqrt(2)
    x1 = np.array([1, -1], dtype=complex) / np.sqrt(2)
    y0 = np.array([1, 1j], dtype=complex) / np.sqrt(2)
    y1 = np.array([1, -1j], dtype=complex) / np.sqrt(2)
    return {
        "Z": [np.outer(v, v.conj()) for v in (z0, z1)],
        "X": [np.outer(v, v.conj()) for v in (x0, x1)],
        "Y": [np.outer(v, v.conj()) for v in (y0, y1)],
    }
