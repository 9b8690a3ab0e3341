"""Dense complex matrix kernel: Fock/Pauli construction, tensor products,
Hermitian eigendecomposition and linear solves.

No physics conventions live here beyond basis ordering: the qubit basis is
(|e>, |g>) so sigma_z = diag(+1, -1), and composite spaces put the qubit
factor first.  Everything is a plain dense complex128 array wrapped in a
thin immutable container.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import IllConditionedWarning, NonHermitianError, SingularSystemError

HERMITICITY_RTOL = 1e-12
EIGEN_RESIDUAL_RTOL = 1e-10
SOLVE_RESIDUAL_RTOL = 1e-9
CONDITION_WARN_THRESHOLD = 1e12


@dataclass(frozen=True)
class OperatorMatrix:
    """Square complex matrix with dimension metadata and a space tag."""

    entries: np.ndarray
    space: str  # "qubit", "fock" or "composite"
    dim: int = field(init=False)

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"operator must be square, got shape {entries.shape}")
        if self.space not in ("qubit", "fock", "composite"):
            raise ValueError(f"unknown space tag {self.space!r}")
        entries = entries.copy()
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "dim", entries.shape[0])

    def hermiticity_defect(self) -> float:
        """max |M - M^dag| relative to max |M| (0 for the zero matrix)."""
        scale = np.abs(self.entries).max()
        if scale == 0.0:
            return 0.0
        return float(np.abs(self.entries - self.entries.conj().T).max() / scale)

    def is_hermitian(self, rtol: float = HERMITICITY_RTOL) -> bool:
        return self.hermiticity_defect() <= rtol

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, self.space)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.dim != other.dim or self.space != other.space:
            raise ValueError("operator product requires matching space and dimension")
        return OperatorMatrix(self.entries @ other.entries, self.space)


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues and orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        # copy before freezing so caller-owned arrays are never locked
        values = np.array(self.values, dtype=float)
        vectors = np.array(self.vectors, dtype=complex)
        values.setflags(write=False)
        vectors.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "vectors", vectors)


def qubit_identity() -> OperatorMatrix:
    return OperatorMatrix(np.eye(2), "qubit")


def sigma_x() -> OperatorMatrix:
    return OperatorMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]), "qubit")


def sigma_y() -> OperatorMatrix:
    return OperatorMatrix(np.array([[0.0, -1.0j], [1.0j, 0.0]]), "qubit")


def sigma_z() -> OperatorMatrix:
    return OperatorMatrix(np.diag([1.0, -1.0]), "qubit")


def sigma_plus() -> OperatorMatrix:
    """|e><g| raising operator."""
    return OperatorMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]), "qubit")


def sigma_minus() -> OperatorMatrix:
    """|g><e| lowering operator."""
    return OperatorMatrix(np.array([[0.0, 0.0], [1.0, 0.0]]), "qubit")


def fock_identity(n_max: int) -> OperatorMatrix:
    return OperatorMatrix(np.eye(n_max + 1), "fock")


def fock_annihilation(n_max: int) -> OperatorMatrix:
    """Photon annihilation operator on the Fock space truncated at n_max.

    <n-1|a|n> = sqrt(n); strictly upper-bidiagonal, (n_max+1) x (n_max+1).
    """
    if not isinstance(n_max, (int, np.integer)) or n_max < 1:
        raise ValueError(f"n_max must be an integer >= 1, got {n_max!r}")
    amps = np.sqrt(np.arange(1, n_max + 1, dtype=float))
    return OperatorMatrix(np.diag(amps, k=1), "fock")


def fock_number(n_max: int) -> OperatorMatrix:
    return OperatorMatrix(np.diag(np.arange(n_max + 1, dtype=float)), "fock")


def tensor(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    """Kronecker product qubit (x) fock -> composite; qubit factor first."""
    if a.space != "qubit" or a.dim != 2:
        raise ValueError("first tensor factor must be a 2x2 qubit operator")
    if b.space != "fock":
        raise ValueError("second tensor factor must be a Fock-space operator")
    return OperatorMatrix(np.kron(a.entries, b.entries), "composite")


def eig_hermitian(op, hermiticity_rtol: float = 1e-10) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian operator.

    Eigenvalues come out ascending; eigenvectors are orthonormal columns with
    the phase fixed so the largest-magnitude component of each vector is real
    and positive (stabilizes matrix-element signs across parameter sweeps).
    Rejects input whose Hermiticity defect exceeds `hermiticity_rtol`.
    """
    matrix = op.entries if isinstance(op, OperatorMatrix) else np.asarray(op, dtype=complex)
    scale = np.abs(matrix).max()
    if scale > 0 and np.abs(matrix - matrix.conj().T).max() > hermiticity_rtol * scale:
        raise NonHermitianError(
            f"matrix is not Hermitian within rtol={hermiticity_rtol:g}"
        )
    sym = 0.5 * (matrix + matrix.conj().T)
    values, vectors = np.linalg.eigh(sym)
    vectors = _fix_phases(vectors)
    return EigenDecomposition(values, vectors)


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    out = vectors.copy()
    for k in range(out.shape[1]):
        idx = int(np.argmax(np.abs(out[:, k])))
        pivot = out[idx, k]
        if pivot != 0:
            out[:, k] *= np.abs(pivot) / pivot
    return out


def solve_linear(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A x = b, distinguishing singularity from mere ill-conditioning.

    Raises SingularSystemError if LAPACK reports a singular factorization or
    the residual check ||Ax - b|| <= 1e-9 ||b|| fails; emits
    IllConditionedWarning when cond(A) > 1e12 but the solve still meets the
    residual bound.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"linear system is singular: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise SingularSystemError("linear solve produced non-finite entries")
    residual = np.linalg.norm(a @ x - b)
    bound = SOLVE_RESIDUAL_RTOL * max(np.linalg.norm(b), np.finfo(float).tiny)
    if residual > bound:
        cond = np.linalg.cond(a)
        if cond > 1 / np.finfo(float).eps:
            raise SingularSystemError(
                f"system numerically singular (cond ~ {cond:.2e}, residual {residual:.2e})"
            )
        raise SingularSystemError(
            f"residual {residual:.2e} exceeds bound {bound:.2e}"
        )
    cond = np.linalg.cond(a)
    if cond > CONDITION_WARN_THRESHOLD:
        warnings.warn(
            f"linear system ill-conditioned (cond ~ {cond:.2e})", IllConditionedWarning
        )
    return x
