"""Dense complex linear algebra and the density-matrix domain type.

Conventions used throughout the package:

* Matrices are dense ``numpy`` arrays of dtype ``complex128``, row-major.
* A density matrix on an n-dimensional Hilbert space is Hermitian, has
  unit trace, and is positive semidefinite (all within a tolerance,
  default ``DEFAULT_TOL``).
* Row vectorization stacks matrix rows: component ``r*n + s`` of
  ``row_vectorize(rho)`` is ``rho[r, s]``.  This ordering is fixed and
  not configurable; every superoperator in the package assumes it.
* Eigendecompositions of Hermitian matrices are returned with
  eigenvalues sorted descending and eigenvectors stored as the *rows*
  of a matrix, row k paired with eigenvalue k.
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass

import numpy as np

from .errors import (
    InvalidStateError,
    NoConvergenceError,
    NotHermitianError,
    OutsideBallError,
    WrongDimensionError,
)

DEFAULT_TOL = 1e-9

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_0, SIGMA_1, SIGMA_2, SIGMA_3)


def as_complex_matrix(entries, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Coerce ``entries`` to a finite 2-D complex array (a defensive copy).

    Raises ``ValueError`` on non-2-D input, a shape mismatch against the
    optional ``rows``/``cols``, or any NaN/Inf entry.
    """
    m = np.array(entries, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if rows is not None and m.shape[0] != rows:
        raise ValueError(f"expected {rows} rows, got {m.shape[0]}")
    if cols is not None and m.shape[1] != cols:
        raise ValueError(f"expected {cols} columns, got {m.shape[1]}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix contains non-finite entries")
    return m


def max_abs(m: np.ndarray) -> float:
    """Entrywise max-norm; 0.0 for empty input."""
    return float(np.abs(m).max()) if m.size else 0.0


def hermiticity_residual(m: np.ndarray) -> float:
    """Max-norm deviation of ``m`` from its own conjugate transpose."""
    return max_abs(m - m.conj().T)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class BlochVector:
    """Real 3-vector parameterizing a qubit state rho = (I + p.sigma)/2.

    Must lie inside the closed unit ball (up to ``DEFAULT_TOL``).
    """

    p1: float
    p2: float
    p3: float

    def __post_init__(self) -> None:
        for v in (self.p1, self.p2, self.p3):
            if not math.isfinite(v):
                raise OutsideBallError("Bloch components must be finite")
        if self.norm > 1.0 + DEFAULT_TOL:
            raise OutsideBallError(
                f"Bloch vector norm {self.norm:.6g} exceeds 1 (tol {DEFAULT_TOL:g})"
            )

    @property
    def norm(self) -> float:
        return math.sqrt(self.p1**2 + self.p2**2 + self.p3**2)

    def as_array(self) -> np.ndarray:
        return np.array([self.p1, self.p2, self.p3])


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated quantum state: Hermitian, unit-trace, positive semidefinite.

    ``tol`` bounds the accepted violation of each property at
    construction time.  The wrapped array is made read-only.
    """

    matrix: np.ndarray
    tol: InitVar[float] = DEFAULT_TOL

    def __post_init__(self, tol: float) -> None:
        try:
            m = as_complex_matrix(self.matrix)
        except ValueError as exc:
            raise InvalidStateError(str(exc)) from exc
        if m.shape[0] != m.shape[1]:
            raise InvalidStateError(f"density matrix must be square, got {m.shape}")
        herm = hermiticity_residual(m)
        if herm > tol:
            raise InvalidStateError(f"not Hermitian: residual {herm:.3g} > tol {tol:g}")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > tol:
            raise InvalidStateError(f"trace {tr:.6g} differs from 1 beyond tol {tol:g}")
        min_eig = float(np.linalg.eigvalsh((m + m.conj().T) / 2).min())
        if min_eig < -tol:
            raise InvalidStateError(
                f"not positive semidefinite: min eigenvalue {min_eig:.3g} < -{tol:g}"
            )
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Spectral data of a Hermitian matrix.

    ``eigenvalues`` are real and sorted descending; row k of
    ``eigenvectors`` is the unit-norm eigenvector for eigenvalue k, so
    ``M @ eigenvectors[k] == eigenvalues[k] * eigenvectors[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "eigenvalues", _freeze(np.array(self.eigenvalues, dtype=float)))
        object.__setattr__(self, "eigenvectors", _freeze(np.array(self.eigenvectors, dtype=complex)))

    def reconstruct(self) -> np.ndarray:
        """Rebuild the source matrix as sum_k lambda_k v_k v_k^dagger."""
        w, v = self.eigenvalues, self.eigenvectors
        return (v.T * w) @ v.conj()


def hermitian_eigendecompose(m: np.ndarray, tol: float = DEFAULT_TOL) -> EigenDecomposition:
    """Eigendecompose a Hermitian matrix.

    Rejects input whose deviation from Hermiticity exceeds ``tol``
    (``NotHermitianError``).  Solver failure raises
    ``NoConvergenceError``.  Eigenvalues come out descending; ties keep
    the solver's relative order, so output is deterministic.
    """
    m = as_complex_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise NotHermitianError(f"matrix must be square, got {m.shape}")
    residual = hermiticity_residual(m)
    if residual > tol:
        raise NotHermitianError(f"asymmetry {residual:.3g} exceeds tol {tol:g}")
    try:
        w, v = np.linalg.eigh((m + m.conj().T) / 2)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(str(exc)) from exc
    order = np.argsort(-w, kind="stable")
    return EigenDecomposition(eigenvalues=w[order], eigenvectors=v[:, order].T)


def bloch_to_density(p: BlochVector, tol: float = DEFAULT_TOL) -> DensityMatrix:
    """Qubit state (I + p.sigma)/2 for a Bloch vector inside the unit ball."""
    if p.norm > 1.0 + tol:
        raise OutsideBallError(f"Bloch vector norm {p.norm:.6g} exceeds 1")
    m = 0.5 * np.array(
        [[1 + p.p3, p.p1 - 1j * p.p2], [p.p1 + 1j * p.p2, 1 - p.p3]], dtype=complex
    )
    return DensityMatrix(m, tol=max(tol, DEFAULT_TOL))


def density_to_bloch(rho: DensityMatrix) -> BlochVector:
    """Bloch components p_k = Tr[rho sigma_k] of a qubit state."""
    if rho.dim != 2:
        raise WrongDimensionError(f"Bloch vector requires dim 2, got {rho.dim}")
    m = rho.matrix
    return BlochVector(
        p1=float(np.trace(m @ SIGMA_1).real),
        p2=float(np.trace(m @ SIGMA_2).real),
        p3=float(np.trace(m @ SIGMA_3).real),
    )


def row_vectorize(rho: DensityMatrix | np.ndarray) -> np.ndarray:
    """Row-stack a square matrix into a length-n^2 vector (index r*n + s)."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    return m.reshape(-1).copy()


def row_unvectorize(vec: np.ndarray) -> np.ndarray:
    """Inverse of :func:`row_vectorize`; the length must be a perfect square."""
    v = np.asarray(vec, dtype=complex).reshape(-1)
    n = math.isqrt(v.size)
    if n * n != v.size:
        raise ValueError(f"vector length {v.size} is not a perfect square")
    return v.reshape(n, n).copy()
