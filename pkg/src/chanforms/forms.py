"""Process-matrix representations of quantum dynamical maps.

A linear map on density matrices has two n^2 x n^2 matrix
representations connected by an index realignment:

* **A-form** (process matrix): acts on row-vectorized states,
  ``vec(rho_out) = A @ vec(rho_in)``.  Row index ``r'*n + s'``, column
  index ``r*n + s``.  A physical map preserves hermiticity
  (``conj(A[r's'; rs]) == A[s'r'; sr]``) and trace
  (``sum_r' A[r'r'; rs] == delta_rs``); generally A is not Hermitian.
* **B-form** (dynamical matrix): the realignment
  ``B[r'r; s's] = A[r's'; rs]``.  Hermitian with trace n for any
  physical A; positive semidefinite exactly when the map is completely
  positive.

Expanding A in a tensor basis ``T_mu (x) conj(T_nu)`` built from a
trace-orthonormal operator set ``{T_mu}`` yields a Hermitian
**coefficient matrix** ``a[mu, nu] = Tr[A (T_mu^dag (x) T_nu^T)]`` that
is isospectral with B.  Diagonalizing it gives the **canonical
decomposition** ``A = sum_k lam_k (C_k (x) conj(C_k))`` with
trace-orthonormal canonical operators ``C_k``; the map acts as
``rho -> sum_k lam_k C_k rho C_k^dag``.  For completely positive maps
``E_k = sqrt(lam_k) C_k`` are Kraus operators.
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass
from enum import Enum
from typing import Iterable

import numpy as np

from .errors import (
    DimensionMismatchError,
    IncompleteKrausError,
    NotCompletelyPositiveError,
    NotHermiticityPreservingError,
    NotTracePreservingError,
    UnsupportedCombinationError,
)
from .linalg import (
    DEFAULT_TOL,
    PAULIS,
    DensityMatrix,
    as_complex_matrix,
    hermitian_eigendecompose,
    hermiticity_residual,
    max_abs,
    row_unvectorize,
    row_vectorize,
)


class BasisLabel(str, Enum):
    """Supported trace-orthonormal operator bases."""

    PAULI_OVER_SQRT2 = "pauli"  # {sigma_mu / sqrt(2)}, qubits only
    MATRIX_UNITS = "units"  # {|j><k|}, any dimension


class CpClassification(str, Enum):
    COMPLETELY_POSITIVE = "completely_positive"
    NOT_COMPLETELY_POSITIVE = "not_completely_positive"


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _side_dim(matrix: np.ndarray, what: str) -> int:
    """Hilbert-space dimension n for an n^2 x n^2 matrix."""
    side = matrix.shape[0]
    if matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"{what} must be square, got {matrix.shape}")
    n = math.isqrt(side)
    if n * n != side or n < 1:
        raise ValueError(f"{what} side {side} is not a perfect square")
    return n


def _reshuffle(matrix: np.ndarray, n: int) -> np.ndarray:
    """Index realignment out[(a,b),(c,d)] = in[(a,c),(b,d)]; an involution."""
    return matrix.reshape(n, n, n, n).transpose(0, 2, 1, 3).reshape(n * n, n * n)


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    """n^2 trace-orthonormal n x n operators, Tr[T_mu^dag T_nu] = delta."""

    dim: int
    label: BasisLabel
    elements: np.ndarray  # shape (n^2, n, n)
    tol: InitVar[float] = DEFAULT_TOL

    def __post_init__(self, tol: float) -> None:
        el = np.array(self.elements, dtype=complex)  # defensive copy
        n = self.dim
        if el.shape != (n * n, n, n):
            raise ValueError(f"expected {n * n} elements of shape ({n},{n}), got {el.shape}")
        gram = np.einsum("mij,nij->mn", el.conj(), el)
        if max_abs(gram - np.eye(n * n)) > tol:
            raise ValueError("basis elements are not trace-orthonormal")
        object.__setattr__(self, "elements", _freeze(el))


def standard_basis(n: int, label: BasisLabel = BasisLabel.MATRIX_UNITS) -> OperatorBasis:
    """Build a standard operator basis.

    ``PAULI_OVER_SQRT2`` is only defined for n = 2
    (``UnsupportedCombinationError`` otherwise); ``MATRIX_UNITS``
    enumerates |j><k| in row-major order mu = j*n + k for any n >= 2.
    """
    label = BasisLabel(label)
    if n < 2:
        raise ValueError(f"dimension must be at least 2, got {n}")
    if label is BasisLabel.PAULI_OVER_SQRT2:
        if n != 2:
            raise UnsupportedCombinationError("the Pauli basis is only available for n = 2")
        elements = np.stack(PAULIS) / np.sqrt(2)
    else:
        elements = np.zeros((n * n, n, n), dtype=complex)
        for j in range(n):
            for k in range(n):
                elements[j * n + k, j, k] = 1.0
    return OperatorBasis(dim=n, label=label, elements=elements)


def default_basis(n: int) -> OperatorBasis:
    """Pauli basis for qubits, matrix units otherwise."""
    if n == 2:
        return standard_basis(2, BasisLabel.PAULI_OVER_SQRT2)
    return standard_basis(n, BasisLabel.MATRIX_UNITS)


@dataclass(frozen=True, eq=False)
class AForm:
    """Process matrix acting on row-vectorized density matrices.

    Construction validates the two physical-map constraints within
    ``tol``: hermiticity preservation and trace preservation.
    """

    matrix: np.ndarray
    tol: InitVar[float] = DEFAULT_TOL

    def __post_init__(self, tol: float) -> None:
        m = as_complex_matrix(self.matrix)
        n = _side_dim(m, "A-form")
        a4 = m.reshape(n, n, n, n)
        herm = max_abs(np.conj(a4) - a4.transpose(1, 0, 3, 2))
        if herm > tol:
            raise NotHermiticityPreservingError(
                f"hermiticity-preservation residual {herm:.3g} exceeds tol {tol:g}"
            )
        col_sums = np.einsum("iikl->kl", a4)
        tp = max_abs(col_sums - np.eye(n))
        if tp > tol:
            raise NotTracePreservingError(
                f"trace-preservation residual {tp:.3g} exceeds tol {tol:g}"
            )
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def dim(self) -> int:
        return math.isqrt(self.matrix.shape[0])


@dataclass(frozen=True, eq=False)
class BForm:
    """Realigned dynamical matrix: Hermitian with trace n."""

    matrix: np.ndarray
    tol: InitVar[float] = DEFAULT_TOL

    def __post_init__(self, tol: float) -> None:
        m = as_complex_matrix(self.matrix)
        n = _side_dim(m, "B-form")
        herm = hermiticity_residual(m)
        if herm > tol:
            raise NotHermiticityPreservingError(
                f"B-form hermiticity residual {herm:.3g} exceeds tol {tol:g}"
            )
        tr = complex(np.trace(m))
        if abs(tr - n) > tol * n:
            raise NotTracePreservingError(f"B-form trace {tr:.6g} differs from n={n}")
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def dim(self) -> int:
        return math.isqrt(self.matrix.shape[0])


@dataclass(frozen=True, eq=False)
class CoefficientMatrix:
    """Hermitian matrix of expansion coefficients of an A-form in a basis."""

    basis: OperatorBasis
    matrix: np.ndarray
    tol: InitVar[float] = DEFAULT_TOL

    def __post_init__(self, tol: float) -> None:
        m = as_complex_matrix(self.matrix, self.basis.dim ** 2, self.basis.dim ** 2)
        herm = hermiticity_residual(m)
        if herm > tol:
            raise NotHermiticityPreservingError(
                f"coefficient matrix residual {herm:.3g} exceeds tol {tol:g}; "
                "source map does not preserve hermiticity"
            )
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def dim(self) -> int:
        return self.basis.dim


@dataclass(frozen=True, eq=False)
class CanonicalDecomposition:
    """Eigenvalues and trace-orthonormal canonical operators of a map.

    Reconstruction identity: ``A == sum_k eigenvalues[k] *
    kron(canonical_ops[k], conj(canonical_ops[k]))``.  Eigenvalues are
    descending; each operator's global phase is fixed by making its
    largest-magnitude entry real and positive.
    """

    basis: OperatorBasis
    eigenvalues: np.ndarray
    canonical_ops: np.ndarray  # shape (n^2, n, n), row k paired with eigenvalue k

    def __post_init__(self) -> None:
        object.__setattr__(self, "eigenvalues", _freeze(np.array(self.eigenvalues, dtype=float)))
        object.__setattr__(self, "canonical_ops", _freeze(np.array(self.canonical_ops, dtype=complex)))

    @property
    def dim(self) -> int:
        return self.basis.dim

    def rank(self, tol: float = DEFAULT_TOL) -> int:
        """Number of eigenvalues with magnitude above ``tol``."""
        return int(np.sum(np.abs(self.eigenvalues) > tol))


@dataclass(frozen=True, eq=False)
class KrausSet:
    """Operators of a completely positive map, sum_k E_k^dag E_k = I."""

    operators: tuple[np.ndarray, ...]
    tol: InitVar[float] = DEFAULT_TOL

    def __post_init__(self, tol: float) -> None:
        ops = tuple(as_complex_matrix(op) for op in self.operators)
        if not ops:
            raise IncompleteKrausError("a Kraus set needs at least one operator")
        n = ops[0].shape[0]
        for op in ops:
            if op.shape != (n, n):
                raise DimensionMismatchError(
                    f"Kraus operators must all be {n}x{n}, got {op.shape}"
                )
        total = sum(op.conj().T @ op for op in ops)
        residual = max_abs(total - np.eye(n))
        if residual > tol:
            raise IncompleteKrausError(
                f"completeness residual {residual:.3g} exceeds tol {tol:g}"
            )
        object.__setattr__(self, "operators", tuple(_freeze(op) for op in ops))

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def __len__(self) -> int:
        return len(self.operators)


@dataclass(frozen=True, eq=False)
class CpVerdict:
    """Outcome of the complete-positivity eigenvalue test."""

    classification: CpClassification
    eigenvalues: np.ndarray
    min_eigenvalue: float
    tol: float

    @property
    def is_cp(self) -> bool:
        return self.classification is CpClassification.COMPLETELY_POSITIVE


@dataclass(frozen=True, eq=False)
class MapOutput:
    """Result of applying a map to a state.

    The output of a physical-looking but not completely positive map can
    fail positivity, so the result carries a flag instead of being
    forced into a validated :class:`DensityMatrix`.
    """

    matrix: np.ndarray
    min_eigenvalue: float
    positive: bool

    def to_density(self, tol: float = DEFAULT_TOL) -> DensityMatrix:
        return DensityMatrix(self.matrix, tol=tol)


def _check_dims(a_dim: int, other_dim: int) -> None:
    if a_dim != other_dim:
        raise DimensionMismatchError(f"dimension mismatch: {a_dim} vs {other_dim}")


def coefficient_matrix(a: AForm, basis: OperatorBasis, tol: float = DEFAULT_TOL) -> CoefficientMatrix:
    """Expansion coefficients a[mu, nu] = Tr[A (T_mu^dag (x) T_nu^T)].

    Computed directly from the trace formula (not via realignment), so
    it provides a route to the spectrum independent of the B-form.
    """
    _check_dims(a.dim, basis.dim)
    n = a.dim
    a4 = a.matrix.reshape(n, n, n, n)
    t = basis.elements
    # a[mu,nu] = sum A[(r's'),(rs)] conj(T_mu[r',r]) T_nu[s',s], factored
    # to keep the contraction cost at O(n^6) per basis element pair.
    partial = np.einsum("abcd,mac->mbd", a4, t.conj())
    coeffs = np.einsum("mbd,nbd->mn", partial, t)
    # Residual hermiticity noise scales with the n^2 terms summed per entry.
    return CoefficientMatrix(basis=basis, matrix=coeffs, tol=tol * n * n)


def expand_coefficients(cm: CoefficientMatrix) -> np.ndarray:
    """Rebuild the A matrix as sum_{mu,nu} a[mu,nu] T_mu (x) conj(T_nu)."""
    t = cm.basis.elements
    n = cm.dim
    a4 = np.einsum("mn,mac,nbd->abcd", cm.matrix, t, t.conj())
    return a4.reshape(n * n, n * n)


def realign_a_to_b(a: AForm, tol: float = DEFAULT_TOL) -> BForm:
    """Realign a process matrix into its dynamical matrix (exact permutation)."""
    return BForm(_reshuffle(a.matrix, a.dim), tol=tol)


def realign_b_to_a(b: BForm, tol: float = DEFAULT_TOL) -> AForm:
    """Inverse realignment; the same index permutation applied again."""
    return AForm(_reshuffle(b.matrix, b.dim), tol=tol)


def canonical_decompose(a: AForm, basis: OperatorBasis, tol: float = DEFAULT_TOL) -> CanonicalDecomposition:
    """Diagonalize the coefficient matrix of ``a`` in ``basis``.

    Row k of the eigenvector matrix weights the basis directly:
    ``C_k = sum_mu v_k[mu] T_mu``.  Within a degenerate eigenvalue
    cluster the operators are reported in solver order and are unique
    only up to unitary remixing; eigenvalues, the reconstructed A, and
    the channel action are invariant under that freedom.
    """
    cm = coefficient_matrix(a, basis, tol)
    n = a.dim
    eig = hermitian_eigendecompose(cm.matrix, tol * n * n)
    ops = np.einsum("km,mij->kij", eig.eigenvectors, basis.elements)
    for op in ops:
        pivot = op.flat[np.argmax(np.abs(op))]
        if abs(pivot) > 0.0:
            op *= pivot.conjugate() / abs(pivot)
    return CanonicalDecomposition(basis=basis, eigenvalues=eig.eigenvalues, canonical_ops=ops)


def canonical_to_a(c: CanonicalDecomposition, tol: float = DEFAULT_TOL) -> AForm:
    """Reassemble the process matrix sum_k lam_k C_k (x) conj(C_k)."""
    n = c.dim
    acc = np.zeros((n * n, n * n), dtype=complex)
    for lam, op in zip(c.eigenvalues, c.canonical_ops):
        acc += lam * np.kron(op, op.conj())
    return AForm(acc, tol=tol)


def extract_kraus(c: CanonicalDecomposition, tol: float = DEFAULT_TOL) -> KrausSet:
    """Kraus operators sqrt(lam_k) C_k of a completely positive map.

    Eigenvalues at or below ``tol`` are dropped (rank deficiency is
    generic); an eigenvalue below ``-tol`` means no Kraus form exists
    and raises ``NotCompletelyPositiveError``.
    """
    w = c.eigenvalues
    min_eig = float(w.min()) if w.size else 0.0
    if min_eig < -tol:
        raise NotCompletelyPositiveError(
            f"map is not completely positive: min eigenvalue {min_eig:.6g} < -{tol:g}"
        )
    kept = [
        np.sqrt(lam) * op for lam, op in zip(w, c.canonical_ops) if lam > tol
    ]
    # Dropped near-zero eigenvalues each leave at most ~tol of residual
    # in the completeness sum, hence the scaled constructor tolerance.
    return KrausSet(tuple(kept), tol=tol * (c.dim ** 2 + 1))


def _map_output(matrix: np.ndarray, tol: float) -> MapOutput:
    herm = (matrix + matrix.conj().T) / 2
    min_eig = float(np.linalg.eigvalsh(herm).min())
    return MapOutput(matrix=matrix, min_eigenvalue=min_eig, positive=min_eig >= -tol)


def apply_a(a: AForm, rho: DensityMatrix, tol: float = DEFAULT_TOL) -> MapOutput:
    """Apply the map through its A-form: unvectorize(A @ vectorize(rho))."""
    _check_dims(a.dim, rho.dim)
    out = row_unvectorize(a.matrix @ row_vectorize(rho))
    return _map_output(out, tol)


def apply_canonical(c: CanonicalDecomposition, rho: DensityMatrix, tol: float = DEFAULT_TOL) -> MapOutput:
    """Apply the map as sum_k lam_k C_k rho C_k^dag."""
    _check_dims(c.dim, rho.dim)
    out = np.einsum(
        "k,kij,jl,kml->im", c.eigenvalues, c.canonical_ops, rho.matrix, c.canonical_ops.conj()
    )
    return _map_output(out, tol)


def apply_kraus(kraus: KrausSet, rho: DensityMatrix, tol: float = DEFAULT_TOL) -> MapOutput:
    """Apply the operator sum rho -> sum_k E_k rho E_k^dag."""
    _check_dims(kraus.dim, rho.dim)
    out = sum(op @ rho.matrix @ op.conj().T for op in kraus.operators)
    return _map_output(out, tol)


def kraus_to_a(ops: KrausSet | Iterable[np.ndarray], tol: float = DEFAULT_TOL) -> AForm:
    """Process matrix sum_k E_k (x) conj(E_k) of an operator-sum map.

    Accepts a validated :class:`KrausSet` or a raw operator sequence
    (which is validated here, raising ``IncompleteKrausError`` when the
    completeness sum deviates from the identity beyond ``tol``).
    """
    if not isinstance(ops, KrausSet):
        ops = KrausSet(tuple(ops), tol=tol)
    n = ops.dim
    acc = np.zeros((n * n, n * n), dtype=complex)
    for op in ops.operators:
        acc += np.kron(op, op.conj())
    # The trace-preservation residual of the result equals the Kraus
    # completeness residual, so the same tolerance applies.
    return AForm(acc, tol=tol)


def cp_verdict(a: AForm, basis: OperatorBasis, tol: float = DEFAULT_TOL) -> CpVerdict:
    """Classify a map as CP or NCP by the sign of its canonical spectrum."""
    decomp = canonical_decompose(a, basis, tol)
    w = decomp.eigenvalues
    min_eig = float(w.min())
    cls = (
        CpClassification.COMPLETELY_POSITIVE
        if min_eig >= -tol
        else CpClassification.NOT_COMPLETELY_POSITIVE
    )
    return CpVerdict(classification=cls, eigenvalues=w, min_eigenvalue=min_eig, tol=tol)
