"""Composite audits of a channel: validity report, spectral equivalence
between the coefficient matrix and the dynamical matrix, and the
maximally-entangled-state consistency check.

Complete positivity is certified here through the n-dimensional
extension only: the image of the maximally entangled state under
``map (x) identity`` equals ``B / n``, and positivity of that single
state decides CP for extensions of every dimension.  Larger ancillas
add nothing, so they are never searched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .forms import (
    AForm,
    BasisLabel,
    CanonicalDecomposition,
    CpClassification,
    CpVerdict,
    KrausSet,
    OperatorBasis,
    canonical_decompose,
    default_basis,
    extract_kraus,
    realign_a_to_b,
)
from .linalg import DEFAULT_TOL, hermitian_eigendecompose, hermiticity_residual, max_abs
from .zoo import ChannelSpec, channel_a


@dataclass(frozen=True, eq=False)
class AnalysisReport:
    """Everything the pipeline establishes about one channel."""

    channel: dict
    basis: BasisLabel
    tol: float
    a_hermiticity_residual: float
    a_trace_residual: float
    a_form_valid: bool
    b_hermiticity_residual: float
    b_trace: float
    coefficient_spectrum: np.ndarray
    b_spectrum: np.ndarray
    spectral_match: float
    verdict: CpVerdict
    canonical: CanonicalDecomposition
    kraus: KrausSet | None
    kraus_absent_reason: str | None


def _a_form_residuals(a: AForm) -> tuple[float, float]:
    n = a.dim
    a4 = a.matrix.reshape(n, n, n, n)
    herm = max_abs(np.conj(a4) - a4.transpose(1, 0, 3, 2))
    tp = max_abs(np.einsum("iikl->kl", a4) - np.eye(n))
    return herm, tp


def analyze(
    spec: ChannelSpec,
    basis: OperatorBasis | None = None,
    tol: float = DEFAULT_TOL,
) -> AnalysisReport:
    """Run the full pipeline on a channel description.

    Pure function: identical inputs give identical reports.
    """
    a = channel_a(spec, tol)
    if basis is None:
        basis = default_basis(a.dim)
    n = a.dim

    herm_res, tp_res = _a_form_residuals(a)
    b = realign_a_to_b(a, tol)
    b_herm = hermiticity_residual(b.matrix)
    b_trace = float(np.trace(b.matrix).real)

    decomp = canonical_decompose(a, basis, tol)
    b_spectrum = hermitian_eigendecompose(b.matrix, tol * n * n).eigenvalues
    spectral_match = float(np.abs(decomp.eigenvalues - b_spectrum).max())

    min_eig = float(decomp.eigenvalues.min())
    cls = (
        CpClassification.COMPLETELY_POSITIVE
        if min_eig >= -tol
        else CpClassification.NOT_COMPLETELY_POSITIVE
    )
    verdict = CpVerdict(
        classification=cls,
        eigenvalues=decomp.eigenvalues,
        min_eigenvalue=min_eig,
        tol=tol,
    )

    kraus: KrausSet | None = None
    reason: str | None = None
    if verdict.is_cp:
        kraus = extract_kraus(decomp, tol)
    else:
        reason = (
            f"map is not completely positive (min eigenvalue {min_eig:.6g}); "
            "no operator-sum form exists"
        )

    return AnalysisReport(
        channel=spec.describe(),
        basis=basis.label,
        tol=tol,
        a_hermiticity_residual=herm_res,
        a_trace_residual=tp_res,
        a_form_valid=(herm_res <= tol and tp_res <= tol),
        b_hermiticity_residual=b_herm,
        b_trace=b_trace,
        coefficient_spectrum=decomp.eigenvalues,
        b_spectrum=b_spectrum,
        spectral_match=spectral_match,
        verdict=verdict,
        canonical=decomp,
        kraus=kraus,
        kraus_absent_reason=reason,
    )


def maximally_entangled_state(n: int) -> np.ndarray:
    """Density matrix of sum_k |kk> / sqrt(n) on the doubled space."""
    omega = np.zeros(n * n, dtype=complex)
    omega[:: n + 1] = 1.0 / np.sqrt(n)
    return np.outer(omega, omega.conj())


def choi_state(a: AForm) -> np.ndarray:
    """Image of the maximally entangled state under ``map (x) identity``.

    Computed by applying the map to the first tensor factor directly,
    without going through the realignment, so it can serve as an
    independent check on the B-form.
    """
    n = a.dim
    a4 = a.matrix.reshape(n, n, n, n)
    omega4 = maximally_entangled_state(n).reshape(n, n, n, n)  # ((r,b),(s,d))
    out4 = np.einsum("acrs,rbsd->abcd", a4, omega4)
    return out4.reshape(n * n, n * n)


def choi_consistency(a: AForm, tol: float = DEFAULT_TOL) -> float:
    """Max-entry deviation between the directly-computed extension image
    and ``B / n``; representation-level, so it holds for NCP maps too."""
    b = realign_a_to_b(a, tol)
    return max_abs(choi_state(a) - b.matrix / a.dim)


def positivity_probe(a: AForm, samples: int, seed: int) -> float:
    """Most negative output eigenvalue over random pure-state inputs.

    Pure states suffice to witness positivity violations of the map
    itself (outputs are convex in the input).  A CP map never probes
    negative; a clean probe does **not** certify CP.
    """
    n = a.dim
    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(samples):
        psi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        psi /= np.linalg.norm(psi)
        out_vec = a.matrix @ np.outer(psi, psi.conj()).reshape(-1)
        out = out_vec.reshape(n, n)
        min_eig = float(np.linalg.eigvalsh((out + out.conj().T) / 2).min())
        worst = min(worst, min_eig)
    return worst
