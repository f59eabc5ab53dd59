"""Dense complex Hermitian linear algebra for matrices of dimension <= 64."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian, NotPSD

log = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-10
PSD_CLAMP = 1e-10
CLUSTER_RTOL = 1e-8


@dataclass(frozen=True)
class HermitianEigensystem:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # columns

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
    return M


def hermiticity_defect(M: np.ndarray) -> float:
    return float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0


def hermitian_eigensystem(M, tol: float = HERMITIAN_TOL) -> HermitianEigensystem:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.

    Raises NotHermitian when ``max|M - M^H| > tol`` and NoConvergence when
    LAPACK fails.
    """
    M = as_matrix(M)
    defect = hermiticity_defect(M)
    if defect > tol:
        raise NotHermitian(f"max |M - M^H| = {defect:.3e} exceeds {tol:.1e}")
    H = 0.5 * (M + M.conj().T)
    try:
        w, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergence(str(exc)) from exc
    if not np.all(np.isfinite(w)):
        raise NoConvergence("non-finite eigenvalues")
    return HermitianEigensystem(w, V)


def eigvalsh(M) -> np.ndarray:
    M = as_matrix(M)
    return np.linalg.eigvalsh(0.5 * (M + M.conj().T))


def _clamped_spectrum(M, clamp: float) -> HermitianEigensystem:
    es = hermitian_eigensystem(M)
    w = es.eigenvalues
    if w[0] < -clamp:
        raise NotPSD(f"minimum eigenvalue {w[0]:.3e} below -{clamp:.0e}")
    if w[0] < 0:
        log.debug("clamping eigenvalues down to %.3e", w[0])
        w = np.clip(w, 0.0, None)
    return HermitianEigensystem(w, es.eigenvectors)


def roundoff_floor(w) -> np.ndarray:
    """Zero eigenvalues indistinguishable from roundoff.

    A rank-deficient state's null eigenvalues come out near 1e-17, and their
    square roots (~3e-9) would otherwise pollute fidelities.
    """
    w = np.clip(np.asarray(w, dtype=float), 0.0, None)
    floor = 64 * np.finfo(float).eps * (np.max(w) if w.size else 0.0)
    return np.where(w <= floor, 0.0, w)


def psd_sqrt(M, clamp: float = PSD_CLAMP) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix."""
    es = _clamped_spectrum(M, clamp)
    V = es.eigenvectors
    return (V * np.sqrt(roundoff_floor(es.eigenvalues))) @ V.conj().T


def kron(*factors) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = np.kron(out, as_matrix(f))
    return out


def partial_transpose(M, dims=(2, 2), subsystem: str = "B") -> np.ndarray:
    """Transpose one tensor factor of an operator on C^dA (x) C^dB.

    Works on a single matrix or a stack with shape ``(..., dA*dB, dA*dB)``.
    """
    M = np.asarray(M, dtype=complex)
    dA, dB = dims
    n = dA * dB
    if M.ndim < 2 or M.shape[-1] != n or M.shape[-2] != n:
        raise DimensionMismatch(f"shape {M.shape} incompatible with dims {dims}")
    lead = M.shape[:-2]
    T = M.reshape(*lead, dA, dB, dA, dB)
    k = len(lead)
    axes = list(range(k))
    if subsystem == "B":
        axes += [k, k + 3, k + 2, k + 1]
    elif subsystem == "A":
        axes += [k + 2, k + 1, k, k + 3]
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', not {subsystem!r}")
    return T.transpose(axes).reshape(*lead, n, n)


def cluster_eigenvalues(values, rtol: float = CLUSTER_RTOL) -> list[tuple[float, int]]:
    """Group sorted eigenvalues whose consecutive gap is below ``rtol``
    times the spectral radius. Returns (cluster mean, multiplicity) pairs."""
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        return []
    scale = max(float(np.max(np.abs(v))), np.finfo(float).tiny)
    groups = [[v[0]]]
    for x in v[1:]:
        if x - groups[-1][-1] > rtol * scale:
            groups.append([x])
        else:
            groups[-1].append(x)
    return [(float(np.mean(g)), len(g)) for g in groups]
