"""Two-qubit separability by the positive-partial-transpose test.

For 2 x 2 systems PPT is necessary and sufficient, so the verdict is exact
up to the eigenvalue threshold. No three-qubit test is offered.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg, states
from .errors import DimensionMismatch

PT_THRESHOLD = -1e-12


@dataclass(frozen=True)
class SeparabilityVerdict:
    is_separable: bool
    min_pt_eigenvalue: float


def min_pt_eigenvalue(rho, subsystem: str = "B") -> float:
    return float(linalg.eigvalsh(linalg.partial_transpose(rho, (2, 2), subsystem))[0])


def classify_2qubit(rho, threshold: float = PT_THRESHOLD) -> SeparabilityVerdict:
    rho = states.check_density_matrix(rho)
    if rho.shape != (4, 4):
        raise DimensionMismatch("two-qubit states are 4 x 4")
    m = min_pt_eigenvalue(rho)
    return SeparabilityVerdict(m >= threshold, m)


def min_pt_eigenvalues(stack) -> np.ndarray:
    """Vectorized minimum PT eigenvalue for a (..., 4, 4) stack."""
    pt = linalg.partial_transpose(stack, (2, 2), "B")
    pt = 0.5 * (pt + np.conj(np.swapaxes(pt, -1, -2)))
    return np.linalg.eigvalsh(pt)[..., 0]
