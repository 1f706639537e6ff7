"""Dense LU with partial pivoting for the small collocation systems.

Factorisation is delegated to LAPACK ``getrf`` through scipy; this module
adds the relative-pivot singularity check and shape validation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatchError, SingularMatrixError

PIVOT_RTOL = 1e-13


@dataclass(frozen=True)
class LUFactors:
    """Packed factors: ``lu`` holds unit-lower L and U, ``piv`` the LAPACK row swaps."""

    lu: np.ndarray
    piv: np.ndarray

    @property
    def n(self) -> int:
        return self.lu.shape[0]

    def permutation(self) -> np.ndarray:
        """Row order ``perm`` such that ``A[perm] = L @ U``."""
        perm = np.arange(self.n)
        for i, p in enumerate(self.piv):
            perm[i], perm[p] = perm[p], perm[i]
        return perm

    def unpack(self):
        """Return ``(P, L, U)`` with ``P @ A = L @ U``."""
        lower = np.tril(self.lu, -1) + np.eye(self.n)
        upper = np.triu(self.lu)
        p = np.eye(self.n)[self.permutation()]
        return p, lower, upper


def lu_factor(m) -> LUFactors:
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"matrix must be square, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("matrix contains non-finite entries")
    scale = np.abs(a).max() if a.size else 0.0
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMatrixError
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if scale == 0.0 or pivots.min() < PIVOT_RTOL * scale:
        k = int(np.argmin(pivots))
        raise SingularMatrixError(f"pivot {k} is {pivots[k]:.3e} (max entry {scale:.3e})")
    return LUFactors(lu, piv)


def solve(factors: LUFactors, rhs) -> np.ndarray:
    b = np.asarray(rhs, dtype=np.float64)
    if b.shape[0] != factors.n:
        raise DimensionMismatchError(f"rhs has length {b.shape[0]}, system has {factors.n} rows")
    return scipy.linalg.lu_solve((factors.lu, factors.piv), b, check_finite=False)
