"""Dense generalized eigensolver for ``lam * X + Y``.

The QZ iteration itself is LAPACK's (``zggev`` through
:func:`scipy.linalg.eig`); this module fixes the conventions around it:
eigenvalues as homogeneous pairs ``(alpha, beta)`` with ``beta`` real and
nonnegative, infinite eigenvalues as ``beta == 0``, and unit 2-norm
right eigenvectors.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import SolverFailure
from .matpoly import Pencil

__all__ = ["GeneralizedEigenpair", "generalized_eig", "generalized_eig_arrays"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneralizedEigenpair:
    alpha: complex
    beta: float
    vector: np.ndarray

    @property
    def is_infinite(self) -> bool:
        return self.beta == 0

    @property
    def value(self) -> complex:
        """``alpha / beta``; complex infinity for ``beta == 0``."""
        if self.beta == 0:
            return complex(np.inf, 0.0)
        return self.alpha / self.beta


def generalized_eig_arrays(L: Pencil) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(alpha, beta, Z)``: ``(alpha[j] X + beta[j] Y) Z[:, j] ~ 0``.

    ``beta`` is real and nonnegative and each column of ``Z`` has unit
    2-norm.  A pair ``alpha == beta == 0`` (singular pencil) is reported
    as ``(1, 0)`` (infinite class) with a warning.
    """
    X, Y = L.X, L.Y
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Y))):
        raise ValueError("pencil has non-finite entries")
    try:
        # (lam X + Y) z = 0  <=>  (-Y) z = lam X z
        w, Z = scipy.linalg.eig(-Y, X, homogeneous_eigvals=True, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        # LAPACK info=k means eigenvalues k+1..m are still correct
        m = re.search(r"info=(\d+)", str(exc))
        converged = max(L.size - int(m.group(1)), 0) if m else 0
        raise SolverFailure(f"QZ iteration failed: {exc}", converged=converged) from exc
    alpha = np.asarray(w[0], dtype=complex)
    beta = np.asarray(w[1], dtype=complex)

    # rotate each pair so that beta is real and >= 0
    mag = np.abs(beta)
    phase = np.ones_like(beta)
    nz = mag > 0
    phase[nz] = beta[nz] / mag[nz]
    alpha = alpha * np.conj(phase)
    beta = mag

    both_zero = (beta == 0) & (alpha == 0)
    if np.any(both_zero):
        log.warning("singular pencil: %d eigenvalues are undetermined", int(both_zero.sum()))
        alpha[both_zero] = 1.0

    Z = np.asarray(Z, dtype=complex)
    norms = np.linalg.norm(Z, axis=0)
    norms[norms == 0] = 1.0
    return alpha, beta, Z / norms


def generalized_eig(L: Pencil) -> list[GeneralizedEigenpair]:
    """All ``m`` eigenpairs of the pencil, in kernel order (unsorted)."""
    alpha, beta, Z = generalized_eig_arrays(L)
    return [GeneralizedEigenpair(complex(a), float(b), Z[:, j].copy())
            for j, (a, b) in enumerate(zip(alpha, beta))]
