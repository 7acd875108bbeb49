"""Eigenvalue variation between spectra and the quadratic splitting bound.

For a quadratic ``P`` whose max-times polynomial has two distinct roots
``a+ = g1/g2 > a- = g0/g1`` with ``delta = a+/a-``, and ``A_2`` invertible,
the spectrum of ``P`` is within eigenvalue variation

    C * a+ / delta**(1/(2n)),
    C = 4 * 2**(-1/(2n)) * (2 + 2 c2 + c2/delta)**(1 - 1/(2n)) * c2**(1/(2n))

(``c2 = cond A_2``) of the list ``xi``: the eigenvalues of ``lam A_2 + A_1``
padded with ``n`` zeros.  Moreover ``a+ / cond A_1 <= |xi_i| <= a+ cond A_2``
for the ``n`` pencil eigenvalues.  :func:`verify_splitting` evaluates both
statements numerically.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import NotApplicableError
from .genzeig import generalized_eig_arrays
from .matpoly import MatrixPolynomial, Pencil
from .scaled_solver import solve
from .tropical import TropicalPoly, tropical_roots

__all__ = [
    "SplittingReport",
    "eigenvalue_variation",
    "cond2",
    "xi_spectrum",
    "splitting_constant",
    "verify_splitting",
]

EPS = np.finfo(float).eps
# relative slack on the two inequality checks; the box inequality is an
# equality for n == 1, so an exact comparison would fail on rounding alone
CHECK_RTOL = 1e-12


def _perfect_matching(adj: np.ndarray) -> bool:
    m = adj.shape[0]
    match = maximum_bipartite_matching(csr_matrix(adj.astype(np.int8)), perm_type="column")
    return int(np.count_nonzero(match >= 0)) == m


def eigenvalue_variation(a: Sequence[complex], b: Sequence[complex]) -> float:
    """``min over permutations pi of max_i |b[pi(i)] - a[i]|``.

    Bottleneck assignment: binary search over the sorted pairwise
    distances, testing each threshold for a perfect matching in the
    bipartite graph of pairs within that distance.
    """
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.shape != b.shape:
        raise ValueError(f"sequences must have equal length, got {a.size} and {b.size}")
    if a.size == 0:
        return 0.0
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("eigenvalue variation is only defined for finite values")
    dist = np.abs(a[:, None] - b[None, :])
    cand = np.unique(dist)
    lo, hi = 0, cand.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _perfect_matching(dist <= cand[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(cand[lo])


def cond2(m) -> float:
    """Spectral condition number; ``inf`` once ``s_min <= eps * s_max``."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("cond2 needs a square matrix")
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0 or s[-1] <= EPS * s[0]:
        return math.inf
    return float(s[0] / s[-1])


def xi_spectrum(A2, A1) -> np.ndarray:
    """Eigenvalues of ``lam A2 + A1`` followed by ``n`` zeros."""
    A2 = np.asarray(A2, dtype=complex)
    A1 = np.asarray(A1, dtype=complex)
    if A2.ndim == 0:
        A2, A1 = A2.reshape(1, 1), A1.reshape(1, 1)
    if not math.isfinite(cond2(A2)):
        raise NotApplicableError("A_2 invertible")
    alpha, beta, _ = generalized_eig_arrays(Pencil(A2, A1))
    if np.any(beta == 0):
        raise NotApplicableError("A_2 invertible", "pencil lam A_2 + A_1 has infinite eigenvalues")
    n = A2.shape[0]
    return np.concatenate([alpha / beta, np.zeros(n, dtype=complex)])


def splitting_constant(n: int, cond_a2: float, delta: float) -> float:
    e = 1.0 / (2 * n)
    return 4 * 2 ** (-e) * (2 + 2 * cond_a2 + cond_a2 / delta) ** (1 - e) * cond_a2 ** e


@dataclass
class SplittingReport:
    alpha_plus: float
    alpha_minus: float
    delta: float
    cond_A2: float
    cond_A1: float
    C: float
    bound: float
    variation: float
    xi: np.ndarray
    spectrum: np.ndarray
    bound_holds: bool
    box_holds: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("xi", "spectrum"):
            d[key] = [[float(z.real), float(z.imag)] for z in d[key]]
        for key in ("cond_A2", "cond_A1"):
            if math.isinf(d[key]):
                d[key] = "inf"
        d["bound_holds"] = bool(d["bound_holds"])
        d["box_holds"] = bool(d["box_holds"])
        return d


def verify_splitting(P: MatrixPolynomial, strategy: str = "tropical") -> SplittingReport:
    """Check the splitting bound and the box inequality on a quadratic ``P``.

    ``strategy`` selects how ``spec P`` is computed; the default uses the
    tropically scaled solver, which is the most accurate route available.
    Raises NotApplicableError naming the first violated hypothesis.
    """
    if P.degree != 2:
        raise NotApplicableError("degree 2")
    g0, g1, g2 = P.norms
    tr = tropical_roots(TropicalPoly(P.norms))
    if len(tr.roots) != 2 or tr.zero_multiplicity or tr.infinite_multiplicity:
        raise NotApplicableError("two distinct tropical roots (gamma_1**2 > gamma_0 * gamma_2)")
    A0, A1, A2 = P.coeffs
    c2 = cond2(A2)
    if not math.isfinite(c2):
        raise NotApplicableError("A_2 invertible")
    c1 = cond2(A1)
    n = P.n

    alpha_plus = g1 / g2
    alpha_minus = g0 / g1
    delta = alpha_plus / alpha_minus
    C = splitting_constant(n, c2, delta)
    bound = C * alpha_plus / delta ** (1.0 / (2 * n))

    xi = xi_spectrum(A2, A1)
    pairs = solve(P, strategy)
    spectrum = np.array([p.value for p in pairs])
    if not all(p.is_finite for p in pairs):
        raise NotApplicableError("finite spectrum", "spec P contains infinite eigenvalues")
    variation = eigenvalue_variation(spectrum, xi)

    mods = np.abs(xi[:n])
    lower = alpha_plus / c1 if math.isfinite(c1) else 0.0
    upper = alpha_plus * c2
    box = bool(np.all(mods >= lower * (1 - CHECK_RTOL)) and np.all(mods <= upper * (1 + CHECK_RTOL)))
    return SplittingReport(
        alpha_plus=alpha_plus,
        alpha_minus=alpha_minus,
        delta=delta,
        cond_A2=c2,
        cond_A1=c1,
        C=C,
        bound=bound,
        variation=variation,
        xi=xi,
        spectrum=spectrum,
        bound_holds=bool(variation <= bound * (1 + CHECK_RTOL)),
        box_holds=box,
    )
