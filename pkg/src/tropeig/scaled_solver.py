"""Polynomial eigensolver with tropical scaling, plus the unscaled and
Fan-Lin-Van Dooren baselines and the normwise backward error.

The tropical pipeline: compute the norms ``gamma_k = ||A_k||_2``, find the
tropical roots of ``max_k gamma_k x**k``, and for each distinct root
``a`` solve the companion pencil of ``P~(mu) = P(a mu) / tp(a)``.  Sorted
by modulus, the scaled spectrum splits into ``d`` groups of ``n``; the run
for the ``i``-th root only contributes the group(s) at its own position,
which are the eigenvalues of order ``a``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateBlockError, InvalidEigenvectorError, SolverFailure
from .genzeig import generalized_eig_arrays
from .matpoly import MatrixPolynomial, companion_first, gamma_vector, scale_log
from .tropical import TropicalPoly, log_eval_maxtimes, tropical_roots

__all__ = [
    "KINDS",
    "ScalingStrategy",
    "SolvedEigenpair",
    "backward_error",
    "extract_eigvec",
    "solve",
    "sort_order",
]

KINDS = ("none", "fanlin", "tropical")


@dataclass(frozen=True)
class ScalingStrategy:
    """How to scale before calling the pencil solver.

    For ``kind == "tropical"`` the distinct tropical roots (ascending, with
    multiplicities) and their ``beta_i = 1 / tp(alpha_i)`` are carried along,
    as well as the deflated root counts at 0 and +inf.
    """

    kind: str
    roots: tuple[tuple[float, int], ...] = ()
    betas: tuple[float, ...] = ()
    zero_multiplicity: int = 0
    infinite_multiplicity: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scaling kind {self.kind!r}; expected one of {KINDS}")
        values = [r for r, _ in self.roots]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("tropical roots must be strictly ascending")
        if len(self.betas) != len(self.roots):
            raise ValueError("one beta per root is required")
        if any(not (math.isfinite(b) and b > 0) for b in self.betas):
            raise ValueError("betas must be positive and finite")

    @classmethod
    def none(cls) -> "ScalingStrategy":
        return cls("none")

    @classmethod
    def fanlin(cls) -> "ScalingStrategy":
        return cls("fanlin")

    @classmethod
    def tropical(cls, P: MatrixPolynomial) -> "ScalingStrategy":
        tp = gamma_vector(P)
        tr = tropical_roots(tp)
        # betas are informational; the solver recomputes them in log space
        betas = tuple(math.exp(-log_eval_maxtimes(tp, a)) for a in tr.values)
        return cls("tropical", tr.roots, betas, tr.zero_multiplicity, tr.infinite_multiplicity)


@dataclass
class SolvedEigenpair:
    """One eigenpair of ``P``.

    The eigenvalue is stored homogeneously: ``(lam, 1.0)`` when finite,
    ``(1, 0.0)`` when infinite.  ``eta`` is ``None`` when the backward error
    is not computable (infinite eigenvalue).  ``block_etas`` maps a
    companion block index ``k`` to the backward error of eigenvector block
    ``k`` (``None`` when that block is zero or does not exist).
    """

    alpha: complex
    beta: float
    vector: np.ndarray
    group_index: int
    source_root: float | None
    eta: float | None
    block_etas: dict[int, float | None] = field(default_factory=dict)

    @property
    def is_finite(self) -> bool:
        return self.beta != 0

    @property
    def value(self) -> complex:
        return self.alpha / self.beta if self.beta != 0 else complex(math.inf, 0.0)

    @property
    def modulus(self) -> float:
        return abs(self.alpha) if self.beta != 0 else math.inf


def backward_error(P: MatrixPolynomial, x, lam: complex) -> float | None:
    """Normwise backward error ``||P(lam) x|| / (sum_l |lam|**l ||A_l|| * ||x||)``.

    Returns ``None`` for an infinite (or NaN) ``lam``.  For ``|lam| > 1``
    both numerator and denominator are divided by ``|lam|**d`` (Horner in
    ``1/lam``), which leaves the ratio unchanged and avoids overflow.
    """
    x = np.asarray(x, dtype=complex)
    nx = float(np.linalg.norm(x))
    if nx == 0:
        raise InvalidEigenvectorError("eigenvector must be nonzero")
    lam = complex(lam)
    if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
        return None
    gammas = P.norms
    a = abs(lam)
    if a <= 1:
        r = P.coeffs[-1] @ x
        alpha_t = gammas[-1]
        for A, g in zip(reversed(P.coeffs[:-1]), reversed(gammas[:-1])):
            r = lam * r + A @ x
            alpha_t = a * alpha_t + g
    else:
        mu, amu = 1 / lam, 1 / a
        r = P.coeffs[0] @ x
        alpha_t = gammas[0]
        for A, g in zip(P.coeffs[1:], gammas[1:]):
            r = mu * r + A @ x
            alpha_t = amu * alpha_t + g
    nr = float(np.linalg.norm(r))
    if alpha_t == 0:
        # only possible at lam == 0 with A_0 == 0, where P(0) x == 0 exactly
        return 0.0 if nr == 0 else math.inf
    return nr / (alpha_t * nx)


def extract_eigvec(z, n: int, k: int) -> np.ndarray:
    """Block ``k`` (entries ``k*n : (k+1)*n``) of a companion eigenvector, unit-normalized."""
    z = np.asarray(z)
    if k < 0 or (k + 1) * n > z.shape[0]:
        raise ValueError(f"block {k} out of range for a vector of length {z.shape[0]} and n={n}")
    block = z[k * n:(k + 1) * n]
    nrm = np.linalg.norm(block)
    if nrm == 0:
        raise DegenerateBlockError(f"eigenvector block {k} is zero")
    return block / nrm


def sort_order(values: np.ndarray, finite: np.ndarray) -> np.ndarray:
    """Indices sorting finite values by (modulus, phase in (-pi, pi]); non-finite last, stably."""
    values = np.asarray(values, dtype=complex)
    finite = np.asarray(finite, dtype=bool) & np.isfinite(values)
    mod = np.where(finite, np.abs(values), 0.0)
    ang = np.where(finite, np.angle(values), 0.0)
    ang = np.where(ang == -np.pi, np.pi, ang)
    return np.lexsort((ang, mod, ~finite))


@dataclass
class _Run:
    values: np.ndarray      # eigenvalues of P (already multiplied back by alpha)
    finite: np.ndarray
    Z: np.ndarray           # companion eigenvectors, columns
    order: np.ndarray       # sort order of the scaled eigenvalues


def _run(Q: MatrixPolynomial, log_alpha: float, log_beta: float) -> _Run:
    """Solve the companion pencil of the scaled polynomial and map eigenvalues back."""
    Qs = Q if (log_alpha == 0 and log_beta == 0) else scale_log(Q, log_alpha, log_beta)
    a, b, Z = generalized_eig_arrays(companion_first(Qs))
    finite = b > 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        mu = np.where(finite, a / np.where(finite, b, 1.0), np.inf)
    finite &= np.isfinite(mu)
    order = sort_order(mu, finite)
    with np.errstate(over="ignore", invalid="ignore"):
        lam = mu * math.exp(log_alpha)
    finite &= np.isfinite(lam)
    return _Run(lam, finite, Z, order)


def _make_pair(P, n, lam, finite, z, group, source_root, blocks) -> SolvedEigenpair:
    nblocks = z.shape[0] // n
    try:
        vec = extract_eigvec(z, n, 0)
    except DegenerateBlockError:
        norms = [np.linalg.norm(z[k * n:(k + 1) * n]) for k in range(nblocks)]
        vec = extract_eigvec(z, n, int(np.argmax(norms)))
    if finite:
        alpha, beta = complex(lam), 1.0
        eta = backward_error(P, vec, alpha)
    else:
        alpha, beta, eta = complex(1.0), 0.0, None
    block_etas: dict[int, float | None] = {}
    for k in blocks:
        if k == 0:
            block_etas[k] = eta
            continue
        if not finite or k >= nblocks:
            block_etas[k] = None
            continue
        try:
            block_etas[k] = backward_error(P, extract_eigvec(z, n, k), alpha)
        except DegenerateBlockError:
            block_etas[k] = None
    return SolvedEigenpair(alpha, beta, vec, group, source_root, eta, block_etas)


def _resolve(P: MatrixPolynomial, strategy) -> ScalingStrategy:
    if isinstance(strategy, str):
        if strategy == "tropical":
            return ScalingStrategy.tropical(P)
        return ScalingStrategy(strategy)
    return strategy


def solve(P: MatrixPolynomial, strategy: ScalingStrategy | str = "tropical",
          blocks: Sequence[int] = (0,)) -> list[SolvedEigenpair]:
    """All ``n*d`` eigenpairs of ``P`` under the given scaling.

    For ``none`` and ``fanlin`` the result is sorted by increasing modulus
    (infinite last) and ``group_index`` is ``position // n``.  For
    ``tropical`` the result is ordered by group: deflated zero
    eigenvalues, then the groups selected from each root's run in root
    order, then deflated infinite eigenvalues.

    Raises SolverFailure if any pencil solve fails; for the tropical
    strategy, ``exc.partial`` holds the pairs from the runs that succeeded.
    """
    s = _resolve(P, strategy)
    n, d = P.n, P.degree
    blocks = tuple(blocks)

    if s.kind in ("none", "fanlin"):
        log_alpha = log_beta = 0.0
        source = None
        if s.kind == "fanlin":
            if d != 2:
                raise ValueError("the fanlin scaling is defined for quadratics only")
            g0, _, g2 = P.norms
            if g0 == 0 or g2 == 0:
                raise ValueError("the fanlin scaling needs ||A_0|| > 0 and ||A_2|| > 0")
            alpha_star = math.sqrt(g0 / g2)
            log_alpha = math.log(alpha_star)
            log_beta = -log_eval_maxtimes(gamma_vector(P), alpha_star)
            source = alpha_star
        try:
            run = _run(P, log_alpha, log_beta)
        except SolverFailure as exc:
            exc.partial = []
            raise
        return [_make_pair(P, n, run.values[j], run.finite[j], run.Z[:, j], pos // n, source, blocks)
                for pos, j in enumerate(run.order)]

    expected = tropical_roots(gamma_vector(P))
    if (s.roots != expected.roots or s.zero_multiplicity != expected.zero_multiplicity
            or s.infinite_multiplicity != expected.infinite_multiplicity):
        raise ValueError("tropical strategy does not match the tropical roots of this polynomial")

    z0, zinf = s.zero_multiplicity, s.infinite_multiplicity
    out: list[SolvedEigenpair] = []
    for j in range(n * z0):
        e = np.zeros(n, dtype=complex)
        e[j % n] = 1.0
        eta = backward_error(P, e, 0.0)
        out.append(SolvedEigenpair(0j, 1.0, e, j // n, None, eta, {k: eta for k in blocks}))

    # a single nonzero coefficient leaves no finite roots and nothing to solve
    if s.roots:
        Q = MatrixPolynomial(P.coeffs[z0:d + 1 - zinf]) if (z0 or zinf) else P
        tq = TropicalPoly(Q.norms)
    failures = []
    cum = 0
    for root, mult in s.roots:
        log_alpha = math.log(root)
        log_beta = -log_eval_maxtimes(tq, root)
        try:
            run = _run(Q, log_alpha, log_beta)
        except SolverFailure as exc:
            failures.append((root, exc))
            cum += mult
            continue
        for pos in range(cum * n, (cum + mult) * n):
            j = run.order[pos]
            out.append(_make_pair(P, n, run.values[j], run.finite[j], run.Z[:, j],
                                  z0 + pos // n, root, blocks))
        cum += mult

    for j in range(n * zinf):
        e = np.zeros(n, dtype=complex)
        e[j % n] = 1.0
        out.append(SolvedEigenpair(complex(1.0), 0.0, e, d - zinf + j // n, None, None,
                                   {k: None for k in blocks}))

    if failures:
        root, exc = failures[0]
        raise SolverFailure(f"{len(failures)} scaled solve(s) failed, first at root {root:g}: {exc}",
                            converged=len(out), partial=out)
    return out
