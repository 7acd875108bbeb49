"""Complex matrix polynomials, the first companion pencil and the alpha/beta scaling."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Sequence

import numpy as np

from .errors import InvalidPolynomialError, ScalingOverflowError
from .tropical import TropicalPoly

__all__ = [
    "MatrixPolynomial",
    "Pencil",
    "PencilFormatError",
    "induced_2norm",
    "gamma_vector",
    "scale",
    "scale_log",
    "companion_first",
    "random_pencil",
    "random_conditioned",
    "polynomial_to_json",
    "polynomial_from_json",
]


def _as_matrix(a, name="matrix") -> np.ndarray:
    m = np.array(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or min(m.shape) < 1:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


class MatrixPolynomial:
    """``P(lam) = A_0 + A_1 lam + ... + A_d lam**d`` with square complex ``A_k``.

    Coefficients are stored as read-only complex128 arrays. Scalars are
    accepted and treated as 1x1 matrices.
    """

    def __init__(self, coeffs: Sequence[Any]):
        mats = [_as_matrix(a, f"A_{k}") for k, a in enumerate(coeffs)]
        if len(mats) < 2:
            raise InvalidPolynomialError("a matrix polynomial needs degree >= 1")
        n = mats[0].shape[0]
        for k, m in enumerate(mats):
            if m.shape != (n, n):
                raise ValueError(f"A_{k} has shape {m.shape}, expected ({n}, {n})")
            m.setflags(write=False)
        self.coeffs: tuple[np.ndarray, ...] = tuple(mats)

    @cached_property
    def norms(self) -> tuple[float, ...]:
        """Spectral norms of the coefficients."""
        return tuple(induced_2norm(a) for a in self.coeffs)

    @property
    def n(self) -> int:
        return self.coeffs[0].shape[0]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, lam: complex) -> np.ndarray:
        out = np.array(self.coeffs[-1])
        for a in reversed(self.coeffs[:-1]):
            out = out * lam + a
        return out

    def __repr__(self):
        return f"MatrixPolynomial(n={self.n}, d={self.degree})"

    def __eq__(self, other):
        if not isinstance(other, MatrixPolynomial) or other.degree != self.degree or other.n != self.n:
            return NotImplemented
        return all(np.array_equal(a, b) for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None


@dataclass(frozen=True)
class Pencil:
    """The linear pencil ``L(lam) = lam * X + Y``."""

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        X = _as_matrix(self.X, "X")
        Y = _as_matrix(self.Y, "Y")
        if X.shape != Y.shape or X.shape[0] != X.shape[1]:
            raise ValueError(f"pencil blocks must be square and equal-sized, got {X.shape} and {Y.shape}")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @property
    def size(self) -> int:
        return self.X.shape[0]


def induced_2norm(m) -> float:
    """Spectral norm (largest singular value); 0 for the zero matrix."""
    m = np.asarray(m, dtype=complex)
    if not np.any(m):
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


def gamma_vector(P: MatrixPolynomial) -> TropicalPoly:
    return TropicalPoly(P.norms)


def scale_log(P: MatrixPolynomial, log_alpha: float, log_beta: float) -> MatrixPolynomial:
    """Scale with ``A_i -> exp(log_beta + i*log_alpha) * A_i``.

    Working with logarithms keeps ``beta * alpha**i`` representable when
    ``alpha**i`` alone would overflow.
    """
    out = []
    for i, a in enumerate(P.coeffs):
        if not np.any(a):
            out.append(np.zeros_like(a))
            continue
        with np.errstate(over="ignore", invalid="ignore"):
            factor = np.exp(log_beta + i * log_alpha)
            b = a * factor
        if not np.all(np.isfinite(b)):
            raise ScalingOverflowError(i)
        out.append(b)
    return MatrixPolynomial(out)


def scale(P: MatrixPolynomial, alpha: float, beta: float) -> MatrixPolynomial:
    """Return ``P~`` with ``A~_i = beta * alpha**i * A_i``; ``spec P~ = spec P / alpha``."""
    for name, v in (("alpha", alpha), ("beta", beta)):
        if not (math.isfinite(v) and v > 0):
            raise ValueError(f"{name} must be positive and finite, got {v!r}")
    if alpha == 1 and beta == 1:
        return MatrixPolynomial(P.coeffs)
    return scale_log(P, math.log(alpha), math.log(beta))


def companion_first(P: MatrixPolynomial) -> Pencil:
    """First companion form ``lam * X1 + Y1``.

    ``X1 = diag(A_d, I, ..., I)``; the first block row of ``Y1`` is
    ``(A_{d-1}, ..., A_1, A_0)`` and the block subdiagonal is ``-I``.
    An eigenvector has the shape ``(lam**(d-1) x, ..., lam x, x)``.
    """
    n, d = P.n, P.degree
    m = n * d
    X = np.eye(m, dtype=complex)
    X[:n, :n] = P.coeffs[d]
    Y = np.zeros((m, m), dtype=complex)
    for j in range(d):
        Y[:n, j * n:(j + 1) * n] = P.coeffs[d - 1 - j]
    for j in range(1, d):
        Y[j * n:(j + 1) * n, (j - 1) * n:j * n] = -np.eye(n)
    return Pencil(X, Y)


def seed_child(seed, k: int) -> np.random.SeedSequence:
    """The ``k``-th child of ``seed`` (an int or SeedSequence), without mutating it."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return np.random.SeedSequence(ss.entropy, spawn_key=tuple(ss.spawn_key) + (k,),
                                  pool_size=ss.pool_size)


def random_pencil(n: int, d: int, target_norms: Sequence[float], seed) -> MatrixPolynomial:
    """Random complex Gaussian coefficients rescaled to the given spectral norms.

    Coefficient ``k`` is drawn from the ``k``-th child of
    ``np.random.SeedSequence(seed)`` (see :func:`seed_child`), so the draws
    for different ``k`` are independent streams and the result depends only
    on ``seed``.
    """
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    if len(target_norms) != d + 1:
        raise ValueError(f"expected {d + 1} target norms, got {len(target_norms)}")
    mats = []
    for k, target in enumerate(target_norms):
        child = seed_child(seed, k)
        target = float(target)
        if target < 0 or not math.isfinite(target):
            raise ValueError(f"target norm {k} must be finite and >= 0")
        rng = np.random.default_rng(child)
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        if target == 0:
            mats.append(np.zeros((n, n), dtype=complex))
        else:
            mats.append(g * (target / induced_2norm(g)))
    return MatrixPolynomial(mats)


def random_conditioned(n: int, cond: float, seed) -> np.ndarray:
    """Random complex matrix with spectral norm 1 and condition number ``cond``.

    ``U diag(s) V^H`` with Haar-like unitary factors (QR of complex Gaussians)
    and singular values log-spaced from 1 down to ``1/cond``.
    """
    if cond < 1:
        raise ValueError("condition number must be >= 1")
    rng = np.random.default_rng(seed)

    def unitary():
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        q, r = np.linalg.qr(g)
        return q * (np.diag(r) / np.abs(np.diag(r)))

    s = np.logspace(0.0, -math.log10(cond), n) if n > 1 else np.ones(1)
    return (unitary() * s) @ unitary().conj().T


# --- JSON wire format ------------------------------------------------------

class PencilFormatError(ValueError):
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


def polynomial_to_json(P: MatrixPolynomial) -> dict:
    """``{"n", "d", "coefficients"}`` with ``coefficients[l][i][j] == [re, im]``."""
    return {
        "n": P.n,
        "d": P.degree,
        "coefficients": [
            [[[float(z.real), float(z.imag)] for z in row] for row in a] for a in P.coeffs
        ],
    }


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def polynomial_from_json(obj) -> MatrixPolynomial:
    """Inverse of :func:`polynomial_to_json`; raises PencilFormatError naming the first bad field."""
    if not isinstance(obj, dict):
        raise PencilFormatError("<root>", "expected a JSON object")
    for key in ("n", "d", "coefficients"):
        if key not in obj:
            raise PencilFormatError(key, "missing")
    n, d, coeffs = obj["n"], obj["d"], obj["coefficients"]
    if not _is_int(n) or n < 1:
        raise PencilFormatError("n", f"must be an integer >= 1, got {n!r}")
    if not _is_int(d) or d < 1:
        raise PencilFormatError("d", f"must be an integer >= 1, got {d!r}")
    if not isinstance(coeffs, list) or len(coeffs) != d + 1:
        raise PencilFormatError("coefficients", f"must be a list of d+1 = {d + 1} matrices")
    mats = []
    for l, a in enumerate(coeffs):
        if not isinstance(a, list) or len(a) != n:
            raise PencilFormatError(f"coefficients[{l}]", f"must have {n} rows")
        m = np.empty((n, n), dtype=complex)
        for i, row in enumerate(a):
            if not isinstance(row, list) or len(row) != n:
                raise PencilFormatError(f"coefficients[{l}][{i}]", f"must have {n} entries")
            for j, z in enumerate(row):
                if not (isinstance(z, list) and len(z) == 2 and all(_is_num(t) for t in z)):
                    raise PencilFormatError(f"coefficients[{l}][{i}][{j}]", "must be a finite [re, im] pair")
                m[i, j] = complex(float(z[0]), float(z[1]))
        mats.append(m)
    return MatrixPolynomial(mats)
