"""Max-times polynomials, their Newton polygon and tropical roots.

A max-times polynomial ``tp(x) = max_k gamma_k * x**k`` with nonnegative
coefficients is handled in log coordinates: the point set
``{(k, log gamma_k) : gamma_k > 0}`` has an upper concave hull whose
negated slopes are the logarithms of the tropical roots, and whose
horizontal widths are the multiplicities.  Zero coefficients are the
max-times zero; leading/trailing runs of them become roots at 0 and at
+infinity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidPolynomialError

__all__ = [
    "SLOPE_TOL",
    "TropicalPoly",
    "TropicalRoots",
    "NewtonPolygon",
    "newton_polygon",
    "tropical_roots",
    "eval_maxtimes",
    "log_eval_maxtimes",
]

# absolute tolerance on slope comparisons, in log space
SLOPE_TOL = 1e-12


@dataclass(frozen=True)
class TropicalPoly:
    coeffs: tuple[float, ...]

    def __init__(self, coeffs: Sequence[float]):
        c = tuple(float(g) for g in coeffs)
        if len(c) < 2:
            raise InvalidPolynomialError("a tropical polynomial needs degree >= 1")
        for k, g in enumerate(c):
            if not math.isfinite(g) or g < 0:
                raise InvalidPolynomialError(f"coefficient {k} must be finite and >= 0, got {g!r}")
        if not any(g > 0 for g in c):
            raise InvalidPolynomialError("all coefficients are zero")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def support(self) -> list[int]:
        """Indices of the strictly positive coefficients, ascending."""
        return [k for k, g in enumerate(self.coeffs) if g > 0]


@dataclass(frozen=True)
class TropicalRoots:
    """Ascending distinct roots with multiplicities, plus deflated roots at 0 and +inf."""

    roots: tuple[tuple[float, int], ...]
    zero_multiplicity: int = 0
    infinite_multiplicity: int = 0

    @property
    def values(self) -> list[float]:
        return [v for v, _ in self.roots]

    @property
    def multiplicities(self) -> list[int]:
        return [m for _, m in self.roots]

    @property
    def total_multiplicity(self) -> int:
        return self.zero_multiplicity + sum(self.multiplicities) + self.infinite_multiplicity

    def expanded(self) -> list[float]:
        """All roots counted with multiplicity, ascending, 0 and inf included."""
        out = [0.0] * self.zero_multiplicity
        for v, m in self.roots:
            out.extend([v] * m)
        out.extend([math.inf] * self.infinite_multiplicity)
        return out


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[tuple[int, float], ...]

    def slopes(self) -> list[float]:
        v = self.vertices
        return [(v[i + 1][1] - v[i][1]) / (v[i + 1][0] - v[i][0]) for i in range(len(v) - 1)]


def _log_points(p: TropicalPoly) -> list[tuple[int, float]]:
    return [(k, math.log(g)) for k, g in enumerate(p.coeffs) if g > 0]


def newton_polygon(p: TropicalPoly) -> NewtonPolygon:
    """Upper concave hull of ``(k, log gamma_k)`` by a single monotone scan.

    Points are already sorted by abscissa, so this is the upper half of
    Andrew's monotone chain and runs in O(d).  A middle point lying on a
    chord (within ``SLOPE_TOL`` in slope) is dropped.
    """
    hull: list[tuple[int, float]] = []
    for pt in _log_points(p):
        while len(hull) >= 2:
            (k0, v0), (k1, v1) = hull[-2], hull[-1]
            left = (v1 - v0) / (k1 - k0)
            right = (pt[1] - v1) / (pt[0] - k1)
            # keep hull[-1] only if the slope strictly decreases through it
            if left > right + SLOPE_TOL:
                break
            hull.pop()
        hull.append(pt)
    return NewtonPolygon(tuple(hull))


def roots_from_polygon(poly: NewtonPolygon, degree: int) -> TropicalRoots:
    verts = poly.vertices
    roots: list[tuple[float, int]] = []
    for (k1, v1), (k2, v2) in zip(verts, verts[1:]):
        value = math.exp((v1 - v2) / (k2 - k1))
        mult = k2 - k1
        if roots and roots[-1][0] == value:
            roots[-1] = (value, roots[-1][1] + mult)
        else:
            roots.append((value, mult))
    first, last = verts[0][0], verts[-1][0]
    return TropicalRoots(tuple(roots), zero_multiplicity=first, infinite_multiplicity=degree - last)


def tropical_roots(p: TropicalPoly) -> TropicalRoots:
    """Tropical roots of ``p`` in linear time (one hull scan)."""
    return roots_from_polygon(newton_polygon(p), p.degree)


def log_eval_maxtimes(p: TropicalPoly, x: float) -> float:
    """``log tp(x)``; ``-inf`` only if ``tp(x) == 0``."""
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x == 0:
        return math.log(p.coeffs[0]) if p.coeffs[0] > 0 else -math.inf
    if math.isinf(x):
        return math.inf if p.support()[-1] > 0 else math.log(p.coeffs[0])
    lx = math.log(x)
    return max(math.log(g) + k * lx for k, g in enumerate(p.coeffs) if g > 0)


def eval_maxtimes(p: TropicalPoly, x: float) -> float:
    """``max_k gamma_k * x**k``.

    The maximizing index is found in log space; the winning term is then
    formed directly when representable, so exact inputs give exact outputs.
    """
    if x == 0:
        return p.coeffs[0]
    lx = math.log(x)
    k, g = max(((k, g) for k, g in enumerate(p.coeffs) if g > 0),
               key=lambda kg: math.log(kg[1]) + kg[0] * lx)
    try:
        val = g * x ** k
    except OverflowError:
        val = math.inf
    if 0 < val < math.inf:
        return val
    best = math.log(g) + k * lx
    return math.exp(best) if best < 709.78 else math.inf
