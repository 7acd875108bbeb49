"""Independent reference computations used as test oracles.

None of these share code paths with the package under test: hulls by
exhaustive pair checks, spectra from high-precision determinant
expansion, variation by enumerating permutations.
"""
import itertools
import math

import mpmath as mp
import numpy as np


def brute_force_hull_roots(gammas, tol=1e-12):
    """Tropical roots from an O(d^3) upper-hull membership test.

    Point j is a hull vertex iff it is an end point, or for every i < j < k
    the slope from i to j exceeds the slope from j to k.
    Returns (roots [(value, mult)], zero_mult, inf_mult).
    """
    pts = [(k, math.log(g)) for k, g in enumerate(gammas) if g > 0]
    verts = []
    for idx, (j, vj) in enumerate(pts):
        if idx == 0 or idx == len(pts) - 1:
            verts.append((j, vj))
            continue
        ok = True
        for (i, vi) in pts[:idx]:
            for (k, vk) in pts[idx + 1:]:
                if not (vj - vi) / (j - i) > (vk - vj) / (k - j) + tol:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            verts.append((j, vj))
    roots = []
    for (k1, v1), (k2, v2) in zip(verts, verts[1:]):
        val = math.exp((v1 - v2) / (k2 - k1))
        if roots and math.isclose(roots[-1][0], val, rel_tol=1e-12):
            roots[-1] = (roots[-1][0], roots[-1][1] + k2 - k1)
        else:
            roots.append((val, k2 - k1))
    d = len(gammas) - 1
    return roots, verts[0][0], d - verts[-1][0]


def _det_mp(mats, lam):
    n = mats[0].shape[0]
    M = mp.matrix(n, n)
    for i in range(n):
        for j in range(n):
            acc = mp.mpc(0)
            for k in reversed(range(len(mats))):
                acc = acc * lam + mp.mpc(complex(mats[k][i, j]))
            M[i, j] = acc
    return mp.det(M)


def det_poly_roots(mats, dps=60):
    """Roots of det(sum_k mats[k] lam**k), by interpolation at roots of unity
    in high precision and mpmath's polynomial root finder.

    Assumes the leading coefficient det(mats[-1]) is nonzero.
    """
    with mp.workdps(dps):
        n = mats[0].shape[0]
        N = n * (len(mats) - 1) + 1
        w = [mp.expjpi(mp.mpf(2) * j / N) for j in range(N)]
        vals = [_det_mp(mats, wj) for wj in w]
        coeffs = [sum(vals[j] * mp.conj(w[j]) ** k for j in range(N)) / N for k in range(N)]
        roots = mp.polyroots(coeffs[::-1], maxsteps=400, extraprec=4 * dps)
        return np.array([complex(r) for r in roots])


def brute_force_variation(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    dist = np.abs(a[:, None] - b[None, :])
    m = len(a)
    best = math.inf
    for perm in itertools.permutations(range(m)):
        best = min(best, max((dist[i, perm[i]] for i in range(m)), default=0.0))
    return 0.0 if m == 0 else best


def chordal(z, w):
    """Chordal distance on the Riemann sphere; ``inf`` is the north pole."""
    if math.isinf(abs(z)) and math.isinf(abs(w)):
        return 0.0
    if math.isinf(abs(z)):
        return 1 / math.sqrt(1 + abs(w) ** 2)
    if math.isinf(abs(w)):
        return 1 / math.sqrt(1 + abs(z) ** 2)
    return abs(z - w) / (math.sqrt(1 + abs(z) ** 2) * math.sqrt(1 + abs(w) ** 2))


def brute_force_chordal_variation(a, b):
    m = len(a)
    return min(max(chordal(a[i], b[p[i]]) for i in range(m)) for p in itertools.permutations(range(m)))


def naive_backward_error(mats, x, lam):
    """Residual and weight by explicit powers, no Horner."""
    x = np.asarray(x, dtype=complex)
    r = sum(mats[k] @ x * lam ** k for k in range(len(mats)))
    w = sum(abs(lam) ** k * np.linalg.svd(mats[k], compute_uv=False)[0] for k in range(len(mats)))
    return np.linalg.norm(r) / (w * np.linalg.norm(x))


def sigma_max_via_eigh(m):
    """Largest singular value as sqrt of the top eigenvalue of M^H M."""
    return math.sqrt(max(np.linalg.eigvalsh(m.conj().T @ m)))
