import math

import numpy as np
import pytest

from conftest import INTRO
from oracles import brute_force_variation, det_poly_roots, naive_backward_error
from tropeig.analysis import eigenvalue_variation
from tropeig.errors import DegenerateBlockError, InvalidEigenvectorError
from tropeig.genzeig import generalized_eig
from tropeig.matpoly import MatrixPolynomial, companion_first, random_pencil, scale
from tropeig.scaled_solver import (
    ScalingStrategy,
    backward_error,
    extract_eigvec,
    solve,
    sort_order,
)


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def finite_values(pairs):
    return np.array([p.value for p in pairs if p.is_finite])


class TestBackwardError:
    def test_exact_pair_is_zero(self):
        P = MatrixPolynomial([-np.diag([1.0, 2.0]), np.eye(2)])
        assert backward_error(P, [1, 0], 1.0) == 0.0

    def test_common_scalar_invariance(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            A = [crandn(rng, 4, 4) for _ in range(3)]
            c = complex(*rng.standard_normal(2)) * 10 ** rng.uniform(-8, 8)
            x, lam = crandn(rng, 4), complex(*rng.standard_normal(2)) * 10 ** rng.uniform(-3, 3)
            e1 = backward_error(MatrixPolynomial(A), x, lam)
            e2 = backward_error(MatrixPolynomial([c * a for a in A]), x, lam)
            assert e2 == pytest.approx(e1, rel=1e-15 * 20)

    def test_matches_explicit_powers(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            A = [crandn(rng, 4, 4) for _ in range(3)]
            x = crandn(rng, 4)
            x /= np.linalg.norm(x)
            lam = complex(*rng.standard_normal(2)) * 10 ** rng.uniform(-3, 3)
            got = backward_error(MatrixPolynomial(A), x, lam)
            assert got == pytest.approx(naive_backward_error(A, x, lam), rel=1e-13)

    def test_huge_lambda_no_overflow(self):
        P = MatrixPolynomial([np.eye(2), np.eye(2), np.eye(2)])
        eta = backward_error(P, [1, 0], 1e200)
        assert eta == pytest.approx(1.0, rel=1e-12)

    def test_infinite_lambda_not_computable(self):
        P = MatrixPolynomial([np.eye(2), np.eye(2)])
        assert backward_error(P, [1, 0], complex(math.inf, 0)) is None

    def test_zero_vector(self):
        with pytest.raises(InvalidEigenvectorError):
            backward_error(MatrixPolynomial([np.eye(2), np.eye(2)]), [0, 0], 1.0)


class TestExtractEigvec:
    def test_first_block(self):
        np.testing.assert_array_equal(extract_eigvec(np.array([1, 0, 0, 0]), 2, 0), [1, 0])

    def test_zero_block(self):
        with pytest.raises(DegenerateBlockError):
            extract_eigvec(np.array([1, 0, 0, 0]), 2, 1)

    def test_normalized(self):
        v = extract_eigvec(np.array([0, 0, 3, 4j]), 2, 1)
        assert np.linalg.norm(v) == pytest.approx(1.0)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            extract_eigvec(np.zeros(4), 2, 2)

    def test_companion_consistency(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            A = [crandn(rng, 3, 3) for _ in range(3)]
            P = MatrixPolynomial(A)
            for e in generalized_eig(companion_first(P)):
                if e.is_infinite:
                    continue
                lam = e.value
                zeta = extract_eigvec(e.vector, 3, 0)
                alpha_t = sum(abs(lam) ** k * g for k, g in enumerate(P.norms))
                assert np.linalg.norm(P(lam) @ zeta) <= 1e-10 * alpha_t


class TestSortOrder:
    def test_modulus_then_phase_then_infinite(self):
        vals = np.array([np.inf, 2, -1, 1j, 1, -1j, np.nan])
        fin = np.isfinite(vals)
        order = sort_order(vals, fin)
        assert list(order[:5]) == [5, 4, 3, 2, 1]
        assert set(order[5:]) == {0, 6}

    def test_negative_real_axis_phase_is_pi(self):
        vals = np.array([complex(-1, -0.0), complex(0, 1)])
        assert list(sort_order(vals, np.ones(2, bool))) == [1, 0]


class TestSolveExamples:
    def test_degree_one_matches_unscaled(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            P = MatrixPolynomial([crandn(rng, 4, 4) * 1e3, crandn(rng, 4, 4) * 1e-2])
            t = finite_values(solve(P, "tropical"))
            u = finite_values(solve(P, "none"))
            assert len(t) == len(u) == 4
            assert eigenvalue_variation(t, u) <= 1e-12 * max(abs(u))

    def test_intro_against_oracle(self):
        pairs = solve(INTRO, "tropical")
        lam = finite_values(pairs)
        assert len(lam) == 4
        ref = det_poly_roots(list(INTRO.coeffs))
        for z in lam:
            assert min(abs(ref - z)) <= 1e-10 * abs(z)
        assert max(p.eta for p in pairs) <= 1e-14

    def test_intro_unscaled_breaks_down(self):
        pairs = solve(INTRO, "none")
        ref = det_poly_roots(list(INTRO.coeffs))
        bad = [p for p in pairs
               if not p.is_finite or min(abs(ref - p.value)) > 1e-2 * abs(p.value)]
        assert bad

    def test_quadratic_two_roots_displays(self):
        g = (1e-3, 1.0, 1e-4)
        P = random_pencil(3, 2, g, seed=5)
        A0, A1, A2 = P.coeffs
        g0, g1, g2 = P.norms
        s = ScalingStrategy.tropical(P)
        (am, _), (ap, _) = s.roots
        bm, bp = s.betas
        assert ap == pytest.approx(g1 / g2, rel=1e-14)
        assert am == pytest.approx(g0 / g1, rel=1e-14)
        assert bp == pytest.approx(g2 / g1**2, rel=1e-14)
        assert bm == pytest.approx(1 / g0, rel=1e-14)
        I, Z = np.eye(3), np.zeros((3, 3))
        top = companion_first(scale(P, ap, bp))
        np.testing.assert_allclose(top.X, np.block([[A2 / g2, Z], [Z, I]]), rtol=1e-13, atol=1e-15)
        np.testing.assert_allclose(top.Y, np.block([[A1 / g1, g2 / g1**2 * A0], [-I, Z]]),
                                   rtol=1e-13, atol=1e-15)
        bot = companion_first(scale(P, am, bm))
        np.testing.assert_allclose(bot.X, np.block([[g0 / g1**2 * A2, Z], [Z, I]]),
                                   rtol=1e-13, atol=1e-15)
        np.testing.assert_allclose(bot.Y, np.block([[A1 / g1, A0 / g0], [-I, Z]]),
                                   rtol=1e-13, atol=1e-15)

    def test_single_root_coincides_with_fanlin(self):
        P = random_pencil(3, 2, (1.0, 0.5, 4.0), seed=6)
        g0, _, g2 = P.norms
        s = ScalingStrategy.tropical(P)
        assert len(s.roots) == 1 and s.roots[0][1] == 2
        assert s.roots[0][0] == pytest.approx(math.sqrt(g0 / g2), rel=1e-14)
        assert s.betas[0] == pytest.approx(1 / g0, rel=1e-14)
        t = solve(P, s)
        f = solve(P, "fanlin")
        assert all(p.source_root == pytest.approx(math.sqrt(g0 / g2)) for p in t + f)
        np.testing.assert_allclose([p.value for p in t], [p.value for p in f], rtol=1e-14)

    def test_identity_pencil_every_scaling(self):
        P = MatrixPolynomial([-np.eye(2), np.eye(2)])
        for kind in ("none", "tropical"):
            np.testing.assert_allclose([p.value for p in solve(P, kind)], [1, 1], rtol=1e-15)


class TestSolveProperties:
    @pytest.mark.parametrize("kind", ["none", "fanlin", "tropical"])
    def test_cardinality(self, kind):
        rng = np.random.default_rng(7)
        for _ in range(10):
            n = int(rng.integers(1, 5))
            d = 2 if kind == "fanlin" else int(rng.integers(1, 6))
            P = random_pencil(n, d, 10.0 ** rng.uniform(-5, 5, d + 1), seed=int(rng.integers(1 << 30)))
            pairs = solve(P, kind)
            assert len(pairs) == n * d
            assert all(0 <= p.group_index < d for p in pairs)
            for p in pairs:
                assert abs(np.linalg.norm(p.vector) - 1) <= 1e-12

    def test_group_coherence(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            d = int(rng.integers(2, 6))
            P = random_pencil(3, d, 10.0 ** rng.uniform(-6, 6, d + 1), seed=int(rng.integers(1 << 30)))
            pairs = solve(P, "tropical")
            for root in {p.source_root for p in pairs}:
                run = [p for p in pairs if p.source_root == root]
                for a, b in zip(run, run[1:]):
                    assert a.group_index <= b.group_index
                    if a.group_index < b.group_index:
                        assert a.modulus <= b.modulus * (1 + 1e-12)

    def test_well_scaled_matches_unscaled(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            d = int(rng.integers(1, 5))
            P = random_pencil(3, d, np.ones(d + 1), seed=int(rng.integers(1 << 30)))
            t, u = solve(P, "tropical"), solve(P, "none")
            assert all(p.is_finite for p in t + u)
            tv, uv = finite_values(t), finite_values(u)
            assert eigenvalue_variation(tv, uv) <= 1e-10 * (1 + max(abs(uv)))

    def test_eta_reproducible(self):
        rng = np.random.default_rng(10)
        for _ in range(10):
            d = int(rng.integers(1, 5))
            P = random_pencil(3, d, 10.0 ** rng.uniform(-4, 4, d + 1), seed=int(rng.integers(1 << 30)))
            for kind in ("none", "tropical"):
                for p in solve(P, kind):
                    if p.is_finite:
                        assert backward_error(P, p.vector, p.value) == p.eta
                    else:
                        assert p.eta is None

    def test_backward_error_dominance(self):
        etas_t, etas_small = [], []
        for t in range(20):
            P = random_pencil(10, 2, (6.01e-3, 4.73e3, 5.54e-5), seed=1000 + t)
            etas_t += [p.eta for p in solve(P, "tropical")]
            etas_small += [p.eta for p in solve(P, "none")[:10]]
        med_t = float(np.median(etas_t))
        assert med_t <= 1e-14
        assert float(np.median(etas_small)) >= 1e3 * med_t

    def test_second_block_recorded(self):
        P = random_pencil(4, 2, (1e-3, 1, 1e-3), seed=11)
        for p in solve(P, "tropical", blocks=(0, 1)):
            assert set(p.block_etas) == {0, 1}
            assert p.block_etas[0] == p.eta
            assert p.block_etas[1] is not None and p.block_etas[1] >= 0


class TestSolveErrors:
    def test_fanlin_needs_quadratic(self):
        with pytest.raises(ValueError):
            solve(random_pencil(2, 3, (1, 1, 1, 1), seed=1), "fanlin")

    def test_strategy_mismatch(self):
        P = random_pencil(2, 2, (1e-3, 1, 1e-3), seed=1)
        Q = random_pencil(2, 2, (1, 1, 1), seed=1)
        with pytest.raises(ValueError):
            solve(P, ScalingStrategy.tropical(Q))

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            ScalingStrategy("balanced")

    def test_strategy_invariants(self):
        with pytest.raises(ValueError):
            ScalingStrategy("tropical", ((2.0, 1), (1.0, 1)), (1.0, 1.0))
        with pytest.raises(ValueError):
            ScalingStrategy("tropical", ((1.0, 1),), (0.0,))


class TestDeflation:
    def test_zero_constant_term(self):
        rng = np.random.default_rng(12)
        A1, A2 = crandn(rng, 2, 2), crandn(rng, 2, 2)
        P = MatrixPolynomial([np.zeros((2, 2)), A1, A2])
        pairs = solve(P, "tropical")
        assert len(pairs) == 4
        zeros = [p for p in pairs if p.source_root is None]
        assert len(zeros) == 2
        assert all(p.value == 0 and p.eta == 0.0 and p.group_index == 0 for p in zeros)
        rest = finite_values([p for p in pairs if p.source_root is not None])
        ref = np.linalg.eigvals(-np.linalg.solve(A2, A1))
        assert brute_force_variation(rest, ref) <= 1e-12 * max(abs(ref))

    def test_zero_leading_term(self):
        rng = np.random.default_rng(13)
        A0, A1 = crandn(rng, 2, 2), crandn(rng, 2, 2)
        P = MatrixPolynomial([A0, A1, np.zeros((2, 2))])
        pairs = solve(P, "tropical")
        infs = [p for p in pairs if not p.is_finite]
        assert len(infs) == 2
        assert all(p.eta is None and p.group_index == 1 for p in infs)
        ref = np.linalg.eigvals(-np.linalg.solve(A1, A0))
        assert brute_force_variation(finite_values(pairs), ref) <= 1e-12 * max(abs(ref))

    def test_monomial(self):
        P = MatrixPolynomial([np.zeros((2, 2)), np.eye(2), np.zeros((2, 2))])
        pairs = solve(P, "tropical")
        assert sum(p.value == 0 for p in pairs if p.is_finite) == 2
        assert sum(not p.is_finite for p in pairs) == 2
