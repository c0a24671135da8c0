"""Log-space density evaluation: values, boundary conventions, normalization.

Frozen reference values were computed with mpmath at 40 digits from the
product-of-gammas form of the density.
"""

import numpy as np
import pytest

from dirnorm import (BoundaryError, DirichletParams, SimplexPoint,
                     dirichlet_log_pdf, log_ratio, make_matched_gaussian,
                     matched_normal_log_pdf)
from dirnorm.densities import _dirichlet_log_pdf_grid
from dirnorm.quadrature import integrate_interval, integrate_region_2d

LOG_PDF_D2_EXAMPLE = 3.1977282318017376836   # d=2, N=10, alpha=(1,2), beta=1 at (0.2, 0.5)
LOG_RATIO_D1_SYM_N10 = -0.036889889259444821588  # Beta(10,10) at x=0.5
MATCHED_D1_N10_AT_HALF = 1.2964698662169840659   # log sqrt(42/pi)


def params(alpha, beta, n):
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    return DirichletParams(d=alpha.size, alpha=alpha, beta=float(beta), N=float(n))


def point(*coords):
    return SimplexPoint(x=np.array(coords, dtype=float))


class TestDirichletLogPdf:
    def test_uniform_is_one(self):
        p = params([1], 1, 1)
        for x in (0.1, 0.45, 0.99):
            assert dirichlet_log_pdf(p, point(x)).value == pytest.approx(0.0, abs=1e-14)

    def test_beta22_closed_form(self):
        # Beta(2,2) density 6x(1-x) is 1.125 at x=0.25
        p = params([1], 1, 2)
        got = dirichlet_log_pdf(p, point(0.25)).value
        assert got == pytest.approx(np.log(1.125), rel=1e-13)
        assert got == pytest.approx(0.11778303565638345, rel=1e-13)

    def test_d2_frozen_reference(self):
        p = params([1, 2], 1, 10)
        got = dirichlet_log_pdf(p, point(0.2, 0.5)).value
        assert got == pytest.approx(LOG_PDF_D2_EXAMPLE, abs=1e-11)

    def test_symmetry_under_coordinate_permutation(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            alpha = rng.uniform(0.5, 4.0, size=2)
            p = params(alpha, 1.3, 7)
            p_swapped = params(alpha[::-1], 1.3, 7)
            raw = rng.uniform(0.05, 0.4, size=2)
            a = dirichlet_log_pdf(p, point(*raw)).value
            b = dirichlet_log_pdf(p_swapped, point(*raw[::-1])).value
            assert a == pytest.approx(b, rel=1e-12)

    def test_boundary_conventions(self):
        # shape component > 1 at its boundary: density vanishes
        v = dirichlet_log_pdf(params([2], 1, 2), point(0.0))
        assert v.value == -np.inf and not v.boundary_singular
        # shape component exactly 1: finite limit
        v = dirichlet_log_pdf(params([1], 1, 1), point(0.0))
        assert np.isfinite(v.value)
        # shape component < 1: singular boundary
        v = dirichlet_log_pdf(params([0.4], 1, 1), point(0.0))
        assert v.value == np.inf and v.boundary_singular
        # deficit coordinate follows the same convention through N*beta
        v = dirichlet_log_pdf(params([1], 2, 2), point(1.0))
        assert v.value == -np.inf


class TestMatchedNormalLogPdf:
    def test_value_at_mean(self):
        p = params([1, 2], 1, 5)
        g = make_matched_gaussian(p)
        got = matched_normal_log_pdf(g, point(*g.r[:2])).value
        expected = (0.5 * 2 * np.log1p(1 / g.eps_n)
                    - 0.5 * np.log((2 * np.pi) ** 2 * np.prod(g.r)))
        assert got == pytest.approx(expected, rel=1e-14)

    def test_d1_closed_form(self):
        g = make_matched_gaussian(params([1], 1, 10))
        got = matched_normal_log_pdf(g, point(0.5)).value
        assert got == pytest.approx(MATCHED_D1_N10_AT_HALF, rel=1e-13)

    def test_matches_generic_multivariate_normal(self):
        from scipy.stats import multivariate_normal
        rng = np.random.default_rng(31)
        for _ in range(20):
            p = params(rng.uniform(0.5, 4.0, size=2), rng.uniform(0.5, 3.0),
                       rng.uniform(1.0, 50.0))
            g = make_matched_gaussian(p)
            cov = g.sigma() / (1.0 + 1.0 / g.eps_n)
            oracle = multivariate_normal(mean=g.r[:2], cov=cov)
            raw = rng.uniform(0.05, 0.4, size=2)
            got = matched_normal_log_pdf(g, point(*raw)).value
            assert got == pytest.approx(oracle.logpdf(raw), rel=1e-12, abs=1e-12)

    def test_accepts_points_outside_simplex(self):
        g = make_matched_gaussian(params([1], 1, 4))
        v = matched_normal_log_pdf(g, np.array([1.7]))
        assert np.isfinite(v.value)


class TestLogRatio:
    def test_frozen_symmetric_beta_value(self):
        got = log_ratio(params([1], 1, 10), point(0.5))
        assert got == pytest.approx(LOG_RATIO_D1_SYM_N10, abs=1e-13)
        # leading behaviour -3/4 * eps + O(eps^2) with eps = 1/20
        assert got == pytest.approx(-0.0375, abs=2.5e-3)

    def test_equals_difference_of_log_pdfs(self):
        rng = np.random.default_rng(41)
        for _ in range(20):
            p = params(rng.uniform(0.5, 3.0, size=2), rng.uniform(0.5, 2.0),
                       rng.uniform(2.0, 1000.0))
            raw = p.mean_full()[:2] + rng.uniform(-0.02, 0.02, size=2)
            x = point(*raw)
            direct = (dirichlet_log_pdf(p, x).value
                      - matched_normal_log_pdf(make_matched_gaussian(p), x).value)
            assert log_ratio(p, x) == pytest.approx(direct, abs=1e-10)

    def test_symmetric_reflection(self):
        p = params([1], 1, 25)
        for x in (0.31, 0.47):
            assert log_ratio(p, point(x)) == pytest.approx(
                log_ratio(p, point(1.0 - x)), rel=1e-12)

    def test_large_n_limit_at_mean(self):
        # at x = r the ratio tends to eps * (-d/2 + (1 - sum 1/r)/12)
        p = params([1, 2], 1, 1e4)
        g = make_matched_gaussian(p)
        limit = p.eps_n * (-p.d / 2 + (1 - np.sum(1 / g.r)) / 12)
        got = log_ratio(p, point(*g.r[:2]))
        assert got == pytest.approx(limit, rel=1e-2)

    def test_boundary_point_rejected(self):
        with pytest.raises(BoundaryError):
            log_ratio(params([1], 1, 5), point(0.0))
        with pytest.raises(BoundaryError):
            log_ratio(params([1, 1], 1, 5), point(0.3, 0.7))

    def test_invariant_to_gaussian_evaluation_route(self):
        # closed-form quadratic form vs an explicit dense-inverse Gaussian
        rng = np.random.default_rng(51)
        for _ in range(10):
            p = params(rng.uniform(0.5, 3.0, size=2), 1.0, rng.uniform(5.0, 200.0))
            g = make_matched_gaussian(p)
            raw = g.r[:2] + rng.uniform(-0.01, 0.01, size=2)
            x = point(*raw)
            head = raw - g.r[:2]
            quad = head @ np.linalg.inv(g.sigma() / (1 + 1 / g.eps_n)) @ head
            dense_gauss = (-0.5 * quad
                           - 0.5 * np.log((2 * np.pi) ** 2
                                          * np.linalg.det(g.sigma() / (1 + 1 / g.eps_n))))
            alt = dirichlet_log_pdf(p, x).value - dense_gauss
            assert log_ratio(p, x) == pytest.approx(alt, abs=1e-10)


def normalization_integral(p, tol=1e-7):
    f = lambda nodes: np.exp(_dirichlet_log_pdf_grid(
        p, np.column_stack([nodes, 1.0 - nodes.sum(axis=1)])))
    if p.d == 1:
        return integrate_interval(f, 0.0, 1.0, tol, richardson=True,
                                  max_doublings=18).value
    return integrate_region_2d(f, (0.0, 1.0), (0.0, 1.0), tol, cap_to_simplex=True,
                               richardson=True, max_doublings=12).value


class TestNormalization:
    @pytest.mark.parametrize("alpha,beta", [([1], 1), ([3], 2), ([1, 1], 1), ([2, 3], 2)])
    @pytest.mark.parametrize("n", [1, 10, 100])
    def test_density_integrates_to_one(self, alpha, beta, n):
        p = params(alpha, beta, n)
        assert normalization_integral(p) == pytest.approx(1.0, abs=1e-6)


class TestAggregation:
    def test_marginal_recovers_beta(self):
        # integrating out x2 leaves the Beta(N a1, N (a2 + beta)) marginal
        p = params([1, 2], 1, 10)
        marginal = params([1], 3, 10)  # Beta(10, 30)
        for x1 in (0.1, 0.25, 0.4):
            f = lambda nodes: np.exp(_dirichlet_log_pdf_grid(
                p, np.column_stack([np.full(len(nodes), x1), nodes[:, 0],
                                    1.0 - x1 - nodes[:, 0]])))
            got = integrate_interval(f, 0.0, 1.0 - x1, 1e-9, richardson=True,
                                     max_doublings=18).value
            want = np.exp(dirichlet_log_pdf(marginal, point(x1)).value)
            assert got == pytest.approx(want, abs=1e-6 * max(1.0, want))
