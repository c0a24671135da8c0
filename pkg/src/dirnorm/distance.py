"""Total variation between the Dirichlet law and its matched normal.

Both laws are compared as measures on R^d: the total variation is half the
L1 distance of the densities over the simplex plus half the Gaussian mass
lying off the simplex (where the Dirichlet density vanishes).  Exact
quadrature covers d <= 2; a plain Monte Carlo estimator with replicate
batching covers any dimension.  The scale factor of the theoretical bound
and the bulk-escape concentration bound are exposed alongside.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import DirichletParams, MatchedGaussian, make_matched_gaussian
from .densities import _dirichlet_log_pdf_grid, _matched_normal_log_pdf_grid
from .errors import DimensionError, InsufficientSamplesError, ParameterDomainError, \
    UnsupportedSpecError
from .quadrature import integrate_interval, integrate_region_2d
from .sampling import RngStream, dirichlet_sample_matrix

_TV_TOL = 1e-5
_MC_BATCHES = 20
# density mass beyond this many marginal standard deviations is far below
# the quadrature tolerance for both laws
_SUPPORT_SDS = 12.0
_GAUSS_BOX_SDS = 8.0


@dataclass(frozen=True)
class TvEstimate:
    """A total-variation value with its provenance.

    ``std_error`` is 0 for quadrature and the replicate-batching standard
    error for Monte Carlo.
    """

    value: float
    method: str
    std_error: float
    N: float
    eps_n: float


def _marginal_sds(p: DirichletParams) -> np.ndarray:
    r = p.mean_full()[:p.d]
    return np.sqrt(r * (1.0 - r) / (p.N * p.shape_sum + 1.0))


def _abs_diff_fn(p: DirichletParams, g: MatchedGaussian):
    def f(nodes: np.ndarray) -> np.ndarray:
        xf = np.column_stack([nodes, 1.0 - nodes.sum(axis=1)])
        fk = np.exp(_dirichlet_log_pdf_grid(p, xf))
        fg = np.exp(_matched_normal_log_pdf_grid(g, xf))
        return np.abs(fk - fg)
    return f


def _gauss_fn(g: MatchedGaussian):
    def f(nodes: np.ndarray) -> np.ndarray:
        xf = np.column_stack([nodes, 1.0 - nodes.sum(axis=1)])
        return np.exp(_matched_normal_log_pdf_grid(g, xf))
    return f


def tv_quadrature(p: DirichletParams, refinement: int = 10) -> TvEstimate:
    """Total variation by adaptive midpoint quadrature (d <= 2).

    Refinement doubles resolution until the estimate changes by < 1e-5, up
    to ``refinement`` doublings.  The off-simplex Gaussian mass is itself a
    quadrature over a box of +-8 marginal standard deviations.
    """
    if p.d > 2:
        raise DimensionError(f"tv_quadrature supports d <= 2, got d={p.d}")
    g = make_matched_gaussian(p)
    sd = _marginal_sds(p)
    r = g.r[:p.d]
    diff = _abs_diff_fn(p, g)
    gauss = _gauss_fn(g)

    if p.d == 1:
        lo = max(0.0, r[0] - _SUPPORT_SDS * sd[0])
        hi = min(1.0, r[0] + _SUPPORT_SDS * sd[0])
        l1 = integrate_interval(diff, lo, hi, _TV_TOL, max_doublings=refinement)
        blo, bhi = r[0] - _GAUSS_BOX_SDS * sd[0], r[0] + _GAUSS_BOX_SDS * sd[0]
        box_mass = integrate_interval(gauss, blo, bhi, _TV_TOL,
                                      max_doublings=refinement)
        inside = integrate_interval(gauss, max(blo, 0.0), min(bhi, 1.0), _TV_TOL,
                                    max_doublings=refinement)
        off = max(box_mass.value - inside.value, 0.0)
        value = 0.5 * l1.value + 0.5 * off
    else:
        box1 = (max(0.0, r[0] - _SUPPORT_SDS * sd[0]),
                min(1.0, r[0] + _SUPPORT_SDS * sd[0]))
        box2 = (max(0.0, r[1] - _SUPPORT_SDS * sd[1]),
                min(1.0, r[1] + _SUPPORT_SDS * sd[1]))
        l1 = integrate_region_2d(diff, box1, box2, _TV_TOL, cap_to_simplex=True,
                                 max_doublings=refinement)
        gb1 = (r[0] - _GAUSS_BOX_SDS * sd[0], r[0] + _GAUSS_BOX_SDS * sd[0])
        gb2 = (r[1] - _GAUSS_BOX_SDS * sd[1], r[1] + _GAUSS_BOX_SDS * sd[1])
        box_mass = integrate_region_2d(gauss, gb1, gb2, _TV_TOL,
                                       cap_to_simplex=False,
                                       max_doublings=refinement)
        inside = integrate_region_2d(
            gauss, (max(gb1[0], 0.0), min(gb1[1], 1.0)),
            (max(gb2[0], 0.0), min(gb2[1], 1.0)), _TV_TOL,
            cap_to_simplex=True, max_doublings=refinement)
        off = max(box_mass.value - inside.value, 0.0)
        value = 0.5 * l1.value + 0.5 * off

    return TvEstimate(value=float(min(max(value, 0.0), 1.0)), method="quadrature",
                      std_error=0.0, N=p.N, eps_n=p.eps_n)


def tv_monte_carlo(p: DirichletParams, samples: int, seed: int) -> TvEstimate:
    """Total variation as ``E_P[(1 - g/f)_+]`` from Dirichlet samples.

    The Dirichlet density f is positive on the support of P, so the
    expectation equals the integral of ``(f - g)_+`` which is the total
    variation for equal-mass densities.  Estimated over 20 replicate
    batches with fixed per-batch streams; the reported standard error is
    the batch-mean spread.
    """
    if samples < 10**4:
        raise InsufficientSamplesError(
            f"tv_monte_carlo needs >= 1e4 samples, got {samples}")
    per_batch = samples // _MC_BATCHES
    g = make_matched_gaussian(p)
    batch_means = np.empty(_MC_BATCHES)
    for b in range(_MC_BATCHES):
        xf = dirichlet_sample_matrix(p, per_batch, RngStream(seed=seed, stream_id=b))
        log_f = _dirichlet_log_pdf_grid(p, xf)
        log_g = _matched_normal_log_pdf_grid(g, xf)
        batch_means[b] = np.mean(np.clip(1.0 - np.exp(log_g - log_f), 0.0, None))
    value = float(np.clip(batch_means.mean(), 0.0, 1.0))
    se = float(batch_means.std(ddof=1) / np.sqrt(_MC_BATCHES))
    return TvEstimate(value=value, method="monte_carlo", std_error=se,
                      N=p.N, eps_n=p.eps_n)


def tv_bound_scale(g: MatchedGaussian, d: int) -> float:
    """Scale factor ``sqrt(eps_n) * d * sqrt(max r / min r)`` of the TV bound.

    The hidden universal constant of the bound is not included.
    """
    ratio = np.max(g.r) / np.min(g.r)
    return float(np.sqrt(g.eps_n) * d * np.sqrt(ratio))


def bulk_escape_bound(p: DirichletParams, eta: float) -> float:
    """Union bound ``2 (d+1) exp(-N^(1/3)/2)`` on escaping the eta=1/2 bulk.

    Only eta = 1/2 is supported; other radii would need tail constants that
    are not available in closed form.  The returned value can exceed 1, in
    which case it is vacuous as a probability bound.
    """
    if eta != 0.5:
        raise UnsupportedSpecError(
            f"bulk_escape_bound is stated only for eta = 1/2, got {eta}")
    return float(2.0 * (p.d + 1) * np.exp(-0.5 * p.N ** (1.0 / 3.0)))


def bulk_escape_frequency(p: DirichletParams, samples: int, seed: int) -> float:
    """Monte Carlo frequency of samples leaving the eta=1/2 bulk region."""
    if samples < 10**4:
        raise InsufficientSamplesError(
            f"bulk_escape_frequency needs >= 1e4 samples, got {samples}")
    xf = dirichlet_sample_matrix(p, samples, RngStream(seed=seed, stream_id=0))
    delta = (xf - p.mean_full()) * np.sqrt(p.N * p.shape_sum + 1.0)
    escaped = np.any(np.abs(delta) > 0.5 * p.N ** (1.0 / 6.0), axis=1)
    return float(escaped.mean())


def tv_rate_sweep(p_template: DirichletParams, n_values: Sequence[float],
                  method: str = "quadrature", samples: int = 10**5,
                  seed: int = 0x5EED) -> list[TvEstimate]:
    """One TV estimate per N, input-ordered; N values must ascend."""
    n_values = [float(n) for n in n_values]
    if any(n <= 0 for n in n_values):
        raise ParameterDomainError("all N values must be positive")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ParameterDomainError("N values must be strictly ascending")
    if method not in ("quadrature", "monte_carlo"):
        raise ParameterDomainError(f"unknown method {method!r}")
    out = []
    for idx, n in enumerate(n_values):
        p = DirichletParams(d=p_template.d, alpha=p_template.alpha,
                            beta=p_template.beta, N=n)
        if method == "quadrature":
            out.append(tv_quadrature(p))
        else:
            out.append(tv_monte_carlo(p, samples, seed + idx))
    return out


def fit_tv_slope(estimates: Sequence[TvEstimate]) -> float:
    """Least-squares slope of log TV against log eps_n over a sweep."""
    usable = [e for e in estimates if e.value > 0.0]
    if len(usable) < 2:
        raise ParameterDomainError("need at least two positive TV values to fit")
    x = np.log([e.eps_n for e in usable])
    y = np.log([e.value for e in usable])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
