"""Dirichlet-kernel density estimation and its asymptotic variance law.

The estimator places, at each observation, a Dirichlet kernel with scale
``1/b`` and shape ``(s + b, 1 - sum(s) + b)`` centered on the evaluation
point ``s``; its value is the sample mean of the kernel density at the
observations.  The leading-order variance at an interior point is

    var = f(s) / (n * b^(d/2) * sqrt((4 pi)^d * prod(s_1..s_{d+1})))

and the experiment below measures the ratio of the Monte Carlo variance to
this prediction under densities that admit exact sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DirichletParams, SimplexPoint
from .densities import _dirichlet_log_pdf_grid
from .errors import InsufficientSamplesError, ParameterDomainError
from .sampling import RngStream, _gamma_variates, dirichlet_sample_matrix


@dataclass(frozen=True)
class KdeConfig:
    """Bandwidth, sample count, and interior evaluation point.

    The point must stay at least ``2 sqrt(b)`` away from the simplex
    boundary in every coordinate (including the deficit) so the kernel's
    Gaussian regime applies at scale b.
    """

    b: float
    n: int
    s: SimplexPoint

    def __post_init__(self):
        if not 0.0 < self.b < 1.0:
            raise ParameterDomainError(f"bandwidth must lie in (0, 1), got {self.b}")
        if self.n < 1:
            raise ParameterDomainError(f"sample count must be >= 1, got {self.n}")
        margin = 2.0 * np.sqrt(self.b)
        if np.min(self.s.full()) < margin:
            raise ParameterDomainError(
                f"evaluation point must keep all coordinates >= 2*sqrt(b) = {margin:.4g}")

    def kernel_params(self) -> DirichletParams:
        """Dirichlet kernel parameters: scale 1/b, shapes (s + b, s_last + b)."""
        return DirichletParams(d=self.s.d, alpha=self.s.x + self.b,
                               beta=self.s.x_last + self.b, N=1.0 / self.b)


def kde_evaluate(data, cfg: KdeConfig) -> float:
    """Density estimate at ``cfg.s``: mean Dirichlet-kernel value over the data.

    ``data`` is a sequence of :class:`SimplexPoint` or an array of full
    coordinates with d+1 columns.  Kernel values are computed through the
    log-density and exponentiated; a ``-inf`` log-density (data point on a
    boundary the kernel vanishes at) contributes 0.
    """
    xf = _as_full_matrix(data)
    if xf.shape[0] == 0:
        raise ParameterDomainError("data must be nonempty")
    if xf.shape[1] != cfg.s.d + 1:
        raise ParameterDomainError(
            f"data dimension {xf.shape[1] - 1} != config dimension {cfg.s.d}")
    kp = cfg.kernel_params()
    with np.errstate(over="ignore"):
        vals = np.exp(_dirichlet_log_pdf_grid(kp, xf))
    return float(np.mean(vals))


def _as_full_matrix(data) -> np.ndarray:
    if isinstance(data, np.ndarray):
        return data
    return np.asarray([pt.full() for pt in data], dtype=float)


def variance_theory(cfg: KdeConfig, f_at_s: float, d: int) -> float:
    """Leading-order estimator variance at an interior point.

    ``n^{-1} b^{-d/2} f(s) / sqrt((4 pi)^d prod(s_i))`` with the product
    over all d+1 coordinates; the omitted correction is O(sqrt(b)) relative.
    """
    s_full = cfg.s.full()
    return float(f_at_s / (cfg.n * cfg.b ** (d / 2.0)
                           * np.sqrt((4.0 * np.pi) ** d * np.prod(s_full))))


@dataclass(frozen=True)
class KdeVarianceReport:
    """Monte Carlo variance of the estimator against its predicted value."""

    var_mc: float
    var_mc_se: float
    var_theory: float
    ratio: float
    replicates: int
    n: int
    b: float


_DENSITIES = ("uniform", "linear")


def _true_density_at(name: str, s: SimplexPoint) -> float:
    d = s.d
    vol_inv = float(math.factorial(d))
    if name == "uniform":
        return vol_inv
    # linear: f(x) proportional to 1 + x_1, normalized over the simplex
    return vol_inv * (d + 1) * (1.0 + s.x[0]) / (d + 2)


def _sample_true_density(name: str, d: int, n: int, stream: RngStream) -> np.ndarray:
    uniform_params = DirichletParams(d=d, alpha=np.ones(d), beta=1.0, N=1.0)
    if name == "uniform":
        return dirichlet_sample_matrix(uniform_params, n, stream)
    # rejection from uniform with acceptance probability (1 + x_1)/2
    gen = stream.generator()
    out = np.empty((n, d + 1))
    have = 0
    while have < n:
        need = n - have
        draw = max(32, int(need * 2.2))
        shapes = np.broadcast_to(uniform_params.full_shapes(), (draw, d + 1))
        g = _gamma_variates(gen, shapes)
        xf = g / g.sum(axis=1, keepdims=True)
        u = gen.uniform(size=draw)
        keep = xf[u < (1.0 + xf[:, 0]) / 2.0]
        take = keep[:need]
        out[have:have + take.shape[0]] = take
        have += take.shape[0]
    return out


def variance_experiment(true_density: str, cfg: KdeConfig, replicates: int,
                        seed: int) -> KdeVarianceReport:
    """Replicated Monte Carlo variance of the estimator vs the predicted law.

    ``true_density`` must admit exact sampling: "uniform" (the flat law on
    the simplex) or "linear" (density proportional to 1 + x_1, drawn by
    rejection from uniform).  Each replicate draws ``cfg.n`` observations
    from its own stream, evaluates the estimator at ``cfg.s``, and the
    variance across replicates is compared with the theory value.  The
    standard error quotes the near-normal approximation
    ``var * sqrt(2 / (replicates - 1))``.
    """
    if replicates < 100:
        raise InsufficientSamplesError(
            f"variance_experiment needs >= 100 replicates, got {replicates}")
    if true_density not in _DENSITIES:
        raise ParameterDomainError(
            f"true_density must be one of {_DENSITIES}, got {true_density!r}")
    d = cfg.s.d
    estimates = np.empty(replicates)
    for rep in range(replicates):
        data = _sample_true_density(true_density, d, cfg.n,
                                    RngStream(seed=seed, stream_id=rep))
        estimates[rep] = kde_evaluate(data, cfg)
    var_mc = float(estimates.var(ddof=1))
    var_mc_se = float(var_mc * np.sqrt(2.0 / (replicates - 1)))
    theory = variance_theory(cfg, _true_density_at(true_density, cfg.s), d)
    return KdeVarianceReport(var_mc=var_mc, var_mc_se=var_mc_se, var_theory=theory,
                             ratio=var_mc / theory, replicates=replicates,
                             n=cfg.n, b=cfg.b)
