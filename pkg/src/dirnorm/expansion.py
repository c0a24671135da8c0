"""Correction terms of the log-ratio expansion and the sup-error diagnostics.

The log-ratio of the Dirichlet density to its matched normal admits an
expansion in powers of ``sqrt(eps_n)`` whose first two coefficients are the
closed forms ``correction_t1`` and ``correction_t2`` below.  The verification
protocol measures, for approximation orders 0..2, the sup-norm error

    E_i = sup |log_ratio(x) - prediction_i(x)|

over a tensor grid spanning the box ``|x_j - r_j| <= sqrt(eps_n)`` in the d
free coordinates, intersected with the open simplex, and reports the
exponent diagnostics ``log E_i / log eps_n``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import DeltaVector, DirichletParams, MatchedGaussian, SimplexPoint, \
    delta_of, make_matched_gaussian
from .densities import _log_ratio_grid
from .errors import EmptyRegionError, ParameterDomainError

DEFAULT_GRID = 41


@dataclass(frozen=True)
class BulkRegion:
    """Membership test for the high-probability region of the Dirichlet law.

    A point belongs to the region when every standardized coordinate
    (including the deficit one) satisfies ``|delta_i| <= eta * N^(1/6)``.
    """

    eta: float

    def __post_init__(self):
        if not 0.0 < self.eta < 1.0:
            raise ParameterDomainError(f"eta must lie in (0, 1), got {self.eta}")

    def contains(self, p: DirichletParams, x: SimplexPoint) -> bool:
        delta = delta_of(p, x).delta
        return bool(np.all(np.abs(delta) <= self.eta * p.N ** (1.0 / 6.0)))


@dataclass(frozen=True)
class ExpansionErrors:
    """Sup-errors of the order-0/1/2 approximations with exponent diagnostics.

    ``exp_i = log(E_i) / log(eps_n)``; larger exponents mean faster decay.
    No pointwise ordering of E0/E1/E2 is implied by construction.
    """

    E0: float
    E1: float
    E2: float
    exp0: float
    exp1: float
    exp2: float
    N: float
    eps_n: float
    grid_points_per_axis: int


def correction_t1(g: MatchedGaussian, delta: DeltaVector) -> float:
    """First-order coefficient (of ``sqrt(eps_n)``) in the log-ratio expansion.

    ``-sum_i delta_i/r_i + (1/3) sum_i delta_i (delta_i/r_i)^2`` with sums
    over all d+1 coordinates.
    """
    d, r = delta.delta, g.r
    w = d / r
    return float(-w.sum() + np.sum(d * w * w) / 3.0)


def correction_t2(g: MatchedGaussian, delta: DeltaVector, d: int) -> float:
    """Second-order coefficient (of ``eps_n``) in the log-ratio expansion.

    ``(1/2) sum_i (1 + r_i)(delta_i/r_i)^2 - (1/4) sum_i delta_i (delta_i/r_i)^3
    - d/2 + (1/12)(1 - sum_i 1/r_i)`` with sums over all d+1 coordinates.
    """
    dl, r = delta.delta, g.r
    w = dl / r
    return float(0.5 * np.sum((1.0 + r) * w * w)
                 - 0.25 * np.sum(dl * w**3)
                 - 0.5 * d
                 + (1.0 - np.sum(1.0 / r)) / 12.0)


def expansion_prediction(p: DirichletParams, x: SimplexPoint, order: int) -> float:
    """Predicted log-ratio at ``x``: 0, or the partial sums of the expansion.

    Order 0 predicts 0; order 1 adds ``sqrt(eps_n) * t1``; order 2 adds
    ``eps_n * t2`` on top.
    """
    if order not in (0, 1, 2):
        raise ParameterDomainError(f"order must be 0, 1 or 2, got {order}")
    if order == 0:
        return 0.0
    g = make_matched_gaussian(p)
    delta = delta_of(p, x)
    value = np.sqrt(p.eps_n) * correction_t1(g, delta)
    if order == 2:
        value += p.eps_n * correction_t2(g, delta, p.d)
    return float(value)


def _box_grid(p: DirichletParams, grid: int) -> np.ndarray:
    """Tensor grid over ``|x_i - r_i| <= sqrt(eps_n)`` inside the open simplex.

    Returns full-coordinate rows (m, d+1); raises when no grid point is
    strictly interior.
    """
    r = p.mean_full()
    h = np.sqrt(p.eps_n)
    axes = [np.linspace(r[i] - h, r[i] + h, grid) for i in range(p.d)]
    mesh = np.meshgrid(*axes, indexing="ij")
    head = np.stack([m.ravel() for m in mesh], axis=1)
    last = 1.0 - head.sum(axis=1)
    keep = np.all(head > 0.0, axis=1) & (last > 0.0)
    if not np.any(keep):
        raise EmptyRegionError(
            "no grid point of the sup-error box lies inside the open simplex")
    return np.column_stack([head[keep], last[keep]])


def _corrections_grid(p: DirichletParams, xf: np.ndarray):
    """Vectorized (t1, t2) over full-coordinate rows ``xf``."""
    r = p.mean_full()
    delta = (xf - r) * np.sqrt(p.N * p.shape_sum + 1.0)
    w = delta / r
    t1 = -w.sum(axis=1) + np.sum(delta * w * w, axis=1) / 3.0
    t2 = (0.5 * np.sum((1.0 + r) * w * w, axis=1)
          - 0.25 * np.sum(delta * w**3, axis=1)
          - 0.5 * p.d
          + (1.0 - np.sum(1.0 / r)) / 12.0)
    return t1, t2


def error_sup(p: DirichletParams, grid: int = DEFAULT_GRID) -> ExpansionErrors:
    """Sup-errors E0/E1/E2 of all three approximation orders on the box grid.

    ``grid`` is the odd number of points per axis (endpoints included, so the
    center point ``x = r`` is on the grid); cells falling outside the open
    simplex are skipped.  Tensor grids are restricted to d <= 3.
    """
    if p.d > 3:
        raise ParameterDomainError(f"tensor sup grids support d <= 3, got d={p.d}")
    if grid < 3 or grid % 2 == 0:
        raise ParameterDomainError(f"grid must be an odd integer >= 3, got {grid}")
    xf = _box_grid(p, grid)
    lr = _log_ratio_grid(p, xf)
    t1, t2 = _corrections_grid(p, xf)
    sq = np.sqrt(p.eps_n)
    e0 = float(np.max(np.abs(lr)))
    e1 = float(np.max(np.abs(lr - sq * t1)))
    e2 = float(np.max(np.abs(lr - sq * t1 - p.eps_n * t2)))
    log_eps = np.log(p.eps_n)

    def expo(e):
        return float(np.log(e) / log_eps) if e > 0.0 else np.nan

    return ExpansionErrors(E0=e0, E1=e1, E2=e2,
                           exp0=expo(e0), exp1=expo(e1), exp2=expo(e2),
                           N=p.N, eps_n=p.eps_n, grid_points_per_axis=grid)


def exponent_sweep(p_template: DirichletParams,
                   n_values: Sequence[float],
                   grid: int = DEFAULT_GRID,
                   threads: int = 1) -> list[ExpansionErrors]:
    """One :class:`ExpansionErrors` per N, deterministic and input-ordered.

    ``p_template`` supplies (d, alpha, beta); its own N is ignored.  N values
    must be positive and ascending.
    """
    n_values = [float(n) for n in n_values]
    if any(n <= 0 for n in n_values):
        raise ParameterDomainError("all N values must be positive")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ParameterDomainError("N values must be strictly ascending")

    def one(n):
        p = DirichletParams(d=p_template.d, alpha=p_template.alpha,
                            beta=p_template.beta, N=n)
        return error_sup(p, grid=grid)

    if threads > 1 and len(n_values) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, n_values))
    return [one(n) for n in n_values]


def default_n_grid(n_min: float = 10.0, n_max: float = 1e5,
                   n_points: int = 40) -> np.ndarray:
    """Log-spaced N grid matching the sweep figures' horizontal axes."""
    if n_points < 1:
        raise ParameterDomainError("n_points must be >= 1")
    if n_points == 1:
        return np.array([float(n_min)])
    if not 0 < n_min < n_max:
        raise ParameterDomainError("need 0 < n_min < n_max")
    return np.geomspace(float(n_min), float(n_max), int(n_points))
