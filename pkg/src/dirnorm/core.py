"""Domain types and the standardization map shared by all other modules.

Conventions
-----------
A point of the d-dimensional simplex is a vector ``x`` of d nonnegative
coordinates with ``sum(x) <= 1``; the deficit ``x_last = 1 - sum(x)`` acts as
an implicit (d+1)-th coordinate.  A ``DirichletParams(d, alpha, beta, N)``
value describes the Dirichlet law with shape vector ``(N*alpha, N*beta)``,
where ``beta`` plays the role of the (d+1)-th shape component.

Writing ``s = sum(alpha) + beta``, the mean composition is
``r_i = alpha_i / s`` (with ``r_last = beta / s``) and the natural small
parameter of all expansions is ``eps_N = 1 / (N * s)``.  The standardized
coordinates are ``delta_i = (x_i - r_i) * sqrt(N*s + 1)`` for
``i = 1..d+1``; they always sum to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterDomainError

# Points this close to the simplex boundary are snapped onto it; grid
# generation produces representable rounding at this scale.
SIMPLEX_CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class DirichletParams:
    """Parameters of the Dirichlet(N*alpha, N*beta) distribution.

    ``alpha`` has length ``d`` and strictly positive entries, ``beta > 0``
    is the implicit (d+1)-th shape component, and ``N > 0`` is the common
    scale (real-valued so sweeps can use log-spaced grids).
    """

    d: int
    alpha: np.ndarray
    beta: float
    N: float

    def __post_init__(self):
        alpha = np.atleast_1d(np.asarray(self.alpha, dtype=float))
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "N", float(self.N))
        if self.d < 1:
            raise ParameterDomainError(f"d must be >= 1, got {self.d}")
        if alpha.shape != (self.d,):
            raise ParameterDomainError(
                f"alpha must have shape ({self.d},), got {alpha.shape}")
        if not np.all(np.isfinite(alpha)) or np.any(alpha <= 0):
            raise ParameterDomainError("all alpha_i must be finite and > 0")
        if not np.isfinite(self.beta) or self.beta <= 0:
            raise ParameterDomainError(f"beta must be > 0, got {self.beta}")
        if not np.isfinite(self.N) or self.N <= 0:
            raise ParameterDomainError(f"N must be > 0, got {self.N}")

    @property
    def shape_sum(self) -> float:
        """``sum(alpha) + beta``, the total unscaled shape mass."""
        return float(self.alpha.sum() + self.beta)

    @property
    def eps_n(self) -> float:
        """The expansion parameter ``1 / (N * (sum(alpha) + beta))``."""
        return 1.0 / (self.N * self.shape_sum)

    def full_shapes(self) -> np.ndarray:
        """Scaled shape vector ``(N*alpha_1, ..., N*alpha_d, N*beta)``."""
        return self.N * np.append(self.alpha, self.beta)

    def mean_full(self) -> np.ndarray:
        """Mean composition ``(r_1, ..., r_d, r_last)``; sums to one."""
        return np.append(self.alpha, self.beta) / self.shape_sum


@dataclass(frozen=True)
class SimplexPoint:
    """A point of the closed d-simplex with its derived deficit coordinate.

    Coordinates within ``SIMPLEX_CLAMP_TOL`` below zero are clamped to 0,
    and a coordinate sum within the same tolerance above one clamps the
    deficit ``x_last`` to 0.
    """

    x: np.ndarray
    x_last: float = None  # derived; any supplied value is recomputed

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float)).copy()
        if x.ndim != 1 or x.size < 1:
            raise ParameterDomainError("x must be a 1-d vector")
        if not np.all(np.isfinite(x)):
            raise ParameterDomainError("simplex coordinates must be finite")
        tiny_negative = (x < 0) & (x >= -SIMPLEX_CLAMP_TOL)
        x[tiny_negative] = 0.0
        if np.any(x < 0):
            raise ParameterDomainError(f"negative simplex coordinate in {x}")
        total = x.sum()
        if total > 1.0 + SIMPLEX_CLAMP_TOL:
            raise ParameterDomainError(f"coordinates sum to {total} > 1")
        x_last = max(1.0 - total, 0.0)
        x.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "x_last", float(x_last))

    @property
    def d(self) -> int:
        return self.x.size

    def full(self) -> np.ndarray:
        """All d+1 coordinates ``(x_1, ..., x_d, x_last)``."""
        return np.append(self.x, self.x_last)

    def is_interior(self) -> bool:
        """True when every coordinate, including the deficit, is positive."""
        return bool(np.all(self.x > 0) and self.x_last > 0)


@dataclass(frozen=True)
class MatchedGaussian:
    """Mean vector and scale of the moment-matched multivariate normal.

    ``r`` holds all d+1 mean coordinates and ``eps_n = 1/(N*(sum(alpha)+beta))``.
    The covariance of the matched normal is ``(1 + 1/eps_n)^{-1} * Sigma_r``
    with ``Sigma_r = diag(r_1..r_d) - r r^T``; its determinant and inverse
    have the closed forms exposed by :func:`sigma_det` and
    :func:`sigma_inv_quadform`.
    """

    r: np.ndarray
    eps_n: float
    d: int

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        r.setflags(write=False)
        object.__setattr__(self, "r", r)
        if r.shape != (self.d + 1,):
            raise ParameterDomainError(
                f"r must have shape ({self.d + 1},), got {r.shape}")
        if np.any(r <= 0):
            raise ParameterDomainError("all mean coordinates must be > 0")
        if abs(r.sum() - 1.0) > 1e-14 * (self.d + 1):
            raise ParameterDomainError(f"mean coordinates sum to {r.sum()} != 1")
        if not np.isfinite(self.eps_n) or self.eps_n <= 0:
            raise ParameterDomainError(f"eps_n must be > 0, got {self.eps_n}")

    def sigma(self) -> np.ndarray:
        """Dense d x d matrix ``diag(r_1..r_d) - r r^T`` (unit-scale covariance)."""
        rd = self.r[:-1]
        return np.diag(rd) - np.outer(rd, rd)

    def sigma_det(self) -> float:
        """Closed-form determinant ``prod(r_1..r_{d+1})`` of :meth:`sigma`."""
        return float(np.prod(self.r))

    def sigma_inv(self) -> np.ndarray:
        """Closed-form inverse ``1/r_i * I + 1/r_last`` of :meth:`sigma`."""
        rd = self.r[:-1]
        return np.diag(1.0 / rd) + 1.0 / self.r[-1]


@dataclass(frozen=True)
class DeltaVector:
    """Standardized coordinates ``delta_i = (x_i - r_i) * sqrt(N*s + 1)``.

    Carries all d+1 components; they sum to zero by construction, so the
    last one is ``-sum(delta_1..delta_d)``.
    """

    delta: np.ndarray

    def __post_init__(self):
        delta = np.asarray(self.delta, dtype=float)
        delta.setflags(write=False)
        object.__setattr__(self, "delta", delta)
        if delta.ndim != 1 or delta.size < 2:
            raise ParameterDomainError("delta must hold at least two components")

    @property
    def d(self) -> int:
        return self.delta.size - 1


def make_matched_gaussian(p: DirichletParams) -> MatchedGaussian:
    """Mean composition and expansion scale of the matched normal law."""
    return MatchedGaussian(r=p.mean_full(), eps_n=p.eps_n, d=p.d)


def delta_of(p: DirichletParams, x: SimplexPoint) -> DeltaVector:
    """Standardize ``x`` around the mean composition at the Gaussian scale."""
    if x.d != p.d:
        raise ParameterDomainError(f"point dimension {x.d} != parameter dimension {p.d}")
    scale = np.sqrt(p.N * p.shape_sum + 1.0)
    return DeltaVector(delta=(x.full() - p.mean_full()) * scale)


def sigma_inv_quadform(g: MatchedGaussian, delta: DeltaVector) -> float:
    """Quadratic form ``delta^T Sigma_r^{-1} delta`` via its diagonal closed form.

    Uses the identity ``sum_{i<=d} delta_i^2/r_i + (sum_{i<=d} delta_i)^2/r_last``,
    which equals ``sum_{i<=d+1} delta_i^2/r_i`` whenever the components sum
    to zero.  Only the first d components of ``delta`` enter.
    """
    if delta.delta.size != g.d + 1:
        raise ParameterDomainError(
            f"delta must have {g.d + 1} components, got {delta.delta.size}")
    head = delta.delta[:-1]
    return float(np.sum(head**2 / g.r[:-1]) + head.sum()**2 / g.r[-1])
