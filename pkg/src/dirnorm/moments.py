"""Central moments of the Dirichlet law: closed forms, an exact oracle, and
event-restricted bound checks.

The closed forms cover mixed second and third central moments and the pure
fourth central moment (leading term only, flagged as asymptotic).  The
oracle computes arbitrary mixed central moments up to order four exactly:
raw moments are rising-factorial ratios of the shape parameters, and both
the rising factorials and the centering expansion are carried out in exact
rational arithmetic (every float is a rational, so no precision is lost on
conversion).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import DirichletParams
from .errors import InsufficientSamplesError, ParameterDomainError, UnsupportedSpecError
from .sampling import RngStream, dirichlet_sample_matrix


@dataclass(frozen=True)
class MomentSpec:
    """A multiset of coordinate indices (1-based) of size 2, 3, or 4.

    Size-4 specs must repeat a single index: only the pure fourth central
    moment has a closed form here.
    """

    indices: tuple

    def __post_init__(self):
        idx = tuple(sorted(int(i) for i in self.indices))
        object.__setattr__(self, "indices", idx)
        if len(idx) not in (2, 3, 4):
            raise UnsupportedSpecError(f"moment order must be 2, 3 or 4, got {len(idx)}")
        if any(i < 1 for i in idx):
            raise UnsupportedSpecError(f"indices must be >= 1, got {idx}")
        if len(idx) == 4 and len(set(idx)) != 1:
            raise UnsupportedSpecError(
                "mixed fourth moments have no closed form; only (i,i,i,i) is supported")

    @property
    def order(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class MomentValue:
    """A closed-form moment value; ``asymptotic`` marks a leading-term-only result."""

    value: float
    asymptotic: bool = False


def _check_indices(p: DirichletParams, indices: Sequence[int]):
    if any(not 1 <= i <= p.d for i in indices):
        raise UnsupportedSpecError(
            f"indices {tuple(indices)} outside coordinate range 1..{p.d}")


def _exact_mean_and_eps(p: DirichletParams):
    """Mean coordinates and eps as exact rationals (floats are rationals)."""
    shape_sum = sum((Fraction(float(a)) for a in p.alpha),
                    Fraction(float(p.beta)))
    means = [Fraction(float(a)) / shape_sum for a in p.alpha]
    means.append(Fraction(float(p.beta)) / shape_sum)
    eps = 1 / (Fraction(float(p.N)) * shape_sum)
    return means, eps


def central_moment_closed_form(p: DirichletParams, spec: MomentSpec) -> MomentValue:
    """Closed-form central moment for the given index multiset.

    Second and third moments are exact; the pure fourth moment returns only
    its leading term ``3 eps^2 r^2 (1-r)^2`` with the asymptotic flag set
    (the omitted remainder is O(N^-3)).  The rational formulas are evaluated
    in exact arithmetic and rounded once on return: the third moment carries
    a ``1 - 2 r_i`` factor that float evaluation cannot resolve to full
    relative accuracy near symmetric parameters.
    """
    _check_indices(p, spec.indices)
    r, eps = _exact_mean_and_eps(p)
    if spec.order == 2:
        i, j = spec.indices
        same = 1 if i == j else 0
        value = eps * r[i - 1] * (same - r[j - 1]) / (1 + eps)
        return MomentValue(value=float(value))
    if spec.order == 3:
        i, j, ell = spec.indices
        ri, rj, rl = r[i - 1], r[j - 1], r[ell - 1]
        num = (4 * ri * rj * rl
               - 2 * ri * rl * (1 if i == j else 0)
               - 2 * rj * rl * (1 if i == ell else 0)
               - 2 * ri * rj * (1 if j == ell else 0)
               + 2 * ri * (1 if i == j == ell else 0))
        value = eps * eps * num / ((1 + eps) * (1 + 2 * eps))
        return MomentValue(value=float(value))
    i = spec.indices[0]
    value = 3 * (eps * r[i - 1] * (1 - r[i - 1])) ** 2
    return MomentValue(value=float(value), asymptotic=True)


def _raw_moment_exact(shapes: list[Fraction], counts: dict[int, int]) -> Fraction:
    """E[prod_i X_i^{k_i}] as a rising-factorial ratio, exactly.

    ``counts`` maps 0-based coordinate index to its power; total order is
    the sum of the powers.
    """
    total_shape = sum(shapes, Fraction(0))
    order = sum(counts.values())
    num = Fraction(1)
    for idx, k in counts.items():
        a = shapes[idx]
        for step in range(k):
            num *= a + step
    den = Fraction(1)
    for step in range(order):
        den *= total_shape + step
    return num / den


def central_moment_oracle(p: DirichletParams, indices: Sequence[int]) -> float:
    """Exact mixed central moment ``E[prod (X_i - r_i)]`` up to order four.

    Ground truth for the closed forms: expands the centered product over
    subsets, evaluates each raw moment as a rising-factorial ratio, and
    accumulates everything in exact rational arithmetic before one final
    float conversion.  Any index multiset up to size 4 is accepted.
    """
    indices = tuple(int(i) for i in indices)
    if not 1 <= len(indices) <= 4:
        raise UnsupportedSpecError(f"oracle supports orders 1..4, got {len(indices)}")
    _check_indices(p, indices)
    shapes = [Fraction(float(p.N)) * Fraction(float(a)) for a in p.alpha]
    shapes.append(Fraction(float(p.N)) * Fraction(float(p.beta)))
    total = sum(shapes, Fraction(0))
    means = [a / total for a in shapes]

    zero_based = [i - 1 for i in indices]
    k = len(zero_based)
    acc = Fraction(0)
    for mask in range(1 << k):
        counts: dict[int, int] = {}
        coeff = Fraction(1)
        for t in range(k):
            if mask >> t & 1:
                counts[zero_based[t]] = counts.get(zero_based[t], 0) + 1
            else:
                coeff *= -means[zero_based[t]]
        raw = _raw_moment_exact(shapes, counts) if counts else Fraction(1)
        acc += coeff * raw
    return float(acc)


@dataclass(frozen=True)
class RestrictedMomentReport:
    """Monte Carlo check of the event-restricted moment deviation bounds.

    For the event A (the eta=1/2 bulk region unless ``a_complement_prob``
    pins P(A^c) directly), compares per coordinate:

    * ``|E[(X_i - r_i) 1_A]|`` against ``sqrt(eps) * P(A^c)^(1/2)``,
    * ``|E[(X_i - r_i)^3 1_A] - m3_i|`` against ``eps^(3/2) * P(A^c)^(1/4)``,

    where ``m3_i`` is the closed-form third central moment.  ``holds`` is
    False when either inequality is violated by more than three Monte Carlo
    standard errors.
    """

    mean_dev: np.ndarray
    mean_dev_se: np.ndarray
    mean_bound: float
    third_dev: np.ndarray
    third_dev_se: np.ndarray
    third_bound: float
    a_complement_prob: float
    mc_samples: int
    holds: bool


def restricted_moment_check(p: DirichletParams, mc_samples: int, seed: int,
                            a_complement_prob: float | None = None
                            ) -> RestrictedMomentReport:
    """Empirically validate the restricted-moment inequalities on the bulk event.

    ``a_complement_prob=0`` makes A the whole space (both deviations are then
    exactly the unrestricted identities); otherwise A is the eta=1/2 bulk
    region and P(A^c) is estimated from the same sample.
    """
    if mc_samples < 10**4:
        raise InsufficientSamplesError(
            f"restricted_moment_check needs >= 1e4 samples, got {mc_samples}")
    xf = dirichlet_sample_matrix(p, mc_samples, RngStream(seed=seed, stream_id=0))
    r = p.mean_full()
    eps = p.eps_n
    delta = (xf - r) * np.sqrt(p.N * p.shape_sum + 1.0)
    if a_complement_prob is not None and a_complement_prob == 0.0:
        in_a = np.ones(mc_samples, dtype=bool)
        p_ac = 0.0
    else:
        in_a = np.all(np.abs(delta) <= 0.5 * p.N ** (1.0 / 6.0), axis=1)
        p_ac = float(1.0 - in_a.mean()) if a_complement_prob is None \
            else float(a_complement_prob)

    centered = (xf[:, :p.d] - r[:p.d]) * in_a[:, None]
    mean_est = centered.mean(axis=0)
    mean_se = centered.std(axis=0, ddof=1) / np.sqrt(mc_samples)
    cubed = (xf[:, :p.d] - r[:p.d]) ** 3 * in_a[:, None]
    m3 = np.array([
        central_moment_closed_form(p, MomentSpec((i, i, i))).value
        for i in range(1, p.d + 1)
    ])
    third_est = cubed.mean(axis=0) - m3
    third_se = cubed.std(axis=0, ddof=1) / np.sqrt(mc_samples)

    mean_bound = np.sqrt(eps) * np.sqrt(p_ac)
    third_bound = eps ** 1.5 * p_ac ** 0.25
    holds = bool(np.all(np.abs(mean_est) <= mean_bound + 3.0 * mean_se)
                 and np.all(np.abs(third_est) <= third_bound + 3.0 * third_se))
    return RestrictedMomentReport(
        mean_dev=np.abs(mean_est), mean_dev_se=mean_se, mean_bound=float(mean_bound),
        third_dev=np.abs(third_est), third_dev_se=third_se, third_bound=float(third_bound),
        a_complement_prob=p_ac, mc_samples=mc_samples, holds=holds)
