"""Numerics for the multivariate-normal approximation of the Dirichlet density.

Submodules: ``core`` (domain types and standardization), ``special``
(log-gamma), ``densities`` (log-space density evaluation), ``expansion``
(correction terms and sup-error diagnostics), ``moments`` (closed forms and
the exact oracle), ``distance`` (total variation and concentration),
``sampling`` (seedable gamma/normal/Dirichlet generation), ``kde``
(Dirichlet-kernel estimation), ``cli`` (experiment runner).
"""

from .core import (DeltaVector, DirichletParams, MatchedGaussian, SimplexPoint,
                   delta_of, make_matched_gaussian, sigma_inv_quadform)
from .densities import (LogDensityValue, dirichlet_log_pdf, log_ratio,
                        matched_normal_log_pdf)
from .distance import (TvEstimate, bulk_escape_bound, bulk_escape_frequency,
                       fit_tv_slope, tv_bound_scale, tv_monte_carlo,
                       tv_quadrature, tv_rate_sweep)
from .errors import (BoundaryError, DimensionError, DirnormError,
                     EmptyRegionError, InsufficientSamplesError,
                     ParameterDomainError, UnsupportedSpecError)
from .expansion import (BulkRegion, ExpansionErrors, correction_t1,
                        correction_t2, default_n_grid, error_sup,
                        expansion_prediction, exponent_sweep)
from .kde import (KdeConfig, KdeVarianceReport, kde_evaluate, variance_experiment,
                  variance_theory)
from .moments import (MomentSpec, MomentValue, RestrictedMomentReport,
                      central_moment_closed_form, central_moment_oracle,
                      restricted_moment_check)
from .sampling import (DEFAULT_SEED, RngStream, dirichlet_sample_matrix,
                       sample_dirichlet, sample_standard_normal,
                       standard_normal_matrix)
from .special import ln_gamma, stirling_ln_gamma, stirling_tail

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
