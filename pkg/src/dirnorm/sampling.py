"""Deterministic, seedable random generation for all Monte Carlo experiments.

Bit source: the Philox-4x64-10 counter-based generator, keyed by
``(seed, stream_id)``.  A stream is a value: materializing the same
``RngStream`` twice replays the identical sequence, so a fixed
``(seed, stream_id)`` pair names one reproducible draw regardless of
platform, scheduling, or worker count.  Experiments assign one stream per
replicate or batch and stay deterministic under any thread count.

On top of the uniform bit stream:

* standard normals use the Marsaglia polar method (pairwise rejection from
  the unit disk);
* gamma variates use the Marsaglia-Tsang squeeze/rejection method for
  shape >= 1, with the ``U^(1/shape)`` boost transform below shape 1;
* Dirichlet vectors are normalized gamma variates, one per shape component.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DirichletParams, SimplexPoint
from .errors import ParameterDomainError

DEFAULT_SEED = 0x5EED


@dataclass(frozen=True)
class RngStream:
    """A named position-independent random stream: (seed, stream_id).

    Identical pairs produce identical output sequences across platforms.
    Derive per-worker or per-replicate streams by varying ``stream_id``.
    """

    seed: int = DEFAULT_SEED
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        """Fresh Philox generator positioned at the start of this stream."""
        key = (int(self.seed) & (2**64 - 1), int(self.stream_id) & (2**64 - 1))
        return np.random.Generator(np.random.Philox(key=key))

    def child(self, stream_id: int) -> "RngStream":
        return RngStream(seed=self.seed, stream_id=stream_id)


def _polar_normals(gen: np.random.Generator, n: int) -> np.ndarray:
    """n standard normals by the Marsaglia polar method, in stream order."""
    chunks = []
    have = 0
    pending = (n + 1) // 2
    while have < n:
        u = gen.uniform(-1.0, 1.0, size=(pending, 2))
        s = np.sum(u * u, axis=1)
        ok = (s > 0.0) & (s < 1.0)
        us, ss = u[ok], s[ok]
        factor = np.sqrt(-2.0 * np.log(ss) / ss)
        z = (us * factor[:, None]).ravel()
        chunks.append(z)
        have += z.size
        pending = max(16, (n - have + 1) // 2)
    return np.concatenate(chunks)[:n]


def _gamma_mt_unit_shape_ge1(gen: np.random.Generator, shape: np.ndarray) -> np.ndarray:
    """Gamma(shape, 1) variates for shape >= 1 via Marsaglia-Tsang rejection."""
    n = shape.size
    d = shape - 1.0 / 3.0
    c = 1.0 / np.sqrt(9.0 * d)
    out = np.empty(n)
    todo = np.arange(n)
    while todo.size:
        x = _polar_normals(gen, todo.size)
        v = (1.0 + c[todo] * x) ** 3
        u = gen.uniform(size=todo.size)
        valid = v > 0.0
        squeeze = valid & (u < 1.0 - 0.0331 * x**4)
        with np.errstate(divide="ignore", invalid="ignore"):
            slow = valid & ~squeeze & (np.log(u) < 0.5 * x * x
                                       + d[todo] * (1.0 - v + np.log(v)))
        accept = squeeze | slow
        out[todo[accept]] = d[todo[accept]] * v[accept]
        todo = todo[~accept]
    return out


def _gamma_variates(gen: np.random.Generator, shape: np.ndarray) -> np.ndarray:
    """Gamma(shape, 1) for arbitrary positive shapes (boosted below 1)."""
    shape = np.asarray(shape, dtype=float)
    flat = shape.ravel()
    small = flat < 1.0
    lifted = np.where(small, flat + 1.0, flat)
    g = _gamma_mt_unit_shape_ge1(gen, lifted)
    if np.any(small):
        u = gen.uniform(size=int(small.sum()))
        g[small] *= u ** (1.0 / flat[small])
    return g.reshape(shape.shape)


def sample_standard_normal(dim: int, stream: RngStream) -> np.ndarray:
    """A vector of ``dim`` i.i.d. standard normals from the given stream."""
    if dim < 1:
        raise ParameterDomainError(f"dim must be >= 1, got {dim}")
    return _polar_normals(stream.generator(), dim)


def standard_normal_matrix(n: int, dim: int, stream: RngStream) -> np.ndarray:
    """(n, dim) matrix of i.i.d. standard normals from one stream."""
    if n < 1 or dim < 1:
        raise ParameterDomainError("n and dim must be >= 1")
    return _polar_normals(stream.generator(), n * dim).reshape(n, dim)


def sample_dirichlet(p: DirichletParams, stream: RngStream) -> SimplexPoint:
    """One Dirichlet(N*alpha, N*beta) draw: normalized gamma variates.

    A stream is a value, so the same ``(seed, stream_id)`` always yields
    the same point; use distinct stream ids (or the matrix variant) for
    repeated sampling.
    """
    xf = dirichlet_sample_matrix(p, 1, stream)[0]
    return SimplexPoint(x=xf[:p.d])


def dirichlet_sample_matrix(p: DirichletParams, n: int, stream: RngStream) -> np.ndarray:
    """(n, d+1) matrix of full-coordinate Dirichlet draws from one stream."""
    if n < 1:
        raise ParameterDomainError(f"n must be >= 1, got {n}")
    gen = stream.generator()
    shapes = np.broadcast_to(p.full_shapes(), (n, p.d + 1))
    g = _gamma_variates(gen, shapes)
    return g / g.sum(axis=1, keepdims=True)
