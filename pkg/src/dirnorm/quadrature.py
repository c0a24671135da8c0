"""Midpoint-rule integration over intervals, boxes, and simplex slices.

Shared plumbing for the total-variation and normalization integrals: composite
midpoint cells, refined by doubling the per-axis resolution until the estimate
stabilizes, optionally with one Richardson extrapolation step (midpoint error
is O(h^2), so the extrapolated pair gains two orders).  Two-dimensional
domains are swept row by row so the simplex hypotenuse is honored exactly,
and rows are emitted in bounded chunks to keep memory flat.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .errors import EmptyRegionError

_CHUNK_NODES = 400_000


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    last_change: float
    levels: int
    converged: bool


def _interval_sum(f, lo: float, hi: float, n: int) -> float:
    if hi <= lo:
        return 0.0
    h = (hi - lo) / n
    total = 0.0
    for start in range(0, n, _CHUNK_NODES):
        stop = min(n, start + _CHUNK_NODES)
        x = lo + (np.arange(start, stop) + 0.5) * h
        total += float(np.sum(f(x[:, None]))) * h
    return total


def _row_chunks(box1, box2, n_rows: int, cap_to_simplex: bool
                ) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield (nodes (m,2), weights (m,)) midpoint cells covering the region

    ``{x1 in box1, x2 in [box2[0], min(box2[1], 1 - x1)]}`` when capped,
    else the plain rectangle.  Inner resolution targets square-ish cells.
    """
    lo1, hi1 = box1
    if hi1 <= lo1:
        return
    h1 = (hi1 - lo1) / n_rows
    x1 = lo1 + (np.arange(n_rows) + 0.5) * h1
    hi2 = np.minimum(box2[1], 1.0 - x1) if cap_to_simplex else np.full(n_rows, box2[1])
    lo2 = box2[0]
    lengths = hi2 - lo2
    rows = np.nonzero(lengths > 0.0)[0]
    counts = np.maximum(1, np.ceil(lengths[rows] / h1).astype(int))
    batch_rows, batch_nodes = [], 0
    for idx, m2 in zip(rows, counts):
        batch_rows.append((x1[idx], lo2, lengths[idx], m2))
        batch_nodes += m2
        if batch_nodes >= _CHUNK_NODES:
            yield _assemble_rows(batch_rows, h1)
            batch_rows, batch_nodes = [], 0
    if batch_rows:
        yield _assemble_rows(batch_rows, h1)


def _assemble_rows(batch, h1: float):
    total = sum(m2 for _, _, _, m2 in batch)
    nodes = np.empty((total, 2))
    weights = np.empty(total)
    pos = 0
    for x1, lo2, length, m2 in batch:
        h2 = length / m2
        sl = slice(pos, pos + m2)
        nodes[sl, 0] = x1
        nodes[sl, 1] = lo2 + (np.arange(m2) + 0.5) * h2
        weights[sl] = h1 * h2
        pos += m2
    return nodes, weights


def _region_sum(f, box1, box2, n_rows: int, cap_to_simplex: bool) -> float:
    total = 0.0
    empty = True
    for nodes, weights in _row_chunks(box1, box2, n_rows, cap_to_simplex):
        empty = False
        total += float(np.dot(f(nodes), weights))
    if empty:
        raise EmptyRegionError("integration region is empty")
    return total


def refine_to_tolerance(level_value: Callable[[int], float], tol: float,
                        n0: int = 64, max_doublings: int = 12,
                        richardson: bool = False) -> QuadratureResult:
    """Double the resolution until successive estimates change by < tol.

    ``level_value(n)`` evaluates the composite rule at per-axis resolution n.
    With ``richardson`` each doubling pair is extrapolated (midpoint error is
    O(h^2), so the pair combination cancels the leading term) and the change
    criterion applies to the extrapolated sequence.
    """
    n = n0
    raw_prev = level_value(n)
    est_prev = None
    change = np.inf
    for level in range(1, max_doublings + 1):
        n *= 2
        raw_cur = level_value(n)
        est_cur = raw_cur + (raw_cur - raw_prev) / 3.0 if richardson else raw_cur
        change = abs(est_cur - est_prev) if est_prev is not None \
            else abs(raw_cur - raw_prev)
        if change < tol:
            return QuadratureResult(value=est_cur, last_change=change,
                                    levels=level, converged=True)
        raw_prev, est_prev = raw_cur, est_cur
    return QuadratureResult(value=est_prev if est_prev is not None else raw_prev,
                            last_change=change, levels=max_doublings,
                            converged=False)


def integrate_interval(f, lo: float, hi: float, tol: float,
                       n0: int = 64, max_doublings: int = 16,
                       richardson: bool = False) -> QuadratureResult:
    """Adaptive composite midpoint integral of ``f`` over [lo, hi].

    ``f`` maps an (m, 1) node array to m values.
    """
    if hi <= lo:
        return QuadratureResult(value=0.0, last_change=0.0, levels=0, converged=True)
    return refine_to_tolerance(lambda n: _interval_sum(f, lo, hi, n), tol,
                               n0=n0, max_doublings=max_doublings,
                               richardson=richardson)


def integrate_region_2d(f, box1, box2, tol: float, cap_to_simplex: bool,
                        n0: int = 32, max_doublings: int = 8,
                        richardson: bool = False) -> QuadratureResult:
    """Adaptive row-swept midpoint integral over a rectangle or simplex slice.

    ``f`` maps an (m, 2) node array to m values.  When ``cap_to_simplex``
    the upper x2 limit of every row is ``min(box2[1], 1 - x1)``.
    """
    return refine_to_tolerance(
        lambda n: _region_sum(f, box1, box2, n, cap_to_simplex), tol,
        n0=n0, max_doublings=max_doublings, richardson=richardson)
