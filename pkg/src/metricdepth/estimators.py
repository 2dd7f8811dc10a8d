"""Location estimators: intrinsic mean, intrinsic median, and the
halfspace-depth median, plus the geodesic distance depth baseline.

The intrinsic (Frechet) mean minimizes the mean squared geodesic distance
to the sample and is fit by Riemannian gradient descent; the intrinsic
median minimizes the mean geodesic distance via a manifold Weiszfeld
iteration. Both start from the best sample point, use unit steps halved on
any objective increase, and stop when the applied update norm drops below
``tol``. The depth median chains anchor jiggling, the in-sample deepest
point, and stochastic refinement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .depth import (
    halfspace_prob_table,
    in_sample_deepest,
    jiggle_anchors,
    refine_deepest,
)
from .errors import GeometryError, MetricDepthError, NumericalError
from .rng import NS_REFINE, derive_rng
from .spaces import Space

WEISZFELD_GUARD = 1e-9
MAX_STEP_HALVINGS = 40


@dataclass(frozen=True)
class EstimatorResult:
    point: object
    objective: float
    iterations: int
    converged: bool
    extras: dict = field(default_factory=dict)


def _mean_objective(space, x, sample):
    return float(np.mean(space.distance_matrix([x], sample)))


def _descent(space, sample, tol, max_iter, objective, direction):
    """Shared loop for the mean and median: step along ``direction`` with
    halving on objective increase; ``converged`` means the last applied
    update was shorter than ``tol``."""
    sample = tuple(sample)
    if len(sample) == 0:
        raise GeometryError("sample must be non-empty")
    dist = space.distance_matrix(sample, sample)
    objs = objective(dist)
    x = sample[int(np.argmin(objs))]
    current = float(objs.min())
    last_update = np.inf
    iterations = 0
    for iterations in range(1, max_iter + 1):
        try:
            v = direction(x, dist=space.distance_matrix([x], sample)[0])
        except MetricDepthError as exc:
            raise NumericalError(
                f"{exc}; try an initial point deeper inside the data"
            ) from exc
        vnorm = space.tangent_norm(v)
        step = 1.0
        accepted = False
        for _ in range(MAX_STEP_HALVINGS):
            trial = space.exp(x, space.scale_tangent(v, step))
            trial_obj = float(objective(space.distance_matrix([trial], sample))[0])
            if trial_obj <= current:
                x, current = trial, trial_obj
                last_update = step * vnorm
                accepted = True
                break
            step *= 0.5
        if not accepted:
            last_update = step * vnorm
            break
        if last_update < tol:
            break
    return x, current, iterations, last_update < tol


def frechet_mean(space: Space, sample: Sequence, tol: float = 1e-8,
                 max_iter: int = 200) -> EstimatorResult:
    """Minimizer of the mean squared geodesic distance to the sample."""

    def objective(dist):
        return np.mean(np.asarray(dist) ** 2, axis=-1)

    def direction(x, dist):
        return space.mean_log(x, sample)

    sample = tuple(sample)
    x, obj, iters, converged = _descent(space, sample, tol, max_iter, objective, direction)
    grad_norm = space.tangent_norm(space.mean_log(x, sample))
    return EstimatorResult(point=x, objective=obj, iterations=iters,
                           converged=converged, extras={"grad_norm": grad_norm})


def frechet_median(space: Space, sample: Sequence, tol: float = 1e-8,
                   max_iter: int = 200) -> EstimatorResult:
    """Minimizer of the mean geodesic distance (manifold Weiszfeld)."""

    def objective(dist):
        return np.mean(np.asarray(dist), axis=-1)

    sample = tuple(sample)

    def direction(x, dist):
        weights = 1.0 / np.maximum(dist, WEISZFELD_GUARD)
        return space.mean_log(x, sample, weights=weights)

    x, obj, iters, converged = _descent(space, sample, tol, max_iter, objective, direction)
    return EstimatorResult(point=x, objective=obj, iterations=iters, converged=converged)


def geodesic_distance_depth(space: Space, sample: Sequence, y) -> float:
    """exp(-mean geodesic distance to the sample); in (0, 1], maximal where
    the intrinsic median sits."""
    sample = tuple(sample)
    if len(sample) == 0:
        raise GeometryError("sample must be non-empty")
    return float(np.exp(-_mean_objective(space, y, sample)))


def mhd_median(
    space: Space,
    sample: Sequence,
    jiggle_k: int = 10,
    radius_frac: float = 0.1,
    budget: int = 64,
    seed: int = 0,
) -> EstimatorResult:
    """Halfspace-depth median: jiggled anchors, in-sample deepest point,
    then local stochastic refinement. ``objective`` is the final
    approximate depth; extras carry the exact count and the contamination
    breakdown lower bound."""
    sample = tuple(sample)
    if len(sample) == 0:
        raise GeometryError("sample must be non-empty")
    effective_k = jiggle_k if len(sample) >= 2 else 0
    anchors = jiggle_anchors(space, sample, effective_k, radius_frac, seed)
    table = halfspace_prob_table(space, sample, anchors)
    start, _, start_idx = in_sample_deepest(space, sample, anchors, table=table)
    point, depth = refine_deepest(
        space, sample, anchors, start, budget,
        seed=derive_rng(seed, NS_REFINE).integers(2**32).item(),
        radius_frac=radius_frac, table=table,
    )
    return EstimatorResult(
        point=point,
        objective=float(depth),
        iterations=budget,
        converged=True,
        extras={
            "depth_num": depth.numerator * (table.n // depth.denominator),
            "depth_den": table.n,
            "start_index": start_idx,
            "breakdown_lower_bound": float(breakdown_lower_bound(depth)),
        },
    )


def breakdown_lower_bound(depth_at_median):
    """Contamination fraction certified not to carry the depth median away:
    D / (1 + D) for depth D at the median. Exact for Fraction input."""
    if isinstance(depth_at_median, Fraction):
        d = depth_at_median
    else:
        d = float(depth_at_median)
    if not 0 <= d <= 1:
        raise GeometryError("depth must lie in [0, 1]")
    return d / (1 + d)
