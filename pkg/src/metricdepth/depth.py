"""Anchored halfspace depth on a metric space.

The halfspace anchored at an ordered pair (x1, x2) is the set of points no
farther from x1 than from x2. The exact sample depth of a query y is the
least empirical mass over all halfspaces containing y; searching only
halfspaces anchored at a finite anchor set gives a computable upper bound
that tightens as anchors densify. With anchors equal to the n sample
points, evaluating m queries costs O(m n^2 + n^3) distance comparisons:
an n x n_A distance matrix feeds an n_A x n_A table of halfspace masses,
and each query takes a masked minimum over ordered anchor pairs.

Depth values are kept as exact integer counts over n; ties on the
equidistance boundary are counted on both sides (membership uses <=), so
counts[a1, a2] + counts[a2, a1] >= n always holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import GeometryError
from .rng import NS_JIGGLE, NS_REFINE, derive_rng
from .spaces import Space

# Cap on transient boolean/int temporaries in the vectorized kernels.
_CHUNK_ELEMS = 8_000_000


@dataclass(frozen=True)
class AnchorSet:
    """Ordered anchor points with provenance tags.

    Provenance entries are ``("sample", i)`` for sample points carried over
    verbatim and ``("jiggled", i)`` for perturbed copies of sample point i.
    """

    points: tuple
    provenance: tuple

    def __post_init__(self):
        if len(self.points) == 0:
            raise GeometryError("anchor set must be non-empty")
        if len(self.points) != len(self.provenance):
            raise GeometryError("anchor provenance length mismatch")

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class HalfspaceProbTable:
    """counts[a1, a2] = #{i : d(X_i, a1) <= d(X_i, a2)}.

    Diagonal entries equal n by construction; the query kernels lean on
    that as the empty-admissible-pair fallback (depth 1).
    """

    counts: np.ndarray
    n: int

    def prob(self, a1: int, a2: int) -> Fraction:
        return Fraction(int(self.counts[a1, a2]), self.n)


@dataclass(frozen=True)
class DepthReport:
    """Depth of one query: exact count over n plus the minimizing pair.

    Anchor indices are ``-1`` when no ordered pair is admissible (possible
    only for a single anchor; the empty infimum is 1 by convention).
    """

    query_index: int
    depth_num: int
    depth_den: int
    anchor1: int
    anchor2: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.depth_num, self.depth_den)

    @property
    def value(self) -> float:
        return self.depth_num / self.depth_den


def _as_points(anchors) -> tuple:
    return tuple(anchors.points) if isinstance(anchors, AnchorSet) else tuple(anchors)


def halfspace_membership(space: Space, y, x1, x2) -> bool:
    """Whether y lies in the halfspace anchored at (x1, x2); ties belong."""
    return space.distance(y, x1) <= space.distance(y, x2)


def _prob_counts(dist_sample_anchors: np.ndarray) -> np.ndarray:
    """Table of halfspace member counts from an (n, n_A) distance matrix."""
    n, n_anchors = dist_sample_anchors.shape
    counts = np.empty((n_anchors, n_anchors), dtype=np.int32)
    block = max(1, _CHUNK_ELEMS // max(n * n_anchors, 1))
    for lo in range(0, n_anchors, block):
        hi = min(lo + block, n_anchors)
        member = dist_sample_anchors[:, lo:hi, None] <= dist_sample_anchors[:, None, :]
        counts[lo:hi] = member.sum(axis=0, dtype=np.int32)
    return counts


def _min_count_values(counts: np.ndarray, dist_query_anchors: np.ndarray) -> np.ndarray:
    """Per-query minimum table count over admissible ordered anchor pairs.

    Diagonal pairs stay in: counts[a, a] = n, which never undercuts a real
    admissible pair and doubles as the empty-set convention (depth 1).
    """
    n_queries, n_anchors = dist_query_anchors.shape
    sentinel = np.int32(counts[0, 0] + 1)  # diagonal value is n
    best = np.empty(n_queries, dtype=np.int32)
    block = max(1, _CHUNK_ELEMS // max(n_anchors * n_anchors, 1))
    for lo in range(0, n_queries, block):
        hi = min(lo + block, n_queries)
        dq = dist_query_anchors[lo:hi]
        admissible = dq[:, :, None] <= dq[:, None, :]
        np.min(np.where(admissible, counts[None, :, :], sentinel),
               axis=(1, 2), out=best[lo:hi])
    return best


def _min_counts(counts: np.ndarray, n: int, dist_query_anchors: np.ndarray):
    """Like :func:`_min_count_values` but also reporting a minimizing pair.

    A pair (a1, a2) is admissible for query y when d(y, a1) <= d(y, a2) and
    a1 != a2. An empty admissible set yields count n (depth 1 by
    convention) and indices -1.
    """
    n_queries, n_anchors = dist_query_anchors.shape
    sentinel = np.int32(n + 1)
    best = np.empty(n_queries, dtype=np.int64)
    best_a1 = np.empty(n_queries, dtype=np.int64)
    best_a2 = np.empty(n_queries, dtype=np.int64)
    diag = np.eye(n_anchors, dtype=bool)
    block = max(1, _CHUNK_ELEMS // max(n_anchors * n_anchors, 1))
    for lo in range(0, n_queries, block):
        hi = min(lo + block, n_queries)
        dq = dist_query_anchors[lo:hi]
        admissible = dq[:, :, None] <= dq[:, None, :]
        admissible &= ~diag
        candidate = np.where(admissible, counts[None, :, :], sentinel)
        flat = candidate.reshape(hi - lo, -1)
        arg = flat.argmin(axis=1)
        best[lo:hi] = flat[np.arange(hi - lo), arg]
        best_a1[lo:hi], best_a2[lo:hi] = np.unravel_index(arg, (n_anchors, n_anchors))
    empty = best == n + 1
    best[empty] = n
    best_a1[empty] = -1
    best_a2[empty] = -1
    return best, best_a1, best_a2


def halfspace_prob_table(space: Space, sample: Sequence, anchors) -> HalfspaceProbTable:
    """Empirical mass of every anchored halfspace over the sample."""
    sample = tuple(sample)
    if len(sample) == 0:
        raise GeometryError("sample must be non-empty")
    anchor_points = _as_points(anchors)
    dist = space.distance_matrix(sample, anchor_points)
    return HalfspaceProbTable(counts=_prob_counts(dist), n=len(sample))


def approx_depth(
    space: Space,
    sample: Sequence,
    anchors,
    queries: Sequence,
    table: HalfspaceProbTable | None = None,
) -> list[DepthReport]:
    """Anchored halfspace depth of each query with respect to the sample.

    ``table`` may carry a precomputed :func:`halfspace_prob_table` for these
    (sample, anchors); passing it skips the O(n n_A^2) rebuild.
    """
    sample = tuple(sample)
    queries = tuple(queries)
    anchor_points = _as_points(anchors)
    if len(queries) == 0:
        return []
    if table is None:
        table = halfspace_prob_table(space, sample, anchor_points)
    dist_q = space.distance_matrix(queries, anchor_points)
    nums, a1, a2 = _min_counts(table.counts, table.n, dist_q)
    n = table.n
    return [
        DepthReport(query_index=j, depth_num=int(nums[j]), depth_den=n,
                    anchor1=int(a1[j]), anchor2=int(a2[j]))
        for j in range(len(queries))
    ]


def median_pairwise_distance(space: Space, sample: Sequence) -> float:
    pts = tuple(sample)
    if len(pts) < 2:
        raise GeometryError("need at least 2 points for a distance scale")
    dist = space.distance_matrix(pts, pts)
    iu = np.triu_indices(len(pts), 1)
    return float(np.median(dist[iu]))


def jiggle_anchors(
    space: Space,
    sample: Sequence,
    k: int,
    radius_frac: float = 0.1,
    seed: int = 0,
) -> AnchorSet:
    """Sample points plus k independently perturbed copies of each.

    Perturbations are isotropic Gaussian tangent steps with standard
    deviation ``radius_frac`` times the median pairwise distance, pushed
    through the exponential map. Each copy draws from its own
    (seed, point, copy) stream, so anchor sets for smaller k are prefixes
    (per point) of those for larger k.
    """
    sample = tuple(sample)
    if len(sample) == 0:
        raise GeometryError("sample must be non-empty")
    if k < 0:
        raise GeometryError("jiggle count must be >= 0")
    points = list(sample)
    provenance = [("sample", i) for i in range(len(sample))]
    if k > 0:
        if radius_frac > 0 and len(sample) < 2:
            raise GeometryError("jiggling needs >= 2 points to set a distance scale")
        sigma = 0.0 if radius_frac == 0 else radius_frac * median_pairwise_distance(space, sample)
        for i, x in enumerate(sample):
            for j in range(k):
                rng = derive_rng(seed, NS_JIGGLE, i, j)
                v = space.random_tangent(x, sigma**2, rng)
                points.append(space.exp(x, v))
                provenance.append(("jiggled", i))
    return AnchorSet(points=tuple(points), provenance=tuple(provenance))


def _distance_sums(space: Space, sample: Sequence, queries: Sequence) -> np.ndarray:
    return space.distance_matrix(queries, sample).sum(axis=1)


def in_sample_deepest(
    space: Space,
    sample: Sequence,
    anchors,
    table: HalfspaceProbTable | None = None,
):
    """Deepest sample point: argmax depth, ties by distance sum then index.

    Returns ``(point, depth: Fraction, index)``.
    """
    sample = tuple(sample)
    reports = approx_depth(space, sample, anchors, sample, table=table)
    nums = np.array([r.depth_num for r in reports])
    top = nums.max()
    tied = np.flatnonzero(nums == top)
    if len(tied) > 1:
        sums = _distance_sums(space, sample, [sample[i] for i in tied])
        tied = tied[np.lexsort((tied, sums))]
    idx = int(tied[0])
    return sample[idx], reports[idx].fraction, idx


def refine_deepest(
    space: Space,
    sample: Sequence,
    anchors,
    start,
    budget: int,
    seed: int = 0,
    radius_frac: float = 0.1,
    table: HalfspaceProbTable | None = None,
):
    """Stochastic local search for a deeper (possibly off-sample) point.

    Proposes exponential-map steps whose radius shrinks geometrically from
    the jiggle scale down to 1% of it across the budget. A proposal is
    accepted on a strictly larger depth count, or an equal count with a
    smaller sum of distances to the sample. Returns ``(point, Fraction)``;
    the depth never falls below the starting point's.
    """
    sample = tuple(sample)
    if budget < 0:
        raise GeometryError("budget must be >= 0")
    anchor_points = _as_points(anchors)
    if table is None:
        table = halfspace_prob_table(space, sample, anchor_points)

    def depth_of(point):
        dist = space.distance_matrix([point], anchor_points)
        return int(_min_count_values(table.counts, dist)[0])

    current = start
    current_num = depth_of(current)
    if budget == 0:
        return current, Fraction(current_num, table.n)
    current_sum = float(_distance_sums(space, sample, [current])[0])

    if len(sample) >= 2 and radius_frac > 0:
        scale = radius_frac * median_pairwise_distance(space, sample)
    else:
        scale = 0.0
    decay = 0.01 ** (1.0 / budget)
    radius = scale
    for step in range(budget):
        rng = derive_rng(seed, NS_REFINE, step)
        proposal = space.exp(current, space.random_tangent(current, radius**2, rng))
        num = depth_of(proposal)
        if num > current_num:
            current, current_num = proposal, num
            current_sum = float(_distance_sums(space, sample, [current])[0])
        elif num == current_num:
            prop_sum = float(_distance_sums(space, sample, [proposal])[0])
            if prop_sum < current_sum:
                current, current_sum = proposal, prop_sum
        radius *= decay
    return current, Fraction(current_num, table.n)
