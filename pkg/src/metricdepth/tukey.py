"""Exact classical Tukey (halfspace) depth in R^1 and R^2.

These brute-force routines are the independent reference the anchored
approximation is checked against: in R^1 the two must agree exactly at
sample points, and in R^2 the approximation can only overshoot. Counts use
closed halfplanes, so boundary points are included. Dimensions above 2 are
out of scope; exact enumeration does not extend cheaply.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def tukey_depth_1d(sample, x: float) -> Fraction:
    """min(#{X_i <= x}, #{X_i >= x}) / n."""
    xs = np.asarray(sample, dtype=float).reshape(-1)
    if xs.size == 0:
        raise ValueError("sample must be non-empty")
    below = int(np.count_nonzero(xs <= x))
    above = int(np.count_nonzero(xs >= x))
    return Fraction(min(below, above), xs.size)


def tukey_depth_2d(sample, point) -> Fraction:
    """Exact bivariate Tukey depth by enumerating critical directions.

    The minimizing closed halfplane can be taken with the query on its
    boundary; as the boundary rotates, the count changes only at directions
    perpendicular to some query-to-observation segment. Evaluating the count
    at those critical normals and at one direction inside every arc between
    them covers all attainable values. Cost is O(n^2) after an O(n log n)
    angular sort.
    """
    pts = np.asarray(sample, dtype=float).reshape(-1, 2)
    if pts.size == 0:
        raise ValueError("sample must be non-empty")
    x = np.asarray(point, dtype=float).reshape(2)
    n = pts.shape[0]

    diff = pts - x
    nonzero = np.any(diff != 0.0, axis=1)
    coincident = n - int(np.count_nonzero(nonzero))
    diff = diff[nonzero]
    if diff.shape[0] == 0:
        return Fraction(n, n)

    angles = np.arctan2(diff[:, 1], diff[:, 0])
    critical = np.concatenate([angles + np.pi / 2, angles - np.pi / 2]) % (2 * np.pi)
    critical = np.unique(critical)
    midpoints = (critical + np.diff(np.append(critical, critical[0] + 2 * np.pi)) / 2) % (
        2 * np.pi
    )
    normals = np.concatenate([critical, midpoints])

    # Halfplane with inward normal u contains X_i iff (X_i - x) . u <= 0.
    dots = diff @ np.stack([np.cos(normals), np.sin(normals)])
    counts = np.count_nonzero(dots <= 0.0, axis=0)
    return Fraction(coincident + int(counts.min()), n)
