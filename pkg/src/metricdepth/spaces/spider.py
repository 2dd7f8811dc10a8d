"""The 3-spider: three half-lines glued at a common origin.

Points carry (radius, branch) coordinates with branch in {1, 2, 3}; all
points with radius 0 are the same origin (branch label canonicalized to 1).
Geodesics within a branch are line segments; between branches they pass
through the origin, so d(x, y) = |a1 - a2| on a shared branch and a1 + a2
otherwise. This is a geodesic space but not a manifold: the origin has no
linear neighborhood, so tangent steps carry an explicit branch to continue
on when a step crosses the origin.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import GeometryError, PointValidationError
from .base import Space, TangentVector

BRANCHES = (1, 2, 3)


@dataclass(frozen=True)
class SpiderPoint:
    radius: float
    branch: int


@dataclass(frozen=True)
class SpiderStep:
    """Signed move along the current branch.

    Negative movement beyond the origin continues onto ``cross_branch``.
    A step leaving the origin itself moves onto ``cross_branch`` regardless
    of sign.
    """

    delta: float
    cross_branch: int


def _alternate_branch(branch: int) -> int:
    return min(b for b in BRANCHES if b != branch)


@dataclass(frozen=True, repr=False)
class Spider3(Space):
    kind = "spider3"

    @property
    def intrinsic_dim(self) -> int:
        return 1

    @property
    def spec_string(self) -> str:
        return "spider3"

    def validate_point(self, raw):
        if isinstance(raw, SpiderPoint):
            radius, branch = raw.radius, raw.branch
        else:
            try:
                radius, branch = raw
            except (TypeError, ValueError) as exc:
                raise PointValidationError(
                    f"expected (radius, branch), got {raw!r}"
                ) from exc
        radius = float(radius)
        branch = int(branch)
        if not np.isfinite(radius) or radius < 0:
            raise PointValidationError(f"radius must be finite and >= 0, got {radius}")
        if branch not in BRANCHES:
            raise PointValidationError(f"branch must be one of {BRANCHES}, got {branch}")
        if radius == 0.0:
            branch = 1  # all zero-radius labels name the same origin
        return SpiderPoint(radius=radius, branch=branch)

    def _stack(self, points: Sequence) -> tuple[np.ndarray, np.ndarray]:
        radii = np.array([p.radius for p in points], dtype=float)
        branches = np.array([p.branch for p in points], dtype=np.int64)
        return radii, branches

    def distance_matrix(self, xs, ys):
        ra, ba = self._stack(xs)
        rb, bb = self._stack(ys)
        same = ba[:, None] == bb[None, :]
        return np.where(same, np.abs(ra[:, None] - rb[None, :]), ra[:, None] + rb[None, :])

    def distance(self, x, y) -> float:
        if x.branch == y.branch:
            return abs(x.radius - y.radius)
        return x.radius + y.radius

    def exp(self, x, v: TangentVector):
        step = v.coords
        if x.radius == 0.0:
            return self.validate_point((abs(step.delta), step.cross_branch))
        s = x.radius + step.delta
        if s >= 0.0:
            return self.validate_point((s, x.branch))
        return self.validate_point((-s, step.cross_branch))

    def log(self, x, y) -> TangentVector:
        if x.radius == 0.0:
            step = SpiderStep(delta=y.radius, cross_branch=y.branch)
        elif y.radius == 0.0 or x.branch == y.branch:
            step = SpiderStep(delta=y.radius - x.radius if x.branch == y.branch else -x.radius,
                              cross_branch=_alternate_branch(x.branch))
        else:
            step = SpiderStep(delta=-(x.radius + y.radius), cross_branch=y.branch)
        return TangentVector(base=x, coords=step)

    def tangent_coords(self, v: TangentVector) -> np.ndarray:
        return np.array([v.coords.delta])

    def tangent_from_coords(self, x, coords) -> TangentVector:
        delta = float(np.asarray(coords, dtype=float).reshape(1)[0])
        return TangentVector(base=x, coords=SpiderStep(delta, _alternate_branch(x.branch)))

    def tangent_norm(self, v: TangentVector) -> float:
        return abs(v.coords.delta)

    def scale_tangent(self, v: TangentVector, s: float) -> TangentVector:
        return TangentVector(
            base=v.base, coords=SpiderStep(s * v.coords.delta, v.coords.cross_branch)
        )

    def random_tangent(self, x, scatter, rng: np.random.Generator) -> TangentVector:
        scatter = np.asarray(scatter, dtype=float)
        if scatter.shape not in ((), (1,), (1, 1)):
            raise GeometryError(
                f"spider scatter must be a scalar variance, got shape {scatter.shape}"
            )
        var = float(scatter.reshape(-1)[0])
        if var < 0:
            raise GeometryError("scatter variance must be nonnegative")
        delta = float(np.sqrt(var) * rng.standard_normal())
        if x.radius == 0.0:
            cross = int(rng.choice(BRANCHES))
        else:
            others = [b for b in BRANCHES if b != x.branch]
            cross = int(others[rng.integers(2)])
        return TangentVector(base=x, coords=SpiderStep(delta, cross))

    def mean_log(self, x, points, weights=None):
        """Descent direction for intrinsic means/medians on the spider.

        On a branch this is the weighted mean of signed log steps; if the
        mean step crosses the origin (or the base is the origin), the
        continuation branch is the one with maximal weighted pull.
        """
        from .base import _normalized_weights

        w = _normalized_weights(weights, len(points))
        radii, branches = self._stack(points)
        pull = {b: float(np.sum(w[branches == b] * radii[branches == b])) for b in BRANCHES}
        if x.radius == 0.0:
            best = max(BRANCHES, key=lambda b: (pull[b], -b))
            rest = sum(pull.values()) - pull[best]
            delta = max(pull[best] - rest, 0.0)
            return TangentVector(base=x, coords=SpiderStep(delta, best))
        same = branches == x.branch
        deltas = np.where(same, radii - x.radius, -(x.radius + radii))
        others = [b for b in BRANCHES if b != x.branch]
        cross = max(others, key=lambda b: (pull[b], -b))
        return TangentVector(base=x, coords=SpiderStep(float(w @ deltas), cross))

    def encode_point(self, x) -> str:
        return f"{x.branch},{repr(float(x.radius))}"

    def decode_point(self, text: str):
        parts = text.split(",")
        if len(parts) != 2:
            raise PointValidationError(f"bad spider3 row (want 'branch,radius'): {text!r}")
        try:
            branch = int(parts[0])
            radius = float(parts[1])
        except ValueError as exc:
            raise PointValidationError(f"bad spider3 row: {text!r}") from exc
        return self.validate_point((radius, branch))
