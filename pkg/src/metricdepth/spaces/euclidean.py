"""Flat Euclidean geometry on R^m."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial.distance import cdist

from ..errors import GeometryError, PointValidationError
from .base import Space, TangentVector, readonly


@dataclass(frozen=True, repr=False)
class Euclidean(Space):
    dim: int
    kind = "euclidean"

    def __post_init__(self):
        if self.dim < 1:
            raise GeometryError("euclidean dimension must be >= 1")

    @property
    def intrinsic_dim(self) -> int:
        return self.dim

    @property
    def spec_string(self) -> str:
        return f"euclidean:{self.dim}"

    def validate_point(self, raw):
        x = np.asarray(raw, dtype=float).reshape(-1)
        if x.shape != (self.dim,):
            raise PointValidationError(
                f"expected vector of length {self.dim}, got shape {np.shape(raw)}"
            )
        if not np.all(np.isfinite(x)):
            raise PointValidationError("point has non-finite entries")
        return readonly(x)

    def _stack(self, points: Sequence) -> np.ndarray:
        return np.asarray(points, dtype=float).reshape(len(points), self.dim)

    def distance_matrix(self, xs, ys):
        return cdist(self._stack(xs), self._stack(ys))

    def distance(self, x, y) -> float:
        return float(np.linalg.norm(np.asarray(x, float) - np.asarray(y, float)))

    def exp(self, x, v: TangentVector):
        return readonly(np.asarray(x, float) + v.coords)

    def log(self, x, y) -> TangentVector:
        return TangentVector(base=x, coords=np.asarray(y, float) - np.asarray(x, float))

    def geodesic_point(self, x, y, t: float):
        if not 0.0 <= t <= 1.0:
            raise GeometryError(f"geodesic parameter must lie in [0, 1], got {t}")
        x = np.asarray(x, float)
        return readonly(x + t * (np.asarray(y, float) - x))

    def tangent_coords(self, v: TangentVector) -> np.ndarray:
        return np.asarray(v.coords, dtype=float)

    def tangent_from_coords(self, x, coords) -> TangentVector:
        coords = np.asarray(coords, dtype=float).reshape(self.dim)
        return TangentVector(base=x, coords=coords)

    def scale_tangent(self, v: TangentVector, s: float) -> TangentVector:
        return TangentVector(base=v.base, coords=s * np.asarray(v.coords, float))

    def mean_log(self, x, points, weights=None):
        from .base import _normalized_weights

        w = _normalized_weights(weights, len(points))
        diff = self._stack(points) - np.asarray(x, float)
        return TangentVector(base=x, coords=w @ diff)

    def encode_point(self, x) -> str:
        return ",".join(repr(float(c)) for c in np.asarray(x, float))

    def decode_point(self, text: str):
        try:
            values = [float(tok) for tok in text.split(",")]
        except ValueError as exc:
            raise PointValidationError(f"bad euclidean row: {text!r}") from exc
        return self.validate_point(values)
