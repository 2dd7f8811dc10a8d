"""Metric-space abstraction.

A :class:`Space` bundles a point format with the operations every other
module consumes: distance, exponential/logarithmic maps, geodesic
interpolation, point validation, tangent sampling, and CSV point encoding.
Concrete geometries live in sibling modules; all of them are immutable and
all operations are pure functions of their inputs (RNG state is passed in
explicitly).
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from ..errors import GeometryError

ANTIPODAL_TOL = 1e-9


@dataclass(frozen=True)
class TangentVector:
    """Tangent vector at ``base``.

    ``coords`` is the space's natural chart payload: a length-m vector in
    Euclidean space, an ambient vector orthogonal to the base point on a
    sphere, a symmetric matrix for SPD, a signed step for the spider, and a
    tuple of component tangents for products.
    """

    base: Any
    coords: Any


class Space(ABC):
    """Common interface of all supported geometries."""

    kind: str

    @property
    @abstractmethod
    def intrinsic_dim(self) -> int:
        """Dimension of the tangent chart at any point."""

    @property
    @abstractmethod
    def spec_string(self) -> str:
        """``kind:param`` form understood by :func:`metricdepth.spaces.parse_space`."""

    @abstractmethod
    def validate_point(self, raw) -> Any:
        """Normalize raw input into a point, or raise ``PointValidationError``."""

    @abstractmethod
    def distance_matrix(self, xs: Sequence, ys: Sequence) -> np.ndarray:
        """All pairwise distances, shape ``(len(xs), len(ys))``."""

    def distance(self, x, y) -> float:
        return float(self.distance_matrix([x], [y])[0, 0])

    @abstractmethod
    def exp(self, x, v: TangentVector):
        """Endpoint of the geodesic leaving ``x`` with initial vector ``v``."""

    @abstractmethod
    def log(self, x, y) -> TangentVector:
        """Initial vector of the geodesic from ``x`` to ``y`` (inverse of exp)."""

    def geodesic_point(self, x, y, t: float):
        """Point at fraction ``t`` along the geodesic from ``x`` to ``y``."""
        if not 0.0 <= t <= 1.0:
            raise GeometryError(f"geodesic parameter must lie in [0, 1], got {t}")
        return self.exp(x, self.scale_tangent(self.log(x, y), t))

    @abstractmethod
    def tangent_coords(self, v: TangentVector) -> np.ndarray:
        """Coordinates of ``v`` in a fixed orthonormal chart at its base."""

    @abstractmethod
    def tangent_from_coords(self, x, coords: np.ndarray) -> TangentVector:
        """Inverse of :meth:`tangent_coords` (deterministic conventions)."""

    def tangent_norm(self, v: TangentVector) -> float:
        """Riemannian norm; equals geodesic distance for ``v = log(x, y)``."""
        return float(np.linalg.norm(self.tangent_coords(v)))

    @abstractmethod
    def scale_tangent(self, v: TangentVector, s: float) -> TangentVector:
        pass

    def zero_tangent(self, x) -> TangentVector:
        return self.tangent_from_coords(x, np.zeros(self.intrinsic_dim))

    def random_tangent(self, x, scatter, rng: np.random.Generator) -> TangentVector:
        """Zero-mean Gaussian tangent vector in the orthonormal chart at ``x``.

        ``scatter`` is either an isotropic variance (scalar, may be 0) or a
        full covariance matrix over the chart coordinates.
        """
        z = gaussian_chart_sample(scatter, self.intrinsic_dim, rng)
        return self.tangent_from_coords(x, z)

    def mean_log(self, x, points: Sequence, weights=None) -> TangentVector:
        """Weighted mean of ``log(x, p)`` over ``points`` (weights normalized).

        This is the update direction of intrinsic gradient-descent and
        Weiszfeld iterations.
        """
        w = _normalized_weights(weights, len(points))
        acc = np.zeros(self.intrinsic_dim)
        for wi, p in zip(w, points):
            acc += wi * self.tangent_coords(self.log(x, p))
        return self.tangent_from_coords(x, acc)

    def points_equal(self, x, y, tol: float = 1e-12) -> bool:
        return self.distance(x, y) <= tol

    @abstractmethod
    def encode_point(self, x) -> str:
        """CSV row encoding of a point."""

    @abstractmethod
    def decode_point(self, text: str) -> Any:
        """Parse :meth:`encode_point` output back into a validated point."""

    def __repr__(self) -> str:  # pragma: no cover
        return f"{type(self).__name__}({self.spec_string!r})"


def gaussian_chart_sample(scatter, dim: int, rng: np.random.Generator) -> np.ndarray:
    """Draw N(0, scatter) in an orthonormal chart of the given dimension.

    Scalar scatter is a variance; matrix scatter is a covariance (symmetric
    positive semi-definite, factored through an eigendecomposition so a zero
    scatter degenerates cleanly to the zero vector).
    """
    scatter = np.asarray(scatter, dtype=float)
    if scatter.ndim == 0:
        var = float(scatter)
        if var < 0:
            raise GeometryError("scatter variance must be nonnegative")
        return np.sqrt(var) * rng.standard_normal(dim)
    if scatter.shape != (dim, dim):
        raise GeometryError(
            f"scatter covariance must be {dim}x{dim}, got {scatter.shape}"
        )
    sym = 0.5 * (scatter + scatter.T)
    eigval, eigvec = np.linalg.eigh(sym)
    if np.min(eigval) < -1e-10:
        raise GeometryError("scatter covariance must be positive semi-definite")
    root = eigvec * np.sqrt(np.clip(eigval, 0.0, None))
    return root @ rng.standard_normal(dim)


def _normalized_weights(weights, n: int) -> np.ndarray:
    if weights is None:
        return np.full(n, 1.0 / n)
    w = np.asarray(weights, dtype=float)
    if w.shape != (n,):
        raise GeometryError(f"expected {n} weights, got shape {w.shape}")
    total = w.sum()
    if total <= 0:
        raise GeometryError("weights must have positive total mass")
    return w / total


def readonly(arr: np.ndarray) -> np.ndarray:
    """Own and freeze an array; validated points are immutable by contract."""
    out = np.array(arr, dtype=float)
    out.flags.writeable = False
    return out
