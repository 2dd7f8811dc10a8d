"""Product of metric spaces with the l2 combination of component distances.

The l2 combination keeps products of geodesic spaces geodesic: a product
path is a geodesic exactly when every component is, run on a common time
scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import GeometryError, PointValidationError
from .base import Space, TangentVector


@dataclass(frozen=True, repr=False)
class Product(Space):
    components: tuple[Space, ...]
    kind = "product"

    def __post_init__(self):
        if len(self.components) < 2:
            raise GeometryError("product space needs at least 2 components")

    @property
    def intrinsic_dim(self) -> int:
        return sum(c.intrinsic_dim for c in self.components)

    @property
    def spec_string(self) -> str:
        return "product:" + "+".join(c.spec_string for c in self.components)

    def validate_point(self, raw):
        parts = tuple(raw)
        if len(parts) != len(self.components):
            raise PointValidationError(
                f"expected {len(self.components)} components, got {len(parts)}"
            )
        return tuple(c.validate_point(p) for c, p in zip(self.components, parts))

    def distance_matrix(self, xs, ys):
        total = None
        for idx, comp in enumerate(self.components):
            d = comp.distance_matrix([x[idx] for x in xs], [y[idx] for y in ys])
            total = d**2 if total is None else total + d**2
        return np.sqrt(total)

    def exp(self, x, v: TangentVector):
        return tuple(
            comp.exp(xc, vc) for comp, xc, vc in zip(self.components, x, v.coords)
        )

    def log(self, x, y) -> TangentVector:
        parts = tuple(
            comp.log(xc, yc) for comp, xc, yc in zip(self.components, x, y)
        )
        return TangentVector(base=x, coords=parts)

    def tangent_coords(self, v: TangentVector) -> np.ndarray:
        return np.concatenate(
            [comp.tangent_coords(vc) for comp, vc in zip(self.components, v.coords)]
        )

    def tangent_from_coords(self, x, coords) -> TangentVector:
        coords = np.asarray(coords, dtype=float).reshape(self.intrinsic_dim)
        parts = []
        offset = 0
        for comp, xc in zip(self.components, x):
            parts.append(comp.tangent_from_coords(xc, coords[offset:offset + comp.intrinsic_dim]))
            offset += comp.intrinsic_dim
        return TangentVector(base=x, coords=tuple(parts))

    def scale_tangent(self, v: TangentVector, s: float) -> TangentVector:
        parts = tuple(
            comp.scale_tangent(vc, s) for comp, vc in zip(self.components, v.coords)
        )
        return TangentVector(base=v.base, coords=parts)

    def random_tangent(self, x, scatter, rng: np.random.Generator) -> TangentVector:
        # Scatter: one scalar variance for all components, or one entry
        # (scalar or covariance) per component.
        if np.ndim(scatter) == 0:
            per_comp = [scatter] * len(self.components)
        else:
            per_comp = list(scatter)
            if len(per_comp) != len(self.components):
                raise GeometryError(
                    f"expected {len(self.components)} scatter entries, got {len(per_comp)}"
                )
        parts = tuple(
            comp.random_tangent(xc, sc, rng)
            for comp, xc, sc in zip(self.components, x, per_comp)
        )
        return TangentVector(base=x, coords=parts)

    def mean_log(self, x, points, weights=None):
        parts = tuple(
            comp.mean_log(xc, [p[idx] for p in points], weights)
            for idx, (comp, xc) in enumerate(zip(self.components, x))
        )
        return TangentVector(base=x, coords=parts)

    def encode_point(self, x) -> str:
        return "|".join(
            comp.encode_point(xc) for comp, xc in zip(self.components, x)
        )

    def decode_point(self, text: str):
        parts = text.split("|")
        if len(parts) != len(self.components):
            raise PointValidationError(
                f"expected {len(self.components)} '|'-separated components, got {len(parts)}"
            )
        return tuple(
            comp.decode_point(p) for comp, p in zip(self.components, parts)
        )
