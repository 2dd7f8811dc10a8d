import numpy as np
import pytest

from metricdepth.spaces import SPD, Euclidean, Product, Sphere, Spider3


def random_points(space, n, rng):
    """Generic point cloud generator used across tests."""
    if isinstance(space, Euclidean):
        return [space.validate_point(rng.standard_normal(space.dim)) for _ in range(n)]
    if isinstance(space, Sphere):
        raw = rng.standard_normal((n, space.ambient_dim))
        return [space.validate_point(row / np.linalg.norm(row)) for row in raw]
    if isinstance(space, SPD):
        base = space.validate_point(np.eye(space.size))
        return [
            space.exp(base, space.random_tangent(base, 0.5, rng)) for _ in range(n)
        ]
    if isinstance(space, Spider3):
        return [
            space.validate_point((abs(rng.standard_normal()), rng.integers(1, 4)))
            for _ in range(n)
        ]
    if isinstance(space, Product):
        per_comp = [random_points(c, n, rng) for c in space.components]
        return [tuple(comp[i] for comp in per_comp) for i in range(n)]
    raise NotImplementedError(type(space))


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
