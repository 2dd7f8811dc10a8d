"""Symmetric positive-definite k x k matrices with the affine-invariant metric.

d(P, Q) = || logm(P^{-1/2} Q P^{-1/2}) ||_F, which is invariant under
congruence P -> A P A^T for any invertible A. All matrix functions go
through symmetric eigendecompositions (inputs are symmetrized first) for
numerical stability.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import GeometryError, NumericalError, PointValidationError
from .base import Space, TangentVector, readonly

SYMMETRY_TOL = 1e-6
# Eigenvalues of congruence-whitened products are clipped here before log;
# values this small only arise from rounding of nearly singular inputs.
EIG_FLOOR = 1e-300


def _sym(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + np.swapaxes(a, -1, -2))


def _sym_apply(p: np.ndarray, fn) -> np.ndarray:
    """Apply ``fn`` to the eigenvalues of a symmetric matrix."""
    eigval, eigvec = np.linalg.eigh(_sym(p))
    return (eigvec * fn(eigval)) @ eigvec.T


def _eigvalsh_batch(mats: np.ndarray) -> np.ndarray:
    """Eigenvalues of a batch of symmetric matrices, closed form for k = 2."""
    k = mats.shape[-1]
    if k == 2:
        a = mats[..., 0, 0]
        b = 0.5 * (mats[..., 0, 1] + mats[..., 1, 0])
        c = mats[..., 1, 1]
        mid = 0.5 * (a + c)
        rad = np.sqrt(np.maximum(0.25 * (a - c) ** 2 + b**2, 0.0))
        return np.stack([mid - rad, mid + rad], axis=-1)
    return np.linalg.eigvalsh(_sym(mats))


@dataclass(frozen=True, repr=False)
class SPD(Space):
    size: int  # matrix side k
    kind = "spd"

    def __post_init__(self):
        if self.size < 1:
            raise GeometryError("spd matrix size must be >= 1")

    @property
    def intrinsic_dim(self) -> int:
        return self.size * (self.size + 1) // 2

    @property
    def spec_string(self) -> str:
        return f"spd:{self.size}"

    def validate_point(self, raw):
        k = self.size
        p = np.asarray(raw, dtype=float)
        if p.shape == (k * k,):
            p = p.reshape(k, k)
        if p.shape != (k, k):
            raise PointValidationError(
                f"expected {k}x{k} matrix (or flat length {k * k}), got shape "
                f"{np.shape(raw)}"
            )
        if not np.all(np.isfinite(p)):
            raise PointValidationError("matrix has non-finite entries")
        asym = np.max(np.abs(p - p.T))
        if asym > SYMMETRY_TOL:
            raise PointValidationError(f"matrix asymmetry {asym:.3g} exceeds "
                                       f"{SYMMETRY_TOL:g}")
        p = _sym(p)
        try:
            smallest = float(np.linalg.eigvalsh(p)[0])
        except np.linalg.LinAlgError as exc:  # pragma: no cover
            raise NumericalError("eigendecomposition failed") from exc
        if smallest <= 0.0:
            raise PointValidationError(
                f"matrix is not positive definite (min eigenvalue {smallest:.3g})"
            )
        return readonly(p)

    def _stack(self, points: Sequence) -> np.ndarray:
        return np.asarray(points, dtype=float).reshape(len(points), self.size, self.size)

    def _inv_sqrt_stack(self, mats: np.ndarray) -> np.ndarray:
        eigval, eigvec = np.linalg.eigh(_sym(mats))
        if np.min(eigval) <= 0.0:
            raise GeometryError("matrix is not positive definite")
        inv_root = eigvec * (eigval ** -0.5)[..., None, :]
        return inv_root @ np.swapaxes(eigvec, -1, -2)

    def distance_matrix(self, xs, ys):
        left = self._stack(xs)
        right = self._stack(ys)
        s = self._inv_sqrt_stack(left)  # (na, k, k)
        # Whitened products s_a @ q_b @ s_a for every pair, chunked over rows
        # to bound the (chunk, nb, k, k) temporaries.
        na, nb = len(left), len(right)
        out = np.empty((na, nb))
        chunk = max(1, int(4e6 // max(nb * self.size * self.size, 1)))
        for lo in range(0, na, chunk):
            hi = min(lo + chunk, na)
            mid = np.einsum("aij,bjk->abik", s[lo:hi], right, optimize=True)
            whitened = np.einsum("abik,akl->abil", mid, s[lo:hi], optimize=True)
            eig = _eigvalsh_batch(whitened)
            logs = np.log(np.maximum(eig, EIG_FLOOR))
            out[lo:hi] = np.sqrt(np.sum(logs**2, axis=-1))
        return out

    def sqrt_and_inv_sqrt(self, p):
        eigval, eigvec = np.linalg.eigh(_sym(np.asarray(p, float)))
        if eigval[0] <= 0.0:
            raise GeometryError("matrix is not positive definite")
        root = (eigvec * np.sqrt(eigval)) @ eigvec.T
        inv_root = (eigvec * (1.0 / np.sqrt(eigval))) @ eigvec.T
        return root, inv_root

    def exp(self, x, v: TangentVector):
        root, inv_root = self.sqrt_and_inv_sqrt(x)
        inner = _sym(inv_root @ np.asarray(v.coords, float) @ inv_root)
        return readonly(root @ _sym_apply(inner, np.exp) @ root)

    def log(self, x, y) -> TangentVector:
        root, inv_root = self.sqrt_and_inv_sqrt(x)
        inner = _sym(inv_root @ np.asarray(y, float) @ inv_root)
        eigval, eigvec = np.linalg.eigh(inner)
        if eigval[0] <= 0.0:
            raise GeometryError("log target is not positive definite")
        logm = (eigvec * np.log(eigval)) @ eigvec.T
        return TangentVector(base=x, coords=_sym(root @ logm @ root))

    def geodesic_point(self, x, y, t: float):
        if not 0.0 <= t <= 1.0:
            raise GeometryError(f"geodesic parameter must lie in [0, 1], got {t}")
        root, inv_root = self.sqrt_and_inv_sqrt(x)
        inner = _sym(inv_root @ np.asarray(y, float) @ inv_root)
        powered = _sym_apply(inner, lambda lam: np.power(lam, t))
        return readonly(root @ powered @ root)

    def _chart_to_sym(self, coords: np.ndarray) -> np.ndarray:
        """Orthonormal chart coords -> symmetric matrix (Frobenius-orthonormal
        basis: diagonal units and (E_ij + E_ji)/sqrt(2))."""
        k = self.size
        s = np.zeros((k, k))
        s[np.diag_indices(k)] = coords[:k]
        iu = np.triu_indices(k, 1)
        s[iu] = coords[k:] / np.sqrt(2.0)
        s[(iu[1], iu[0])] = s[iu]
        return s

    def _sym_to_chart(self, s: np.ndarray) -> np.ndarray:
        k = self.size
        iu = np.triu_indices(k, 1)
        return np.concatenate([np.diagonal(s), np.sqrt(2.0) * s[iu]])

    def tangent_coords(self, v: TangentVector) -> np.ndarray:
        _, inv_root = self.sqrt_and_inv_sqrt(v.base)
        return self._sym_to_chart(_sym(inv_root @ np.asarray(v.coords, float) @ inv_root))

    def tangent_from_coords(self, x, coords) -> TangentVector:
        coords = np.asarray(coords, dtype=float).reshape(self.intrinsic_dim)
        root, _ = self.sqrt_and_inv_sqrt(x)
        return TangentVector(base=x, coords=_sym(root @ self._chart_to_sym(coords) @ root))

    def scale_tangent(self, v: TangentVector, s: float) -> TangentVector:
        return TangentVector(base=v.base, coords=s * np.asarray(v.coords, float))

    def mean_log(self, x, points, weights=None):
        from .base import _normalized_weights

        w = _normalized_weights(weights, len(points))
        root, inv_root = self.sqrt_and_inv_sqrt(x)
        whitened = _sym(np.einsum("ij,njk,kl->nil", inv_root, self._stack(points), inv_root))
        eigval, eigvec = np.linalg.eigh(whitened)
        if np.min(eigval) <= 0.0:
            raise GeometryError("log target is not positive definite")
        logs = (eigvec * np.log(eigval)[..., None, :]) @ np.swapaxes(eigvec, -1, -2)
        mean_inner = np.einsum("n,nij->ij", w, logs)
        return TangentVector(base=x, coords=_sym(root @ mean_inner @ root))

    def encode_point(self, x) -> str:
        return ",".join(repr(float(c)) for c in np.asarray(x, float).reshape(-1))

    def decode_point(self, text: str):
        try:
            values = [float(tok) for tok in text.split(",")]
        except ValueError as exc:
            raise PointValidationError(f"bad spd row: {text!r}") from exc
        return self.validate_point(values)
