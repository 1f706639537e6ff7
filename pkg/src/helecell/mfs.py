"""Method of fundamental solutions for the Dirichlet-Laplace problem.

The potential is represented as ``P(x) = Q0 + sum_j Q_j E_j(x)`` with
``E_j(x) = E(x - y_j) - E(x - z_j)`` and ``E(x) = log|x| / (2 pi)``.
Singular points ``y_j`` follow the modified Amano placement off the edge
midpoints; dummy points ``z_j`` sit on a circle of radius 1000.  The
coefficients solve N midpoint collocation equations plus one zero-flux
row ``sum_j Q_j H_j = 0`` that makes the discrete area rate exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import EvaluationAtSingularityError, PlacementError
from ._kernels import collocation_matrices
from .geometry import FloatArray, GeometryCache, perp, winding_number

DUMMY_RADIUS = 1000.0
SINGULARITY_TOL = 1e-13
CHORD_TOL = 1e-14

_INV_2PI = 1.0 / (2.0 * np.pi)
_INV_4PI = 1.0 / (4.0 * np.pi)


def fundamental_solution(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return _INV_4PI * np.log(np.sum(x * x, axis=-1))


def fundamental_gradient(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return _INV_2PI * x / np.sum(x * x, axis=-1)[..., None]


@dataclass(frozen=True)
class MfsPointSets:
    singular: FloatArray
    dummy: FloatArray

    @property
    def n(self) -> int:
        return self.singular.shape[0]


def place_singular_points(cache: GeometryCache, r_a: float, check: bool = True) -> FloatArray:
    """Modified Amano placement.

    ``y_j = X*_j + (r_a / 2) |X*_{j+1} - X*_{j-1}| n^a_j`` where ``n^a_j`` is
    the outward normal of the chord joining the neighbouring midpoints.
    With ``check`` every point is verified to lie outside the polygon.
    """
    if r_a <= 0:
        raise ValueError("r_a must be positive")
    mid = cache.midpoint
    chord = np.roll(mid, -1, axis=0) - np.roll(mid, 1, axis=0)
    length = np.hypot(chord[:, 0], chord[:, 1])
    if length.min() <= CHORD_TOL:
        j = int(np.argmin(length))
        raise PlacementError(f"degenerate midpoint chord at index {j}", index=j)
    normal = -perp(chord) / length[:, None]
    y = mid + (0.5 * r_a * length)[:, None] * normal
    if check:
        bad = winding_number(cache.vertices, y) != 0
        if bad.any():
            j = int(np.flatnonzero(bad)[0])
            raise PlacementError(f"singular point {j} lies inside the polygon", index=j)
    return y


def place_dummy_points(n: int) -> FloatArray:
    """``z_i = 1000 (cos a_i, sin a_i)`` with ``a_i = 2 pi i / n``, ``i = 1..n``."""
    if n < 3:
        raise ValueError("need n >= 3")
    a = 2.0 * np.pi * np.arange(1, n + 1) / n
    return DUMMY_RADIUS * np.column_stack((np.cos(a), np.sin(a)))


def place_points(cache: GeometryCache, r_a: float) -> MfsPointSets:
    return MfsPointSets(place_singular_points(cache, r_a), place_dummy_points(cache.n))


def _basis(x: FloatArray, points: MfsPointSets):
    """Values and gradients of every ``E_j`` at every row of ``x``.

    Returns ``(E, Gx, Gy)`` each shaped ``(len(x), N)``.
    """
    dyx = x[:, None, 0] - points.singular[None, :, 0]
    dyy = x[:, None, 1] - points.singular[None, :, 1]
    dzx = x[:, None, 0] - points.dummy[None, :, 0]
    dzy = x[:, None, 1] - points.dummy[None, :, 1]
    ry = dyx * dyx + dyy * dyy
    rz = dzx * dzx + dzy * dzy
    e = _INV_4PI * np.log(ry / rz)
    iy = _INV_2PI / ry
    iz = _INV_2PI / rz
    gx = dyx * iy - dzx * iz
    gy = dyy * iy - dzy * iz
    return e, gx, gy


def _check_distance(x: FloatArray, points: MfsPointSets):
    for name, src in (("singular", points.singular), ("dummy", points.dummy)):
        d = np.hypot(x[:, None, 0] - src[None, :, 0], x[:, None, 1] - src[None, :, 1])
        if d.min() < SINGULARITY_TOL:
            i, j = np.unravel_index(np.argmin(d), d.shape)
            raise EvaluationAtSingularityError(f"point {i} coincides with {name} point {j}")


def flux_weights(cache: GeometryCache, points: MfsPointSets) -> FloatArray:
    """``H_j = sum_i grad E_j(X*_i) . n_i r_i`` (midpoint rule for the outward flux)."""
    _, dn = collocation_matrices(cache.midpoint, cache.edge_normal, points.singular, points.dummy)
    return cache.edge_length @ dn


@dataclass(frozen=True)
class MfsSolution:
    q0: float
    charges: FloatArray
    points: MfsPointSets
    flux_weights: FloatArray
    # grad P(X*_i) . n_i at the collocation points used in the solve
    normal_derivative: FloatArray | None = field(default=None, repr=False)

    @property
    def constraint_residual(self) -> float:
        """``|sum Q_j H_j| / sum |Q_j H_j|`` (zero when all charges vanish)."""
        qh = self.charges * self.flux_weights
        scale = np.abs(qh).sum()
        return float(abs(qh.sum()) / scale) if scale > 0 else 0.0

    def potential(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        pts = np.atleast_2d(x)
        _check_distance(pts, self.points)
        e, _, _ = _basis(pts, self.points)
        val = self.q0 + e @ self.charges
        return val[0] if x.ndim == 1 else val

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        pts = np.atleast_2d(x)
        _check_distance(pts, self.points)
        _, gx, gy = _basis(pts, self.points)
        val = np.column_stack((gx @ self.charges, gy @ self.charges))
        return val[0] if x.ndim == 1 else val


def solve_dirichlet(cache: GeometryCache, points: MfsPointSets, boundary_values) -> MfsSolution:
    """Collocate ``P(X*_i) = g_i`` at the midpoints under the zero-flux constraint.

    Solves the square ``(N+1) x (N+1)`` system in ``(Q0, Q_1..Q_N)``.
    """
    g = np.asarray(boundary_values, dtype=float)
    n = cache.n
    if g.shape != (n,):
        raise ValueError(f"expected {n} boundary values, got shape {g.shape}")
    e, dn = collocation_matrices(cache.midpoint, cache.edge_normal, points.singular, points.dummy)
    h = cache.edge_length @ dn

    a = np.empty((n + 1, n + 1))
    a[:n, 0] = 1.0
    a[:n, 1:] = e
    a[n, 0] = 0.0
    a[n, 1:] = h
    rhs = np.append(g, 0.0)
    q = linalg.solve(linalg.lu_factor(a), rhs)
    charges = q[1:]
    return MfsSolution(float(q[0]), charges, points, h, normal_derivative=dn @ charges)


def evaluate_potential(sol: MfsSolution, x) -> np.ndarray:
    return sol.potential(x)


def evaluate_gradient(sol: MfsSolution, x) -> np.ndarray:
    return sol.gradient(x)
