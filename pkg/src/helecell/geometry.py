"""Closed polygonal curves and their discrete differential geometry.

Vertices are stored 0-based as an ``(N, 2)`` array.  Edge ``k`` joins
``vertices[k - 1]`` to ``vertices[k]`` (periodic), so vertex ``k`` sits
between edge ``k`` and edge ``k + 1``.  Curves are anti-clockwise; the
outward normal of a tangent ``(a, b)`` is ``(b, -a)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ._kernels import winding_numbers
from .errors import CuspError, CurveInvariantError, DegenerateEdgeError

FloatArray = NDArray[np.float64]

EDGE_COLLAPSE_TOL = 1e-14
CUSP_TOL = 1e-8

# Points per chunk in the vectorised winding-number test (bounds memory).
_WINDING_CHUNK = 2048


def perp(v: FloatArray) -> FloatArray:
    """Rotate vectors by +pi/2: ``(a, b) -> (-b, a)``."""
    return np.stack((-v[..., 1], v[..., 0]), axis=-1)


def _signed_area(x: FloatArray) -> float:
    xn = np.roll(x, -1, axis=0)
    return 0.5 * float(np.sum(x[:, 0] * xn[:, 1] - xn[:, 0] * x[:, 1]))


@dataclass(frozen=True)
class PolygonalCurve:
    """Closed anti-clockwise polygon with ``N >= 3`` distinct consecutive vertices."""

    vertices: FloatArray

    def __post_init__(self):
        x = np.array(self.vertices, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != 2:
            raise CurveInvariantError("vertices must have shape (N, 2)")
        if x.shape[0] < 3:
            raise CurveInvariantError(f"need at least 3 vertices, got {x.shape[0]}")
        if not np.isfinite(x).all():
            raise CurveInvariantError("vertices contain non-finite values")
        r = np.hypot(*(x - np.roll(x, 1, axis=0)).T)
        if r.min() < EDGE_COLLAPSE_TOL:
            k = int(np.argmin(r))
            raise DegenerateEdgeError(f"edge {k} has length {r[k]:.3e}")
        if _signed_area(x) <= 0.0:
            raise CurveInvariantError("vertices must be ordered anti-clockwise")
        x.setflags(write=False)
        object.__setattr__(self, "vertices", x)

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    def translated(self, shift) -> "PolygonalCurve":
        return PolygonalCurve(self.vertices + np.asarray(shift, dtype=float))

    def rolled(self, shift: int) -> "PolygonalCurve":
        """Same polygon with vertex labels cyclically shifted."""
        return PolygonalCurve(np.roll(self.vertices, shift, axis=0))


@dataclass(frozen=True)
class GeometryCache:
    """Per-step derived geometry; arrays are indexed as in the module docstring."""

    vertices: FloatArray
    edge_length: FloatArray
    edge_tangent: FloatArray
    edge_normal: FloatArray
    midpoint: FloatArray
    vertex_tangent: FloatArray
    vertex_normal: FloatArray
    exterior_angle: FloatArray
    half_cos: FloatArray
    half_sin: FloatArray
    half_tan: FloatArray
    curvature: FloatArray
    perimeter: float
    area: float
    barycenter: FloatArray

    @property
    def n(self) -> int:
        return self.vertices.shape[0]


def build_geometry(curve: PolygonalCurve) -> GeometryCache:
    """Compute edge/vertex frames, half-angle data and discrete curvature.

    The exterior angle at vertex ``k`` is the signed angle from ``t_k`` to
    ``t_{k+1}``; the vertex tangent bisects the two edge tangents and the
    edge curvature is ``(tan_k + tan_{k-1}) / r_k``.

    Raises
    ------
    DegenerateEdgeError
        If an edge is shorter than 1e-14.
    CuspError
        If adjacent edges fold back (``|cos(phi/2)| < 1e-8``).
    """
    x = curve.vertices
    d = x - np.roll(x, 1, axis=0)
    r = np.hypot(d[:, 0], d[:, 1])
    if r.min() < EDGE_COLLAPSE_TOL:
        k = int(np.argmin(r))
        raise DegenerateEdgeError(f"edge {k} has length {r[k]:.3e}")
    t = d / r[:, None]
    n = -perp(t)

    t_next = np.roll(t, -1, axis=0)
    cross = t[:, 0] * t_next[:, 1] - t[:, 1] * t_next[:, 0]
    dot = t[:, 0] * t_next[:, 0] + t[:, 1] * t_next[:, 1]
    phi = np.arctan2(cross, dot)
    c = np.cos(0.5 * phi)
    if np.abs(c).min() < CUSP_TOL:
        k = int(np.argmin(np.abs(c)))
        raise CuspError(f"cusp at vertex {k} (exterior angle {phi[k]:.6f})")
    s = np.sin(0.5 * phi)
    tan = s / c

    big_t = (t + t_next) / (2.0 * c[:, None])
    big_n = -perp(big_t)
    kappa = (tan + np.roll(tan, 1)) / r

    mid = 0.5 * (x + np.roll(x, 1, axis=0))
    xn = np.roll(x, -1, axis=0)
    w = x[:, 0] * xn[:, 1] - xn[:, 0] * x[:, 1]
    a = 0.5 * float(w.sum())
    g = np.array([np.sum((x[:, 0] + xn[:, 0]) * w), np.sum((x[:, 1] + xn[:, 1]) * w)]) / (6.0 * a)

    return GeometryCache(
        vertices=x,
        edge_length=r,
        edge_tangent=t,
        edge_normal=n,
        midpoint=mid,
        vertex_tangent=big_t,
        vertex_normal=big_n,
        exterior_angle=phi,
        half_cos=c,
        half_sin=s,
        half_tan=tan,
        curvature=kappa,
        perimeter=float(r.sum()),
        area=a,
        barycenter=g,
    )


def area(curve: PolygonalCurve) -> float:
    return _signed_area(curve.vertices)


def perimeter(curve: PolygonalCurve) -> float:
    x = curve.vertices
    return float(np.hypot(*(x - np.roll(x, 1, axis=0)).T).sum())


def barycenter(curve: PolygonalCurve) -> FloatArray:
    """Area centroid of the polygon (not the vertex mean)."""
    x = curve.vertices
    xn = np.roll(x, -1, axis=0)
    w = x[:, 0] * xn[:, 1] - xn[:, 0] * x[:, 1]
    return np.array([np.sum((x[:, 0] + xn[:, 0]) * w), np.sum((x[:, 1] + xn[:, 1]) * w)]) / (3.0 * w.sum())


def winding_angles(vertices: FloatArray, points: FloatArray) -> FloatArray:
    """Sum of signed angles subtended by each polygon edge at each point.

    Returns ``2*pi * winding_number`` up to rounding, one value per point.
    """
    v = np.asarray(vertices, dtype=np.float64)
    p = np.atleast_2d(np.asarray(points, dtype=np.float64))
    v_prev = np.roll(v, 1, axis=0)
    out = np.empty(p.shape[0])
    for lo in range(0, p.shape[0], _WINDING_CHUNK):
        q = p[lo:lo + _WINDING_CHUNK]
        ax = v_prev[None, :, 0] - q[:, 0, None]
        ay = v_prev[None, :, 1] - q[:, 1, None]
        bx = v[None, :, 0] - q[:, 0, None]
        by = v[None, :, 1] - q[:, 1, None]
        out[lo:lo + _WINDING_CHUNK] = np.arctan2(ax * by - ay * bx, ax * bx + ay * by).sum(axis=1)
    return out


def winding_number(vertices: FloatArray, points: FloatArray) -> NDArray[np.int64]:
    """Integer winding number around each point (compiled crossing rule).

    Agrees with ``winding_angles / (2 pi)`` for every point off the curve.
    """
    v = np.ascontiguousarray(vertices, dtype=np.float64)
    p = np.ascontiguousarray(np.atleast_2d(points), dtype=np.float64)
    return winding_numbers(v, p)


def points_in_polygon(vertices: FloatArray, points: FloatArray) -> NDArray[np.bool_]:
    """Vectorised inside test: winding number equal to one."""
    return winding_number(vertices, points) == 1


def point_in_polygon(curve: PolygonalCurve, p) -> bool:
    """True iff the anti-clockwise curve winds once around ``p``.

    Sums the signed angles subtended by the edges (atan2 of cross and dot
    products) and tests ``|sum - 2 pi| < pi``.  ``p`` must not lie on the
    boundary; callers filter such points.
    """
    total = winding_angles(curve.vertices, np.asarray(p, dtype=float)[None, :])[0]
    return bool(abs(total - 2.0 * np.pi) < np.pi)


def curvature_sign_changes(curvature: FloatArray) -> int:
    """Number of cyclic sign alternations of the edge curvature (zeros skipped)."""
    s = np.sign(curvature)
    s = s[s != 0]
    if s.size < 2:
        return 0
    return int(np.count_nonzero(s != np.roll(s, 1)))


def regular_polygon(n: int, radius: float = 1.0, center=(0.0, 0.0), phase: float = 0.0) -> PolygonalCurve:
    """Regular anti-clockwise n-gon with vertices on a circle."""
    u = phase + 2.0 * np.pi * np.arange(1, n + 1) / n
    return PolygonalCurve(np.column_stack((center[0] + radius * np.cos(u), center[1] + radius * np.sin(u))))
