"""Monte Carlo estimate of the thin-film magnetostatic potential.

``phi(x) = -int_Omega (1/|x-p| - 1/sqrt(|x-p|^2 + h^2)) dp`` is estimated
from samples drawn area-uniformly in the disk centred at the barycenter
that just contains every vertex.  Samples inside the polygon share the
weight ``dS = A / M_in``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import thin_film_potential
from .errors import EmptyInteriorError
from .geometry import FloatArray, GeometryCache, points_in_polygon

SKIP_RADIUS = 1e-12


def step_seed(master_seed: int, step_index: int) -> int:
    """Deterministic per-step seed derived from the run seed."""
    ss = np.random.SeedSequence([int(master_seed), int(step_index)])
    return int(ss.generate_state(2, dtype=np.uint64)[0])


@dataclass(frozen=True)
class McSampling:
    center: FloatArray
    radius: float
    samples: FloatArray
    inside_mask: np.ndarray
    area: float

    @property
    def M(self) -> int:
        return self.samples.shape[0]

    @property
    def M_in(self) -> int:
        return int(np.count_nonzero(self.inside_mask))

    @property
    def dS(self) -> float:
        return self.area / self.M_in

    @property
    def interior(self) -> FloatArray:
        return self.samples[self.inside_mask]

    @classmethod
    def from_points(cls, cache: GeometryCache, samples) -> "McSampling":
        """Classify given sample points against the polygon of ``cache``."""
        samples = np.atleast_2d(np.asarray(samples, dtype=float))
        g = cache.barycenter
        rmax = float(np.max(np.hypot(*(cache.vertices - g).T)))
        mask = points_in_polygon(cache.vertices, samples)
        if not mask.any():
            raise EmptyInteriorError(f"none of the {samples.shape[0]} samples fell inside the polygon")
        return cls(g.copy(), rmax, samples, mask, cache.area)


def unit_disk_samples(M: int, seed: int) -> FloatArray:
    """``M`` area-uniform points in the unit disk (radius ``sqrt(u)``)."""
    rng = np.random.default_rng(seed)
    u = rng.random(M)
    theta = 2.0 * np.pi * rng.random(M)
    rho = np.sqrt(u)
    return np.column_stack((rho * np.cos(theta), rho * np.sin(theta)))


def draw_samples(cache: GeometryCache, M: int, seed: int) -> McSampling:
    """Draw ``M`` samples in the bounding disk and classify them.

    Raises
    ------
    EmptyInteriorError
        If no sample lands inside the polygon.
    """
    if M < 1:
        raise ValueError("M must be at least 1")
    g = cache.barycenter
    rmax = float(np.max(np.hypot(*(cache.vertices - g).T)))
    pts = g + rmax * unit_disk_samples(M, seed)
    mask = points_in_polygon(cache.vertices, pts)
    if not mask.any():
        raise EmptyInteriorError(f"none of the {M} samples fell inside the polygon")
    return McSampling(g.copy(), rmax, pts, mask, cache.area)


def kernel(d, h: float) -> np.ndarray:
    """``1/d - 1/sqrt(d^2 + h^2)``, evaluated stably as ``h^2 / (d s (d + s))``."""
    d = np.asarray(d, dtype=float)
    s = np.sqrt(d * d + h * h)
    return h * h / (d * s * (d + s))


def _potential_many(x: FloatArray, sampling: McSampling, h: float) -> FloatArray:
    x = np.ascontiguousarray(x, dtype=np.float64)
    return thin_film_potential(x, np.ascontiguousarray(sampling.interior), sampling.dS, float(h), SKIP_RADIUS)


def potential_at(x, sampling: McSampling, h: float) -> float:
    """Estimate of ``phi(x)``; samples within 1e-12 of ``x`` are skipped."""
    x = np.asarray(x, dtype=float).reshape(1, 2)
    return float(_potential_many(x, sampling, h)[0])


def potential_on_boundary(cache: GeometryCache, sampling: McSampling, h: float) -> FloatArray:
    """``phi`` at every edge midpoint (the collocation points)."""
    return _potential_many(cache.midpoint, sampling, h)


def potential_standard_error(x, sampling: McSampling, h: float) -> float:
    """Sampling standard error of :func:`potential_at` at fixed classification."""
    x = np.asarray(x, dtype=float)
    d = np.hypot(*(sampling.interior - x).T)
    d = d[d >= SKIP_RADIUS]
    k = kernel(d, h)
    return float(sampling.area * k.std(ddof=1) / np.sqrt(k.size))
