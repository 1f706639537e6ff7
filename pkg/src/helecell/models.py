"""Boundary data and normal-velocity laws of the two Hele-Shaw models.

``tdg`` is the time-dependent-gap problem (``constant_gap`` is the same
law with a frozen gap).  ``magnetic`` is the dimensionless magnetic-fluid
model whose gap grows as ``h*(t) = exp(t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .geometry import FloatArray, GeometryCache
from .mfs import MfsSolution

MODEL_KINDS = ("constant_gap", "tdg", "magnetic")

_PI_23 = math.pi ** (2.0 / 3.0)


@dataclass(frozen=True)
class GapLaw:
    """Exponential gap ``h(t) = h0 * exp(rate * t)``; ``rate = 0`` freezes it."""

    h0: float = 1.0
    rate: float = 1.0

    def __post_init__(self):
        if not self.h0 > 0:
            raise ValidationError("gap h0 must be positive")

    def h(self, t: float) -> float:
        return self.h0 * math.exp(self.rate * t)

    def hdot(self, t: float) -> float:
        return self.rate * self.h(t)

    @classmethod
    def constant(cls, h0: float = 1.0) -> "GapLaw":
        return cls(h0=h0, rate=0.0)


@dataclass(frozen=True)
class ModelParams:
    model_kind: str = "tdg"
    sigma: float = 2e-4
    bmv: float = 0.0
    ca: float | None = None
    h_r: float = 0.25
    omega: float = 100.0
    r_a: float = 1.0
    M: int = 1000
    seed: int = 0
    dt: float = 1e-5
    t_end: float = 1.0

    def __post_init__(self):
        if self.model_kind not in MODEL_KINDS:
            raise ValidationError(f"model must be one of {MODEL_KINDS}, got {self.model_kind!r}")
        if self.model_kind == "magnetic":
            if self.ca is None:
                raise ValidationError("Ca required")
            if not self.ca > 0:
                raise ValidationError("Ca must be positive")
        if not self.h_r > 0:
            raise ValidationError("h_r must be positive")
        if not self.dt > 0:
            raise ValidationError("dt must be positive")
        if self.M < 1:
            raise ValidationError("M must be at least 1")
        if self.omega < 0:
            raise ValidationError("omega must be non-negative")
        if not self.r_a > 0:
            raise ValidationError("r_a must be positive")
        if self.t_end < 0:
            raise ValidationError("t_end must be non-negative")

    def gap_law(self) -> GapLaw:
        """Default gap law of the model kind."""
        if self.model_kind == "constant_gap":
            return GapLaw.constant()
        return GapLaw()


def tdg_boundary_data(cache: GeometryCache, params: ModelParams, t: float, gap: GapLaw) -> FloatArray:
    """``g_i = sigma kappa_i - hdot / (4 h^3) |X*_i|^2``."""
    h = gap.h(t)
    mid = cache.midpoint
    rho2 = mid[:, 0] ** 2 + mid[:, 1] ** 2
    return params.sigma * cache.curvature - gap.hdot(t) / (4.0 * h ** 3) * rho2


def tdg_normal_velocity(sol: MfsSolution, cache: GeometryCache, params: ModelParams, t: float, gap: GapLaw) -> FloatArray:
    """``v_i = -h^2 grad P(X*_i).n_i - hdot / (2h) X*_i.n_i``."""
    h = gap.h(t)
    xn = np.einsum("ij,ij->i", cache.midpoint, cache.edge_normal)
    return -h * h * _normal_derivative(sol, cache) - gap.hdot(t) / (2.0 * h) * xn


def magnetic_boundary_data(cache: GeometryCache, params: ModelParams, t: float, phi, gap: GapLaw | None = None) -> FloatArray:
    """``g_i = kappa_i - Bmv pi^(2/3) / h* phi_i - pi Ca |X*_i|^2 / (4 h_r^2 h*^2)``."""
    hs = (gap or GapLaw()).h(t)
    mid = cache.midpoint
    rho2 = mid[:, 0] ** 2 + mid[:, 1] ** 2
    phi = np.asarray(phi, dtype=float)
    return (
        cache.curvature
        - params.bmv * _PI_23 / hs * phi
        - math.pi * params.ca * rho2 / (4.0 * params.h_r ** 2 * hs ** 2)
    )


def magnetic_normal_velocity(sol: MfsSolution, cache: GeometryCache, params: ModelParams, t: float, gap: GapLaw | None = None) -> FloatArray:
    """``v_i = -h_r^2 h*^2 / (pi Ca) grad P.n_i - hdot* / (2 h*) X*_i.n_i``."""
    gap = gap or GapLaw()
    hs = gap.h(t)
    coef = params.h_r ** 2 * hs ** 2 / (math.pi * params.ca)
    xn = np.einsum("ij,ij->i", cache.midpoint, cache.edge_normal)
    return -coef * _normal_derivative(sol, cache) - gap.hdot(t) / (2.0 * hs) * xn


def magnetic_kernel_gap(params: ModelParams, t: float, gap: GapLaw | None = None) -> float:
    """Gap in units of the initial radius, ``h_r * h*(t)``, used by the potential kernel."""
    return params.h_r * (gap or GapLaw()).h(t)


def vertex_normal_velocity(v, cache: GeometryCache) -> FloatArray:
    """``V_i = (v_i + v_{i+1}) / (2 cos_i)``."""
    v = np.asarray(v, dtype=float)
    return (v + np.roll(v, -1)) / (2.0 * cache.half_cos)


def _normal_derivative(sol: MfsSolution, cache: GeometryCache) -> FloatArray:
    if sol.normal_derivative is not None and sol.normal_derivative.shape[0] == cache.n:
        return sol.normal_derivative
    return np.einsum("ij,ij->i", sol.gradient(cache.midpoint), cache.edge_normal)
