"""Tangential velocities from the asymptotic uniform distribution method.

Edge lengths are driven towards ``L / N`` at exponential rate ``omega``:
``dr_i/dt = dL/dt / N + (L/N - r_i) omega``.  Combined with the kinematic
edge-length rate this gives a first-order recurrence for ``W_i cos_i``,
closed by the zero-mean condition ``sum_i W_i = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import FloatArray, GeometryCache


@dataclass(frozen=True)
class UdmState:
    omega: float
    L_dot: float = 0.0

    def __post_init__(self):
        if self.omega < 0:
            raise ValueError("omega must be non-negative")


def perimeter_rate(V, cache: GeometryCache) -> float:
    """``dL/dt = 2 sum_i V_i sin_i`` under the vertex evolution law."""
    return 2.0 * float(np.dot(V, cache.half_sin))


def relaxation_targets(V, cache: GeometryCache, omega: float, L_dot: float | None = None) -> FloatArray:
    """``psi_i`` for every edge (0-based, periodic).

    ``psi_i = -V_i sin_i - V_{i-1} sin_{i-1} + L_dot / N + (L/N - r_i) omega``
    """
    V = np.asarray(V, dtype=float)
    n = cache.n
    if L_dot is None:
        L_dot = perimeter_rate(V, cache)
    vs = V * cache.half_sin
    return -vs - np.roll(vs, 1) + L_dot / n + (cache.perimeter / n - cache.edge_length) * omega


def tangential_velocities(V, cache: GeometryCache, udm: UdmState | float) -> FloatArray:
    """Solve ``W_i cos_i - W_{i-1} cos_{i-1} = psi_i`` (i = 2..N) with ``sum W = 0``.

    Closed form: ``W_i = (Psi_i + W_1 cos_1) / cos_i`` where ``Psi`` are the
    prefix sums of ``psi`` from the second edge on, and
    ``W_1 = -sum_{i>=2} (Psi_i / cos_i) / (cos_1 sum_j 1/cos_j)``.
    """
    omega = udm.omega if isinstance(udm, UdmState) else float(udm)
    psi = relaxation_targets(V, cache, omega)
    c = cache.half_cos
    big_psi = np.zeros_like(psi)
    big_psi[1:] = np.cumsum(psi[1:])
    w1 = -np.sum(big_psi[1:] / c[1:]) / (c[0] * np.sum(1.0 / c))
    return (big_psi + w1 * c[0]) / c


def recurrence_residual(W, V, cache: GeometryCache, omega: float) -> float:
    """``max_{i>=2} |W_i cos_i - W_{i-1} cos_{i-1} - psi_i|``."""
    wc = np.asarray(W) * cache.half_cos
    psi = relaxation_targets(V, cache, omega)
    return float(np.max(np.abs(wc[1:] - wc[:-1] - psi[1:])))


def area_rate_error(W, v, cache: GeometryCache) -> float:
    """Discrete area-rate defect ``err_A``.

    ``sum_i (W_i sin_i - (v_{i+1} - v_i) / 2) (r_{i+1} - r_i) / 2``; zero for
    uniform edges.
    """
    v = np.asarray(v, dtype=float)
    r = cache.edge_length
    dv = np.roll(v, -1) - v
    dr = np.roll(r, -1) - r
    return float(np.sum((np.asarray(W) * cache.half_sin - 0.5 * dv) * 0.5 * dr))


def edge_length_rate(V, W, cache: GeometryCache) -> FloatArray:
    """``dr_i/dt = V_i sin_i + V_{i-1} sin_{i-1} + W_i cos_i - W_{i-1} cos_{i-1}``."""
    vs = np.asarray(V) * cache.half_sin
    wc = np.asarray(W) * cache.half_cos
    return vs + np.roll(vs, 1) + wc - np.roll(wc, 1)
