"""Compiled inner loops for the per-stage hot path.

Each kernel has a plain-numpy counterpart elsewhere in the package that
the tests use as a reference.
"""

import math

import numba
import numpy as np

_INV_2PI = 1.0 / (2.0 * math.pi)
_INV_4PI = 1.0 / (4.0 * math.pi)


@numba.njit(cache=True)
def winding_numbers(vertices, points):
    """Integer winding number of the closed polygon around each point.

    Crossing rule with signed upward/downward edge crossings; equal to the
    signed subtended-angle sum divided by ``2 pi`` for points off the curve.
    """
    n = vertices.shape[0]
    m = points.shape[0]
    out = np.zeros(m, dtype=np.int64)
    for k in range(m):
        px = points[k, 0]
        py = points[k, 1]
        wn = 0
        ax = vertices[n - 1, 0]
        ay = vertices[n - 1, 1]
        for i in range(n):
            bx = vertices[i, 0]
            by = vertices[i, 1]
            if ay <= py:
                if by > py:
                    if (bx - ax) * (py - ay) - (px - ax) * (by - ay) > 0.0:
                        wn += 1
            elif by <= py:
                if (bx - ax) * (py - ay) - (px - ax) * (by - ay) < 0.0:
                    wn -= 1
            ax = bx
            ay = by
        out[k] = wn
    return out


@numba.njit(cache=True)
def thin_film_potential(targets, sources, weight, h, skip):
    """``-weight * sum_k (1/d - 1/sqrt(d^2 + h^2))`` for each target.

    Sources closer than ``skip`` to a target are left out.  Summation runs
    in source order, so results do not depend on how targets are batched.
    """
    m = targets.shape[0]
    ns = sources.shape[0]
    out = np.zeros(m)
    h2 = h * h
    if h2 == 0.0:
        return out
    for i in range(m):
        tx = targets[i, 0]
        ty = targets[i, 1]
        acc = 0.0
        for k in range(ns):
            dx = tx - sources[k, 0]
            dy = ty - sources[k, 1]
            d2 = dx * dx + dy * dy
            d = math.sqrt(d2)
            if d < skip:
                continue
            s = math.sqrt(d2 + h2)
            acc += h2 / (d * s * (d + s))
        out[i] = -weight * acc
    return out


@numba.njit(cache=True)
def collocation_matrices(x, normals, singular, dummy):
    """``E[i, j] = E_j(x_i)`` and ``Dn[i, j] = grad E_j(x_i) . normals_i``."""
    m = x.shape[0]
    n = singular.shape[0]
    e = np.empty((m, n))
    dn = np.empty((m, n))
    for i in range(m):
        xi = x[i, 0]
        yi = x[i, 1]
        nx = normals[i, 0]
        ny = normals[i, 1]
        for j in range(n):
            ax = xi - singular[j, 0]
            ay = yi - singular[j, 1]
            bx = xi - dummy[j, 0]
            by = yi - dummy[j, 1]
            ra = ax * ax + ay * ay
            rb = bx * bx + by * by
            e[i, j] = _INV_4PI * math.log(ra / rb)
            dn[i, j] = _INV_2PI * ((ax * nx + ay * ny) / ra - (bx * nx + by * ny) / rb)
    return e, dn
