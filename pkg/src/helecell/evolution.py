"""Vertex evolution ``dX_i/dt = V_i N_i + W_i T_i`` with classical RK4.

One velocity evaluation runs the whole per-step pipeline: geometry,
(magnetic only) Monte Carlo potential, boundary data, MFS solve, edge and
vertex normal velocities, and UDM tangential velocities.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import magnetostatics as mc
from . import mfs, models, udm
from .errors import HeleCellError, SpecError
from .geometry import FloatArray, GeometryCache, PolygonalCurve, build_geometry

log = logging.getLogger(__name__)

_STAGES = ("geometry", "magnetostatics", "boundary data", "placement", "mfs solve", "velocity")


@dataclass(frozen=True)
class SimulationState:
    t: float
    curve: PolygonalCurve
    step_index: int = 0


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    L: float
    A: float
    V: float
    max_edge_dev: float
    constraint_residual: float
    M_in: int = 0


@dataclass(frozen=True)
class InitialCurveSpec:
    """``r(u) = R0 + sum_k a_k f_k(2 pi m_k u)`` sampled at ``u_i = i / N``.

    ``modes`` holds ``(kind, m, a)`` triples with ``kind`` in ``{"cos", "sin"}``.
    """

    R0: float = 1.0
    modes: tuple = ()
    N: int = 300

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple((str(k), int(m), float(a)) for k, m, a in self.modes))
        for kind, _, _ in self.modes:
            if kind not in ("cos", "sin"):
                raise SpecError(f"mode kind must be 'cos' or 'sin', got {kind!r}")
        if self.N < 3:
            raise SpecError("N must be at least 3")
        u = self.parameters()
        r = self.radius(u)
        if r.min() <= 0:
            i = int(np.argmin(r))
            raise SpecError(f"initial radius non-positive at u = {u[i]:.6g} (r = {r[i]:.3g})")

    def parameters(self) -> np.ndarray:
        """Sampling parameters ``u_i = i / N``, ``i = 1..N``."""
        return np.arange(1, self.N + 1) / self.N

    def radius(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        r = np.full_like(u, self.R0)
        for kind, m, a in self.modes:
            f = np.cos if kind == "cos" else np.sin
            r = r + a * f(2.0 * np.pi * m * u)
        return r


def _perturbed(amplitude, terms):
    return tuple((k, m, sign * amplitude) for k, m, sign in terms)


# r = R0 + 0.02 (cos 6 pi u + sin 14 pi u + cos 30 pi u + sin 50 pi u)
TDG_MODES = _perturbed(0.02, [("cos", 3, 1), ("sin", 7, 1), ("cos", 15, 1), ("sin", 25, 1)])
# r = R0 + 0.05 (cos 4 pi u - cos 10 pi u + cos 22 pi u - sin 6 pi u + sin 10 pi u)
MAGNETIC_CA50_MODES = _perturbed(
    0.05, [("cos", 2, 1), ("cos", 5, -1), ("cos", 11, 1), ("sin", 3, -1), ("sin", 5, 1)]
)


def build_initial_curve(spec: InitialCurveSpec) -> PolygonalCurve:
    u = spec.parameters()
    r = spec.radius(u)
    a = 2.0 * np.pi * u
    return PolygonalCurve(np.column_stack((r * np.cos(a), r * np.sin(a))))


@dataclass(frozen=True)
class VelocityField:
    V: FloatArray
    W: FloatArray
    v: FloatArray
    cache: GeometryCache
    solution: mfs.MfsSolution
    sampling: mc.McSampling | None = None

    def vertex_velocity(self) -> FloatArray:
        return self.V[:, None] * self.cache.vertex_normal + self.W[:, None] * self.cache.vertex_tangent


class PipelineError(HeleCellError):
    """Wraps a failure inside the velocity pipeline with its stage."""

    def __init__(self, stage: str, t: float, cause: Exception):
        super().__init__(f"{stage} failed at t={t:.6g}: {cause}")
        self.stage = stage
        self.t = t
        self.cause = cause


def velocity_field(state: SimulationState, params: models.ModelParams, gap: models.GapLaw,
                   seed: int | None = None) -> VelocityField:
    """Normal and tangential vertex velocities of ``state.curve`` at ``state.t``.

    ``seed`` fixes the Monte Carlo samples for magnetic runs; by default it
    is derived from ``params.seed`` and ``state.step_index``.
    """
    t = state.t
    stage = _STAGES[0]
    try:
        cache = build_geometry(state.curve)
        sampling = None
        if params.model_kind == "magnetic":
            stage = _STAGES[1]
            if seed is None:
                seed = mc.step_seed(params.seed, state.step_index)
            sampling = mc.draw_samples(cache, params.M, seed)
            phi = mc.potential_on_boundary(cache, sampling, models.magnetic_kernel_gap(params, t, gap))
            stage = _STAGES[2]
            g = models.magnetic_boundary_data(cache, params, t, phi, gap)
        else:
            stage = _STAGES[2]
            g = models.tdg_boundary_data(cache, params, t, gap)
        stage = _STAGES[3]
        points = mfs.place_points(cache, params.r_a)
        stage = _STAGES[4]
        sol = mfs.solve_dirichlet(cache, points, g)
        stage = _STAGES[5]
        if params.model_kind == "magnetic":
            v = models.magnetic_normal_velocity(sol, cache, params, t, gap)
        else:
            v = models.tdg_normal_velocity(sol, cache, params, t, gap)
        V = models.vertex_normal_velocity(v, cache)
        W = udm.tangential_velocities(V, cache, params.omega)
    except PipelineError:
        raise
    except HeleCellError as exc:
        raise PipelineError(stage, t, exc) from exc
    if not (np.isfinite(V).all() and np.isfinite(W).all()):
        raise PipelineError(stage, t, FloatingPointError("non-finite velocity"))
    return VelocityField(V, W, v, cache, sol, sampling)


def rk4_step(state: SimulationState, params: models.ModelParams, gap: models.GapLaw,
             dt: float | None = None, observer=None) -> SimulationState:
    """Advance one classical RK4 step.

    All four stages share the Monte Carlo seed of ``state.step_index``.
    ``observer`` (if given) is called with each stage's :class:`VelocityField`.
    """
    dt = params.dt if dt is None else dt
    if not dt > 0:
        raise ValueError("dt must be positive")
    seed = mc.step_seed(params.seed, state.step_index) if params.model_kind == "magnetic" else None
    x0 = state.curve.vertices
    t0 = state.t

    def stage(x, t):
        f = velocity_field(SimulationState(t, PolygonalCurve(x), state.step_index), params, gap, seed)
        if observer is not None:
            observer(f)
        return f.vertex_velocity()

    k1 = stage(x0, t0)
    k2 = stage(x0 + 0.5 * dt * k1, t0 + 0.5 * dt)
    k3 = stage(x0 + 0.5 * dt * k2, t0 + 0.5 * dt)
    k4 = stage(x0 + dt * k3, t0 + dt)
    x1 = x0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return SimulationState(t0 + dt, PolygonalCurve(x1), state.step_index + 1)


def diagnostics(state: SimulationState, gap: models.GapLaw, constraint_residual: float = 0.0,
                M_in: int = 0) -> DiagnosticsRecord:
    cache = build_geometry(state.curve)
    mean = cache.perimeter / cache.n
    return DiagnosticsRecord(
        t=state.t,
        L=cache.perimeter,
        A=cache.area,
        V=cache.area * gap.h(state.t),
        max_edge_dev=float(np.max(np.abs(cache.edge_length - mean)) / mean),
        constraint_residual=constraint_residual,
        M_in=M_in,
    )


@dataclass
class RunStats:
    """Worst-case per-stage invariants observed during a run."""

    steps: int = 0
    max_constraint_residual: float = 0.0
    max_udm_residual: float = 0.0
    max_udm_sum: float = 0.0
    max_abs_udm_sum: float = 0.0
    perimeter_increases: int = 0

    def observe(self, f: VelocityField, omega: float):
        self.max_constraint_residual = max(self.max_constraint_residual, f.solution.constraint_residual)
        self.max_udm_residual = max(self.max_udm_residual, udm.recurrence_residual(f.W, f.V, f.cache, omega))
        total = abs(float(f.W.sum()))
        scale = f.cache.n * max(float(np.max(np.abs(f.W))), 1e-300)
        self.max_udm_sum = max(self.max_udm_sum, total / scale)
        self.max_abs_udm_sum = max(self.max_abs_udm_sum, total)


@dataclass
class RunResult:
    snapshots: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    stats: RunStats = field(default_factory=RunStats)
    reason: str | None = None

    @property
    def completed(self) -> bool:
        return self.reason is None

    @property
    def final(self) -> SimulationState:
        return self.snapshots[-1]


def run(curve: PolygonalCurve, params: models.ModelParams, gap: models.GapLaw | None = None,
        snapshot_interval: float | None = None, track_stats: bool = True,
        callback=None) -> RunResult:
    """Integrate from ``t = 0`` to ``params.t_end``.

    Snapshots (and one diagnostics record each) are taken at ``t = 0``,
    every ``snapshot_interval`` and at the final time.  A pipeline failure
    stops the run; the output gathered so far is kept and ``reason`` set.
    """
    gap = gap or params.gap_law()
    dt = params.dt
    n_steps = int(math.ceil(params.t_end / dt - 1e-9)) if params.t_end > 0 else 0
    every = n_steps if not snapshot_interval else max(1, int(round(snapshot_interval / dt)))
    result = RunResult()
    stats = result.stats
    last = {"res": 0.0, "M_in": 0}

    def observer(f: VelocityField):
        if track_stats:
            stats.observe(f, params.omega)
        last["res"] = max(last["res"], f.solution.constraint_residual)
        if f.sampling is not None:
            last["M_in"] = f.sampling.M_in

    def record(s: SimulationState):
        result.snapshots.append(s)
        result.diagnostics.append(diagnostics(s, gap, last["res"], last["M_in"]))
        last["res"] = 0.0
        if callback is not None:
            callback(s, result.diagnostics[-1])

    state = SimulationState(0.0, curve, 0)
    record(state)
    prev_L = result.diagnostics[-1].L
    for k in range(n_steps):
        t_next = params.t_end if k == n_steps - 1 else (k + 1) * dt
        try:
            new = rk4_step(state, params, gap, dt=t_next - state.t, observer=observer)
        except HeleCellError as exc:
            result.reason = f"step {k}: {exc}"
            log.error("run aborted: %s", result.reason)
            if result.snapshots[-1] is not state:
                record(state)
            break
        state = SimulationState(t_next, new.curve, k + 1)
        stats.steps += 1
        if params.model_kind == "constant_gap":
            L = float(np.hypot(*np.diff(np.vstack((state.curve.vertices, state.curve.vertices[:1])), axis=0).T).sum())
            if L > prev_L * (1.0 + 1e-8):
                stats.perimeter_increases += 1
                log.warning("perimeter increased at t=%.6g: %.12g -> %.12g", state.t, prev_L, L)
            prev_L = L
        if (k + 1) % every == 0 or k == n_steps - 1:
            record(state)
    return result
