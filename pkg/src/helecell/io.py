"""Run configuration, snapshot/diagnostics CSV files and SVG rendering."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ParseError, SpecError, ValidationError
from .evolution import DiagnosticsRecord, InitialCurveSpec, SimulationState
from .geometry import PolygonalCurve
from .models import MODEL_KINDS, ModelParams

SNAPSHOT_HEADER = "index,x,y"
DIAGNOSTICS_HEADER = "t,L,A,V,max_edge_dev,constraint_residual,M_in"
PRESETS = (
    "tdg_table1",
    "magnetic_bmv0_ca100",
    "magnetic_bmv25_ca100",
    "magnetic_bmv0_ca50",
    "magnetic_bmv35_ca50",
)

# JSON key -> RunConfig field
_ALIASES = {
    "model": "model_kind",
    "model_kind": "model_kind",
    "N": "N",
    "sigma": "sigma",
    "Bmv": "bmv",
    "Ca": "ca",
    "h_r": "h_r",
    "omega": "omega",
    "r_a": "r_a",
    "M": "M",
    "seed": "master_seed",
    "master_seed": "master_seed",
    "dt": "dt",
    "t_end": "t_end",
    "snapshot_interval": "snapshot_interval",
    "initial_curve": "initial_curve",
    "output_dir": "output_dir",
    "emit_svg": "emit_svg",
}


@dataclass
class RunConfig:
    model_kind: str = "tdg"
    N: int = 300
    sigma: float = 2e-4
    bmv: float = 0.0
    ca: float | None = None
    h_r: float = 0.25
    omega: float = 100.0
    r_a: float = 1.0
    M: int = 1000
    master_seed: int = 0
    dt: float | None = None
    t_end: float = 1.0
    snapshot_interval: float | None = None
    initial_curve: dict = field(default_factory=dict)
    output_dir: str | None = None
    emit_svg: bool = False

    def __post_init__(self):
        if self.dt is None:
            self.dt = 1.0 / (10 * self.N ** 2)
        self.validate()

    def validate(self):
        if self.model_kind not in MODEL_KINDS:
            raise ValidationError(f"model must be one of {MODEL_KINDS}, got {self.model_kind!r}")
        if not isinstance(self.N, int) or isinstance(self.N, bool) or self.N < 3:
            raise ValidationError("N must be an integer >= 3")
        if self.snapshot_interval is not None and not self.snapshot_interval > 0:
            raise ValidationError("snapshot_interval must be positive")
        self.model_params()
        self.curve_spec()

    def model_params(self) -> ModelParams:
        return ModelParams(
            model_kind=self.model_kind,
            sigma=self.sigma,
            bmv=self.bmv,
            ca=self.ca,
            h_r=self.h_r,
            omega=self.omega,
            r_a=self.r_a,
            M=self.M,
            seed=self.master_seed,
            dt=self.dt,
            t_end=self.t_end,
        )

    def curve_spec(self) -> InitialCurveSpec:
        ic = dict(self.initial_curve)
        unknown = set(ic) - {"R0", "modes"}
        if unknown:
            raise ValidationError(f"unknown initial_curve keys: {sorted(unknown)}")
        try:
            return InitialCurveSpec(R0=float(ic.get("R0", 1.0)), modes=tuple(ic.get("modes", ())), N=self.N)
        except (TypeError, ValueError, SpecError) as exc:
            raise ValidationError(f"initial_curve: {exc}") from exc

    def to_json(self) -> dict:
        out = {}
        inverse = {"model_kind": "model", "bmv": "Bmv", "ca": "Ca", "master_seed": "seed"}
        for f in fields(self):
            out[inverse.get(f.name, f.name)] = getattr(self, f.name)
        return out


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ParseError("configuration must be a JSON object")
    kwargs = {}
    for key, value in data.items():
        if key not in _ALIASES:
            raise ValidationError(f"unknown configuration key {key!r}")
        kwargs[_ALIASES[key]] = value
    for name in ("sigma", "bmv", "ca", "h_r", "omega", "r_a", "dt", "t_end", "snapshot_interval"):
        if kwargs.get(name) is not None:
            try:
                kwargs[name] = float(kwargs[name])
            except (TypeError, ValueError):
                raise ValidationError(f"{name} must be a number") from None
    for name in ("M", "master_seed"):
        if name in kwargs and not isinstance(kwargs[name], int):
            raise ValidationError(f"{name} must be an integer")
    try:
        return RunConfig(**kwargs)
    except ValidationError:
        raise
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def parse_config(path) -> RunConfig:
    """Read a JSON run configuration and apply defaults (``dt = 1/(10 N^2)``)."""
    path = Path(path)
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return config_from_dict(data)


def load_preset(name: str) -> RunConfig:
    return config_from_dict(json.loads(preset_text(name)))


def preset_text(name: str) -> str:
    if name not in PRESETS:
        raise ValidationError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
    return resources.files("helecell").joinpath("presets", f"{name}.json").read_text()


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_snapshot(state: SimulationState, path) -> None:
    x = state.curve.vertices
    lines = [SNAPSHOT_HEADER]
    lines += [f"{i},{_fmt(px)},{_fmt(py)}" for i, (px, py) in enumerate(x, start=1)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_snapshot(path) -> PolygonalCurve:
    rows = Path(path).read_text().splitlines()
    if not rows or rows[0].strip() != SNAPSHOT_HEADER:
        raise ParseError(f"{path}:1: expected header {SNAPSHOT_HEADER!r}")
    pts = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row.strip():
            continue
        try:
            _, x, y = row.split(",")
            pts.append((float(x), float(y)))
        except ValueError:
            raise ParseError(f"{path}:{lineno}: malformed row {row!r}") from None
    return PolygonalCurve(np.array(pts))


def write_diagnostics(records, path) -> None:
    lines = [DIAGNOSTICS_HEADER]
    for r in records:
        lines.append(",".join((
            _fmt(r.t), _fmt(r.L), _fmt(r.A), _fmt(r.V), _fmt(r.max_edge_dev),
            _fmt(r.constraint_residual), str(int(r.M_in)),
        )))
    Path(path).write_text("\n".join(lines) + "\n")


def read_diagnostics(path) -> list[DiagnosticsRecord]:
    rows = Path(path).read_text().splitlines()
    if not rows or rows[0].strip() != DIAGNOSTICS_HEADER:
        raise ParseError(f"{path}:1: expected header {DIAGNOSTICS_HEADER!r}")
    out = []
    for row in rows[1:]:
        if row.strip():
            v = row.split(",")
            out.append(DiagnosticsRecord(*map(float, v[:6]), int(v[6])))
    return out


def render_svg(state: SimulationState, path, stroke: str = "black") -> None:
    """Closed outline of the curve in the fixed viewBox [-2, 2]^2 (y up)."""
    pts = " ".join(f"{px:.6f},{-py:.6f}" for px, py in state.curve.vertices)
    svg = (
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="-2 -2 4 4" width="400" height="400">\n'
        f'  <title>t = {state.t:.6g}</title>\n'
        f'  <polygon points="{pts}" fill="none" stroke="{stroke}" stroke-width="0.01"/>\n'
        "</svg>\n"
    )
    Path(path).write_text(svg)


def snapshot_name(k: int, ext: str) -> str:
    return f"snapshot_{k:05d}.{ext}"


def write_config(cfg: RunConfig, path) -> None:
    Path(path).write_text(json.dumps(cfg.to_json(), indent=2, sort_keys=True) + "\n")
