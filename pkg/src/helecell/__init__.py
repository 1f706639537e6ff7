"""Polygonal front tracking for Hele-Shaw problems with the method of fundamental solutions."""

from .errors import HeleCellError
from .evolution import (
    DiagnosticsRecord,
    InitialCurveSpec,
    SimulationState,
    build_initial_curve,
    rk4_step,
    run,
    velocity_field,
)
from .geometry import GeometryCache, PolygonalCurve, build_geometry, regular_polygon
from .models import GapLaw, ModelParams

__version__ = "0.1.0"
