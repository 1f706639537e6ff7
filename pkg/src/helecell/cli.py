"""Command-line front end: ``helecell run`` and ``helecell presets``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import io
from .errors import HeleCellError
from .evolution import build_initial_curve, run

log = logging.getLogger("helecell")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="helecell", description="Hele-Shaw moving-boundary simulations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a simulation from a JSON config")
    src = p_run.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", type=Path, help="path to a JSON run configuration")
    src.add_argument("--preset", choices=io.PRESETS, help="use a bundled configuration")
    p_run.add_argument("--out", type=Path, help="output directory (overrides output_dir)")
    p_run.add_argument("--seed", type=int, help="master seed (overrides the config)")
    p_run.add_argument("--t-end", type=float, help="final time (overrides the config)")
    p_run.add_argument("--emit-svg", action="store_true", help="write one SVG per snapshot")
    p_run.add_argument("-q", "--quiet", action="store_true")

    p_pre = sub.add_parser("presets", help="list bundled configs, or print one")
    p_pre.add_argument("name", nargs="?", choices=io.PRESETS)
    return parser


def _run(args) -> int:
    try:
        cfg = io.parse_config(args.config) if args.config else io.load_preset(args.preset)
        if args.seed is not None:
            cfg.master_seed = args.seed
        if args.t_end is not None:
            cfg.t_end = args.t_end
        if args.emit_svg:
            cfg.emit_svg = True
        if args.out is not None:
            cfg.output_dir = str(args.out)
        cfg.validate()
    except OSError as exc:
        print(f"helecell: cannot read config: {exc}", file=sys.stderr)
        return 2
    except HeleCellError as exc:
        print(f"helecell: {exc}", file=sys.stderr)
        return 2
    if not cfg.output_dir:
        print("helecell: no output directory (use --out or output_dir)", file=sys.stderr)
        return 2

    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    io.write_config(cfg, out / "config.json")
    params = cfg.model_params()
    curve = build_initial_curve(cfg.curve_spec())
    written = []

    def emit(state, record):
        k = len(written)
        io.write_snapshot(state, out / io.snapshot_name(k, "csv"))
        if cfg.emit_svg:
            io.render_svg(state, out / io.snapshot_name(k, "svg"))
        written.append(record)
        io.write_diagnostics(written, out / "diagnostics.csv")
        log.info("t=%.6g  L=%.10g  A=%.10g  V=%.10g", record.t, record.L, record.A, record.V)

    result = run(curve, params, snapshot_interval=cfg.snapshot_interval, callback=emit)
    if not result.completed:
        print(f"helecell: run aborted: {result.reason}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "presets":
        if args.name:
            sys.stdout.write(io.preset_text(args.name))
        else:
            print("\n".join(io.PRESETS))
        return 0
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(message)s")
    return _run(args)


if __name__ == "__main__":
    sys.exit(main())
