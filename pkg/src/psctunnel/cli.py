"""Command-line interface: build, measure, sweep, telescope.

Configuration is a flat JSON object; unknown keys are rejected so typos in
bound constants cannot silently change a certification run.  Exit codes:
0 = certified, 1 = a certification or invariant failure, 2 = bad config.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

from .assembly import (assemble, build_neck, measure, neighborhood_check,
                       scaling_sweep, telescope)
from .bend_planner import AmbientModel
from .curvature_models import bound_profile, kappa_exact_profile
from .errors import ConfigError, TunnelError
from .output import curve_csv, dump_json, sweep_csv, write_text_atomic
from .smoother import SmoothingParams

__all__ = ["RunConfig", "load_config", "main"]

import numpy as np

# key -> (type, default, short description); None default means optional
_CONFIG_KEYS = {
    "n": (int, 3, "ambient dimension, >= 3"),
    "delta": (float, 0.2, "collar outer radius"),
    "delta0": (float, 0.1, "collar inner radius, < delta"),
    "kappa_D_min": (float, 1.0, "positive lower bound for ambient scalar curvature"),
    "ric_sup": (float, 0.0, "bound on the radial Ricci component"),
    "c1": (float, 0.0, "bound constant for the sphere-term correction"),
    "c2": (float, 0.0, "bound constant for the bend-term correction"),
    "c_metric": (float, 0.0, "metric deviation constant of small spheres"),
    "theta_bar": (float, 1.2, "cutoff angle, needs sin(theta_bar) > 4/5"),
    "window_position": (float, 0.5, "position inside the final-arc window, in (0,1)"),
    "k_init": (float, 1.0, "curvature of the initial arc"),
    "margin": (float, 0.0, "required slack of the curvature bound on the initial arc"),
    "safety_factor": (float, 0.0, "inflation of negative bound terms"),
    "eta": (float, None, "explicit smoothing width (default: auto per junction)"),
    "drop_fraction": (float, 0.5, "tail fraction available to the terminal drop"),
    "audit_step": (float, None, "audit sampling step (default: ~1e4 points per unit)"),
    "L": (float, None, "target collar distance (telescope)"),
    "delta0_grid": (list, None, "collar scales for the scaling sweep"),
    "output_dir": (str, None, "default output directory"),
}


@dataclass(frozen=True)
class RunConfig:
    n: int
    delta: float
    delta0: float
    kappa_D_min: float
    ric_sup: float
    c1: float
    c2: float
    c_metric: float
    theta_bar: float
    window_position: float
    k_init: float
    margin: float
    safety_factor: float
    eta: float | None
    drop_fraction: float
    audit_step: float | None
    L: float | None
    delta0_grid: list | None
    output_dir: str | None

    def model(self) -> AmbientModel:
        return AmbientModel(
            n=self.n, delta=self.delta, delta0=self.delta0,
            kappa_D_min=self.kappa_D_min, ric_sup=self.ric_sup,
            c1=self.c1, c2=self.c2, c_metric=self.c_metric,
        )

    def smoothing(self) -> SmoothingParams:
        return SmoothingParams(eta=self.eta, drop_fraction=self.drop_fraction)

    def echo(self) -> dict:
        return {key: getattr(self, key) for key in _CONFIG_KEYS}


def _coerce(key: str, value, expected):
    if value is None:
        return None
    if expected is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"config key '{key}' must be an integer")
        return value
    if expected is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"config key '{key}' must be a number")
        return float(value)
    if expected is list:
        if not isinstance(value, list):
            raise ConfigError(f"config key '{key}' must be a list")
        return value
    if expected is str:
        if not isinstance(value, str):
            raise ConfigError(f"config key '{key}' must be a string")
        return value
    raise AssertionError(expected)


def parse_config(raw: dict) -> RunConfig:
    """Validate a parsed JSON object against every module's preconditions."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(raw) - set(_CONFIG_KEYS))
    if unknown:
        raise ConfigError(f"unknown config key '{unknown[0]}'")
    values = {}
    for key, (expected, default, _) in _CONFIG_KEYS.items():
        values[key] = _coerce(key, raw.get(key, default), expected)
    cfg = RunConfig(**values)

    try:
        cfg.model()
        cfg.smoothing()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if not math.sin(cfg.theta_bar) > 0.8:
        raise ConfigError(
            f"theta_bar={cfg.theta_bar!r} has sin(theta_bar) <= 4/5, so the "
            f"final-arc curvature window "
            f"(1 - sin(theta_bar), sin(theta_bar)/4) is empty"
        )
    if not 0.0 < cfg.window_position < 1.0:
        raise ConfigError("window_position must be in (0, 1)")
    if not cfg.k_init > 0.0:
        raise ConfigError("k_init must be positive")
    if cfg.k_init * cfg.delta0 >= math.pi:
        raise ConfigError("k_init * delta0 must stay below pi")
    if cfg.margin < 0.0:
        raise ConfigError("margin must be nonnegative")
    if cfg.safety_factor < 0.0:
        raise ConfigError("safety_factor must be nonnegative")
    if cfg.audit_step is not None and not cfg.audit_step > 0.0:
        raise ConfigError("audit_step must be positive")
    if cfg.L is not None and not cfg.L > 0.0:
        raise ConfigError("L must be positive")
    if cfg.delta0_grid is not None:
        if len(cfg.delta0_grid) < 2:
            raise ConfigError("delta0_grid needs at least 2 values")
        for v in cfg.delta0_grid:
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0.0:
                raise ConfigError("delta0_grid entries must be positive numbers")
            if not v < cfg.delta:
                raise ConfigError("delta0_grid entries must stay below delta")
    return cfg


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return parse_config(raw)


def _build_neck(cfg: RunConfig):
    return build_neck(
        cfg.model(),
        theta_bar=cfg.theta_bar,
        window_position=cfg.window_position,
        margin=cfg.margin,
        safety_factor=cfg.safety_factor,
        k_init=cfg.k_init,
        smoothing=cfg.smoothing(),
        audit_step=cfg.audit_step,
    )


def _plan_payload(plan) -> dict:
    return {
        "s0": plan.s0,
        "theta0": plan.theta0,
        "k_init": plan.k_init,
        "m": plan.m,
        "theta_bar": plan.theta_bar,
        "k_final": plan.k_final,
        "delta_s_final": plan.delta_s_final,
        "r_inf_schedule": plan.r_inf,
        "tail_length": plan.tail_length,
        "total_length": plan.total_length,
        "delta0": plan.delta0,
        "truncated_last": plan.truncated_last,
        "end_theta_raw": plan.end_theta_raw,
        "breakpoints": [
            {"s": st.s, "t": st.t, "r": st.r, "theta": st.theta}
            for st in plan.breakpoints
        ],
    }


def _neck_payload(cfg: RunConfig, neck) -> dict:
    sc = neck.smoothed_certificate
    return {
        "config": cfg.echo(),
        "plan": _plan_payload(neck.plan),
        "plan_checks": list(neck.plan_certificate.items),
        "smoothing": {
            "turn_integral": sc.turn_integral,
            "end_theta": sc.end_theta,
            "l1_diff": sc.l1_diff,
            "sup_dtheta": sc.sup_dtheta,
            "sup_dr": sc.sup_dr,
            "sup_dt": sc.sup_dt,
            "r_tail_variation": sc.r_tail_variation,
            "r_inf": sc.r_inf,
            "lipschitz_estimate": sc.lipschitz_estimate,
            "checks": list(sc.items),
        },
        "curvature": {
            "condition_margin_min": neck.margin_min,
            "condition_margin_at": neck.margin_at,
            "condition_margin_min_piecewise": sc.margin_min_piecewise,
            "kappa_exact_min": neck.kappa_exact_min,
            "kappa_exact_at": neck.kappa_exact_at,
            "bound_min": neck.bound_min,
        },
        "blend": neck.blend,
        "certified": neck.certified,
    }


def _emit(path: str, text: str, quiet: bool) -> None:
    write_text_atomic(path, text)
    if not quiet:
        print(f"wrote {path}")


def cmd_build(cfg: RunConfig, out: str, quiet: bool) -> int:
    neck = _build_neck(cfg)
    samples = neck.samples
    csv_text = curve_csv(
        samples,
        kappa_exact_profile(samples, cfg.n),
        bound_profile(samples, neck.model, safety_factor=cfg.safety_factor),
        np.sin(samples.theta) / (4.0 * samples.r) - samples.k,
    )
    _emit(os.path.join(out, "curve.csv"), csv_text, quiet)
    _emit(os.path.join(out, "certificate.json"),
          dump_json(_neck_payload(cfg, neck)), quiet)

    from . import plots
    plots.save_profile_plot(neck, os.path.join(out, "profile.svg"))
    plots.save_curvature_plot(neck, os.path.join(out, "curvature.svg"))
    if not quiet:
        print(f"wrote {os.path.join(out, 'profile.svg')}")
        print(f"wrote {os.path.join(out, 'curvature.svg')}")

    if not neck.certified:
        print(f"certification failed: {neck.failed_checks()[0]}",
              file=sys.stderr)
        return 1
    if not quiet:
        print(f"certified: margin_min={neck.margin_min:.6g}, "
              f"kappa_exact_min={neck.kappa_exact_min:.6g}, "
              f"r_inf={neck.r_inf:.6g}")
    return 0


def _tunnel_report(cfg: RunConfig, out: str, quiet: bool, L: float | None) -> int:
    neck = _build_neck(cfg)
    if L is None:
        tunnel = assemble(neck, neck, 0.0)
    else:
        tunnel = telescope(neck, neck, L)
    report = measure(tunnel)
    nbhd = neighborhood_check(tunnel)
    payload = {
        "config": cfg.echo(),
        "report": report,
        "neighborhood": nbhd,
        "certified": report.certified and nbhd.passed,
    }
    _emit(os.path.join(out, "report.json"), dump_json(payload), quiet)

    from . import plots
    plots.save_tunnel_plot(tunnel, report, os.path.join(out, "tunnel.svg"))
    if not quiet:
        print(f"wrote {os.path.join(out, 'tunnel.svg')}")

    if not report.certified:
        print("certification failed: see report.json", file=sys.stderr)
        return 1
    if not nbhd.passed:
        print("neighborhood check failed", file=sys.stderr)
        return 1
    if not quiet:
        print(f"certified: dist_collars={report.dist_collars:.12g}, "
              f"diam_upper={report.diam_upper:.6g}, "
              f"vol_U={report.vol_U:.6g}")
    return 0


def cmd_measure(cfg: RunConfig, out: str, quiet: bool) -> int:
    return _tunnel_report(cfg, out, quiet, None)


def cmd_telescope(cfg: RunConfig, out: str, quiet: bool) -> int:
    if cfg.L is None:
        raise ConfigError("telescope requires config key 'L'")
    return _tunnel_report(cfg, out, quiet, cfg.L)


def cmd_sweep(cfg: RunConfig, out: str, quiet: bool) -> int:
    if cfg.delta0_grid is None:
        raise ConfigError("sweep requires config key 'delta0_grid'")
    result = scaling_sweep(
        cfg.model(), cfg.delta0_grid, theta_bar=cfg.theta_bar,
        window_position=cfg.window_position, margin=cfg.margin,
        safety_factor=cfg.safety_factor, k_init=cfg.k_init,
        smoothing=cfg.smoothing(), audit_step=cfg.audit_step,
    )
    _emit(os.path.join(out, "sweep.csv"), sweep_csv(result.points), quiet)
    payload = {
        "config": cfg.echo(),
        "slopes": {name: fit for name, fit in result.slopes.items()},
        "points": list(result.points),
        "certified": result.all_certified,
    }
    _emit(os.path.join(out, "report.json"), dump_json(payload), quiet)

    from . import plots
    plots.save_scaling_plot(result, os.path.join(out, "scaling.svg"))
    if not quiet:
        print(f"wrote {os.path.join(out, 'scaling.svg')}")

    if not result.all_certified:
        print("certification failed on at least one grid point",
              file=sys.stderr)
        return 1
    if not quiet:
        for name, fit in result.slopes.items():
            print(f"slope[{name}] = {fit.slope:.6f}")
    return 0


_COMMANDS = {
    "build": cmd_build,
    "measure": cmd_measure,
    "sweep": cmd_sweep,
    "telescope": cmd_telescope,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="psctunnel",
        description="Build and certify positive-scalar-curvature necks "
                    "and tunnels of revolution.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to config JSON")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--audit-step", type=float, default=None,
                       help="override the audit sampling step")
        p.add_argument("--quiet", action="store_true",
                       help="suppress progress output")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
        if args.audit_step is not None:
            if not args.audit_step > 0.0:
                raise ConfigError("--audit-step must be positive")
            cfg = RunConfig(**{**cfg.echo(), "audit_step": args.audit_step})
        out = args.out or cfg.output_dir or "out"
        return _COMMANDS[args.command](cfg, out, args.quiet)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except TunnelError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
