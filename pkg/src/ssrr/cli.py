"""Command-line front end.

Subcommands: polar, reflect, certify, sweep, diagnose.  Configuration is
a JSON file (--config); data goes out as CSV/JSON (--out), optionally an
SVG plot for polar.  Exit codes: 0 success, 2 configuration error,
3 physics regime (e.g. pseudo-subsonic upstream), 4 I/O error.
Detachment is reported as success with an empty root list.
"""

import argparse
import json
import sys

import numpy as np

from . import certificate as certmod
from . import diagnostic, polar, reflection, svg
from .errors import ConfigError, FieldFormatError, FlowError, NoPolarError
from .gas import GasModel
from .shock import UpstreamData

_F17 = "{:.17g}"


def _fail(code: int, message: str) -> int:
    print(message, file=sys.stderr)
    return code


def _load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc


def _require(doc, key):
    if key not in doc:
        raise ConfigError(f"config field {key!r} is missing")
    return doc[key]


def _vec(doc, key):
    val = _require(doc, key)
    if not (isinstance(val, (list, tuple)) and len(val) == 2):
        raise ConfigError(f"config field {key!r} must be a 2-element array")
    return np.array([float(val[0]), float(val[1])])


def _upstream(doc) -> UpstreamData:
    try:
        gas = GasModel(float(_require(doc, "gamma")))
    except ValueError as exc:
        raise ConfigError(f"config field 'gamma': {exc}") from exc
    up = _require(doc, "upstream")
    if not isinstance(up, dict):
        raise ConfigError("config field 'upstream' must be an object {rho, v}")
    rho = float(_require(up, "rho"))
    if rho <= 0:
        raise ConfigError("config field 'upstream.rho' must be positive")
    return UpstreamData(gas, rho, _vec(up, "v"))


def _reflection_config(doc) -> reflection.ReflectionConfig:
    upstream = _upstream(doc)
    xi_r = _vec(doc, "xi_r")
    wall = _vec(doc, "wall_dir")
    scenario = doc.get("scenario", "classical_rr")
    return reflection.ReflectionConfig(upstream, xi_r, wall, scenario)


def _write_text(path, text) -> None:
    if path is None:
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _solution_dict(sol):
    sp = sol.shock
    return {
        "type": sol.type.label,
        "indicator": sol.type.indicator,
        "theta_deg": sol.theta,
        "alpha_deg": sol.alpha,
        "L3": sol.L3,
        "sonic_character": sol.sonic_character,
        "degenerate_theta": sol.degenerate_theta,
        "rho_d": sp.rho_d,
        "v_d": [sp.v_d[0], sp.v_d[1]],
        "n": [sp.n[0], sp.n[1]],
        "zt": sp.zt,
        "zn_d": sp.zn_d,
    }


def cmd_polar(args) -> int:
    doc = _load_config(args.config)
    upstream = _upstream(doc)
    xi = _vec(doc, "xi" if "xi" in doc else "xi_r")
    try:
        pol = polar.polar_trace(upstream, xi, args.samples)
    except NoPolarError:
        return _fail(3, "upstream pseudo-subsonic at xi")
    _write_text(args.out, polar.polar_to_csv(pol))
    if args.svg:
        roots = []
        if "wall_dir" in doc:
            from ._vec import signed_angle, unit

            tau = signed_angle(upstream.z(xi), unit(_vec(doc, "wall_dir")))
            if abs(tau) < np.pi / 2:
                roots = polar.solve_deflection(pol, tau)
        _write_text(args.svg, svg.polar_svg(pol, roots))
    return 0


def cmd_reflect(args) -> int:
    doc = _load_config(args.config)
    config = _reflection_config(doc)
    sols = reflection.solve_reflection(config, args.samples)
    text = json.dumps([_solution_dict(s) for s in sols], indent=2) + "\n"
    _write_text(args.out, text)
    if args.out is None:
        sys.stdout.write(text)
    return 0


def cmd_certify(args) -> int:
    doc = _load_config(args.config)
    config = _reflection_config(doc)
    beta = None
    if args.beta != "auto":
        try:
            beta = float(args.beta)
        except ValueError as exc:
            raise ConfigError(f"--beta must be 'auto' or a number: {args.beta!r}") from exc
        if not 0.0 < beta < 1.0:
            raise ConfigError(f"--beta must lie in (0, 1), got {beta!r}")
    if not 0.0 < args.epsilon < 1.0:
        raise ConfigError(f"--epsilon must lie in (0, 1), got {args.epsilon!r}")
    try:
        n_r, n_phi = (int(v) for v in args.grid.lower().split("x"))
    except ValueError as exc:
        raise ConfigError(f"--grid must look like 64x64: {args.grid!r}") from exc
    if n_r < 64 or n_phi < 64:
        raise ConfigError(f"--grid needs at least 64x64 samples, got {args.grid!r}")
    cert = certmod.certify_nonexistence(
        config, epsilon=args.epsilon, beta=beta, n_r=n_r, n_phi=n_phi, n_samples=args.samples
    )
    text = certmod.certificate_to_json(cert)
    _write_text(args.out, text)
    if args.out is None:
        sys.stdout.write(text)
    return 0


def _sweep_range(sweep, key):
    val = sweep.get(key)
    if not (isinstance(val, (list, tuple)) and len(val) == 3):
        raise ConfigError(f"config field 'sweep.{key}' must be [start, stop, count]")
    try:
        start, stop, count = float(val[0]), float(val[1]), int(val[2])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"config field 'sweep.{key}': {exc}") from exc
    if count < 1:
        raise ConfigError(f"config field 'sweep.{key}' needs a positive count")
    return np.linspace(start, stop, count)


def cmd_sweep(args) -> int:
    doc = _load_config(args.config)
    gamma = float(_require(doc, "gamma"))
    scenario = doc.get("scenario", "classical_rr")
    sweep = _require(doc, "sweep")
    if not isinstance(sweep, dict):
        raise ConfigError("config field 'sweep' must be an object {tau_deg, mach}")
    taus = _sweep_range(sweep, "tau_deg")
    machs = _sweep_range(sweep, "mach")
    result = reflection.sweep_transitions(
        scenario, gamma, taus, machs, n_samples=args.samples, jobs=args.jobs
    )
    _write_text(args.out, reflection.sweep_rows_to_csv(result))
    if args.loci_out:
        _write_text(args.loci_out, reflection.loci_to_csv(result))
    return 0


def cmd_diagnose(args) -> int:
    path = args.field
    if path is None:
        doc = _load_config(args.config)
        path = _require(doc, "field")
    try:
        field = diagnostic.read_field(path)
    except OSError as exc:
        return _fail(4, f"cannot read field file: {exc}")
    report = diagnostic.minimum_report(field)
    doc = {
        "verdict": report.verdict,
        "violations": [{"node": list(o.node), "reason": o.reason} for o in report.offenders],
        "notes": list(report.notes),
    }
    text = json.dumps(doc, indent=2) + "\n"
    _write_text(args.out, text)
    if args.out is None:
        sys.stdout.write(text)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssrr",
        description="Shock polars, regular reflections and strong-type non-existence certificates "
        "for self-similar potential flow.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, samples=96):
        p.add_argument("--config", required=True, help="JSON configuration file")
        p.add_argument("--out", default=None, help="output path")
        p.add_argument("--samples", type=int, default=samples, help="polar samples per side")

    p = sub.add_parser("polar", help="trace a shock polar to CSV (optionally SVG)")
    common(p, samples=360)
    p.add_argument("--svg", default=None, help="also write an SVG plot")
    p.set_defaults(func=cmd_polar)

    p = sub.add_parser("reflect", help="solve the local reflection problem to JSON")
    common(p)
    p.set_defaults(func=cmd_reflect)

    p = sub.add_parser("certify", help="run the strong-type non-existence certificate")
    common(p)
    p.add_argument("--epsilon", type=float, default=1e-3, help="subsolution amplitude")
    p.add_argument("--beta", default="auto", help="'auto' or a value in (0,1)")
    p.add_argument("--grid", default="64x64", help="certificate sample grid, NxM")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sweep", help="root-structure sweep over (tau, Mach) to CSV")
    common(p, samples=64)
    p.add_argument("--loci-out", default=None, help="write transition loci CSV here")
    p.add_argument("--jobs", type=int, default=1, help="parallel sweep columns")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("diagnose", help="minimum-principle checks on an SSRR-FIELD file")
    p.add_argument("--config", default=None, help="JSON configuration file with a 'field' path")
    p.add_argument("--field", default=None, help="SSRR-FIELD file (overrides config)")
    p.add_argument("--out", default=None, help="output path")
    p.set_defaults(func=cmd_diagnose)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "diagnose" and args.field is None and args.config is None:
        return _fail(2, "diagnose needs --field or --config")
    try:
        return args.func(args)
    except ConfigError as exc:
        return _fail(2, f"config error: {exc}")
    except FieldFormatError as exc:
        return _fail(2, f"field format error: {exc}")
    except ValueError as exc:
        return _fail(2, f"config error: {exc}")
    except NoPolarError:
        return _fail(3, "upstream pseudo-subsonic at xi")
    except FlowError as exc:
        return _fail(3, f"physics error: {exc}")
    except OSError as exc:
        return _fail(4, f"I/O error: {exc}")


if __name__ == "__main__":
    sys.exit(main())
