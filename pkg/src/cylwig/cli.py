"""Command-line front end.

Exit codes: 0 success, 1 a numeric check failed, 2 usage error.
Settings resolve as command-line flags, then a ``key = value`` config file
(``--config``), then built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from .basis import BandedOperator, PendulumModel, TruncationWarning, WaveFunction
from .checks import SUITES, run_suite
from .dynamics import (eigensystem, evolve_density, evolve_schrodinger, liouville_residual,
                       thermal_state, trajectory_jsonl, wigner_field)
from .kernel import MoyalCoefficients, PhaseSpaceGrid, grid_to_json, write_grid_csv
from .parser import SymbolSyntaxError, format_symbol, parse_symbol
from .star import hbar_expansion, star, star_anticommutator, star_commutator
from .weyl import weyl_quantize, weyl_symbol

__all__ = ["main", "load_config"]

DEFAULTS = {
    "hbar": 1.0,
    "n_max": 16,
    "inertia": 1.0,
    "amplitude": 0.0,
    "mode": 1,
    "grid": "t=64,p=-4:4:161",
    "levels": 10,
    "t_final": 1.0,
    "steps": 5,
    "n_series": None,
    "format": "csv",
}

_TYPES = {"hbar": float, "n_max": int, "inertia": float, "amplitude": float, "mode": int,
          "grid": str, "levels": int, "t_final": float, "steps": int, "n_series": int,
          "format": str, "gamma": float}


class UsageError(Exception):
    pass


def load_config(path):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if not sep or key not in _TYPES:
                raise UsageError(f"{path}:{lineno}: unknown or malformed setting {raw.strip()!r}")
            value = value.strip().strip('"').strip("'")
            try:
                out[key] = _TYPES[key](value)
            except ValueError as exc:
                raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return out


def _settings(args):
    cfg = load_config(args.config) if getattr(args, "config", None) else {}
    out = dict(DEFAULTS)
    out.update(cfg)
    for key in _TYPES:
        value = getattr(args, key, None)
        if value is not None:
            out[key] = value
    if out.get("gamma") is not None:
        out["inertia"] = 1.0 / (2.0 * out["gamma"])
    return out


def _model(s):
    try:
        return PendulumModel(inertia=s["inertia"], amplitude=s["amplitude"], hbar=s["hbar"],
                             mode=s["mode"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _state(spec, s, model):
    """basis:m | modes:m=c,... | gaussian:center,width,angle | eigen:j |
    thermal:beta | file:path (WaveFunction JSON)."""
    kind, _, arg = spec.partition(":")
    n = s["n_max"]
    try:
        if kind == "basis":
            m = int(arg)
            return WaveFunction.basis(m, max(n, abs(m)))
        if kind == "modes":
            modes = {}
            for item in arg.split(","):
                m, _, c = item.partition("=")
                modes[int(m)] = complex(c.replace("i", "j")) if c else 1.0
            return WaveFunction.from_modes(modes, max([n] + [abs(m) for m in modes]))
        if kind == "gaussian":
            vals = [float(x) for x in arg.split(",")] if arg else []
            return WaveFunction.gaussian(n, *vals)
        if kind == "eigen":
            return eigensystem(model, n).state(int(arg))
        if kind == "thermal":
            return thermal_state(model, float(arg), n)
        if kind == "file":
            with open(arg, encoding="utf-8") as fh:
                return WaveFunction.from_json(fh.read())
    except (ValueError, OSError) as exc:
        raise UsageError(f"bad state {spec!r}: {exc}") from exc
    raise UsageError(f"unknown state kind {kind!r} (basis, modes, gaussian, eigen, thermal, file)")


def _symbol(text):
    try:
        return parse_symbol(text).to_symbol()
    except SymbolSyntaxError as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}") from exc


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_spectrum(args, s):
    model = _model(s)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TruncationWarning)
        eig = eigensystem(model, s["n_max"], n_check=s["levels"])
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    levels = min(s["levels"], eig.energies.size)
    if s["format"] == "json":
        _emit(json.dumps({"energies": [float(e) for e in eig.energies[:levels]]}) + "\n", args.output)
    else:
        rows = ["index,energy"] + [f"{j},{format(float(e), '.17g')}"
                                   for j, e in enumerate(eig.energies[:levels])]
        _emit("\n".join(rows) + "\n", args.output)
    return 0


def cmd_wigner(args, s):
    model = _model(s)
    state = _state(args.state, s, model)
    try:
        grid = PhaseSpaceGrid.parse(s["grid"])
    except ValueError as exc:
        raise UsageError(f"bad grid {s['grid']!r}: {exc}") from exc
    values = np.real(wigner_field(state).grid(grid.theta, grid.pbar))
    if s["format"] == "json":
        _emit(grid_to_json(grid.theta, grid.pbar, values) + "\n", args.output)
    else:
        _emit(write_grid_csv(grid.theta, grid.pbar, values), args.output)
    return 0


def cmd_evolve(args, s):
    model = _model(s)
    state = _state(args.state, s, model)
    times = np.linspace(0.0, s["t_final"], s["steps"])
    if isinstance(state, MoyalCoefficients):
        traj = evolve_density(state, times, model)
        lines = "\n".join(json.dumps({"t": float(t), "n_max": r.n_max,
                                      "rho": [[[float(z.real), float(z.imag)] for z in row]
                                              for row in r.rho]})
                          for t, r in zip(times, traj)) + "\n"
    else:
        traj = evolve_schrodinger(state, times, model)
        lines = trajectory_jsonl(times, traj)
    if args.liouville_residual:
        if args.output:
            _emit(lines, args.output)
        grid = PhaseSpaceGrid.parse(s["grid"])
        report = liouville_residual(traj, model, grid, n_series=s["n_series"], times=times)
        _emit(report.to_json() + "\n", args.report)
    else:
        _emit(lines, args.output)
    return 0


def cmd_weyl(args, s):
    if args.action == "quantize":
        sym = _symbol(args.input)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            op = weyl_quantize(sym, s["n_max"], hbar=s["hbar"])
        _emit(op.to_json() + "\n", args.output)
        return 0
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        op = BandedOperator.from_json(text)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read matrix JSON {args.input!r}: {exc}") from exc
    sym = weyl_symbol(op, hbar=s["hbar"])
    if not getattr(sym, "exact", True):
        print(f"non-exact symbol: {sym.reason}", file=sys.stderr)
        return 1
    _emit(format_symbol(sym) + "\n", args.output)
    return 0


def cmd_star(args, s):
    a, b = _symbol(args.left), _symbol(args.right)
    hbar = s["hbar"]
    if args.expand is not None:
        coeffs = hbar_expansion(a, b, args.expand)
        text = "".join(f"hbar^{r}: {format_symbol(c)}\n" for r, c in enumerate(coeffs))
    else:
        op = {"product": star, "commutator": star_commutator,
              "anticommutator": star_anticommutator}[args.op]
        text = format_symbol(op(a, b, hbar)) + "\n"
    _emit(text, args.output)
    return 0


def cmd_check(args, s):
    results = run_suite(args.suite)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} passed")
    return 1 if failed else 0


# ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value settings file")
    common.add_argument("--hbar", type=float)
    common.add_argument("--n-max", dest="n_max", type=int)
    common.add_argument("--inertia", type=float, help="moment of inertia m r0^2")
    common.add_argument("--gamma", type=float, help="coefficient of L^2 (overrides --inertia)")
    common.add_argument("--amplitude", type=float, help="pendulum amplitude A in U = -A cos(k t)")
    common.add_argument("--mode", type=int, help="pendulum mode k")
    common.add_argument("--output", "-o", help="output file (default stdout)")

    parser = argparse.ArgumentParser(prog="cylwig", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="pendulum eigenvalues")
    p.add_argument("--levels", type=int)
    p.add_argument("--format", choices=["csv", "json"])
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("wigner", parents=[common], help="Wigner function on a grid")
    p.add_argument("--state", required=True)
    p.add_argument("--grid", help="e.g. t=64,p=-4:4:161")
    p.add_argument("--format", choices=["csv", "json"])
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("evolve", parents=[common], help="time evolution and Liouville residuals")
    p.add_argument("--state", required=True)
    p.add_argument("--t-final", dest="t_final", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--grid")
    p.add_argument("--n-series", dest="n_series", type=int)
    p.add_argument("--liouville-residual", action="store_true")
    p.add_argument("--report", help="residual report file (default stdout)")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("weyl", parents=[common], help="symbol <-> matrix")
    p.add_argument("action", choices=["quantize", "symbol"])
    p.add_argument("input", help="symbol text (quantize) or matrix JSON file, '-' for stdin (symbol)")
    p.set_defaults(func=cmd_weyl)

    p = sub.add_parser("star", parents=[common], help="star product of two symbols")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--op", choices=["product", "commutator", "anticommutator"], default="product")
    p.add_argument("--expand", type=int, metavar="ORDER", help="print hbar-expansion coefficients")
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("check", parents=[common], help="run the identity suite")
    p.add_argument("--suite", choices=sorted(SUITES), default="all")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        settings = _settings(args)
        return args.func(args, settings)
    except UsageError as exc:
        print(f"cylwig: error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"cylwig: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
