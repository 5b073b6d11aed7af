"""Command-line front end.

Every command writes a table: '#' header lines recording the tool version and
the fully resolved configuration, then CSV rows (or one JSON object with
--format json). Randomized commands require an explicit --seed.

Exit codes: 0 success, 2 usage error, 3 invalid or missing parameter,
4 output not writable.
"""
import argparse
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .alphabet import SignalAlphabet, chefles_bound_or_zero, helstrom_error, overlap, usd_inconclusive
from .exceptions import DomainError, FullyInconclusiveError
from .gaussian_povm import R_HOMODYNE, scan_optimality
from .homodyne import HomodyneConfig, hd_error, hd_inconclusive
from .mode_overlap import (
    WindowSpec,
    chebyshev_impulse,
    cross_correlation_g12,
    effective_response,
    read_impulse_response,
)
from .montecarlo import SWEEP_COLUMNS, matched_inc_comparison, sweep_operating_curve
from .pnr import PnrConfig, optimize_displacement, pnr_error, pnr_inconclusive

OUTDIR_ENV = "COHERENT_RECEIVERS_OUTDIR"
EXIT_USAGE, EXIT_PARAM, EXIT_IO = 2, 3, 4
# execution details that must not change the output bytes
UNRECORDED = {"workers"}


class CliError(Exception):
    def __init__(self, code, param, message):
        self.code, self.param, self.message = code, param, message
        super().__init__(message)


def parse_grid(text, param):
    """'start:stop:count' (endpoints included), 'a,b,c', or a single number."""
    text = str(text).strip()
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            count = int(count)
            if count < 1:
                raise ValueError
            return [float(x) for x in np.linspace(float(start), float(stop), count)]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise DomainError(param, f"cannot parse grid {text!r}") from None


# per command: flag -> (type, default, help). default None means required.
_ALPHA_GRID = ("grid", "0.24", "mean photon numbers alpha^2, start:stop:count or list")
COMMANDS = {
    "bounds": {
        "alpha-sq-grid": _ALPHA_GRID,
        "alpha-sq": ("float", "", "single alpha^2 (overrides the grid)"),
    },
    "hd-curve": {
        "alpha-sq-grid": _ALPHA_GRID,
        "b-grid": ("grid", "0:2:41", "postselection thresholds B"),
        "eta": ("float", 1.0, "homodyne efficiency"),
        "electronic-noise": ("float", 0.0, "additive electronic noise variance (shot noise = 0.5)"),
        "eta-corrected": ("flag", False, "report alpha^2 scaled by eta"),
    },
    "pnr-curve": {
        "alpha-sq-grid": _ALPHA_GRID,
        "beta-grid": ("grid", "0:3:61", "displacements beta"),
        "m": ("int", 1, "inconclusive band 1..m"),
        "eta": ("float", 1.0, "detection efficiency"),
        "dark": ("float", 0.0, "mean dark counts per window"),
        "visibility": ("float", 1.0, "displacement interference visibility"),
        "eta-corrected": ("flag", False, "report alpha^2 scaled by eta"),
    },
    "optimize-beta": {
        "alpha-sq-grid": _ALPHA_GRID,
        "m-list": ("grid", "0,1,2", "thresholds m"),
        "eta": ("float", 1.0, "detection efficiency"),
        "dark": ("float", 0.0, "mean dark counts per window"),
        "visibility": ("float", 1.0, "displacement interference visibility"),
    },
    "compare": {
        "alpha-sq-grid": ("grid", "0.05:2.0:40", _ALPHA_GRID[2]),
        "m": ("int", 1, "PNR threshold m"),
        "eta": ("float", 1.0, "efficiency of both receivers"),
        "eta-corrected": ("flag", False, "report alpha^2 scaled by eta"),
    },
    "gaussian-scan": {
        "alpha-sq": ("float", 0.24, "mean photon number alpha^2"),
        "lambda-b-grid": ("grid", "1,2,8", "likelihood thresholds Lambda_B"),
        "r-grid": ("grid", "0:3:13", "squeezing magnitudes r"),
        "phi-grid": ("grid", f"0:{math.pi!r}:17", "squeezing phases phi"),
        "homodyne-limit": ("flag", False, f"append r = {R_HOMODYNE:g} as the homodyne proxy"),
    },
    "simulate": {
        "receiver": ("choice:homodyne,pnr", "homodyne", "receiver family"),
        "alpha-sq-grid": _ALPHA_GRID,
        "b-grid": ("grid", "0,0.25,0.5,1.0", "homodyne thresholds B"),
        "beta-grid": ("str", "opt", "PNR displacements, or 'opt' / 'kennedy'"),
        "m": ("int", 1, "PNR threshold m"),
        "eta": ("float", 1.0, "efficiency"),
        "dark": ("float", 0.0, "mean dark counts per window (PNR)"),
        "visibility": ("float", 1.0, "displacement visibility (PNR)"),
        "n-trials": ("int", 100000, "trials per grid point"),
        "seed": ("int", None, "random seed (required)"),
        "workers": ("int", 1, "worker threads; output does not depend on it"),
        "eta-corrected": ("flag", False, "report alpha^2 scaled by eta"),
    },
    "mode-overlap": {
        "impulse-file": ("str", "", "measured impulse response (time_s, amplitude); overrides the filter"),
        "order": ("int", 7, "Chebyshev filter order"),
        "cutoff-hz": ("float", 10e6, "passband edge"),
        "ripple-db": ("float", 0.5, "passband ripple"),
        "dt": ("float", 1e-9, "time step of the synthesized response"),
        "window-s": ("float", 800e-9, "measurement window T"),
        "sample-rate": ("float", 20e6, "ADC sample rate"),
        "sampled": ("flag", False, "average the discrete samples instead of the continuous window"),
        "no-align": ("flag", False, "do not optimize the relative delay"),
    },
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: code={EXIT_USAGE} param=- message={json.dumps(message)}\n")
        sys.exit(EXIT_USAGE)


def build_parser():
    parser = _Parser(prog="coherent-receivers", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True
    for name, params in COMMANDS.items():
        p = sub.add_parser(name)
        p.add_argument("-o", "--output", default=None, help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--config", default=None, help="flat key = value file")
        for flag, (kind, default, help_text) in params.items():
            if kind == "flag":
                p.add_argument(f"--{flag}", action="store_const", const=True, default=None, help=help_text)
            else:
                p.add_argument(f"--{flag}", default=None, help=f"{help_text} (default: {default})")
    return parser


def read_config(path):
    values = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise CliError(EXIT_PARAM, "config", f"{path}:{lineno}: expected key = value")
                key, value = (s.strip() for s in line.split("=", 1))
                values[key.replace("_", "-")] = value
    except OSError as exc:
        raise CliError(EXIT_IO, "config", str(exc)) from None
    return values


def _convert(flag, kind, raw):
    try:
        if kind == "flag":
            return raw if isinstance(raw, bool) else str(raw).lower() in ("1", "true", "yes", "on")
        if kind == "float":
            return float(raw) if raw != "" else None
        if kind == "int":
            value = float(raw)
            if value != int(value):
                raise ValueError
            return int(value)
        if kind == "grid":
            return parse_grid(raw, flag)
        if kind.startswith("choice:"):
            options = kind.split(":", 1)[1].split(",")
            if raw not in options:
                raise CliError(EXIT_PARAM, flag, f"must be one of {options}, got {raw!r}")
            return raw
        return str(raw)
    except (TypeError, ValueError):
        raise CliError(EXIT_PARAM, flag, f"invalid value {raw!r}") from None


def resolve(args):
    """Merge defaults < config file < command line; returns (parsed, recorded) dicts."""
    params = COMMANDS[args.command]
    file_values = read_config(args.config) if args.config else {}
    unknown = set(file_values) - set(params) - {"output", "format"}
    if unknown:
        raise CliError(EXIT_PARAM, sorted(unknown)[0], "unknown configuration key")
    if args.output is None:
        args.output = file_values.get("output")
    raw, resolved = {}, {}
    for flag, (kind, default, _) in params.items():
        value = getattr(args, flag.replace("-", "_"))
        if value is None:
            value = file_values.get(flag, default)
        if value is None:
            raise CliError(EXIT_PARAM, flag, "missing required parameter")
        resolved[flag] = _convert(flag, kind, value)
        if flag in UNRECORDED:
            continue
        # grids are recorded as written; everything else as parsed
        raw[flag] = str(value) if kind == "grid" else resolved[flag]
    raw["format"] = args.format or file_values.get("format", "csv")
    if raw["format"] not in ("csv", "json"):
        raise CliError(EXIT_PARAM, "format", f"unknown format {raw['format']!r}")
    return resolved, raw


def _alpha_values(cfg):
    if cfg.get("alpha-sq") is not None:
        return [cfg["alpha-sq"]]
    values = cfg["alpha-sq-grid"]
    if not values:
        raise DomainError("alpha-sq-grid", "grid is empty")
    return values


def _alphabet(a2, param="alpha-sq-grid"):
    if a2 < 0:
        raise DomainError(param, f"alpha^2 must be >= 0, got {a2}")
    return SignalAlphabet.from_mean_photons(a2)


def _reported_alpha_sq(a2, cfg):
    return a2 * cfg["eta"] if cfg.get("eta-corrected") else a2


def _safe(fn, *args):
    try:
        return fn(*args)
    except FullyInconclusiveError:
        return float("nan")


def cmd_bounds(cfg):
    rows = []
    for a2 in _alpha_values(cfg):
        alphabet = _alphabet(a2)
        rows.append((a2, overlap(alphabet), helstrom_error(alphabet), usd_inconclusive(alphabet)))
    return ("alpha_sq", "sigma", "helstrom", "usd_pinc"), rows, {}


def cmd_hd_curve(cfg):
    rows = []
    for a2 in _alpha_values(cfg):
        alphabet = _alphabet(a2)
        for b in cfg["b-grid"]:
            hd = HomodyneConfig(b, cfg["eta"], cfg["electronic-noise"])
            p_inc = hd_inconclusive(alphabet, hd)
            rows.append((_reported_alpha_sq(a2, cfg), b, p_inc, _safe(hd_error, alphabet, hd),
                         chefles_bound_or_zero(alphabet, p_inc)))
    return ("alpha_sq", "B", "p_inc", "p_err", "chefles"), rows, {}


def _pnr_config(cfg, beta, m):
    return PnrConfig(beta, m, cfg["eta"], cfg["dark"], cfg["visibility"])


def cmd_pnr_curve(cfg):
    rows = []
    m = cfg["m"]
    for a2 in _alpha_values(cfg):
        alphabet = _alphabet(a2)
        for beta in cfg["beta-grid"]:
            rx = _pnr_config(cfg, beta, m)
            p_inc = pnr_inconclusive(alphabet, rx)
            rows.append((_reported_alpha_sq(a2, cfg), beta, m, p_inc, _safe(pnr_error, alphabet, rx),
                         chefles_bound_or_zero(alphabet, p_inc)))
    return ("alpha_sq", "beta", "m", "p_inc", "p_err", "chefles"), rows, {}


def cmd_optimize_beta(cfg):
    rows = []
    for a2 in _alpha_values(cfg):
        alphabet = _alphabet(a2)
        for m in cfg["m-list"]:
            if m != int(m) or m < 0:
                raise DomainError("m-list", f"thresholds must be non-negative integers, got {m}")
            m = int(m)
            opt = optimize_displacement(alphabet, m, _pnr_config(cfg, 0.0, m))
            kennedy = pnr_error(alphabet, _pnr_config(cfg, alphabet.alpha, m))
            rows.append((a2, m, opt.beta, opt.p_error, opt.p_inconclusive, kennedy, int(opt.multimodal)))
    return ("alpha_sq", "m", "beta_opt", "p_err", "p_inc", "kennedy_p_err", "multimodal"), rows, {}


def cmd_compare(cfg):
    rows = []
    for a2 in _alpha_values(cfg):
        row = matched_inc_comparison(_alphabet(a2), cfg["m"], cfg["eta"])
        rows.append((_reported_alpha_sq(a2, cfg), row.p_inc, row.p_err_pnr, row.p_err_hd, row.chefles))
    return ("alpha_sq", "p_inc", "p_err_pnr", "p_err_hd", "chefles"), rows, {}


def cmd_gaussian_scan(cfg):
    alphabet = _alphabet(cfg["alpha-sq"], "alpha-sq")
    r_grid = list(cfg["r-grid"]) + ([R_HOMODYNE] if cfg["homodyne-limit"] else [])
    rows, violations = [], 0
    for lam in cfg["lambda-b-grid"]:
        report = scan_optimality(alphabet, lam, r_grid, cfg["phi-grid"])
        rows += list(report.rows())
        violations += len(report.violations)
    return ("r", "phi", "lambda_B", "p_error", "p_inconclusive"), rows, {"optimality_violations": violations}


def cmd_simulate(cfg):
    rows = []
    for i, a2 in enumerate(_alpha_values(cfg)):
        alphabet = _alphabet(a2)
        if cfg["receiver"] == "homodyne":
            grid = cfg["b-grid"]

            def make(b):
                return HomodyneConfig(b, cfg["eta"])
        else:
            m = cfg["m"]
            spec = cfg["beta-grid"]
            if spec == "opt":
                grid = [optimize_displacement(alphabet, m, _pnr_config(cfg, 0.0, m)).beta]
            elif spec == "kennedy":
                grid = [alphabet.alpha]
            else:
                grid = parse_grid(spec, "beta-grid")

            def make(beta):
                return _pnr_config(cfg, beta, m)
        for row in sweep_operating_curve(alphabet, make, grid, cfg["n-trials"], cfg["seed"],
                                         stream=(i,), workers=cfg["workers"]):
            rec = row.as_record()
            rec["alpha_sq"] = _reported_alpha_sq(a2, cfg)
            rows.append(tuple(rec[c] for c in SWEEP_COLUMNS))
    return SWEEP_COLUMNS, rows, {}


def cmd_mode_overlap(cfg):
    window = WindowSpec(cfg["window-s"], cfg["sample-rate"])
    if cfg["impulse-file"]:
        try:
            g = read_impulse_response(cfg["impulse-file"]).normalized()
        except OSError as exc:
            raise CliError(EXIT_IO, "impulse-file", str(exc)) from None
        except ValueError as exc:
            raise DomainError("impulse-file", f"unreadable impulse response: {exc}") from None
    else:
        g = chebyshev_impulse(cfg["order"], cfg["cutoff-hz"], cfg["ripple-db"], cfg["dt"])
    g_eff = effective_response(g, window, sampled=cfg["sampled"])
    g12 = cross_correlation_g12(g_eff, window, align=not cfg["no-align"])
    rows = list(zip(g_eff.times.tolist(), g_eff.samples.tolist()))
    return ("time_s", "amplitude"), rows, {"g12": g12}


HANDLERS = {
    "bounds": cmd_bounds,
    "hd-curve": cmd_hd_curve,
    "pnr-curve": cmd_pnr_curve,
    "optimize-beta": cmd_optimize_beta,
    "compare": cmd_compare,
    "gaussian-scan": cmd_gaussian_scan,
    "simulate": cmd_simulate,
    "mode-overlap": cmd_mode_overlap,
}


def _fmt(x):
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def render(command, raw, columns, rows, meta, fmt):
    config = {k.replace("-", "_"): v for k, v in raw.items()}
    if fmt == "json":
        payload = {
            "tool": "coherent_receivers", "version": __version__, "command": command,
            "config": config, "meta": meta, "columns": list(columns),
            "rows": [[None if isinstance(x, float) and math.isnan(x) else
                      (x if isinstance(x, str) else float(x) if not isinstance(x, (int, np.integer)) else int(x))
                      for x in row] for row in rows],
        }
        return json.dumps(payload, sort_keys=True, indent=1) + "\n"
    out = io.StringIO()
    out.write(f"# coherent_receivers {__version__}\n")
    out.write(f"# command: {command}\n")
    out.write(f"# config: {json.dumps(config, sort_keys=True)}\n")
    for key in sorted(meta):
        out.write(f"# {key}: {_fmt(meta[key])}\n")
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(_fmt(x) for x in row) + "\n")
    return out.getvalue()


def _output_path(args, fmt):
    if args.output:
        return args.output
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir:
        return os.path.join(outdir, f"{args.command}.{fmt}")
    return None


def run_command(argv):
    """Parse argv, run the command and write its table; returns the exit status."""
    args = build_parser().parse_args(argv)
    try:
        cfg, raw = resolve(args)
        columns, rows, meta = HANDLERS[args.command](cfg)
        text = render(args.command, raw, columns, rows, meta, raw["format"])
        path = _output_path(args, raw["format"])
        if path is None:
            sys.stdout.write(text)
        else:
            try:
                with open(path, "w", newline="") as fh:
                    fh.write(text)
            except OSError as exc:
                raise CliError(EXIT_IO, "output", str(exc)) from None
    except CliError as exc:
        _report(exc.code, exc.param, exc.message)
        return exc.code
    except DomainError as exc:
        _report(EXIT_PARAM, exc.param, str(exc))
        return EXIT_PARAM
    return 0


def _report(code, param, message):
    sys.stderr.write(f"error: code={code} param={param} message={json.dumps(message)}\n")


def main(argv=None):
    return run_command(sys.argv[1:] if argv is None else argv)
