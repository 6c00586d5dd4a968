"""``axc`` command line: background, coherence, sweep, verify.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 physics-regime error (perturbativity or asymptotic-regime guard).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .axion import (
    HALO_SPEED,
    LOCAL_DM_DENSITY_GEV_CM3,
    AxionBackground,
    amplitude,
    coherent_amplitude,
    de_broglie_wavelength,
    energy_density,
    occupation_number,
)
from .coherence import (
    coherence_estimate,
    coherence_exact,
    coherence_longtime,
    electron_coupling,
    electron_detector_coherence,
    l1_coherence,
    reduced_density_matrix,
    saddle_parameter,
)
from .detector import DetectorConfig, doppler_frequency
from .errors import DomainError, PerturbativityError, PerturbativityWarning, RegimeError
from .oracle import run_suites
from .response import gaussian_exponent
from .units import (
    EV_PER_GEV,
    HBAR_C_EV_CM,
    HBAR_EV_S,
    density_eV4_to_GeV_cm3,
    density_GeV_cm3_to_eV4,
    length_inverse_eV_to_cm,
    speed_from_gamma,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_REGIME = 3

CONFIG_ENV = "AXC_CONFIG"


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# quantities with laboratory unit suffixes

_ENERGY = {"": 1.0, "ev": 1.0, "mev": 1e-3, "kev": 1e3, "gev": 1e9}
_TIME = {
    "": 1.0,
    "/ev": 1.0,
    "1/ev": 1.0,
    "ev^-1": 1.0,
    "s": 1.0 / HBAR_EV_S,
    "ms": 1e-3 / HBAR_EV_S,
    "us": 1e-6 / HBAR_EV_S,
    "ns": 1e-9 / HBAR_EV_S,
}
_LENGTH = {
    "": 1.0,
    "/ev": 1.0,
    "1/ev": 1.0,
    "ev^-1": 1.0,
    "cm": 1.0 / HBAR_C_EV_CM,
    "m": 1e2 / HBAR_C_EV_CM,
    "mm": 1e-1 / HBAR_C_EV_CM,
    "um": 1e-4 / HBAR_C_EV_CM,
    "nm": 1e-7 / HBAR_C_EV_CM,
}
_DENSITY = {"": 1.0, "gev/cm3": 1.0, "gev/cm^3": 1.0, "ev4": None, "ev^4": None}
_COUPLING = {"": 1.0, "ev^-2": 1.0, "/ev2": 1.0, "/ev^2": 1.0}
_ANGLE = {"": 1.0, "rad": 1.0, "pi": math.pi, "deg": math.pi / 180.0}
_PLAIN = {"": 1.0}

_NUMBER = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*(\S*)\s*$")


def _parse_scalar(key, text, table):
    m = _NUMBER.match(text)
    if not m:
        raise InputError(f"{key}: cannot parse {text!r} as a number with optional unit")
    value, unit = float(m.group(1)), m.group(2).lower()
    if unit not in table:
        allowed = ", ".join(sorted(u for u in table if u)) or "none"
        raise InputError(f"{key}: unknown unit {m.group(2)!r} (allowed: {allowed})")
    factor = table[unit]
    if table is _DENSITY:
        # eV^4 input is already natural; convert GeV/cm^3 here
        return value if factor is None else density_GeV_cm3_to_eV4(value).value
    return value * factor


def _parse_vector(key, text):
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    if len(parts) != 3:
        raise InputError(f"{key}: expected three comma-separated components, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise InputError(f"{key}: non-numeric component in {text!r}") from None


@dataclass(frozen=True)
class Key:
    kind: dict | str
    unit: str
    help: str


KEYS = {
    "m_a": Key(_ENERGY, "eV", "axion mass"),
    "rho_dm": Key(_DENSITY, "eV^4", "local dark-matter density (default 0.3 GeV/cm3)"),
    "v_a": Key(_PLAIN, "1", "axion speed in units of c"),
    "theta": Key(_ANGLE, "rad", "initial phase (accepts rad, deg, pi)"),
    "direction": Key("vector", "1", "axion momentum direction"),
    "Omega": Key(_ENERGY, "eV", "detector energy gap (default: resonant with the Doppler-shifted mode)"),
    "T": Key(_TIME, "eV^-1", "interaction duration"),
    "R": Key(_LENGTH, "eV^-1", "detector size"),
    "gamma": Key(_PLAIN, "1", "detector Lorentz factor (motion along +x)"),
    "velocity": Key("vector", "1", "detector 3-velocity"),
    "lambda": Key(_COUPLING, "eV^-2", "detector coupling"),
}

DEFAULTS = {
    "m_a": 1e-6,
    "rho_dm": density_GeV_cm3_to_eV4(LOCAL_DM_DENSITY_GEV_CM3).value,
    "v_a": HALO_SPEED,
    "theta": 0.0,
    "direction": (0.0, 0.0, 1.0),
    "Omega": None,
    "T": 1.0 / HBAR_EV_S,
    "R": 0.0,
    "gamma": None,
    "velocity": None,
    "lambda": 1.0,
}


def parse_value(key, text):
    if key not in KEYS:
        raise InputError(f"unknown parameter {key!r}")
    if text is None or not str(text).strip():
        raise InputError(f"missing value for required key {key!r}")
    kind = KEYS[key].kind
    if kind == "vector":
        return _parse_vector(key, text)
    return _parse_scalar(key, str(text), kind)


def read_config(path):
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc.strerror}") from None
    out = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = (s.strip() for s in line.partition("="))
        try:
            out[key] = parse_value(key, value)
        except InputError as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from None
    return out


def resolve_params(args) -> dict:
    """Defaults < config file (AXC_CONFIG or --config) < command-line flags."""
    params = dict(DEFAULTS)
    path = args.config or os.environ.get(CONFIG_ENV)
    if path:
        params.update(read_config(path))
    for key in KEYS:
        text = getattr(args, key, None)
        if text is not None:
            params[key] = parse_value(key, text)
    if params["gamma"] is not None and params["velocity"] is not None:
        raise InputError("give either gamma or velocity, not both")
    return params


def build(params):
    """Turn a resolved parameter dict into (background, detector config, amplitude)."""
    try:
        bg = AxionBackground(
            m_a=params["m_a"],
            rho_dm=params["rho_dm"],
            v_a=params["v_a"],
            theta=params["theta"],
            direction=params["direction"],
        )
        if params["velocity"] is not None:
            velocity = params["velocity"]
        elif params["gamma"] is not None:
            velocity = (speed_from_gamma(params["gamma"]), 0.0, 0.0)
        else:
            velocity = (0.0, 0.0, 0.0)
        amp = coherent_amplitude(bg)
        Omega = params["Omega"]
        if Omega is None:
            probe = DetectorConfig(Omega=1.0, T=1.0, velocity=velocity)
            Omega = doppler_frequency(probe, amp).value
        cfg = DetectorConfig(Omega=Omega, T=params["T"], R=params["R"], velocity=velocity, lam=params["lambda"])
    except DomainError as exc:
        raise InputError(str(exc)) from None
    return bg, cfg, amp


# ---------------------------------------------------------------------------
# evaluation


def background_outputs(params):
    bg, _, amp = build(params)
    A = amplitude(bg).value
    out = {
        "A": A,
        "A_GeV": A / EV_PER_GEV,
        "rho_a": energy_density(A, bg.m_a).value,
        "rho_a_GeV_cm3": density_eV4_to_GeV_cm3(energy_density(A, bg.m_a)),
        "omega_p": amp.omega_p,
        "p": bg.momentum,
    }
    if bg.v_a > 0:
        lam_db = de_broglie_wavelength(bg)
        out["occupation"] = occupation_number(bg)
        out["de_broglie"] = lam_db.value
        out["de_broglie_cm"] = length_inverse_eV_to_cm(lam_db)
    else:
        out["occupation"] = math.inf
        out["de_broglie"] = math.inf
        out["de_broglie_cm"] = math.inf
    return out


BACKGROUND_UNITS = {
    "A": "eV",
    "A_GeV": "GeV",
    "rho_a": "eV^4",
    "rho_a_GeV_cm3": "GeV/cm^3",
    "omega_p": "eV",
    "p": "eV",
    "occupation": "1",
    "de_broglie": "eV^-1",
    "de_broglie_cm": "cm",
}


def coherence_outputs(params, electron=False):
    bg, cfg, amp = build(params)
    w = doppler_frequency(cfg, amp).value
    exact = coherence_exact(cfg, amp)
    out = {
        "omega_tilde": w,
        "Omega": cfg.Omega,
        "gamma": cfg.gamma,
        "A": amp.A,
        "C": exact.C,
        "C_max": exact.C_max,
        "C_min": exact.C_min,
        "logC": exact.log_C,
        "theta": exact.theta,
        "X": saddle_parameter(cfg, amp),
        "C_estimate": coherence_estimate(cfg, bg),
    }
    try:
        out["C_longtime"] = coherence_longtime(cfg, amp).C
    except RegimeError:
        out["C_longtime"] = None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PerturbativityWarning)
        rho = reduced_density_matrix(cfg, amp)
    out["C_density_matrix"] = l1_coherence(rho)
    out["excited_population"] = rho.excited_population
    out["perturbativity_warning"] = bool(caught)
    if electron:
        T_s = cfg.T * HBAR_EV_S
        out["lambda_electron"] = electron_coupling(T_s).value
        out["C_electron"] = electron_detector_coherence(
            T_s, gamma=cfg.gamma, rho_GeV_cm3=density_eV4_to_GeV_cm3(bg.rho_dm)
        )
    return out


COHERENCE_UNITS = {
    "omega_tilde": "eV",
    "Omega": "eV",
    "gamma": "1",
    "A": "eV",
    "C": "1",
    "C_max": "1",
    "C_min": "1",
    "logC": "1",
    "theta": "rad",
    "X": "1",
    "C_estimate": "1",
    "C_longtime": "1",
    "C_density_matrix": "1",
    "excited_population": "1",
    "perturbativity_warning": "bool",
    "lambda_electron": "eV^-2",
    "C_electron": "1",
}


def run_record(command, params, outputs, units):
    return {
        "command": command,
        "inputs": {k: (list(v) if isinstance(v, tuple) else v) for k, v in params.items()},
        "outputs": outputs,
        "units": {
            "inputs": {k: KEYS[k].unit for k in params},
            "outputs": {k: units[k] for k in outputs},
        },
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not JSON serialisable: {obj!r}")


def _dump(record, fh):
    json.dump(record, fh, indent=2, default=_json_default, allow_nan=True)
    fh.write("\n")


# ---------------------------------------------------------------------------
# sweep

SWEEP_PARAMS = {
    "axion_mass": "m_a",
    "energy_gap": "Omega",
    "duration": "T",
    "lorentz_gamma": "gamma",
    "phase": "theta",
    "velocity": "velocity",
}

CSV_COLUMNS = ["param", "value", "C", "C_max", "C_min", "logC", "omega_tilde", "exponent_res", "exponent_off"]


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    start: float
    stop: float
    points: int
    scale: str = "linear"

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMS:
            raise InputError(f"unknown sweep parameter {self.parameter!r}; choose from {', '.join(SWEEP_PARAMS)}")
        if self.points < 2:
            raise InputError(f"a sweep needs at least 2 points, got {self.points}")
        if not self.start < self.stop:
            raise InputError(f"sweep start ({self.start!r}) must be below stop ({self.stop!r})")
        if self.scale not in ("linear", "log"):
            raise InputError(f"scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and not self.start > 0:
            raise InputError("log-scale sweeps need a positive start")

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


def _sweep_unit_table(parameter):
    return {
        "axion_mass": _ENERGY,
        "energy_gap": _ENERGY,
        "duration": _TIME,
        "lorentz_gamma": _PLAIN,
        "phase": _ANGLE,
        "velocity": _PLAIN,
    }[parameter]


def sweep_row(spec: SweepSpec, params, value):
    p = dict(params)
    if spec.parameter == "velocity":
        p["velocity"], p["gamma"] = (float(value), 0.0, 0.0), None
    elif spec.parameter == "lorentz_gamma":
        p["gamma"], p["velocity"] = float(value), None
    else:
        p[SWEEP_PARAMS[spec.parameter]] = float(value)
    _, cfg, amp = build(p)
    w = doppler_frequency(cfg, amp).value
    res = coherence_exact(cfg, amp)
    return {
        "param": spec.parameter,
        "value": float(value),
        "C": res.C,
        "C_max": res.C_max,
        "C_min": res.C_min,
        "logC": res.log_C,
        "omega_tilde": w,
        "exponent_res": float(gaussian_exponent(w, cfg.Omega, cfg.T, +1)),
        "exponent_off": float(gaussian_exponent(w, cfg.Omega, cfg.T, -1)),
    }


def run_sweep(spec: SweepSpec, params, jobs=1):
    grid = spec.grid()
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            # map() yields in submission order, so rows stay ascending
            return list(pool.map(lambda v: sweep_row(spec, params, v), grid))
    return [sweep_row(spec, params, v) for v in grid]


def _fmt(x):
    if isinstance(x, str):
        return x
    # + 0.0 folds -0.0 into 0.0
    return format(float(x) + 0.0, ".17g")


def write_csv(rows, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])


SWEEP_UNITS = {
    "value": "natural units of the swept parameter",
    "C": "1",
    "C_max": "1",
    "C_min": "1",
    "logC": "1",
    "omega_tilde": "eV",
    "exponent_res": "1",
    "exponent_off": "1",
}


# ---------------------------------------------------------------------------
# argument parsing


def _add_params(p, formats=("text", "json")):
    g = p.add_argument_group("physical parameters (unit suffixes allowed, e.g. 1e-6eV, 1s, 0.3GeV/cm3)")
    for key, spec in KEYS.items():
        g.add_argument(f"--{key}", dest=key, metavar="VALUE", help=spec.help)
    p.add_argument("--config", help=f"key = value config file (default: ${CONFIG_ENV})")
    p.add_argument("--format", choices=formats, default=formats[0])


def make_parser():
    parser = argparse.ArgumentParser(prog="axc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"axc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("background", help="axion amplitude, occupation number, de Broglie wavelength")
    _add_params(p)

    p = sub.add_parser("coherence", help="harvested coherence for one configuration")
    _add_params(p)
    p.add_argument("--electron", action="store_true", help="atomic-electron detector, lambda = g_ae T")

    p = sub.add_parser("sweep", help="tabulate the coherence over a parameter grid")
    _add_params(p, formats=("csv", "json"))
    p.add_argument("--param", required=True, choices=sorted(SWEEP_PARAMS))
    p.add_argument("--start", required=True)
    p.add_argument("--stop", required=True)
    p.add_argument("--points", required=True, type=int)
    p.add_argument("--scale", choices=("linear", "log"), default="linear")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output", "-o", help="write to a file instead of stdout")

    p = sub.add_parser("verify", help="run the randomised oracle suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=1000, help="number of random tuples (default 1000)")
    return parser


def _print_table(title, outputs, units, out):
    print(title, file=out)
    width = max(len(k) for k in outputs)
    for k, v in outputs.items():
        if v is None:
            text = "n/a"
        elif isinstance(v, bool):
            text = str(v)
        else:
            text = f"{v:.6g}"
        unit = "" if units[k] in ("1", "bool") else f" {units[k]}"
        print(f"  {k:<{width}}  {text}{unit}", file=out)


def cmd_background(args, out):
    params = resolve_params(args)
    outputs = background_outputs(params)
    if args.format == "json":
        _dump(run_record("background", params, outputs, BACKGROUND_UNITS), out)
    else:
        _print_table("axion background", outputs, BACKGROUND_UNITS, out)
    return EXIT_OK


def cmd_coherence(args, out):
    params = resolve_params(args)
    if args.electron and getattr(args, "lambda") is None:
        T_s = params["T"] * HBAR_EV_S
        params["lambda"] = electron_coupling(T_s).value
    outputs = coherence_outputs(params, electron=args.electron)
    if args.format == "json":
        _dump(run_record("coherence", params, outputs, COHERENCE_UNITS), out)
    else:
        _print_table("harvested coherence", outputs, COHERENCE_UNITS, out)
    return EXIT_OK


def cmd_sweep(args, out):
    params = resolve_params(args)
    table = _sweep_unit_table(args.param)
    spec = SweepSpec(
        parameter=args.param,
        start=_parse_scalar("start", args.start, table),
        stop=_parse_scalar("stop", args.stop, table),
        points=args.points,
        scale=args.scale,
    )
    rows = run_sweep(spec, params, jobs=max(1, args.jobs))
    buf = io.StringIO()
    if args.format == "json":
        record = run_record("sweep", params, {"rows": rows}, {"rows": "see units.columns"})
        record["inputs"]["sweep"] = {
            "parameter": spec.parameter,
            "start": spec.start,
            "stop": spec.stop,
            "points": spec.points,
            "scale": spec.scale,
        }
        record["units"]["columns"] = SWEEP_UNITS
        _dump(record, buf)
    else:
        write_csv(rows, buf)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        out.write(buf.getvalue())
    return EXIT_OK


def cmd_verify(args, out):
    if args.n < 1:
        raise InputError("--n must be positive")
    reports = run_suites(seed=args.seed, n=args.n)
    ok = True
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(
            f"{status}  {r.name}: max deviation {r.max_deviation:.3e} (tol {r.tolerance:.0e}), "
            f"{r.failures}/{r.checked} over tolerance",
            file=out,
        )
        if not r.passed:
            ok = False
            print(f"      worst tuple: {r.worst.describe()}", file=out)
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {"background": cmd_background, "coherence": cmd_coherence, "sweep": cmd_sweep, "verify": cmd_verify}


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except InputError as exc:
        print(f"axc: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PerturbativityError, RegimeError) as exc:
        print(f"axc: physics-regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME


def entry():
    sys.exit(main())
