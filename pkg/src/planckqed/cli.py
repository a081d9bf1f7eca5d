"""Command-line front end.

A run is described by a JSON document::

    {
      "command": "eos-sweep",
      "parameters": {"T": {"min": 1e-3, "max": 1e-1, "count": 5, "scale": "log"}},
      "output": {"path": "eos.csv", "format": "csv"},
      "alpha": 0.0072973525693,
      "seed": 0
    }

Numeric parameters accept a number, a list of numbers or a sweep object
``{min, max, count, scale}``; several swept parameters form a Cartesian
grid in declaration order.  The resolved configuration, with every default
filled in, is echoed into the output metadata.

Exit status is 0 on success, 2 for an unreadable or invalid configuration
and 3 when a numerical routine fails on some row.
"""

from __future__ import annotations

import argparse
import copy
import io
import itertools
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import __version__
from .coulomb import ChargeConfig, config_energy, kernel, self_energy, to_planck_energy
from .exceptions import ConvergenceError, DomainError, IntegrationError
from .fieldmodes import (HISTORY_COLUMNS, Mode, ModeSet, Trajectory, integrate,
                         lorenz_initial_state)
from .modesum import (kernel_mc_oracle, kernel_quadrature_oracle, state_count,
                      zero_point_energy, zero_point_to_self_energy_ratio)
from .photongas import (ThermoPoint, bose_mean_energy, classical_reference, mean_energy,
                        occupancy, state_functions)
from .units import DEFAULT_ALPHA, make_scale

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class ConfigError(ValueError):
    """Invalid run configuration; ``errors`` lists every problem found."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class NumericError(RuntimeError):
    def __init__(self, row, message):
        self.row = row
        super().__init__(f"row {row}: {message}")


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class _Check:
    text: str
    test: Any


POSITIVE = _Check("must be > 0", lambda x: x > 0)
NON_NEGATIVE = _Check("must be >= 0", lambda x: x >= 0)
NON_POSITIVE = _Check("must be <= 0", lambda x: x <= 0)
UNIT_INTERVAL = _Check("must lie in [0, 1]", lambda x: 0 <= x <= 1)
DEGENERACY = _Check("must be 1 or 2", lambda x: x in (1, 2))


@dataclass(frozen=True)
class _Field:
    kind: str
    default: Any = None
    required: bool = False
    check: _Check | None = None
    choices: tuple = ()
    minimum: int | None = None


COMMANDS = {
    "coulomb": {
        "charges": _Field("charges", required=True),
        "include_self": _Field("bool", True),
    },
    "kernel-sweep": {
        "r": _Field("values", required=True, check=NON_NEGATIVE),
        "k_star": _Field("number", 1.0, check=POSITIVE),
        "oracle": _Field("choice", "none", choices=("none", "quadrature", "mc")),
        "n_samples": _Field("int", 100_000, minimum=1000),
    },
    "self-energy": {"e": _Field("values", 1.0)},
    "zero-point": {"V": _Field("values", 1.0, check=NON_NEGATIVE)},
    "ratio": {"V": _Field("values", 1.0, check=NON_NEGATIVE)},
    "state-count": {"V": _Field("values", 1.0, check=NON_NEGATIVE)},
    "spectrum": {
        "p": _Field("values", required=True, check=UNIT_INTERVAL),
        "T": _Field("values", required=True, check=POSITIVE),
        "mu": _Field("values", 0.0, check=NON_POSITIVE),
    },
    "eos-sweep": {
        "T": _Field("values", required=True, check=POSITIVE),
        "mu": _Field("values", 0.0, check=NON_POSITIVE),
        "V": _Field("values", 1.0, check=POSITIVE),
        "g_s": _Field("values", 2, check=DEGENERACY),
    },
    "modes": {
        "modes": _Field("modeset", required=True),
        "charges": _Field("trajectories", []),
        "V": _Field("number", 1.0, check=POSITIVE),
        "dt": _Field("number", required=True, check=POSITIVE),
        "n_steps": _Field("int", required=True, minimum=0),
        "sample_every": _Field("int", 1, minimum=1),
        "initial": _Field("choice", "lorenz", choices=("lorenz", "zero")),
    },
}

TOP_LEVEL = ("command", "parameters", "output", "alpha", "seed")
FORMATS = ("csv", "json")
SCALES = ("linear", "log")
TRAJECTORY_KEYS = {
    "static": {"e", "kind", "center"},
    "circular": {"e", "kind", "center", "amplitude", "frequency", "axis", "phase"},
    "linear-oscillation": {"e", "kind", "center", "amplitude", "frequency", "phase"},
    "custom-sampled": {"e", "kind", "center", "times", "positions"},
}


def _is_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _is_vector(x):
    return isinstance(x, list) and len(x) == 3 and all(_is_number(c) for c in x)


class _Validator:
    def __init__(self):
        self.errors = []

    def error(self, where, message):
        self.errors.append(f"{where}: {message}")

    def unknown(self, where, obj, allowed):
        for key in obj:
            if key not in allowed:
                self.error(f"{where}.{key}" if where else key, "unknown key")

    def number(self, where, x, check=None):
        if not _is_number(x):
            self.error(where, f"expected a finite number, got {x!r}")
            return None
        if check is not None and not check.test(x):
            self.error(where, f"{check.text} (got {x!r})")
            return None
        return float(x)

    def integer(self, where, x, minimum=None):
        if isinstance(x, float) and x.is_integer():
            x = int(x)
        if not isinstance(x, int) or isinstance(x, bool):
            self.error(where, f"expected an integer, got {x!r}")
            return None
        if minimum is not None and x < minimum:
            self.error(where, f"must be >= {minimum} (got {x})")
            return None
        return x

    def values(self, where, x, check):
        if isinstance(x, dict):
            self.unknown(where, x, ("min", "max", "count", "scale"))
            out = {"scale": "linear", **x}
            for key in ("min", "max", "count"):
                if key not in x:
                    self.error(f"{where}.{key}", "missing")
            lo = self.number(f"{where}.min", x["min"], check) if "min" in x else None
            hi = self.number(f"{where}.max", x["max"], check) if "max" in x else None
            if "count" in x:
                out["count"] = self.integer(f"{where}.count", x["count"], minimum=1)
            if out["scale"] not in SCALES:
                self.error(f"{where}.scale", f"must be one of {list(SCALES)}")
            if lo is not None and hi is not None:
                if lo > hi:
                    self.error(where, f"min must be <= max (got {lo} > {hi})")
                if out["scale"] == "log" and lo <= 0:
                    self.error(f"{where}.min", "log sweeps need min > 0")
            return out
        if isinstance(x, list):
            if not x:
                self.error(where, "empty list")
            for i, v in enumerate(x):
                self.number(f"{where}[{i}]", v, check)
            return list(x)
        self.number(where, x, check)
        return x

    def charges(self, where, x):
        if not isinstance(x, list):
            self.error(where, "expected a list of {e, r} objects")
            return x
        for i, c in enumerate(x):
            w = f"{where}[{i}]"
            if not isinstance(c, dict):
                self.error(w, "expected an object")
                continue
            self.unknown(w, c, ("e", "r"))
            if "e" not in c:
                self.error(f"{w}.e", "missing")
            else:
                self.number(f"{w}.e", c["e"])
            if "r" not in c:
                self.error(f"{w}.r", "missing")
            elif not _is_vector(c["r"]):
                self.error(f"{w}.r", "expected a 3-vector of finite numbers")
        return x

    def modeset(self, where, x):
        if not isinstance(x, dict) or len(x) != 1 or not set(x) <= {"shell", "explicit"}:
            self.error(where, "expected exactly one of {shell: {k, count}} or "
                              "{explicit: [{k, theta}]}")
            return x
        if "shell" in x:
            w = f"{where}.shell"
            shell = x["shell"]
            if not isinstance(shell, dict):
                self.error(w, "expected an object")
                return x
            self.unknown(w, shell, ("k", "count"))
            for key in ("k", "count"):
                if key not in shell:
                    self.error(f"{w}.{key}", "missing")
            if "k" in shell:
                self.number(f"{w}.k", shell["k"], POSITIVE)
            if "count" in shell:
                self.integer(f"{w}.count", shell["count"], minimum=1)
            return x
        modes = x["explicit"]
        if not isinstance(modes, list) or not modes:
            self.error(f"{where}.explicit", "expected a non-empty list")
            return x
        out = []
        for i, m in enumerate(modes):
            w = f"{where}.explicit[{i}]"
            if not isinstance(m, dict):
                self.error(w, "expected an object")
                continue
            self.unknown(w, m, ("k", "theta"))
            if not _is_vector(m.get("k")) or not any(m["k"]):
                self.error(f"{w}.k", "expected a non-zero 3-vector")
            out.append({"theta": 0.0, **m})
            self.number(f"{w}.theta", out[-1]["theta"])
        return {"explicit": out}

    def trajectories(self, where, x):
        if not isinstance(x, list):
            self.error(where, "expected a list of moving charges")
            return x
        out = []
        for i, c in enumerate(x):
            w = f"{where}[{i}]"
            if not isinstance(c, dict):
                self.error(w, "expected an object")
                continue
            kind = c.get("kind", "static")
            if kind not in TRAJECTORY_KEYS:
                self.error(f"{w}.kind", f"must be one of {sorted(TRAJECTORY_KEYS)}")
                continue
            self.unknown(w, c, TRAJECTORY_KEYS[kind])
            c = {"kind": kind, "center": [0.0, 0.0, 0.0], **c}
            if kind == "circular":
                c = {"axis": [0.0, 0.0, 1.0], "phase": 0.0, **c}
            elif kind == "linear-oscillation":
                c = {"phase": 0.0, **c}
            if "e" not in c:
                self.error(f"{w}.e", "missing")
            else:
                self.number(f"{w}.e", c["e"])
            if not _is_vector(c["center"]):
                self.error(f"{w}.center", "expected a 3-vector")
            if kind == "circular":
                for key, check in (("amplitude", NON_NEGATIVE), ("frequency", None),
                                   ("phase", None)):
                    if key not in c:
                        self.error(f"{w}.{key}", "missing")
                    else:
                        self.number(f"{w}.{key}", c[key], check)
                if not _is_vector(c["axis"]) or not any(c["axis"]):
                    self.error(f"{w}.axis", "expected a non-zero 3-vector")
                elif _is_number(c.get("amplitude")) and _is_number(c.get("frequency")) \
                        and abs(c["amplitude"] * c["frequency"]) >= 1:
                    self.error(w, "speed amplitude*frequency must be < 1")
            elif kind == "linear-oscillation":
                if not _is_vector(c.get("amplitude")):
                    self.error(f"{w}.amplitude", "expected a 3-vector")
                for key in ("frequency", "phase"):
                    if key not in c:
                        self.error(f"{w}.{key}", "missing")
                    else:
                        self.number(f"{w}.{key}", c[key])
            elif kind == "custom-sampled":
                times, pos = c.get("times"), c.get("positions")
                if not (isinstance(times, list) and len(times) >= 2
                        and all(_is_number(t) for t in times)
                        and all(b > a for a, b in zip(times, times[1:]))):
                    self.error(f"{w}.times", "expected >= 2 strictly increasing numbers")
                elif not (isinstance(pos, list) and len(pos) == len(times)
                          and all(_is_vector(p) for p in pos)):
                    self.error(f"{w}.positions", "expected one 3-vector per time")
            out.append(c)
        return out


def validate(config_text):
    """Parse and validate a JSON run configuration.

    Every problem is collected before raising :class:`ConfigError`.
    Returns a :class:`RunConfig` with defaults filled in.
    """
    if isinstance(config_text, (bytes, bytearray)):
        try:
            config_text = config_text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ConfigError([f"config is not UTF-8: {exc}"]) from None
    if isinstance(config_text, str):
        if not config_text.strip():
            raw = {}
        else:
            try:
                raw = json.loads(config_text)
            except json.JSONDecodeError as exc:
                raise ConfigError([f"invalid JSON: {exc}"]) from None
    else:
        raw = config_text
    return validate_dict(raw)


def validate_dict(raw):
    v = _Validator()
    if not isinstance(raw, dict):
        raise ConfigError(["config must be a JSON object"])
    v.unknown("", raw, TOP_LEVEL)

    command = raw.get("command")
    if command is None:
        v.errors.append("command missing")
    elif command not in COMMANDS:
        v.error("command", f"unknown command {command!r}; expected one of {sorted(COMMANDS)}")
        command = None

    alpha = raw.get("alpha", DEFAULT_ALPHA)
    if _is_number(alpha):
        if not 0 < alpha < 1:
            v.error("alpha", f"must lie in (0, 1) (got {alpha!r})")
    else:
        v.error("alpha", f"expected a number, got {alpha!r}")

    seed = v.integer("seed", raw.get("seed", 0), minimum=0)
    if seed is not None and seed >= 2 ** 64:
        v.error("seed", "must fit in 64 bits")

    output = raw.get("output", {})
    if isinstance(output, dict):
        v.unknown("output", output, ("path", "format"))
        output = {"path": None, "format": "csv", **output}
        if output["format"] not in FORMATS:
            v.error("output.format", f"must be one of {list(FORMATS)}")
        if output["path"] is not None and not isinstance(output["path"], str):
            v.error("output.path", "expected a string")
    else:
        v.error("output", "expected an object")

    params = raw.get("parameters", {})
    resolved = {}
    if not isinstance(params, dict):
        v.error("parameters", "expected an object")
    elif command is not None:
        fields = COMMANDS[command]
        v.unknown("parameters", params, fields)
        for name, spec in fields.items():
            where = f"parameters.{name}"
            if name not in params:
                if spec.required:
                    v.error(where, "missing")
                    continue
                value = copy.deepcopy(spec.default)
            else:
                value = params[name]
            if spec.kind == "values":
                value = v.values(where, value, spec.check)
            elif spec.kind == "number":
                v.number(where, value, spec.check)
            elif spec.kind == "int":
                value = v.integer(where, value, spec.minimum)
            elif spec.kind == "bool":
                if not isinstance(value, bool):
                    v.error(where, f"expected true or false, got {value!r}")
            elif spec.kind == "choice":
                if value not in spec.choices:
                    v.error(where, f"must be one of {list(spec.choices)} (got {value!r})")
            else:
                value = getattr(v, spec.kind)(where, value)
            resolved[name] = value

    if v.errors:
        raise ConfigError(v.errors)
    return RunConfig(command=command, parameters=resolved, alpha=float(alpha),
                     seed=seed, output_path=output["path"], output_format=output["format"])


@dataclass
class RunConfig:
    command: str
    parameters: dict
    alpha: float = DEFAULT_ALPHA
    seed: int = 0
    output_path: str | None = None
    output_format: str = "csv"

    def to_dict(self):
        return {
            "command": self.command,
            "parameters": copy.deepcopy(self.parameters),
            "output": {"path": self.output_path, "format": self.output_format},
            "alpha": self.alpha,
            "seed": self.seed,
        }


# ---------------------------------------------------------------------------
# tables

@dataclass
class SweepTable:
    headers: list
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def append(self, row):
        if len(row) != len(self.headers):
            raise ValueError(f"row width {len(row)} != header width {len(self.headers)}")
        self.rows.append(list(row))

    def to_csv(self):
        buf = io.StringIO()
        for key, value in self.metadata.items():
            buf.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
        buf.write(",".join(self.headers) + "\n")
        for row in self.rows:
            buf.write(",".join(_format_cell(x) for x in row) + "\n")
        return buf.getvalue()

    def to_json(self):
        doc = {"metadata": self.metadata, "headers": self.headers, "rows": self.rows}
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"

    def render(self, fmt):
        return self.to_csv() if fmt == "csv" else self.to_json()


def _format_cell(x):
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    # shortest repr round-trips exactly
    return repr(float(x))


def expand(spec):
    """Values of a number / list / sweep parameter, in sweep order."""
    if isinstance(spec, dict):
        lo, hi, n = spec["min"], spec["max"], spec["count"]
        if n == 1:
            return [float(lo)]
        if spec.get("scale", "linear") == "log":
            return [float(x) for x in np.geomspace(lo, hi, n)]
        return [float(x) for x in np.linspace(lo, hi, n)]
    if isinstance(spec, list):
        return list(spec)
    return [spec]


def _grid(params, names):
    return itertools.product(*(expand(params[n]) for n in names))


def _rows(table, params, names, compute):
    for i, values in enumerate(_grid(params, names)):
        try:
            out = compute(*values)
        except (DomainError, ConvergenceError, IntegrationError, ValueError) as exc:
            raise NumericError(i, f"{dict(zip(names, values))}: {exc}") from exc
        if not all(math.isfinite(float(x)) for x in out):
            raise NumericError(i, f"{dict(zip(names, values))}: non-finite result")
        table.append([*values, *out])


def _coulomb(cfg, scale):
    p = cfg.parameters
    charges = ChargeConfig.from_pairs((c["e"], c["r"]) for c in p["charges"])
    table = SweepTable(["n_charges", "energy_e2_per_Lstar", "energy_Estar"])
    energy = config_energy(charges, include_self=p["include_self"])
    table.append([len(charges), energy, to_planck_energy(energy, scale)])
    return table


def _kernel_sweep(cfg, scale):
    p = cfg.parameters
    k_star = p["k_star"]
    headers = ["r", "kernel", "r_kernel"]
    if p["oracle"] == "quadrature":
        headers += ["kernel_quadrature"]
    elif p["oracle"] == "mc":
        headers += ["kernel_mc", "kernel_mc_std_error"]
    table = SweepTable(headers)

    def compute(r):
        kr = k_star * kernel(k_star * r)
        out = [kr, r * kr]
        if p["oracle"] == "quadrature":
            out.append(kernel_quadrature_oracle(r, k_star))
        elif p["oracle"] == "mc":
            est = kernel_mc_oracle([0.0, 0.0, 0.0], [r, 0.0, 0.0], k_star,
                                   p["n_samples"], cfg.seed)
            out += [est.mean, est.std_error]
        return out

    _rows(table, p, ["r"], compute)
    return table


def _simple(headers, names, func):
    def handler(cfg, scale):
        table = SweepTable(headers)
        _rows(table, cfg.parameters, names, lambda *a: func(scale, *a))
        return table
    return handler


def _eos(cfg, scale):
    table = SweepTable(["T", "mu", "V", "g_s", "F", "U", "N", "S", "P",
                        "F_ref", "U_ref", "N_ref"])

    def compute(T, mu, V, g_s):
        point = ThermoPoint(T=T, mu=mu, V=V, g_s=int(g_s))
        sf = state_functions(point)
        ref = classical_reference(point)
        return [sf.F, sf.U, sf.N, sf.S, sf.P, ref.F, ref.U, ref.N]

    _rows(table, cfg.parameters, ["T", "mu", "V", "g_s"], compute)
    return table


def _modes(cfg, scale):
    p = cfg.parameters
    spec = p["modes"]
    if "shell" in spec:
        modes = ModeSet.isotropic_shell(spec["shell"]["k"], spec["shell"]["count"],
                                        seed=cfg.seed, V=p["V"])
    else:
        modes = ModeSet([Mode(m["k"], m["theta"]) for m in spec["explicit"]], V=p["V"])
    trajectories = []
    for c in p["charges"]:
        kw = {k: v for k, v in c.items() if k != "e"}
        trajectories.append(Trajectory(charge=c["e"], **kw))
    initial = lorenz_initial_state(modes, trajectories) if p["initial"] == "lorenz" else None
    try:
        history = integrate(modes, trajectories, p["dt"], p["n_steps"], initial=initial,
                            sample_every=p["sample_every"])
    except IntegrationError as exc:
        raise NumericError(exc.step, str(exc)) from exc
    except DomainError as exc:
        raise NumericError(0, str(exc)) from exc
    table = SweepTable(list(HISTORY_COLUMNS))
    for row in history.rows():
        table.append(row)
    return table


HANDLERS = {
    "coulomb": _coulomb,
    "kernel-sweep": _kernel_sweep,
    "self-energy": _simple(["e", "E0"], ["e"], lambda s, e: [self_energy(e, s)]),
    "zero-point": _simple(["V", "E0_gamma", "N"], ["V"],
                          lambda s, V: [zero_point_energy(V), state_count(V)]),
    "ratio": _simple(["V", "ratio"], ["V"],
                     lambda s, V: [zero_point_to_self_energy_ratio(V, s)]),
    "state-count": _simple(["V", "N"], ["V"], lambda s, V: [state_count(V)]),
    "spectrum": _simple(
        ["p", "T", "mu", "mean_energy", "occupancy", "bose_mean_energy"], ["p", "T", "mu"],
        lambda s, p, T, mu: [mean_energy(p, T, mu), occupancy(p, T, mu),
                             bose_mean_energy(p, T, mu)]),
    "eos-sweep": _eos,
    "modes": _modes,
}


def run(config: RunConfig):
    """Execute a validated configuration and return its table.

    Raises :class:`NumericError` naming the failing row.
    """
    scale = make_scale(config.alpha)
    table = HANDLERS[config.command](config, scale)
    table.metadata = {
        "tool": "planckqed",
        "version": __version__,
        "seed": config.seed,
        "config": config.to_dict(),
    }
    return table


def build_parser():
    parser = argparse.ArgumentParser(
        prog="planckqed",
        description="Planck-momentum-cutoff electrodynamics: kernels, self-energy, "
                    "zero-point energy, photon-gas equation of state and mode dynamics.")
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--output", help="output file (overrides the config; '-' for stdout)")
    parser.add_argument("--format", choices=FORMATS, help="output format")
    parser.add_argument("--seed", type=int, help="64-bit RNG seed")
    parser.add_argument("--alpha", type=float, help="fine-structure constant")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        with open(args.config, "rb") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        raw = json.loads(text.decode("utf-8")) if text.strip() else {}
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if isinstance(raw, dict):
        if args.output is not None or args.format is not None:
            out = raw.setdefault("output", {})
            if isinstance(out, dict):
                if args.output is not None:
                    out["path"] = None if args.output == "-" else args.output
                if args.format is not None:
                    out["format"] = args.format
        if args.seed is not None:
            raw["seed"] = args.seed
        if args.alpha is not None:
            raw["alpha"] = args.alpha

    try:
        config = validate_dict(raw)
    except ConfigError as exc:
        for err in exc.errors:
            print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        table = run(config)
    except NumericError as exc:
        print(f"error: numeric failure at {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    text = table.render(config.output_format)
    if config.output_path is None:
        sys.stdout.write(text)
    else:
        with open(config.output_path, "w", newline="") as fh:
            fh.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
