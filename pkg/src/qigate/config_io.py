"""Experiment and sweep descriptions in a flat ``key = value`` text format.

Example::

    # CZ gate, fifty stages
    gate = cz
    n_stages = 50
    theta_rule = pi_over_n
    input = 01
    sweep.eta = 0.25,0.5,1.0

One pair per line, ``#`` starts a comment. Unknown or repeated keys are
errors. Defaults (eta=1.0, crossings=1, variant=main, mode=exact, seed=0)
are applied at parse time and written out explicitly by
:func:`serialize_config`.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, replace

import numpy as np

from qigate.interrogation import GateSpec, ThetaRule, Variant
from qigate.statespace import QUBIT_LABELS, QubitStateVector

MAX_GRID = 10**7
BASIS_INPUTS = QUBIT_LABELS
PLUS_CONTROL = "plus_control"
SWEEP_PARAMS = ("crossings_per_stage", "eta", "n_stages")
_SWEEP_ALIASES = {"crossings": "crossings_per_stage"}

_INT = re.compile(r"[+-]?\d+")
_DEC = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")


class ConfigError(ValueError):
    """Invalid config text; the message carries the 1-based line number."""

    def __init__(self, line: int, key: str, message: str):
        self.line = line
        self.key = key
        super().__init__(f"line {line}: {key!r}: {message}")


@dataclass(frozen=True)
class ExperimentConfig:
    spec: GateSpec
    input: str | tuple[complex, complex, complex, complex] = "00"
    mode: str = "exact"
    n_samples: int | None = None
    seed: int = 0

    @property
    def gate(self) -> str:
        return "cnot" if self.spec.hadamard_sandwich else "cz"

    @property
    def input_label(self) -> str:
        return self.input if isinstance(self.input, str) else "custom"

    def qubit_state(self) -> QubitStateVector:
        if isinstance(self.input, str):
            if self.input == PLUS_CONTROL:
                return QubitStateVector(np.array([1, 0, 1, 0]) / math.sqrt(2))
            return QubitStateVector.basis(self.input)
        return QubitStateVector(np.array(self.input, dtype=complex)).normalized()


@dataclass(frozen=True)
class SweepConfig:
    base: ExperimentConfig
    axes: tuple[tuple[str, tuple], ...]

    @property
    def grid_size(self) -> int:
        return math.prod(len(values) for _, values in self.axes)

    def points(self) -> list[ExperimentConfig]:
        """Grid points in lexicographic order over the axes (last axis fastest)."""
        names = [name for name, _ in self.axes]
        out = []
        for combo in itertools.product(*(values for _, values in self.axes)):
            out.append(replace(self.base, spec=replace(self.base.spec, **dict(zip(names, combo)))))
        return out


# -- value parsers ---------------------------------------------------------


def _parse_int(line, key, raw, lo=None, hi=None):
    if not _INT.fullmatch(raw):
        raise ConfigError(line, key, f"expected an integer, got {raw!r}")
    v = int(raw)
    if (lo is not None and v < lo) or (hi is not None and v > hi):
        raise ConfigError(line, key, f"value {v} out of range")
    return v


def _parse_float(line, key, raw, lo=None, hi=None, open_interval=False):
    if not _DEC.fullmatch(raw):
        raise ConfigError(line, key, f"expected a decimal number, got {raw!r}")
    v = float(raw)
    if not math.isfinite(v):
        raise ConfigError(line, key, f"value {raw!r} is not finite")
    if open_interval:
        bad = (lo is not None and v <= lo) or (hi is not None and v >= hi)
    else:
        bad = (lo is not None and v < lo) or (hi is not None and v > hi)
    if bad:
        raise ConfigError(line, key, f"value {v!r} out of range")
    return v


def _parse_enum(line, key, raw, choices):
    if raw not in choices:
        raise ConfigError(line, key, f"expected one of {', '.join(choices)}, got {raw!r}")
    return raw


def _parse_input(line, key, raw):
    if raw in BASIS_INPUTS or raw == PLUS_CONTROL:
        return raw
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 8:
        raise ConfigError(line, key, "expected 00, 01, 10, 11, plus_control or 8 comma-separated reals")
    reals = [_parse_float(line, key, p) for p in parts]
    amps = tuple(complex(reals[2 * i], reals[2 * i + 1]) for i in range(4))
    n2 = sum(abs(a) ** 2 for a in amps)
    if abs(n2 - 1.0) > 1e-9:
        raise ConfigError(line, key, f"custom amplitudes not normalized (norm^2 = {n2!r})")
    return amps


def _parse_values(line, key, raw, one):
    items = [p.strip() for p in raw.split(",")]
    if not items or any(not p for p in items):
        raise ConfigError(line, key, "expected a comma-separated list of values")
    return tuple(one(line, key, p) for p in items)


_SWEEP_PARSERS = {
    "n_stages": lambda ln, k, r: _parse_int(ln, k, r, lo=1),
    "eta": lambda ln, k, r: _parse_float(ln, k, r, lo=0.0, hi=1.0),
    "crossings_per_stage": lambda ln, k, r: _parse_int(ln, k, r, lo=1),
}

_SCALAR_PARSERS = {
    "variant": lambda ln, k, r: _parse_enum(ln, k, r, ("main", "azuma")),
    "n_stages": lambda ln, k, r: _parse_int(ln, k, r, lo=1),
    "theta_rule": lambda ln, k, r: _parse_enum(ln, k, r, ("pi_over_n", "pi_over_2n")),
    "theta": lambda ln, k, r: _parse_float(ln, k, r, lo=0.0, hi=math.pi, open_interval=True),
    "eta": lambda ln, k, r: _parse_float(ln, k, r, lo=0.0, hi=1.0),
    "crossings": lambda ln, k, r: _parse_int(ln, k, r, lo=1),
    "gate": lambda ln, k, r: _parse_enum(ln, k, r, ("cz", "cnot")),
    "input": _parse_input,
    "mode": lambda ln, k, r: _parse_enum(ln, k, r, ("exact", "sample")),
    "samples": lambda ln, k, r: _parse_int(ln, k, r, lo=1),
    "seed": lambda ln, k, r: _parse_int(ln, k, r, lo=0, hi=2**64 - 1),
}


def parse_config(text: str) -> ExperimentConfig | SweepConfig:
    values: dict[str, object] = {}
    lines: dict[str, int] = {}
    axes: dict[str, tuple] = {}
    last = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        last = lineno
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(lineno, body, "expected 'key = value'")
        key, raw = (part.strip() for part in body.split("=", 1))
        if key in lines:
            raise ConfigError(lineno, key, f"duplicate key (first set on line {lines[key]})")
        if key.startswith("sweep."):
            param = key[len("sweep."):]
            param = _SWEEP_ALIASES.get(param, param)
            if param not in _SWEEP_PARSERS:
                raise ConfigError(lineno, key, f"cannot sweep {param!r}; choose from {', '.join(SWEEP_PARAMS)}")
            if param in axes:
                raise ConfigError(lineno, key, "axis already defined")
            axes[param] = _parse_values(lineno, key, raw, _SWEEP_PARSERS[param])
        elif key in _SCALAR_PARSERS:
            values[key] = _SCALAR_PARSERS[key](lineno, key, raw)
        else:
            raise ConfigError(lineno, key, "unknown key")
        lines[key] = lineno

    end = last + 1
    for required in ("gate", "n_stages"):
        if required not in values:
            raise ConfigError(end, required, "missing required key")
    if "theta" in values and "theta_rule" in values:
        ln = max(lines["theta"], lines["theta_rule"])
        raise ConfigError(ln, "theta" if lines["theta"] == ln else "theta_rule",
                          "theta and theta_rule are mutually exclusive")
    variant = Variant(values.get("variant", "main"))
    gate = values["gate"]
    if variant is Variant.AZUMA and gate == "cnot":
        raise ConfigError(lines["gate"], "gate", "azuma variant has no splitter sandwich; use gate = cz")
    mode = values.get("mode", "exact")
    if mode == "sample" and "samples" not in values:
        raise ConfigError(lines["mode"], "samples", "missing required key for mode = sample")

    theta = values.get("theta")
    rule = values.get("theta_rule")
    if theta is None and rule is None:
        rule = "pi_over_2n" if variant is Variant.AZUMA else "pi_over_n"
    try:
        spec = GateSpec(
            n_stages=values["n_stages"],
            theta_rule=ThetaRule(rule) if rule is not None else None,
            theta=theta,
            eta=values.get("eta", 1.0),
            crossings_per_stage=values.get("crossings", 1),
            hadamard_sandwich=gate == "cnot",
            variant=variant,
        )
    except ValueError as exc:
        raise ConfigError(lines["n_stages"], "n_stages", str(exc)) from None
    config = ExperimentConfig(
        spec=spec,
        input=values.get("input", "00"),
        mode=mode,
        n_samples=values.get("samples"),
        seed=values.get("seed", 0),
    )
    if not axes:
        return config
    sweep = SweepConfig(config, tuple(sorted(axes.items())))
    if sweep.grid_size > MAX_GRID:
        ln = max(lines[k] for k in lines if k.startswith("sweep."))
        raise ConfigError(ln, "sweep", f"grid has {sweep.grid_size} points (limit {MAX_GRID})")
    return sweep


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def serialize_config(c: ExperimentConfig | SweepConfig) -> str:
    """Canonical text: every resolved field, keys in alphabetical order."""
    sweep = c if isinstance(c, SweepConfig) else None
    base = sweep.base if sweep else c
    spec = base.spec
    pairs = {
        "crossings": str(spec.crossings_per_stage),
        "eta": _fmt(float(spec.eta)),
        "gate": base.gate,
        "mode": base.mode,
        "n_stages": str(spec.n_stages),
        "seed": str(base.seed),
        "variant": spec.variant.value,
    }
    if isinstance(base.input, str):
        pairs["input"] = base.input
    else:
        pairs["input"] = ",".join(_fmt(float(x)) for a in base.input for x in (a.real, a.imag))
    if base.n_samples is not None:
        pairs["samples"] = str(base.n_samples)
    if spec.theta is not None:
        pairs["theta"] = _fmt(float(spec.theta))
    else:
        pairs["theta_rule"] = spec.theta_rule.value
    if sweep:
        for name, vals in sweep.axes:
            pairs[f"sweep.{name}"] = ",".join(_fmt(float(v) if name == "eta" else v) for v in vals)
    return "".join(f"{k} = {pairs[k]}\n" for k in sorted(pairs))
