"""Command-line front end: ``qigate run | truth-table | sweep CONFIG``.

Exit codes: 0 success, 2 config or I/O error, 1 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from qigate.config_io import ConfigError, ExperimentConfig, SweepConfig, parse_config
from qigate.gates import ideal_gate, metrics_from_matrix, truth_table
from qigate.interrogation import (
    outcome_probabilities,
    propagate,
    run_joint_protocol,
    sample_counts,
)
from qigate.statespace import (
    BASIS_LABELS,
    CODE_INDICES,
    QUBIT_LABELS,
    QubitStateVector,
    concurrence,
    encode_qubits,
)

SIG_DIGITS = 12
CNOT_CONVENTION_NOTE = "cnot ideal = (I x R(pi/4)) . CZ . (I x R(pi/4)), R = [[-cos, sin], [sin, cos]]"

SPEC_COLUMNS = ["variant", "gate", "n_stages", "theta", "eta", "crossings", "input"]
QUBIT_AMP_COLUMNS = [f"out_{lab}_{part}" for lab in QUBIT_LABELS for part in ("re", "im")]
JOINT_AMP_COLUMNS = [f"amp_{lab}_{part}" for lab in BASIS_LABELS for part in ("re", "im")]
METRIC_COLUMNS = ["raw_fidelity", "postselected_fidelity", "worst_case_success", "concurrence"]

RUN_EXACT_COLUMNS = SPEC_COLUMNS + ["success_prob", "scatter_prob"] + METRIC_COLUMNS + JOINT_AMP_COLUMNS
RUN_SAMPLE_COLUMNS = SPEC_COLUMNS + ["seed", "samples", "outcome", "count", "frequency", "exact_prob"]
TRUTH_COLUMNS = SPEC_COLUMNS + ["success_prob", "leak_prob", "scatter_prob"] + QUBIT_AMP_COLUMNS
SWEEP_COLUMNS = SPEC_COLUMNS + ["success_prob", "scatter_prob"] + METRIC_COLUMNS + ["sample_success_freq"]


class UsageError(Exception):
    pass


def format_number(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, str)):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if x == 0.0:
        return "0"
    return f"{x:.{SIG_DIGITS}g}"


def _json_value(x):
    if x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    v = float(format_number(x))
    return None if math.isnan(v) else v


def _spec_fields(cfg: ExperimentConfig, input_label: str | None = None) -> dict:
    s = cfg.spec
    return {
        "variant": s.variant.value,
        "gate": cfg.gate,
        "n_stages": s.n_stages,
        "theta": s.resolved_theta,
        "eta": float(s.eta),
        "crossings": s.crossings_per_stage,
        "input": input_label if input_label is not None else cfg.input_label,
    }


def _amp_fields(names, amps) -> dict:
    flat = [part for a in amps for part in (a.real, a.imag)]
    return dict(zip(names, flat))


def _code_concurrence(code: np.ndarray) -> float:
    p = float(np.vdot(code, code).real)
    if p == 0.0:
        return math.nan
    return concurrence(QubitStateVector(code / math.sqrt(p)))


def evaluate_point(cfg: ExperimentConfig) -> dict:
    """Exact figures of merit for one configuration (one sweep row)."""
    spec = cfg.spec
    q = cfg.qubit_state()
    psi = encode_qubits(q, spec.encoding)
    # config input plus the four basis inputs in one pass
    enc = np.zeros((6, 5), dtype=complex)
    enc[:, 0] = psi.amps
    for j, idx in enumerate(CODE_INDICES[spec.encoding]):
        enc[idx, j + 1] = 1.0
    out, probs = propagate(spec, enc)
    code_idx = list(CODE_INDICES[spec.encoding])
    metrics = metrics_from_matrix(out[code_idx, 1:], ideal_gate(spec))
    row = _spec_fields(cfg)
    row.update(
        success_prob=float(np.vdot(out[:, 0], out[:, 0]).real),
        scatter_prob=math.fsum(probs[:, 0]),
        raw_fidelity=metrics.raw_process_fidelity,
        postselected_fidelity=metrics.postselected_process_fidelity,
        worst_case_success=metrics.worst_case_basis_success,
        concurrence=_code_concurrence(out[code_idx, 0]),
        sample_success_freq=None,
    )
    if cfg.mode == "sample":
        counts = sample_counts(spec, psi, cfg.n_samples, cfg.seed)
        survived = sum(n for o, n in counts.items() if o.kind == "exit")
        row["sample_success_freq"] = survived / cfg.n_samples
    return row


def _run_rows(cfg: ExperimentConfig) -> tuple[list[str], list[dict]]:
    spec = cfg.spec
    psi = encode_qubits(cfg.qubit_state(), spec.encoding)
    result = run_joint_protocol(spec, psi)
    if cfg.mode == "sample":
        counts = sample_counts(spec, psi, cfg.n_samples, cfg.seed)
        exact = outcome_probabilities(spec, result)
        keys = sorted(set(counts) | {o for o, p in exact.items() if p > 0})
        rows = []
        for o in keys:
            row = _spec_fields(cfg)
            n = counts.get(o, 0)
            row.update(seed=cfg.seed, samples=cfg.n_samples, outcome=o.label, count=n,
                       frequency=n / cfg.n_samples, exact_prob=exact.get(o, 0.0))
            rows.append(row)
        return RUN_SAMPLE_COLUMNS, rows
    row = evaluate_point(cfg)
    row.pop("sample_success_freq")
    row.update(success_prob=result.success_prob, scatter_prob=result.scatter_prob)
    row.update(_amp_fields(JOINT_AMP_COLUMNS, result.no_scatter_state.amps))
    return RUN_EXACT_COLUMNS, [row]


def _truth_rows(cfg: ExperimentConfig) -> tuple[list[str], list[dict]]:
    rows = []
    for tr in truth_table(cfg.spec):
        row = _spec_fields(cfg, tr.label)
        row.update(success_prob=tr.success_prob, leak_prob=tr.leak_prob, scatter_prob=tr.scatter_prob)
        row.update(_amp_fields(QUBIT_AMP_COLUMNS, tr.output.amps))
        rows.append(row)
    return TRUTH_COLUMNS, rows


def run_sweep(sweep: SweepConfig, parallel: int = 1) -> list[dict]:
    points = sweep.points()
    if parallel > 1 and len(points) > 1:
        chunk = max(1, len(points) // (4 * parallel))
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            return list(pool.map(evaluate_point, points, chunksize=chunk))
    return [evaluate_point(p) for p in points]


def render(columns: list[str], rows: list[dict], fmt: str, command: str) -> str:
    if fmt == "json":
        doc = {
            "command": command,
            "columns": columns,
            "metadata": {"cnot_convention": CNOT_CONVENTION_NOTE},
            "rows": [{c: _json_value(r.get(c)) for c in columns} for r in rows],
        }
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([format_number(r.get(c)) for c in columns])
    return buf.getvalue()


def _load(path: str, seed: int | None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror or exc}") from None
    try:
        cfg = parse_config(text)
    except ConfigError as exc:
        raise UsageError(f"{path}: {exc}") from None
    if seed is not None:
        if not 0 <= seed < 2**64:
            raise UsageError(f"--seed {seed} out of range")
        if isinstance(cfg, SweepConfig):
            cfg = replace(cfg, base=replace(cfg.base, seed=seed))
        else:
            cfg = replace(cfg, seed=seed)
    return cfg


def _single(cfg, command: str) -> ExperimentConfig:
    if isinstance(cfg, SweepConfig):
        raise UsageError(f"{command} expects a single experiment; config defines sweep axes")
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qigate", description="Quantum-interrogation CZ/CNOT gate simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="experiment file (key = value lines)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")

    common(sub.add_parser("run", help="run one experiment"))
    common(sub.add_parser("truth-table", help="conditional outputs for the four basis inputs"))
    sweep = sub.add_parser("sweep", help="evaluate every point of a parameter grid")
    common(sweep)
    sweep.add_argument("--parallel", type=int, default=1, help="worker processes (default 1)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _load(args.config, args.seed)
        if args.command == "run":
            columns, rows = _run_rows(_single(cfg, "run"))
        elif args.command == "truth-table":
            columns, rows = _truth_rows(_single(cfg, "truth-table"))
        else:
            if args.parallel < 1:
                raise UsageError("--parallel must be >= 1")
            sweep = cfg if isinstance(cfg, SweepConfig) else SweepConfig(cfg, ())
            columns, rows = SWEEP_COLUMNS, run_sweep(sweep, args.parallel)
    except UsageError as exc:
        print(f"qigate: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - surface any runtime failure as exit 1
        print(f"qigate: runtime error: {exc}", file=sys.stderr)
        return 1

    text = render(columns, rows, args.format, args.command)
    if args.out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"qigate: error: cannot write {args.out}: {exc.strerror or exc}", file=sys.stderr)
            return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
