"""CZ/CNOT gate construction, conditional gate matrices and figures of merit."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qigate.elements import rotation
from qigate.interrogation import (
    SANDWICH_ANGLE,
    GateSpec,
    ThetaRule,
    Variant,
    propagate,
)
from qigate.statespace import (
    CODE_INDICES,
    QUBIT_LABELS,
    Encoding,
    QubitStateVector,
    concurrence,
)

FORBIDDEN_THRESHOLD = 0.99

CZ = np.diag([1, 1, 1, -1]).astype(complex)
_SPLITTER = np.kron(np.eye(2), rotation(SANDWICH_ANGLE).array)
# CNOT with the pi/4 splitter's own sign convention instead of textbook H
CNOT_CONVENTION = _SPLITTER @ CZ @ _SPLITTER
# Azuma: no bomb (|0>_C) swaps the target with the stage-rotation signs,
# bomb present (|1>_C) freezes it.
AZUMA_IDEAL = np.array(
    [[0, 1, 0, 0],
     [-1, 0, 0, 0],
     [0, 0, 1, 0],
     [0, 0, 0, 1]],
    dtype=complex,
)
IDEALS = {"cz": CZ, "cnot": CNOT_CONVENTION, "azuma": AZUMA_IDEAL}


def cz_spec(n: int, eta: float = 1.0, crossings: int = 1) -> GateSpec:
    return GateSpec(n_stages=n, theta_rule=ThetaRule.PI_OVER_N, eta=eta,
                    crossings_per_stage=crossings, hadamard_sandwich=False)


def cnot_spec(n: int, eta: float = 1.0, crossings: int = 1) -> GateSpec:
    return GateSpec(n_stages=n, theta_rule=ThetaRule.PI_OVER_N, eta=eta,
                    crossings_per_stage=crossings, hadamard_sandwich=True)


def azuma_spec(n: int, eta: float = 1.0, crossings: int = 1) -> GateSpec:
    return GateSpec(n_stages=n, theta_rule=ThetaRule.PI_OVER_2N, eta=eta,
                    crossings_per_stage=crossings, variant=Variant.AZUMA)


def ideal_gate(spec: GateSpec) -> np.ndarray:
    if spec.variant is Variant.AZUMA:
        return AZUMA_IDEAL
    return CNOT_CONVENTION if spec.hadamard_sandwich else CZ


@dataclass(frozen=True)
class ConditionalGateMatrix:
    """No-scatter Kraus operator on the computational basis.

    Column ``j`` is the code-space part of the output for basis input ``j``,
    not renormalized. ``leak`` holds, per column, the no-scatter probability
    of the target leaving through the extra B_u port (zero at eta = 1).
    """

    matrix: np.ndarray
    leak: np.ndarray
    scatter: np.ndarray

    @property
    def success(self) -> np.ndarray:
        return np.sum(np.abs(self.matrix) ** 2, axis=0)


def _basis_columns(encoding: Encoding) -> np.ndarray:
    cols = np.zeros((6, 4), dtype=complex)
    for j, idx in enumerate(CODE_INDICES[encoding]):
        cols[idx, j] = 1.0
    return cols


def _run_qubit_inputs(spec: GateSpec, qubit_cols: np.ndarray):
    """Propagate qubit-basis columns; returns (code amps, leak probs, scatter probs)."""
    idx = list(CODE_INDICES[spec.encoding])
    joint = _basis_columns(spec.encoding) @ qubit_cols
    out, probs = propagate(spec, joint)
    code = out[idx]
    leak = np.sum(np.abs(np.delete(out, idx, axis=0)) ** 2, axis=0)
    return code, leak, probs.sum(axis=0)


def conditional_gate_matrix(spec: GateSpec) -> ConditionalGateMatrix:
    code, leak, scatter = _run_qubit_inputs(spec, np.eye(4, dtype=complex))
    return ConditionalGateMatrix(code, leak, scatter)


@dataclass(frozen=True)
class TruthRow:
    label: str
    success_prob: float
    output: QubitStateVector
    leak_prob: float
    scatter_prob: float


def truth_table(spec: GateSpec) -> list[TruthRow]:
    m = conditional_gate_matrix(spec)
    rows = []
    for j, label in enumerate(QUBIT_LABELS):
        col = m.matrix[:, j]
        p = float(np.vdot(col, col).real)
        out = col / math.sqrt(p) if p > 0 else np.zeros(4, dtype=complex)
        rows.append(TruthRow(label, p, QubitStateVector(out), float(m.leak[j]), float(m.scatter[j])))
    return rows


@dataclass(frozen=True)
class GateMetrics:
    raw_process_fidelity: float
    postselected_process_fidelity: float
    worst_case_basis_success: float


def gate_metrics(spec: GateSpec, ideal: str | np.ndarray | None = None) -> GateMetrics:
    """Process fidelities of the conditional gate against an ideal unitary.

    ``ideal`` is ``"cz"``, ``"cnot"``, ``"azuma"``, an explicit 4x4 unitary,
    or ``None`` for the gate the spec is meant to realize. The CNOT target
    uses the pi/4 splitter convention, so its fixed local signs are not
    counted as error.
    """
    if ideal is None:
        u = ideal_gate(spec)
    elif isinstance(ideal, str):
        u = IDEALS[ideal.lower()]
    else:
        u = np.asarray(ideal, dtype=complex)
    return metrics_from_matrix(conditional_gate_matrix(spec).matrix, u)


def metrics_from_matrix(m: np.ndarray, u: np.ndarray) -> GateMetrics:
    overlap = float(abs(np.trace(u.conj().T @ m)) ** 2)
    norm = float(np.trace(m.conj().T @ m).real)
    raw = overlap / 16.0
    post = overlap / (4.0 * norm) if norm > 0 else 0.0
    worst = float(np.min(np.sum(np.abs(m) ** 2, axis=0)))
    return GateMetrics(min(raw, 1.0), min(post, 1.0), min(worst, 1.0))


@dataclass(frozen=True)
class ExplosionProfile:
    label: str
    stage_probs: np.ndarray  # per crossing check
    cumulative: np.ndarray

    @property
    def total(self) -> float:
        return float(self.cumulative[-1])

    @property
    def forbidden(self) -> bool:
        return self.total > FORBIDDEN_THRESHOLD


def explosion_profile(spec: GateSpec, label: str) -> ExplosionProfile:
    """Scatter probability per check and cumulative, for one basis input."""
    col = np.zeros((4, 1), dtype=complex)
    col[QUBIT_LABELS.index(label), 0] = 1.0
    joint = _basis_columns(spec.encoding) @ col
    _, probs = propagate(spec, joint)
    probs = probs[:, 0]
    return ExplosionProfile(label, probs, np.cumsum(probs))


def forbidden_inputs(spec: GateSpec, threshold: float = FORBIDDEN_THRESHOLD) -> list[str]:
    return [lab for lab in QUBIT_LABELS if explosion_profile(spec, lab).total > threshold]


def entanglement_demo(spec: GateSpec) -> float:
    """Concurrence of the post-selected output for (|0> + |1>)_C |0>_T / sqrt(2)."""
    if spec.variant is not Variant.MAIN or not spec.hadamard_sandwich:
        raise ValueError("entanglement_demo needs a CNOT spec (main variant with splitter sandwich)")
    q = np.array([1, 0, 1, 0], dtype=complex)[:, None] / math.sqrt(2)
    code, _, _ = _run_qubit_inputs(spec, q)
    out = QubitStateVector(code[:, 0]).normalized()
    return concurrence(out)
