"""Simulator for quantum-interrogation (Zeno) CZ/CNOT gates on dual-rail bosonic qubits."""

from qigate.elements import (
    CollisionResult,
    Operator2,
    apply_mode_pair,
    collision_channel,
    rotation,
    rotation_power,
    stage_rotation,
)
from qigate.gates import (
    ConditionalGateMatrix,
    GateMetrics,
    azuma_spec,
    cnot_spec,
    conditional_gate_matrix,
    cz_spec,
    entanglement_demo,
    explosion_profile,
    forbidden_inputs,
    gate_metrics,
    truth_table,
)
from qigate.interrogation import (
    GateSpec,
    ProtocolResult,
    ThetaRule,
    TrajectoryOutcome,
    Variant,
    estimate_frequencies,
    run_classical_qi,
    run_joint_protocol,
    sample_trajectory,
)
from qigate.statespace import (
    ControlMode,
    Encoding,
    JointState,
    QubitStateVector,
    TargetMode,
    basis_state,
    concurrence,
    decode_qubits,
    encode_qubits,
    fidelity,
)

__version__ = "0.1.0"
