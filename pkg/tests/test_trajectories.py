import math
from fractions import Fraction

import numpy as np
import pytest

from qigate.interrogation import (
    BLOCK_SIZE,
    GateSpec,
    Outcome,
    ThetaRule,
    estimate_frequencies,
    outcome_probabilities,
    run_joint_protocol,
    sample_counts,
    sample_trajectory,
)
from qigate.statespace import ControlMode, JointState, QubitStateVector, TargetMode, basis_state, encode_qubits
from conftest import SIN2_PI20

IN, OUT = ControlMode.IN, ControlMode.OUT
BOMB_SPEC = GateSpec(10, theta_rule=ThetaRule.PI_OVER_2N)
BOMB = basis_state(IN, TargetMode.D)


def within_3_sigma(freq, p, n):
    sigma = math.sqrt(max(p * (1 - p), 1e-300) / n)
    return abs(float(freq) - p) <= 3 * sigma + 1e-12


def test_single_trajectory_deterministic():
    a = sample_trajectory(BOMB_SPEC, BOMB, seed=17)
    b = sample_trajectory(BOMB_SPEC, BOMB, seed=17)
    assert a.outcome == b.outcome
    if not a.scattered:
        assert np.array_equal(a.final_state.amps, b.final_state.amps)


def test_no_bomb_never_scatters():
    psi = basis_state(OUT, TargetMode.D)
    for seed in range(50):
        t = sample_trajectory(BOMB_SPEC, psi, seed)
        assert not t.scattered and t.scatter_stage is None
        assert t.exit_mode == (OUT, TargetMode.U)
        assert t.final_state.is_normalized


def test_scatter_fields_consistent():
    outcomes = [sample_trajectory(BOMB_SPEC, BOMB, 3, index=i) for i in range(300)]
    for t in outcomes:
        assert t.scattered == (t.scatter_stage is not None)
        assert (t.final_state is None) == t.scattered
    assert any(t.scattered for t in outcomes) and not all(t.scattered for t in outcomes)


@pytest.mark.parametrize("index", [0, 5, BLOCK_SIZE - 1, BLOCK_SIZE, 3 * BLOCK_SIZE + 77])
def test_single_shot_equals_batch_row(index):
    spec = GateSpec(6, theta_rule=ThetaRule.PI_OVER_2N, eta=0.7, crossings_per_stage=2)
    psi = encode_qubits(QubitStateVector(np.array([1, 1, 1, 1]) / 2))
    n = index + 1
    batch = sample_counts(spec, psi, n, seed=99)
    prev = sample_counts(spec, psi, n - 1, seed=99) if n > 1 else {}
    diff = {k: v - prev.get(k, 0) for k, v in batch.items() if v != prev.get(k, 0)}
    single = sample_trajectory(spec, psi, 99, index=index).outcome
    assert diff == {single: 1}


def test_frequencies_single_sample():
    f = estimate_frequencies(BOMB_SPEC, BOMB, 1, seed=4)
    assert list(f.values()) == [Fraction(1)]


def test_frequencies_sum_to_one_exactly():
    f = estimate_frequencies(BOMB_SPEC, BOMB, 2500, seed=8)
    assert sum(f.values()) == 1
    assert all(isinstance(v, Fraction) for v in f.values())


def test_zero_efficiency_never_scatters():
    spec = GateSpec(10, theta_rule=ThetaRule.PI_OVER_2N, eta=0.0)
    f = estimate_frequencies(spec, BOMB, 3000, seed=5)
    assert all(o.kind == "exit" for o in f)


def test_workers_do_not_change_counts():
    spec = GateSpec(8, eta=0.6)
    psi = encode_qubits(QubitStateVector(np.array([1, 1, 1, 1]) / 2))
    assert sample_counts(spec, psi, 5000, 11, workers=1) == sample_counts(spec, psi, 5000, 11, workers=4)


def test_bad_seed_rejected():
    with pytest.raises(ValueError):
        sample_counts(BOMB_SPEC, BOMB, 10, seed=-1)


def test_first_stage_scatter_rate():
    n = 100_000
    f = estimate_frequencies(BOMB_SPEC, BOMB, n, seed=2024)
    assert within_3_sigma(f.get(Outcome("scatter", 1, 1), 0), SIN2_PI20, n)


SPECS = [
    (GateSpec(10, theta_rule=ThetaRule.PI_OVER_2N), BOMB),
    (GateSpec(12, eta=0.4, crossings_per_stage=2), encode_qubits(QubitStateVector(np.array([1, 1, 1, 1]) / 2))),
    (GateSpec(20, hadamard_sandwich=True, eta=0.7),
     encode_qubits(QubitStateVector(np.array([1, 0, 1, 0]) / math.sqrt(2)))),
    (GateSpec(5, theta=0.4, eta=0.9), JointState(np.array([0.3, 0.5, 0.4, 0.1, 0.5, 0.48j]) / np.linalg.norm([0.3, 0.5, 0.4, 0.1, 0.5, 0.48]))),
]


@pytest.mark.parametrize("spec, psi", SPECS)
def test_exact_and_sampled_agree(spec, psi):
    n = 100_000
    exact = outcome_probabilities(spec, run_joint_protocol(spec, psi))
    freq = estimate_frequencies(spec, psi, n, seed=31)
    assert set(freq) <= {o for o, p in exact.items() if p > 0}
    for o, p in exact.items():
        assert within_3_sigma(freq.get(o, 0), p, n), (o, float(freq.get(o, 0)), p)
