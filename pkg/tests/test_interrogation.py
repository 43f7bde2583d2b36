import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qigate.interrogation import (
    GateSpec,
    ThetaRule,
    Variant,
    check_probability_budget,
    run_classical_qi,
    run_joint_protocol,
)
from qigate.statespace import (
    ControlMode,
    Encoding,
    JointState,
    QubitStateVector,
    TargetMode,
    basis_state,
    encode_qubits,
)
from conftest import COS20_PI20, COS100_PI50, random_qubits, reference_protocol

IN, OUT = ControlMode.IN, ControlMode.OUT
OUT0, U, D = TargetMode.OUT0, TargetMode.U, TargetMode.D


def enc(label):
    return encode_qubits(QubitStateVector.basis(label))


# -- GateSpec ---------------------------------------------------------------


def test_spec_defaults():
    s = GateSpec(50)
    assert s.theta_rule is ThetaRule.PI_OVER_N
    assert s.resolved_theta == pytest.approx(math.pi / 50)
    assert (s.eta, s.crossings_per_stage, s.hadamard_sandwich, s.variant) == (1.0, 1, False, Variant.MAIN)


def test_spec_azuma_default_rule():
    assert GateSpec(25, variant=Variant.AZUMA).resolved_theta == pytest.approx(math.pi / 50)


@pytest.mark.parametrize("kwargs", [
    dict(n_stages=0),
    dict(n_stages=2.0),
    dict(n_stages=5, eta=1.2),
    dict(n_stages=5, crossings_per_stage=0),
    dict(n_stages=5, theta=0.1, theta_rule=ThetaRule.PI_OVER_N),
    dict(n_stages=5, theta=0.0),
    dict(n_stages=5, theta=math.pi),
    dict(n_stages=1, theta_rule=ThetaRule.PI_OVER_N),  # resolves to pi
    dict(n_stages=5, variant=Variant.AZUMA, hadamard_sandwich=True),
])
def test_spec_rejects(kwargs):
    with pytest.raises(ValueError):
        GateSpec(**kwargs)


def test_spec_single_stage_allowed():
    assert GateSpec(1, theta_rule=ThetaRule.PI_OVER_2N).resolved_theta == pytest.approx(math.pi / 2)


# -- classical bomb -----------------------------------------------------------


def test_classical_bomb_present():
    r = run_classical_qi(10, math.pi / 20, True, 1.0)
    assert r.success_prob == pytest.approx(COS20_PI20, abs=1e-12)
    assert r.no_scatter_state.normalized().allclose(basis_state(IN, D))
    # the first-order estimate sits below the exact value
    assert r.success_prob > 1 - math.pi**2 / 40


def test_classical_bomb_absent_exits_upper():
    r = run_classical_qi(10, math.pi / 20, False, 1.0)
    assert r.success_prob == pytest.approx(1.0, abs=1e-12)
    assert abs(r.no_scatter_state[OUT, U]) ** 2 == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n", [1, 3, 40])
def test_classical_zero_angle(n):
    r = run_classical_qi(n, 0.0, True, 1.0)
    assert r.success_prob == 1.0
    assert r.no_scatter_state.allclose(basis_state(IN, D))


@pytest.mark.parametrize("n, theta", [(5, 0.2), (13, 0.05), (30, 1.1)])
def test_classical_absent_follows_rotation_power(n, theta):
    from qigate.elements import rotation_power

    r = run_classical_qi(n, theta, False)
    expected = rotation_power(theta, n).array @ [0, 1]
    assert np.allclose(r.no_scatter_state.amps[[4, 5]], expected, atol=1e-12)


def test_classical_per_stage_scatter():
    r = run_classical_qi(10, math.pi / 20, True)
    c2 = math.cos(math.pi / 20) ** 2
    expected = [(1 - c2) * c2**k for k in range(10)]
    assert np.allclose(r.stage_scatter_probs, expected, atol=1e-15)


def test_classical_rejects_bad_eta():
    with pytest.raises(ValueError):
        run_classical_qi(10, 0.1, True, 2.0)


# -- joint protocol -----------------------------------------------------------


def test_cz_sign_flip_on_11():
    r = run_joint_protocol(GateSpec(50), enc("11"))
    assert r.success_prob == pytest.approx(1.0, abs=1e-12)
    assert r.no_scatter_state.allclose(-enc("11"))


def test_cz_zeno_on_01():
    r = run_joint_protocol(GateSpec(50), enc("01"))
    assert r.success_prob == pytest.approx(COS100_PI50, abs=1e-12)
    assert r.no_scatter_state.normalized().allclose(enc("01"))


@pytest.mark.parametrize("label", ["00", "10"])
def test_cz_bypass_inputs(label):
    r = run_joint_protocol(GateSpec(50), enc(label))
    assert r.success_prob == pytest.approx(1.0, abs=1e-12)
    assert r.no_scatter_state.allclose(enc(label))


def test_joint_rejects_unnormalized():
    with pytest.raises(ValueError):
        run_joint_protocol(GateSpec(5), JointState([0.5, 0, 0, 0, 0, 0]))


SPECS = [
    GateSpec(7),
    GateSpec(12, eta=0.3),
    GateSpec(9, eta=0.6, crossings_per_stage=3),
    GateSpec(10, hadamard_sandwich=True, eta=0.8),
    GateSpec(11, theta=0.21, eta=0.5, crossings_per_stage=2),
    GateSpec(6, variant=Variant.AZUMA, eta=0.9),
]


@pytest.mark.parametrize("spec", SPECS)
def test_engine_matches_reference_composition(spec, rng):
    for _ in range(5):
        v = rng.normal(size=6) + 1j * rng.normal(size=6)
        psi = JointState(v / np.linalg.norm(v))
        r = run_joint_protocol(spec, psi)
        ref_state, ref_probs = reference_protocol(spec, psi)
        assert r.no_scatter_state.allclose(ref_state, atol=1e-12)
        assert np.allclose(r.stage_scatter_probs, ref_probs, atol=1e-12)
        assert len(r.stage_scatter_probs) == spec.n_stages * spec.crossings_per_stage


@pytest.mark.parametrize("spec", SPECS)
def test_probability_budget(spec, rng):
    for _ in range(5):
        psi = encode_qubits(random_qubits(rng), spec.encoding)
        r = run_joint_protocol(spec, psi)
        assert check_probability_budget(psi, r)
        assert abs(r.success_prob + sum(r.stage_scatter_probs) - 1) < 1e-10


@pytest.mark.parametrize("spec", SPECS)
def test_no_scatter_map_is_linear(spec, rng):
    basis = [basis_state(c, t) for c in ControlMode for t in TargetMode]
    outs = [run_joint_protocol(spec, b).no_scatter_state.amps for b in basis]
    for _ in range(5):
        c = rng.normal(size=6) + 1j * rng.normal(size=6)
        c /= np.linalg.norm(c)
        r = run_joint_protocol(spec, JointState(c))
        assert np.max(np.abs(r.no_scatter_state.amps - sum(ci * o for ci, o in zip(c, outs)))) < 1e-10


@given(st.integers(1, 60), st.floats(0, 1), st.integers(2, 4), st.integers(0, 2**32 - 1))
def test_crossings_equal_boosted_efficiency(n, eta, k, seed):
    psi = encode_qubits(random_qubits(np.random.default_rng(seed)))
    theta = math.pi / (n + 1)
    multi = run_joint_protocol(GateSpec(n, theta=theta, eta=eta, crossings_per_stage=k), psi)
    single = run_joint_protocol(GateSpec(n, theta=theta, eta=1 - (1 - eta) ** k), psi)
    assert multi.no_scatter_state.allclose(single.no_scatter_state, atol=1e-12)


def test_zeno_limit_monotone_and_first_order():
    ns = np.arange(4, 4097)
    closed = np.cos(np.pi / ns) ** (2 * ns)
    assert np.all(np.diff(closed) > 0)
    big = ns >= 64
    assert np.all(closed[big] > 1 - np.pi**2 / ns[big] - 1e-6)


@pytest.mark.parametrize("n", [4, 5, 16, 64, 300, 1024])
def test_zeno_limit_engine_matches_closed_form(n):
    r = run_joint_protocol(GateSpec(n), enc("01"))
    assert r.success_prob == pytest.approx(math.cos(math.pi / n) ** (2 * n), abs=1e-12)


def test_azuma_engine_uses_upper_port():
    spec = GateSpec(25, variant=Variant.AZUMA)
    psi = encode_qubits(QubitStateVector.basis("10"), Encoding.AZUMA)
    r = run_joint_protocol(spec, psi)
    assert r.stage_scatter_probs[0] == pytest.approx(math.cos(math.pi / 50) ** 2, abs=1e-12)
