"""N-stage interrogation protocols, exact and by sampled trajectories.

Each stage rotates the target between B_u and B_d and then gives the two
particles ``crossings_per_stage`` chances to collide on the (In, U) mode.
The exact engine keeps the sub-normalized no-scatter branch; the sampler
unravels the same channel into single shots.

Random streams
--------------
Trajectories are grouped in blocks of ``BLOCK_SIZE``. Block ``b`` owns a
PCG64 generator seeded with ``SeedSequence(seed, spawn_key=(b,))``. At
check ``j`` the block draws ``BLOCK_SIZE`` doubles and trajectory
``i = b * BLOCK_SIZE + r`` takes element ``r``. The last check of a
trajectory (index ``n_stages * crossings_per_stage``) is the final exit
port measurement. Trajectory ``i`` therefore depends only on
``(seed, i)`` and the spec, never on how many samples were requested or how
blocks were scheduled.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from qigate.elements import COLLISION_INDEX, rotation, stage_rotation
from qigate.statespace import (
    BASIS,
    BASIS_LABELS,
    TOL,
    ControlMode,
    Encoding,
    JointState,
    TargetMode,
    basis_state,
    joint_index,
)

BLOCK_SIZE = 1024
SANDWICH_ANGLE = math.pi / 4


class ThetaRule(enum.Enum):
    PI_OVER_2N = "pi_over_2n"
    PI_OVER_N = "pi_over_n"


class Variant(enum.Enum):
    MAIN = "main"
    AZUMA = "azuma"


def _is_int(x) -> bool:
    return isinstance(x, (int, np.integer)) and not isinstance(x, bool)


@dataclass(frozen=True)
class GateSpec:
    """Full parameterization of one interrogation gate.

    Exactly one of ``theta`` and ``theta_rule`` is used. When neither is
    given the rule defaults to pi/N for the main gate and pi/(2N) for the
    Azuma variant.
    """

    n_stages: int
    theta_rule: ThetaRule | None = None
    theta: float | None = None
    eta: float = 1.0
    crossings_per_stage: int = 1
    hadamard_sandwich: bool = False
    variant: Variant = Variant.MAIN

    def __post_init__(self):
        if not _is_int(self.n_stages) or self.n_stages < 1:
            raise ValueError(f"n_stages must be a positive integer, got {self.n_stages!r}")
        if not _is_int(self.crossings_per_stage) or self.crossings_per_stage < 1:
            raise ValueError(
                f"crossings_per_stage must be a positive integer, got {self.crossings_per_stage!r}"
            )
        if not (isinstance(self.eta, (int, float)) and 0.0 <= self.eta <= 1.0):
            raise ValueError(f"eta must lie in [0, 1], got {self.eta!r}")
        if self.theta is not None and self.theta_rule is not None:
            raise ValueError("theta and theta_rule are mutually exclusive")
        if self.theta is None and self.theta_rule is None:
            default = ThetaRule.PI_OVER_2N if self.variant is Variant.AZUMA else ThetaRule.PI_OVER_N
            object.__setattr__(self, "theta_rule", default)
        if self.variant is Variant.AZUMA and self.hadamard_sandwich:
            raise ValueError("azuma variant encodes |0>_T on B_u; the Out0 splitter sandwich does not apply")
        th = self.resolved_theta
        if not (math.isfinite(th) and 0.0 < th < math.pi):
            raise ValueError(f"resolved theta must lie in (0, pi), got {th!r}")

    @property
    def resolved_theta(self) -> float:
        if self.theta is not None:
            return float(self.theta)
        if self.theta_rule is ThetaRule.PI_OVER_2N:
            return math.pi / (2 * self.n_stages)
        return math.pi / self.n_stages

    @property
    def encoding(self) -> Encoding:
        return Encoding.AZUMA if self.variant is Variant.AZUMA else Encoding.MAIN

    @property
    def n_checks(self) -> int:
        return self.n_stages * self.crossings_per_stage


@dataclass(frozen=True)
class ProtocolResult:
    no_scatter_state: JointState
    success_prob: float
    stage_scatter_probs: tuple[float, ...]

    @property
    def scatter_prob(self) -> float:
        return math.fsum(self.stage_scatter_probs)


def _pair_matrix(op: np.ndarray, a: TargetMode, b: TargetMode) -> np.ndarray:
    full = np.eye(6, dtype=complex)
    for c in ControlMode:
        idx = [joint_index(c, a), joint_index(c, b)]
        full[np.ix_(idx, idx)] = op
    return full


def _stage_matrix(theta: float) -> np.ndarray:
    return _pair_matrix(stage_rotation(theta).array, TargetMode.U, TargetMode.D)


def _sandwich_matrix() -> np.ndarray:
    return _pair_matrix(rotation(SANDWICH_ANGLE).array, TargetMode.OUT0, TargetMode.D)


def _evolve(columns: np.ndarray, theta: float, n: int, eta: float, crossings: int,
            sandwich: bool) -> tuple[np.ndarray, np.ndarray]:
    """Propagate a (6, m) block of input columns; returns states and (n*k, m) scatter probs."""
    v = np.array(columns, dtype=complex)
    if sandwich:
        v = _sandwich_matrix() @ v
    stage = _stage_matrix(theta)
    # fraction of |a(In,U)|^2 lost at each successive crossing of one stage
    per_crossing = eta * (1.0 - eta) ** np.arange(crossings)
    damp = math.sqrt(1.0 - eta) ** crossings
    probs = np.empty((n * crossings, v.shape[1]))
    for i in range(n):
        v = stage @ v
        a2 = np.abs(v[COLLISION_INDEX]) ** 2
        probs[i * crossings:(i + 1) * crossings] = per_crossing[:, None] * a2
        v[COLLISION_INDEX] *= damp
    if sandwich:
        v = _sandwich_matrix() @ v
    return v, probs


def propagate(spec: GateSpec, columns: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Run the no-scatter map on every column of a (6, m) amplitude array."""
    return _evolve(columns, spec.resolved_theta, spec.n_stages, spec.eta,
                   spec.crossings_per_stage, spec.hadamard_sandwich)


def _result(v: np.ndarray, probs: np.ndarray) -> ProtocolResult:
    state = JointState(v)
    return ProtocolResult(state, state.norm2, tuple(float(p) for p in probs))


def run_classical_qi(n: int, theta: float, bomb_present: bool, eta: float = 1.0) -> ProtocolResult:
    """Target enters at B_d; a classical bomb sits on the upper path or not.

    Unlike :class:`GateSpec`, any finite ``theta`` is accepted here,
    including zero.
    """
    if not _is_int(n) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not math.isfinite(theta):
        raise ValueError(f"theta must be finite, got {theta!r}")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta!r}")
    control = ControlMode.IN if bomb_present else ControlMode.OUT
    psi = basis_state(control, TargetMode.D)
    v, probs = _evolve(psi.amps[:, None], theta, n, eta, 1, False)
    return _result(v[:, 0], probs[:, 0])


def _require_input(psi: JointState) -> None:
    if not psi.is_normalized:
        raise ValueError(f"input state is not normalized (norm^2 = {psi.norm2!r})")


def run_joint_protocol(spec: GateSpec, psi: JointState) -> ProtocolResult:
    _require_input(psi)
    v, probs = propagate(spec, psi.amps[:, None])
    return _result(v[:, 0], probs[:, 0])


# -- trajectories ----------------------------------------------------------


class Outcome(NamedTuple):
    """One measurement record: a scatter at (stage, crossing) or an exit port."""

    kind: str  # "exit" or "scatter"
    stage: int = 0
    crossing: int = 0
    mode: str = ""

    @property
    def label(self) -> str:
        if self.kind == "scatter":
            return f"scatter_s{self.stage}_c{self.crossing}"
        return f"exit_{self.mode}"


@dataclass(frozen=True)
class TrajectoryOutcome:
    scattered: bool
    scatter_stage: int | None = None
    scatter_crossing: int | None = None
    final_state: JointState | None = None
    exit_mode: tuple[ControlMode, TargetMode] | None = None

    @property
    def outcome(self) -> Outcome:
        if self.scattered:
            return Outcome("scatter", self.scatter_stage, self.scatter_crossing)
        return Outcome("exit", mode=BASIS_LABELS[joint_index(*self.exit_mode)])


def _block_generator(seed: int, block: int) -> np.random.PCG64:
    if not _is_int(seed) or not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(block,)))


def _run_rows(spec: GateSpec, psi: JointState, rows: int, draw):
    """Evolve ``rows`` trajectories; ``draw()`` yields one uniform per row per check.

    Returns (scatter check index or -1, exit mode index or -1, final states).
    """
    k = spec.crossings_per_stage
    eta = spec.eta
    damp = math.sqrt(1.0 - eta)
    stage_t = _stage_matrix(spec.resolved_theta).T
    x = np.tile(psi.amps, (rows, 1))
    if spec.hadamard_sandwich:
        x = x @ _sandwich_matrix().T
    alive = np.ones(rows, dtype=bool)
    check = np.full(rows, -1, dtype=np.int64)
    for i in range(spec.n_stages):
        x = x @ stage_t
        for j in range(k):
            u = draw()
            norm2 = np.sum(np.abs(x) ** 2, axis=1)
            p = eta * np.abs(x[:, COLLISION_INDEX]) ** 2 / np.where(norm2 > 0, norm2, 1.0)
            hit = alive & (u < p)
            check[hit] = i * k + j
            alive &= ~hit
            x[:, COLLISION_INDEX] *= damp
            norm = np.sqrt(np.sum(np.abs(x[alive]) ** 2, axis=1))
            x[alive] /= norm[:, None]
    if spec.hadamard_sandwich:
        x = x @ _sandwich_matrix().T
    u = draw()
    weights = np.abs(x) ** 2
    cum = np.cumsum(weights, axis=1)
    total = np.where(cum[:, -1] > 0, cum[:, -1], 1.0)
    exit_idx = np.minimum(np.sum(cum / total[:, None] <= u[:, None], axis=1), 5)
    exit_idx = np.where(alive, exit_idx, -1)
    return check, exit_idx, x


def _sample_block(spec: GateSpec, psi: JointState, seed: int, block: int, rows: int):
    gen = np.random.Generator(_block_generator(seed, block))
    return _run_rows(spec, psi, rows, lambda: gen.random(BLOCK_SIZE)[:rows])


def sample_trajectory(spec: GateSpec, psi: JointState, seed: int, index: int = 0) -> TrajectoryOutcome:
    """Single shot number ``index`` of the stream seeded by ``seed``."""
    _require_input(psi)
    if not _is_int(index) or index < 0:
        raise ValueError(f"index must be a non-negative integer, got {index!r}")
    block, row = divmod(index, BLOCK_SIZE)
    bitgen = _block_generator(seed, block)
    bitgen.advance(row)
    gen = np.random.Generator(bitgen)

    def draw():
        u = gen.random(1)
        bitgen.advance(BLOCK_SIZE - 1)
        return u

    check, exit_idx, x = _run_rows(spec, psi, 1, draw)
    if check[0] >= 0:
        stage, crossing = divmod(int(check[0]), spec.crossings_per_stage)
        return TrajectoryOutcome(True, stage + 1, crossing + 1)
    return TrajectoryOutcome(False, final_state=JointState(x[0]), exit_mode=BASIS[int(exit_idx[0])])


def _block_counts(spec: GateSpec, psi: JointState, seed: int, block: int, rows: int) -> Counter:
    check, exit_idx, _ = _sample_block(spec, psi, seed, block, rows)
    counts: Counter = Counter()
    k = spec.crossings_per_stage
    for c, n in zip(*np.unique(check[check >= 0], return_counts=True)):
        stage, crossing = divmod(int(c), k)
        counts[Outcome("scatter", stage + 1, crossing + 1)] += int(n)
    for e, n in zip(*np.unique(exit_idx[exit_idx >= 0], return_counts=True)):
        counts[Outcome("exit", mode=BASIS_LABELS[int(e)])] += int(n)
    return counts


def sample_counts(spec: GateSpec, psi: JointState, n_samples: int, seed: int,
                  workers: int = 1) -> dict[Outcome, int]:
    """Outcome counts over trajectories ``0 .. n_samples - 1``."""
    _require_input(psi)
    if not _is_int(n_samples) or n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples!r}")
    _block_generator(seed, 0)
    n_blocks = -(-n_samples // BLOCK_SIZE)
    jobs = [(b, min(BLOCK_SIZE, n_samples - b * BLOCK_SIZE)) for b in range(n_blocks)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _block_counts(spec, psi, seed, *job), jobs))
    else:
        parts = [_block_counts(spec, psi, seed, *job) for job in jobs]
    total: Counter = Counter()
    for part in parts:
        total.update(part)
    return dict(sorted(total.items()))


def estimate_frequencies(spec: GateSpec, psi: JointState, n_samples: int, seed: int,
                         workers: int = 1) -> dict[Outcome, Fraction]:
    counts = sample_counts(spec, psi, n_samples, seed, workers)
    return {k: Fraction(v, n_samples) for k, v in counts.items()}


def outcome_probabilities(spec: GateSpec, result: ProtocolResult) -> dict[Outcome, float]:
    """Exact probability of every outcome the sampler can record."""
    probs: dict[Outcome, float] = {}
    k = spec.crossings_per_stage
    for idx, p in enumerate(result.stage_scatter_probs):
        stage, crossing = divmod(idx, k)
        probs[Outcome("scatter", stage + 1, crossing + 1)] = p
    weights = np.abs(result.no_scatter_state.amps) ** 2
    for label, w in zip(BASIS_LABELS, weights):
        probs[Outcome("exit", mode=label)] = float(w)
    return dict(sorted(probs.items()))


def check_probability_budget(psi: JointState, result: ProtocolResult, atol: float = 1e-10) -> bool:
    """success + total scatter equals the input norm (within ``atol``)."""
    return abs(result.success_prob + result.scatter_prob - psi.norm2) <= atol and \
        abs(result.success_prob - result.no_scatter_state.norm2) <= TOL
