"""Beamsplitter rotations and the collision (scatter) channel."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qigate.statespace import TOL, ControlMode, JointState, TargetMode, joint_index


@dataclass(frozen=True)
class Operator2:
    """2x2 complex matrix acting on an ordered pair of target modes."""

    m00: complex
    m01: complex
    m10: complex
    m11: complex

    @classmethod
    def from_array(cls, arr) -> Operator2:
        a = np.asarray(arr, dtype=complex)
        return cls(complex(a[0, 0]), complex(a[0, 1]), complex(a[1, 0]), complex(a[1, 1]))

    @property
    def array(self) -> np.ndarray:
        return np.array([[self.m00, self.m01], [self.m10, self.m11]], dtype=complex)

    def __matmul__(self, other: Operator2) -> Operator2:
        return Operator2.from_array(self.array @ other.array)

    def dagger(self) -> Operator2:
        return Operator2.from_array(self.array.conj().T)

    def is_unitary(self, atol: float = TOL) -> bool:
        a = self.array
        return bool(np.max(np.abs(a.conj().T @ a - np.eye(2))) <= atol)


IDENTITY2 = Operator2(1, 0, 0, 1)


def rotation(theta: float) -> Operator2:
    """Single beamsplitter of reflectivity cos^2(theta) in the (B_u, B_d) basis.

    ``[[-cos, sin], [sin, cos]]``; B_d = (0, 1) goes to sin*B_u + cos*B_d.
    This matrix is a reflection (det -1, squares to the identity), so it is
    used for isolated splitters such as the pi/4 target sandwich. Chained
    interrogation stages use :func:`stage_rotation`.
    """
    if not math.isfinite(theta):
        raise ValueError(f"theta must be finite, got {theta!r}")
    c, s = math.cos(theta), math.sin(theta)
    return Operator2(-c, s, s, c)


def stage_rotation(theta: float) -> Operator2:
    """One interrogation stage: ``[[cos, sin], [-sin, cos]]``.

    Same action on B_d as :func:`rotation`, but a proper rotation, so N
    stages compose to a rotation by N*theta.
    """
    if not math.isfinite(theta):
        raise ValueError(f"theta must be finite, got {theta!r}")
    c, s = math.cos(theta), math.sin(theta)
    return Operator2(c, s, -s, c)


def rotation_power(theta: float, n: int) -> Operator2:
    """``stage_rotation(theta)`` applied ``n`` times, in closed form."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return stage_rotation(n * theta)


def apply_mode_pair(s: JointState, op: Operator2, a: TargetMode, b: TargetMode) -> JointState:
    """Apply ``op`` to target modes (a, b) in both control branches.

    Row/column 0 of ``op`` is mode ``a``, row/column 1 is mode ``b``.
    """
    if a == b:
        raise ValueError("mode pair must be two distinct modes")
    if not op.is_unitary():
        raise ValueError("operator is not unitary")
    amps = np.array(s.amps)
    m = op.array
    for c in ControlMode:
        ia, ib = joint_index(c, a), joint_index(c, b)
        amps[[ia, ib]] = m @ amps[[ia, ib]]
    return JointState(amps)


@dataclass(frozen=True)
class CollisionResult:
    surviving: JointState
    scatter_prob: float


COLLISION_INDEX = joint_index(ControlMode.IN, TargetMode.U)


def collision_channel(s: JointState, eta: float) -> CollisionResult:
    """One crossing of the two particles, detected with efficiency ``eta``.

    Only the (In, U) mode puts both particles on the same path. Its amplitude
    is damped by sqrt(1 - eta) in the no-scatter branch.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta!r}")
    amps = np.array(s.amps)
    a = amps[COLLISION_INDEX]
    amps[COLLISION_INDEX] = a * math.sqrt(1.0 - eta)
    return CollisionResult(JointState(amps), eta * abs(a) ** 2)
