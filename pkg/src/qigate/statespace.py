"""Joint control/target states over the labelled path modes.

The control (bomb) particle occupies one of two modes and the target particle
one of three, giving a fixed six-dimensional joint basis::

    0: (In, Out0)   1: (In, U)   2: (In, D)
    3: (Out, Out0)  4: (Out, U)  5: (Out, D)

States may be sub-normalized; after post-selecting on "no scatter" the
squared norm is the success probability.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

TOL = 1e-12
DUAL_RAIL_TOL = 1e-9


class ControlMode(enum.IntEnum):
    IN = 0
    OUT = 1


class TargetMode(enum.IntEnum):
    OUT0 = 0
    U = 1
    D = 2


class Encoding(enum.Enum):
    """How the two dual-rail qubits sit on the path modes.

    ``MAIN``: |0>_C -> In, |1>_C -> Out, |0>_T -> Out0, |1>_T -> D.
    ``AZUMA``: |0>_C -> Out, |1>_C -> In, |0>_T -> U, |1>_T -> D.
    """

    MAIN = "main"
    AZUMA = "azuma"


BASIS = tuple((c, t) for c in ControlMode for t in TargetMode)
BASIS_LABELS = tuple(f"{c.name.lower()}_{t.name.lower()}" for c, t in BASIS)
QUBIT_LABELS = ("00", "01", "10", "11")

# qubit index (2*c + t) -> joint index
CODE_INDICES = {
    Encoding.MAIN: (0, 2, 3, 5),
    Encoding.AZUMA: (4, 5, 1, 2),
}


def joint_index(c: ControlMode, t: TargetMode) -> int:
    return 3 * int(c) + int(t)


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class JointState:
    """Amplitude vector over the six joint modes (read-only)."""

    amps: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.amps, dtype=complex)
        if arr.shape != (6,):
            raise ValueError(f"joint state needs 6 amplitudes, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("joint state amplitudes must be finite")
        n2 = float(np.vdot(arr, arr).real)
        if n2 > 1 + TOL:
            raise ValueError(f"squared norm {n2!r} exceeds 1")
        object.__setattr__(self, "amps", _frozen(arr))

    def __getitem__(self, key: tuple[ControlMode, TargetMode]) -> complex:
        c, t = key
        return complex(self.amps[joint_index(c, t)])

    def __add__(self, other: JointState) -> JointState:
        return JointState(self.amps + other.amps)

    def __sub__(self, other: JointState) -> JointState:
        return JointState(self.amps - other.amps)

    def __mul__(self, scalar: complex) -> JointState:
        return JointState(self.amps * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> JointState:
        return JointState(-self.amps)

    @property
    def norm2(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm2 - 1.0) <= TOL

    def normalized(self) -> JointState:
        n2 = self.norm2
        if n2 == 0.0:
            raise ValueError("cannot normalize the zero state")
        return JointState(self.amps / math.sqrt(n2))

    def allclose(self, other: JointState, atol: float = TOL) -> bool:
        return bool(np.max(np.abs(self.amps - other.amps)) <= atol)


@dataclass(frozen=True, eq=False)
class QubitStateVector:
    """Two-qubit amplitudes in the order |00>, |01>, |10>, |11> (control first)."""

    amps: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.amps, dtype=complex)
        if arr.shape != (4,):
            raise ValueError(f"qubit state needs 4 amplitudes, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("qubit amplitudes must be finite")
        n2 = float(np.vdot(arr, arr).real)
        if n2 > 1 + TOL:
            raise ValueError(f"squared norm {n2!r} exceeds 1")
        object.__setattr__(self, "amps", _frozen(arr))

    @classmethod
    def basis(cls, label: str) -> QubitStateVector:
        amps = np.zeros(4, dtype=complex)
        amps[QUBIT_LABELS.index(label)] = 1.0
        return cls(amps)

    @property
    def norm2(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm2 - 1.0) <= TOL

    def normalized(self) -> QubitStateVector:
        n2 = self.norm2
        if n2 == 0.0:
            raise ValueError("cannot normalize the zero state")
        return QubitStateVector(self.amps / math.sqrt(n2))


def basis_state(c: ControlMode, t: TargetMode) -> JointState:
    amps = np.zeros(6, dtype=complex)
    amps[joint_index(c, t)] = 1.0
    return JointState(amps)


def superpose(coeffs, states) -> JointState:
    """Linear combination ``sum(c_i * s_i)``."""
    total = np.zeros(6, dtype=complex)
    for c, s in zip(coeffs, states, strict=True):
        total = total + c * s.amps
    return JointState(total)


def _require_normalized(*states) -> None:
    for s in states:
        if not s.is_normalized:
            raise ValueError(f"state is not normalized (norm^2 = {s.norm2!r})")


def encode_qubits(q: QubitStateVector, encoding: Encoding = Encoding.MAIN) -> JointState:
    """Place a normalized two-qubit state onto the dual-rail path modes."""
    _require_normalized(q)
    amps = np.zeros(6, dtype=complex)
    amps[list(CODE_INDICES[encoding])] = q.amps
    return JointState(amps)


def decode_qubits(s: JointState, encoding: Encoding = Encoding.MAIN) -> QubitStateVector:
    """Read the qubit amplitudes back off the dual-rail modes.

    The result is not renormalized. Raises ``ValueError`` when more than
    ``1e-9`` of squared amplitude sits outside the code subspace, e.g. a
    target still inside the interferometer.
    """
    idx = list(CODE_INDICES[encoding])
    leak = np.delete(s.amps, idx)
    leak2 = float(np.vdot(leak, leak).real)
    if leak2 >= DUAL_RAIL_TOL:
        raise ValueError(f"target not in dual-rail subspace (residual {leak2:.3g})")
    return QubitStateVector(s.amps[idx])


def fidelity(a: JointState, b: JointState) -> float:
    _require_normalized(a, b)
    return min(1.0, abs(np.vdot(a.amps, b.amps)) ** 2)


def concurrence(q: QubitStateVector) -> float:
    """Pure-state concurrence ``2|a00 a11 - a01 a10|``."""
    _require_normalized(q)
    a00, a01, a10, a11 = q.amps
    return min(1.0, 2.0 * abs(a00 * a11 - a01 * a10))
