"""One-qubit state recovery from four Hadamard-test settings.

The complex pair (C_0, C_1) is reconstructed directly in the computational
basis: for s in {0, 1} one Hadamard test yields x_s + i y_s = <s_[i]|w>, so a
full recovery costs exactly 4 measurement settings.  Z/X/Y expectations, when
needed, are derived classically from the reconstructed coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import Circuit
from .errors import DegenerateUpdate
from .simulator import MeasurementBackend, hadamard_test
from .tensors import POLE_SIN_EPS, THETA_PI_CLAMP, QubitAngles, vector_to_angles

_NORM_SQ_FLOOR = 1e-18


@dataclass(frozen=True)
class TomographyResult:
    angles: QubitAngles
    c0: complex
    c1: complex
    raw_norm: float  # ||u|| before normalization; the eigenvalue-side residue


def recover_qubit(W: Circuit, qubit: int, backend: MeasurementBackend) -> TomographyResult:
    """Recover factor `qubit` of W|0...0> relative to all-|0> context.

    Runs the Hadamard test for s = 0 and s = 1 (4 settings), normalizes the
    reconstructed pair and extracts canonical angles.
    """
    e0 = hadamard_test(W, qubit, 0, backend)
    e1 = hadamard_test(W, qubit, 1, backend)
    u = np.array([e0.x + 1j * e0.y, e1.x + 1j * e1.y], dtype=complex)
    norm_sq = float(np.vdot(u, u).real)
    if norm_sq < _NORM_SQ_FLOOR:
        raise DegenerateUpdate(
            f"tomography on qubit {qubit} saw a vanishing update", mode=qubit
        )
    raw_norm = math.sqrt(norm_sq)
    c = u / raw_norm
    return TomographyResult(vector_to_angles(c), complex(c[0]), complex(c[1]), raw_norm)


def solve_angles_via_expectations(z: float, x: float, y: float) -> QubitAngles:
    """Invert the (z, x, y) = (-cos t, sin t sin f, -sin t cos f) system.

    Secondary path kept to cross-check the coefficient reconstruction; the
    phase branch is the one fixed by the round-trip criterion.
    """
    for name, v in (("z", z), ("x", x), ("y", y)):
        if not -1.0 - 1e-12 <= v <= 1.0 + 1e-12:
            raise ValueError(f"expectation {name}={v} outside [-1, 1]")
    theta = math.acos(min(1.0, max(-1.0, -z)))
    if math.sin(theta) < POLE_SIN_EPS:
        return QubitAngles(min(theta, THETA_PI_CLAMP), 0.0)
    return QubitAngles(theta, math.atan2(x, -y))
