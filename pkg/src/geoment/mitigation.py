"""Depolarising-noise parameters, post-hoc mitigation, rate calibration.

With q = 1 - p and eta = 1 - q^2, a channel acting after each of d layers
shrinks the measured overlap so that

    e_measured = 1 - (1 - e_true) * q^{2d} * (1 - eta sin^2 gamma),

where gamma is the phase of the noise-free overlap.  `mitigate` inverts this
exactly; `estimate_p` inverts it for p with the sin^2 term dropped, which is
how an unknown channel is calibrated against a reference state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import MitigationOverflow, NegativeRate


@dataclass(frozen=True)
class NoiseParams:
    p: float
    d: int

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("noise rate must lie in [0, 1]")
        if self.d < 0 or int(self.d) != self.d:
            raise ValueError("depth must be a non-negative integer")
        object.__setattr__(self, "d", int(self.d))

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def eta(self) -> float:
        return 1.0 - self.q * self.q


def noisy_e_g(e_g: float, params: NoiseParams, gamma: float) -> float:
    """Forward model: the value a noisy run measures for a true e_g."""
    scale = params.q ** (2 * params.d) * (1.0 - params.eta * math.sin(gamma) ** 2)
    return 1.0 - (1.0 - e_g) * scale


def mitigate(e_g: float, params: NoiseParams, gamma: float) -> float:
    """Undo the attenuation of a measured e_g; clamped below at 0.

    The clamp matters under shot noise, where the inverse can undershoot.
    """
    if not 0.0 <= e_g <= 1.0:
        raise ValueError("e_g must lie in [0, 1]")
    denom = params.q ** (2 * params.d) * (1.0 - params.eta * math.sin(gamma) ** 2)
    if denom <= 0.0:
        raise MitigationOverflow(f"mitigation denominator {denom} is not positive")
    if denom == 1.0:  # p = 0: exact identity, no 1-(1-e) round trip
        return e_g
    return max(0.0, 1.0 - (1.0 - e_g) / denom)


def estimate_p(e_measured: float, e_true: float, d: int) -> float:
    """Noise rate from a reference state with known e_true.

    p = 1 - ((1 - e_measured) / (1 - e_true))^(1/(2d)), the inverse of the
    mitigation formula with the phase term dropped.
    """
    if d < 1:
        raise ValueError("depth must be >= 1")
    if not 0.0 <= e_true < 1.0 or not 0.0 <= e_measured < 1.0:
        raise ValueError("entanglement values must lie in [0, 1)")
    if e_measured < e_true:
        raise NegativeRate(
            f"measured value {e_measured} below reference {e_true}; "
            "check that the reference state and depth match the run"
        )
    ratio = (1.0 - e_measured) / (1.0 - e_true)
    return 1.0 - ratio ** (1.0 / (2.0 * d))
