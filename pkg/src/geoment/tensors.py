"""Dense complex tensor arithmetic for n-qubit pure states.

Conventions fixed here and used everywhere else:

- Basis order: amplitudes are stored flat in row-major order over
  |b0 b1 ... b{n-1}>, with qubit 0 the most significant bit.  Reshaping to
  shape (2,)*n therefore puts qubit j on axis j.
- Factor encoding: a one-qubit factor with angles (theta, phi) is
  Rz(phi) Rx(theta) |0>, i.e. components
      c0 = exp(-i phi/2) cos(theta/2)
      c1 = -i exp(+i phi/2) sin(theta/2)
  with theta in [0, pi) and phi in [0, 2pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateUpdate

# phi is meaningless at the Bloch poles; below this sin(theta) it is set to 0
POLE_SIN_EPS = 1e-9
# theta = pi is pulled just inside the half-open range [0, pi)
THETA_PI_CLAMP = math.pi - 1e-12

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class QubitAngles:
    """Canonical (theta, phi) pair encoding one separable factor."""

    theta: float
    phi: float

    def __post_init__(self):
        theta = float(self.theta)
        phi = float(self.phi)
        if not (math.isfinite(theta) and math.isfinite(phi)):
            raise ValueError("angles must be finite")
        theta %= _TWO_PI
        if theta >= _TWO_PI:  # fmod of a tiny negative can round up to 2*pi
            theta = 0.0
        if theta > math.pi:
            # same state up to global phase with the polar angle folded back
            theta = _TWO_PI - theta
            phi += math.pi
        if theta >= math.pi:
            theta = THETA_PI_CLAMP
        phi %= _TWO_PI
        if phi >= _TWO_PI:
            phi = 0.0
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)


class StateTensor:
    """2^n complex amplitudes; both the tensor and the statevector view."""

    __slots__ = ("amps", "n")

    def __init__(self, amps: np.ndarray | Sequence[complex]):
        amps = np.asarray(amps, dtype=complex).reshape(-1)
        n = int(round(math.log2(amps.size)))
        if 2**n != amps.size or amps.size < 2:
            raise ValueError(f"amplitude count {amps.size} is not 2^n with n >= 1")
        if not np.all(np.isfinite(amps.view(float))):
            raise ValueError("amplitudes must be finite")
        self.amps = amps
        self.n = n

    @classmethod
    def from_amplitudes(cls, amps, normalize: bool = False) -> "StateTensor":
        t = cls(amps)
        if normalize:
            nrm = np.linalg.norm(t.amps)
            if nrm == 0.0:
                raise ValueError("cannot normalize the zero vector")
            t.amps = t.amps / nrm
        return t

    def reshaped(self) -> np.ndarray:
        """View with one axis per qubit (axis j = qubit j)."""
        return self.amps.reshape((2,) * self.n)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def __repr__(self):
        return f"StateTensor(n={self.n})"


def normalize(u: np.ndarray) -> np.ndarray:
    """u / ||u||; raises DegenerateUpdate on the zero vector."""
    u = np.asarray(u, dtype=complex)
    nrm = np.linalg.norm(u)
    if nrm == 0.0:
        raise DegenerateUpdate("cannot normalize a zero update vector")
    return u / nrm


def angles_to_vector(a: QubitAngles) -> np.ndarray:
    """Components of Rz(phi) Rx(theta) |0> in the computational basis."""
    half_t = 0.5 * a.theta
    half_p = 0.5 * a.phi
    c0 = np.exp(-1j * half_p) * math.cos(half_t)
    c1 = -1j * np.exp(1j * half_p) * math.sin(half_t)
    return np.array([c0, c1], dtype=complex)


def vector_to_angles(v: np.ndarray) -> QubitAngles:
    """Invert the encoding up to global phase.

    Requires ||v|| = 1 within 1e-9.  At the poles (sin theta < 1e-9) phi is
    fixed to 0; theta = pi is clamped into [0, pi).
    """
    v = np.asarray(v, dtype=complex).reshape(2)
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > 1e-9:
        raise ValueError(f"input must be normalized, got ||v|| = {nrm}")
    theta = 2.0 * math.atan2(abs(v[1]), abs(v[0]))
    if math.sin(theta) < POLE_SIN_EPS:
        return QubitAngles(min(theta, THETA_PI_CLAMP), 0.0)
    phi = float(np.angle(v[1]) - np.angle(v[0])) + 0.5 * math.pi
    return QubitAngles(theta, phi)


def _check_factors(T: StateTensor, vecs: Sequence[np.ndarray]) -> list[np.ndarray]:
    if len(vecs) != T.n:
        raise ValueError(f"expected {T.n} factor vectors, got {len(vecs)}")
    out = []
    for j, v in enumerate(vecs):
        v = np.asarray(v, dtype=complex).reshape(-1)
        if v.shape != (2,):
            raise ValueError(f"factor {j} must have 2 components, got shape {v.shape}")
        out.append(v)
    return out


def n_mode_product_skip(T: StateTensor, vecs: Sequence[np.ndarray], skip: int) -> np.ndarray:
    """Contract T with conj(vecs[j]) on every mode j except `skip`.

    Returns the unnormalized length-2 fibre left on the skipped mode:
    u_b = sum_psi psi_{...b...} prod_{j != skip} conj(v_{j, b_j}).
    """
    vecs = _check_factors(T, vecs)
    if not 0 <= skip < T.n:
        raise ValueError(f"skip index {skip} out of range for n={T.n}")
    out = T.reshaped()
    # contract highest axes first so the remaining axis numbers stay valid
    for j in range(T.n - 1, -1, -1):
        if j == skip:
            continue
        out = np.tensordot(out, np.conj(vecs[j]), axes=([j], [0]))
    result = out.reshape(2)
    if not np.all(np.isfinite(result.view(float))):
        raise ValueError("contraction produced non-finite components")
    return result


def full_contraction(T: StateTensor, vecs: Sequence[np.ndarray]) -> complex:
    """Complex overlap <phi|psi> of the product of vecs with T.

    Its modulus is the current eigenvalue estimate, its argument the phase
    used later by noise mitigation.
    """
    vecs = _check_factors(T, vecs)
    out = T.reshaped()
    for j in range(T.n - 1, -1, -1):
        out = np.tensordot(out, np.conj(vecs[j]), axes=([j], [0]))
    value = complex(out)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError("contraction produced a non-finite value")
    return value


def angles_list_to_vectors(angles: Sequence[QubitAngles]) -> list[np.ndarray]:
    return [angles_to_vector(a) for a in angles]


def random_angles(n: int, rng: np.random.Generator) -> tuple[QubitAngles, ...]:
    """n independent factors, theta ~ U[0, pi), phi ~ U[0, 2pi)."""
    thetas = rng.uniform(0.0, math.pi, size=n)
    phis = rng.uniform(0.0, _TWO_PI, size=n)
    return tuple(QubitAngles(t, p) for t, p in zip(thetas, phis))
