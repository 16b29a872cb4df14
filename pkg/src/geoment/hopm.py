"""Classical power-iteration solvers on dense tensors.

The plain alternating update (contract-and-normalize, Gauss-Seidel order) is
the ground-truth oracle; the shifted variants add beta times the previous
factor to each update, optionally weighted by the current eigenvalue
estimate, to improve the odds of reaching the global optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateUpdate
from .tensors import (
    QubitAngles,
    StateTensor,
    angles_to_vector,
    full_contraction,
    n_mode_product_skip,
    normalize,
    random_angles,
    vector_to_angles,
)

VARIANTS = ("hopm", "gsm", "shopm")

_TIE_EPS = 1e-12


@dataclass(frozen=True)
class SolverConfig:
    epsilon: float = 1e-10
    max_iter: int = 200
    variant: str = "hopm"
    beta: float = 0.0

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant != "hopm" and self.beta <= 0:
            raise ValueError("shifted variants need beta > 0")


@dataclass(frozen=True)
class SolverResult:
    lambda_: float
    e_g: float
    factors: tuple[QubitAngles, ...]
    trace: tuple[float, ...]  # trace[0] is the initial overlap, trace[k] after sweep k
    converged: bool
    iterations: int


def combine_shifted(
    u: np.ndarray,
    v_old: np.ndarray,
    lambda_prev: float,
    beta: float,
    use_lambda: bool,
) -> np.ndarray:
    """normalize((lambda_prev or 1) * u + beta * v_old) in amplitude space."""
    weight = lambda_prev if use_lambda else 1.0
    return normalize(weight * np.asarray(u, dtype=complex) + beta * np.asarray(v_old, dtype=complex))


def shifted_hopm_step(
    T: StateTensor,
    factors: tuple[QubitAngles, ...] | list[QubitAngles],
    i: int,
    lambda_prev: float,
    beta: float,
    use_lambda: bool,
) -> np.ndarray:
    """One shifted update of mode i, done on complex 2-vectors.

    Reconstructs the factors with the fixed Rz·Rx phase convention, combines
    the raw contraction with the old factor and renormalizes; the angle-space
    system this images to is a test, not the implementation.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    vecs = [angles_to_vector(a) for a in factors]
    u = n_mode_product_skip(T, vecs, i)
    try:
        return combine_shifted(u, vecs[i], lambda_prev, beta, use_lambda)
    except DegenerateUpdate as err:
        raise DegenerateUpdate(str(err), mode=i) from None


def hopm(
    T: StateTensor,
    init: tuple[QubitAngles, ...] | list[QubitAngles],
    cfg: SolverConfig,
) -> SolverResult:
    """Alternating per-mode sweeps until |lambda_k - lambda_{k-1}| <= epsilon.

    Mode i of sweep k contracts against the already-updated factors for
    j < i and the previous sweep's factors for j > i.  Every updated factor
    is re-encoded through its canonical angles, so the quantum pipeline can
    reproduce the iteration exactly.
    """
    if not T.is_normalized(1e-12):
        raise ValueError("target tensor must be normalized")
    n = T.n
    if len(init) != n:
        raise ValueError(f"need {n} initial factors, got {len(init)}")
    angles = [QubitAngles(a.theta, a.phi) for a in init]
    vecs = [angles_to_vector(a) for a in angles]
    use_lambda = cfg.variant == "gsm"

    lam_prev = abs(full_contraction(T, vecs))
    trace = [lam_prev]
    converged = False
    k = 0
    for k in range(1, cfg.max_iter + 1):
        for i in range(n):
            u = n_mode_product_skip(T, vecs, i)
            try:
                if cfg.variant == "hopm":
                    v = normalize(u)
                else:
                    v = combine_shifted(u, vecs[i], lam_prev, cfg.beta, use_lambda)
            except DegenerateUpdate as err:
                raise DegenerateUpdate(str(err), mode=i) from None
            angles[i] = vector_to_angles(v)
            vecs[i] = angles_to_vector(angles[i])
        lam = abs(full_contraction(T, vecs))
        trace.append(lam)
        if abs(lam - lam_prev) <= cfg.epsilon:
            converged = True
            lam_prev = lam
            break
        lam_prev = lam
    lam = trace[-1]
    return SolverResult(
        lambda_=lam,
        e_g=1.0 - lam * lam,
        factors=tuple(angles),
        trace=tuple(trace),
        converged=converged,
        iterations=k,
    )


def multistart_lambda(
    T: StateTensor,
    restarts: int,
    cfg: SolverConfig,
    rng: np.random.Generator,
) -> tuple[SolverResult, list[SolverResult]]:
    """Best-of-restarts run (maximal lambda, earliest on ties within 1e-12)."""
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    results = [hopm(T, random_angles(T.n, rng), cfg) for _ in range(restarts)]
    best = results[0]
    for r in results[1:]:
        if r.lambda_ > best.lambda_ + _TIE_EPS:
            best = r
    return best, results


def schmidt_lambda_bipartite(T: StateTensor) -> float:
    """Largest singular value of the 2x2 amplitude matrix, in closed form.

    For two qubits the entanglement eigenvalue is the top Schmidt
    coefficient: sigma_max^2 is the larger eigenvalue of A^dagger A.
    """
    if T.n != 2:
        raise ValueError("closed-form Schmidt oracle is for n = 2 only")
    a = T.amps.reshape(2, 2)
    t = float(np.vdot(a, a).real)  # tr(A^dagger A) = ||A||_F^2
    det_sq = abs(np.linalg.det(a)) ** 2
    disc = max(t * t - 4.0 * det_sq, 0.0)
    return math.sqrt(0.5 * (t + math.sqrt(disc)))
