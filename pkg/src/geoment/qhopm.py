"""Measurement-driven power iteration: the quantum counterpart of hopm.

Each sweep recovers every factor by one-qubit tomography on the composed
circuit V_i^dagger U and then measures the overlap through one more Hadamard
test, consuming exactly 4n + 2 measurement settings.  In exact noiseless
mode the iteration reproduces the classical solver sweep for sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuits import Circuit, TargetSpec, adjoint, build_separable, build_separable_skip, compose
from .errors import DegenerateUpdate
from .hopm import SolverConfig, combine_shifted
from .mitigation import NoiseParams, mitigate
from .simulator import MeasurementBackend, effective_depth, hadamard_test
from .tensors import QubitAngles, angles_to_vector, random_angles, vector_to_angles
from .tomography import recover_qubit


@dataclass
class IterationRecord:
    k: int
    lambda_: float
    gamma: float
    e_g: float
    e_g_mitigated: float | None
    angles: tuple[QubitAngles, ...]
    settings_used: int


@dataclass(frozen=True)
class RunSummary:
    e_bar: float
    iqr: float
    e_bar_mitigated: float | None
    iqr_mitigated: float | None


@dataclass
class QhopmRun:
    circuit: Circuit
    init: tuple[QubitAngles, ...]
    cfg: SolverConfig
    backend: MeasurementBackend
    target: TargetSpec | None = None
    records: list[IterationRecord] = field(default_factory=list)
    lambda0: float | None = None
    gamma0: float | None = None
    converged: bool = False
    rerandomized: list[tuple[int, int]] = field(default_factory=list)  # (sweep, mode)


def measure_lambda(
    U: Circuit, angles: tuple[QubitAngles, ...] | list[QubitAngles], backend: MeasurementBackend
) -> tuple[float, float]:
    """Overlap modulus and phase of the encoded product state against U|0>.

    One Hadamard test (2 settings).  Under depolarising noise the Y reading
    carries one extra attenuation factor, so the noise-free phase is
    atan2(y/q, x).
    """
    W = compose(U, adjoint(build_separable(angles)))
    e = hadamard_test(W, None, 0, backend)
    x, y = e.x, e.y
    lam = min(math.hypot(x, y), 1.0)
    if backend.noise is not None and backend.noise.p > 0.0:
        gamma = math.atan2(y / (1.0 - backend.noise.p), x)
    else:
        gamma = math.atan2(y, x)
    return lam, gamma


def lambda_depth(U: Circuit) -> int:
    """Effective depth of the overlap-measurement circuit for target U."""
    zeros = tuple(QubitAngles(0.0, 0.0) for _ in range(U.n))
    return effective_depth(compose(U, adjoint(build_separable(zeros))))


def run_qhopm(
    run: QhopmRun,
    rng: np.random.Generator | None = None,
    mitigation_depth: int | None = None,
) -> QhopmRun:
    """Fill run.records in place (and return the run).

    rng is only consumed when a degenerate tomography update forces a factor
    to be re-randomized.  mitigation_depth overrides the effective depth used
    for the post-hoc mitigated column.
    """
    U = run.circuit
    n = U.n
    cfg = run.cfg
    backend = run.backend
    use_lambda = cfg.variant == "gsm"
    angles = [QubitAngles(a.theta, a.phi) for a in run.init]

    lam_prev, gamma = measure_lambda(U, angles, backend)
    run.lambda0, run.gamma0 = lam_prev, gamma

    for k in range(1, cfg.max_iter + 1):
        settings_before = backend.settings_used
        for i in range(n):
            Vi = build_separable_skip(angles[:i], angles[i + 1 :], i)
            W = compose(U, adjoint(Vi))
            try:
                tom = recover_qubit(W, i, backend)
                if cfg.variant == "hopm":
                    angles[i] = tom.angles
                else:
                    u = tom.raw_norm * np.array([tom.c0, tom.c1], dtype=complex)
                    v = combine_shifted(
                        u, angles_to_vector(angles[i]), lam_prev, cfg.beta, use_lambda
                    )
                    angles[i] = vector_to_angles(v)
            except DegenerateUpdate:
                if rng is None:
                    rng = np.random.default_rng(0)
                angles[i] = random_angles(1, rng)[0]
                run.rerandomized.append((k, i))
        lam, gamma = measure_lambda(U, angles, backend)
        run.records.append(
            IterationRecord(
                k=k,
                lambda_=lam,
                gamma=gamma,
                e_g=1.0 - lam * lam,
                e_g_mitigated=None,
                angles=tuple(angles),
                settings_used=backend.settings_used - settings_before,
            )
        )
        if abs(lam - lam_prev) <= cfg.epsilon:
            run.converged = True
            break
        lam_prev = lam

    if backend.noise is not None:
        d = mitigation_depth if mitigation_depth is not None else lambda_depth(U)
        params = NoiseParams(backend.noise.p, d)
        gamma_final = run.records[-1].gamma
        for rec in run.records:
            rec.e_g_mitigated = mitigate(rec.e_g, params, gamma_final)
    return run


def _aligned(series: list[list[float]]) -> np.ndarray:
    """Pad runs to a common sweep count by carrying the last value forward."""
    k_max = max(len(s) for s in series)
    out = np.empty((len(series), k_max))
    for r, s in enumerate(series):
        out[r, : len(s)] = s
        out[r, len(s) :] = s[-1]
    return out


def _window_stats(per_run: list[list[float]], window: int) -> tuple[float, float]:
    table = _aligned(per_run)  # runs x sweeps
    sweep_medians = np.median(table, axis=0)
    tail = sweep_medians[-min(window, sweep_medians.size) :]
    q1, q3 = np.percentile(tail, [25.0, 75.0])
    return float(np.median(tail)), float(q3 - q1)


def summarize(runs: list[QhopmRun] | list[list[IterationRecord]], window: int = 5) -> RunSummary:
    """Median of the last-`window` per-sweep medians, plus its IQR.

    Runs of different lengths are aligned by holding each converged run at
    its final value.
    """
    records = [r.records if isinstance(r, QhopmRun) else r for r in runs]
    if not records or any(not r for r in records):
        raise ValueError("summarize needs at least one completed sweep per run")
    e_bar, iqr = _window_stats([[rec.e_g for rec in r] for r in records], window)
    if all(rec.e_g_mitigated is not None for r in records for rec in r):
        e_bar_m, iqr_m = _window_stats(
            [[rec.e_g_mitigated for rec in r] for r in records], window
        )
        return RunSummary(e_bar, iqr, e_bar_m, iqr_m)
    return RunSummary(e_bar, iqr, None, None)
