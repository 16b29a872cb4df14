import math

import numpy as np
import pytest

from geoment.circuits import TargetSpec, adjoint, build_separable, build_separable_skip, build_target, compose
from geoment.errors import DegenerateUpdate
from geoment.simulator import DepolarizingNoise, MeasurementBackend
from geoment.tensors import QubitAngles, angles_to_vector, random_angles
from geoment.tomography import recover_qubit, solve_angles_via_expectations

from conftest import bloch_geodesic


def paper_expectations(v: np.ndarray) -> tuple[float, float, float]:
    """(z, x, y) of the tomography system, derived from the amplitudes."""
    z = abs(v[1]) ** 2 - abs(v[0]) ** 2  # = -cos(theta)
    cross = np.conj(v[0]) * v[1]
    return z, 2 * cross.real, 2 * cross.imag


class TestRecoverQubit:
    def test_single_wire_round_trip(self):
        angles = QubitAngles(math.pi / 3, math.pi / 5)
        W = build_separable([angles])
        got = recover_qubit(W, 0, MeasurementBackend())
        assert got.angles.theta == pytest.approx(angles.theta, abs=1e-12)
        assert got.angles.phi == pytest.approx(angles.phi, abs=1e-12)
        assert abs(got.c0) ** 2 + abs(got.c1) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_equal_weight_stationary_factor(self):
        # GHZ3 probed against two equal-weight factors reproduces equal weights
        stat = QubitAngles(math.pi / 2, 0.0)
        W = compose(
            build_target(TargetSpec("GHZ", 3)),
            adjoint(build_separable_skip([], [stat, stat], 0)),
        )
        got = recover_qubit(W, 0, MeasurementBackend())
        assert abs(got.c0) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
        assert abs(got.c1) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
        assert got.raw_norm == pytest.approx(0.5, abs=1e-12)

    def test_round_trip_on_random_product_circuits(self, rng):
        # exact mode: encode on wire i of a random product state, read back
        for _ in range(25):
            n = int(rng.integers(2, 5))
            angles = random_angles(n, rng)
            W = build_separable(angles)
            i = int(rng.integers(n))
            got = recover_qubit(W, i, MeasurementBackend())
            assert got.angles.theta == pytest.approx(angles[i].theta, abs=1e-10)
            assert abs(
                np.vdot(angles_to_vector(got.angles), angles_to_vector(angles[i]))
            ) == pytest.approx(1.0, abs=1e-10)

    def test_shot_noise_angle_error(self):
        # binomial accuracy ~0.003 propagated through the arctangents
        errors = []
        for seed in range(100):
            rng = np.random.default_rng(3000 + seed)
            angles = random_angles(2, rng)
            W = build_separable(angles)
            backend = MeasurementBackend(shots=100_000, rng=rng)
            got = recover_qubit(W, 0, backend)
            errors.append(
                bloch_geodesic(angles_to_vector(got.angles), angles_to_vector(angles[0]))
            )
        assert float(np.median(errors)) < 0.02

    def test_degenerate_update(self):
        # probing |11> against |0> context zeroes every tomography amplitude
        from geoment.circuits import Circuit, Gate

        W = Circuit(2, (Gate("X", (0,)), Gate("X", (1,))))
        with pytest.raises(DegenerateUpdate) as err:
            recover_qubit(W, 1, MeasurementBackend())
        assert err.value.mode == 1

    def test_settings_accounting(self):
        backend = MeasurementBackend()
        W = build_separable(random_angles(3, np.random.default_rng(1)))
        recover_qubit(W, 0, backend)
        assert backend.settings_used == 4

    def test_sweep_budget_is_4n_plus_2(self):
        from geoment.hopm import SolverConfig
        from geoment.qhopm import QhopmRun, run_qhopm

        for n in (2, 3, 5):
            U = build_target(TargetSpec("GHZ", n))
            backend = MeasurementBackend()
            run = run_qhopm(
                QhopmRun(
                    circuit=U,
                    init=random_angles(n, np.random.default_rng(n)),
                    cfg=SolverConfig(epsilon=1e-9, max_iter=12),
                    backend=backend,
                )
            )
            assert all(r.settings_used == 4 * n + 2 for r in run.records)


class TestNoisePerturbationBound:
    def test_first_order_probability_bound(self, rng):
        # |P - P'| <= eta * P' * P'perp / (1 - eta) under tomography noise
        for _ in range(30):
            n = int(rng.integers(2, 5))
            U = build_target(TargetSpec("RANDOM", n, seed=int(rng.integers(10_000))))
            angles = random_angles(n, rng)
            i = int(rng.integers(n))
            W = compose(
                U, adjoint(build_separable_skip(list(angles[:i]), list(angles[i + 1 :]), i))
            )
            p = float(rng.uniform(0.001, 0.05))
            eta = 1 - (1 - p) ** 2
            clean = recover_qubit(W, i, MeasurementBackend())
            noisy = recover_qubit(
                W, i, MeasurementBackend(noise=DepolarizingNoise(p, apply_to_tomography=True))
            )
            for s in (0, 1):
                p_clean = abs((clean.c0, clean.c1)[s]) ** 2
                p_noisy = abs((noisy.c0, noisy.c1)[s]) ** 2
                bound = eta * p_clean * (1 - p_clean) / (1 - eta)
                assert abs(p_noisy - p_clean) <= bound + 1e-12


class TestSolveAnglesViaExpectations:
    def test_ground_state(self):
        a = solve_angles_via_expectations(-1.0, 0.0, 0.0)
        assert (a.theta, a.phi) == (0.0, 0.0)

    def test_excited_state_clamps_pole(self):
        a = solve_angles_via_expectations(1.0, 0.0, 0.0)
        assert a.phi == 0.0
        assert 0.0 <= a.theta < math.pi
        assert math.pi - a.theta < 1e-11

    def test_quarter_turn_state(self):
        v = angles_to_vector(QubitAngles(math.pi / 2, math.pi / 2))
        a = solve_angles_via_expectations(*paper_expectations(v))
        assert a.theta == pytest.approx(math.pi / 2, abs=1e-12)
        assert a.phi == pytest.approx(math.pi / 2, abs=1e-12)

    def test_matches_coefficient_path(self, rng):
        # the equation system and the coefficient reconstruction must agree
        for _ in range(50):
            angles = random_angles(1, rng)[0]
            v = angles_to_vector(angles)
            got = solve_angles_via_expectations(*paper_expectations(v))
            assert got.theta == pytest.approx(angles.theta, abs=1e-9)
            assert got.phi == pytest.approx(angles.phi, abs=1e-9)

    def test_range_validation(self):
        with pytest.raises(ValueError):
            solve_angles_via_expectations(1.5, 0.0, 0.0)
