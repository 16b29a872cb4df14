import cmath
import math

import numpy as np
import pytest

from geoment.circuits import TargetSpec, build_target
from geoment.errors import DegenerateUpdate
from geoment.hopm import (
    SolverConfig,
    combine_shifted,
    hopm,
    multistart_lambda,
    schmidt_lambda_bipartite,
    shifted_hopm_step,
)
from geoment.simulator import run
from geoment.tensors import (
    QubitAngles,
    StateTensor,
    angles_to_vector,
    n_mode_product_skip,
    random_angles,
    vector_to_angles,
)

from conftest import random_state

TIGHT = SolverConfig(epsilon=1e-10, max_iter=300)


def target_tensor(family, n, seed=None):
    return run(build_target(TargetSpec(family, n, seed)))


class TestKnownValues:
    def test_ghz9_median_over_inits(self):
        T = target_tensor("GHZ", 9)
        rng = np.random.default_rng(17)
        cfg = SolverConfig(epsilon=1e-6, max_iter=100)
        finals = [hopm(T, random_angles(9, rng), cfg).e_g for _ in range(10)]
        assert float(np.median(finals)) == pytest.approx(0.5, abs=1e-6)

    @pytest.mark.parametrize("n", range(3, 10))
    def test_ghz_family(self, n):
        T = target_tensor("GHZ", n)
        best, _ = multistart_lambda(T, 10, TIGHT, np.random.default_rng(n))
        assert best.e_g == pytest.approx(0.5, abs=1e-9)

    def test_w3(self):
        best, _ = multistart_lambda(
            target_tensor("W3", 3), 10, TIGHT, np.random.default_rng(5)
        )
        assert best.e_g == pytest.approx(5 / 9, abs=1e-9)

    def test_ghz3_equal_weight_stationary_point(self):
        # equal-weight factors reproduce themselves: every sweep returns
        # lambda = 1/2, well below the 1/sqrt(2) optimum
        T = target_tensor("GHZ", 3)
        init = [QubitAngles(math.pi / 2, 0.0)] * 3
        res = hopm(T, init, SolverConfig(epsilon=1e-9, max_iter=5))
        assert res.converged
        assert all(abs(lam - 0.5) < 1e-12 for lam in res.trace[1:])
        assert res.lambda_ == pytest.approx(0.5, abs=1e-12)


class TestSolverBehaviour:
    def test_monotone_lambda(self, rng):
        for _ in range(10):
            n = int(rng.integers(2, 6))
            T = random_state(n, rng)
            res = hopm(T, random_angles(n, rng), SolverConfig(epsilon=1e-12, max_iter=150))
            diffs = np.diff(res.trace)
            assert diffs.min() > -1e-12

    def test_fixed_point(self, rng):
        T = random_state(4, rng)
        cfg = SolverConfig(epsilon=1e-9, max_iter=200)
        res = hopm(T, random_angles(4, rng), cfg)
        again = hopm(T, res.factors, SolverConfig(epsilon=1e-9, max_iter=1))
        assert abs(again.trace[-1] - res.lambda_) < 1e-9

    def test_global_phase_invariance(self, rng):
        T = random_state(3, rng)
        rotated = StateTensor(np.exp(0.7j) * T.amps)
        init = random_angles(3, np.random.default_rng(3))
        a = hopm(T, init, TIGHT)
        b = hopm(rotated, init, TIGHT)
        assert a.lambda_ == pytest.approx(b.lambda_, abs=1e-12)

    def test_result_invariants(self, rng):
        res = hopm(random_state(3, rng), random_angles(3, rng), TIGHT)
        assert res.e_g == pytest.approx(1 - res.lambda_**2, abs=1e-15)
        assert len(res.trace) == res.iterations + 1
        assert 0.0 <= res.lambda_ <= 1.0

    def test_rejects_unnormalized_tensor(self, rng):
        T = StateTensor(2.0 * random_state(2, rng).amps)
        with pytest.raises(ValueError):
            hopm(T, random_angles(2, np.random.default_rng(0)), TIGHT)

    def test_degenerate_update_carries_mode(self):
        # |11> probed with a |0> context: the first mode's fibre vanishes
        T = StateTensor(np.array([0, 0, 0, 1], dtype=complex))
        init = [QubitAngles(0.0, 0.0), QubitAngles(0.0, 0.0)]
        with pytest.raises(DegenerateUpdate) as err:
            hopm(T, init, SolverConfig(epsilon=1e-9, max_iter=3))
        assert err.value.mode == 0


class TestSchmidtOracle:
    def test_bell_state(self):
        T = StateTensor(np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2))
        assert schmidt_lambda_bipartite(T) == pytest.approx(1 / math.sqrt(2), abs=1e-15)

    def test_product_state(self):
        T = StateTensor(np.array([0, 1, 0, 0], dtype=complex))
        assert schmidt_lambda_bipartite(T) == pytest.approx(1.0, abs=1e-15)

    def test_rejects_wrong_size(self, rng):
        with pytest.raises(ValueError):
            schmidt_lambda_bipartite(random_state(3, rng))

    def test_matches_multistart(self, rng):
        for _ in range(10):
            T = random_state(2, rng)
            best, _ = multistart_lambda(T, 50, SolverConfig(epsilon=1e-12, max_iter=400), rng)
            assert best.lambda_ == pytest.approx(schmidt_lambda_bipartite(T), abs=1e-9)


class TestMultistart:
    def test_product_state_every_restart_peaks(self, rng):
        vecs = [angles_to_vector(a) for a in random_angles(3, rng)]
        amps = np.kron(np.kron(vecs[0], vecs[1]), vecs[2])
        best, results = multistart_lambda(StateTensor(amps), 8, TIGHT, rng)
        assert all(r.lambda_ == pytest.approx(1.0, abs=1e-8) for r in results)
        assert best.e_g == pytest.approx(0.0, abs=1e-8)

    def test_ghz6(self):
        best, _ = multistart_lambda(
            target_tensor("GHZ", 6), 10, TIGHT, np.random.default_rng(1)
        )
        assert best.e_g == pytest.approx(0.5, abs=1e-9)

    def test_deterministic_under_seed(self):
        T = target_tensor("RANDOM", 3, seed=9)
        a, _ = multistart_lambda(T, 5, TIGHT, np.random.default_rng(4))
        b, _ = multistart_lambda(T, 5, TIGHT, np.random.default_rng(4))
        assert a == b

    def test_tie_break_keeps_earliest(self, rng):
        # a product state makes every restart tie at lambda = 1
        vecs = [angles_to_vector(a) for a in random_angles(2, rng)]
        T = StateTensor(np.kron(vecs[0], vecs[1]))
        best, results = multistart_lambda(T, 6, TIGHT, rng)
        assert best is results[0]


def appendix_system_residuals(check, old, new, weight, beta):
    """Residuals of the three angle-space equations for the shifted update.

    `check` are the angles of the normalized contraction, `old` the previous
    factor, `new` the result; `weight` is the coefficient multiplying the
    normalized update (the eigenvalue slot).
    """
    a_sq = (
        weight**2
        + beta**2
        + 2
        * beta
        * weight
        * math.cos((check.theta - old.theta) / 2)
        * math.cos((check.phi - old.phi) / 2)
    )
    lhs1 = a_sq * math.cos(new.theta / 2) ** 2
    rhs1 = (
        abs(
            weight * cmath.exp(-1j * check.phi / 2) * math.cos(check.theta / 2)
            + beta * cmath.exp(-1j * old.phi / 2) * math.cos(old.theta / 2)
        )
        ** 2
    )
    cross = (
        2
        * beta
        * weight
        * math.sin((check.theta + old.theta) / 2)
    )
    lhs2 = a_sq * math.sin(new.theta) * math.sin(new.phi)
    rhs2 = (
        weight**2 * math.sin(check.theta) * math.sin(check.phi)
        + beta**2 * math.sin(old.theta) * math.sin(old.phi)
        + cross * math.sin((check.phi + old.phi) / 2)
    )
    lhs3 = a_sq * math.sin(new.theta) * math.cos(new.phi)
    rhs3 = (
        weight**2 * math.sin(check.theta) * math.cos(check.phi)
        + beta**2 * math.sin(old.theta) * math.cos(old.phi)
        + cross * math.cos((check.phi + old.phi) / 2)
    )
    return lhs1 - rhs1, lhs2 - rhs2, lhs3 - rhs3


class TestShiftedStep:
    def test_beta_to_zero_limit_matches_plain_update(self, rng):
        T = random_state(3, rng)
        factors = random_angles(3, rng)
        vecs = [angles_to_vector(a) for a in factors]
        for i in range(3):
            plain = n_mode_product_skip(T, vecs, i)
            plain = plain / np.linalg.norm(plain)
            shifted = shifted_hopm_step(T, factors, i, 0.7, beta=1e-30, use_lambda=True)
            assert np.allclose(shifted, plain, atol=1e-12)

    def test_beta_dominates(self, rng):
        T = random_state(3, rng)
        factors = random_angles(3, rng)
        got = shifted_hopm_step(T, factors, 1, 0.5, beta=1e9, use_lambda=True)
        assert np.allclose(got, angles_to_vector(factors[1]), atol=1e-8)

    def test_angle_space_equations(self, rng):
        # The angle-space system is the exact image of combining the
        # *canonically re-encoded* update (the only thing the angle pair can
        # represent) once the eigenvalue slot holds the weight applied to the
        # normalized update.  Source the update from a random tensor
        # contraction, project it onto its angles, then combine.
        for use_lambda in (True, False):
            for trial in range(20):
                T = random_state(3, rng)
                factors = random_angles(3, rng)
                i = int(rng.integers(3))
                lam = float(rng.uniform(0.1, 1.0))
                beta = 0.5
                vecs = [angles_to_vector(a) for a in factors]
                u = n_mode_product_skip(T, vecs, i)
                norm_u = float(np.linalg.norm(u))
                check = vector_to_angles(u / norm_u)
                combined = combine_shifted(
                    norm_u * angles_to_vector(check), vecs[i], lam, beta, use_lambda
                )
                new = vector_to_angles(combined)
                weight = (lam if use_lambda else 1.0) * norm_u
                r1, r2, r3 = appendix_system_residuals(check, factors[i], new, weight, beta)
                assert abs(r1) < 1e-9
                assert abs(r2) < 1e-9
                assert abs(r3) < 1e-9

    def test_step_is_contract_then_combine(self, rng):
        # composition contract: the op equals combine_shifted on the raw
        # contraction, global phase of u included
        T = random_state(3, rng)
        factors = random_angles(3, rng)
        vecs = [angles_to_vector(a) for a in factors]
        for i in range(3):
            u = n_mode_product_skip(T, vecs, i)
            want = combine_shifted(u, vecs[i], 0.8, 0.5, True)
            got = shifted_hopm_step(T, factors, i, 0.8, 0.5, True)
            assert np.allclose(got, want, atol=1e-14)

    def test_zero_combination_degenerates(self):
        # u and v_old anti-parallel with matching weights cancel exactly
        with pytest.raises(DegenerateUpdate):
            combine_shifted(
                np.array([1.0, 0.0], dtype=complex),
                np.array([-1.0, 0.0], dtype=complex),
                1.0,
                beta=1.0,
                use_lambda=True,
            )


class TestShiftedSolvers:
    @pytest.mark.parametrize("variant", ["gsm", "shopm"])
    def test_tiny_beta_reproduces_plain_trace(self, variant, rng):
        T = random_state(4, rng)
        init = random_angles(4, rng)
        plain = hopm(T, init, SolverConfig(epsilon=1e-10, max_iter=60))
        shifted = hopm(
            T, init, SolverConfig(epsilon=1e-10, max_iter=60, variant=variant, beta=1e-30)
        )
        assert len(plain.trace) == len(shifted.trace)
        assert np.allclose(plain.trace, shifted.trace, atol=1e-12)

    @pytest.mark.parametrize("variant", ["gsm", "shopm"])
    def test_half_beta_reaches_same_optimum_on_ghz(self, variant):
        T = target_tensor("GHZ", 4)
        cfg = SolverConfig(epsilon=1e-10, max_iter=400, variant=variant, beta=0.5)
        best, _ = multistart_lambda(T, 10, cfg, np.random.default_rng(2))
        assert best.e_g == pytest.approx(0.5, abs=1e-6)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SolverConfig(variant="gsm", beta=0.0)
        with pytest.raises(ValueError):
            SolverConfig(epsilon=0.0)
        with pytest.raises(ValueError):
            SolverConfig(max_iter=0)
        with pytest.raises(ValueError):
            SolverConfig(variant="xyz")
