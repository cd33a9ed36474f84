import numpy as np
import pytest

from qcorr import oracle, states
from qcorr.correlations import geometric_discord
from qcorr.errors import WrongDimsError
from qcorr.oracle import ClassicalQuantumState
from qcorr.states import DensityMatrix

from conftest import random_state


class TestExamples:
    def test_maximally_mixed(self):
        assert oracle.discord_bruteforce(states.maximally_mixed(), restarts=8).value == pytest.approx(0, abs=1e-12)

    def test_werner_half(self):
        res = oracle.discord_bruteforce(states.werner2(0.5), restarts=64, seed=0)
        assert res.value == pytest.approx(1 / 6, abs=1e-4)
        assert res.converged and res.restarts_used == 64

    def test_rho1(self):
        assert oracle.discord_bruteforce(states.rho1(), restarts=16).value == pytest.approx(0, abs=1e-6)

    def test_random_fixture_converges(self, fixtures):
        rho = states.load_state(fixtures / "random_seed7.json")
        res = oracle.discord_bruteforce(rho, restarts=64, seed=0)
        assert res.converged
        assert abs(res.value - geometric_discord(rho)) <= 1e-4

    @pytest.mark.parametrize("norm", ["hs", "monotone"])
    def test_normalizations(self, norm):
        rho = random_state(21)
        res = oracle.discord_bruteforce(rho, norm, restarts=32)
        assert res.value == pytest.approx(geometric_discord(rho, norm), abs=1e-4)

    def test_errors(self):
        with pytest.raises(WrongDimsError):
            oracle.discord_bruteforce(states.isotropic(3, 0.5))
        with pytest.raises(ValueError):
            oracle.discord_bruteforce(states.singlet(), restarts=0)


class TestProperties:
    @pytest.mark.parametrize("seed", range(10))
    def test_agrees_with_closed_form(self, seed):
        rho = random_state(100 + seed, rank=seed % 4 + 1)
        res = oracle.discord_bruteforce(rho, restarts=64, seed=seed)
        assert abs(res.value - geometric_discord(rho)) <= 1e-4

    @pytest.mark.parametrize("seed", range(5))
    def test_more_restarts_never_worse(self, seed):
        rho = random_state(200 + seed)
        few = oracle.discord_bruteforce(rho, restarts=8, seed=seed)
        many = oracle.discord_bruteforce(rho, restarts=64, seed=seed)
        assert many.value <= few.value + 1e-12

    def test_restart_prefix(self):
        np.testing.assert_array_equal(oracle.restart_points(8, 3), oracle.restart_points(64, 3)[:8])

    @pytest.mark.parametrize("seed", range(5))
    def test_best_params_are_classical(self, seed):
        res = oracle.discord_bruteforce(random_state(300 + seed), restarts=16, seed=seed)
        chi = DensityMatrix((2, 2), res.best_params.matrix())
        assert geometric_discord(chi) <= 1e-10

    def test_deterministic(self):
        rho = random_state(5)
        a = oracle.discord_bruteforce(rho, restarts=8, seed=11)
        b = oracle.discord_bruteforce(rho, restarts=8, seed=11)
        assert a.value == b.value
        assert np.array_equal(a.best_params.matrix(), b.best_params.matrix())


class TestParameterisation:
    def test_squash_inside_ball(self):
        cq = ClassicalQuantumState.from_raw(np.array([0.3, 1.0, 0.7, 50.0, -2, 3, 0, 0, 0]))
        assert np.linalg.norm(cq.r1) < 1 and not cq.r2.any()
        assert 0 <= cq.p1 <= 1 and 0 <= cq.theta <= np.pi

    def test_basis_orthonormal(self):
        psi1, psi2 = ClassicalQuantumState.from_raw(np.arange(9.0) / 7).basis()
        assert abs(np.vdot(psi1, psi2)) < 1e-15
        assert np.linalg.norm(psi1) == pytest.approx(1) and np.linalg.norm(psi2) == pytest.approx(1)

    def test_compiled_distance_matches_matrix(self):
        x = np.linspace(-1, 2, 9)
        rho = random_state(8).matrix
        chi = ClassicalQuantumState.from_raw(x).matrix()
        expected = float(np.sum(np.abs(rho - chi) ** 2))
        assert oracle._cq_distance(x, np.ascontiguousarray(rho)) == pytest.approx(expected, abs=1e-14)


class TestWeylDriver:
    @pytest.mark.parametrize("n", [2, 5, 8])
    def test_no_violations(self, n):
        assert oracle.weyl_property_driver(n, 2000, seed=n).violations == 0

    def test_size_limit(self):
        with pytest.raises(ValueError):
            oracle.weyl_property_driver(9, 10, 0)
