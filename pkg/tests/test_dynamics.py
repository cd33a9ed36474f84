import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcorr import dynamics, states
from qcorr.correlations import Regime, full_report
from qcorr.dynamics import Trajectory
from qcorr.errors import BadStepsError, NegativeTimeError, ParamOutOfRangeError

from conftest import random_state


class TestEvolve:
    def test_werner_decay_endpoints(self):
        ch = dynamics.werner_decay(0.95, 5.0)
        np.testing.assert_allclose(dynamics.evolve(ch, 0).matrix, states.werner2(0.95).matrix)
        np.testing.assert_allclose(dynamics.evolve(ch, 8.0).matrix, np.eye(4) / 4, atol=1e-10)

    def test_depolarizing_singlet(self):
        ch = dynamics.local_depolarizing(states.singlet(), 1.0)
        t = math.log(2.0)  # q = 1/2
        np.testing.assert_allclose(dynamics.evolve(ch, t).matrix, states.werner2(0.25).matrix, atol=1e-15)

    def test_depolarizing_stays_physical(self):
        ch = dynamics.local_depolarizing(random_state(4), 2.0)
        for t in (0.0, 0.1, 1.0, 10.0):
            assert np.trace(dynamics.evolve(ch, t).matrix).real == pytest.approx(1.0)

    def test_errors(self):
        ch = dynamics.werner_decay(0.9, 1.0)
        with pytest.raises(NegativeTimeError):
            dynamics.evolve(ch, -1.0)
        with pytest.raises(ParamOutOfRangeError):
            dynamics.werner_decay(1.2, 1.0)
        with pytest.raises(ParamOutOfRangeError):
            dynamics.werner_decay(0.5, 0.0)
        with pytest.raises(BadStepsError):
            dynamics.trajectory(ch, 1.0, 1)
        with pytest.raises(NegativeTimeError):
            dynamics.trajectory(ch, -1.0, 10)


class TestTrajectory:
    def test_regime_sequence_and_crossings(self):
        p0, gamma = 0.95, 5.0
        traj = dynamics.trajectory(dynamics.werner_decay(p0, gamma), 1.0, 1000)
        seq = [traj.reports[0].regime]
        for r in traj.reports[1:]:
            if r.regime is not seq[-1]:
                seq.append(r.regime)
        assert seq == [Regime.BellViolatingUseful, Regime.BellSatisfiedUseful, Regime.NotUseful]
        assert traj.bell_crossing_time == pytest.approx(math.log(p0 * math.sqrt(2)) / gamma, abs=1e-6)
        assert traj.usefulness_crossing_time == pytest.approx(math.log(3 * p0) / gamma, abs=1e-6)

    def test_crossing_consistency(self):
        ch = dynamics.werner_decay(0.99, 3.0)
        traj = dynamics.trajectory(ch, 1.0, 200)
        assert abs(full_report(dynamics.evolve(ch, traj.bell_crossing_time)).m - 1) <= 1e-6
        assert abs(full_report(dynamics.evolve(ch, traj.usefulness_crossing_time)).fidelity - 2 / 3) <= 1e-6

    def test_no_crossing(self):
        traj = dynamics.trajectory(dynamics.werner_decay(0.3, 1.0), 1.0, 50)
        assert traj.bell_crossing_time is None and traj.usefulness_crossing_time is None

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.05, 1.0), st.floats(0.1, 20.0))
    def test_regime_monotone(self, p0, gamma):
        traj = dynamics.trajectory(dynamics.werner_decay(p0, gamma), 2.0, 200)
        regimes = [int(r.regime) for r in traj.reports]
        assert all(a >= b for a, b in zip(regimes, regimes[1:]))

    def test_depolarizing_regime_monotone(self):
        traj = dynamics.trajectory(dynamics.local_depolarizing(states.bell_phi_plus(2), 1.0), 3.0, 300)
        regimes = [int(r.regime) for r in traj.reports]
        assert all(a >= b for a, b in zip(regimes, regimes[1:]))
        assert dynamics.audit_trajectory(traj).ok


class TestAudit:
    def test_werner_decay_clean(self):
        traj = dynamics.trajectory(dynamics.werner_decay(0.95, 5.0), 1.0, 1000)
        audit = dynamics.audit_trajectory(traj)
        assert audit.points == 1000 and audit.violations == 0 and audit.first_violation is None
        assert audit.eq9_points > 0 and audit.eq10_points > 0 and audit.eq11_points > 0

    def test_constant_mixed(self):
        traj = Trajectory.from_states(np.arange(5.0), [states.maximally_mixed()] * 5)
        audit = dynamics.audit_trajectory(traj)
        assert audit.eq10_points == 5 and audit.ok

    def test_constant_singlet(self):
        traj = Trajectory.from_states(np.arange(5.0), [states.singlet()] * 5)
        audit = dynamics.audit_trajectory(traj)
        assert audit.eq11_points == 5 and audit.ok
        assert traj.reports[0].d_g_max == pytest.approx(2 / 3)

    def test_times_ascending(self):
        with pytest.raises(ValueError):
            Trajectory.from_states([0.0, 0.0], [states.singlet()] * 2)


class TestBisection:
    def test_root(self):
        assert dynamics.bisect_root(lambda x: x * x - 2, 0, 2) == pytest.approx(math.sqrt(2), abs=1e-12)

    def test_first_crossing(self):
        grid = np.linspace(0, 3, 31)
        assert dynamics.first_crossing(grid, np.cos(grid), math.cos) == pytest.approx(math.pi / 2, abs=1e-12)
        assert dynamics.first_crossing(grid, grid + 1, lambda x: x + 1) is None
