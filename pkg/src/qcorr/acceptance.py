"""Release gate: eleven numbered checks, each run at a fixed tolerance.

``run_all`` executes them in order and returns one :class:`CriterionResult`
per check; the ``selftest`` CLI command and ``tests/test_acceptance.py``
both drive this module.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from . import correlations as corr
from . import dynamics, highdim, linalg, oracle, states
from .sweep import werner_thresholds

SEED = 20240601
N_RANDOM = 10_000
WEYL_PAIRS = 100_000
ORACLE_STATES = 100
ORACLE_RESTARTS = 64
SELFTEST_BUDGET_S = 300.0


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d}. {self.title}: {self.detail} ({self.seconds:.1f}s)"


def random_states(n: int, seed: int) -> Iterator[np.ndarray]:
    """Random two-qubit states cycling through ranks 1-4."""
    rng = linalg.make_rng(seed)
    for i in range(n):
        yield linalg.random_density_matrix(2, 2, 1 + i % 4, rng)


def _random_reports(n: int, seed: int):
    for m in random_states(n, seed):
        rho = states.DensityMatrix((2, 2), m)
        yield rho, corr.full_report(rho)


# --------------------------------------------------------------------------


def c1_max_discord_identity():
    start = time.perf_counter()
    worst = max(abs(r.d_g_max - r.m / 3.0) for _, r in _random_reports(N_RANDOM, SEED + 1))
    took = time.perf_counter() - start
    ok = worst <= 1e-12 and took < 10.0
    return ok, f"max |D_G^max - M/3| = {worst:.2e} over {N_RANDOM} states in {took:.1f}s (limit 10s)"


def c2_werner_closed_forms():
    ps = np.linspace(0.0, 1.0, 1000)
    worst = {"d_g": 0.0, "fidelity": 0.0, "m": 0.0, "negativity": 0.0}
    for p in ps:
        r = corr.full_report(states.werner2(p))
        worst["d_g"] = max(worst["d_g"], abs(r.d_g - 2.0 / 3.0 * p * p))
        worst["fidelity"] = max(worst["fidelity"], abs(r.fidelity - (1 + p) / 2))
        worst["m"] = max(worst["m"], abs(r.m - 2 * p * p))
        worst["negativity"] = max(worst["negativity"], abs(r.negativity - max(0.0, (3 * p - 1) / 2)))
    th = werner_thresholds(ps)
    bell_err = abs(th["bell"] - 1 / math.sqrt(2))
    edge_err = abs(th["eq9_window"] - (1 / 3 + 2 / (3 * math.sqrt(3))))
    ok = max(worst.values()) <= 1e-10 and bell_err <= 1e-6 and edge_err <= 1e-4
    return ok, (
        f"max closed-form error {max(worst.values()):.1e}; "
        f"Bell p = {th['bell']:.9f} (err {bell_err:.1e}); window edge = {th['eq9_window']:.6f} (err {edge_err:.1e})"
    )


def c3_weyl():
    sizes = range(2, 9)
    per = math.ceil(WEYL_PAIRS / len(sizes))
    reports = [oracle.weyl_property_driver(n, per, SEED + 3 + n) for n in sizes]
    violations = sum(r.violations for r in reports)
    worst = min(r.worst_slack for r in reports)
    return violations == 0, f"{violations} violations over {per * len(sizes)} pairs, worst slack {worst:.2e}"


def c4_sandwich():
    worst = 0.0
    for _, r in _random_reports(N_RANDOM, SEED + 4):
        worst = max(worst, r.d_g_min - r.d_g, r.d_g - r.d_g_max)
    eq = 0.0
    for p in np.linspace(0, 1, 101):
        r = corr.full_report(states.werner2(p))
        eq = max(eq, abs(r.d_g_min - r.d_g), abs(r.d_g_max - r.d_g))
    ok = worst <= 1e-12 and eq <= 1e-12
    return ok, f"worst sandwich excess {worst:.2e}; Werner equality spread {eq:.2e}"


def c5_inequalities():
    slack = 1e-10
    counts = {"D_G^max<=2F-1": 0, "3F-2<=N": 0, "M<=U": 0, "N^2<=D_G(mono)": 0}
    entangled = 0
    for rho, r in _random_reports(N_RANDOM, SEED + 5):
        counts["D_G^max<=2F-1"] += r.d_g_max > 2 * r.fidelity - 1 + slack
        counts["3F-2<=N"] += 3 * r.fidelity - 2 > r.negativity + slack
        counts["M<=U"] += r.m > r.u + slack
        if r.negativity > 1e-8:
            entangled += 1
            counts["N^2<=D_G(mono)"] += r.negativity**2 > corr.geometric_discord(rho, "monotone") + slack
    total = sum(counts.values())
    detail = ", ".join(f"{k}: {v}" for k, v in counts.items())
    return total == 0, f"violations {detail} ({entangled} entangled samples)"


def c6_separable():
    rng = linalg.make_rng(SEED + 6)
    worst_m = worst_d = -math.inf
    for i in range(N_RANDOM):
        rho = linalg.random_separable_state(1 + i % 6, rng)
        r = corr.full_report(states.DensityMatrix((2, 2), rho))
        worst_m = max(worst_m, r.m)
        worst_d = max(worst_d, r.d_g_max)
    r1 = corr.full_report(states.rho1())
    ok = (
        worst_m <= 1 + 1e-9
        and worst_d <= 1 / 3 + 1e-9
        and abs(r1.d_g_max - 1 / 3) <= 1e-12
        and abs(r1.d_g) <= 1e-12
    )
    return ok, f"max M = {worst_m:.6f}, max D_G^max = {worst_d:.6f}; rho1 D_G^max = {r1.d_g_max:.12f}, D_G = {r1.d_g:.1e}"


def c7_oracle():
    start = time.perf_counter()
    worst = 0.0
    converged = 0
    for i, m in enumerate(random_states(ORACLE_STATES, SEED + 7)):
        rho = states.DensityMatrix((2, 2), m)
        res = oracle.discord_bruteforce(rho, "paper", ORACLE_RESTARTS, SEED + i)
        worst = max(worst, abs(res.value - corr.geometric_discord(rho)))
        converged += res.converged
    probe = states.DensityMatrix((2, 2), next(random_states(1, SEED + 7)))
    a = oracle.discord_bruteforce(probe, "paper", 8, 11)
    b = oracle.discord_bruteforce(probe, "paper", 8, 11)
    deterministic = a.value == b.value and np.array_equal(a.best_params.matrix(), b.best_params.matrix())
    took = time.perf_counter() - start
    ok = worst <= 1e-4 and deterministic and took < 180.0
    return ok, (
        f"max |oracle - closed form| = {worst:.2e} over {ORACLE_STATES} states; "
        f"{converged} converged; deterministic {deterministic}; {took:.0f}s (limit 180s)"
    )


def c8_isotropic_chain():
    fs = np.linspace(0.0, 1.0, 50)
    errs = {"witness": 0.0, "identity": 0.0, "negativity": 0.0, "fidelity": 0.0}
    d2_excess = -math.inf
    for d in (2, 3, 4, 5):
        w = highdim.isotropic_witness(d)
        phi = states.phi_plus_projector(d)
        for f in fs:
            rho = states.isotropic(d, f)
            exp = highdim.witness_expectation(w, rho)
            errs["witness"] = max(errs["witness"], abs(exp - (1 / d - f)))
            n_formula = highdim.isotropic_negativity(d, f)
            errs["negativity"] = max(errs["negativity"], abs(highdim.negativity(rho) - n_formula))
            # fidelity from the measured singlet fraction <phi+|rho|phi+>
            overlap = rho.expectation(phi)
            errs["fidelity"] = max(errs["fidelity"], abs((d * overlap + 1) / (d + 1) - highdim.isotropic_fidelity(d, f)))
            if f > 1 / d:
                errs["identity"] = max(errs["identity"], abs(d / (d - 1) * (-exp) - n_formula))
            # below f = 1/d^2 another maximally entangled state overlaps more than phi+,
            # so the optimal two-qubit fidelity departs from (2f + 1)/3
            if d == 2 and f >= 0.25:
                errs["fidelity"] = max(errs["fidelity"], abs(corr.teleportation_fidelity(rho) - highdim.isotropic_fidelity(2, f)))
                if f > 0.5:
                    bound = highdim.discord_lower_bound_witness_isotropic(2, exp)
                    d2_excess = max(d2_excess, bound - corr.geometric_discord(rho, "monotone"))
    ok = (
        errs["witness"] <= 1e-12
        and errs["identity"] <= 1e-12
        and errs["negativity"] <= 1e-10
        and errs["fidelity"] <= 1e-12
        and d2_excess <= 1e-10
    )
    detail = ", ".join(f"{k} {v:.1e}" for k, v in errs.items())
    return ok, f"max errors: {detail}; d=2 bound - D_G(mono) <= {d2_excess:.1e}"


def c9_werner_chain():
    ws = np.linspace(0.0, 1.0, 50)
    errs = {"witness": 0.0, "negativity": 0.0, "bound": 0.0}
    ppt = 0.0
    for d in (2, 3, 4, 5):
        wit = highdim.werner_witness(d)
        for w in ws:
            rho = states.werner_d(d, w)
            exp = highdim.witness_expectation(wit, rho)
            errs["witness"] = max(errs["witness"], abs(exp - (1 - 2 * w) / d))
            if w > 0.5:
                n_formula = (2 / d) * (2 * w - 1) / (d - 1)
                errs["negativity"] = max(errs["negativity"], abs(highdim.negativity(rho) - n_formula))
                bound = highdim.discord_lower_bound_witness_werner(d, exp)
                errs["bound"] = max(errs["bound"], abs(bound - highdim.werner_d_negativity(d, w) ** 2))
        boundary = states.werner_d(d, 0.5)
        ppt = max(ppt, abs(linalg.eig_hermitian(boundary.partial_transpose()).min))
    ok = errs["witness"] <= 1e-12 and errs["negativity"] <= 1e-10 and errs["bound"] <= 1e-12 and ppt <= 1e-10
    detail = ", ".join(f"{k} {v:.1e}" for k, v in errs.items())
    return ok, f"max errors: {detail}; |min PT eigenvalue| at w=1/2: {ppt:.1e}"


def c10_trajectory():
    p0, gamma = 0.95, 5.0
    traj = dynamics.trajectory(dynamics.werner_decay(p0, gamma), 1.0, 1000)
    regimes = [r.regime for r in traj.reports]
    sequence = [regimes[0]] + [b for a, b in zip(regimes, regimes[1:]) if a != b]
    expected = [corr.Regime.BellViolatingUseful, corr.Regime.BellSatisfiedUseful, corr.Regime.NotUseful]
    bell_err = abs(traj.bell_crossing_time - math.log(p0 * math.sqrt(2)) / gamma)
    useful_err = abs(traj.usefulness_crossing_time - math.log(3 * p0) / gamma)
    audit = dynamics.audit_trajectory(traj)
    ok = sequence == expected and bell_err <= 1e-6 and useful_err <= 1e-6 and audit.violations == 0
    names = " -> ".join(r.name for r in sequence)
    return ok, f"{names}; crossing errors {bell_err:.1e}, {useful_err:.1e}; {audit.violations} audit violations"


def c11_decomposition(elapsed: float = 0.0):
    worst = max(
        highdim.witness_local_decomposition(highdim.make_witness(fam, d)).residual
        for fam in ("wf", "wx")
        for d in (2, 3, 4)
    )
    ok = worst <= 1e-12 and elapsed < SELFTEST_BUDGET_S
    return ok, f"max reconstruction residual {worst:.1e}; suite time {elapsed:.0f}s (budget {SELFTEST_BUDGET_S:.0f}s)"


CRITERIA: list[tuple[int, str, Callable]] = [
    (1, "D_G^max = M/3 identity", c1_max_discord_identity),
    (2, "Werner closed forms and thresholds", c2_werner_closed_forms),
    (3, "Weyl eigenvalue bounds", c3_weyl),
    (4, "Discord sandwich", c4_sandwich),
    (5, "Inequality suite", c5_inequalities),
    (6, "Separable-state bounds", c6_separable),
    (7, "Brute-force oracle agreement", c7_oracle),
    (8, "Isotropic chain", c8_isotropic_chain),
    (9, "Werner-d chain", c9_werner_chain),
    (10, "Trajectory regimes", c10_trajectory),
    (11, "Witness decomposition and suite budget", c11_decomposition),
]


def run_criterion(number: int, elapsed: float = 0.0) -> CriterionResult:
    _, title, fn = CRITERIA[number - 1]
    start = time.perf_counter()
    ok, detail = fn(elapsed) if number == 11 else fn()
    return CriterionResult(number, title, bool(ok), detail, time.perf_counter() - start)


def run_all(report: Callable[[CriterionResult], None] = None) -> list[CriterionResult]:
    start = time.perf_counter()
    results = []
    for number, _, _ in CRITERIA:
        res = run_criterion(number, time.perf_counter() - start)
        results.append(res)
        if report is not None:
            report(res)
    return results
