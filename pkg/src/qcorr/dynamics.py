"""Decoherence trajectories and the regime sequence they pass through.

Two channels are provided. ``WernerDecay`` shrinks the Werner parameter as
``p0 exp(-rate t)``, so every measure along the trajectory has a closed form
and the regime crossings can be inverted analytically. ``LocalDepolarizing``
applies ``rho -> (1 - q) rho + q I/2`` to each qubit with
``q = 1 - exp(-rate t)`` and works for any two-qubit initial state.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import linalg
from .correlations import USEFUL_FIDELITY, CorrelationReport, TheoremAudit, audit_theorems, full_report
from .errors import BadStepsError, NegativeTimeError, ParamOutOfRangeError
from .states import DensityMatrix, werner2

CROSSING_TOL = 1e-12


class ChannelKind(str, enum.Enum):
    WernerDecay = "werner-decay"
    LocalDepolarizing = "local-depolarizing"


@dataclass(frozen=True, eq=False)
class Channel:
    kind: ChannelKind
    rate: float
    p0: float = 1.0
    initial: Optional[DensityMatrix] = None

    def __post_init__(self):
        if not self.rate > 0:
            raise ParamOutOfRangeError(f"rate must be positive, got {self.rate}")
        if not 0.0 <= self.p0 <= 1.0:
            raise ParamOutOfRangeError(f"p0 must lie in [0, 1], got {self.p0}")
        if self.kind is ChannelKind.LocalDepolarizing and self.initial is None:
            raise ValueError("LocalDepolarizing needs an initial state")


def werner_decay(p0: float, rate: float) -> Channel:
    return Channel(ChannelKind.WernerDecay, rate, p0)


def local_depolarizing(initial: DensityMatrix, rate: float) -> Channel:
    return Channel(ChannelKind.LocalDepolarizing, rate, initial=initial)


def depolarize_both(rho: DensityMatrix, q: float) -> DensityMatrix:
    """Apply the single-qubit depolarizing map with strength ``q`` to A and B."""
    m = rho.matrix
    # Lambda_A(m) = (1-q) m + q I/2 (x) Tr_A m, and likewise on B
    m = (1 - q) * m + q * linalg.kron(np.eye(2) / 2, linalg.partial_trace(m, (2, 2), "A"))
    m = (1 - q) * m + q * linalg.kron(linalg.partial_trace(m, (2, 2), "B"), np.eye(2) / 2)
    return DensityMatrix((2, 2), m)


def evolve(channel: Channel, t: float) -> DensityMatrix:
    if t < 0:
        raise NegativeTimeError(f"time must be non-negative, got {t}")
    if channel.kind is ChannelKind.WernerDecay:
        return werner2(channel.p0 * math.exp(-channel.rate * t))
    if t == 0:
        return channel.initial
    return depolarize_both(channel.initial, -math.expm1(-channel.rate * t))


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    reports: tuple[CorrelationReport, ...]
    bell_crossing_time: Optional[float] = None
    usefulness_crossing_time: Optional[float] = None

    def __post_init__(self):
        if len(self.times) != len(self.reports):
            raise ValueError("times and reports differ in length")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly ascending")

    @classmethod
    def from_states(cls, times: Sequence[float], states: Sequence[DensityMatrix]) -> "Trajectory":
        """Wrap precomputed states (no crossing search)."""
        return cls(np.asarray(times, dtype=float), tuple(full_report(s) for s in states))


def bisect_root(fn: Callable[[float], float], lo: float, hi: float, tol: float = CROSSING_TOL) -> float:
    """Root of ``fn`` in ``[lo, hi]`` by bisection; ``fn(lo)`` and ``fn(hi)`` must differ in sign."""
    f_lo = fn(lo)
    if f_lo == 0:
        return lo
    if fn(hi) == 0:
        return hi
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        f_mid = fn(mid)
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def first_crossing(grid: np.ndarray, values: np.ndarray, fn: Callable[[float], float]) -> Optional[float]:
    """Locate the first sign change of ``values`` on ``grid`` and refine it with ``fn``."""
    sign = np.sign(values)
    for i in range(len(grid) - 1):
        if sign[i] == 0:
            return float(grid[i])
        if sign[i] != sign[i + 1]:
            return bisect_root(fn, float(grid[i]), float(grid[i + 1]))
    return float(grid[-1]) if sign[-1] == 0 else None


def trajectory(channel: Channel, t_max: float, steps: int) -> Trajectory:
    """Evaluate ``full_report`` on ``steps`` evenly spaced times in ``[0, t_max]``."""
    if t_max < 0:
        raise NegativeTimeError(f"t_max must be non-negative, got {t_max}")
    if steps < 2:
        raise BadStepsError(f"need at least 2 steps, got {steps}")
    if t_max == 0:
        raise BadStepsError("t_max must be positive to span a grid")
    times = np.linspace(0.0, t_max, steps)
    reports = tuple(full_report(evolve(channel, t)) for t in times)

    def bell(t):
        return full_report(evolve(channel, t)).m - 1.0

    def useful(t):
        return full_report(evolve(channel, t)).fidelity - USEFUL_FIDELITY

    m_vals = np.array([r.m - 1.0 for r in reports])
    f_vals = np.array([r.fidelity - USEFUL_FIDELITY for r in reports])
    return Trajectory(times, reports, first_crossing(times, m_vals, bell), first_crossing(times, f_vals, useful))


@dataclass(frozen=True)
class TrajectoryAudit:
    points: int
    eq9_points: int
    eq10_points: int
    eq11_points: int
    violations: int
    first_violation: Optional[int] = None
    audits: tuple[TheoremAudit, ...] = field(default=(), repr=False)

    @property
    def ok(self) -> bool:
        return self.violations == 0


def audit_trajectory(traj: Trajectory) -> TrajectoryAudit:
    audits = tuple(audit_theorems(r) for r in traj.reports)
    bad = [i for i, a in enumerate(audits) if not a.ok]
    return TrajectoryAudit(
        points=len(audits),
        eq9_points=sum(a.eq9_applicable for a in audits),
        eq10_points=sum(a.eq10_applicable for a in audits),
        eq11_points=sum(a.eq11_applicable for a in audits),
        violations=len(bad),
        first_violation=bad[0] if bad else None,
        audits=audits,
    )
