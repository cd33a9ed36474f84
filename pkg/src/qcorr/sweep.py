"""Parameter sweeps over the named state families, with threshold location."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import highdim
from .correlations import BELL_DISCORD_THRESHOLD, USEFUL_FIDELITY, CorrelationReport, audit_theorems, full_report
from .dynamics import first_crossing
from .errors import BadStepsError, ParamOutOfRangeError
from .states import DensityMatrix, isotropic, werner2, werner_d

CSV_COLUMNS = (
    "param_or_time", "d_g", "d_g_min", "d_g_max", "m", "u",
    "fidelity", "negativity", "regime", "eq9", "eq10", "eq11",
)
ISOTROPIC_COLUMNS = (
    "f", "negativity", "negativity_numeric", "fidelity", "witness_expectation",
    "lower_bound_fidelity", "lower_bound_witness", "detected",
)
WERNER_D_COLUMNS = (
    "w", "negativity", "negativity_numeric", "witness_expectation",
    "lower_bound_witness", "singlet_fraction_bound", "detected",
)


def audit_flag(applicable: bool, holds: bool) -> str:
    if not applicable:
        return "n/a"
    return "ok" if holds else "FAIL"


def report_row(param: float, report: CorrelationReport, label: Optional[str] = None) -> dict:
    """One CSV row in the fixed two-qubit schema; ``label`` replaces the regime on annotation rows."""
    audit = audit_theorems(report)
    row = {"param_or_time": param}
    row.update({k: v for k, v in report.as_dict().items()})
    if label is not None:
        row["regime"] = label
    row["eq9"] = audit_flag(audit.eq9_applicable, audit.eq9_holds)
    row["eq10"] = audit_flag(audit.eq10_applicable, audit.eq10_holds)
    row["eq11"] = audit_flag(audit.eq11_applicable, audit.eq11_holds)
    return {k: row[k] for k in CSV_COLUMNS}


@dataclass
class SweepResult:
    columns: tuple[str, ...]
    rows: list[dict]
    thresholds: dict[str, Optional[float]] = field(default_factory=dict)
    annotations: list[dict] = field(default_factory=list)


def grid(start: float, stop: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise BadStepsError(f"need at least 2 steps, got {steps}")
    if not start < stop:
        raise ParamOutOfRangeError(f"sweep range must satisfy from < to, got [{start}, {stop}]")
    return np.linspace(start, stop, steps)


def _locate(points: np.ndarray, fn: Callable[[float], float]) -> Optional[float]:
    return first_crossing(points, np.array([fn(x) for x in points]), fn)


def werner_thresholds(points: np.ndarray, factory: Callable[[float], DensityMatrix] = werner2) -> dict:
    """Bell (M = 1), usefulness (F = 2/3) and the upper edge of ``(3F-2)^2 <= 1/3``."""

    def bell(p):
        return full_report(factory(p)).m - 1.0

    def useful(p):
        return full_report(factory(p)).fidelity - USEFUL_FIDELITY

    def window(p):
        return (3.0 * full_report(factory(p)).fidelity - 2.0) ** 2 - BELL_DISCORD_THRESHOLD

    return {"bell": _locate(points, bell), "useful": _locate(points, useful), "eq9_window": _locate(points, window)}


def werner_sweep(start: float, stop: float, steps: int) -> SweepResult:
    points = grid(start, stop, steps)
    rows = [report_row(float(p), full_report(werner2(p))) for p in points]
    thresholds = werner_thresholds(points)
    annotations = [
        report_row(t, full_report(werner2(t)), f"threshold:{name}")
        for name, t in thresholds.items()
        if t is not None
    ]
    return SweepResult(CSV_COLUMNS, rows, thresholds, annotations)


def isotropic_sweep(d: int, start: float, stop: float, steps: int) -> SweepResult:
    points = grid(start, stop, steps)
    rows = [_isotropic_row(d, float(f)) for f in points]
    witness = highdim.isotropic_witness(d)
    detection = _locate(points, lambda f: highdim.witness_expectation(witness, isotropic(d, f)))
    annotations = [] if detection is None else [dict(_isotropic_row(d, detection), detected="threshold:detection")]
    return SweepResult(ISOTROPIC_COLUMNS, rows, {"detection": detection}, annotations)


def _isotropic_row(d: int, f: float) -> dict:
    rep = highdim.isotropic_report(d, f)
    return {k: rep[k] for k in ISOTROPIC_COLUMNS}


def werner_d_sweep(d: int, start: float, stop: float, steps: int) -> SweepResult:
    points = grid(start, stop, steps)
    rows = [_werner_d_row(d, float(w)) for w in points]
    witness = highdim.werner_witness(d)
    detection = _locate(points, lambda w: highdim.witness_expectation(witness, werner_d(d, w)))
    annotations = [] if detection is None else [dict(_werner_d_row(d, detection), detected="threshold:detection")]
    return SweepResult(WERNER_D_COLUMNS, rows, {"detection": detection}, annotations)


def _werner_d_row(d: int, w: float) -> dict:
    rep = highdim.werner_report(d, w)
    return {k: rep[k] for k in WERNER_D_COLUMNS}
