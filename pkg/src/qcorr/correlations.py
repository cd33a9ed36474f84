"""Two-qubit correlation measures built from the Bloch representation.

A two-qubit state is written as

    rho = (I(x)I + sum_i x_i s_i(x)I + sum_i y_i I(x)s_i + sum_ij t_ij s_i(x)s_j) / 4

and every measure here is a function of ``x`` and ``T`` (``y`` never enters
because the geometric discord is the one-sided, A-measured quantity).
With ``u_1 <= u_2 <= u_3`` the eigenvalues of ``T T^t``:

* ``D_G      = s/4 (|x|^2 + |T|^2 - lambda_max(x x^t + T T^t))``
* ``D_G^min  = (|T|^2 - u_3) / 3``, ``D_G^max = (|T|^2 - u_1) / 3``
* ``M = u_2 + u_3`` (CHSH violated iff ``M > 1``)
* ``U = sum sqrt(u_i)``, ``F = (1 + U/3) / 2`` (useful iff ``F > 2/3``)
* ``N = ||rho^{T_A}||_1 - 1``

``s`` is the discord normalisation: 4/3 by default, 1 for the bare
Hilbert-Schmidt distance, 2 for the normalisation in which ``N^2 <= D_G``.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass

import numpy as np

from . import linalg
from .errors import WrongDimsError
from .states import DensityMatrix, StateLike, as_state

BELL_DISCORD_THRESHOLD = 1.0 / 3.0
USEFUL_FIDELITY = 2.0 / 3.0
AUDIT_SLACK = 1e-12
CLIP_TOL = 1e-12

NORMALIZATIONS = {"paper": 4.0 / 3.0, "hs": 1.0, "monotone": 2.0}

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)
_BASIS = [np.eye(2, dtype=np.complex128), *PAULI]
# _PAULI_PAIRS[m, n] = s_m (x) s_n, with s_0 = I
_PAULI_PAIRS = np.array([[np.kron(a, b) for b in _BASIS] for a in _BASIS])


class Regime(enum.IntEnum):
    """Ordered so that decoherence can only move a state downwards."""

    NotUseful = 0
    BellSatisfiedUseful = 1
    BellViolatingUseful = 2

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class BlochForm:
    x: np.ndarray
    y: np.ndarray
    t: np.ndarray

    def to_matrix(self) -> np.ndarray:
        coeffs = np.zeros((4, 4))
        coeffs[0, 0] = 1.0
        coeffs[1:, 0] = self.x
        coeffs[0, 1:] = self.y
        coeffs[1:, 1:] = self.t
        return np.einsum("mn,mnab->ab", coeffs, _PAULI_PAIRS) / 4


@dataclass(frozen=True)
class CorrelationReport:
    d_g: float
    d_g_min: float
    d_g_max: float
    m: float
    u: float
    fidelity: float
    negativity: float
    regime: Regime

    def as_dict(self) -> dict:
        out = asdict(self)
        out["regime"] = self.regime.name
        return out


@dataclass(frozen=True)
class TheoremAudit:
    """Which of the three regime inequalities apply to a state, and whether they hold.

    eq9:  ``(3F-2)^2 <= D_G^max <= 1/3`` for ``M <= 1`` and ``F > 2/3``
    eq10: ``0 <= D_G^max <= 2F-1`` for ``F <= 2/3``
    eq11: ``1/3 < D_G^max <= 2F-1`` for ``M > 1``
    """

    eq9_applicable: bool
    eq9_holds: bool
    eq10_applicable: bool
    eq10_holds: bool
    eq11_applicable: bool
    eq11_holds: bool

    @property
    def ok(self) -> bool:
        return self.eq9_holds and self.eq10_holds and self.eq11_holds


def _two_qubit(rho: StateLike) -> DensityMatrix:
    state = as_state(rho) if not isinstance(rho, DensityMatrix) else rho
    if state.dims != (2, 2):
        raise WrongDimsError(f"two-qubit routine needs dims (2, 2), got {state.dims}")
    return state


def _clip(value: float) -> float:
    value = float(value)
    return 0.0 if -CLIP_TOL < value < 0.0 else value


def bloch_decompose(rho: StateLike) -> BlochForm:
    state = _two_qubit(rho)
    # coeffs[m, n] = Tr(rho s_m (x) s_n)
    coeffs = np.einsum("mnab,ba->mn", _PAULI_PAIRS, state.matrix).real
    return BlochForm(coeffs[1:, 0].copy(), coeffs[0, 1:].copy(), coeffs[1:, 1:].copy())


def _tt_spectrum(t: np.ndarray) -> np.ndarray:
    # u_1 <= u_2 <= u_3, clipped at 0 against round-off
    return np.clip(linalg.eigvalsh(t @ t.T), 0.0, None)


def geometric_discord(rho: StateLike, normalization: str = "paper") -> float:
    """Closed-form A-side geometric discord of a two-qubit state."""
    scale = NORMALIZATIONS[normalization]
    b = bloch_decompose(rho)
    k = np.outer(b.x, b.x) + b.t @ b.t.T
    lam_max = linalg.eig_hermitian(k).max
    value = scale / 4.0 * (float(b.x @ b.x) + linalg.hs_norm_sq(b.t) - lam_max)
    return _clip(value)


def discord_bounds(rho: StateLike) -> tuple[float, float]:
    """``(D_G^min, D_G^max)`` from the extreme eigenvalues of ``T T^t``."""
    b = bloch_decompose(rho)
    u = _tt_spectrum(b.t)
    norm_t = linalg.hs_norm_sq(b.t)
    return _clip((norm_t - u[-1]) / 3.0), _clip((norm_t - u[0]) / 3.0)


def horodecki_m(rho: StateLike) -> float:
    u = _tt_spectrum(bloch_decompose(rho).t)
    return float(u[-1] + u[-2])


def u_value(rho: StateLike) -> float:
    u = _tt_spectrum(bloch_decompose(rho).t)
    return float(np.sum(np.sqrt(u)))


def teleportation_fidelity(rho: StateLike) -> float:
    return 0.5 * (1.0 + u_value(rho) / 3.0)


def negativity2(rho: StateLike) -> float:
    state = _two_qubit(rho)
    return max(0.0, linalg.trace_norm(state.partial_transpose("A")) - 1.0)


def regime_of(m: float, fidelity: float) -> Regime:
    if m > 1.0:
        return Regime.BellViolatingUseful
    if fidelity > USEFUL_FIDELITY:
        return Regime.BellSatisfiedUseful
    return Regime.NotUseful


def classify_regime(report: CorrelationReport) -> Regime:
    return regime_of(report.m, report.fidelity)


def audit_theorems(report: CorrelationReport) -> TheoremAudit:
    f, dmax, m = report.fidelity, report.d_g_max, report.m
    eps = AUDIT_SLACK
    eq9_app = m <= 1.0 and f > USEFUL_FIDELITY
    eq10_app = f <= USEFUL_FIDELITY
    eq11_app = m > 1.0
    eq9 = (3 * f - 2) ** 2 <= dmax + eps and dmax <= BELL_DISCORD_THRESHOLD + eps
    eq10 = -eps <= dmax <= 2 * f - 1 + eps
    eq11 = BELL_DISCORD_THRESHOLD < dmax + eps and dmax <= 2 * f - 1 + eps
    return TheoremAudit(
        eq9_app, bool(eq9) or not eq9_app,
        eq10_app, bool(eq10) or not eq10_app,
        eq11_app, bool(eq11) or not eq11_app,
    )


def full_report(rho: StateLike) -> CorrelationReport:
    """Every two-qubit measure of ``rho``, computed from one Bloch decomposition."""
    state = _two_qubit(rho)
    b = bloch_decompose(state)
    u = _tt_spectrum(b.t)
    norm_x = float(b.x @ b.x)
    norm_t = linalg.hs_norm_sq(b.t)
    lam_max = linalg.eig_hermitian(np.outer(b.x, b.x) + b.t @ b.t.T).max
    d_g = _clip(NORMALIZATIONS["paper"] / 4.0 * (norm_x + norm_t - lam_max))
    d_min = _clip((norm_t - u[-1]) / 3.0)
    d_max = _clip((norm_t - u[0]) / 3.0)
    m = float(u[-1] + u[-2])
    u_sum = float(np.sum(np.sqrt(u)))
    fidelity = 0.5 * (1.0 + u_sum / 3.0)
    neg = max(0.0, linalg.trace_norm(state.partial_transpose("A")) - 1.0)
    return CorrelationReport(d_g, d_min, d_max, m, u_sum, fidelity, neg, regime_of(m, fidelity))
