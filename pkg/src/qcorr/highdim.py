"""d x d isotropic and Werner states: negativity, witnesses, discord lower bounds.

Negativity for a d x d state is normalised as ``(||rho^{T_A}||_1 - 1)/(d - 1)``
so that it reduces to the two-qubit convention at d = 2. Every discord lower
bound here is a negativity squared, which bounds the discord in its
monotone (factor 2) normalisation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .correlations import geometric_discord
from .errors import (
    DimensionMismatchError,
    DimensionTooLargeError,
    NotApplicableError,
    NotDetectedError,
)
from .states import (
    DensityMatrix,
    StateLike,
    _check_dim,
    _check_unit,
    as_state,
    isotropic,
    phi_plus_projector,
    werner_d,
)

RECONSTRUCTION_TOL = 1e-12
MAX_DECOMPOSITION_DIM = 8
ZERO_COEFF = 1e-12


class WitnessFamily(str, enum.Enum):
    IsotropicWf = "wf"
    WernerWx = "wx"


@dataclass(frozen=True, eq=False)
class Witness:
    family: WitnessFamily
    d: int
    matrix: np.ndarray


def isotropic_witness(d: int) -> Witness:
    """``W_f = I/d - |phi+><phi+|``."""
    d = _check_dim(d)
    w = np.eye(d * d, dtype=np.complex128) / d - phi_plus_projector(d)
    return Witness(WitnessFamily.IsotropicWf, d, w)


def werner_witness(d: int) -> Witness:
    """``W_x = (|phi+><phi+|)^{T_A}``, which equals the swap operator over d."""
    d = _check_dim(d)
    w = linalg.partial_transpose(phi_plus_projector(d), (d, d), "A")
    return Witness(WitnessFamily.WernerWx, d, w)


def make_witness(family: str, d: int) -> Witness:
    family = WitnessFamily(family)
    return isotropic_witness(d) if family is WitnessFamily.IsotropicWf else werner_witness(d)


def witness_expectation(witness: Witness, rho: StateLike) -> float:
    state = as_state(rho)
    if state.dims != (witness.d, witness.d):
        raise DimensionMismatchError(f"witness is {witness.d}x{witness.d}, state dims are {state.dims}")
    return float(np.real(np.sum(witness.matrix.T * state.matrix)))


# ---------------------------------------------------------------------------
# Negativity and fidelity


def negativity(rho: StateLike) -> float:
    """Numerical negativity ``(||rho^{T_A}||_1 - 1)/(d - 1)`` of a d x d state."""
    state = as_state(rho)
    d_a, d_b = state.dims
    if d_a != d_b:
        raise DimensionMismatchError(f"negativity normalisation needs d x d, got {state.dims}")
    return max(0.0, (linalg.trace_norm(state.partial_transpose("A")) - 1.0) / (d_a - 1))


def isotropic_negativity(d: int, f: float) -> float:
    d = _check_dim(d)
    f = _check_unit("f", f)
    return max(0.0, (f * d - 1.0) / (d - 1))


def isotropic_fidelity(d: int, f: float) -> float:
    """Optimal teleportation fidelity ``(d f + 1)/(d + 1)`` from the singlet fraction."""
    d = _check_dim(d)
    f = _check_unit("f", f)
    return (d * f + 1.0) / (d + 1)


def useful_fidelity(d: int) -> float:
    return 2.0 / (d + 1)


def werner_d_negativity(d: int, w: float) -> float:
    d = _check_dim(d)
    w = _check_unit("w", w)
    return max(0.0, (2.0 / d) * (2.0 * w - 1.0) / (d - 1))


def singlet_fraction_bound_werner(d: int, w: float) -> float:
    """Upper bound ``(1 + 2N)/d`` on the singlet fraction, clipped at 1.

    This is a bound, not the singlet fraction itself; use
    :func:`singlet_fraction_bound_werner_raw` to see the unclipped value.
    """
    return min(1.0, singlet_fraction_bound_werner_raw(d, w))


def singlet_fraction_bound_werner_raw(d: int, w: float) -> float:
    return (1.0 + 2.0 * werner_d_negativity(d, w)) / d


# ---------------------------------------------------------------------------
# Discord lower bounds


def discord_lower_bound_fidelity(d: int, fidelity: float) -> float:
    """``(((d+1)F - 2)/(d-1))^2``, valid when the state is useful (``F > 2/(d+1)``)."""
    d = _check_dim(d)
    if not fidelity > useful_fidelity(d):
        raise NotApplicableError(f"F = {fidelity} does not exceed 2/(d+1) = {useful_fidelity(d)}")
    return (((d + 1) * fidelity - 2.0) / (d - 1)) ** 2


def discord_lower_bound_witness_isotropic(d: int, expectation: float) -> float:
    """``(d/(d-1))^2 Tr(W_f rho)^2`` for a detected state."""
    d = _check_dim(d)
    if not expectation < 0:
        raise NotDetectedError(f"witness expectation {expectation} is not negative")
    return (d / (d - 1)) ** 2 * expectation**2


def discord_lower_bound_witness_werner(d: int, expectation: float) -> float:
    """``(2/(d-1))^2 Tr(W_x rho)^2`` for a detected state."""
    d = _check_dim(d)
    if not expectation < 0:
        raise NotDetectedError(f"witness expectation {expectation} is not negative")
    return (2.0 / (d - 1)) ** 2 * expectation**2


# ---------------------------------------------------------------------------
# Local generator decomposition


@dataclass(frozen=True)
class Generator:
    label: str
    matrix: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass(frozen=True)
class GeneratorDecomposition:
    d: int
    basis_name: str
    generators: tuple[Generator, ...]
    coefficients: np.ndarray
    residual: float

    @property
    def nonzero_terms(self) -> list[tuple[str, str, float]]:
        idx = np.argwhere(np.abs(self.coefficients) > ZERO_COEFF)
        return [
            (self.generators[i].label, self.generators[j].label, float(self.coefficients[i, j]))
            for i, j in idx
        ]

    @property
    def settings(self) -> int:
        """Local measurement settings: nonzero terms other than identity (x) identity."""
        return sum(1 for a, b, _ in self.nonzero_terms if (a, b) != ("I", "I"))

    def reconstruct(self) -> np.ndarray:
        mats = [g.matrix for g in self.generators]
        out = np.zeros((self.d * self.d, self.d * self.d), dtype=np.complex128)
        for i, j in np.argwhere(self.coefficients != 0):
            out += self.coefficients[i, j] * np.kron(mats[i], mats[j])
        return out


def gell_mann_basis(d: int) -> tuple[Generator, ...]:
    """Identity plus the d^2 - 1 generalised Gell-Mann matrices (``Tr g_i g_j = 2 delta_ij``).

    Ordering: identity, symmetric ``E_jk + E_kj``, antisymmetric
    ``-i E_jk + i E_kj`` (both over j < k), then diagonal ones. For d = 2
    this is ``I, sx, sy, sz``.
    """
    d = _check_dim(d)
    gens = [Generator("I", np.eye(d, dtype=np.complex128))]
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    qubit = d == 2
    for j, k in pairs:
        g = np.zeros((d, d), dtype=np.complex128)
        g[j, k] = g[k, j] = 1.0
        gens.append(Generator("sx" if qubit else f"S{j}{k}", g))
    for j, k in pairs:
        g = np.zeros((d, d), dtype=np.complex128)
        g[j, k] = -1j
        g[k, j] = 1j
        gens.append(Generator("sy" if qubit else f"A{j}{k}", g))
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        g = np.diag(math.sqrt(2.0 / (l * (l + 1))) * diag).astype(np.complex128)
        gens.append(Generator("sz" if qubit else f"D{l}", g))
    return tuple(gens)


def witness_local_decomposition(witness: Witness) -> GeneratorDecomposition:
    """Expand ``W = sum_ij c_ij g_i (x) g_j`` with ``c_ij = Tr(W g_i(x)g_j)/(n_i n_j)``."""
    d = witness.d
    if d > MAX_DECOMPOSITION_DIM:
        raise DimensionTooLargeError(f"decomposition supports d <= {MAX_DECOMPOSITION_DIM}, got {d}")
    gens = gell_mann_basis(d)
    w4 = witness.matrix.reshape(d, d, d, d)
    coeffs = np.empty((len(gens), len(gens)))
    for i, gi in enumerate(gens):
        # partial contraction over A first: Tr_A(W (g_i (x) I))
        reduced = np.einsum("ajbk,ba->jk", w4, gi.matrix)
        for j, gj in enumerate(gens):
            coeffs[i, j] = np.real(np.trace(reduced @ gj.matrix)) / (gi.norm * gj.norm)
    name = {2: "pauli", 3: "gell-mann"}.get(d, "generalized-gell-mann")
    dec = GeneratorDecomposition(d, name, gens, coeffs, 0.0)
    residual = float(np.sqrt(linalg.hs_norm_sq(dec.reconstruct() - witness.matrix)))
    return GeneratorDecomposition(d, name, gens, coeffs, residual)


# ---------------------------------------------------------------------------
# Reports


def _numeric_or_none(fn, *args):
    try:
        return fn(*args)
    except (NotApplicableError, NotDetectedError):
        return None


def isotropic_report(d: int, f: float) -> dict:
    """Every isotropic-state quantity, with bounds marked ``None`` where they do not apply."""
    rho = isotropic(d, f)
    fid = isotropic_fidelity(d, f)
    exp = witness_expectation(isotropic_witness(d), rho)
    out = {
        "family": "isotropic",
        "d": d,
        "f": f,
        "negativity": isotropic_negativity(d, f),
        "negativity_numeric": negativity(rho),
        "fidelity": fid,
        "useful": fid > useful_fidelity(d),
        "witness_expectation": exp,
        "detected": exp < 0,
        "lower_bound_fidelity": _numeric_or_none(discord_lower_bound_fidelity, d, fid),
        "lower_bound_witness": _numeric_or_none(discord_lower_bound_witness_isotropic, d, exp),
        "discord_normalization": "monotone",
    }
    if d == 2:
        out["d_g_monotone"] = geometric_discord(rho, "monotone")
    return out


def werner_report(d: int, w: float) -> dict:
    rho = werner_d(d, w)
    exp = witness_expectation(werner_witness(d), rho)
    raw = singlet_fraction_bound_werner_raw(d, w)
    out = {
        "family": "werner-d",
        "d": d,
        "w": w,
        "negativity": werner_d_negativity(d, w),
        "negativity_numeric": negativity(rho),
        "witness_expectation": exp,
        "detected": exp < 0,
        "lower_bound_witness": _numeric_or_none(discord_lower_bound_witness_werner, d, exp),
        "singlet_fraction_bound": min(1.0, raw),
        "singlet_fraction_bound_clipped": raw > 1.0,
        "discord_normalization": "monotone",
    }
    if d == 2:
        out["d_g_monotone"] = geometric_discord(rho, "monotone")
    return out


def generic_report(rho: DensityMatrix) -> dict:
    """Negativity and witness expectations of an arbitrary d x d state.

    The witness-derived discord bounds are only established for the
    isotropic and Werner families, so none are reported here.
    """
    d = rho.dims[0]
    if rho.dims[0] != rho.dims[1]:
        raise DimensionMismatchError(f"d x d report needs equal dims, got {rho.dims}")
    wf = witness_expectation(isotropic_witness(d), rho)
    wx = witness_expectation(werner_witness(d), rho)
    return {
        "family": "generic",
        "d": d,
        "negativity_numeric": negativity(rho),
        "wf_expectation": wf,
        "wx_expectation": wx,
        "detected": wf < 0 or wx < 0,
    }
