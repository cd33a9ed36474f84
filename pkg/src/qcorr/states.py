"""Named bipartite states, validation, and JSON state files."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Union

import numpy as np

from . import linalg
from .errors import (
    BadDimensionError,
    DimensionMismatchError,
    InvariantViolation,
    NonHermitianError,
    NonSquareError,
    ParamOutOfRangeError,
    ParseError,
)

TRACE_TOL = 1e-10
PSD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated bipartite state with explicit subsystem dimensions.

    Construction checks Hermiticity (1e-12, then symmetrises), unit trace
    and positivity, raising :class:`InvariantViolation` on failure.
    """

    dims: tuple[int, int]
    matrix: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 2 or min(dims) < 1:
            raise DimensionMismatchError(f"dims must be two positive integers, got {self.dims}")
        try:
            m = linalg.as_matrix(self.matrix)
        except NonSquareError as exc:
            raise DimensionMismatchError(str(exc)) from exc
        n = dims[0] * dims[1]
        if m.shape != (n, n):
            raise DimensionMismatchError(f"matrix of shape {m.shape} does not match dims {dims}")
        try:
            m = linalg.symmetrize(m)
        except NonHermitianError as exc:
            raise InvariantViolation("hermiticity", str(exc)) from exc
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvariantViolation("trace", f"trace {tr!r} differs from 1 by more than {TRACE_TOL:.0e}")
        lam_min = linalg.eig_hermitian(m).min
        if lam_min < -PSD_TOL:
            raise InvariantViolation("psd", f"minimum eigenvalue {lam_min:.3e} below -{PSD_TOL:.0e}")
        m.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.dims[0] * self.dims[1]

    def partial_transpose(self, subsystem: str = "A") -> np.ndarray:
        return linalg.partial_transpose(self.matrix, self.dims, subsystem)

    def reduced(self, keep: str = "A") -> np.ndarray:
        return linalg.partial_trace(self.matrix, self.dims, "B" if keep == "A" else "A")

    def expectation(self, op) -> float:
        return float(np.real(np.trace(np.asarray(op) @ self.matrix)))


StateLike = Union[DensityMatrix, np.ndarray]


def as_state(rho: StateLike, dims=None) -> DensityMatrix:
    if isinstance(rho, DensityMatrix):
        return rho
    m = np.asarray(rho)
    if dims is None:
        d = math.isqrt(m.shape[0])
        if d * d != m.shape[0]:
            raise DimensionMismatchError(f"cannot infer square dims for shape {m.shape}")
        dims = (d, d)
    return DensityMatrix(tuple(dims), m)


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ParamOutOfRangeError(f"{name} must lie in [0, 1], got {value}")
    return value


def _check_dim(d: int) -> int:
    if int(d) != d or d < 2:
        raise BadDimensionError(f"local dimension must be an integer >= 2, got {d}")
    return int(d)


def _ket(d_a: int, d_b: int, *terms) -> np.ndarray:
    psi = np.zeros(d_a * d_b, dtype=np.complex128)
    for i, j, amp in terms:
        psi[i * d_b + j] += amp
    return psi


def singlet_ket() -> np.ndarray:
    """``(|01> - |10>)/sqrt(2)``."""
    s = 1 / math.sqrt(2)
    return _ket(2, 2, (0, 1, s), (1, 0, -s))


def singlet_projector() -> np.ndarray:
    # exact entries 0, +-1/2
    m = np.zeros((4, 4), dtype=np.complex128)
    m[1, 1] = m[2, 2] = 0.5
    m[1, 2] = m[2, 1] = -0.5
    return m


def werner2(p: float) -> DensityMatrix:
    """Singlet mixed with white noise: ``p |psi-><psi-| + (1 - p) I/4``."""
    p = _check_unit("p", p)
    m = p * singlet_projector() + (1 - p) * np.eye(4) / 4
    return DensityMatrix((2, 2), m)


def rho1() -> DensityMatrix:
    """``(I(x)I + sx(x)I + I(x)sx + sx(x)sx)/4``, the projector onto ``|++>``."""
    return DensityMatrix((2, 2), np.full((4, 4), 0.25, dtype=np.complex128))


def singlet() -> DensityMatrix:
    return DensityMatrix((2, 2), singlet_projector())


def maximally_mixed(d_a: int = 2, d_b: int = 2) -> DensityMatrix:
    return DensityMatrix((d_a, d_b), np.eye(d_a * d_b, dtype=np.complex128) / (d_a * d_b))


def phi_plus_projector(d: int) -> np.ndarray:
    """``|phi+><phi+|`` with ``|phi+> = sum_i |ii> / sqrt(d)``; entries are exactly 1/d."""
    d = _check_dim(d)
    m = np.zeros((d * d, d * d), dtype=np.complex128)
    idx = [i * d + i for i in range(d)]
    m[np.ix_(idx, idx)] = 1.0 / d
    return m


def bell_phi_plus(d: int) -> DensityMatrix:
    return DensityMatrix((d, d), phi_plus_projector(d))


def swap_operator(d: int) -> np.ndarray:
    """``V |ij> = |ji>``."""
    v = np.zeros((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            v[j * d + i, i * d + j] = 1.0
    return v


def symmetric_projector(d: int) -> np.ndarray:
    return 0.5 * (np.eye(d * d) + swap_operator(d))


def antisymmetric_projector(d: int) -> np.ndarray:
    return 0.5 * (np.eye(d * d) - swap_operator(d))


def isotropic(d: int, f: float) -> DensityMatrix:
    """``(1-f)/(d^2-1) (I - |phi+><phi+|) + f |phi+><phi+|``."""
    d = _check_dim(d)
    f = _check_unit("f", f)
    noise = float((1 - Fraction(f)) / (d * d - 1))
    phi = phi_plus_projector(d)
    m = noise * (np.eye(d * d) - phi) + f * phi
    return DensityMatrix((d, d), m)


def werner_d(d: int, w: float) -> DensityMatrix:
    """d x d Werner state with antisymmetric-subspace weight ``w``.

    Built as ``(1-w) P_sym / dim_sym + w P_anti / dim_anti``; ``P_sym`` is
    the span of ``|kk>`` and ``|ij>+|ji>``, ``P_anti`` of ``|ij>-|ji>``.
    """
    d = _check_dim(d)
    w = _check_unit("w", w)
    sym_weight = float((1 - Fraction(w)) * 2 / (d * (d + 1)))
    anti_weight = float(Fraction(w) * 2 / (d * (d - 1)))
    m = sym_weight * symmetric_projector(d) + anti_weight * antisymmetric_projector(d)
    return DensityMatrix((d, d), m)


NAMED_STATES = ("werner", "rho1", "singlet", "bell", "mixed", "isotropic", "werner-d")


def named_state(name: str, *, p: float = None, f: float = None, w: float = None, d: int = 2) -> DensityMatrix:
    """Look up a state by its CLI name."""
    if name == "werner":
        return werner2(p)
    if name == "rho1":
        return rho1()
    if name == "singlet":
        return singlet()
    if name == "bell":
        return bell_phi_plus(d)
    if name == "mixed":
        return maximally_mixed(d, d)
    if name == "isotropic":
        return isotropic(d, f)
    if name == "werner-d":
        return werner_d(d, w)
    raise ValueError(f"unknown state {name!r}; choose from {', '.join(NAMED_STATES)}")


# ---------------------------------------------------------------------------
# State files: {"dims": [dA, dB], "matrix": [[{"re": r, "im": i}, ...], ...]}


def state_to_json(rho: StateLike) -> dict:
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    dims = list(rho.dims) if isinstance(rho, DensityMatrix) else None
    return {
        "dims": dims,
        "matrix": [[{"re": float(z.real), "im": float(z.imag)} for z in row] for row in m],
    }


def save_state(rho: DensityMatrix, path) -> None:
    Path(path).write_text(json.dumps(state_to_json(rho), indent=1) + "\n")


def parse_state(payload) -> DensityMatrix:
    """Validate a decoded JSON state object."""
    if not isinstance(payload, dict) or "dims" not in payload or "matrix" not in payload:
        raise ParseError("state object needs 'dims' and 'matrix' keys")
    dims = payload["dims"]
    if (
        not isinstance(dims, list)
        or len(dims) != 2
        or not all(isinstance(d, int) and not isinstance(d, bool) and d >= 1 for d in dims)
    ):
        raise ParseError(f"'dims' must be a list of two positive integers, got {dims!r}")
    rows = payload["matrix"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError("'matrix' must be a non-empty list of rows")
    if any(len(r) != len(rows) for r in rows):
        raise DimensionMismatchError("'matrix' is not square")
    try:
        m = np.array(
            [[complex(float(e["re"]), float(e.get("im", 0.0))) for e in row] for row in rows],
            dtype=np.complex128,
        )
    except (TypeError, KeyError, ValueError, AttributeError) as exc:
        raise ParseError(f"bad matrix entry: {exc}") from exc
    return DensityMatrix(tuple(dims), m)


def load_state(path) -> DensityMatrix:
    try:
        payload = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    return parse_state(payload)
