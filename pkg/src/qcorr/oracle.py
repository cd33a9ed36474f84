"""Brute-force checks that do not share code paths with the closed forms.

``discord_bruteforce`` minimises the Hilbert-Schmidt distance from a
two-qubit state to the family of classical-quantum states

    chi = p |psi_1><psi_1| (x) sigma(r_1) + (1 - p) |psi_2><psi_2| (x) sigma(r_2)

where ``{psi_1, psi_2}`` is an orthonormal qubit basis on A. The nine free
parameters are unconstrained reals: two basis angles, ``p = sin(a)^2``,
and two Bloch vectors squashed into the unit ball by ``v -> tanh|v| v/|v|``.
Each restart runs a compiled Nelder-Mead simplex search.

``weyl_property_driver`` samples random Hermitian pairs and checks the
Weyl eigenvalue interlacing bounds for every index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from . import linalg
from .correlations import NORMALIZATIONS, PAULI, _two_qubit
from .states import StateLike

N_PARAMS = 9
SIMPLEX_TOL = 1e-10
MAX_ITER = 2000
INITIAL_STEP = 0.5


@dataclass(frozen=True, eq=False)
class ClassicalQuantumState:
    theta: float
    phi: float
    p1: float
    r1: np.ndarray
    r2: np.ndarray

    @classmethod
    def from_raw(cls, params) -> "ClassicalQuantumState":
        theta = float(params[0]) % (2 * math.pi)
        if theta > math.pi:
            # (theta, phi) and (2pi - theta, phi + pi) name the same basis vector
            theta, phi = 2 * math.pi - theta, float(params[1]) + math.pi
        else:
            phi = float(params[1])
        return cls(
            theta=theta,
            phi=phi % (2 * math.pi),
            p1=math.sin(params[2]) ** 2,
            r1=_squash(np.asarray(params[3:6], dtype=float)),
            r2=_squash(np.asarray(params[6:9], dtype=float)),
        )

    def basis(self) -> tuple[np.ndarray, np.ndarray]:
        c, s = math.cos(self.theta / 2), math.sin(self.theta / 2)
        e = complex(math.cos(self.phi), math.sin(self.phi))
        return np.array([c, e * s]), np.array([-e.conjugate() * s, c])

    def matrix(self) -> np.ndarray:
        psi1, psi2 = self.basis()
        return self.p1 * np.kron(np.outer(psi1, psi1.conj()), _bloch_state(self.r1)) + (
            1 - self.p1
        ) * np.kron(np.outer(psi2, psi2.conj()), _bloch_state(self.r2))


@dataclass(frozen=True)
class OracleResult:
    value: float
    best_params: ClassicalQuantumState
    restarts_used: int
    converged: bool


@dataclass(frozen=True)
class WeylReport:
    n: int
    samples: int
    violations: int
    worst_slack: float


def _squash(v: np.ndarray) -> np.ndarray:
    r = float(np.linalg.norm(v))
    return v * (math.tanh(r) / r) if r > 0 else np.zeros(3)


def _bloch_state(r) -> np.ndarray:
    return 0.5 * (np.eye(2) + sum(ri * s for ri, s in zip(r, PAULI)))


@njit(cache=True)
def _cq_distance(x, rho):
    c = math.cos(0.5 * x[0])
    s = math.sin(0.5 * x[0])
    e = complex(math.cos(x[1]), math.sin(x[1]))
    psi = np.empty((2, 2), dtype=np.complex128)
    psi[0, 0] = c
    psi[0, 1] = e * s
    psi[1, 0] = -np.conj(e) * s
    psi[1, 1] = c
    p = math.sin(x[2]) ** 2
    weights = (p, 1.0 - p)
    chi = np.zeros((4, 4), dtype=np.complex128)
    for k in range(2):
        v0 = x[3 + 3 * k]
        v1 = x[4 + 3 * k]
        v2 = x[5 + 3 * k]
        norm = math.sqrt(v0 * v0 + v1 * v1 + v2 * v2)
        scale = math.tanh(norm) / norm if norm > 0.0 else 0.0
        rx, ry, rz = v0 * scale, v1 * scale, v2 * scale
        sig = np.empty((2, 2), dtype=np.complex128)
        sig[0, 0] = 0.5 * (1.0 + rz)
        sig[0, 1] = 0.5 * complex(rx, -ry)
        sig[1, 0] = 0.5 * complex(rx, ry)
        sig[1, 1] = 0.5 * (1.0 - rz)
        for a in range(2):
            for b in range(2):
                proj = weights[k] * psi[k, a] * np.conj(psi[k, b])
                for i in range(2):
                    for j in range(2):
                        chi[2 * a + i, 2 * b + j] += proj * sig[i, j]
    total = 0.0
    for i in range(4):
        for j in range(4):
            d = rho[i, j] - chi[i, j]
            total += d.real * d.real + d.imag * d.imag
    return total


@njit(cache=True)
def _nelder_mead(rho, x0, step, tol, max_iter):
    """Standard Nelder-Mead (reflect 1, expand 2, contract 1/2, shrink 1/2).

    Stops when both the spread of vertex values and the simplex extent
    (max coordinate distance to the best vertex) are below ``tol``.
    """
    n = x0.shape[0]
    sim = np.empty((n + 1, n))
    fs = np.empty(n + 1)
    sim[0] = x0
    for i in range(n):
        sim[i + 1] = x0
        sim[i + 1, i] += step
    for i in range(n + 1):
        fs[i] = _cq_distance(sim[i], rho)

    converged = False
    it = 0
    while it < max_iter:
        order = np.argsort(fs)
        sim = sim[order]
        fs = fs[order]
        fspread = fs[n] - fs[0]
        xspread = 0.0
        for i in range(1, n + 1):
            for j in range(n):
                dx = abs(sim[i, j] - sim[0, j])
                if dx > xspread:
                    xspread = dx
        if fspread <= tol and xspread <= tol:
            converged = True
            break
        it += 1

        centroid = np.zeros(n)
        for i in range(n):
            centroid += sim[i]
        centroid /= n
        xr = centroid + (centroid - sim[n])
        fr = _cq_distance(xr, rho)
        if fr < fs[0]:
            xe = centroid + 2.0 * (centroid - sim[n])
            fe = _cq_distance(xe, rho)
            if fe < fr:
                sim[n] = xe
                fs[n] = fe
            else:
                sim[n] = xr
                fs[n] = fr
            continue
        if fr < fs[n - 1]:
            sim[n] = xr
            fs[n] = fr
            continue
        if fr < fs[n]:
            xc = centroid + 0.5 * (xr - centroid)
            fc = _cq_distance(xc, rho)
            accept = fc <= fr
        else:
            xc = centroid + 0.5 * (sim[n] - centroid)
            fc = _cq_distance(xc, rho)
            accept = fc < fs[n]
        if accept:
            sim[n] = xc
            fs[n] = fc
            continue
        for i in range(1, n + 1):
            sim[i] = sim[0] + 0.5 * (sim[i] - sim[0])
            fs[i] = _cq_distance(sim[i], rho)

    best = np.argmin(fs)
    return sim[best].copy(), fs[best], it, converged


def _random_start(rng: np.random.Generator) -> np.ndarray:
    """Uniform basis direction, Dirichlet-uniform weight, uniform-in-ball Bloch vectors."""
    x = np.empty(N_PARAMS)
    x[0] = math.acos(1.0 - 2.0 * rng.random())
    x[1] = 2.0 * math.pi * rng.random()
    x[2] = math.asin(math.sqrt(rng.dirichlet([1.0, 1.0])[0]))
    for k in range(2):
        g = rng.standard_normal(3)
        radius = min(rng.random() ** (1.0 / 3.0), 0.999)
        g *= radius / np.linalg.norm(g)
        x[3 + 3 * k : 6 + 3 * k] = g * (math.atanh(radius) / radius if radius > 0 else 1.0)
    return x


def restart_points(restarts: int, seed: linalg.SeedLike) -> np.ndarray:
    """Starting points drawn in sequence, so fewer restarts use a prefix of more."""
    rng = linalg.make_rng(seed)
    return np.array([_random_start(rng) for _ in range(restarts)])


def discord_bruteforce(
    rho: StateLike,
    normalization: str = "paper",
    restarts: int = 64,
    seed: linalg.SeedLike = 0,
    max_iter: int = MAX_ITER,
    tol: float = SIMPLEX_TOL,
) -> OracleResult:
    """Multi-start Nelder-Mead estimate of the geometric discord.

    The returned value is ``scale * min ||rho - chi||_2^2`` over the local
    minima found; it can only overestimate the true minimum. ``converged``
    reports whether the restart that produced the minimum met ``tol``.
    """
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    state = _two_qubit(rho)
    scale = NORMALIZATIONS[normalization]
    m = np.ascontiguousarray(state.matrix)
    best = None
    for x0 in restart_points(restarts, seed):
        x, fx, _, ok = _nelder_mead(m, x0, INITIAL_STEP, tol, max_iter)
        if best is None or fx < best[1]:
            best = (x, fx, ok)
    x, fx, ok = best
    return OracleResult(
        value=scale * max(float(fx), 0.0),
        best_params=ClassicalQuantumState.from_raw(x),
        restarts_used=restarts,
        converged=bool(ok),
    )


def weyl_slack(x, y) -> float:
    """Smallest margin in ``l_k(X) + l_1(Y) <= l_k(X+Y) <= l_k(X) + l_n(Y)`` over k."""
    lx = linalg.eigvalsh(x)
    ly = linalg.eigvalsh(y)
    lxy = linalg.eigvalsh(np.asarray(x) + np.asarray(y))
    lower = lxy - (lx + ly[0])
    upper = (lx + ly[-1]) - lxy
    return float(min(lower.min(), upper.min()))


def weyl_property_driver(n: int, samples: int, seed: linalg.SeedLike, slack: float = 1e-10) -> WeylReport:
    if not 2 <= n <= 8:
        raise ValueError(f"n must lie in [2, 8], got {n}")
    rng = linalg.make_rng(seed)
    violations = 0
    worst = math.inf
    for _ in range(samples):
        margin = weyl_slack(linalg.random_hermitian(n, rng), linalg.random_hermitian(n, rng))
        worst = min(worst, margin)
        if margin < -slack:
            violations += 1
    return WeylReport(n, samples, violations, worst)
