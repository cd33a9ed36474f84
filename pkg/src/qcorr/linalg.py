"""Dense complex matrix kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Composite
systems use the product basis ``|ij>`` with subsystem A as the slow index,
so a ``dA*dB`` square matrix reshapes to ``(dA, dB, dA, dB)``.

Eigenvalues come from a cyclic Jacobi solver compiled with numba. Random
sampling always goes through :func:`make_rng`, which wraps numpy's
counter-based Philox bit generator; nothing here touches global random state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from numba import njit

from .errors import BadRankError, DimensionMismatchError, NonHermitianError, NonSquareError

HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100

SeedLike = Union[int, np.random.Generator]


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in ascending order, optionally with eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None
    sweeps: int = 0

    @property
    def min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max(self) -> float:
        return float(self.eigenvalues[-1])


@njit(cache=True)
def _jacobi(a, want_vectors, tol, max_sweeps):
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n, dtype=np.complex128)
    norm2 = 0.0
    for i in range(n):
        for j in range(n):
            norm2 += a[i, j].real ** 2 + a[i, j].imag ** 2
    thresh = tol * max(1.0, np.sqrt(norm2))

    sweeps = 0
    converged = False
    while sweeps <= max_sweeps:
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if np.sqrt(off) < thresh:
            converged = True
            break
        if sweeps == max_sweeps:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # J = diag(1, conj(phase)) @ [[c, s], [-s, c]] on the (p, q) plane
                jpp = c + 0j
                jpq = s + 0j
                jqp = -s * np.conj(phase)
                jqq = c * np.conj(phase)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = akp * jpp + akq * jqp
                    a[k, q] = akp * jpq + akq * jqq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = np.conj(jpp) * apk + np.conj(jqp) * aqk
                    a[q, k] = np.conj(jpq) * apk + np.conj(jqq) * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                if want_vectors:
                    for k in range(n):
                        vkp = v[k, p]
                        vkq = v[k, q]
                        v[k, p] = vkp * jpp + vkq * jqp
                        v[k, q] = vkp * jpq + vkq * jqq
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    return w, v, sweeps, converged


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquareError(f"expected a square matrix, got shape {m.shape}")
    return m


def hermitian_residual(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def symmetrize(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``(A + A^dagger)/2`` after checking ``A`` is Hermitian within ``tol``."""
    m = as_matrix(a)
    res = hermitian_residual(m)
    if res > tol:
        raise NonHermitianError(f"Hermiticity residual {res:.3e} exceeds {tol:.0e}")
    return 0.5 * (m + m.conj().T)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # largest-modulus component made real and positive, per column
    idx = np.argmax(np.abs(v), axis=0)
    lead = v[idx, np.arange(v.shape[1])]
    return v * (np.abs(lead) / np.where(lead == 0, 1, lead))


def eig_hermitian(a, vectors: bool = False) -> Spectrum:
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Eigenvalues are returned in ascending order. With ``vectors=True`` the
    eigenvectors are phase-normalised (largest component real positive) and
    exactly equal eigenvalues are ordered by their eigenvector entries, so
    the output is deterministic.
    """
    m = symmetrize(a)
    w, v, sweeps, converged = _jacobi(m, vectors, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    if not converged:
        raise ArithmeticError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    if not vectors:
        return Spectrum(np.sort(w, kind="stable"), None, sweeps)

    v = _fix_phase(v)
    keys = [(w[i], *np.column_stack([v[:, i].real, v[:, i].imag]).ravel()) for i in range(len(w))]
    order = sorted(range(len(w)), key=lambda i: keys[i])
    return Spectrum(w[order], v[:, order], sweeps)


def eigvalsh(a) -> np.ndarray:
    """Shorthand for the ascending eigenvalues of a Hermitian matrix."""
    return eig_hermitian(a).eigenvalues


def hs_norm_sq(a) -> float:
    """Squared Hilbert-Schmidt norm ``Tr(A A^dagger)``."""
    m = np.asarray(a)
    return float(np.sum(m.real ** 2 + m.imag ** 2)) if np.iscomplexobj(m) else float(np.sum(m * m))


def trace_norm(a) -> float:
    return float(np.sum(np.abs(eigvalsh(a))))


def _check_bipartite(rho: np.ndarray, dims) -> tuple[int, int]:
    d_a, d_b = (int(d) for d in dims)
    if rho.shape != (d_a * d_b, d_a * d_b):
        raise DimensionMismatchError(f"matrix of shape {rho.shape} does not match dims {dims}")
    return d_a, d_b


def partial_transpose(rho, dims, subsystem: str = "A") -> np.ndarray:
    """Transpose the indices of one subsystem: ``<ij|rho|kl> -> <kj|rho|il>`` for A."""
    m = as_matrix(rho)
    d_a, d_b = _check_bipartite(m, dims)
    t = m.reshape(d_a, d_b, d_a, d_b)
    if subsystem == "A":
        t = t.transpose(2, 1, 0, 3)
    elif subsystem == "B":
        t = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return np.ascontiguousarray(t).reshape(d_a * d_b, d_a * d_b)


def partial_trace(rho, dims, subsystem: str = "B") -> np.ndarray:
    """Trace out ``subsystem`` and return the reduced matrix of the other one."""
    m = as_matrix(rho)
    d_a, d_b = _check_bipartite(m, dims)
    t = m.reshape(d_a, d_b, d_a, d_b)
    if subsystem == "B":
        return np.einsum("ijkj->ik", t)
    if subsystem == "A":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


# ---------------------------------------------------------------------------
# Random sampling


def make_rng(seed: SeedLike) -> np.random.Generator:
    """Philox-backed generator; a Generator passed in is returned unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(int(seed)))


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex Gaussians: real parts drawn first, then imaginary parts."""
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return re + 1j * im


def random_density_matrix(d_a: int, d_b: int, rank: int, seed: SeedLike) -> np.ndarray:
    """``G G^dagger / Tr(G G^dagger)`` for a ``(dA*dB) x rank`` complex Gaussian ``G``."""
    n = d_a * d_b
    if not 1 <= rank <= n:
        raise BadRankError(f"rank must lie in [1, {n}], got {rank}")
    g = complex_gaussian(make_rng(seed), (n, rank))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return 0.5 * (rho + rho.conj().T)


def random_hermitian(n: int, seed: SeedLike) -> np.ndarray:
    g = complex_gaussian(make_rng(seed), (n, n))
    return 0.5 * (g + g.conj().T)


def random_unitary(n: int, seed: SeedLike) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a complex Gaussian."""
    q, r = np.linalg.qr(complex_gaussian(make_rng(seed), (n, n)))
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def random_separable_state(k: int, seed: SeedLike, d: int = 2) -> np.ndarray:
    """Convex mixture of ``k`` random product states ``rho_A (x) rho_B``.

    Weights are Dirichlet-uniform; each local state is a random density
    matrix of rank 1 or full rank, so pure and mixed factors both occur.
    """
    if k < 1:
        raise ValueError(f"need at least one mixture term, got {k}")
    rng = make_rng(seed)
    weights = rng.dirichlet(np.ones(k))
    rho = np.zeros((d * d, d * d), dtype=np.complex128)
    for w in weights:
        rho_a = random_density_matrix(d, 1, int(rng.choice([1, d])), rng)
        rho_b = random_density_matrix(d, 1, int(rng.choice([1, d])), rng)
        rho += w * np.kron(rho_a, rho_b)
    return 0.5 * (rho + rho.conj().T)
