"""Built-in target functions and the plane-wave Coulomb eigenproblem.

Targets cover the three closed-form 2-D densities used across the test
corpus plus the 3-D plane-wave eigenstates; all evaluate vectorized on
(M, D) point arrays through the TargetFunction wrapper.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InvalidArgumentError
from .grids import SYMMETRIC, UNIT
from .series import FOURIER, SeriesApprox, TargetFunction


def _check_spd(Sigma: np.ndarray) -> np.ndarray:
    Sigma = np.asarray(Sigma, dtype=float)
    if Sigma.shape != (2, 2):
        raise InvalidArgumentError("covariance must be 2x2")
    if not np.allclose(Sigma, Sigma.T, atol=1e-12):
        raise InvalidArgumentError("covariance must be symmetric")
    if np.any(np.linalg.eigvalsh(Sigma) <= 0.0):
        raise InvalidArgumentError("covariance must be positive definite")
    return Sigma


def ricker2d(sigma: float) -> TargetFunction:
    """Mexican-hat wavelet centered at the origin on [-1, 1]^2:
    (1/(pi s^4)) (1 - r^2/(2 s^2)) exp(-r^2/(2 s^2))."""
    if sigma <= 0.0:
        raise InvalidArgumentError("sigma must be positive")
    s2 = sigma * sigma

    def fn(pts: np.ndarray) -> np.ndarray:
        r2 = pts[:, 0] ** 2 + pts[:, 1] ** 2
        u = r2 / (2 * s2)
        return (1.0 - u) * np.exp(-u) / (np.pi * s2 * s2)

    return TargetFunction(arity=2, domain=SYMMETRIC, fn=fn)


def student_t2d(mu, Sigma) -> TargetFunction:
    """Bivariate location-scale Student's t with one degree of freedom on
    [0, 1]^2: 1/(2 pi sqrt(det S)) (1 + delta)^{-3/2}."""
    mu = np.asarray(mu, dtype=float).reshape(2)
    Sigma = _check_spd(Sigma)
    Sinv = np.linalg.inv(Sigma)
    pref = 1.0 / (2 * np.pi * np.sqrt(np.linalg.det(Sigma)))

    def fn(pts: np.ndarray) -> np.ndarray:
        d = pts - mu
        delta = np.einsum("mi,ij,mj->m", d, Sinv, d)
        return pref * (1.0 + delta) ** -1.5

    return TargetFunction(arity=2, domain=UNIT, fn=fn)


def gaussian2d(mu, Sigma) -> TargetFunction:
    """Bivariate normal density on [0, 1]^2."""
    mu = np.asarray(mu, dtype=float).reshape(2)
    Sigma = _check_spd(Sigma)
    Sinv = np.linalg.inv(Sigma)
    pref = 1.0 / (2 * np.pi * np.sqrt(np.linalg.det(Sigma)))

    def fn(pts: np.ndarray) -> np.ndarray:
        d = pts - mu
        delta = np.einsum("mi,ij,mj->m", d, Sinv, d)
        return pref * np.exp(-0.5 * delta)

    return TargetFunction(arity=2, domain=UNIT, fn=fn)


# --------------------------------------------------------------------------
# plane-wave electronic structure

@dataclass(frozen=True)
class PlaneWaveProblem:
    """Single-particle Coulomb problem in a plane-wave basis.

    Modes run over k in [-N/2, N/2 - 1]^3; nuclei are (position, weight)
    pairs with positions in the unit cube.  Units: hbar = m = 1.
    """

    N: int
    nuclei: tuple[tuple[tuple[float, float, float], float], ...]

    def __post_init__(self):
        if self.N < 2 or self.N % 2 != 0:
            raise InvalidArgumentError("N must be a positive even integer")
        if self.N > 16:
            raise InvalidArgumentError("N > 16 exceeds the dense-solve guard")
        if not self.nuclei:
            raise InvalidArgumentError("need at least one nucleus")

    @property
    def kmin(self) -> int:
        return -self.N // 2

    def mode_vectors(self) -> np.ndarray:
        """(N^3, 3) integer mode vectors; axis 0 varies fastest."""
        axis = np.arange(self.N) + self.kmin
        kx, ky, kz = np.meshgrid(axis, axis, axis, indexing="ij")
        return np.stack(
            [kx.ravel(order="F"), ky.ravel(order="F"), kz.ravel(order="F")],
            axis=-1,
        )


def _hamiltonian(p: PlaneWaveProblem) -> np.ndarray:
    k = p.mode_vectors().astype(float)
    M = len(k)
    T = 0.5 * np.pi**2 * np.sum(k * k, axis=1)
    U = np.zeros((M, M), dtype=complex)
    diff2 = np.sum((k[None, :, :] - k[:, None, :]) ** 2, axis=-1)
    np.fill_diagonal(diff2, 1.0)  # placeholder; diagonal zeroed below
    for R, w in p.nuclei:
        ph = np.exp(1j * np.pi * (k @ np.asarray(R, dtype=float)))
        U += (4.0 / np.pi) * w * np.conj(ph)[:, None] * ph[None, :] / diff2
    np.fill_diagonal(U, 0.0)  # divergent k = k' background term dropped
    H = -np.diag(T) - U
    if np.max(np.abs(H - H.conj().T)) > 1e-12:
        raise InvalidArgumentError("Hamiltonian failed the Hermiticity check")
    return H


def solve_coulomb_planewaves(
    p: PlaneWaveProblem, n_states: int = 1
) -> list[tuple[float, np.ndarray]]:
    """Lowest eigenpairs of the plane-wave Hamiltonian.

    Returns (energy, coefficient tensor) pairs with energies non-decreasing;
    each tensor has shape (N, N, N) indexed by storage index k' = k + N/2
    per axis and unit L2 norm.
    """
    if n_states < 1:
        raise InvalidArgumentError("n_states must be >= 1")
    H = _hamiltonian(p)
    if n_states > H.shape[0]:
        raise InvalidArgumentError("n_states exceeds the basis size")
    # subset driver: the full spectrum of the N=16 basis (4096 modes) costs
    # minutes; only the lowest few states are ever consumed
    energies, vecs = scipy.linalg.eigh(H, subset_by_index=[0, n_states - 1])
    out = []
    N = p.N
    for idx in range(n_states):
        tensor = vecs[:, idx].reshape(N, N, N, order="F")
        out.append((float(energies[idx]), tensor))
    return out


def coulomb_series(p: PlaneWaveProblem, tensor: np.ndarray) -> SeriesApprox:
    """Wrap an eigenstate coefficient tensor as an asymmetric-range Fourier
    series (modes [-N/2, N/2 - 1] per axis)."""
    N = p.N
    if tensor.shape != (N, N, N):
        raise InvalidArgumentError("tensor shape must be (N, N, N)")
    return SeriesApprox(
        basis=FOURIER,
        degrees=(N // 2,) * 3,
        coeffs=np.asarray(tensor, dtype=complex),
        kmin=(p.kmin,) * 3,
    )


def planewave_state(
    p: PlaneWaveProblem, tensor: np.ndarray, points: np.ndarray
) -> np.ndarray:
    """psi(r) = sum_k c_k e^{i pi k.r} evaluated at (M, 3) points, chunked to
    keep the per-axis phase tables small."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != 3:
        raise InvalidArgumentError("points must be (M, 3)")
    axis = np.arange(p.N) + p.kmin
    out = np.empty(len(pts), dtype=complex)
    step = 100_000
    for lo in range(0, len(pts), step):
        chunk = pts[lo : lo + step]
        px = np.exp(1j * np.pi * np.outer(chunk[:, 0], axis))
        py = np.exp(1j * np.pi * np.outer(chunk[:, 1], axis))
        pz = np.exp(1j * np.pi * np.outer(chunk[:, 2], axis))
        out[lo : lo + step] = np.einsum(
            "ma,mb,mc,abc->m", px, py, pz, tensor, optimize=True
        )
    return out


def planewave_target(p: PlaneWaveProblem, tensor: np.ndarray) -> TargetFunction:
    """TargetFunction view of an eigenstate for grid-error comparisons."""
    tensor = np.asarray(tensor, dtype=complex)

    def fn(pts: np.ndarray) -> np.ndarray:
        return planewave_state(p, tensor, pts)

    return TargetFunction(arity=3, domain=UNIT, fn=fn)
