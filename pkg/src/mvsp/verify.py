"""Verification metrics: success probabilities, grid-level error, fidelity,
density moments, and kernel-density analysis of measurement counts.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, NumericDomainError
from .grids import SYMMETRIC, GridSpec
from .series import SeriesApprox, TargetFunction, evaluate_series_on_grid
from .simulator import PreparationOutcome


def success_probability_analytic(s: SeriesApprox, g: GridSpec) -> float:
    """Post-selection probability of the prepared block:
    sum_x |f_d(x)|^2 / (N^2 2^{sum n})."""
    vals = evaluate_series_on_grid(s, g)
    norm = s.norm_N
    if norm <= 0.0:
        raise InvalidArgumentError("all-zero coefficient tensor")
    return float(np.sum(np.abs(vals) ** 2) / (norm**2 * g.total_points))


def asymptotic_success_probability(
    f: TargetFunction, norm_N: float, *, min_points: int = 1_000_000
) -> float:
    """Large-n limit of the success probability: integral of |f|^2 over the
    domain divided by (volume * N^2), via midpoint tensor quadrature.

    Refines the mesh once and warns if the estimate is still moving.
    """
    if norm_N <= 0.0:
        raise InvalidArgumentError("series one-norm must be positive")
    lo, hi = (-1.0, 1.0) if f.domain == SYMMETRIC else (0.0, 1.0)
    volume = (hi - lo) ** f.arity

    def estimate(m: int) -> float:
        axis = lo + (hi - lo) * (np.arange(m) + 0.5) / m
        mesh = np.meshgrid(*([axis] * f.arity), indexing="ij")
        pts = np.stack([ax.ravel() for ax in mesh], axis=-1)
        vals = f.evaluate(pts)
        cell = ((hi - lo) / m) ** f.arity
        return float(np.sum(np.abs(vals) ** 2) * cell)

    m = max(2, int(np.ceil(min_points ** (1.0 / f.arity))))
    integral = estimate(m)
    refined = estimate(2 * m)
    if abs(refined - integral) > 1e-4 * max(abs(refined), 1e-300):
        warnings.warn(
            "quadrature estimate still changing under refinement; "
            "result may carry discretization error",
            stacklevel=2,
        )
    return refined / (volume * norm_N**2)


def max_grid_error(
    outcome: PreparationOutcome, f: TargetFunction, g: GridSpec
) -> float:
    """Max abs deviation between the prepared amplitudes and the target values,
    after rescaling the amplitudes to the target's norm and aligning the best
    global phase."""
    target = np.asarray(f.evaluate(g.points()), dtype=complex)
    amps = np.asarray(outcome.main_amplitudes, dtype=complex)
    if amps.shape != target.shape:
        raise InvalidArgumentError("outcome length does not match the grid")
    scale = float(np.linalg.norm(target))
    if scale == 0.0:
        return float(np.max(np.abs(amps)))
    amps = amps * scale  # outcome is unit-norm; match the target's scale
    overlap = np.vdot(amps, target)  # sum conj(a) t -> t ~ e^{i phi} a
    phi = float(np.angle(overlap)) if overlap != 0 else 0.0
    return float(np.max(np.abs(target - amps * np.exp(1j * phi))))


def classical_fidelity(p: np.ndarray, q: np.ndarray) -> float:
    """Bhattacharyya fidelity (sum sqrt(p q))^2 between two nonnegative
    weight vectors, each normalized internally."""
    p = np.asarray(p, dtype=float).ravel()
    q = np.asarray(q, dtype=float).ravel()
    if p.shape != q.shape:
        raise InvalidArgumentError("fidelity needs equal-length weight vectors")
    if np.any(p < 0) or np.any(q < 0):
        raise InvalidArgumentError("weights must be nonnegative")
    sp, sq = p.sum(), q.sum()
    if sp <= 0.0 or sq <= 0.0:
        raise InvalidArgumentError("weight vector sums to zero")
    return float(np.sum(np.sqrt(p * q)) ** 2 / (sp * sq))


def density_moments(
    density: np.ndarray, x: np.ndarray, y: np.ndarray
) -> dict[str, float]:
    """Means, variances, and correlation of a 2-D density sampled on a grid.

    density[i, j] is the weight at (x[i], y[j]); weights are normalized
    internally, so any nonnegative scaling works.
    """
    density = np.asarray(density, dtype=float)
    if density.ndim != 2 or density.shape != (len(x), len(y)):
        raise InvalidArgumentError("density shape must be (len(x), len(y))")
    total = density.sum()
    if total <= 0.0:
        raise InvalidArgumentError("density sums to zero")
    w = density / total
    px = w.sum(axis=1)
    py = w.sum(axis=0)
    mean_x = float(px @ x)
    mean_y = float(py @ y)
    var_x = float(px @ (x - mean_x) ** 2)
    var_y = float(py @ (y - mean_y) ** 2)
    cov = float((x - mean_x) @ w @ (y - mean_y))
    denom = np.sqrt(var_x * var_y)
    corr = cov / denom if denom > 0 else 0.0
    return {
        "mean_x": mean_x,
        "mean_y": mean_y,
        "var_x": var_x,
        "var_y": var_y,
        "corr": float(corr),
    }


# --------------------------------------------------------------------------
# kernel density estimation

def kde_estimate(
    points: np.ndarray, bandwidth: float, grid_axes: list[np.ndarray]
) -> np.ndarray:
    """Gaussian-kernel density of sample points evaluated on a tensor grid,
    rescaled so the grid weights sum to 1.

    Only the 2-D case is needed here; it uses one separable pass per axis.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if bandwidth <= 0.0:
        raise InvalidArgumentError("bandwidth must be positive")
    D = points.shape[1]
    if D != len(grid_axes):
        raise InvalidArgumentError("grid arity does not match the sample arity")
    if D != 2:
        raise InvalidArgumentError("kde_estimate supports 2-D samples")
    gx = np.asarray(grid_axes[0], dtype=float)
    gy = np.asarray(grid_axes[1], dtype=float)
    h2 = bandwidth**2
    Gx = np.exp(-((points[:, 0, None] - gx[None, :]) ** 2) / (2 * h2))
    Gy = np.exp(-((points[:, 1, None] - gy[None, :]) ** 2) / (2 * h2))
    dens = (Gx.T @ Gy) / (2 * np.pi * h2 * len(points))
    total = dens.sum()
    if total <= 0.0:
        raise NumericDomainError("kernel density vanished on the whole grid")
    return dens / total


@dataclass(frozen=True)
class BandwidthScan:
    h_opt: float
    h_grid: np.ndarray
    scores: np.ndarray
    degenerate: bool  # every candidate scored -inf (all points isolated)


def kde_cv_bandwidth(points: np.ndarray, h_grid: np.ndarray) -> BandwidthScan:
    """Leave-one-out log-likelihood scan over candidate bandwidths.

    Exact evaluation; duplicate sample rows are compressed through their
    multiplicities, so the quadratic pair cost counts unique rows only, and
    the pair matrix is walked in strips to keep memory bounded.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    h_grid = np.asarray(h_grid, dtype=float)
    if np.any(h_grid <= 0.0):
        raise InvalidArgumentError("bandwidth candidates must be positive")
    N, D = points.shape
    if N < 2:
        raise InvalidArgumentError("need at least two samples")
    uniq, counts = np.unique(points, axis=0, return_counts=True)
    M = len(uniq)
    cnt = counts.astype(float)
    sq = np.sum(uniq * uniq, axis=1)
    inv2h2 = 1.0 / (2.0 * h_grid * h_grid)
    # T[idx, k] = sum_l c_l K_{h_idx}(u_k - u_l); the self term contributes
    # exactly c_k, so the leave-one-out sum T - 1 is never negative
    T = np.zeros((len(h_grid), M))
    strip = max(1, min(M, (4 << 20) // max(M, 1)))  # ~32 MB of pair floats
    for lo in range(0, M, strip):
        blk = uniq[lo : lo + strip]
        d2 = sq[lo : lo + strip, None] + sq[None, :] - 2.0 * (blk @ uniq.T)
        np.maximum(d2, 0.0, out=d2)
        # self-distances must be exactly zero so the leave-one-out subtraction
        # of the self term stays exact for isolated rows
        d2[np.arange(len(blk)), lo + np.arange(len(blk))] = 0.0
        for idx in range(len(h_grid)):
            T[idx, lo : lo + strip] = np.exp(-d2 * inv2h2[idx]) @ cnt
    scores = np.empty(len(h_grid))
    for idx, h in enumerate(h_grid):
        loo = T[idx] - 1.0
        if np.any(loo <= 0.0):
            scores[idx] = -np.inf
            continue
        pref = -0.5 * D * np.log(2 * np.pi * h * h)
        scores[idx] = float(np.sum(cnt * (pref + np.log(loo / (N - 1)))) / N)
    degenerate = bool(np.all(np.isneginf(scores)))
    best = int(np.argmax(scores)) if not degenerate else 0
    return BandwidthScan(
        h_opt=float(h_grid[best]),
        h_grid=h_grid,
        scores=scores,
        degenerate=degenerate,
    )
