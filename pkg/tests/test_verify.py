"""Success probabilities, fidelity, moments, and the KDE pipeline."""
import numpy as np
import pytest

import oracles
from mvsp.grids import GridSpec
from mvsp.series import TargetFunction, chebyshev_interpolate, fourier_interpolate
from mvsp.simulator import PreparationOutcome, postselect_circuit, run
from mvsp.synthesis import assemble_state_prep
from mvsp.errors import InvalidArgumentError
from mvsp.verify import (
    asymptotic_success_probability,
    classical_fidelity,
    density_moments,
    kde_cv_bandwidth,
    kde_estimate,
    max_grid_error,
    success_probability_analytic,
)


# --------------------------------------------------------------------------
# success probability

def test_analytic_probability_matches_simulation():
    f = TargetFunction(arity=1, domain="symmetric",
                       fn=lambda p: np.exp(-2 * p[:, 0] ** 2))
    s = chebyshev_interpolate(f, (6,))
    g = GridSpec("symmetric", (4,))
    c = assemble_state_prep(s, g)
    out = postselect_circuit(c, run(c))
    assert success_probability_analytic(s, g) == pytest.approx(
        out.p_success, abs=1e-12
    )


def test_analytic_probability_constant_function():
    # f == 1: single Fourier mode, probability exactly 1
    f = TargetFunction(arity=1, domain="unit", fn=lambda p: np.ones(len(p)))
    s = fourier_interpolate(f, (0,))
    assert success_probability_analytic(s, GridSpec("unit", (5,))) == pytest.approx(
        1.0
    )


def test_asymptotic_probability_against_closed_form():
    # f(x) = x on [0,1]: integral of x^2 = 1/3; normalization N supplied
    f = TargetFunction(arity=1, domain="unit", fn=lambda p: p[:, 0])
    p = asymptotic_success_probability(f, norm_N=2.0, min_points=10_000)
    assert p == pytest.approx((1.0 / 3.0) / 4.0, rel=1e-6)


def test_asymptotic_probability_symmetric_domain_volume():
    # f == 1 on [-1,1]^2: integral 4, volume 4 -> p = 1/N^2
    f = TargetFunction(arity=2, domain="symmetric", fn=lambda p: np.ones(len(p)))
    p = asymptotic_success_probability(f, norm_N=3.0, min_points=10_000)
    assert p == pytest.approx(1.0 / 9.0, rel=1e-9)


def test_asymptotic_probability_warns_on_rough_mesh():
    # a needle the coarse mesh cannot resolve keeps moving under refinement
    f = TargetFunction(arity=1, domain="unit",
                       fn=lambda p: np.exp(-((p[:, 0] - 0.5) ** 2) / 2e-8))
    with pytest.warns(UserWarning, match="refinement"):
        asymptotic_success_probability(f, norm_N=1.0, min_points=100)


def test_asymptotic_probability_rejects_bad_norm():
    f = TargetFunction(arity=1, domain="unit", fn=lambda p: p[:, 0])
    with pytest.raises(InvalidArgumentError):
        asymptotic_success_probability(f, norm_N=0.0)


# --------------------------------------------------------------------------
# grid error

def test_max_grid_error_zero_for_exact_match():
    g = GridSpec("unit", (3,))
    f = TargetFunction(arity=1, domain="unit", fn=lambda p: 1.0 + p[:, 0])
    vals = f.evaluate(g.points()).astype(complex)
    amps = vals / np.linalg.norm(vals) * np.exp(1j * 0.83)  # arbitrary phase
    out = PreparationOutcome(main_amplitudes=amps, p_success=1.0)
    assert max_grid_error(out, f, g) < 1e-14


def test_max_grid_error_detects_deviation():
    g = GridSpec("unit", (2,))
    f = TargetFunction(arity=1, domain="unit", fn=lambda p: np.ones(len(p)))
    amps = np.array([1.0, 1.0, 1.0, 0.0], dtype=complex)
    amps /= np.linalg.norm(amps)
    out = PreparationOutcome(main_amplitudes=amps, p_success=1.0)
    assert max_grid_error(out, f, g) > 0.5


def test_max_grid_error_shape_mismatch():
    g = GridSpec("unit", (2,))
    f = TargetFunction(arity=1, domain="unit", fn=lambda p: np.ones(len(p)))
    out = PreparationOutcome(main_amplitudes=np.ones(3, dtype=complex), p_success=1.0)
    with pytest.raises(InvalidArgumentError):
        max_grid_error(out, f, g)


# --------------------------------------------------------------------------
# classical fidelity

def test_fidelity_identical_distributions():
    p = np.array([0.25, 0.5, 0.25])
    assert classical_fidelity(p, p) == pytest.approx(1.0)


def test_fidelity_scale_invariance_exact():
    # even powers of two scale the sqrt without any rounding
    p = np.array([0.125, 0.25, 0.625])
    q = np.array([0.5, 0.25, 0.25])
    base = classical_fidelity(p, q)
    assert classical_fidelity(4.0 * p, q) == base
    assert classical_fidelity(p, 0.25 * q) == base
    assert classical_fidelity(7.3 * p, 2.1 * q) == pytest.approx(base, rel=1e-14)


def test_fidelity_symmetric():
    rng = np.random.default_rng(1)
    p, q = rng.random(10), rng.random(10)
    assert classical_fidelity(p, q) == pytest.approx(classical_fidelity(q, p))


def test_fidelity_hand_value():
    # p = (1, 0), q = (1/2, 1/2): (sqrt(1/2))^2 = 1/2
    assert classical_fidelity([1.0, 0.0], [0.5, 0.5]) == pytest.approx(0.5)


def test_fidelity_disjoint_supports():
    assert classical_fidelity([1.0, 0.0], [0.0, 1.0]) == 0.0


def test_fidelity_validation():
    with pytest.raises(InvalidArgumentError):
        classical_fidelity([1.0, -0.1], [1.0, 0.0])
    with pytest.raises(InvalidArgumentError):
        classical_fidelity([0.0, 0.0], [1.0, 0.0])
    with pytest.raises(InvalidArgumentError):
        classical_fidelity([1.0], [0.5, 0.5])


# --------------------------------------------------------------------------
# density moments

def test_moments_point_mass():
    x = np.linspace(0, 1, 5)
    y = np.linspace(0, 1, 7)
    d = np.zeros((5, 7))
    d[2, 3] = 4.0  # scaling must not matter
    m = density_moments(d, x, y)
    assert m["mean_x"] == pytest.approx(x[2])
    assert m["mean_y"] == pytest.approx(y[3])
    assert m["var_x"] == 0.0 and m["var_y"] == 0.0 and m["corr"] == 0.0


def test_moments_product_density_uncorrelated():
    x = np.linspace(0, 1, 33)
    y = np.linspace(0, 1, 41)
    px = np.exp(-((x - 0.4) ** 2) / 0.02)
    py = np.exp(-((y - 0.7) ** 2) / 0.01)
    m = density_moments(np.outer(px, py), x, y)
    assert m["corr"] == pytest.approx(0.0, abs=1e-12)
    assert m["mean_x"] == pytest.approx(float(px @ x / px.sum()))
    assert m["var_y"] == pytest.approx(
        float(py @ (y - py @ y / py.sum()) ** 2 / py.sum())
    )


def test_moments_perfect_correlation():
    x = np.linspace(-1, 1, 9)
    d = np.diag(np.ones(9))  # mass only on the diagonal y = x
    m = density_moments(d, x, x)
    assert m["corr"] == pytest.approx(1.0)


def test_moments_validation():
    with pytest.raises(InvalidArgumentError):
        density_moments(np.zeros((2, 2)), np.arange(2.0), np.arange(2.0))
    with pytest.raises(InvalidArgumentError):
        density_moments(np.ones((2, 3)), np.arange(2.0), np.arange(2.0))


# --------------------------------------------------------------------------
# kernel density estimate

def _grid_axes(m=41):
    return [np.linspace(0, 1, m), np.linspace(0, 1, m)]


def test_kde_permutation_invariant():
    rng = np.random.default_rng(3)
    pts = rng.random((50, 2))
    axes = _grid_axes()
    a = kde_estimate(pts, 0.1, axes)
    b = kde_estimate(pts[::-1], 0.1, axes)
    assert np.max(np.abs(a - b)) < 1e-15


def test_kde_flat_in_wide_bandwidth_limit():
    rng = np.random.default_rng(4)
    pts = rng.random((20, 2))
    dens = kde_estimate(pts, 1e3, _grid_axes())
    assert dens.max() / dens.min() == pytest.approx(1.0, abs=1e-5)


def test_kde_concentrates_at_sample():
    pts = np.array([[0.5, 0.5]])
    axes = _grid_axes(21)
    dens = kde_estimate(pts, 0.05, axes)
    assert np.unravel_index(np.argmax(dens), dens.shape) == (10, 10)
    assert dens.sum() == pytest.approx(1.0)


def test_kde_recovers_gaussian_density():
    # the estimator's mean is target (*) kernel, a Gaussian with s^2 = sig^2+h^2
    rng = np.random.default_rng(5)
    n = 10_000
    sig, h = 0.12, 0.04
    pts = rng.normal(loc=0.5, scale=sig, size=(n, 2))
    axes = _grid_axes(61)
    dens = kde_estimate(pts, h, axes)
    xg, yg = np.meshgrid(axes[0], axes[1], indexing="ij")
    s2 = sig**2 + h**2
    want = np.exp(-((xg - 0.5) ** 2 + (yg - 0.5) ** 2) / (2 * s2))
    want /= want.sum()
    assert np.max(np.abs(dens - want)) < 0.05 * want.max()


def test_kde_total_variation_grows_with_smoothing():
    rng = np.random.default_rng(6)
    pts = np.clip(rng.normal(0.5, 0.08, size=(400, 2)), 0, 1)
    axes = _grid_axes(41)
    peaks = [kde_estimate(pts, h, axes).max() for h in (0.02, 0.05, 0.1, 0.3)]
    assert peaks == sorted(peaks, reverse=True)


def test_kde_validation():
    with pytest.raises(InvalidArgumentError):
        kde_estimate(np.zeros((3, 2)), -1.0, _grid_axes())
    with pytest.raises(InvalidArgumentError):
        kde_estimate(np.zeros((3, 3)), 0.1, _grid_axes())


# --------------------------------------------------------------------------
# bandwidth cross-validation

def test_cv_finds_interior_maximum():
    rng = np.random.default_rng(7)
    pts = rng.normal(0.5, 0.1, size=(500, 2))
    h_grid = np.geomspace(0.005, 0.5, 30)
    scan = kde_cv_bandwidth(pts, h_grid)
    assert not scan.degenerate
    k = int(np.argmax(scan.scores))
    assert 0 < k < len(h_grid) - 1  # interior optimum
    assert scan.h_opt == h_grid[k]
    assert 0.01 < scan.h_opt < 0.2


def test_cv_duplicated_points_prefer_smallest_bandwidth():
    # with exact duplicates the leave-one-out likelihood grows without bound
    # as h -> 0, so the scan must pick the left edge of the grid
    pts = np.repeat(np.array([[0.3, 0.3], [0.7, 0.6]]), 50, axis=0)
    h_grid = np.geomspace(0.01, 0.2, 25)
    scan = kde_cv_bandwidth(pts, h_grid)
    assert not scan.degenerate
    assert scan.h_opt == h_grid[0]


def test_cv_duplicate_compression_matches_bruteforce():
    rng = np.random.default_rng(8)
    base = rng.random((6, 2))
    reps = rng.integers(1, 5, size=6)
    pts = np.repeat(base, reps, axis=0)
    h_grid = np.array([0.05, 0.1, 0.2])
    scan = kde_cv_bandwidth(pts, h_grid)
    # brute force: for every point, density of the others
    N = len(pts)
    for idx, h in enumerate(h_grid):
        tot = 0.0
        for i in range(N):
            d2 = np.sum((pts - pts[i]) ** 2, axis=1)
            k = np.exp(-d2 / (2 * h * h))
            dens = (k.sum() - 1.0) / ((N - 1) * 2 * np.pi * h * h)
            tot += np.log(dens)
        assert scan.scores[idx] == pytest.approx(tot / N, rel=1e-12)


def test_cv_isolated_points_degenerate():
    pts = np.array([[0.0, 0.0], [1e6, 1e6]])
    scan = kde_cv_bandwidth(pts, np.array([0.01, 0.1]))
    assert scan.degenerate
    assert scan.h_opt == 0.01  # falls back to the first candidate


def test_cv_validation():
    with pytest.raises(InvalidArgumentError):
        kde_cv_bandwidth(np.zeros((1, 2)), np.array([0.1]))
    with pytest.raises(InvalidArgumentError):
        kde_cv_bandwidth(np.zeros((5, 2)), np.array([0.1, -0.1]))
