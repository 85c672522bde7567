"""Series construction, interpolation, evaluation, and round-trips."""
import numpy as np
import pytest

import oracles
from mvsp import (
    CHEBYSHEV,
    FOURIER,
    GridSpec,
    InvalidArgumentError,
    NumericDomainError,
    SeriesApprox,
    TargetFunction,
    chebyshev_interpolate,
    chebyshev_nodes,
    evaluate_series,
    evaluate_series_on_grid,
    fourier_interpolate,
    gaussian_fourier_coeffs,
    mirror_extend,
    ricker2d,
    student_t2d,
)


def _poly_target():
    # smooth polynomial on [-1, 1]^2, exactly representable at low degree
    def fn(pts):
        x, y = pts[:, 0], pts[:, 1]
        return x**3 - 2 * x * y + 0.5 * y**2

    return TargetFunction(arity=2, domain="symmetric", fn=fn)


def test_chebyshev_nodes_are_T_roots():
    for N in (1, 2, 5, 8):
        nodes = chebyshev_nodes(N)
        assert np.max(np.abs(oracles.chebyshev_T(N, nodes))) < 1e-12


def test_chebyshev_interpolate_against_direct_cosine_sum():
    f = _poly_target()
    s = chebyshev_interpolate(f, (4, 4))
    # cross-check one axis at a time: fix y at a node, 1-D coefficients of x
    nodes = chebyshev_nodes(5)
    for j, y in enumerate(nodes):
        pts = np.stack([nodes, np.full(5, y)], axis=1)
        direct = oracles.chebyshev_coeffs_1d(f.fn(pts))
        # series summed over the y-axis basis at this y
        partial = sum(
            s.coeffs[:, l] * oracles.chebyshev_T(l, np.array(y))
            for l in range(5)
        )
        assert np.max(np.abs(direct - partial)) < 1e-12


def test_chebyshev_interpolation_is_exact_for_polynomials():
    f = _poly_target()
    s = chebyshev_interpolate(f, (3, 3))
    rng = np.random.default_rng(3)
    pts = rng.uniform(-1, 1, size=(50, 2))
    assert np.max(np.abs(evaluate_series(s, pts) - f.fn(pts))) < 1e-12


def test_chebyshev_high_degrees_decay():
    f = _poly_target()
    s = chebyshev_interpolate(f, (6, 6))
    # degree > 3 coefficients vanish for a cubic
    assert np.max(np.abs(s.coeffs[4:, :])) < 1e-12
    assert np.max(np.abs(s.coeffs[:, 3:])) < 1e-12


def test_fourier_interpolate_against_direct_dft():
    def fn(pts):
        return np.exp(np.sin(np.pi * pts[:, 0])) + 0.3 * np.cos(np.pi * pts[:, 1])

    f = TargetFunction(arity=2, domain="unit", fn=fn)
    s = fourier_interpolate(f, (3, 3))
    # oracle: direct 1-D DFT after contracting the other axis at a node
    K = 7
    nodes = 2.0 * np.arange(K) / K
    for j, y in enumerate(nodes):
        pts = np.stack([nodes, np.full(K, y)], axis=1)
        direct = oracles.fourier_coeffs_1d(fn(pts))
        partial = sum(
            s.coeffs[:, l] * np.exp(1j * np.pi * (l - 3) * y) for l in range(K)
        )
        assert np.max(np.abs(direct - partial)) < 1e-12


def test_fourier_interpolant_matches_nodes():
    f = student_t2d((0.5, 0.5), [[0.05, 0.0], [0.0, 0.05]])
    s = fourier_interpolate(f, (4, 4))
    # defining property: the interpolant reproduces f at every node pair,
    # including the nodes past x = 1 (checked via the loop oracle, which has
    # no domain restriction)
    nodes = 2.0 * np.arange(9) / 9
    for xm in (nodes[0], nodes[3], nodes[7]):
        for ym in (nodes[1], nodes[8]):
            ref = f.fn(np.array([[xm, ym]]))[0]
            got = oracles.naive_series_eval(FOURIER, s.coeffs, (xm, ym))
            assert abs(got - ref) < 1e-10


def test_evaluate_series_matches_naive_oracle():
    rng = np.random.default_rng(11)
    coeffs = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
    s = SeriesApprox(basis=CHEBYSHEV, degrees=(2, 3), coeffs=coeffs)
    pts = rng.uniform(-1, 1, size=(10, 2))
    vals = evaluate_series(s, pts)
    for i in range(10):
        assert abs(vals[i] - oracles.naive_series_eval(CHEBYSHEV, coeffs, pts[i])) < 1e-12


def test_evaluate_on_grid_matches_pointwise():
    rng = np.random.default_rng(5)
    coeffs = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
    s = SeriesApprox(basis=FOURIER, degrees=(2, 1), coeffs=coeffs)
    g = GridSpec("unit", (3, 2))
    flat = evaluate_series_on_grid(s, g)
    pts = g.points()
    assert np.max(np.abs(flat - evaluate_series(s, pts))) < 1e-12


def test_asymmetric_mode_range_evaluation():
    # modes k in [-2, 1]: storage 0 -> k = -2
    coeffs = np.zeros((4,), dtype=complex)
    coeffs[3] = 1.0  # k = +1
    s = SeriesApprox(basis=FOURIER, degrees=(2,), coeffs=coeffs, kmin=(-2,))
    x = np.array([[0.25]])
    assert abs(evaluate_series(s, x)[0] - np.exp(1j * np.pi * 0.25)) < 1e-15


def test_norm_is_coefficient_one_norm():
    coeffs = np.array([[1.0, -2.0], [0.5j, 0.0]])
    s = SeriesApprox(basis=CHEBYSHEV, degrees=(1, 1), coeffs=coeffs)
    assert abs(s.norm_N - 3.5) < 1e-15


def test_json_round_trip():
    rng = np.random.default_rng(0)
    coeffs = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
    s = SeriesApprox(basis=FOURIER, degrees=(2, 1), coeffs=coeffs)
    s2 = SeriesApprox.from_json(s.to_json())
    assert s2.basis == s.basis
    assert s2.degrees == s.degrees
    assert np.array_equal(s2.coeffs, s.coeffs)

    s3 = SeriesApprox(
        basis=FOURIER, degrees=(2,), coeffs=np.arange(4, dtype=complex), kmin=(-2,)
    )
    s4 = SeriesApprox.from_json(s3.to_json())
    assert s4.kmin == (-2,)
    assert np.array_equal(s4.coeffs, s3.coeffs)


def test_shape_validation():
    with pytest.raises(InvalidArgumentError):
        SeriesApprox(basis=FOURIER, degrees=(2,), coeffs=np.zeros(4, dtype=complex))
    with pytest.raises(InvalidArgumentError):
        SeriesApprox(basis=CHEBYSHEV, degrees=(2, 2), coeffs=np.zeros((3, 4), complex))
    with pytest.raises(InvalidArgumentError):
        chebyshev_interpolate(_poly_target(), (3,))  # arity mismatch


def test_domain_checks():
    s = SeriesApprox(basis=CHEBYSHEV, degrees=(1,), coeffs=np.ones(2, complex))
    with pytest.raises(InvalidArgumentError):
        evaluate_series(s, np.array([[1.5]]))
    sf = SeriesApprox(basis=FOURIER, degrees=(1,), coeffs=np.ones(3, complex))
    with pytest.raises(InvalidArgumentError):
        evaluate_series_on_grid(sf, GridSpec("symmetric", (2,)))


def test_non_finite_target_rejected():
    def fn(pts):
        with np.errstate(divide="ignore"):
            return 1.0 / pts[:, 0]  # blows up at the x = 0 node

    f = TargetFunction(arity=1, domain="unit", fn=fn)
    with pytest.raises(NumericDomainError):
        fourier_interpolate(f, (2,))


def test_mirror_extension_even_and_periodic():
    f = student_t2d((0.3, 0.6), [[0.05, 0.01], [0.01, 0.08]])
    ext = mirror_extend(f)
    pts = np.array([[0.3, 0.4]])
    # even: f(-x) = f(x); 2-periodic
    assert np.allclose(ext.fn(pts), ext.fn(-pts))
    assert np.allclose(ext.fn(pts), ext.fn(pts + 2.0))
    assert np.allclose(ext.fn(pts), f.fn(pts))


def test_mirror_extension_improves_fourier_decay():
    f = student_t2d((0.5, 0.5), [[0.05, 0.0], [0.0, 0.05]])

    def tail(s):
        return np.abs(s.coeffs[0, :]).max()  # k_x = -d row

    # seam discontinuity decays ~1/d; even periodization ~1/d^2, so doubling
    # the degree roughly halves the direct tail but quarters the mirrored one
    t_direct = [tail(fourier_interpolate(f, (d, d))) for d in (16, 32)]
    t_mirror = [
        tail(fourier_interpolate(mirror_extend(f), (d, d))) for d in (16, 32)
    ]
    assert 1.5 < t_direct[0] / t_direct[1] < 3.0
    assert t_mirror[0] / t_mirror[1] > 3.0
    assert t_mirror[1] < t_direct[1]


def test_gaussian_characteristic_coeffs_against_quadrature():
    scipy_integrate = pytest.importorskip("scipy.integrate")
    import warnings

    mu = (0.5, 0.5)
    Sigma = [[0.02, 0.005], [0.005, 0.03]]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # tiny tail mass trips the advisory
        s = gaussian_fourier_coeffs(mu, Sigma, 2)
    from mvsp import gaussian2d

    f = gaussian2d(mu, Sigma)
    # periodizing the density makes its Fourier coefficient the plane integral
    # c_{k,l} = (1/4) integral over R^2 of f(x) e^{-i pi (k x + l y)};
    # [-2, 3]^2 covers the mass to far beyond quadrature accuracy
    for k, l in [(0, 0), (1, 0), (-1, 2), (2, -2)]:
        def integrand_re(y, x, k=k, l=l):
            pts = np.array([[x, y]])
            val = f.fn(pts)[0] * np.exp(-1j * np.pi * (k * x + l * y))
            return val.real

        def integrand_im(y, x, k=k, l=l):
            pts = np.array([[x, y]])
            val = f.fn(pts)[0] * np.exp(-1j * np.pi * (k * x + l * y))
            return val.imag

        re, _ = scipy_integrate.dblquad(integrand_re, -2, 3, -2, 3, epsabs=1e-10)
        im, _ = scipy_integrate.dblquad(integrand_im, -2, 3, -2, 3, epsabs=1e-10)
        ref = 0.25 * (re + 1j * im)
        got = s.coeffs[k + 2, l + 2]
        assert abs(got - ref) < 1e-8


def test_gaussian_coeffs_truncation_warning():
    with pytest.warns(UserWarning, match="outside the unit square"):
        gaussian_fourier_coeffs((0.5, 0.5), [[0.22**2, 0], [0, 0.18**2]], 3)


def test_dct_against_scipy_fft():
    scipy_fft = pytest.importorskip("scipy.fft")
    f = ricker2d(0.5)
    s = chebyshev_interpolate(f, (7, 7))
    nodes = chebyshev_nodes(8)
    mesh = np.stack(np.meshgrid(nodes, nodes, indexing="ij"), axis=-1).reshape(-1, 2)
    vals = f.fn(mesh).reshape(8, 8)
    ref = scipy_fft.dctn(vals, type=2) / (8 * 8)
    ref[0, :] /= 2.0
    ref[:, 0] /= 2.0
    assert np.max(np.abs(s.coeffs - ref)) < 1e-12
