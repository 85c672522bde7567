"""Finite Fourier / Chebyshev series: interpolation, coefficients, evaluation.

Coefficient tensors are dense, C-ordered, one axis per dimension.  Fourier
storage index 0 corresponds to mode k = -d (shift by +d); Chebyshev index k is
the polynomial degree directly.  An optional per-dimension ``kmin`` overrides
the Fourier mode range for asymmetric spectra (index 0 <-> k = kmin), which the
plane-wave targets need; symmetric series leave it None.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidArgumentError, NumericDomainError
from .grids import SYMMETRIC, UNIT, GridSpec

FOURIER = "fourier"
CHEBYSHEV = "chebyshev"

_LETTERS = "abcdefghijklmnopqrstuvwx"


@dataclass(frozen=True)
class TargetFunction:
    """A deterministic map from D-vectors to complex values.

    ``fn`` must be vectorized: it receives an (M, D) array and returns (M,)
    values.  ``domain`` records which basis the function pairs with (unit cube
    for Fourier after periodic extension, symmetric cube for Chebyshev); the
    function itself may well be defined on a larger set (periodic extensions
    are defined on all of R^D).
    """

    arity: int
    domain: str
    fn: Callable[[np.ndarray], np.ndarray]

    def evaluate(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        if single:
            pts = pts[None, :]
        if pts.shape[1] != self.arity:
            raise InvalidArgumentError(
                f"expected points of dimension {self.arity}, got {pts.shape[1]}"
            )
        vals = np.asarray(self.fn(pts))
        return vals[0] if single else vals


@dataclass(frozen=True)
class SeriesApprox:
    """Truncated series with coefficient tensor and LCU normalization.

    basis "fourier": coeffs shape (2d_i+1, ...), mode k_i = index - d_i unless
    kmin overrides; basis "chebyshev": coeffs shape (d_i+1, ...), k_i = index.
    norm_N is the 1-norm of the coefficients (the post-selection normalization).
    """

    basis: str
    degrees: tuple[int, ...]
    coeffs: np.ndarray
    kmin: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.basis not in (FOURIER, CHEBYSHEV):
            raise InvalidArgumentError(f"unknown basis {self.basis!r}")
        degrees = tuple(int(d) for d in self.degrees)
        if any(d < 0 for d in degrees):
            raise InvalidArgumentError("degrees must be non-negative")
        coeffs = np.ascontiguousarray(np.asarray(self.coeffs, dtype=complex))
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "coeffs", coeffs)
        if self.kmin is not None:
            object.__setattr__(self, "kmin", tuple(int(k) for k in self.kmin))
        if coeffs.ndim != len(degrees):
            raise InvalidArgumentError("coefficient tensor rank != number of degrees")
        if self.kmin is None:
            expected = tuple(
                (2 * d + 1) if self.basis == FOURIER else (d + 1) for d in degrees
            )
            if coeffs.shape != expected:
                raise InvalidArgumentError(
                    f"coefficient shape {coeffs.shape} does not match degrees "
                    f"{degrees} for basis {self.basis}"
                )
        elif len(self.kmin) != len(degrees):
            raise InvalidArgumentError("kmin rank != number of degrees")

    @property
    def dims(self) -> int:
        return len(self.degrees)

    @property
    def norm_N(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    def k_values(self, dim: int) -> np.ndarray:
        """Integer mode/degree indices along one axis, aligned with storage."""
        size = self.coeffs.shape[dim]
        if self.basis == CHEBYSHEV:
            return np.arange(size)
        lo = -self.degrees[dim] if self.kmin is None else self.kmin[dim]
        return np.arange(lo, lo + size)

    def to_json(self) -> str:
        flat = self.coeffs.reshape(-1)
        payload = {
            "basis": self.basis,
            "D": self.dims,
            "degrees": list(self.degrees),
            "coeffs": [[float(c.real), float(c.imag)] for c in flat],
        }
        if self.kmin is not None:
            payload["kmin"] = list(self.kmin)
            payload["shape"] = list(self.coeffs.shape)
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "SeriesApprox":
        try:
            payload = json.loads(text)
            basis = payload["basis"]
            degrees = tuple(int(d) for d in payload["degrees"])
            kmin = payload.get("kmin")
            if kmin is not None:
                kmin = tuple(int(k) for k in kmin)
            raw = np.array(payload["coeffs"], dtype=float)
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise InvalidArgumentError(f"malformed coefficient JSON: {exc}") from exc
        flat = raw[:, 0] + 1j * raw[:, 1] if raw.size else np.zeros(0, complex)
        if kmin is not None:
            shape = tuple(int(v) for v in payload.get("shape", ()))
            if len(shape) != len(degrees):
                raise InvalidArgumentError("asymmetric series JSON needs a shape field")
        else:
            shape = tuple(
                (2 * d + 1) if basis == FOURIER else (d + 1) for d in degrees
            )
        if int(np.prod(shape)) != len(flat):
            raise InvalidArgumentError("coefficient count mismatch")
        return cls(basis=basis, degrees=degrees, coeffs=flat.reshape(shape), kmin=kmin)


def chebyshev_nodes(N: int) -> np.ndarray:
    """Roots of T_N: x_m = cos(pi (2m+1) / (2N)), strictly decreasing."""
    if N < 1:
        raise InvalidArgumentError("node count must be >= 1")
    m = np.arange(N, dtype=float)
    return np.cos(np.pi * (2 * m + 1) / (2 * N))


def _dct2(values: np.ndarray, axis: int) -> np.ndarray:
    """Type-II DCT along one axis via the length-4N FFT embedding.

    Valid for complex input: the embedding pairs each sample with its mirror so
    the FFT bins collapse to 2 * sum x_m cos(pi k (2m+1) / (2N)).
    """
    N = values.shape[axis]
    moved = np.moveaxis(values, axis, -1)
    y = np.zeros(moved.shape[:-1] + (4 * N,), dtype=complex)
    y[..., 1 : 2 * N : 2] = moved
    y[..., 2 * N + 1 :: 2] = moved[..., ::-1]
    spec = np.fft.fft(y, axis=-1)[..., :N] / 2.0
    return np.moveaxis(spec, -1, axis)


def _eval_on_mesh(f: TargetFunction, axes: Sequence[np.ndarray]) -> np.ndarray:
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    vals = f.evaluate(pts)
    if not np.all(np.isfinite(vals)):
        raise NumericDomainError("target function returned non-finite node values")
    return np.asarray(vals, dtype=complex).reshape([len(ax) for ax in axes])


def chebyshev_interpolate(f: TargetFunction, degrees: Sequence[int]) -> SeriesApprox:
    """Chebyshev coefficients matching f at the tensor grid of T_{d+1} roots.

    Per axis this is a type-II DCT scaled by 2/N with the k=0 term halved.
    """
    degrees = tuple(int(d) for d in degrees)
    if len(degrees) != f.arity:
        raise InvalidArgumentError("degree count != function arity")
    if any(d < 0 for d in degrees):
        raise InvalidArgumentError("degrees must be non-negative")
    axes = [chebyshev_nodes(d + 1) for d in degrees]
    vals = _eval_on_mesh(f, axes)
    coeffs = vals
    for axis, d in enumerate(degrees):
        N = d + 1
        coeffs = _dct2(coeffs, axis) * (2.0 / N)
        zero = [slice(None)] * len(degrees)
        zero[axis] = 0
        coeffs[tuple(zero)] /= 2.0
    return SeriesApprox(basis=CHEBYSHEV, degrees=degrees, coeffs=coeffs)


def fourier_interpolate(f: TargetFunction, degrees: Sequence[int]) -> SeriesApprox:
    """Fourier coefficients from the DFT over equispaced nodes x_m = 2m/(2d+1).

    f must already be 2-periodic in every variable (see mirror_extend); the
    nodes sweep one full period [0, 2).
    """
    degrees = tuple(int(d) for d in degrees)
    if len(degrees) != f.arity:
        raise InvalidArgumentError("degree count != function arity")
    if any(d < 0 for d in degrees):
        raise InvalidArgumentError("degrees must be non-negative")
    axes = [2.0 * np.arange(2 * d + 1) / (2 * d + 1) for d in degrees]
    vals = _eval_on_mesh(f, axes)
    coeffs = np.fft.fftn(vals) / vals.size
    # index j holds mode k = j mod (2d+1) mapped into [-d, d]; shift so that
    # storage 0 <-> k = -d along every axis
    for axis, d in enumerate(degrees):
        coeffs = np.roll(coeffs, d, axis=axis)
    return SeriesApprox(basis=FOURIER, degrees=degrees, coeffs=coeffs)


def mirror_extend(f: TargetFunction) -> TargetFunction:
    """Even, 2-periodic extension of a function given on the unit cube.

    Coordinates are reduced mod 2 into [-1, 1] and reflected: x -> |x'|.
    """
    if f.domain != UNIT:
        raise InvalidArgumentError("mirror extension expects a unit-cube target")

    def fn(pts: np.ndarray) -> np.ndarray:
        reduced = np.mod(pts + 1.0, 2.0) - 1.0
        return f.fn(np.abs(reduced))

    return TargetFunction(arity=f.arity, domain=UNIT, fn=fn)


def gaussian_fourier_coeffs(mu, Sigma, degree: int) -> SeriesApprox:
    """Bivariate-Gaussian Fourier coefficients from the characteristic function.

    c_{k,l} = (1/4) exp(i mu.w - w.Sigma.w / 2) with w = -pi (k, l); exact for
    a density supported inside [0,1]^2 and extended by zero over the period-2
    cell.  Warns if more than 1e-4 of the mass falls outside the unit square.
    """
    mu = np.asarray(mu, dtype=float).reshape(2)
    Sigma = np.asarray(Sigma, dtype=float).reshape(2, 2)
    if degree < 0:
        raise InvalidArgumentError("degree must be non-negative")
    if not np.allclose(Sigma, Sigma.T, atol=1e-12):
        raise InvalidArgumentError("covariance must be symmetric")
    evals = np.linalg.eigvalsh(Sigma)
    if evals[0] <= 0:
        raise InvalidArgumentError("covariance must be positive-definite")

    # marginal-tail bound on the mass outside [0,1]^2
    tail = 0.0
    for i in range(2):
        s = math.sqrt(Sigma[i, i])
        tail += 0.5 * (1 + math.erf((0.0 - mu[i]) / (s * math.sqrt(2))))
        tail += 0.5 * (1 - math.erf((1.0 - mu[i]) / (s * math.sqrt(2))))
    if tail > 1e-4:
        warnings.warn(
            f"about {tail:.2e} of the Gaussian mass lies outside the unit square; "
            "coefficients treat it as truncated",
            stacklevel=2,
        )

    k = np.arange(-degree, degree + 1)
    KX, KY = np.meshgrid(k, k, indexing="ij")
    wx, wy = -np.pi * KX, -np.pi * KY
    quad = (
        Sigma[0, 0] * wx**2 + 2 * Sigma[0, 1] * wx * wy + Sigma[1, 1] * wy**2
    )
    coeffs = 0.25 * np.exp(1j * (mu[0] * wx + mu[1] * wy) - 0.5 * quad)
    return SeriesApprox(basis=FOURIER, degrees=(degree, degree), coeffs=coeffs)


def _basis_matrix(s: SeriesApprox, dim: int, x: np.ndarray) -> np.ndarray:
    """(len(x), K_dim) matrix of basis-function values along one axis."""
    if s.basis == FOURIER:
        k = s.k_values(dim)
        return np.exp(1j * np.pi * np.outer(x, k))
    K = s.coeffs.shape[dim]
    out = np.empty((len(x), K), dtype=complex)
    out[:, 0] = 1.0
    if K > 1:
        out[:, 1] = x
    for j in range(2, K):  # T_{j} = 2x T_{j-1} - T_{j-2}
        out[:, j] = 2.0 * x * out[:, j - 1] - out[:, j - 2]
    return out


def _check_domain(s: SeriesApprox, pts: np.ndarray) -> None:
    lo = 0.0 if s.basis == FOURIER else -1.0
    if pts.min() < lo - 1e-9 or pts.max() > 1.0 + 1e-9:
        raise InvalidArgumentError(
            f"points outside the {s.basis} evaluation domain [{lo}, 1]"
        )


def evaluate_series(s: SeriesApprox, points) -> np.ndarray:
    """Series values at arbitrary points (shape (M, D) or a single D-vector)."""
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    if single:
        pts = pts[None, :]
    if pts.shape[1] != s.dims:
        raise InvalidArgumentError("point dimension != series dimension")
    _check_domain(s, pts)
    D = s.dims
    mats = [_basis_matrix(s, i, pts[:, i]) for i in range(D)]
    # contract sum_k c_k prod_i B_i[m, k_i] in one einsum
    ks = _LETTERS[:D]
    sub = ",".join(f"m{ks[i]}" for i in range(D)) + f",{ks}->m"
    vals = np.einsum(sub, *mats, s.coeffs, optimize=True)
    return vals[0] if single else vals


def evaluate_series_on_axes(s: SeriesApprox, axes: Sequence[np.ndarray]) -> np.ndarray:
    """Series values over the tensor product of per-axis sample points.

    Returns an array of shape (len(axes[0]), ...); exploits the tensor
    structure — one basis matrix per axis, then a single contraction — which
    is much cheaper than evaluate_series on the flattened mesh.
    """
    if len(axes) != s.dims:
        raise InvalidArgumentError("axis count != series dimension")
    D = s.dims
    mats = [_basis_matrix(s, i, np.asarray(axes[i], dtype=float)) for i in range(D)]
    ks = _LETTERS[:D]
    ms = _LETTERS[D : 2 * D]
    sub = ",".join(f"{ms[i]}{ks[i]}" for i in range(D)) + f",{ks}->{ms}"
    return np.einsum(sub, *mats, s.coeffs, optimize=True)


def evaluate_series_on_grid(s: SeriesApprox, g: GridSpec) -> np.ndarray:
    """Series values over a full dyadic grid, flat, dimension 0 fastest."""
    if g.dims != s.dims:
        raise InvalidArgumentError("grid dimension != series dimension")
    expected = UNIT if s.basis == FOURIER else SYMMETRIC
    if g.convention != expected:
        raise InvalidArgumentError(
            f"{s.basis} series pairs with the {expected} grid convention"
        )
    axes = [g.axis_points(i) for i in range(s.dims)]
    return evaluate_series_on_axes(s, axes).ravel(order="F")
