"""Uniform qubit grids and the diagonal grid operators.

Two conventions: UNIT places 2^n equispaced points on [0, 1] (x_j = j/(2^n-1)),
SYMMETRIC places them on [-1, 1] (x_j = 2j/(2^n-1) - 1).  The basis index of an
n-qubit register is identified with the grid index little-endian style
(x = sum_j 2^j x_j, bit j on qubit j), so the diagonal of the grid operator is
exactly the grid itself.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError

UNIT = "unit"  # [0, 1], pairs with the Fourier basis
SYMMETRIC = "symmetric"  # [-1, 1], pairs with the Chebyshev basis

_CONVENTIONS = (UNIT, SYMMETRIC)


def grid_points(convention: str, n: int) -> np.ndarray:
    """2^n grid values for one dimension, monotone increasing, endpoints exact."""
    if convention not in _CONVENTIONS:
        raise InvalidArgumentError(f"unknown grid convention {convention!r}")
    if n < 1:
        raise InvalidArgumentError("qubit count must be >= 1")
    j = np.arange(2**n, dtype=float)
    x = j / (2**n - 1)
    if convention == SYMMETRIC:
        x = 2.0 * x - 1.0
    # force exact endpoints (j/(2^n-1) is exact at both ends anyway, but be explicit)
    x[0] = 0.0 if convention == UNIT else -1.0
    x[-1] = 1.0
    return x


def grid_operator_diag(convention: str, n: int) -> np.ndarray:
    """Diagonal of the grid operator: identical values to grid_points.

    Documents the identification of basis state |x> with the grid value x_j;
    the operator itself is never materialized as a matrix.
    """
    return grid_points(convention, n)


@dataclass(frozen=True)
class GridSpec:
    """Tensor grid over D dimensions: 2^{n_i} points along axis i."""

    convention: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.convention not in _CONVENTIONS:
            raise InvalidArgumentError(f"unknown grid convention {self.convention!r}")
        if not self.qubits or any(n < 1 for n in self.qubits):
            raise InvalidArgumentError("each dimension needs at least one qubit")
        object.__setattr__(self, "qubits", tuple(int(n) for n in self.qubits))

    @property
    def dims(self) -> int:
        return len(self.qubits)

    @property
    def total_points(self) -> int:
        return 1 << sum(self.qubits)

    def axis_points(self, i: int) -> np.ndarray:
        return grid_points(self.convention, self.qubits[i])

    def points(self) -> np.ndarray:
        """All grid points, shape (total_points, D).

        Flat index is dimension-major little-endian: dimension 0 occupies the
        lowest bits, so index = j_0 + 2^{n_0} j_1 + ...  Matches the register
        layout used by the circuit builders.
        """
        axes = [self.axis_points(i) for i in range(self.dims)]
        mesh = np.meshgrid(*axes, indexing="ij")
        cols = [m.ravel(order="F") for m in mesh]
        return np.stack(cols, axis=1)
