"""Pure-numpy gate kernels.

Every kernel acts on the LAST axis of ``psi`` (length 2^Q) and tolerates
arbitrary leading batch axes, so the same code serves the 1-D statevector path
and the batched rows-of-identity path used to build dense unitaries.  Bit j of
the basis index is qubit j.
"""
from __future__ import annotations

import numpy as np

from . import circuit as cir

_SQRT1_2 = 1.0 / np.sqrt(2.0)


def _split1(psi: np.ndarray, Q: int, q: int) -> np.ndarray:
    return psi.reshape(psi.shape[:-1] + (1 << (Q - 1 - q), 2, 1 << q))


def apply_phase(psi, Q, q, theta):
    v = _split1(psi, Q, q)
    v[..., 1, :] *= np.exp(1j * theta)


def apply_x(psi, Q, q):
    v = _split1(psi, Q, q)
    tmp = v[..., 0, :].copy()
    v[..., 0, :] = v[..., 1, :]
    v[..., 1, :] = tmp


def apply_z(psi, Q, q):
    v = _split1(psi, Q, q)
    v[..., 1, :] *= -1.0


def apply_h(psi, Q, q):
    v = _split1(psi, Q, q)
    a0 = v[..., 0, :].copy()
    a1 = v[..., 1, :]
    v[..., 0, :] = (a0 + a1) * _SQRT1_2
    v[..., 1, :] = (a0 - a1) * _SQRT1_2


def _split2(psi: np.ndarray, Q: int, qa: int, qb: int):
    """View with separate axes for bits qa > qb: (..., hi, 2, mid, 2, lo)."""
    return psi.reshape(
        psi.shape[:-1]
        + (1 << (Q - 1 - qa), 2, 1 << (qa - 1 - qb), 2, 1 << qb)
    )


def apply_cphase(psi, Q, qc, qt, theta):
    hi, lo = max(qc, qt), min(qc, qt)
    v = _split2(psi, Q, hi, lo)
    v[..., 1, :, 1, :] *= np.exp(1j * theta)


def apply_cx(psi, Q, qc, qt):
    hi, lo = max(qc, qt), min(qc, qt)
    v = _split2(psi, Q, hi, lo)
    if qc == hi:
        tmp = v[..., 1, :, 0, :].copy()
        v[..., 1, :, 0, :] = v[..., 1, :, 1, :]
        v[..., 1, :, 1, :] = tmp
    else:
        tmp = v[..., 0, :, 1, :].copy()
        v[..., 0, :, 1, :] = v[..., 1, :, 1, :]
        v[..., 1, :, 1, :] = tmp


def apply_mcz(psi, Q, controls, polarities, qt):
    idx = np.arange(1 << Q)
    mask = (idx >> qt) & 1 == 1
    for c, p in zip(controls, polarities):
        mask &= ((idx >> c) & 1) == p
    psi[..., mask] *= -1.0


def apply_ucry(psi, Q, controls, qt, angles):
    half = np.arange(1 << (Q - 1))
    i0 = ((half >> qt) << (qt + 1)) | (half & ((1 << qt) - 1))
    pat = np.zeros_like(i0)
    for r, c in enumerate(controls):
        pat |= ((i0 >> c) & 1) << r
    ang = np.asarray(angles)[pat]
    cos, sin = np.cos(ang / 2.0), np.sin(ang / 2.0)
    i1 = i0 | (1 << qt)
    a0 = psi[..., i0]
    a1 = psi[..., i1]
    psi[..., i0] = cos * a0 - sin * a1
    psi[..., i1] = sin * a0 + cos * a1


def apply_diagphase(psi, Q, qubits, phases):
    idx = np.arange(1 << Q)
    pat = np.zeros_like(idx)
    for r, q in enumerate(qubits):
        pat |= ((idx >> q) & 1) << r
    table = np.exp(1j * np.asarray(phases))
    psi *= table[pat]


def apply_gate(psi: np.ndarray, Q: int, g) -> None:
    if g.kind == cir.PHASE:
        apply_phase(psi, Q, g.qubits[0], g.angle)
    elif g.kind == cir.CPHASE:
        apply_cphase(psi, Q, g.qubits[0], g.qubits[1], g.angle)
    elif g.kind == cir.PAULI_X:
        apply_x(psi, Q, g.qubits[0])
    elif g.kind == cir.PAULI_Z:
        apply_z(psi, Q, g.qubits[0])
    elif g.kind == cir.HADAMARD:
        apply_h(psi, Q, g.qubits[0])
    elif g.kind == cir.CX:
        apply_cx(psi, Q, g.qubits[0], g.qubits[1])
    elif g.kind == cir.MCZ:
        apply_mcz(psi, Q, g.qubits[:-1], g.polarities, g.qubits[-1])
    elif g.kind == cir.UCRY:
        apply_ucry(psi, Q, g.qubits[:-1], g.qubits[-1], g.angles)
    elif g.kind == cir.DIAGPHASE:
        apply_diagphase(psi, Q, g.qubits, g.phases)
    else:  # pragma: no cover - Gate validates kinds
        raise AssertionError(f"unhandled gate kind {g.kind}")
