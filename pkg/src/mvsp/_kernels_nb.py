"""Numba gate kernels: 1-D statevector, tight loops, parallel over amplitudes.

Same semantics as _kernels_np; these exist because the strided pair updates
dominate runtime at 20+ qubits.  All entry points go through apply_gate, which
unpacks Gate fields into plain arrays the JIT functions accept.
"""
from __future__ import annotations

import numpy as np
from numba import njit, prange

from . import circuit as cir

_JIT = dict(cache=True, parallel=True, fastmath=False)


@njit(**_JIT)
def _phase(psi, q, theta):
    ph = np.exp(1j * theta)
    for i in prange(psi.size):
        if (i >> q) & 1:
            psi[i] *= ph


@njit(**_JIT)
def _x(psi, q):
    half = psi.size >> 1
    for i in prange(half):
        i0 = ((i >> q) << (q + 1)) | (i & ((1 << q) - 1))
        i1 = i0 | (1 << q)
        tmp = psi[i0]
        psi[i0] = psi[i1]
        psi[i1] = tmp


@njit(**_JIT)
def _z(psi, q):
    for i in prange(psi.size):
        if (i >> q) & 1:
            psi[i] = -psi[i]


@njit(**_JIT)
def _h(psi, q):
    inv = 1.0 / np.sqrt(2.0)
    half = psi.size >> 1
    for i in prange(half):
        i0 = ((i >> q) << (q + 1)) | (i & ((1 << q) - 1))
        i1 = i0 | (1 << q)
        a0 = psi[i0]
        a1 = psi[i1]
        psi[i0] = (a0 + a1) * inv
        psi[i1] = (a0 - a1) * inv


@njit(**_JIT)
def _cphase(psi, qc, qt, theta):
    ph = np.exp(1j * theta)
    mask = (1 << qc) | (1 << qt)
    for i in prange(psi.size):
        if (i & mask) == mask:
            psi[i] *= ph


@njit(**_JIT)
def _cx(psi, qc, qt):
    half = psi.size >> 1
    for i in prange(half):
        i0 = ((i >> qt) << (qt + 1)) | (i & ((1 << qt) - 1))
        if (i0 >> qc) & 1:
            i1 = i0 | (1 << qt)
            tmp = psi[i0]
            psi[i0] = psi[i1]
            psi[i1] = tmp


@njit(**_JIT)
def _mcz(psi, controls, polarities, qt):
    for i in prange(psi.size):
        if (i >> qt) & 1:
            ok = True
            for r in range(controls.size):
                if (i >> controls[r]) & 1 != polarities[r]:
                    ok = False
                    break
            if ok:
                psi[i] = -psi[i]


@njit(**_JIT)
def _ucry(psi, controls, qt, angles):
    half = psi.size >> 1
    for i in prange(half):
        i0 = ((i >> qt) << (qt + 1)) | (i & ((1 << qt) - 1))
        pat = 0
        for r in range(controls.size):
            pat |= ((i0 >> controls[r]) & 1) << r
        ang = 0.5 * angles[pat]
        c = np.cos(ang)
        s = np.sin(ang)
        i1 = i0 | (1 << qt)
        a0 = psi[i0]
        a1 = psi[i1]
        psi[i0] = c * a0 - s * a1
        psi[i1] = s * a0 + c * a1


@njit(**_JIT)
def _diagphase(psi, qubits, table):
    for i in prange(psi.size):
        pat = 0
        for r in range(qubits.size):
            pat |= ((i >> qubits[r]) & 1) << r
        psi[i] *= table[pat]


def apply_gate(psi: np.ndarray, Q: int, g) -> None:
    if g.kind == cir.PHASE:
        _phase(psi, g.qubits[0], g.angle)
    elif g.kind == cir.CPHASE:
        _cphase(psi, g.qubits[0], g.qubits[1], g.angle)
    elif g.kind == cir.PAULI_X:
        _x(psi, g.qubits[0])
    elif g.kind == cir.PAULI_Z:
        _z(psi, g.qubits[0])
    elif g.kind == cir.HADAMARD:
        _h(psi, g.qubits[0])
    elif g.kind == cir.CX:
        _cx(psi, g.qubits[0], g.qubits[1])
    elif g.kind == cir.MCZ:
        _mcz(
            psi,
            np.asarray(g.qubits[:-1], dtype=np.int64),
            np.asarray(g.polarities, dtype=np.int64),
            g.qubits[-1],
        )
    elif g.kind == cir.UCRY:
        _ucry(
            psi,
            np.asarray(g.qubits[:-1], dtype=np.int64),
            g.qubits[-1],
            np.asarray(g.angles, dtype=np.float64),
        )
    elif g.kind == cir.DIAGPHASE:
        _diagphase(
            psi,
            np.asarray(g.qubits, dtype=np.int64),
            np.exp(1j * np.asarray(g.phases, dtype=np.float64)),
        )
    else:  # pragma: no cover
        raise AssertionError(f"unhandled gate kind {g.kind}")
