"""Dense statevector execution, ancilla post-selection, and shot sampling.

Global bit layout is little-endian over the circuit's registers in declaration
order.  Builders declare main registers first, so post-selecting every ancilla
on |0> amounts to taking the contiguous prefix of the amplitude array.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import kernels
from .circuit import ROLE_MAIN, Circuit
from .errors import InvalidArgumentError, NumericDomainError, ResourceLimitError
from .grids import GridSpec

DEFAULT_QUBIT_CAP = 26


@dataclass
class StateVector:
    num_qubits: int
    amps: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


@dataclass(frozen=True)
class PreparationOutcome:
    """Post-selected, renormalized main-register amplitudes."""

    main_amplitudes: np.ndarray
    p_success: float


def run(
    c: Circuit,
    qubit_cap: int = DEFAULT_QUBIT_CAP,
    validate: bool = False,
) -> StateVector:
    """Execute the circuit on |0...0>.

    validate=True checks the L2 norm after every gate (slow; meant for tests).
    """
    Q = c.num_qubits
    if Q > qubit_cap:
        raise ResourceLimitError(f"circuit needs {Q} qubits, cap is {qubit_cap}")
    psi = np.zeros(1 << Q, dtype=np.complex128)
    psi[0] = 1.0
    for g in c.gates:
        kernels.apply_gate(psi, Q, g)
        if validate:
            drift = abs(np.linalg.norm(psi) - 1.0)
            if drift > 1e-12:
                raise NumericDomainError(
                    f"norm drifted by {drift:.3e} after a {g.kind} gate"
                )
    if c.global_phase:
        psi *= np.exp(1j * c.global_phase)
    return StateVector(num_qubits=Q, amps=psi)


def postselect_zero_ancillas(sv: StateVector, num_main_qubits: int) -> PreparationOutcome:
    """Project every ancilla (the high qubits) onto |0> and renormalize."""
    if not 0 <= num_main_qubits <= sv.num_qubits:
        raise InvalidArgumentError("main qubit count outside the register range")
    block = sv.amps[: 1 << num_main_qubits]
    p = float(np.vdot(block, block).real)
    if p < 1e-300:
        raise NumericDomainError("post-selection probability is numerically zero")
    return PreparationOutcome(main_amplitudes=block / np.sqrt(p), p_success=p)


def postselect_circuit(c: Circuit, sv: StateVector) -> PreparationOutcome:
    """Post-select using the circuit's own register layout."""
    mains = [r for r in c.registers if r.role == ROLE_MAIN]
    width = sum(r.width for r in mains)
    # the prefix trick needs every main register below every ancilla
    offset = 0
    for r in c.registers:
        if r.role == ROLE_MAIN:
            if c.qubits_of(r.name)[0] != offset:
                raise InvalidArgumentError("main registers must occupy the low qubits")
            offset += r.width
    return postselect_zero_ancillas(sv, width)


def sample_shots(
    outcome: PreparationOutcome, shots: int, seed: int | np.random.Generator
) -> dict[int, int]:
    """Multinomial draw over grid indices; deterministic for a fixed seed."""
    if shots < 1:
        raise InvalidArgumentError("need at least one shot")
    probs = np.abs(outcome.main_amplitudes) ** 2
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs)
    return {int(i): int(n) for i, n in enumerate(counts) if n}


def _grid_index_tuple(flat: int, g: GridSpec) -> tuple[int, ...]:
    out = []
    for n in g.qubits:
        out.append(flat & ((1 << n) - 1))
        flat >>= n
    return tuple(out)


def amplitudes_csv(path, outcome: PreparationOutcome, g: GridSpec) -> None:
    axes = [g.axis_points(i) for i in range(g.dims)]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        header = [f"j{i}" for i in range(g.dims)]
        header += [f"x{i}" for i in range(g.dims)]
        header += ["re", "im", "prob"]
        w.writerow(header)
        for flat, amp in enumerate(outcome.main_amplitudes):
            js = _grid_index_tuple(flat, g)
            row = list(js)
            # repr of a builtin float round-trips the exact bit pattern
            row += [repr(float(axes[i][j])) for i, j in enumerate(js)]
            row += [repr(float(amp.real)), repr(float(amp.imag)), repr(float(abs(amp) ** 2))]
            w.writerow(row)


def counts_csv(path, counts: dict[int, int], g: GridSpec) -> None:
    axes = [g.axis_points(i) for i in range(g.dims)]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        header = [f"j{i}" for i in range(g.dims)]
        header += [f"x{i}" for i in range(g.dims)]
        header += ["count"]
        w.writerow(header)
        for flat in sorted(counts):
            js = _grid_index_tuple(flat, g)
            row = list(js)
            row += [repr(float(axes[i][j])) for i, j in enumerate(js)]
            row += [counts[flat]]
            w.writerow(row)


def read_counts_csv(path, g: GridSpec) -> dict[int, int]:
    counts: dict[int, int] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            flat = 0
            shift = 0
            for i, n in enumerate(g.qubits):
                flat |= int(row[f"j{i}"]) << shift
                shift += n
            counts[flat] = counts.get(flat, 0) + int(row["count"])
    return counts
