"""Gate-level circuit IR: named registers, a small fixed gate set, accounting.

Gate kinds and their action (little-endian bit layout, qubit j <-> bit j of the
basis index):

- phase(theta) on target: diag(1, e^{i theta})
- cphase(theta) on (control, target): phase on the |11> component
- x / z / h on target: the Pauli / Hadamard matrices
- cx on (control, target)
- mcz on (*controls, target) with per-control polarities (1 = fires on |1>,
  0 = fires on |0>): multiplies by -1 exactly when every control matches its
  polarity and the target bit is 1
- ucry on (*controls, target) with a 2^m angle table: applies Ry(angles[p]) to
  the target on the control subspace with pattern p (pattern bit r is the value
  of controls[r]); Ry(t) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]]
- diagphase on a qubit tuple with a 2^w phase table: multiplies by
  e^{i phases[p]} where p is the little-endian index over the listed qubits

Circuits also carry a scalar global_phase (radians) applied once per execution;
it keeps constructions exact where a reflection is realized up to sign.
Registers are laid out in declaration order, so declaring main registers first
puts every ancilla in the high bits and the all-ancilla-zero block of the state
vector is a contiguous prefix.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError

PHASE = "phase"
CPHASE = "cphase"
PAULI_X = "x"
PAULI_Z = "z"
HADAMARD = "h"
CX = "cx"
MCZ = "mcz"
UCRY = "ucry"
DIAGPHASE = "diagphase"

GATE_KINDS = (PHASE, CPHASE, PAULI_X, PAULI_Z, HADAMARD, CX, MCZ, UCRY, DIAGPHASE)

# human-readable names used in count reports and JSON
KIND_NAMES = {
    PHASE: "PhaseShift",
    CPHASE: "ControlledPhase",
    PAULI_X: "PauliX",
    PAULI_Z: "PauliZ",
    HADAMARD: "Hadamard",
    CX: "CX",
    MCZ: "MultiControlledZ",
    UCRY: "UniformlyControlledRy",
    DIAGPHASE: "DiagonalPhase",
}
_NAME_TO_KIND = {v: k for k, v in KIND_NAMES.items()}

ROLE_MAIN = "main"
ROLE_COEFF = "coeff"
ROLE_BE = "be"
_ROLES = (ROLE_MAIN, ROLE_COEFF, ROLE_BE)


@dataclass(frozen=True)
class Register:
    name: str
    role: str
    width: int
    dim: int = 0

    def __post_init__(self):
        if self.role not in _ROLES:
            raise InvalidArgumentError(f"unknown register role {self.role!r}")
        if self.width < 1:
            raise InvalidArgumentError("register width must be >= 1")


@dataclass(frozen=True)
class Gate:
    """One gate instance over global qubit indices.

    qubits holds (*controls, target) for controlled kinds, (target,) for
    single-qubit kinds, and the pattern-qubit tuple for diagphase.  tag is
    free-form builder metadata (used for resource accounting of amplitude
    trees); it never affects semantics.
    """

    kind: str
    qubits: tuple[int, ...]
    angle: float = 0.0
    angles: np.ndarray | None = None
    phases: np.ndarray | None = None
    polarities: tuple[int, ...] | None = None
    tag: str | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise InvalidArgumentError(f"unknown gate kind {self.kind!r}")
        qs = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qs)
        if len(set(qs)) != len(qs):
            raise InvalidArgumentError("gate qubits must be distinct")
        if self.kind in (PHASE, PAULI_X, PAULI_Z, HADAMARD) and len(qs) != 1:
            raise InvalidArgumentError(f"{self.kind} takes exactly one qubit")
        if self.kind in (CPHASE, CX) and len(qs) != 2:
            raise InvalidArgumentError(f"{self.kind} takes (control, target)")
        if self.kind in (PHASE, CPHASE) and not math.isfinite(self.angle):
            raise InvalidArgumentError("gate angle must be finite")
        if self.kind == MCZ:
            if not qs:
                raise InvalidArgumentError("mcz needs a target")
            pol = tuple(int(p) for p in (self.polarities or ()))
            if len(pol) != len(qs) - 1 or any(p not in (0, 1) for p in pol):
                raise InvalidArgumentError("mcz needs one 0/1 polarity per control")
            object.__setattr__(self, "polarities", pol)
        if self.kind == UCRY:
            if not qs:
                raise InvalidArgumentError("ucry needs a target")
            table = np.asarray(self.angles, dtype=float)
            if table.shape != (1 << (len(qs) - 1),):
                raise InvalidArgumentError("ucry angle table must have length 2^m")
            if not np.all(np.isfinite(table)):
                raise InvalidArgumentError("ucry angles must be finite")
            object.__setattr__(self, "angles", table)
        if self.kind == DIAGPHASE:
            if not qs:
                raise InvalidArgumentError("diagphase needs at least one qubit")
            table = np.asarray(self.phases, dtype=float)
            if table.shape != (1 << len(qs),):
                raise InvalidArgumentError("diagphase table must have length 2^w")
            if not np.all(np.isfinite(table)):
                raise InvalidArgumentError("diagphase phases must be finite")
            object.__setattr__(self, "phases", table)

    @property
    def controls(self) -> tuple[int, ...]:
        if self.kind in (CPHASE, CX):
            return self.qubits[:1]
        if self.kind in (MCZ, UCRY):
            return self.qubits[:-1]
        return ()

    @property
    def target(self) -> int:
        return self.qubits[-1]


class Circuit:
    """Ordered gate list over declared registers.

    Append-only while building; treat as immutable once handed out.  meta is
    builder bookkeeping (e.g. the walk size of a qubitization circuit) used by
    downstream builders, never by execution.
    """

    def __init__(self, registers: list[Register] | tuple[Register, ...]):
        regs = list(registers)
        names = [r.name for r in regs]
        if len(set(names)) != len(names):
            raise InvalidArgumentError("register names must be unique")
        self.registers: tuple[Register, ...] = tuple(regs)
        self.gates: list[Gate] = []
        self.global_phase: float = 0.0
        self.meta: dict = {}
        self._offsets: dict[str, int] = {}
        off = 0
        for r in regs:
            self._offsets[r.name] = off
            off += r.width
        self._num_qubits = off

    @property
    def num_qubits(self) -> int:
        return self._num_qubits

    def register(self, name: str) -> Register:
        for r in self.registers:
            if r.name == name:
                return r
        raise InvalidArgumentError(f"no register named {name!r}")

    def qubit(self, reg_name: str, index: int) -> int:
        reg = self.register(reg_name)
        if not 0 <= index < reg.width:
            raise InvalidArgumentError(
                f"qubit index {index} out of range for register {reg_name!r}"
            )
        return self._offsets[reg_name] + index

    def qubits_of(self, reg_name: str) -> list[int]:
        reg = self.register(reg_name)
        off = self._offsets[reg_name]
        return list(range(off, off + reg.width))

    def add(self, gate: Gate) -> None:
        for q in gate.qubits:
            if not 0 <= q < self._num_qubits:
                raise InvalidArgumentError(f"gate references qubit {q} outside circuit")
        self.gates.append(gate)

    def extend(self, gates) -> None:
        for g in gates:
            self.add(g)

    def main_qubit_count(self) -> int:
        return sum(r.width for r in self.registers if r.role == ROLE_MAIN)

    def ancilla_qubit_count(self) -> int:
        return self._num_qubits - self.main_qubit_count()

    # --- serialization ---------------------------------------------------

    def _qubit_ref(self, q: int) -> list:
        for r in self.registers:
            off = self._offsets[r.name]
            if off <= q < off + r.width:
                return [r.name, q - off]
        raise InvalidArgumentError(f"qubit {q} not inside any register")

    def to_json_dict(self) -> dict:
        gates = []
        for g in self.gates:
            entry: dict = {
                "kind": KIND_NAMES[g.kind],
                "qubits": [self._qubit_ref(q) for q in g.qubits],
            }
            params: dict = {}
            if g.kind in (PHASE, CPHASE):
                params["angle"] = g.angle
            if g.kind == MCZ:
                params["polarities"] = list(g.polarities)
            if g.kind == UCRY:
                params["angles"] = [float(a) for a in g.angles]
            if g.kind == DIAGPHASE:
                params["phases"] = [float(p) for p in g.phases]
            if params:
                entry["params"] = params
            if g.tag is not None:
                entry["tag"] = g.tag
            gates.append(entry)
        return {
            "registers": [
                {"name": r.name, "role": r.role, "width": r.width, "dim": r.dim}
                for r in self.registers
            ],
            "global_phase": self.global_phase,
            "gates": gates,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, payload: dict) -> "Circuit":
        try:
            regs = [
                Register(r["name"], r["role"], int(r["width"]), int(r.get("dim", 0)))
                for r in payload["registers"]
            ]
            c = cls(regs)
            c.global_phase = float(payload.get("global_phase", 0.0))
            for entry in payload["gates"]:
                kind = _NAME_TO_KIND[entry["kind"]]
                qubits = tuple(c.qubit(ref[0], int(ref[1])) for ref in entry["qubits"])
                params = entry.get("params", {})
                c.add(
                    Gate(
                        kind,
                        qubits,
                        angle=float(params.get("angle", 0.0)),
                        angles=params.get("angles"),
                        phases=params.get("phases"),
                        polarities=tuple(params["polarities"])
                        if "polarities" in params
                        else None,
                        tag=entry.get("tag"),
                    )
                )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidArgumentError(f"malformed circuit JSON: {exc}") from exc
        return c

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidArgumentError(f"malformed circuit JSON: {exc}") from exc
        return cls.from_json_dict(payload)

    def format_text(self) -> str:
        """One line per gate, registers first — a plain-text layout aid."""
        lines = [
            f"register {r.name} role={r.role} width={r.width}" for r in self.registers
        ]
        if self.global_phase:
            lines.append(f"global_phase {self.global_phase:+.12g}")
        for g in self.gates:
            refs = ",".join("%s[%d]" % tuple(self._qubit_ref(q)) for q in g.qubits)
            extra = ""
            if g.kind in (PHASE, CPHASE):
                extra = f" angle={g.angle:+.12g}"
            elif g.kind == MCZ:
                extra = f" polarities={''.join(map(str, g.polarities))}"
            elif g.kind == UCRY:
                extra = f" angles[{len(g.angles)}]"
            elif g.kind == DIAGPHASE:
                extra = f" phases[{len(g.phases)}]"
            lines.append(f"{KIND_NAMES[g.kind]} {refs}{extra}")
        return "\n".join(lines)


def _mcz_cx_cost(num_controls: int) -> int:
    if num_controls <= 0:
        return 0
    if num_controls == 1:
        return 1
    if num_controls == 2:
        return 6
    return 8 * num_controls - 20


def count_gates(c: Circuit) -> dict:
    """Raw per-kind counts plus a decomposed two-qubit estimate.

    cx_equivalent applies a fixed decomposition table to every gate:
    ControlledPhase -> 2, CX -> 1, MultiControlledZ(m controls) -> 1/6/8m-20,
    UniformlyControlledRy(m) -> 2^m, DiagonalPhase(w) -> 2^w - 2, single-qubit
    gates -> 0.  av_pair_cx reports the amplitude-tree pair figure
    (#tree pairs) * 2^b derived from builder tags, for comparison against the
    closed-form resource formulas.
    """
    counts = {name: 0 for name in KIND_NAMES.values()}
    cx_total = 0
    av_roots: list[int] = []
    for g in c.gates:
        counts[KIND_NAMES[g.kind]] += 1
        if g.kind == CPHASE:
            cx_total += 2
        elif g.kind == CX:
            cx_total += 1
        elif g.kind == MCZ:
            cx_total += _mcz_cx_cost(len(g.qubits) - 1)
        elif g.kind == UCRY:
            cx_total += 1 << (len(g.qubits) - 1)
        elif g.kind == DIAGPHASE:
            cx_total += (1 << len(g.qubits)) - 2
        if g.tag and g.tag.startswith("av") and g.kind == UCRY and len(g.qubits) == 1:
            av_roots.append(int(g.tag[2:]))
    report = dict(counts)
    report["cx_equivalent"] = cx_total
    # each amplitude tree has exactly one rootless-control gate; trees come in
    # prepare/unprepare pairs at 2^b two-qubit gates per pair
    report["av_pair_cx"] = sum(1 << b for b in av_roots) // 2
    return report


def to_unitary(c: Circuit, max_qubits: int = 14) -> np.ndarray:
    """Dense unitary of the whole circuit (small circuits only)."""
    if c.num_qubits > max_qubits:
        raise ResourceLimitError(
            f"to_unitary capped at {max_qubits} qubits, circuit has {c.num_qubits}"
        )
    from . import _kernels_np as K

    dim = 1 << c.num_qubits
    # rows evolve as states: row j is the image of basis state e_j, so the
    # resulting matrix is U^T
    mat = np.eye(dim, dtype=complex)
    for g in c.gates:
        K.apply_gate(mat, c.num_qubits, g)
    return mat.T * np.exp(1j * c.global_phase)
