"""Circuit builders: select ladders, qubitized walks, coefficient loaders,
and the full multivariate assembly.

Layout conventions used by every builder here:
- main registers are declared first (low qubits), then block-encoding ancillas,
  then coefficient ancillas — post-selection reads a contiguous prefix;
- the joint coefficient index is dimension-major little-endian: dimension 0
  occupies the lowest coefficient bits;
- within one dimension the coefficient storage index k' maps to mode
  k = k' - shift (Fourier) or polynomial degree k' (Chebyshev), with storage
  padded by zero amplitudes up to the 2^a register size.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import (
    CPHASE,
    CX,
    DIAGPHASE,
    HADAMARD,
    MCZ,
    PAULI_X,
    PAULI_Z,
    PHASE,
    ROLE_BE,
    ROLE_COEFF,
    ROLE_MAIN,
    UCRY,
    Circuit,
    Gate,
    Register,
    count_gates,
)
from .errors import InvalidArgumentError
from .grids import SYMMETRIC, UNIT, GridSpec
from .series import CHEBYSHEV, FOURIER, SeriesApprox


# --------------------------------------------------------------------------
# plans

@dataclass(frozen=True)
class DimensionPlan:
    basis: str
    degree: int
    num_terms: int  # K: coefficient count along this dimension
    coeff_qubits: int  # a = ceil(log2 K)
    be_qubits: int  # b = ceil(log2 n) for Chebyshev, 0 for Fourier
    main_qubits: int  # n
    shift: int  # Fourier ladder prefix power: mode k = storage k' - shift


@dataclass(frozen=True)
class LcuPlan:
    """Flattened, zero-padded coefficient data plus per-dimension geometry."""

    dims: tuple[DimensionPlan, ...]
    magnitudes: np.ndarray  # |c|/N over the padded joint index, sums to 1
    phases: np.ndarray  # arg(c), 0 on padded/zero entries, in (-pi, pi]
    norm_N: float

    @property
    def total_coeff_qubits(self) -> int:
        return sum(d.coeff_qubits for d in self.dims)

    @property
    def total_qubits(self) -> int:
        return sum(d.main_qubits + d.coeff_qubits + d.be_qubits for d in self.dims)


def plan_from_series(s: SeriesApprox, g: GridSpec) -> LcuPlan:
    if g.dims != s.dims:
        raise InvalidArgumentError("grid dimension != series dimension")
    expected = UNIT if s.basis == FOURIER else SYMMETRIC
    if g.convention != expected:
        raise InvalidArgumentError(
            f"{s.basis} series pairs with the {expected} grid convention"
        )
    norm = s.norm_N
    if norm <= 0.0:
        raise InvalidArgumentError("all-zero coefficient tensor")
    dims = []
    for i in range(s.dims):
        K = s.coeffs.shape[i]
        a = max(0, math.ceil(math.log2(K)))
        n = g.qubits[i]
        b = math.ceil(math.log2(n)) if s.basis == CHEBYSHEV else 0
        if s.basis == FOURIER:
            shift = s.degrees[i] if s.kmin is None else -s.kmin[i]
        else:
            shift = 0
        dims.append(
            DimensionPlan(
                basis=s.basis,
                degree=s.degrees[i],
                num_terms=K,
                coeff_qubits=a,
                be_qubits=b,
                main_qubits=n,
                shift=shift,
            )
        )
    padded_shape = tuple(1 << d.coeff_qubits for d in dims)
    padded = np.zeros(padded_shape, dtype=complex)
    padded[tuple(slice(0, K) for K in s.coeffs.shape)] = s.coeffs
    flat = padded.ravel(order="F")  # dimension 0 fastest <-> lowest bits
    mags = np.abs(flat) / norm
    phases = np.where(mags > 0, np.angle(flat), 0.0)
    phases[phases == -np.pi] = np.pi
    return LcuPlan(
        dims=tuple(dims), magnitudes=mags, phases=phases, norm_N=float(norm)
    )


# --------------------------------------------------------------------------
# gate-group helpers (emit plain Gate lists over explicit qubit indices)

def invert_gates(gates: list[Gate]) -> list[Gate]:
    """Inverse of a gate sequence: reversed order, each gate inverted."""
    out = []
    for g in reversed(gates):
        if g.kind in (PHASE, CPHASE):
            out.append(Gate(g.kind, g.qubits, angle=-g.angle, tag=g.tag))
        elif g.kind == UCRY:
            out.append(Gate(g.kind, g.qubits, angles=-g.angles, tag=g.tag))
        elif g.kind == DIAGPHASE:
            out.append(Gate(g.kind, g.qubits, phases=-g.phases, tag=g.tag))
        else:  # x, z, h, cx, mcz are involutions
            out.append(g)
    return out


def _amplitude_tree_gates(
    qubits: list[int], amplitudes: np.ndarray, tag: str | None = None
) -> list[Gate]:
    """Uniformly-controlled-Ry cascade preparing a real nonnegative state.

    qubits are listed low-to-high significance of the prepared index; the
    cascade fixes bits from the most significant down, so level L targets
    qubits[W-1-L] under a pattern over the already-fixed higher bits.
    """
    W = len(qubits)
    probs = np.asarray(amplitudes, dtype=float) ** 2
    if probs.shape != (1 << W,):
        raise InvalidArgumentError("amplitude table must have length 2^W")
    total = probs.sum()
    if total <= 0.0:
        raise InvalidArgumentError("cannot prepare the zero vector")
    gates = []
    for level in range(W):
        # mass of each node at depth level+1: group by the top level+1 bits
        mass = probs.reshape(1 << (level + 1), -1).sum(axis=1)
        left = np.sqrt(mass[0::2])
        right = np.sqrt(mass[1::2])
        angles = 2.0 * np.arctan2(right, left)
        controls = qubits[W - level :]
        gates.append(
            Gate(
                UCRY,
                tuple(controls) + (qubits[W - 1 - level],),
                angles=angles,
                tag=tag,
            )
        )
    return gates


def _bit(value: int, r: int) -> int:
    return (value >> r) & 1


def _fourier_b_gates(
    main_qubits: list[int], coeff_qubits: list[int], n: int, shift: int
) -> list[Gate]:
    """Select ladder sum_k |k><k| e^{i pi k H} followed by the U^{-shift} prefix."""
    denom = (1 << n) - 1
    gates = []
    for i, cq in enumerate(coeff_qubits):
        for j, mq in enumerate(main_qubits):
            gates.append(
                Gate(CPHASE, (cq, mq), angle=np.pi * (1 << (i + j)) / denom)
            )
    if shift:
        for j, mq in enumerate(main_qubits):
            gates.append(Gate(PHASE, (mq,), angle=-shift * np.pi * (1 << j) / denom))
    return gates


def _av_amplitudes(n: int, b: int) -> np.ndarray:
    amps = np.zeros(1 << b)
    denom = (1 << n) - 1
    amps[:n] = np.sqrt((1 << np.arange(n)) / denom)
    return amps


def _bv_gates(
    main_qubits: list[int],
    be_qubits: list[int],
    n: int,
    control: int | None = None,
) -> list[Gate]:
    """sum_j |j><j| (X Z X)_j over the main register, optionally controlled.

    The X conjugation is never controlled; only the Z core carries the pattern
    (and the extra closed control when requested).
    """
    gates = []
    for j in range(n):
        mq = main_qubits[j]
        controls = list(be_qubits)
        pols = [_bit(j, r) for r in range(len(be_qubits))]
        if control is not None:
            controls.append(control)
            pols.append(1)
        gates.append(Gate(PAULI_X, (mq,)))
        if controls:
            gates.append(
                Gate(MCZ, tuple(controls) + (mq,), polarities=tuple(pols))
            )
        else:
            gates.append(Gate(PAULI_Z, (mq,)))
        gates.append(Gate(PAULI_X, (mq,)))
    return gates


def _reflection_gates(be_qubits: list[int]) -> tuple[list[Gate], float]:
    """R = 2|0..0><0..0| - I on the block-encoding ancillas.

    b = 0: scalar 1, no gates.  b = 1: exactly Z.  b >= 2: -R as an open
    multi-controlled Z conjugated by X on the lowest ancilla, plus a global
    phase pi that restores the sign.
    """
    b = len(be_qubits)
    if b == 0:
        return [], 0.0
    if b == 1:
        return [Gate(PAULI_Z, (be_qubits[0],))], 0.0
    head = be_qubits[0]
    rest = tuple(be_qubits[1:])
    gates = [
        Gate(PAULI_X, (head,)),
        Gate(MCZ, rest + (head,), polarities=(0,) * len(rest)),
        Gate(PAULI_X, (head,)),
    ]
    return gates, np.pi


def _controlled_reflection_gates(be_qubits: list[int], control: int) -> list[Gate]:
    """|0><0| (x) I + |1><1| (x) R, exactly: Z on the control times an MCZ that
    fires on (ancillas all |0>, control |1>)."""
    b = len(be_qubits)
    if b == 0:
        return []  # R is the scalar 1
    return [
        Gate(PAULI_Z, (control,)),
        Gate(
            MCZ,
            tuple(be_qubits) + (control,),
            polarities=(0,) * b,
        ),
    ]


def _chebyshev_ladder_gates(
    main_qubits: list[int],
    be_qubits: list[int],
    coeff_qubits: list[int],
    n: int,
) -> list[Gate]:
    """sum_k |k><k| (x) U_V^k with the standard control elisions.

    Ancilla bit i drives U_V^{2^i}.  The walk-operator copies drop controls on
    the amplitude trees everywhere, and on the stripe operator inside squared
    pairs; reflections stay controlled.
    """
    b = len(be_qubits)
    av = _amplitude_tree_gates(be_qubits, _av_amplitudes(n, b), tag=f"av{b}")
    av_dag = invert_gates(av)
    gates: list[Gate] = []
    for i, cq in enumerate(coeff_qubits):
        if i == 0:
            gates += av
            gates += _bv_gates(main_qubits, be_qubits, n, control=cq)
            gates += av_dag
            gates += _controlled_reflection_gates(be_qubits, cq)
        else:
            for _ in range(1 << (i - 1)):
                for _half in range(2):
                    gates += av
                    gates += _bv_gates(main_qubits, be_qubits, n, control=None)
                    gates += av_dag
                    gates += _controlled_reflection_gates(be_qubits, cq)
    return gates


# --------------------------------------------------------------------------
# public builders

def build_fourier_B(
    n: int, d: int, *, num_modes: int | None = None, shift: int | None = None
) -> Circuit:
    """Select operator for e^{i pi k H} branches: B = U^{-shift} sum_k |k><k| U^k.

    Default geometry covers modes k in [-d, d] (K = 2d+1, shift = d); pass
    num_modes/shift for asymmetric ranges.
    """
    if n < 1:
        raise InvalidArgumentError("need n >= 1 main qubits")
    if d < 0:
        raise InvalidArgumentError("degree must be non-negative")
    K = num_modes if num_modes is not None else 2 * d + 1
    if K < 1:
        raise InvalidArgumentError("need at least one mode")
    a = max(0, math.ceil(math.log2(K)))
    sh = d if shift is None else shift
    regs = [Register("main0", ROLE_MAIN, n, 0)]
    if a:
        regs.append(Register("coeff0", ROLE_COEFF, a, 0))
    c = Circuit(regs)
    coeff_qubits = c.qubits_of("coeff0") if a else []
    c.extend(_fourier_b_gates(c.qubits_of("main0"), coeff_qubits, n, sh))
    c.meta["fourier_n"] = n
    return c


def build_chebyshev_UV(n: int) -> Circuit:
    """Qubitized walk U_V = R A_V^dag B_V A_V block-encoding the grid operator.

    The all-zero ancilla block of its unitary is diag of the symmetric grid,
    and powers U_V^k block-encode the degree-k Chebyshev polynomial of it.
    """
    if n < 1:
        raise InvalidArgumentError("need n >= 1 main qubits")
    b = math.ceil(math.log2(n))
    regs = [Register("main0", ROLE_MAIN, n, 0)]
    if b:
        regs.append(Register("be0", ROLE_BE, b, 0))
    c = Circuit(regs)
    be_qubits = c.qubits_of("be0") if b else []
    av = _amplitude_tree_gates(be_qubits, _av_amplitudes(n, b), tag=f"av{b}")
    c.extend(av)
    c.extend(_bv_gates(c.qubits_of("main0"), be_qubits, n))
    c.extend(invert_gates(av))
    refl, phase = _reflection_gates(be_qubits)
    c.extend(refl)
    c.global_phase += phase
    c.meta["uv_n"] = n
    return c


def _controlled_gate(g: Gate, ctrl: int) -> list[Gate]:
    """Closed-control version of one gate, within the same gate set."""
    if g.kind == PHASE:
        return [Gate(CPHASE, (ctrl, g.qubits[0]), angle=g.angle)]
    if g.kind == CPHASE:
        c0, t = g.qubits
        half = g.angle / 2.0
        return [
            Gate(CPHASE, (c0, t), angle=half),
            Gate(CX, (ctrl, c0)),
            Gate(CPHASE, (c0, t), angle=-half),
            Gate(CX, (ctrl, c0)),
            Gate(CPHASE, (ctrl, t), angle=half),
        ]
    if g.kind == PAULI_X:
        return [Gate(CX, (ctrl, g.qubits[0]))]
    if g.kind == PAULI_Z:
        return [Gate(MCZ, (ctrl, g.qubits[0]), polarities=(1,))]
    if g.kind == HADAMARD:
        # H = Ry(pi/2) Z, so controlled-H = controlled-Ry(pi/2) controlled-Z
        t = g.qubits[0]
        return [
            Gate(MCZ, (ctrl, t), polarities=(1,)),
            Gate(UCRY, (ctrl, t), angles=np.array([0.0, np.pi / 2])),
        ]
    if g.kind == CX:
        c0, t = g.qubits
        return [
            Gate(HADAMARD, (t,)),
            Gate(MCZ, (ctrl, c0, t), polarities=(1, 1)),
            Gate(HADAMARD, (t,)),
        ]
    if g.kind == MCZ:
        return [
            Gate(
                MCZ,
                (ctrl,) + g.qubits,
                polarities=(1,) + g.polarities,
            )
        ]
    if g.kind == UCRY:
        # append the control as the highest pattern bit; rotations vanish on
        # the control-off half
        controls = g.qubits[:-1] + (ctrl,)
        table = np.concatenate([np.zeros_like(g.angles), g.angles])
        return [Gate(UCRY, controls + (g.qubits[-1],), angles=table)]
    if g.kind == DIAGPHASE:
        table = np.concatenate([np.zeros_like(g.phases), g.phases])
        return [Gate(DIAGPHASE, g.qubits + (ctrl,), phases=table)]
    raise AssertionError(f"unhandled gate kind {g.kind}")  # pragma: no cover


def build_controlled_powers(
    base: Circuit, a: int, simplification: str = "none"
) -> Circuit:
    """Binary select ladder sum_k |k><k| (x) U^k: ancilla bit i drives U^{2^i}.

    simplification "none" closes every base gate over the control (reference
    construction); "fourier" merges phase-gate powers into controlled phases;
    "chebyshev" rebuilds the walk copies with the standard control elisions
    (base must come from build_chebyshev_UV).
    """
    if a < 1:
        raise InvalidArgumentError("need at least one select ancilla")
    regs = list(base.registers) + [Register("coeff0", ROLE_COEFF, a, 0)]
    c = Circuit(regs)
    coeff_qubits = c.qubits_of("coeff0")

    if simplification == "chebyshev":
        n = base.meta.get("uv_n")
        if n is None:
            raise InvalidArgumentError(
                "chebyshev simplification needs a walk circuit from build_chebyshev_UV"
            )
        be_qubits = c.qubits_of("be0") if any(r.name == "be0" for r in regs) else []
        c.extend(
            _chebyshev_ladder_gates(
                c.qubits_of("main0"), be_qubits, coeff_qubits, n
            )
        )
        return c

    if simplification == "fourier":
        if any(g.kind != PHASE for g in base.gates):
            raise InvalidArgumentError(
                "fourier simplification needs a phase-only base circuit"
            )
        for i, cq in enumerate(coeff_qubits):
            for g in base.gates:
                c.add(Gate(CPHASE, (cq, g.qubits[0]), angle=g.angle * (1 << i)))
            if base.global_phase:
                c.add(Gate(PHASE, (cq,), angle=base.global_phase * (1 << i)))
        return c

    if simplification != "none":
        raise InvalidArgumentError(f"unknown simplification {simplification!r}")

    for i, cq in enumerate(coeff_qubits):
        for _ in range(1 << i):
            for g in base.gates:
                c.extend(_controlled_gate(g, cq))
        if base.global_phase:
            c.add(Gate(PHASE, (cq,), angle=base.global_phase * (1 << i)))
    return c


def build_coefficient_loader(plan: LcuPlan) -> tuple[Circuit, Circuit]:
    """Prepare (A) and phase (C) operators over the joint coefficient register.

    A maps |0..0> to sum_k sqrt(|c_k|/N)|k>; C applies e^{i arg c_k}.  C comes
    back empty when every phase vanishes.
    """
    total = float(plan.magnitudes.sum())
    if abs(total - 1.0) > 1e-9:
        raise InvalidArgumentError("plan magnitudes must sum to 1")
    regs = [
        Register(f"coeff{i}", ROLE_COEFF, d.coeff_qubits, i)
        for i, d in enumerate(plan.dims)
        if d.coeff_qubits
    ]
    A = Circuit(regs)
    C = Circuit(regs)
    qubits = [q for r in regs for q in A.qubits_of(r.name)]
    if qubits:
        A.extend(_amplitude_tree_gates(qubits, np.sqrt(plan.magnitudes)))
        if np.any(plan.phases != 0.0):
            C.add(Gate(DIAGPHASE, tuple(qubits), phases=plan.phases))
    return A, C


# --------------------------------------------------------------------------
# full assembly

def _registers_for_plan(plan: LcuPlan) -> list[Register]:
    regs = [
        Register(f"main{i}", ROLE_MAIN, d.main_qubits, i)
        for i, d in enumerate(plan.dims)
    ]
    regs += [
        Register(f"be{i}", ROLE_BE, d.be_qubits, i)
        for i, d in enumerate(plan.dims)
        if d.be_qubits
    ]
    regs += [
        Register(f"coeff{i}", ROLE_COEFF, d.coeff_qubits, i)
        for i, d in enumerate(plan.dims)
        if d.coeff_qubits
    ]
    return regs


def _dimension_b_gates(c: Circuit, plan: LcuPlan, i: int) -> list[Gate]:
    d = plan.dims[i]
    main = c.qubits_of(f"main{i}")
    coeff = c.qubits_of(f"coeff{i}") if d.coeff_qubits else []
    if d.basis == FOURIER:
        return _fourier_b_gates(main, coeff, d.main_qubits, d.shift)
    be = c.qubits_of(f"be{i}") if d.be_qubits else []
    if not coeff:
        return []  # single-term Chebyshev series: U_V^0 = identity
    return _chebyshev_ladder_gates(main, be, coeff, d.main_qubits)


def _try_rank1_split(
    s: SeriesApprox,
) -> tuple[SeriesApprox, SeriesApprox] | None:
    if s.dims != 2:
        return None
    mat = s.coeffs
    if min(mat.shape) < 2:
        return None
    U, sv, Vh = np.linalg.svd(mat)
    if sv[0] <= 0.0 or sv[1] > 1e-12 * sv[0]:
        return None
    cx = np.sqrt(sv[0]) * U[:, 0]
    cy = np.sqrt(sv[0]) * Vh[0, :]
    kx = (s.kmin[0],) if s.kmin is not None else None
    ky = (s.kmin[1],) if s.kmin is not None else None
    sx = SeriesApprox(basis=s.basis, degrees=(s.degrees[0],), coeffs=cx, kmin=kx)
    sy = SeriesApprox(basis=s.basis, degrees=(s.degrees[1],), coeffs=cy, kmin=ky)
    return sx, sy


def _emit_lcu(c: Circuit, plan: LcuPlan, dim_indices: list[int]) -> None:
    """One prepare/select/phase/unprepare block covering the given dimensions."""
    regs = [f"coeff{i}" for i in dim_indices if plan.dims[i].coeff_qubits]
    qubits = [q for name in regs for q in c.qubits_of(name)]
    a_gates = (
        _amplitude_tree_gates(qubits, np.sqrt(plan.magnitudes)) if qubits else []
    )
    c.extend(a_gates)
    for i in dim_indices:
        c.extend(_dimension_b_gates(c, plan, i))
    if qubits and np.any(plan.phases != 0.0):
        c.add(Gate(DIAGPHASE, tuple(qubits), phases=plan.phases))
    c.extend(invert_gates(a_gates))


def _restrict_plan(sub: SeriesApprox, g: GridSpec, i: int) -> LcuPlan:
    """Single-dimension plan for factor i of a product series."""
    return plan_from_series(sub, GridSpec(g.convention, (g.qubits[i],)))


def _assemble(
    s: SeriesApprox, g: GridSpec, hadamards: bool, factorize: bool
) -> Circuit:
    plan = plan_from_series(s, g)
    c = Circuit(_registers_for_plan(plan))
    c.meta["plan"] = plan

    if hadamards:
        for i in range(len(plan.dims)):
            for q in c.qubits_of(f"main{i}"):
                c.add(Gate(HADAMARD, (q,)))

    split = _try_rank1_split(s) if factorize else None
    if split is not None:
        c.meta["factorized"] = True
        for i, sub in enumerate(split):
            sub_plan = _restrict_plan(sub, g, i)
            qubits = (
                c.qubits_of(f"coeff{i}") if sub_plan.dims[0].coeff_qubits else []
            )
            a_gates = (
                _amplitude_tree_gates(qubits, np.sqrt(sub_plan.magnitudes))
                if qubits
                else []
            )
            c.extend(a_gates)
            d = sub_plan.dims[0]
            main = c.qubits_of(f"main{i}")
            if d.basis == FOURIER:
                c.extend(_fourier_b_gates(main, qubits, d.main_qubits, d.shift))
            else:
                be = c.qubits_of(f"be{i}") if d.be_qubits else []
                if qubits:
                    c.extend(
                        _chebyshev_ladder_gates(main, be, qubits, d.main_qubits)
                    )
            if qubits and np.any(sub_plan.phases != 0.0):
                c.add(Gate(DIAGPHASE, tuple(qubits), phases=sub_plan.phases))
            c.extend(invert_gates(a_gates))
        return c

    c.meta["factorized"] = False
    _emit_lcu(c, plan, list(range(len(plan.dims))))
    return c


def assemble_lcu(s: SeriesApprox, g: GridSpec, factorize: bool = False) -> Circuit:
    """Block-encoding circuit A^dag C B A (no main-register state prep).

    Projecting all ancillas to |0> embeds f_d(H)/N as the top-left block.
    """
    return _assemble(s, g, hadamards=False, factorize=factorize)


def assemble_state_prep(
    s: SeriesApprox, g: GridSpec, factorize: bool = True
) -> Circuit:
    """Full preparation circuit: Hadamards on the mains, then the LCU block.

    With a rank-1 coefficient tensor (and factorize=True) the two dimensions
    get independent prepare/select blocks on disjoint registers.
    """
    return _assemble(s, g, hadamards=True, factorize=factorize)


def resource_report(c: Circuit, plan: LcuPlan | None = None) -> dict:
    """Qubit/gate accounting plus the closed-form per-dimension figures."""
    plan = plan or c.meta.get("plan")
    report: dict = {
        "total_qubits": c.num_qubits,
        "registers": [
            {"name": r.name, "role": r.role, "width": r.width} for r in c.registers
        ],
        "counts": count_gates(c),
    }
    if plan is not None:
        formulas = []
        for d in plan.dims:
            a, n, b = d.coeff_qubits, d.main_qubits, d.be_qubits
            if d.basis == FOURIER:
                formulas.append({"basis": d.basis, "controlled_phase": a * n})
            else:
                formulas.append(
                    {
                        "basis": d.basis,
                        "multi_controlled_z": ((1 << a) - 1) * (n + 1),
                        "av_pair_cx": ((1 << a) - 1) * (1 << b),
                    }
                )
        report["formulas"] = formulas
    return report
