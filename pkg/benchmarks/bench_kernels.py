"""Timing comparison of the two statevector gate-kernel backends.

Runs each gate kind on a random Q-qubit state for both the pure-numpy and the
numba implementation, then times a full assembled preparation circuit through
each backend.  The numba path pays a one-off JIT compilation cost, so every
kernel is warmed before timing.

Usage: python3 benchmarks/bench_kernels.py [--qubits 20] [--repeats 5]
"""
import argparse
import time

import numpy as np

from mvsp import _kernels_nb, _kernels_np
from mvsp.circuit import Circuit, Gate
from mvsp.grids import GridSpec
from mvsp.physics import ricker2d
from mvsp.series import chebyshev_interpolate
from mvsp.synthesis import assemble_state_prep

BACKENDS = (("numpy", _kernels_np.apply_gate), ("numba", _kernels_nb.apply_gate))


def _sample_gates(Q: int, rng: np.random.Generator) -> list[Gate]:
    qs = list(rng.permutation(Q)[:6])
    return [
        Gate("h", (qs[0],)),
        Gate("phase", (qs[0],), angle=0.31),
        Gate("x", (qs[1],)),
        Gate("z", (qs[2],)),
        Gate("cx", (qs[0], qs[1])),
        Gate("cphase", (qs[1], qs[2]), angle=-0.77),
        Gate("mcz", tuple(qs[:4]), polarities=(1, 0, 1)),
        Gate("ucry", tuple(qs[:3]), angles=rng.normal(size=4)),
        Gate("diagphase", tuple(qs[:3]), phases=rng.normal(size=8)),
    ]


def _random_state(Q: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.normal(size=1 << Q) + 1j * rng.normal(size=1 << Q)
    return np.ascontiguousarray(psi / np.linalg.norm(psi))


def bench_gates(Q: int, repeats: int) -> None:
    rng = np.random.default_rng(5)
    gates = _sample_gates(Q, rng)
    base = _random_state(Q, rng)
    print(f"\nper-gate kernels on a {Q}-qubit state ({repeats} repeats, best shown)")
    print(f"{'gate':<12}{'numpy':>12}{'numba':>12}{'speedup':>10}")
    for g in gates:
        best = {}
        for name, apply in BACKENDS:
            apply(base.copy(), Q, g)  # warm (JIT compile / cache touch)
            t = min(
                _timed(apply, base, Q, g) for _ in range(repeats)
            )
            best[name] = t
        ratio = best["numpy"] / best["numba"] if best["numba"] > 0 else float("inf")
        print(
            f"{g.kind:<12}{best['numpy'] * 1e3:>10.2f}ms{best['numba'] * 1e3:>10.2f}ms"
            f"{ratio:>9.1f}x"
        )


def _timed(apply, base: np.ndarray, Q: int, g: Gate) -> float:
    psi = base.copy()
    t0 = time.perf_counter()
    apply(psi, Q, g)
    return time.perf_counter() - t0


def bench_circuit(repeats: int) -> None:
    s = chebyshev_interpolate(ricker2d(0.5), (7, 7))
    c = assemble_state_prep(s, GridSpec("symmetric", (4, 4)))
    print(
        f"\nfull preparation circuit: {c.num_qubits} qubits, "
        f"{len(c.gates)} gates ({repeats} repeats, best shown)"
    )
    for name, apply in BACKENDS:
        _run(c, apply)  # warm
        t = min(_run(c, apply) for _ in range(repeats))
        print(f"{name:<12}{t * 1e3:>10.1f}ms")


def _run(c: Circuit, apply) -> float:
    psi = np.zeros(1 << c.num_qubits, dtype=np.complex128)
    psi[0] = 1.0
    t0 = time.perf_counter()
    for g in c.gates:
        apply(psi, c.num_qubits, g)
    return time.perf_counter() - t0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qubits", type=int, default=20)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    bench_gates(args.qubits, args.repeats)
    bench_circuit(args.repeats)


if __name__ == "__main__":
    main()
