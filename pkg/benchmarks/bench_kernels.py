"""Compare the compiled and numpy RK4 kernels.

Usage::

    python benchmarks/bench_kernels.py [--repeat 3]

Prints wall time per backend for a qutrit dephasing run and a 15-state
two-mode run, plus the largest state difference between backends.
"""
import argparse
import math
import time

import numpy as np

from qutritlab._kernels import compiled_kernels, python_kernels
from qutritlab.lindblad import DephasingParams, dephasing_model, evolve
from qutritlab.polarization import (
    PolarizationModel,
    build_basis,
    build_model,
    one_photon_state,
)


def cases():
    p = DephasingParams(tuple(np.ones(3) / math.sqrt(3)), 1.0, 0.1)
    yield "qutrit dephasing, 10^4 steps", dephasing_model(1.0, 0.1), p.rho0, 10.0, 1e-3
    basis = build_basis(4)
    model = build_model(PolarizationModel("lossy", gamma_plus=0.3, gamma_minus=0.2), basis)
    yield "two-mode lossy n_max=4, 2x10^3 steps", model, one_photon_state((1, 0, 0), basis), 2.0, 1e-3


def best_time(fn, repeat):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if compiled_kernels is None:
        print("compiled kernels not built; only the numpy backend is available")
    for label, model, rho0, t_end, dt in cases():
        print(label)
        py_t, py_tr = best_time(
            lambda: evolve(model, rho0, t_end, dt, 100, backend=python_kernels), args.repeat
        )
        print(f"  numpy    {py_t * 1e3:9.2f} ms")
        if compiled_kernels is not None:
            cy_t, cy_tr = best_time(
                lambda: evolve(model, rho0, t_end, dt, 100, backend=compiled_kernels), args.repeat
            )
            diff = float(np.max(np.abs(py_tr.states - cy_tr.states)))
            print(f"  compiled {cy_t * 1e3:9.2f} ms  speedup {py_t / cy_t:6.1f}x  max diff {diff:.1e}")


if __name__ == "__main__":
    main()
