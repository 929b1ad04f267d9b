"""Numpy reference kernels, used when the compiled module is unavailable.

The master-equation generator is written as::

    drho/dt = A rho + (A rho)^dagger + sum_k L_k rho L_k^dagger,
    A = -i H - (1/2) sum_k L_k^dagger L_k,

which is exactly Hermitian for Hermitian ``rho``.
"""
import numpy as np

BACKEND = "python"


def lindblad_rhs(a, jumps, rho):
    """Right-hand side for precomputed ``A`` and a jump stack ``(m, n, n)``."""
    x = a @ rho
    out = x + x.conj().T
    for l in jumps:
        out += l @ rho @ l.conj().T
    return out


def rk4_lindblad(a, jumps, rho0, h, nsteps, sample_every):
    """Fixed-step RK4 with re-Hermitization after every step.

    Parameters
    ----------
    a : ndarray, shape (n, n)
        Effective generator ``-iH - K/2``.
    jumps : ndarray, shape (m, n, n)
        Jump operators.
    rho0 : ndarray, shape (n, n)
        Initial state.
    h : float
        Step size.
    nsteps : int
        Number of steps.
    sample_every : int
        Sampling stride; the final step is always sampled.

    Returns
    -------
    steps : ndarray of int64
        Step index of each sample.
    states : ndarray, shape (k, n, n)
        Sampled states.
    """
    a = np.ascontiguousarray(a, dtype=complex)
    jumps = np.ascontiguousarray(jumps, dtype=complex).reshape(-1, a.shape[0], a.shape[0])
    rho = np.array(rho0, dtype=complex)
    steps = sample_steps(nsteps, sample_every)
    states = np.empty((len(steps),) + rho.shape, dtype=complex)
    states[0] = rho
    k = 1
    half = 0.5 * h
    for step in range(1, nsteps + 1):
        k1 = lindblad_rhs(a, jumps, rho)
        k2 = lindblad_rhs(a, jumps, rho + half * k1)
        k3 = lindblad_rhs(a, jumps, rho + half * k2)
        k4 = lindblad_rhs(a, jumps, rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = 0.5 * (rho + rho.conj().T)
        if k < len(steps) and steps[k] == step:
            states[k] = rho
            k += 1
    return steps, states


def sample_steps(nsteps, sample_every):
    """Step indices sampled by the integrators."""
    steps = list(range(0, nsteps + 1, sample_every))
    if steps[-1] != nsteps:
        steps.append(nsteps)
    return np.array(steps, dtype=np.int64)
