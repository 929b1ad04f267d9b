"""Lindblad master equation: models, right-hand side, RK4 trajectories.

The dissipator convention is ``D[G] rho = G rho G^dagger - {G^dagger G, rho}/2``
with rates folded into the jump operators. A superoperator written as
``k * (2 C rho C^dagger - {C^dagger C, rho})`` is registered as the single
jump ``sqrt(2 k) * C`` (see :func:`jump_from_paired_convention`).
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .bloch import validate_density
from .errors import DimensionError, NumericalError, PositivityError, ValidationError
from .generators import SQRT3, gell_mann_set
from .linalg import as_square, check_hermitian

POSITIVITY_TOL = 1e-7


def _readonly(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LindbladModel:
    """Hamiltonian plus jump operators (rates folded in).

    Attributes
    ----------
    hamiltonian : numpy.ndarray
        Hermitian ``(n, n)`` matrix.
    jumps : tuple of numpy.ndarray
        Jump operators ``sqrt(rate) * C``.
    """

    hamiltonian: np.ndarray
    jumps: tuple = ()
    _a: np.ndarray = field(init=False, repr=False, compare=False)
    _stack: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        h = check_hermitian(self.hamiltonian, "hamiltonian")
        n = h.shape[0]
        jumps = tuple(_readonly(as_square(j, "jump")) for j in self.jumps)
        for j in jumps:
            if j.shape != (n, n):
                raise DimensionError(f"jump shape {j.shape} does not match hamiltonian {h.shape}")
        stack = np.array(jumps, dtype=complex).reshape(len(jumps), n, n)
        k = np.einsum("mji,mjk->ik", stack.conj(), stack)
        object.__setattr__(self, "hamiltonian", _readonly(h))
        object.__setattr__(self, "jumps", jumps)
        object.__setattr__(self, "_a", _readonly(-1j * h - 0.5 * k))
        object.__setattr__(self, "_stack", _readonly(stack))

    @property
    def dim(self):
        return self.hamiltonian.shape[0]


def jump_from_paired_convention(rate, op):
    """Jump for a term ``rate * (2 C rho C^dagger - {C^dagger C, rho})``.

    That term equals ``D[sqrt(2 rate) C]``.
    """
    if rate < 0:
        raise ValidationError(f"rate must be non-negative, got {rate}")
    return math.sqrt(2.0 * rate) * np.asarray(op, dtype=complex)


def lindblad_rhs(model, rho):
    """``-i[H, rho] + sum_k (G_k rho G_k^dagger - {G_k^dagger G_k, rho}/2)``."""
    rho = as_square(rho, "rho")
    if rho.shape != model.hamiltonian.shape:
        raise DimensionError(f"rho shape {rho.shape} does not match model dimension {model.dim}")
    h = model.hamiltonian
    out = -1j * (h @ rho - rho @ h)
    for g in model.jumps:
        gd = g.conj().T
        out += g @ rho @ gd - 0.5 * (gd @ g @ rho + rho @ gd @ g)
    return out


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered samples of an integrated master equation.

    Attributes
    ----------
    times : numpy.ndarray
        Strictly increasing sample times.
    states : numpy.ndarray
        Density matrices, shape ``(k, n, n)``.
    model : LindbladModel
        Generating model.
    max_trace_drift : float
        ``max |Tr rho - 1|`` over the samples.
    """

    times: np.ndarray
    states: np.ndarray
    model: LindbladModel
    max_trace_drift: float

    def __len__(self):
        return len(self.times)


def evolve(model, rho0, t_end, dt, sample_every=1, backend=None):
    """Integrate with classical RK4 at a fixed step.

    The number of steps is ``ceil(t_end/dt)`` and the step is shrunk
    uniformly so the run ends exactly at ``t_end``.

    Parameters
    ----------
    model : LindbladModel
    rho0 : array_like
        Valid density matrix.
    t_end : float
        Final time, ``>= 0``.
    dt : float
        Requested step, ``> 0``.
    sample_every : int
        Sampling stride in steps; the final time is always included.
    backend : module, optional
        Kernel module override (used by benchmarks and tests).

    Raises
    ------
    PositivityError
        If a sampled state has an eigenvalue below ``-1e-7``.
    NumericalError
        If the integration produces non-finite values.
    """
    if not dt > 0:
        raise ValidationError(f"dt must be positive, got {dt}")
    if not t_end >= 0:
        raise ValidationError(f"t_end must be non-negative, got {t_end}")
    if int(sample_every) < 1:
        raise ValidationError(f"sample_every must be >= 1, got {sample_every}")
    rho0 = validate_density(rho0, model.dim)
    nsteps = max(0, math.ceil(t_end / dt - 1e-9))
    h = t_end / nsteps if nsteps else 0.0
    kern = backend or _kernels
    steps, states = kern.rk4_lindblad(model._a, model._stack, rho0, h, nsteps, int(sample_every))
    times = steps * h
    if nsteps:
        times[-1] = t_end
    if not np.all(np.isfinite(states)):
        bad = int(np.argmax(~np.all(np.isfinite(states), axis=(1, 2))))
        raise NumericalError(f"non-finite state at t = {times[bad]:.6g}")
    for t, rho in zip(times, states):
        lo = float(np.linalg.eigvalsh(rho)[0])
        if lo < -POSITIVITY_TOL:
            raise PositivityError(
                f"positivity lost at t = {t:.6g} (min eigenvalue {lo:.3e}); reduce dt",
                t,
                lo,
            )
    drift = float(np.max(np.abs(np.trace(states, axis1=1, axis2=2) - 1.0)))
    states.setflags(write=False)
    times.setflags(write=False)
    return Trajectory(times, states, model, drift)


@dataclass(frozen=True)
class DephasingParams:
    """Initial amplitudes and rates of the qutrit dephasing model."""

    delta: tuple
    omega: float
    eta: float

    def __post_init__(self):
        d = np.asarray(self.delta, dtype=complex)
        if d.shape != (3,):
            raise ValidationError("delta must have 3 amplitudes")
        if abs(np.vdot(d, d).real - 1.0) > 1e-12:
            raise ValidationError("delta must be normalized")
        if self.eta < 0:
            raise ValidationError("eta must be non-negative")
        object.__setattr__(self, "delta", tuple(complex(x) for x in d))

    @property
    def rho0(self):
        d = np.asarray(self.delta)
        return np.outer(d, d.conj())


def dephasing_model(omega, eta):
    """``H = (omega/2) lambda_3`` with the single jump ``sqrt(eta) lambda_3``."""
    if eta < 0:
        raise ValidationError("eta must be non-negative")
    lam3 = gell_mann_set().generator(3)
    return LindbladModel(0.5 * omega * lam3, (math.sqrt(eta) * lam3,))


def analytic_dephasing_solution(p, t):
    """Closed-form state of the dephasing model at time ``t``.

    Populations are constant and the coherences evolve as::

        rho_12 = d1 d2* exp((-i omega - 2 eta) t)
        rho_13 = d1 d3* exp((-i omega/2 - eta/2) t)
        rho_23 = d2 d3* exp((+i omega/2 - eta/2) t)
    """
    if t < 0:
        raise ValidationError("t must be non-negative")
    rho = p.rho0.copy()
    w, e = p.omega, p.eta
    rho[0, 1] *= np.exp((-1j * w - 2 * e) * t)
    rho[0, 2] *= np.exp((-0.5j * w - 0.5 * e) * t)
    rho[1, 2] *= np.exp((0.5j * w - 0.5 * e) * t)
    for a, b in ((0, 1), (0, 2), (1, 2)):
        rho[b, a] = np.conj(rho[a, b])
    return rho


@dataclass(frozen=True)
class ObservableTable:
    """Per-sample Bloch data of a qutrit trajectory."""

    t: np.ndarray
    n: np.ndarray
    r: np.ndarray
    purity: np.ndarray


def trajectory_observables(tr):
    """Bloch components, radius and purity for each sample."""
    if tr.states.shape[1:] != (3, 3):
        raise ValidationError("observables require a qutrit trajectory")
    # integrated states carry the looser -1e-7 positivity budget, so the
    # components are taken directly rather than through bloch_from_density
    z = (SQRT3 / 2.0) * np.einsum("kij,mji->km", tr.states, gell_mann_set().matrices)
    n = np.ascontiguousarray(z.real)
    r = np.sqrt(np.sum(n**2, axis=1))
    pur = np.real(np.einsum("kij,kji->k", tr.states, tr.states))
    return ObservableTable(np.asarray(tr.times), n, r, pur)
