"""Relative phases, Bargmann invariants and geometric phases of ray paths.

Sign conventions
----------------
``dynamic_phase`` returns ``-Im int <psi|dpsi>/<psi|psi>``. The
decomposition reports ``dynamic = Im int <psi|dpsi>/<psi|psi>``, the phase
that a pure re-phasing ``exp(i b(t)) psi`` accumulates, so that
``geometric = total - dynamic`` vanishes for such paths and agrees with the
discrete Pancharatnam phase on closed loops.
"""
from dataclasses import dataclass

import numpy as np

from .bloch import BlochParameters, ray_from_angles
from .errors import UndefinedPhaseError, ValidationError

ORTHO_TOL = 1e-12
CLOSURE_TOL = 1e-12
PHASE_ANGLES = ("alpha", "beta", "gamma", "chi", "xi")


def wrap_angle(x):
    """Wrap to ``(-pi, pi]``; works elementwise on arrays."""
    w = -np.mod(-np.asarray(x, dtype=float) + np.pi, 2 * np.pi) + np.pi
    return float(w) if np.ndim(w) == 0 else w


def _vec(v):
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1:
        raise ValidationError(f"expected a vector, got shape {v.shape}")
    return v


def relative_phase(a, b):
    """``arg <a|b>`` in ``(-pi, pi]``.

    Raises
    ------
    UndefinedPhaseError
        If ``|<a|b>| <= 1e-12``.
    """
    z = np.vdot(_vec(a), _vec(b))
    if abs(z) <= ORTHO_TOL:
        raise UndefinedPhaseError(f"phase undefined: |<a|b>| = {abs(z):.3e}", abs(z))
    return wrap_angle(np.angle(z))


def bargmann_phase(states):
    """Argument of ``<psi_0|psi_1><psi_1|psi_2>...<psi_N|psi_0>``.

    Raises
    ------
    UndefinedPhaseError
        Naming the first orthogonal cyclic pair.
    """
    psi = np.asarray(states, dtype=complex)
    if psi.ndim != 2 or psi.shape[0] < 3:
        raise ValidationError("Bargmann invariant needs at least 3 states")
    ov = np.einsum("ki,ki->k", psi.conj(), np.roll(psi, -1, axis=0))
    mods = np.abs(ov)
    if np.any(mods <= ORTHO_TOL):
        k = int(np.argmax(mods <= ORTHO_TOL))
        nxt = (k + 1) % len(psi)
        raise UndefinedPhaseError(
            f"states {k} and {nxt} are orthogonal (|overlap| = {mods[k]:.3e})", mods[k], k
        )
    # normalizing each factor keeps long products away from under/overflow
    return wrap_angle(np.angle(np.prod(ov / mods)))


@dataclass(frozen=True)
class RayTrajectory:
    """Sampled path of (possibly non-unit) rays.

    Attributes
    ----------
    times : numpy.ndarray
        Ascending sample times.
    rays : numpy.ndarray
        Shape ``(N+1, d)``.
    """

    times: np.ndarray
    rays: np.ndarray

    def __post_init__(self):
        rays = np.array(self.rays, dtype=complex)
        times = np.array(self.times, dtype=float)
        if rays.ndim != 2 or rays.shape[0] < 2:
            raise ValidationError("a ray trajectory needs at least two samples")
        if times.shape != (rays.shape[0],):
            raise ValidationError("times and rays lengths differ")
        if np.any(np.diff(times) <= 0):
            raise ValidationError("times must be strictly increasing")
        rays.setflags(write=False)
        times.setflags(write=False)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "times", times)

    def segment_overlaps(self):
        """``<psi_k|psi_{k+1}>`` for each segment."""
        return np.einsum("ki,ki->k", self.rays[:-1].conj(), self.rays[1:])

    def is_closed(self, tol=CLOSURE_TOL):
        return float(np.max(np.abs(self.rays[-1] - self.rays[0]))) <= tol


@dataclass(frozen=True)
class PhaseSum:
    """Accumulated phase, unwrapped and wrapped to ``(-pi, pi]``."""

    raw: float
    wrapped: float


def _checked_overlaps(tr):
    ov = tr.segment_overlaps()
    mods = np.abs(ov)
    if np.any(mods <= ORTHO_TOL):
        k = int(np.argmax(mods <= ORTHO_TOL))
        raise UndefinedPhaseError(
            f"segment {k} joins orthogonal rays (|overlap| = {mods[k]:.3e})", mods[k], k
        )
    return ov


def pancharatnam_phase(tr, closed):
    """Discrete geometric phase ``-sum_k arg <psi_k|psi_{k+1}>``.

    When ``closed`` the last ray must equal the first, and the closing
    factor ``<psi_N|psi_0>`` is included.
    """
    ov = _checked_overlaps(tr)
    total = float(np.sum(np.angle(ov)))
    if closed:
        if not tr.is_closed():
            gap = float(np.max(np.abs(tr.rays[-1] - tr.rays[0])))
            raise ValidationError(f"trajectory is not closed (end gap {gap:.3e})")
        total += relative_phase(tr.rays[-1], tr.rays[0])
    return PhaseSum(-total, wrap_angle(-total))


def total_phase(psi0, psit):
    """``arg <psi0|psit>``."""
    return relative_phase(psi0, psit)


def total_phase_closed_form(p0, pt):
    """``arg <psi(p0)|psi(pt)>`` from the sphere coordinates.

    Uses the weights ``A = s0 st c0p ctp``, ``B = s0 st s0p stp`` and
    ``C = c0 ct`` on the phase differences of the three components.
    """
    a = np.sin(p0.theta) * np.sin(pt.theta) * np.cos(p0.phi) * np.cos(pt.phi)
    b = np.sin(p0.theta) * np.sin(pt.theta) * np.sin(p0.phi) * np.sin(pt.phi)
    c = np.cos(p0.theta) * np.cos(pt.theta)
    d1 = (pt.alpha - pt.gamma) - (p0.alpha - p0.gamma)
    d2 = (pt.beta - pt.chi) - (p0.beta - p0.chi)
    d3 = pt.xi - p0.xi
    x = a * np.cos(d1) + b * np.cos(d2) + c * np.cos(d3)
    y = a * np.sin(d1) + b * np.sin(d2) + c * np.sin(d3)
    if np.hypot(x, y) <= ORTHO_TOL:
        raise UndefinedPhaseError("endpoint rays are orthogonal", np.hypot(x, y))
    return wrap_angle(np.arctan2(y, x))


def _connection_increments(tr):
    psi = tr.rays
    d = psi[1:] - psi[:-1]
    fwd = np.einsum("ki,ki->k", psi[:-1].conj(), d).imag / np.einsum(
        "ki,ki->k", psi[:-1].conj(), psi[:-1]
    ).real
    bwd = np.einsum("ki,ki->k", psi[1:].conj(), d).imag / np.einsum(
        "ki,ki->k", psi[1:].conj(), psi[1:]
    ).real
    return 0.5 * (fwd + bwd)


def dynamic_phase(tr):
    """``-Im int <psi|dpsi>/<psi|psi>`` with forward/backward averaged segments."""
    return -float(np.sum(_connection_increments(tr)))


@dataclass(frozen=True)
class PhaseDecomposition:
    """Total, dynamic and geometric phase of a ray path.

    Attributes
    ----------
    total : float
        ``arg <psi_first|psi_last>``.
    dynamic : float
        ``Im int <psi|dpsi>/<psi|psi>``.
    geometric : float
        ``total - dynamic`` wrapped to ``(-pi, pi]``.
    geometric_raw : float
        ``total - dynamic`` unwrapped.
    """

    total: float
    dynamic: float
    geometric: float
    geometric_raw: float


def phase_decomposition(tr):
    """Split the accumulated phase of ``tr`` into dynamic and geometric parts."""
    total = total_phase(tr.rays[0], tr.rays[-1])
    dyn = -dynamic_phase(tr)
    raw = total - dyn
    return PhaseDecomposition(total, dyn, wrap_angle(raw), raw)


def connection_value(psi, dpsi):
    """``Im <psi|dpsi> / <psi|psi>``."""
    psi, dpsi = _vec(psi), _vec(dpsi)
    nrm = np.vdot(psi, psi).real
    if nrm <= ORTHO_TOL:
        raise ValidationError(f"zero-norm ray (<psi|psi> = {nrm:.3e})")
    return float(np.vdot(psi, dpsi).imag / nrm)


@dataclass(frozen=True)
class ParameterLoop:
    """Closed path of sphere coordinates sampled at ``N + 1`` points.

    Attributes
    ----------
    params : numpy.ndarray
        Shape ``(N+1, 8)`` with columns ``r, theta, phi, alpha, beta, gamma,
        chi, xi``.
    """

    params: np.ndarray

    def __post_init__(self):
        p = np.array(self.params, dtype=float)
        if p.ndim != 2 or p.shape[1] != 8 or p.shape[0] < 2:
            raise ValidationError("loop parameters must have shape (N+1, 8), N >= 1")
        p.setflags(write=False)
        object.__setattr__(self, "params", p)

    @property
    def samples(self):
        return self.params.shape[0] - 1

    @classmethod
    def sweep(cls, base, samples, **ranges):
        """Linear sweep of phase angles from ``base``.

        Parameters
        ----------
        base : BlochParameters
            Fixed coordinates.
        samples : int
            Number of segments ``N``.
        **ranges : (float, float)
            ``angle=(start, stop)`` for any of alpha, beta, gamma, chi, xi.
        """
        if samples < 1:
            raise ValidationError("samples must be >= 1")
        cols = ("r", "theta", "phi") + PHASE_ANGLES
        p = np.tile(np.array(base.as_tuple(), dtype=float), (samples + 1, 1))
        for name, (start, stop) in ranges.items():
            if name not in PHASE_ANGLES:
                raise ValidationError(f"cannot sweep {name!r}; choose from {PHASE_ANGLES}")
            p[:, cols.index(name)] = np.linspace(start, stop, samples + 1)
        return cls(p)

    def rays(self):
        return ray_from_angles(*self.params.T)

    def ray_trajectory(self):
        return RayTrajectory(np.arange(self.samples + 1, dtype=float), self.rays())

    def at(self, k):
        return BlochParameters(*map(float, self.params[k]))


def berry_phase_quasicyclic(loop):
    """Line integral ``-oint {sin^2 th [cos^2 ph d(a-g) + sin^2 ph d(b-c)] + cos^2 th dxi}``.

    Trapezoid rule on the parameter increments. The integrand does not
    involve ``r``.
    """
    rays = loop.rays()
    if float(np.max(np.abs(rays[-1] - rays[0]))) > CLOSURE_TOL * max(1.0, loop.params[0, 0]):
        raise ValidationError("parameter loop is not closed")
    p = loop.params
    th, ph = p[:, 1], p[:, 2]
    w1 = np.sin(th) ** 2 * np.cos(ph) ** 2
    w2 = np.sin(th) ** 2 * np.sin(ph) ** 2
    w3 = np.cos(th) ** 2
    da = np.diff(p[:, 3] - p[:, 5])
    db = np.diff(p[:, 4] - p[:, 6])
    dx = np.diff(p[:, 7])

    def mid(w):
        return 0.5 * (w[1:] + w[:-1])

    return -float(np.sum(mid(w1) * da + mid(w2) * db + mid(w3) * dx))


def gauge_transform(tr, beta):
    """Multiply sample ``k`` by ``exp(i beta_k)``."""
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (tr.rays.shape[0],):
        raise ValidationError(
            f"beta has {beta.size} entries for {tr.rays.shape[0]} samples"
        )
    return RayTrajectory(tr.times, tr.rays * np.exp(1j * beta)[:, None])


def unitary_ray_trajectory(h, psi0, times):
    """Rays ``exp(-i h t) psi0`` for Hermitian ``h`` at the given times."""
    w, v = np.linalg.eigh(np.asarray(h, dtype=complex))
    c = v.conj().T @ np.asarray(psi0, dtype=complex)
    t = np.asarray(times, dtype=float)
    rays = (np.exp(-1j * np.outer(t, w)) * c) @ v.T
    return RayTrajectory(t, rays)
