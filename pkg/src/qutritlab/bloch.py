"""Density matrices, 8-component Bloch vectors and the non-unit ray ansatz.

Conventions
-----------
Qutrit Bloch components are ``n_i = (sqrt(3)/2) Tr[rho lambda_i]`` with the
inverse ``rho = I/3 + (1/sqrt(3)) sum_i n_i lambda_i``. The ray ansatz is::

    psi = sqrt(r) * (exp(i(alpha-gamma)) sin(theta) cos(phi),
                     exp(i(beta-chi))   sin(theta) sin(phi),
                     exp(i xi)          cos(theta))

so that ``<psi|psi> = r`` and the Bloch vector of ``|psi><psi|`` has
length ``r``.
"""
from dataclasses import dataclass, astuple

import numpy as np

from .errors import (
    DegenerateStateError,
    IndeterminateAngleError,
    ValidationError,
)
from .generators import SQRT3, gell_mann_set, pauli_set
from .linalg import as_square, hermiticity_violation

TRACE_TOL = 1e-10
PSD_TOL = 1e-9
IMAG_TOL = 1e-12
DEGENERATE_TOL = 1e-9


def validate_density(rho, dim=None, psd_tol=PSD_TOL):
    """Check Hermiticity, unit trace and positivity; return the array.

    Parameters
    ----------
    rho : array_like
        Candidate density matrix.
    dim : int, optional
        Required dimension.
    psd_tol : float
        Most negative eigenvalue tolerated.

    Raises
    ------
    ValidationError
        With a message naming the violated invariant.
    """
    m = as_square(rho, "rho")
    if dim is not None and m.shape[0] != dim:
        raise ValidationError(f"expected a {dim}x{dim} density matrix, got {m.shape}")
    v = hermiticity_violation(m)
    if v > TRACE_TOL:
        raise ValidationError(f"density matrix not Hermitian (violation {v:.3e})")
    tr = np.trace(m)
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValidationError(f"density matrix trace {tr.real:.12g} != 1")
    lo = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])
    if lo < -psd_tol:
        raise ValidationError(f"density matrix not positive: min eigenvalue {lo:.3e}")
    return m


def _real_components(z, what, tol=IMAG_TOL):
    z = np.asarray(z)
    bad = np.max(np.abs(z.imag)) if z.size else 0.0
    if bad > tol:
        raise ValidationError(f"{what} has imaginary residue {bad:.3e}")
    return np.ascontiguousarray(z.real)


def bloch_from_density(rho):
    """Eight Bloch components of a valid 3x3 density matrix."""
    m = validate_density(rho, 3)
    lam = gell_mann_set().matrices
    z = (SQRT3 / 2.0) * np.einsum("ij,kji->k", m, lam)
    return _real_components(z, "Bloch vector")


def density_from_bloch(n):
    """Density matrix ``I/3 + (1/sqrt(3)) n . lambda``.

    Raises
    ------
    ValidationError
        If ``|n| > 1 + 1e-9`` or the result has an eigenvalue below -1e-9.
    """
    n = np.asarray(n, dtype=float)
    if n.shape != (8,):
        raise ValidationError(f"Bloch vector must have 8 components, got {n.shape}")
    r = bloch_radius(n)
    if r > 1.0 + PSD_TOL:
        raise ValidationError(f"Bloch radius {r:.12g} exceeds 1")
    lam = gell_mann_set().matrices
    rho = np.eye(3, dtype=complex) / 3.0 + np.einsum("k,kij->ij", n, lam) / SQRT3
    lo = float(np.linalg.eigvalsh(rho)[0])
    if lo < -PSD_TOL:
        raise ValidationError(
            f"Bloch vector lies outside the qutrit state space (min eigenvalue {lo:.3e})"
        )
    return rho


def bloch_radius(n):
    """Euclidean length of a Bloch vector."""
    return float(np.sqrt(np.sum(np.square(np.asarray(n, dtype=float)))))


def purity(rho):
    """``Tr[rho^2]`` of a valid density matrix."""
    m = validate_density(rho)
    return float(np.real(np.sum(m * m.T)))


def bloch3_from_density(rho):
    """Three Bloch components ``Tr[rho sigma_i]`` of a 2x2 density matrix."""
    m = validate_density(rho, 2)
    z = np.einsum("ij,kji->k", m, pauli_set().matrices)
    return _real_components(z, "Bloch vector")


def bloch3_from_spinor(psi):
    """``<psi|sigma_i|psi>`` for a 2-component vector (any norm)."""
    psi = np.asarray(psi, dtype=complex)
    z = np.einsum("i,kij,j->k", psi.conj(), pauli_set().matrices, psi)
    return _real_components(z, "Bloch vector")


@dataclass(frozen=True)
class BlochParameters:
    """Sphere coordinates of the non-unit ray ansatz (angles in radians)."""

    r: float
    theta: float
    phi: float
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    chi: float = 0.0
    xi: float = 0.0

    def as_tuple(self):
        return astuple(self)

    def replace(self, **changes):
        values = {**self.__dict__, **changes}
        return BlochParameters(**values)


def ray_from_angles(r, theta, phi, alpha=0.0, beta=0.0, gamma=0.0, chi=0.0, xi=0.0):
    """Vectorized ray ansatz; broadcast inputs give rays of shape ``(..., 3)``."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValidationError("ray norm r must be non-negative")
    amp = np.sqrt(r)
    st, ct = np.sin(theta), np.cos(theta)
    c1 = amp * np.exp(1j * (np.asarray(alpha) - gamma)) * st * np.cos(phi)
    c2 = amp * np.exp(1j * (np.asarray(beta) - chi)) * st * np.sin(phi)
    c3 = amp * np.exp(1j * np.asarray(xi)) * ct
    return np.stack(np.broadcast_arrays(c1, c2, c3), axis=-1)


def ray_from_parameters(p):
    """Ray ``psi`` with ``<psi|psi> = p.r``."""
    return ray_from_angles(*p.as_tuple())


def bloch_from_ray(psi):
    """``n_i = (sqrt(3)/2) <psi|lambda_i|psi>``; accepts stacks ``(..., 3)``."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape[-1] != 3:
        raise ValidationError(f"qutrit ray must have 3 components, got {psi.shape}")
    z = (SQRT3 / 2.0) * np.einsum("...i,kij,...j->...k", psi.conj(), gell_mann_set().matrices, psi)
    scale = max(1.0, float(np.max(np.abs(psi)) ** 2)) if psi.size else 1.0
    return _real_components(z, "Bloch vector", IMAG_TOL * scale)


def bloch_closed_form(r, theta, phi, alpha=0.0, beta=0.0, gamma=0.0, chi=0.0, xi=0.0):
    """Closed-form Bloch components of the ray ansatz.

    Vectorized over broadcastable inputs; returns shape ``(..., 8)``.
    """
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    a = np.asarray(alpha) - gamma
    b = np.asarray(beta) - chi
    r = np.asarray(r, dtype=float)
    n = [
        SQRT3 * r * st**2 * sp * cp * np.cos(b - a),
        SQRT3 * r * st**2 * sp * cp * np.sin(b - a),
        0.5 * SQRT3 * r * st**2 * (cp**2 - sp**2),
        SQRT3 * r * st * ct * cp * np.cos(a - xi),
        -SQRT3 * r * st * ct * cp * np.sin(a - xi),
        SQRT3 * r * st * ct * sp * np.cos(b - xi),
        -SQRT3 * r * st * ct * sp * np.sin(b - xi),
        0.5 * r * (st**2 - 2 * ct**2),
    ]
    return np.stack(np.broadcast_arrays(*n), axis=-1)


def _wrap(x):
    """Wrap an angle to ``(-pi, pi]``."""
    w = np.mod(x + np.pi, 2 * np.pi) - np.pi
    return np.pi if w == -np.pi else float(w)


@dataclass(frozen=True)
class RecoveredParameters:
    """Result of :func:`parameters_from_density`.

    Attributes
    ----------
    params : BlochParameters
        Recovered coordinates in the gauge ``gamma = chi = xi = 0``.
    phase_residual : float
        Wrapped mismatch between the ``(n1, n2)`` phase relation and the
        recovered ``beta - alpha``; NaN when that pair was not usable.
    """

    params: BlochParameters
    phase_residual: float


def parameters_from_density(rho, tol=DEGENERATE_TOL):
    """Invert the ray ansatz for a qutrit density matrix.

    ``r`` is the Bloch radius, ``cos^2(theta) = (1 - 2 n8/r)/3`` and
    ``cos^2(phi) = (1 + 2 n3/(sqrt(3) r sin^2 theta))/2`` with principal
    roots, so ``theta, phi`` lie in ``[0, pi/2]``. The relative phases obey::

        beta - alpha = atan2(n2, n1)
        alpha - xi   = atan2(-n5, n4)
        beta - xi    = atan2(-n7, n6)

    (with ``gamma = chi = 0``). Only two of the three are independent, so the
    overall phase is fixed by ``xi = 0``. A phase whose amplitude vanishes
    is irrelevant and set to zero.

    Raises
    ------
    DegenerateStateError
        If ``r <= tol``.
    IndeterminateAngleError
        If every phase-carrying pair has magnitude ``<= tol``.
    """
    n = bloch_from_density(rho)
    r = bloch_radius(n)
    if r <= tol:
        raise DegenerateStateError(f"Bloch radius {r:.3e} too small to parametrize")
    c2t = min(max((1.0 - 2.0 * n[7] / r) / 3.0, 0.0), 1.0)
    theta = float(np.arccos(np.sqrt(c2t)))
    s2t = 1.0 - c2t
    if s2t * r > tol:
        c2p = min(max(0.5 * (1.0 + 2.0 * n[2] / (SQRT3 * r * s2t)), 0.0), 1.0)
        phi = float(np.arccos(np.sqrt(c2p)))
    else:
        phi = 0.0
    partial = {"r": r, "theta": theta, "phi": phi}

    p12, p45, p67 = (float(np.hypot(n[i], n[i + 1])) for i in (0, 3, 5))
    if max(p12, p45, p67) <= tol:
        raise IndeterminateAngleError(
            "relative phases alpha, beta are indeterminate: all off-diagonal pairs vanish",
            "alpha",
            partial,
        )
    alpha = np.arctan2(-n[4], n[3]) if p45 > tol else None
    beta = np.arctan2(-n[6], n[5]) if p67 > tol else None
    ba = np.arctan2(n[1], n[0]) if p12 > tol else None
    residual = float("nan")
    if ba is not None:
        if alpha is None and beta is None:
            alpha, beta = 0.0, ba
        elif alpha is None:
            alpha = beta - ba
        elif beta is None:
            beta = alpha + ba
        else:
            residual = abs(_wrap(beta - alpha - ba))
    params = BlochParameters(
        r, theta, phi, float(alpha or 0.0), float(beta or 0.0), 0.0, 0.0, 0.0
    )
    return RecoveredParameters(params, residual)


@dataclass(frozen=True)
class OverlapInversion:
    """Real combinations ``u_mn, v_mn, w2, w3`` of density-matrix entries."""

    u12: float
    u13: float
    u23: float
    v12: float
    v13: float
    v23: float
    w2: float
    w3: float

    def bloch(self):
        """Bloch vector implied by these combinations."""
        h = SQRT3 / 2.0
        return np.array(
            [
                h * self.u12,
                h * self.v12,
                h * self.w2,
                h * self.u13,
                h * self.v13,
                h * self.u23,
                h * self.v23,
                self.w3,
            ]
        )


def overlap_inversion(rho):
    """``u_mn = rho_mn + rho_nm``, ``v_mn = i(rho_mn - rho_nm)``, ``w2``, ``w3``."""
    m = validate_density(rho, 3)
    vals = {}
    for a, b in ((0, 1), (0, 2), (1, 2)):
        key = f"{a + 1}{b + 1}"
        vals["u" + key] = m[a, b] + m[b, a]
        vals["v" + key] = 1j * (m[a, b] - m[b, a])
    vals["w2"] = m[0, 0] - m[1, 1]
    vals["w3"] = (m[0, 0] + m[1, 1] - 2 * m[2, 2]) / 2.0
    out = {}
    for k, z in vals.items():
        if abs(z.imag) > IMAG_TOL:
            raise ValidationError(f"{k} has imaginary residue {abs(z.imag):.3e}")
        out[k] = float(z.real)
    return OverlapInversion(**out)


def radius_expression(rho):
    """Sum of squared Bloch components written in matrix entries.

    The antisymmetric combinations enter as ``-(rho_mn - rho_nm)^2``, which
    is non-negative for Hermitian input.
    """
    m = as_square(rho)
    sq = 0.0
    for a, b in ((0, 1), (0, 2), (1, 2)):
        sq += (m[a, b] + m[b, a]) ** 2 - (m[a, b] - m[b, a]) ** 2
    sq += (m[0, 0] - m[1, 1]) ** 2
    total = 0.75 * sq + 0.25 * (m[0, 0] + m[1, 1] - 2 * m[2, 2]) ** 2
    return float(total.real)


def random_density(rng, dim=3, rank=None):
    """Random density matrix from a Ginibre ensemble of the given rank."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def pure_density(psi):
    """``|psi><psi| / <psi|psi>``."""
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj()) / np.vdot(psi, psi).real
