"""Stokes operators on two-mode Fock spaces and depolarization models.

Basis states ``|N, k>`` hold ``k`` photons in the ``+`` mode and ``N - k``
in the ``-`` mode. They are ordered by ascending ``N`` and, inside each
photon-number block, by descending ``k``, so the one-photon block is
``(|1,1>, |1,0>)`` and ``S3`` restricted to it is ``diag(1, -1)``.
"""
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import UndefinedPolarizationError, ValidationError
from .lindblad import LindbladModel, jump_from_paired_convention
from .linalg import as_square

VACUUM_TOL = 1e-12


@dataclass(frozen=True)
class TwoModeBasis:
    """Ordered two-mode Fock states ``(N, k)``.

    Use :func:`build_basis` for the full truncated space and
    :func:`build_block` for a single photon-number block.
    """

    states: tuple

    def __post_init__(self):
        states = tuple((int(n), int(k)) for n, k in self.states)
        if not states:
            raise ValidationError("basis must contain at least one state")
        if states != tuple(sorted(states, key=lambda s: (s[0], -s[1]))):
            raise ValidationError("basis states must be ordered by N ascending, k descending")
        for n, k in states:
            if not 0 <= k <= n:
                raise ValidationError(f"invalid state |{n},{k}>")
        object.__setattr__(self, "states", states)

    @property
    def dim(self):
        return len(self.states)

    @property
    def n_max(self):
        return self.states[-1][0]

    @property
    def photon_numbers(self):
        return tuple(sorted({n for n, _ in self.states}))

    @property
    def is_single_block(self):
        return len(self.photon_numbers) == 1

    def index(self, n, k):
        return self.states.index((n, k))

    def block_indices(self, n):
        """Positions of the ``N = n`` states."""
        return [i for i, (m, _) in enumerate(self.states) if m == n]

    def block_mask(self):
        """Boolean matrix, true where both indices share a photon number."""
        ns = np.array([n for n, _ in self.states])
        return ns[:, None] == ns[None, :]


def build_basis(n_max):
    """All states with ``N <= n_max``; dimension ``(n_max+1)(n_max+2)/2``."""
    if n_max < 0:
        raise ValidationError("n_max must be >= 0")
    return TwoModeBasis(tuple((n, k) for n in range(n_max + 1) for k in range(n, -1, -1)))


def build_block(n):
    """The ``N + 1`` states of photon number ``n``."""
    if n < 0:
        raise ValidationError("photon number must be >= 0")
    return TwoModeBasis(tuple((n, k) for k in range(n, -1, -1)))


@dataclass(frozen=True)
class StokesOperatorSet:
    """Stokes operators and ladder operators on a basis."""

    s0: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    s3: np.ndarray
    s_plus: np.ndarray
    s_minus: np.ndarray

    @property
    def vector(self):
        return (self.s1, self.s2, self.s3)


def stokes_operators(basis):
    """Stokes operators from their ladder matrix elements.

    ``S+|N,k> = 2 sqrt((N-k)(k+1)) |N,k+1>``,
    ``S-|N,k> = 2 sqrt((N-k+1)k) |N,k-1>``, ``S0 = N``, ``S3 = 2k - N``.
    """
    d = basis.dim
    sp = np.zeros((d, d), dtype=complex)
    sm = np.zeros((d, d), dtype=complex)
    pos = {s: i for i, s in enumerate(basis.states)}
    for j, (n, k) in enumerate(basis.states):
        if (n, k + 1) in pos:
            sp[pos[(n, k + 1)], j] = 2.0 * math.sqrt((n - k) * (k + 1))
        if (n, k - 1) in pos:
            sm[pos[(n, k - 1)], j] = 2.0 * math.sqrt((n - k + 1) * k)
    s0 = np.diag([float(n) for n, _ in basis.states]).astype(complex)
    s3 = np.diag([float(2 * k - n) for n, k in basis.states]).astype(complex)
    s1 = 0.5 * (sp + sm)
    s2 = (sp - sm) / 2j
    ops = StokesOperatorSet(s0, s1, s2, s3, sp, sm)
    for m in (s0, s1, s2, s3, sp, sm):
        m.setflags(write=False)
    return ops


def annihilation_operators(basis):
    """Mode annihilators ``(a_plus, a_minus)`` on a full truncated basis.

    ``a+|N,k> = sqrt(k)|N-1,k-1>`` and ``a-|N,k> = sqrt(N-k)|N-1,k>``.
    """
    if basis.photon_numbers != tuple(range(basis.n_max + 1)):
        raise ValidationError("annihilation operators need a full truncated basis")
    d = basis.dim
    ap = np.zeros((d, d), dtype=complex)
    am = np.zeros((d, d), dtype=complex)
    pos = {s: i for i, s in enumerate(basis.states)}
    for j, (n, k) in enumerate(basis.states):
        if k >= 1:
            ap[pos[(n - 1, k - 1)], j] = math.sqrt(k)
        if n - k >= 1:
            am[pos[(n - 1, k)], j] = math.sqrt(n - k)
    return ap, am


def number_operators(basis):
    """Mode photon-number operators ``(n_plus, n_minus)``, valid on any basis."""
    return (
        np.diag([float(k) for _, k in basis.states]).astype(complex),
        np.diag([float(n - k) for n, k in basis.states]).astype(complex),
    )


def expectations(rho, ops):
    """``(<S0>, <S1>, <S2>, <S3>)`` as real numbers."""
    rho = as_square(rho, "rho")
    return tuple(
        float(np.real(np.sum(rho * m.T))) for m in (ops.s0, ops.s1, ops.s2, ops.s3)
    )


def degree_of_polarization(rho, ops):
    """``|<S>| / <S0>``.

    Raises
    ------
    UndefinedPolarizationError
        If ``<S0> <= 1e-12``.
    """
    s0, s1, s2, s3 = expectations(rho, ops)
    if s0 <= VACUUM_TOL:
        raise UndefinedPolarizationError(
            f"degree of polarization undefined for vacuum-supported state (<S0> = {s0:.3e})"
        )
    return math.sqrt(s1 * s1 + s2 * s2 + s3 * s3) / s0


def uncertainty_check(rho, ops):
    """``sum_i Var(S_i) - 2 <S0>``, non-negative for every non-vacuum state."""
    rho = as_square(rho, "rho")

    def ev(m):
        return float(np.real(np.sum(rho * m.T)))

    total = 0.0
    for s in ops.vector:
        total += ev(s @ s) - ev(s) ** 2
    return total - 2.0 * ev(ops.s0)


class PolarizationModelKind(enum.Enum):
    LOSSY = "lossy"
    PURE_DEPHASING = "pure_dephasing"
    ATOMIC_BATH = "atomic_bath"


@dataclass(frozen=True)
class PolarizationModel:
    """Model kind and its rates.

    Attributes
    ----------
    kind : PolarizationModelKind
    gamma_plus, gamma_minus : float
        Mode rates for the lossy and pure-dephasing models.
    gamma : float
        Atomic-bath rate.
    omega : float
        Atomic-bath frequency in ``H = omega S0``.
    """

    kind: PolarizationModelKind
    gamma_plus: float = 0.0
    gamma_minus: float = 0.0
    gamma: float = 0.0
    omega: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", PolarizationModelKind(self.kind))
        for name in ("gamma_plus", "gamma_minus", "gamma"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be non-negative")

    @property
    def decay_rate(self):
        """Rate ``gamma'`` entering the analytic polarization decay."""
        if self.kind is PolarizationModelKind.PURE_DEPHASING:
            return self.gamma_plus + self.gamma_minus
        if self.kind is PolarizationModelKind.ATOMIC_BATH:
            return 8.0 * self.gamma
        raise ValidationError("the lossy model has no closed-form polarization decay")


def build_model(model, basis):
    """Lindblad model for one of the depolarization channels.

    ``lossy``: ``(g_s/2) L[a_s]`` on a full truncated basis.
    ``pure_dephasing``: ``(g_s/2) L[n_s]``.
    ``atomic_bath``: ``H = omega S0`` with ``2 g L[S0] + g L[S+] + g L[S-]``
    on a single photon-number block. Here ``L[C] = 2 C rho C^dagger -
    {C^dagger C, rho}``.
    """
    kind = model.kind
    d = basis.dim
    if kind is PolarizationModelKind.LOSSY:
        ap, am = annihilation_operators(basis)
        jumps = (
            jump_from_paired_convention(model.gamma_plus / 2, ap),
            jump_from_paired_convention(model.gamma_minus / 2, am),
        )
        return LindbladModel(np.zeros((d, d), dtype=complex), jumps)
    if kind is PolarizationModelKind.PURE_DEPHASING:
        n_plus, n_minus = number_operators(basis)
        jumps = (
            jump_from_paired_convention(model.gamma_plus / 2, n_plus),
            jump_from_paired_convention(model.gamma_minus / 2, n_minus),
        )
        return LindbladModel(np.zeros((d, d), dtype=complex), jumps)
    if not basis.is_single_block:
        raise ValidationError("the atomic-bath model needs a single photon-number block")
    ops = stokes_operators(basis)
    jumps = (
        jump_from_paired_convention(2 * model.gamma, ops.s0),
        jump_from_paired_convention(model.gamma, ops.s_plus),
        jump_from_paired_convention(model.gamma, ops.s_minus),
    )
    return LindbladModel(model.omega * ops.s0, jumps)


def analytic_polarization_decay(model, s0, t):
    """Closed-form degree of polarization of a one-photon state.

    Pure dephasing: ``sqrt((sx^2 + sy^2) e^{-g t} + sz^2)`` with
    ``g = g+ + g-``. Atomic bath: ``e^{-g t} sqrt(sx^2 + sy^2 + sz^2 e^{-2 g t})``
    with ``g = 8 gamma``.

    Raises
    ------
    ValidationError
        For the lossy model, or ``t < 0``.
    """
    if np.any(np.asarray(t) < 0):
        raise ValidationError("t must be non-negative")
    g = model.decay_rate
    sx, sy, sz = (float(c) for c in s0)
    t = np.asarray(t, dtype=float)
    if model.kind is PolarizationModelKind.PURE_DEPHASING:
        out = np.sqrt((sx * sx + sy * sy) * np.exp(-g * t) + sz * sz)
    else:
        out = np.exp(-g * t) * np.sqrt(sx * sx + sy * sy + sz * sz * np.exp(-2 * g * t))
    return float(out) if out.ndim == 0 else out


def one_photon_state(stokes, basis):
    """``(I + s . sigma)/2`` on the one-photon block, embedded in ``basis``."""
    s = np.asarray(stokes, dtype=float)
    if s.shape != (3,) or np.linalg.norm(s) > 1 + 1e-12:
        raise ValidationError("one-photon Stokes vector must have 3 components and length <= 1")
    i_p, i_m = basis.index(1, 1), basis.index(1, 0)
    rho = np.zeros((basis.dim, basis.dim), dtype=complex)
    rho[i_p, i_p] = 0.5 * (1 + s[2])
    rho[i_m, i_m] = 0.5 * (1 - s[2])
    rho[i_p, i_m] = 0.5 * (s[0] - 1j * s[1])
    rho[i_m, i_p] = 0.5 * (s[0] + 1j * s[1])
    return rho


def to_two_photon_reference_order(m):
    """Reorder an ``N = 2`` block matrix from ``(|2,2>,|2,1>,|2,0>)`` to ``(|2,2>,|2,0>,|2,1>)``."""
    perm = [0, 2, 1]
    m = np.asarray(m)
    return m[np.ix_(perm, perm)]


def classical_stokes(e_x, e_y):
    """Classical Stokes parameters ``(S0, S1, S2, S3)`` of two field amplitudes.

    ``S1`` is the intensity difference and ``S2, S3`` carry the cosine and
    sine of the relative phase ``arg(e_y) - arg(e_x)``. For the one-photon
    state ``e_x |1,1> + e_y |1,0>`` the quantum expectations satisfy
    ``<S1>, <S2>, <S3> = S2, S3, S1`` (a cyclic relabeling).
    """
    cross = np.conj(e_x) * e_y
    return (
        float(abs(e_x) ** 2 + abs(e_y) ** 2),
        float(abs(e_x) ** 2 - abs(e_y) ** 2),
        float(2 * cross.real),
        float(2 * cross.imag),
    )
