"""Adjoint representations SU(2) -> SO(3), SU(3) -> SO(8) and octet products.

``R_ik(u) = (1/2) Re Tr[g_i u g_k u^dagger]`` so that the Bloch vector of
``u psi`` equals ``R(u)`` applied to the Bloch vector of ``psi``, and
``R(u) R(v) = R(u v)``.
"""
import numpy as np

from .errors import NonUnitaryError, ValidationError
from .generators import SQRT3, gell_mann_set, pauli_set, structure_constants
from .linalg import as_square

UNITARY_TOL = 1e-10
IMAG_TOL = 1e-12


def check_unitary(u, dim):
    """Return ``u`` after checking shape and ``max |u u^dagger - I| <= 1e-10``."""
    u = as_square(u, "u")
    if u.shape != (dim, dim):
        raise ValidationError(f"expected a {dim}x{dim} unitary, got {u.shape}")
    v = float(np.max(np.abs(u @ u.conj().T - np.eye(dim))))
    if v > UNITARY_TOL:
        raise NonUnitaryError(f"u is not unitary: max |u u^dagger - I| = {v:.3e}")
    return u


def _adjoint(u, gens):
    conj = np.einsum("ab,kbc,dc->kad", u, gens, u.conj())
    z = 0.5 * np.einsum("iab,kba->ik", gens, conj)
    bad = float(np.max(np.abs(z.imag)))
    if bad > IMAG_TOL:
        raise ValidationError(f"adjoint matrix has imaginary residue {bad:.3e}")
    return np.ascontiguousarray(z.real)


def adjoint_so3(u):
    """Rotation matrix of a 2x2 unitary acting on qubit Bloch vectors."""
    return _adjoint(check_unitary(u, 2), pauli_set().matrices)


def adjoint_so8(u):
    """8x8 orthogonal matrix of a 3x3 unitary acting on qutrit Bloch vectors."""
    return _adjoint(check_unitary(u, 3), gell_mann_set().matrices)


def _octet(a):
    a = np.asarray(a, dtype=float)
    if a.shape != (8,):
        raise ValidationError(f"octet vectors have 8 components, got {a.shape}")
    return a


def octet_dot(a, b):
    """``sum_r a_r b_r``."""
    return float(_octet(a) @ _octet(b))


def octet_wedge(a, b):
    """``(a ^ b)_r = f_rst a_s b_t``."""
    return np.einsum("rst,s,t->r", structure_constants().f, _octet(a), _octet(b))


def octet_star(a, b):
    """``(a * b)_r = sqrt(3) d_rst a_s b_t``."""
    return SQRT3 * np.einsum("rst,s,t->r", structure_constants().d, _octet(a), _octet(b))
