"""Small dense complex matrix helpers.

All operators in the package are square ``numpy`` arrays of dtype
``complex128``. The helpers here validate shapes, so that dimension
mistakes fail loudly instead of broadcasting.
"""
import numpy as np

from .errors import DimensionError, NonHermitianError

HERMITIAN_TOL = 1e-10


def as_square(m, name="matrix"):
    """Return ``m`` as a square complex array, or raise DimensionError."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DimensionError(f"{name} has non-finite entries")
    return a


def _same_shape(a, b):
    a = as_square(a, "a")
    b = as_square(b, "b")
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def identity(n):
    """Complex identity of size ``n``."""
    return np.eye(n, dtype=complex)


def dagger(m):
    """Conjugate transpose."""
    return as_square(m).conj().T


def trace(m):
    """Trace as a Python complex."""
    return complex(np.trace(as_square(m)))


def commutator(a, b):
    """``ab - ba``."""
    a, b = _same_shape(a, b)
    return a @ b - b @ a


def anticommutator(a, b):
    """``ab + ba``."""
    a, b = _same_shape(a, b)
    return a @ b + b @ a


def max_abs_diff(a, b):
    """Largest elementwise modulus of ``a - b``."""
    a, b = _same_shape(a, b)
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def hermiticity_violation(m):
    """Largest elementwise ``|m - m^dagger|``."""
    m = as_square(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def check_hermitian(m, name="matrix", tol=HERMITIAN_TOL):
    """Return ``m`` as an array after checking Hermiticity."""
    m = as_square(m, name)
    v = hermiticity_violation(m)
    if v > tol:
        raise NonHermitianError(
            f"{name} is not Hermitian: max |m - m^dagger| = {v:.3e} > {tol:.0e}", v
        )
    return m


def expm_hermitian_phase(h, s):
    """Unitary ``exp(i s h)`` for Hermitian ``h``.

    Computed from the spectral decomposition ``h = V diag(w) V^dagger``, so
    the result is unitary to eigensolver precision.

    Parameters
    ----------
    h : array_like
        Hermitian matrix (tolerance 1e-10).
    s : float
        Real scale factor.

    Returns
    -------
    numpy.ndarray
        ``V diag(exp(i s w)) V^dagger``.

    Raises
    ------
    NonHermitianError
        If ``h`` is not Hermitian; the message carries the violation.
    """
    h = check_hermitian(h, "h")
    h = 0.5 * (h + h.conj().T)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * float(s) * w)) @ v.conj().T


def random_hermitian(rng, n, scale=1.0):
    """Random Hermitian matrix with entry moduli bounded by ``scale``."""
    re = rng.uniform(-1.0, 1.0, (n, n))
    im = rng.uniform(-1.0, 1.0, (n, n))
    a = (re + 1j * im) / np.sqrt(2.0)
    return scale * 0.5 * (a + a.conj().T)


def random_unitary(rng, n, scale=2.0):
    """Random unitary ``exp(i h)`` with ``h`` from :func:`random_hermitian`."""
    return expm_hermitian_phase(random_hermitian(rng, n, scale), 1.0)
