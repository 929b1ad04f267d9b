"""Pauli and Gell-Mann generators, SU(3) structure constants and Casimirs.

Matrices are stored 0-based internally; every public accessor that takes
a generator index uses the conventional 1-based labels (``sigma_1`` ..
``sigma_3``, ``lambda_1`` .. ``lambda_8``).
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement, combinations

import numpy as np

from .linalg import anticommutator, commutator

SQRT3 = np.sqrt(3.0)


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GeneratorSet:
    """An ordered set of traceless Hermitian generators.

    Attributes
    ----------
    dimension : int
        Matrix size, 2 for Pauli and 3 for Gell-Mann.
    matrices : numpy.ndarray
        Read-only stack of shape ``(count, dimension, dimension)``.
    """

    dimension: int
    matrices: np.ndarray

    def __len__(self):
        return self.matrices.shape[0]

    def __iter__(self):
        return iter(self.matrices)

    def generator(self, i):
        """Generator with 1-based label ``i``."""
        if not 1 <= i <= len(self):
            raise IndexError(f"generator label must be in 1..{len(self)}, got {i}")
        return self.matrices[i - 1]


def pauli_matrices():
    """Pauli matrices as a ``(3, 2, 2)`` array."""
    return np.array(
        [
            [[0, 1], [1, 0]],
            [[0, -1j], [1j, 0]],
            [[1, 0], [0, -1]],
        ],
        dtype=complex,
    )


def gell_mann_matrices():
    """Gell-Mann matrices as an ``(8, 3, 3)`` array."""
    g = np.zeros((8, 3, 3), dtype=complex)
    g[0][0, 1] = g[0][1, 0] = 1
    g[1][0, 1], g[1][1, 0] = -1j, 1j
    g[2][0, 0], g[2][1, 1] = 1, -1
    g[3][0, 2] = g[3][2, 0] = 1
    g[4][0, 2], g[4][2, 0] = -1j, 1j
    g[5][1, 2] = g[5][2, 1] = 1
    g[6][1, 2], g[6][2, 1] = -1j, 1j
    g[7] = np.diag([1, 1, -2]) / SQRT3
    return g


@lru_cache(maxsize=None)
def pauli_set():
    """The Pauli generators."""
    return GeneratorSet(2, _frozen(pauli_matrices()))


@lru_cache(maxsize=None)
def gell_mann_set():
    """The Gell-Mann generators, with the ``1/sqrt(3)`` factor on ``lambda_8``."""
    return GeneratorSet(3, _frozen(gell_mann_matrices()))


def levi_civita():
    """Rank-3 Levi-Civita tensor as a ``(3, 3, 3)`` float array."""
    eps = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[i, j, k] = 1.0
        eps[j, i, k] = -1.0
    return eps


@dataclass(frozen=True)
class StructureConstants:
    """Totally antisymmetric ``f`` and totally symmetric ``d`` tensors.

    Arrays are indexed 0-based; use :meth:`f_at` and :meth:`d_at` for the
    1-based labels.
    """

    f: np.ndarray
    d: np.ndarray

    def f_at(self, r, s, t):
        return float(self.f[r - 1, s - 1, t - 1])

    def d_at(self, r, s, t):
        return float(self.d[r - 1, s - 1, t - 1])

    def nonzero_f(self, tol=1e-12):
        """Components ``((r, s, t), value)`` with ``r < s < t``, 1-based."""
        return [
            ((r + 1, s + 1, t + 1), float(self.f[r, s, t]))
            for r, s, t in combinations(range(8), 3)
            if abs(self.f[r, s, t]) > tol
        ]

    def nonzero_d(self, tol=1e-12):
        """Components ``((r, s, t), value)`` with ``r <= s <= t``, 1-based."""
        return [
            ((r + 1, s + 1, t + 1), float(self.d[r, s, t]))
            for r, s, t in combinations_with_replacement(range(8), 3)
            if abs(self.d[r, s, t]) > tol
        ]


def structure_constants_from(matrices):
    """Trace formulas for ``f`` and ``d`` applied to an arbitrary stack.

    ``f_rst = Im Tr([l_r, l_s] l_t) / 4`` and
    ``d_rst = Re Tr({l_r, l_s} l_t) / 4``.
    """
    m = np.asarray(matrices, dtype=complex)
    prod = np.einsum("rij,sjk,tki->rst", m, m, m)
    comm = prod - np.einsum("rij,sjk,tki->srt", m, m, m)
    anti = prod + np.einsum("rij,sjk,tki->srt", m, m, m)
    f = comm.imag / 4.0
    d = anti.real / 4.0
    f[np.abs(f) < 1e-15] = 0.0
    d[np.abs(d) < 1e-15] = 0.0
    return StructureConstants(f, d)


@lru_cache(maxsize=None)
def structure_constants():
    """SU(3) structure constants computed from :func:`gell_mann_set`."""
    sc = structure_constants_from(gell_mann_set().matrices)
    sc.f.setflags(write=False)
    sc.d.setflags(write=False)
    return sc


def casimirs():
    """Quadratic and cubic Casimir operators of the defining representation.

    Returns
    -------
    c1 : numpy.ndarray
        ``sum_i lambda_i^2``.
    c2 : numpy.ndarray
        ``sum_ijk d_ijk lambda_i lambda_j lambda_k``.
    """
    lam = gell_mann_set().matrices
    d = structure_constants().d
    c1 = np.einsum("iab,ibc->ac", lam, lam)
    c2 = np.einsum("ijk,iab,jbc,kcd->ad", d, lam, lam, lam)
    return c1, c2


def product_identity_residual(matrices=None):
    """Max residual of ``l_r l_s = (2/3) delta_rs I + (d_rst + i f_rst) l_t``.

    Also covers the commutator and anticommutator forms.
    """
    lam = gell_mann_set().matrices if matrices is None else np.asarray(matrices)
    sc = structure_constants()
    eye = np.eye(3)
    worst = 0.0
    for r in range(8):
        for s in range(8):
            rhs = (2.0 / 3.0) * (r == s) * eye + np.einsum(
                "t,tij->ij", sc.d[r, s] + 1j * sc.f[r, s], lam
            )
            comm = 2j * np.einsum("t,tij->ij", sc.f[r, s], lam)
            anti = (4.0 / 3.0) * (r == s) * eye + 2 * np.einsum("t,tij->ij", sc.d[r, s], lam)
            worst = max(
                worst,
                np.max(np.abs(lam[r] @ lam[s] - rhs)),
                np.max(np.abs(commutator(lam[r], lam[s]) - comm)),
                np.max(np.abs(anticommutator(lam[r], lam[s]) - anti)),
            )
    return float(worst)


def pauli_identity_residual():
    """Max residual of ``s_i s_j = delta_ij I + i eps_ijk s_k`` over 9 pairs."""
    sig = pauli_set().matrices
    eps = levi_civita()
    worst = 0.0
    for i in range(3):
        for j in range(3):
            rhs = (i == j) * np.eye(2) + 1j * np.einsum("k,kab->ab", eps[i, j], sig)
            worst = max(worst, np.max(np.abs(sig[i] @ sig[j] - rhs)))
    return float(worst)


# Independent components as tabulated in the reference literature, 1-based.
# Compared against the computed tensor after canonical index ordering.
REFERENCE_F = {
    (1, 2, 3): 1.0,
    (1, 4, 7): 0.5,
    (2, 4, 6): 0.5,
    (2, 5, 7): 0.5,
    (3, 4, 5): 0.5,
    (5, 1, 6): 0.5,
    (6, 3, 7): 0.5,
    (4, 5, 8): SQRT3 / 2,
    (6, 7, 8): SQRT3 / 2,
}

REFERENCE_D = {
    (1, 1, 8): 1 / SQRT3,
    (2, 2, 8): 1 / SQRT3,
    (3, 3, 8): 1 / SQRT3,
    (8, 8, 8): -1 / SQRT3,
    (4, 4, 8): -1 / (2 * SQRT3),
    (5, 5, 8): -1 / (2 * SQRT3),
    (6, 6, 8): -1 / (2 * SQRT3),
    (7, 7, 8): -1 / (2 * SQRT3),
    (1, 4, 6): 0.5,
    (1, 5, 7): 0.5,
    (2, 4, 7): -0.5,
    (2, 5, 6): 0.5,
    (3, 4, 4): 0.5,
    (3, 5, 5): 0.5,
    (3, 6, 6): -0.5,
    (3, 7, 7): -0.5,
}


def canonical_f(indices, value):
    """Sort an antisymmetric label, flipping the sign per transposition."""
    idx = list(indices)
    sign = 1.0
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return tuple(idx), sign * value


def reference_table_mismatches(sc, tol=1e-12):
    """Compare a tensor pair with the tabulated components.

    Returns
    -------
    list of (str, float)
        ``(label, residual)`` for every tabulated component that differs
        by more than ``tol``, and for any computed nonzero component absent
        from the table. Labels read like ``"f_123"``.
    """
    bad = []
    want_f = dict(canonical_f(k, v) for k, v in REFERENCE_F.items())
    for (r, s, t), v in sorted(want_f.items()):
        res = abs(sc.f_at(r, s, t) - v)
        if res > tol:
            bad.append((f"f_{r}{s}{t}", res))
    for (r, s, t), v in sc.nonzero_f(tol):
        if (r, s, t) not in want_f:
            bad.append((f"f_{r}{s}{t}", abs(v)))
    want_d = {tuple(sorted(k)): v for k, v in REFERENCE_D.items()}
    for (r, s, t), v in sorted(want_d.items()):
        res = abs(sc.d_at(r, s, t) - v)
        if res > tol:
            bad.append((f"d_{r}{s}{t}", res))
    for (r, s, t), v in sc.nonzero_d(tol):
        if (r, s, t) not in want_d:
            bad.append((f"d_{r}{s}{t}", abs(v)))
    return bad
