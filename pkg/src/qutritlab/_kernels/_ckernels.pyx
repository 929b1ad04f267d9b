# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled RK4 kernel for the Lindblad master equation.

Same contract as ``_pykernels``: ``drho/dt = A rho + (A rho)^H + sum L rho L^H``.
"""
import numpy as np

from ._pykernels import sample_steps

BACKEND = "cython"

ctypedef double complex cplx


cdef void _rhs(const cplx[:, ::1] a, const cplx[:, :, ::1] jumps,
               const cplx[:, ::1] rho, cplx[:, ::1] out, cplx[:, ::1] tmp) noexcept nogil:
    # row-major loops that skip zero operator entries; ladder and number
    # operators are sparse, so this beats a dense product for larger blocks
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = jumps.shape[0]
    cdef Py_ssize_t i, j, l, q
    cdef cplx c
    for i in range(n):
        for j in range(n):
            tmp[i, j] = 0
        for l in range(n):
            c = a[i, l]
            if c == 0:
                continue
            for j in range(n):
                tmp[i, j] = tmp[i, j] + c * rho[l, j]
    for i in range(n):
        for j in range(n):
            out[i, j] = tmp[i, j] + tmp[j, i].conjugate()
    for q in range(m):
        for i in range(n):
            for j in range(n):
                tmp[i, j] = 0
            for l in range(n):
                c = jumps[q, i, l]
                if c == 0:
                    continue
                for j in range(n):
                    tmp[i, j] = tmp[i, j] + c * rho[l, j]
        for j in range(n):
            for l in range(n):
                c = jumps[q, j, l].conjugate()
                if c == 0:
                    continue
                for i in range(n):
                    out[i, j] = out[i, j] + tmp[i, l] * c


def lindblad_rhs(a, jumps, rho):
    """Right-hand side for precomputed ``A`` and a jump stack ``(m, n, n)``."""
    cdef const cplx[:, ::1] av = np.ascontiguousarray(a, dtype=complex)
    n = av.shape[0]
    cdef const cplx[:, :, ::1] jv = np.ascontiguousarray(jumps, dtype=complex).reshape(-1, n, n)
    cdef const cplx[:, ::1] rv = np.ascontiguousarray(rho, dtype=complex)
    out = np.empty((n, n), dtype=complex)
    tmp = np.empty((n, n), dtype=complex)
    _rhs(av, jv, rv, out, tmp)
    return out


def rk4_lindblad(a, jumps, rho0, double h, Py_ssize_t nsteps, Py_ssize_t sample_every):
    """Fixed-step RK4 with re-Hermitization after every step.

    See ``_pykernels.rk4_lindblad`` for the parameter contract.
    """
    cdef const cplx[:, ::1] av = np.ascontiguousarray(a, dtype=complex)
    cdef Py_ssize_t n = av.shape[0]
    cdef const cplx[:, :, ::1] jv = np.ascontiguousarray(jumps, dtype=complex).reshape(-1, n, n)
    steps = sample_steps(nsteps, sample_every)
    cdef long long[::1] sv = steps
    cdef Py_ssize_t nsamp = steps.shape[0]
    states = np.empty((nsamp, n, n), dtype=complex)
    cdef cplx[:, :, ::1] st = states
    cdef cplx[:, ::1] rho = np.array(rho0, dtype=complex, order="C")
    cdef cplx[:, ::1] stage = np.empty((n, n), dtype=complex)
    cdef cplx[:, ::1] tmp = np.empty((n, n), dtype=complex)
    cdef cplx[:, ::1] k1 = np.empty((n, n), dtype=complex)
    cdef cplx[:, ::1] k2 = np.empty((n, n), dtype=complex)
    cdef cplx[:, ::1] k3 = np.empty((n, n), dtype=complex)
    cdef cplx[:, ::1] k4 = np.empty((n, n), dtype=complex)
    cdef Py_ssize_t i, j, step
    cdef Py_ssize_t k = 1
    cdef double half = 0.5 * h
    cdef double sixth = h / 6.0
    cdef cplx x, y
    st[0, :, :] = rho
    with nogil:
        for step in range(1, nsteps + 1):
            _rhs(av, jv, rho, k1, tmp)
            for i in range(n):
                for j in range(n):
                    stage[i, j] = rho[i, j] + half * k1[i, j]
            _rhs(av, jv, stage, k2, tmp)
            for i in range(n):
                for j in range(n):
                    stage[i, j] = rho[i, j] + half * k2[i, j]
            _rhs(av, jv, stage, k3, tmp)
            for i in range(n):
                for j in range(n):
                    stage[i, j] = rho[i, j] + h * k3[i, j]
            _rhs(av, jv, stage, k4, tmp)
            for i in range(n):
                for j in range(n):
                    stage[i, j] = rho[i, j] + sixth * (
                        k1[i, j] + 2.0 * k2[i, j] + 2.0 * k3[i, j] + k4[i, j])
            for i in range(n):
                for j in range(i, n):
                    x = stage[i, j]
                    y = stage[j, i]
                    rho[i, j] = 0.5 * (x + y.conjugate())
                    rho[j, i] = rho[i, j].conjugate()
            if k < nsamp and sv[k] == step:
                for i in range(n):
                    for j in range(n):
                        st[k, i, j] = rho[i, j]
                k = k + 1
    return steps, states
