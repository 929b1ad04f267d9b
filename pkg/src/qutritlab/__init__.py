"""Qutrit Bloch geometry, Lindblad dynamics, geometric phases and depolarization.

Submodules
----------
linalg        small dense complex matrix helpers
generators    Pauli and Gell-Mann matrices, structure constants, Casimirs
bloch         density matrices, Bloch vectors and the non-unit ray ansatz
adjoint       SO(3) and SO(8) adjoint maps and octet products
lindblad      master-equation models and RK4 trajectories
phase         Pancharatnam, Bargmann and Berry phases
polarization  Stokes operators and depolarization channels
scenarios     JSON scenario configs and deterministic output
"""
from ._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
