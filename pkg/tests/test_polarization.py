import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qutritlab.bloch import random_density
from qutritlab.errors import UndefinedPolarizationError, ValidationError
from qutritlab.generators import pauli_set
from qutritlab.lindblad import LindbladModel, evolve, jump_from_paired_convention, lindblad_rhs
from qutritlab.linalg import max_abs_diff
from qutritlab.polarization import (
    PolarizationModel,
    TwoModeBasis,
    analytic_polarization_decay,
    annihilation_operators,
    build_basis,
    build_block,
    build_model,
    classical_stokes,
    degree_of_polarization,
    expectations,
    number_operators,
    one_photon_state,
    stokes_operators,
    to_two_photon_reference_order,
    uncertainty_check,
)
from strategies import seeds

SIG = pauli_set().matrices


def embed(block_rho, basis, n):
    idx = basis.block_indices(n)
    rho = np.zeros((basis.dim, basis.dim), dtype=complex)
    rho[np.ix_(idx, idx)] = block_rho
    return rho


def test_basis_examples():
    assert build_basis(2).states == ((0, 0), (1, 1), (1, 0), (2, 2), (2, 1), (2, 0))
    assert build_basis(4).dim == 15
    assert build_block(3).states == ((3, 3), (3, 2), (3, 1), (3, 0))
    assert build_block(1).is_single_block and not build_basis(1).is_single_block
    assert build_basis(2).block_indices(1) == [1, 2]
    with pytest.raises(ValidationError):
        build_basis(-1)
    with pytest.raises(ValidationError):
        TwoModeBasis(((1, 0), (1, 1)))
    with pytest.raises(ValidationError):
        TwoModeBasis(((1, 2),))


def test_ladder_matrix_elements():
    b = build_block(2)
    ops = stokes_operators(b)
    assert ops.s_plus[b.index(2, 1), b.index(2, 0)] == pytest.approx(2 * math.sqrt(2))
    assert ops.s_plus[b.index(2, 2), b.index(2, 1)] == pytest.approx(2 * math.sqrt(2))
    assert ops.s_minus[b.index(2, 1), b.index(2, 2)] == pytest.approx(2 * math.sqrt(2))
    assert max_abs_diff(ops.s_minus, ops.s_plus.conj().T) == 0
    assert max_abs_diff(ops.s3, np.diag([2, 0, -2])) == 0


def test_one_photon_block_is_pauli():
    ops = stokes_operators(build_block(1))
    for s, sig in zip(ops.vector, SIG):
        assert max_abs_diff(s, sig) <= 1e-15
    assert max_abs_diff(ops.s0, np.eye(2)) == 0


@pytest.mark.parametrize("n_max", [1, 2, 4])
def test_stokes_algebra(n_max):
    basis = build_basis(n_max)
    ops = stokes_operators(basis)
    s1, s2, s3 = ops.vector
    for a, b, c in ((s1, s2, s3), (s2, s3, s1), (s3, s1, s2)):
        assert max_abs_diff(a @ b - b @ a, 2j * c) <= 1e-12
    casimir = s1 @ s1 + s2 @ s2 + s3 @ s3
    assert max_abs_diff(casimir, ops.s0 @ (ops.s0 + 2 * np.eye(len(ops.s0)))) <= 1e-12
    for m in (s1, s2, s3):
        assert max_abs_diff(ops.s0 @ m - m @ ops.s0, np.zeros_like(m)) <= 1e-12
    off = ~basis.block_mask()
    for m in (s1, s2, s3):
        assert np.max(np.abs(m[off])) == 0


def test_stokes_from_mode_operators():
    basis = build_basis(3)
    ap, am = annihilation_operators(basis)
    ops = stokes_operators(basis)
    npl, nmi = number_operators(basis)
    assert max_abs_diff(ap.conj().T @ ap, npl) <= 1e-12
    assert max_abs_diff(am.conj().T @ am, nmi) <= 1e-12
    assert max_abs_diff(2 * ap.conj().T @ am, ops.s_plus) <= 1e-12
    assert max_abs_diff(ops.s0, npl + nmi) == 0
    with pytest.raises(ValidationError):
        annihilation_operators(build_block(2))


def test_expectations_and_polarization_examples():
    basis = build_basis(1)
    ops = stokes_operators(basis)
    rho = one_photon_state((1, 0, 0), basis)
    assert expectations(rho, ops) == pytest.approx((1, 1, 0, 0))
    assert degree_of_polarization(rho, ops) == pytest.approx(1)
    assert degree_of_polarization(one_photon_state((0, 0, 0), basis), ops) == 0
    vac = np.zeros((3, 3))
    vac[0, 0] = 1
    with pytest.raises(UndefinedPolarizationError):
        degree_of_polarization(vac, ops)
    with pytest.raises(ValidationError):
        one_photon_state((1, 1, 0), basis)


def test_uncertainty_equality_at_fock_state():
    basis = build_block(1)
    rho = np.diag([1.0, 0.0])
    assert uncertainty_check(rho, stokes_operators(basis)) == pytest.approx(0, abs=1e-14)


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(1, 4))
def test_uncertainty_non_negative(seed, n):
    rng = np.random.default_rng(seed)
    basis = build_block(n)
    rho = random_density(rng, basis.dim)
    assert uncertainty_check(rho, stokes_operators(basis)) >= -1e-12


def test_classical_stokes_correspondence(rng):
    basis = build_block(1)
    ops = stokes_operators(basis)
    for _ in range(10):
        e = rng.normal(size=2) + 1j * rng.normal(size=2)
        c = classical_stokes(*e)
        q = expectations(np.outer(e, e.conj()), ops)
        assert q[0] == pytest.approx(c[0])
        assert q[1:] == pytest.approx((c[2], c[3], c[1]))
        assert c[1] ** 2 + c[2] ** 2 + c[3] ** 2 == pytest.approx(c[0] ** 2)


def test_model_validation():
    with pytest.raises(ValueError):
        PolarizationModel("bogus")
    with pytest.raises(ValidationError):
        PolarizationModel("lossy", gamma_plus=-1)
    with pytest.raises(ValidationError):
        PolarizationModel("lossy").decay_rate
    with pytest.raises(ValidationError):
        build_model(PolarizationModel("atomic_bath", gamma=1), build_basis(1))
    with pytest.raises(ValidationError):
        analytic_polarization_decay(PolarizationModel("lossy"), (1, 0, 0), 1.0)
    with pytest.raises(ValidationError):
        analytic_polarization_decay(PolarizationModel("atomic_bath", gamma=1), (1, 0, 0), -1.0)


def test_pure_dephasing_one_photon_rate():
    gp, gm = 0.3, 0.5
    basis = build_basis(2)
    model = build_model(PolarizationModel("pure_dephasing", gamma_plus=gp, gamma_minus=gm), basis)
    rho = embed(np.full((2, 2), 0.5), basis, 1)
    d = lindblad_rhs(model, rho)
    i, j = basis.index(1, 1), basis.index(1, 0)
    assert d[i, j] == pytest.approx(-(gp + gm) / 2 * rho[i, j], abs=1e-15)
    assert d[i, i] == 0


def test_pure_dephasing_two_photon_rates():
    gp, gm = 0.3, 0.5
    g = gp + gm
    basis = build_block(2)
    model = build_model(PolarizationModel("pure_dephasing", gamma_plus=gp, gamma_minus=gm), basis)
    rho = np.full((3, 3), 1 / 3, dtype=complex)
    d = to_two_photon_reference_order(lindblad_rhs(model, rho))
    # reference order (|2,2>, |2,0>, |2,1>)
    want = -np.array([[0, 2 * g, g / 2], [2 * g, 0, g / 2], [g / 2, g / 2, 0]]) / 3
    assert max_abs_diff(d, want) <= 1e-15


def test_atomic_bath_rates_and_hamiltonian():
    gamma = 0.05
    basis = build_block(1)
    model = build_model(PolarizationModel("atomic_bath", gamma=gamma, omega=2.0), basis)
    sx, sy, sz = SIG
    assert max_abs_diff(lindblad_rhs(model, sx), -8 * gamma * sx) <= 1e-15
    assert max_abs_diff(lindblad_rhs(model, sy), -8 * gamma * sy) <= 1e-15
    assert max_abs_diff(lindblad_rhs(model, sz), -16 * gamma * sz) <= 1e-15
    assert max_abs_diff(lindblad_rhs(model, np.eye(2) / 2), np.zeros((2, 2))) <= 1e-15
    h = model.hamiltonian
    rho = random_density(np.random.default_rng(3), 2)
    assert max_abs_diff(h @ rho - rho @ h, np.zeros((2, 2))) <= 1e-15


def test_raising_term_matrix_elements():
    # 2 S+ rho S- - {S- S+, rho} has entries 8 rho_22 and -4 rho_12
    ops = stokes_operators(build_block(1))
    model = LindbladModel(np.zeros((2, 2)), (jump_from_paired_convention(1.0, ops.s_plus),))
    rho = np.array([[0.3, 0.1 - 0.2j], [0.1 + 0.2j, 0.7]])
    d = lindblad_rhs(model, rho)
    assert d[0, 0] == pytest.approx(8 * rho[1, 1])
    assert d[0, 1] == pytest.approx(-4 * rho[0, 1])
    assert d[1, 1] == pytest.approx(-8 * rho[1, 1])


@pytest.mark.parametrize("kind", ["pure_dephasing", "atomic_bath"])
def test_polarization_matches_analytic(kind):
    stokes = (0.6, 0.0, 0.8)
    pm = PolarizationModel(kind, gamma_plus=0.3, gamma_minus=0.2, gamma=0.05, omega=1.0)
    basis = build_block(1) if kind == "atomic_bath" else build_basis(2)
    ops = stokes_operators(basis)
    tr = evolve(build_model(pm, basis), one_photon_state(stokes, basis), 5.0, 1e-3, sample_every=250)
    got = np.array([degree_of_polarization(s, ops) for s in tr.states])
    assert np.max(np.abs(got - analytic_polarization_decay(pm, stokes, tr.times))) <= 1e-8


def test_block_structure_preserved():
    basis = build_basis(3)
    rng = np.random.default_rng(7)
    blocks = [random_density(rng, n + 1) for n in range(4)]
    rho = sum(w * embed(b, basis, n) for n, (w, b) in enumerate(zip((0.1, 0.2, 0.3, 0.4), blocks)))
    mask = basis.block_mask()
    for pm in (
        PolarizationModel("pure_dephasing", gamma_plus=0.3, gamma_minus=0.2),
        PolarizationModel("lossy", gamma_plus=0.3, gamma_minus=0.2),
    ):
        tr = evolve(build_model(pm, basis), rho, 2.0, 1e-2, sample_every=50)
        assert np.max(np.abs(tr.states[:, ~mask])) <= 1e-14


def test_lossy_decay_and_vacuum():
    gp, gm = 0.3, 0.2
    basis = build_basis(2)
    ops = stokes_operators(basis)
    model = build_model(PolarizationModel("lossy", gamma_plus=gp, gamma_minus=gm), basis)
    rho = one_photon_state((0, 0, 1), basis)
    d = lindblad_rhs(model, rho)
    i = basis.index(1, 1)
    assert d[i, i] == pytest.approx(-gp * rho[i, i])
    tr = evolve(model, one_photon_state((0.6, 0, 0.8), basis), 5.0, 1e-2, sample_every=50)
    s0 = [expectations(s, ops)[0] for s in tr.states]
    assert np.all(np.diff(s0) < 0)
    vac = np.zeros((basis.dim, basis.dim))
    vac[0, 0] = 1
    assert max_abs_diff(lindblad_rhs(model, vac), np.zeros_like(vac)) == 0


def test_pure_dephasing_stationary_state():
    gp, gm = 0.3, 0.2
    basis = build_block(1)
    pm = PolarizationModel("pure_dephasing", gamma_plus=gp, gamma_minus=gm)
    rho0 = one_photon_state((0.6, 0.3, 0.5), basis)
    tr = evolve(build_model(pm, basis), rho0, 50 / (gp + gm), 1e-2, sample_every=10000)
    final = tr.states[-1]
    assert abs(final[0, 1]) <= 1e-9
    assert np.max(np.abs(np.diag(final) - np.diag(rho0))) <= 1e-9
