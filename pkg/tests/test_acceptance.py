"""Acceptance criteria 1-8, one PASS/FAIL line each.

Run ``pytest tests/test_acceptance.py -v`` to see the lines; they are
written past pytest's capture so they also appear without ``-s``.
"""
import itertools
import json
import math
import time

import numpy as np
import pytest
from scipy.linalg import expm

from qutritlab import adjoint, bloch, phase, polarization
from qutritlab.cli import main
from qutritlab.generators import (
    REFERENCE_D,
    REFERENCE_F,
    canonical_f,
    gell_mann_set,
    pauli_identity_residual,
    pauli_set,
    product_identity_residual,
    structure_constants,
)
from qutritlab.lindblad import (
    DephasingParams,
    analytic_dephasing_solution,
    dephasing_model,
    evolve,
    lindblad_rhs,
    trajectory_observables,
)
from qutritlab.linalg import random_unitary

SEED = 2718


class Ledger:
    """Collects ``(name, value, tol)`` checks and prints one summary line."""

    def __init__(self, number, capsys):
        self.number = number
        self.capsys = capsys
        self.items = []

    def upper(self, name, value, tol):
        self.items.append((name, float(value), f"<= {tol:g}", bool(value <= tol)))

    def lower(self, name, value, bound):
        self.items.append((name, float(value), f">= {bound:g}", bool(value >= bound)))

    def flag(self, name, ok):
        self.items.append((name, float(ok), "true", bool(ok)))

    def finish(self):
        ok = all(item[3] for item in self.items)
        parts = [f"{n}={v:.3e} ({t})" for n, v, t, _ in self.items]
        line = f"criterion {self.number}: {'PASS' if ok else 'FAIL'}  " + "; ".join(parts)
        with self.capsys.disabled():
            print("\n" + line)
        failed = [n for n, _, _, good in self.items if not good]
        assert not failed, f"criterion {self.number} failed: {failed}"


@pytest.fixture
def ledger(request, capsys):
    number = int(request.node.name.split("_")[1])
    return Ledger(number, capsys)


def test_1_generator_algebra(ledger):
    start = time.perf_counter()
    lam = gell_mann_set().matrices
    sig = pauli_set().matrices
    gram = np.einsum("rab,sba->rs", lam, lam)
    ledger.upper("su3_identities", product_identity_residual(), 1e-12)
    ledger.upper("su2_identities", pauli_identity_residual(), 1e-12)
    ledger.upper("trace_orthogonality", np.max(np.abs(gram - 2 * np.eye(8))), 1e-12)
    ledger.upper("pauli_orthogonality", np.max(np.abs(np.einsum("iab,jba->ij", sig, sig) - 2 * np.eye(3))), 1e-12)
    sc = structure_constants()
    dev = [abs(sc.f_at(*idx) - v) for idx, v in (canonical_f(k, x) for k, x in REFERENCE_F.items())]
    dev += [abs(sc.d_at(*k) - v) for k, v in REFERENCE_D.items()]
    ledger.upper("listed_f_d_components", max(dev), 1e-12)
    ledger.upper("runtime_s", time.perf_counter() - start, 1.0)
    ledger.finish()


def test_2_bloch_consistency(ledger):
    grid = np.linspace(0.0, 2 * np.pi, 5, endpoint=False) + 0.1
    ang = np.array(list(itertools.product(grid, repeat=7))).T
    r = np.linspace(0.05, 1.0, ang.shape[1])
    ledger.lower("grid_points", ang.shape[1], 1e4)
    rays = bloch.ray_from_angles(r, *ang)
    n = bloch.bloch_from_ray(rays)
    closed = bloch.bloch_closed_form(r, *ang)
    ledger.upper("closed_form_vs_ray", np.max(np.abs(n - closed)), 1e-12)
    ledger.upper("sum_n2_minus_r2", np.max(np.abs(np.sum(n**2, axis=-1) - r**2)), 1e-12)
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for k in range(500):
        rho = bloch.random_density(rng, 3, rank=1 + k % 3)
        rad = bloch.bloch_radius(bloch.bloch_from_density(rho))
        worst = max(worst, abs(bloch.purity(rho) - (1 / 3 + 2 / 3 * rad * rad)))
    ledger.upper("radius_purity_500", worst, 1e-10)
    ledger.finish()


def test_3_adjoint_representation(ledger):
    rng = np.random.default_rng(SEED)
    orth = det = hom = cov = octet = 0.0
    for _ in range(60):
        u, v = random_unitary(rng, 3), random_unitary(rng, 3)
        ru = adjoint.adjoint_so8(u)
        orth = max(orth, np.max(np.abs(ru @ ru.T - np.eye(8))))
        det = max(det, abs(np.linalg.det(ru) - 1))
        hom = max(hom, np.max(np.abs(ru @ adjoint.adjoint_so8(v) - adjoint.adjoint_so8(u @ v))))
        psi = rng.normal(size=3) + 1j * rng.normal(size=3)
        psi /= np.linalg.norm(psi)
        cov = max(cov, np.max(np.abs(bloch.bloch_from_ray(u @ psi) - ru @ bloch.bloch_from_ray(psi))))
        a, b = rng.normal(size=8), rng.normal(size=8)
        octet = max(
            octet,
            np.max(np.abs(ru @ adjoint.octet_wedge(a, b) - adjoint.octet_wedge(ru @ a, ru @ b))),
            np.max(np.abs(ru @ adjoint.octet_star(a, b) - adjoint.octet_star(ru @ a, ru @ b))),
        )
        w = random_unitary(rng, 2)
        r3 = adjoint.adjoint_so3(w)
        orth = max(orth, np.max(np.abs(r3 @ r3.T - np.eye(3))))
        det = max(det, abs(np.linalg.det(r3) - 1))
    ledger.upper("orthogonality", orth, 1e-10)
    ledger.upper("determinant", det, 1e-9)
    ledger.upper("homomorphism", hom, 1e-9)
    ledger.upper("bloch_covariance", cov, 1e-10)
    ledger.upper("octet_covariance", octet, 1e-9)
    ledger.finish()


def test_4_lindblad_dephasing(ledger):
    p = DephasingParams(tuple(np.ones(3) / math.sqrt(3)), 1.0, 0.1)
    tr = evolve(dephasing_model(1.0, 0.1), p.rho0, 10.0, 1e-3)
    exact = np.array([analytic_dephasing_solution(p, t) for t in tr.times])
    ledger.upper("elementwise_vs_analytic", np.max(np.abs(tr.states - exact)), 1e-6)
    ledger.upper("trace_drift", tr.max_trace_drift, 1e-9)
    r12 = np.abs(tr.states[:, 0, 1] / tr.states[0, 0, 1])
    r13 = np.abs(tr.states[:, 0, 2] / tr.states[0, 0, 2])
    ledger.upper("ratio_rho12", np.max(np.abs(r12 - np.exp(-0.2 * tr.times))), 1e-9)
    ledger.upper("ratio_rho13", np.max(np.abs(r13 - np.exp(-0.05 * tr.times))), 1e-9)
    obs = trajectory_observables(tr)
    ledger.upper("radius_increase", max(0.0, np.max(np.diff(obs.r))), 1e-9)
    ledger.upper("purity_increase", max(0.0, np.max(np.diff(obs.purity))), 1e-9)
    ledger.finish()


def test_5_geometric_phase(ledger):
    triple = np.array([[1, 0], [1, 1], [1, 1j]], dtype=complex)
    triple /= np.linalg.norm(triple, axis=1)[:, None]
    tri = phase.RayTrajectory([0, 1, 2, 3], np.vstack([triple, triple[:1]]))
    ledger.upper("bargmann_triple", abs(phase.pancharatnam_phase(tri, closed=True).wrapped + np.pi / 4), 1e-12)
    theta, phi = np.pi / 3, np.pi / 4
    want = -np.pi / 2
    base = bloch.BlochParameters(1.0, theta, phi)
    errs, gaps = {}, {}
    for n in (1000, 10000, 100000):
        loop = phase.ParameterLoop.sweep(base, n, xi=(0.0, 2 * np.pi))
        tr = loop.ray_trajectory()
        routes = [
            phase.pancharatnam_phase(tr, closed=True).wrapped,
            phase.phase_decomposition(tr).geometric,
            phase.wrap_angle(phase.berry_phase_quasicyclic(loop)),
        ]
        errs[n] = max(abs(phase.wrap_angle(x - want)) for x in routes)
        gaps[n] = max(abs(phase.wrap_angle(a - b)) for a in routes for b in routes)
        if n == 10000:
            beta = 3.0 * np.sin(np.linspace(0, 2 * np.pi, n + 1)) + np.cos(np.linspace(0, 4 * np.pi, n + 1))
            shifted = phase.gauge_transform(tr, beta)
            gauge = max(
                abs(phase.wrap_angle(phase.phase_decomposition(shifted).geometric - routes[1])),
                abs(phase.wrap_angle(phase.pancharatnam_phase(shifted, closed=True).wrapped - routes[0])),
            )
    ledger.upper("three_routes_error_N1e4", errs[10000], 1e-3)
    ledger.upper("route_agreement_N1e4", gaps[10000], 1e-3)
    ledger.flag("error_monotone", errs[1000] > errs[10000] > errs[100000] or errs[10000] == errs[100000] == 0)
    ledger.flag("gap_monotone", gaps[1000] > gaps[10000] > gaps[100000])
    ledger.upper("gauge_shift", gauge, 2e-3)
    rdep = max(
        abs(
            phase.berry_phase_quasicyclic(phase.ParameterLoop.sweep(bloch.BlochParameters(r, theta, phi), 500, xi=(0, 2 * np.pi)))
            - phase.berry_phase_quasicyclic(phase.ParameterLoop.sweep(base, 500, xi=(0, 2 * np.pi)))
        )
        for r in (0.1, 0.5, 0.9)
    )
    ledger.upper("r_dependence", rdep, 0.0)
    ledger.finish()


def test_6_polarization_algebra(ledger):
    comm = ladder = 0.0
    for n_max in range(1, 5):
        basis = polarization.build_basis(n_max)
        ops = polarization.stokes_operators(basis)
        s1, s2, s3 = ops.vector
        for a, b, c in ((s1, s2, s3), (s2, s3, s1), (s3, s1, s2)):
            comm = max(comm, np.max(np.abs(a @ b - b @ a - 2j * c)))
        sp, sm = ops.s_plus, ops.s_minus
        comm = max(comm, np.max(np.abs(sp @ sm - sm @ sp - 4 * s3)))
        want_p = np.zeros_like(sp)
        want_m = np.zeros_like(sm)
        for j, (n, k) in enumerate(basis.states):
            if k < n:
                want_p[basis.index(n, k + 1), j] = 2 * math.sqrt((n - k) * (k + 1))
            if k > 0:
                want_m[basis.index(n, k - 1), j] = 2 * math.sqrt((n - k + 1) * k)
        ladder = max(ladder, np.max(np.abs(sp - want_p)), np.max(np.abs(sm - want_m)))
    ledger.upper("commutators", comm, 1e-12)
    ledger.upper("ladder_elements", ladder, 0.0)
    rng = np.random.default_rng(SEED)
    basis = polarization.build_basis(4)
    ops = polarization.stokes_operators(basis)
    worst = np.inf
    for _ in range(100):
        rho = np.zeros((basis.dim, basis.dim), dtype=complex)
        rho[1:, 1:] = bloch.random_density(rng, basis.dim - 1, rank=int(rng.integers(1, 5)))
        worst = min(worst, polarization.uncertainty_check(rho, ops))
    ledger.lower("uncertainty_min", worst, -1e-9)
    fock = np.zeros((basis.dim, basis.dim))
    fock[basis.index(1, 1), basis.index(1, 1)] = 1
    ledger.upper("equality_at_1_1", abs(polarization.uncertainty_check(fock, ops)), 1e-12)
    ledger.finish()


def _liouvillian(model):
    d = model.dim
    cols = []
    for j in range(d * d):
        e = np.zeros(d * d, dtype=complex)
        e[j] = 1
        cols.append(lindblad_rhs(model, e.reshape(d, d)).ravel())
    return np.array(cols).T


def _fitted_rates(model, rho0, times):
    gen = _liouvillian(model)
    d = model.dim
    states = np.array([(expm(gen * t) @ rho0.ravel()).reshape(d, d) for t in times])
    rates = np.zeros((d, d))
    for i, j in itertools.product(range(d), repeat=2):
        if abs(rho0[i, j]) > 0:
            slope = np.polyfit(times, np.log(np.abs(states[:, i, j])), 1)[0]
            rates[i, j] = -slope
    return rates


def test_7_depolarization_dynamics(ledger):
    gp, gm = 0.3, 0.2
    g = gp + gm
    times = np.linspace(0.0, 5.0, 21)
    pd = polarization.PolarizationModel("pure_dephasing", gamma_plus=gp, gamma_minus=gm)
    b1 = polarization.build_block(1)
    rates1 = _fitted_rates(polarization.build_model(pd, b1), np.full((2, 2), 0.5, dtype=complex), times)
    ledger.upper("N1_rates", np.max(np.abs(rates1 - (g / 2) * (1 - np.eye(2)))), 1e-9)
    b2 = polarization.build_block(2)
    rates2 = _fitted_rates(polarization.build_model(pd, b2), np.full((3, 3), 1 / 3, dtype=complex), times)
    # reference order (|2,2>, |2,0>, |2,1>)
    want2 = np.array([[0, 2 * g, g / 2], [2 * g, 0, g / 2], [g / 2, g / 2, 0]])
    ledger.upper("N2_rates", np.max(np.abs(polarization.to_two_photon_reference_order(rates2) - want2)), 1e-9)

    stokes = (0.6, 0.0, 0.8)
    basis = polarization.build_basis(2)
    ops = polarization.stokes_operators(basis)
    tr = evolve(polarization.build_model(pd, basis), polarization.one_photon_state(stokes, basis), 10.0, 1e-3, 100)
    got = np.array([polarization.degree_of_polarization(s, ops) for s in tr.states])
    ledger.upper("pure_dephasing_P", np.max(np.abs(got - polarization.analytic_polarization_decay(pd, stokes, tr.times))), 1e-6)

    gamma = 0.05
    ab = polarization.PolarizationModel("atomic_bath", gamma=gamma, omega=1.0)
    model = polarization.build_model(ab, b1)
    sx, _, sz = pauli_set().matrices
    rhs_res = max(
        np.max(np.abs(lindblad_rhs(model, sx) + 8 * gamma * sx)),
        np.max(np.abs(lindblad_rhs(model, sz) + 16 * gamma * sz)),
    )
    ledger.upper("atomic_bath_rhs", rhs_res, 1e-9)
    ops1 = polarization.stokes_operators(b1)
    tr = evolve(model, polarization.one_photon_state(stokes, b1), 10.0, 1e-3, 100)
    got = np.array([polarization.degree_of_polarization(s, ops1) for s in tr.states])
    ledger.upper("atomic_bath_P", np.max(np.abs(got - polarization.analytic_polarization_decay(ab, stokes, tr.times))), 1e-6)

    lossy = polarization.PolarizationModel("lossy", gamma_plus=gp, gamma_minus=gm)
    basis = polarization.build_basis(1)
    tr = evolve(polarization.build_model(lossy, basis), polarization.one_photon_state(stokes, basis), 50.0 / min(gp, gm), 1e-2, 1000)
    final = tr.states[-1]
    ledger.upper("lossy_off_vacuum_mass", 1.0 - final[0, 0].real + np.max(np.abs(final[1:, :])), 1e-8)
    ledger.finish()


def test_8_cli_determinism(ledger, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "scenario": "dephasing3", "omega": 1.0, "eta": 0.1,
        "delta": [[1 / math.sqrt(3), 0.0]] * 3, "t_max": 2.0, "dt": 1e-3, "sample_every": 100,
    }))
    outs = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        main(["evolve", str(cfg), "--output", str(path), "--quiet"])
        outs.append(path.read_bytes())
    ledger.flag("byte_identical", outs[0] == outs[1] and len(outs[0]) > 0)
    clean = main(["verify", "--quiet"])
    faulty = main(["verify", "--quiet", "--inject-fault", "lambda2-sign", "--output", str(tmp_path / "v.txt")])
    ledger.flag("verify_clean_exit_0", clean == 0)
    ledger.flag("verify_fault_nonzero", faulty != 0)
    ledger.finish()
