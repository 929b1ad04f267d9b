"""Self-check suite run by ``qutritlab verify``.

Each group evaluates a set of invariants and records the largest residual
against its tolerance. A fault can be injected into the Gell-Mann fixture
to confirm that the suite detects it.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import adjoint, bloch, generators, lindblad, linalg, phase, polarization

SEED = 20240611
FAULTS = ("lambda2-sign",)


@dataclass
class Check:
    name: str
    residual: float
    tol: float
    detail: str = ""

    @property
    def passed(self):
        return bool(self.residual <= self.tol)


@dataclass
class GroupResult:
    module: str
    group: str
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self):
        return max((c.residual for c in self.checks), default=0.0)

    def add(self, name, residual, tol, detail=""):
        self.checks.append(Check(name, float(residual), tol, detail))


def _gell_mann(fault):
    lam = generators.gell_mann_matrices()
    if fault == "lambda2-sign":
        lam[1] = -lam[1]
    elif fault is not None:
        raise ValueError(f"unknown fault {fault!r}; choose from {FAULTS}")
    return lam


def check_linalg(rng):
    g = GroupResult("linalg-core", "linalg")
    inv = trc = uni = law = det = 0.0
    for _ in range(20):
        m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        inv = max(inv, linalg.max_abs_diff(linalg.dagger(linalg.dagger(m)), m))
        trc = max(trc, abs(linalg.trace(m @ a) - linalg.trace(a @ m)))
        h = linalg.random_hermitian(rng, 3, 10.0)
        u = linalg.expm_hermitian_phase(h, 1.0)
        uni = max(uni, linalg.max_abs_diff(u @ u.conj().T, np.eye(3)))
        s, t = rng.uniform(-2, 2, 2)
        law = max(law, linalg.max_abs_diff(
            linalg.expm_hermitian_phase(h, s + t),
            linalg.expm_hermitian_phase(h, s) @ linalg.expm_hermitian_phase(h, t),
        ))
        h0 = h - np.trace(h) / 3 * np.eye(3)
        det = max(det, abs(np.linalg.det(linalg.expm_hermitian_phase(h0, s)) - 1.0))
    g.add("dagger involution", inv, 0.0)
    g.add("trace cyclicity", trc, 1e-12)
    g.add("exp unitarity", uni, 1e-10)
    g.add("one-parameter group law", law, 1e-9)
    g.add("unimodularity (traceless)", det, 1e-9)
    return g


def check_generators(lam):
    g = GroupResult("generators", "algebra")
    eye = np.eye(3)
    ortho = max(
        abs(np.trace(lam[r] @ lam[s]) - 2.0 * (r == s)) for r in range(8) for s in range(8)
    )
    g.add("trace orthogonality", ortho, 1e-12)
    g.add("tracelessness", max(abs(np.trace(m)) for m in lam), 1e-12)
    g.add("product identity", generators.product_identity_residual(lam), 1e-12)
    g.add("pauli identity", generators.pauli_identity_residual(), 1e-12)
    c1, c2 = generators.casimirs()
    g.add("c1 = 16/3 I", linalg.max_abs_diff(c1, 16.0 / 3.0 * eye), 1e-12)
    comm = max(
        max(linalg.max_abs_diff(linalg.commutator(c, m), np.zeros((3, 3))) for m in lam)
        for c in (c1, c2)
    )
    g.add("casimirs commute", comm, 1e-10)
    return g


def check_structure(lam):
    g = GroupResult("generators", "structure-constants")
    sc = generators.structure_constants_from(lam)
    bad = generators.reference_table_mismatches(sc)
    worst = max((r for _, r in bad), default=0.0)
    names = ", ".join(f"{label} ({res:.1e})" for label, res in bad[:6])
    g.add("tabulated f and d components", worst, 1e-12, names)
    asym = max(
        np.max(np.abs(sc.f + sc.f.transpose(perm)))
        for perm in ((1, 0, 2), (0, 2, 1), (2, 1, 0))
    )
    sym = max(
        np.max(np.abs(sc.d - sc.d.transpose(perm)))
        for perm in ((1, 0, 2), (0, 2, 1), (2, 1, 0))
    )
    g.add("f antisymmetry", asym, 1e-12)
    g.add("d symmetry", sym, 1e-12)
    return g


def check_bloch(rng):
    g = GroupResult("bloch-map", "bloch")
    rp = rt = rexpr = inv = 0.0
    for _ in range(100):
        rho = bloch.random_density(rng, 3, rank=int(rng.integers(1, 4)))
        n = bloch.bloch_from_density(rho)
        r = bloch.bloch_radius(n)
        rp = max(rp, abs(bloch.purity(rho) - (1 / 3 + 2 / 3 * r * r)))
        rt = max(rt, np.max(np.abs(bloch.bloch_from_density(bloch.density_from_bloch(n)) - n)))
        rexpr = max(rexpr, abs(bloch.radius_expression(rho) - r * r))
        u = linalg.random_unitary(rng, 3)
        inv = max(inv, abs(bloch.bloch_radius(bloch.bloch_from_density(u @ rho @ u.conj().T)) - r))
    g.add("radius-purity identity", rp, 1e-10)
    g.add("density round trip", rt, 1e-12)
    g.add("matrix-entry radius expression", rexpr, 1e-10)
    g.add("unitary invariance of radius", inv, 1e-10)
    grid = np.linspace(0.1, 2 * np.pi - 0.1, 3)
    mesh = np.meshgrid(grid, grid, grid, grid, grid, grid, grid, indexing="ij")
    angles = [m.ravel() for m in mesh]
    r = rng.uniform(0.0, 1.0, angles[0].size)
    n_ray = bloch.bloch_from_ray(bloch.ray_from_angles(r, *angles))
    n_cf = bloch.bloch_closed_form(r, *angles)
    g.add("closed-form Bloch components", np.max(np.abs(n_ray - n_cf)), 1e-12)
    g.add("sum n^2 = r^2", np.max(np.abs(np.sum(n_ray**2, axis=1) - r**2)), 1e-12)
    return g


def check_adjoint(rng):
    g = GroupResult("adjoint-rep", "adjoint")
    orth = det = hom = cov = prod = dot = 0.0
    for _ in range(50):
        u, v = linalg.random_unitary(rng, 3), linalg.random_unitary(rng, 3)
        ru, rv = adjoint.adjoint_so8(u), adjoint.adjoint_so8(v)
        orth = max(orth, np.max(np.abs(ru @ ru.T - np.eye(8))))
        det = max(det, abs(np.linalg.det(ru) - 1.0))
        hom = max(hom, np.max(np.abs(ru @ rv - adjoint.adjoint_so8(u @ v))))
        psi = rng.normal(size=3) + 1j * rng.normal(size=3)
        cov = max(cov, np.max(np.abs(bloch.bloch_from_ray(u @ psi) - ru @ bloch.bloch_from_ray(psi))))
        a, b = rng.normal(size=8), rng.normal(size=8)
        prod = max(
            prod,
            np.max(np.abs(adjoint.octet_wedge(ru @ a, ru @ b) - ru @ adjoint.octet_wedge(a, b))),
            np.max(np.abs(adjoint.octet_star(ru @ a, ru @ b) - ru @ adjoint.octet_star(a, b))),
        )
        dot = max(dot, abs(adjoint.octet_dot(ru @ a, ru @ b) - adjoint.octet_dot(a, b)))
        w = linalg.random_unitary(rng, 2)
        r3 = adjoint.adjoint_so3(w)
        chi = rng.normal(size=2) + 1j * rng.normal(size=2)
        cov = max(cov, np.max(np.abs(bloch.bloch3_from_spinor(w @ chi) - r3 @ bloch.bloch3_from_spinor(chi))))
    g.add("orthogonality", orth, 1e-10)
    g.add("unit determinant", det, 1e-9)
    g.add("homomorphism", hom, 1e-9)
    g.add("Bloch covariance", cov, 1e-10)
    g.add("octet product covariance", prod, 1e-9)
    g.add("dot invariance", dot, 1e-10)
    return g


def check_lindblad(rng):
    g = GroupResult("lindblad-engine", "lindblad")
    herm = tr0 = 0.0
    for _ in range(20):
        h = linalg.random_hermitian(rng, 3, 2.0)
        jumps = [rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(2)]
        model = lindblad.LindbladModel(h, jumps)
        rho = bloch.random_density(rng, 3)
        d = lindblad.lindblad_rhs(model, rho)
        herm = max(herm, linalg.hermiticity_violation(d))
        tr0 = max(tr0, abs(np.trace(d)))
    g.add("rhs Hermitian", herm, 1e-12)
    g.add("rhs traceless", tr0, 1e-12)
    p = lindblad.DephasingParams(tuple(np.ones(3) / math.sqrt(3)), 1.0, 0.1)
    model = lindblad.dephasing_model(p.omega, p.eta)
    tr = lindblad.evolve(model, p.rho0, 10.0, 1e-3, 100)
    err = max(
        np.max(np.abs(rho - lindblad.analytic_dephasing_solution(p, t)))
        for t, rho in zip(tr.times, tr.states)
    )
    g.add("RK4 vs analytic dephasing", err, 1e-6)
    g.add("trace drift", tr.max_trace_drift, 1e-9)
    ratio = max(
        max(
            abs(abs(rho[0, 1]) / abs(p.rho0[0, 1]) - math.exp(-2 * p.eta * t)),
            abs(abs(rho[0, 2]) / abs(p.rho0[0, 2]) - math.exp(-p.eta * t / 2)),
        )
        for t, rho in zip(tr.times, tr.states)
    )
    g.add("coherence decay factors", ratio, 1e-9)
    obs = lindblad.trajectory_observables(tr)
    mono = max(0.0, float(np.max(np.diff(obs.r))), float(np.max(np.diff(obs.purity))))
    g.add("radius and purity nonincreasing", mono, 1e-9)
    return g


def check_phase():
    g = GroupResult("geometric-phase", "phase")
    s = 1 / math.sqrt(2)
    bp = phase.bargmann_phase([[1, 0, 0], [s, s, 0], [s, 1j * s, 0]])
    g.add("Bargmann triple", abs(-bp + math.pi / 4), 1e-12)
    base = bloch.BlochParameters(1.0, math.pi / 3, math.pi / 4)
    loop = phase.ParameterLoop.sweep(base, 10000, xi=(0.0, 2 * math.pi))
    tr = loop.ray_trajectory()
    routes = [
        phase.pancharatnam_phase(tr, closed=True).raw,
        phase.phase_decomposition(tr).geometric_raw,
        phase.berry_phase_quasicyclic(loop),
    ]
    g.add("xi-loop routes vs -pi/2", max(abs(x + math.pi / 2) for x in routes), 1e-3)
    beta = np.linspace(0, 2 * math.pi, tr.rays.shape[0])
    gauged = phase.phase_decomposition(phase.gauge_transform(tr, beta)).geometric
    g.add("gauge invariance", abs(phase.wrap_angle(gauged - phase.phase_decomposition(tr).geometric)), 2e-3)
    omega = 1.0
    p0 = bloch.BlochParameters(1.0, math.pi / 3, math.pi / 6)
    h = 0.5 * omega * generators.gell_mann_set().generator(3)
    times = np.linspace(0, 4 * math.pi / omega, 10001)
    aa = phase.phase_decomposition(
        phase.unitary_ray_trajectory(h, bloch.ray_from_parameters(p0), times)
    ).geometric
    expected = 2 * math.pi * math.sin(p0.theta) ** 2 * math.cos(2 * p0.phi)
    g.add("unitary cyclic evolution", abs(phase.wrap_angle(aa - expected)), 1e-3)
    return g


def check_polarization(rng):
    g = GroupResult("polarization", "polarization")
    eps = generators.levi_civita()
    alg = ladder = cas = 0.0
    for n_max in range(5):
        ops = polarization.stokes_operators(polarization.build_basis(n_max))
        sv = ops.vector
        for k in range(3):
            cas = max(cas, np.max(np.abs(linalg.commutator(ops.s0, sv[k]))))
            for l in range(3):
                rhs = 2j * sum(eps[k, l, m] * sv[m] for m in range(3))
                alg = max(alg, np.max(np.abs(linalg.commutator(sv[k], sv[l]) - rhs)))
        ladder = max(ladder, np.max(np.abs(linalg.commutator(ops.s_plus, ops.s_minus) - 4 * ops.s3)))
    g.add("Stokes commutators", alg, 1e-12)
    g.add("[S+, S-] = 4 S3", ladder, 1e-12)
    g.add("[S0, Si] = 0", cas, 1e-12)
    basis = polarization.build_basis(2)
    ops = polarization.stokes_operators(basis)
    worst = 0.0
    for _ in range(100):
        psi = np.zeros(basis.dim, dtype=complex)
        idx = basis.block_indices(2)
        psi[idx] = rng.normal(size=3) + 1j * rng.normal(size=3)
        psi /= np.linalg.norm(psi)
        worst = max(worst, -polarization.uncertainty_check(np.outer(psi, psi.conj()), ops))
    g.add("uncertainty relation", worst, 1e-9)
    block = polarization.build_block(1)
    bops = polarization.stokes_operators(block)
    m = polarization.PolarizationModel("atomic_bath", gamma=0.05, omega=1.0)
    s0 = (0.3, 0.4, 0.5)
    rho = polarization.one_photon_state(s0, block)
    d = lindblad.lindblad_rhs(polarization.build_model(m, block), rho)
    e, de = polarization.expectations(rho, bops), polarization.expectations(d, bops)
    g.add("atomic-bath rates", max(abs(de[1] + 8 * m.gamma * e[1]), abs(de[3] + 16 * m.gamma * e[3])), 1e-9)
    tr = lindblad.evolve(polarization.build_model(m, block), rho, 10.0, 1e-3, 100)
    perr = max(
        abs(polarization.degree_of_polarization(r, bops) - polarization.analytic_polarization_decay(m, s0, t))
        for t, r in zip(tr.times, tr.states)
    )
    g.add("atomic-bath P(t)", perr, 1e-6)
    return g


def run(fault=None, seed=SEED):
    """Run every group; returns a list of :class:`GroupResult`."""
    lam = _gell_mann(fault)
    rng = np.random.default_rng(seed)
    return [
        check_linalg(rng),
        check_generators(lam),
        check_structure(lam),
        check_bloch(rng),
        check_adjoint(rng),
        check_lindblad(rng),
        check_phase(),
        check_polarization(rng),
    ]


def report(results):
    """Text report: one line per group plus one line per failed property."""
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status}  {r.module}/{r.group}  max residual {r.max_residual:.3e}")
        for c in r.checks:
            if not c.passed:
                extra = f"  [{c.detail}]" if c.detail else ""
                lines.append(
                    f"      {r.module}: {c.name}: residual {c.residual:.3e} > tol {c.tol:.0e}{extra}"
                )
    n_ok = sum(r.passed for r in results)
    lines.append(f"verify: {n_ok}/{len(results)} groups passed")
    return "\n".join(lines)
