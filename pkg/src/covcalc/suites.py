"""Verification suites behind ``covcalc verify``.

Every check is a residual compared with a fixed tolerance.  Random inputs
come from ``numpy.random.default_rng(seed)`` so reports are reproducible.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import cstrans as cs
from . import groups, opcalc, qplane, reps
from .cmatrix import CMatrix
from .grids import DiskPolynomial, FourierSeries, hermite_function, inner_product
from .io import Check

SUITES = ("groups", "reps", "cstrans", "qplane", "opcalc")


def _max(values) -> float:
    return float(max(values, default=0.0))


def suite_groups(rng: np.random.Generator) -> list[Check]:
    H = groups.HeisElement
    lhs = groups.heis_mul(H(0, 1), H(0, 1j))
    rhs = groups.heis_mul(groups.heis_mul(H(1, 0), H(0, 1j)), H(0, 1))
    weyl = max(abs(lhs.t - 0.5), abs(lhs.z1 - (1 + 1j)), abs(rhs.t - 0.5), abs(rhs.z1 - (1 + 1j)))
    assoc = []
    for _ in range(1000):
        g1, g2, g3 = (groups.random_heis(rng, 2.0) for _ in range(3))
        a = (g1 * g2) * g3
        b = g1 * (g2 * g3)
        assoc.append(max(abs(a.t - b.t), abs(a.z1 - b.z1)))
    roundtrip, left, orbit, inv = [], [], [], []
    for _ in range(100):
        g = groups.random_su11(rng, 0.9)
        a, psi = groups.su11_decompose(g)
        rebuilt = groups.su11_section(a) * groups.su11_rotation(psi)
        roundtrip.append(float(np.max(np.abs(rebuilt.matrix - g.matrix))))
        g2 = groups.random_su11(rng, 0.9)
        z = 0.95 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        left.append(abs(groups.mobius_disk(g * g2, z) - groups.mobius_disk(g, groups.mobius_disk(g2, z))))
        w = np.exp(2j * np.pi * rng.uniform())
        orbit.append(abs(abs(groups.mobius_disk(g, w)) - 1))
        inv.append(float(np.max(np.abs((g * g.inverse()).matrix - np.eye(2)))))
    return [
        Check("weyl_relation", weyl, 1e-15),
        Check("heis_associativity", _max(assoc), 1e-13),
        Check("su11_decompose_roundtrip", _max(roundtrip), 1e-12),
        Check("mobius_left_action", _max(left), 1e-11),
        Check("circle_orbit_preserved", _max(orbit), 1e-12),
        Check("su11_inverse", _max(inv), 1e-12),
    ]


def _basis(rep: reps.Representation, k: int):
    if rep.kind == "mock-discrete":
        return FourierSeries({k - 3: 1.0})
    if rep.kind == "discrete-series":
        return DiskPolynomial.monomial(k)
    return hermite_function(k)


def suite_reps(rng: np.random.Generator) -> list[Check]:
    checks = []
    for rep in (reps.mock_discrete(256), reps.discrete_series(2), reps.discrete_series(3), reps.schrodinger(64)):
        name = rep.kind if rep.kind != "discrete-series" else f"discrete-series-m{rep.m}"
        draw = (lambda: groups.random_heis(rng, 0.7)) if rep.kind == "schrodinger" else (lambda: groups.random_su11(rng, 0.5))
        unit, homo = [], []
        for _ in range(5):
            g1, g2 = draw(), draw()
            for k in range(4):
                f = _basis(rep, k)
                unit.append(reps.unitarity_residual(rep, g1, f, _basis(rep, (k + 1) % 4)))
                unit.append(reps.unitarity_residual(rep, g1, f, f))
            f = _basis(rep, 2)
            a = reps.apply(rep, g1 * g2, f).sample(rep.space).values
            b = reps.apply(rep, g1, reps.apply(rep, g2, f)).sample(rep.space).values
            homo.append(float(np.max(np.abs(a - b))))
        if rep.kind == "schrodinger":
            h = groups.HeisElement(0.7, 0)
        else:
            h = groups.su11_rotation(0.7)
        f0 = reps.vacuum(rep)
        moved = reps.apply(rep, h, f0).sample(rep.space).values
        eig = float(np.max(np.abs(moved - reps.vacuum_character(rep, h) * f0.sample(rep.space).values)))
        checks += [
            Check(f"{name}.unitarity", _max(unit), 1e-6),
            Check(f"{name}.homomorphism", _max(homo), 1e-10),
            Check(f"{name}.vacuum_character", eig, 1e-12),
        ]
    return checks


def _points(rng, n: int, radius: float) -> np.ndarray:
    return radius * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))


def hardy_checks(rng: np.random.Generator) -> list[Check]:
    th = cs.hardy(256)
    a = _points(rng, 20, 0.9)
    err = _max(np.max(np.abs(cs.analytic_extension(th, FourierSeries({n: 1.0}), a) - a**n)) for n in range(17))
    anti = _max(np.max(np.abs(cs.reduced_transform(th, FourierSeries({-n: 1.0}), a))) for n in range(1, 17))
    grid = th.x_grid
    mode = []
    for n in range(-8, 9):
        p = cs.project(th, FourierSeries({n: 1.0})).values
        want = FourierSeries({n: 1.0}).sample(grid).values if n >= 0 else 0
        mode.append(float(np.max(np.abs(p - want))))
    f = _random_fourier(rng, 12)
    g = _random_fourier(rng, 12)
    Pf = cs.project(th, f)
    idem = float(np.max(np.abs(cs.project(th, Pf).values - Pf.values)))
    adj = abs(inner_product(Pf, g.sample(grid)) - inner_product(f.sample(grid), cs.project(th, g)))
    return [
        Check("hardy.monomials", err, 1e-8),
        Check("hardy.anti_analytic_annihilated", anti, 1e-10),
        Check("szego.mode_truncation", _max(mode), 1e-12),
        Check("szego.idempotent", idem, 1e-8),
        Check("szego.self_adjoint", adj, 1e-8),
    ]


def _random_fourier(rng, K: int) -> FourierSeries:
    return FourierSeries({k: complex(rng.normal(), rng.normal()) / (1 + abs(k)) for k in range(-K, K + 1)})


def bergman_checks(rng: np.random.Generator, ms=(2, 3, 4, 5)) -> list[Check]:
    checks = []
    for m in ms:
        th = cs.bergman(m)
        rt, kill = [], []
        for n in range(9):
            f = DiskPolynomial.monomial(n)
            back = cs.inverse_transform(th, cs.reduced_transform(th, f, method="series"))
            diff = back - f.sample(th.x_grid)
            rt.append(diff.norm() / f.sample(th.x_grid).norm())
        for n in range(1, 9):
            kill.append(cs.project(th, DiskPolynomial.monomial(n, conjugate=True)).norm())
        a = _points(rng, 8, 0.6)
        f = DiskPolynomial({(2, 0): 1.0, (0, 1): 0.5, (1, 1): -0.25j})
        dual = float(np.max(np.abs(cs.reduced_transform(th, f, a) - cs.reduced_transform(th, f, a, "series"))))
        checks += [
            Check(f"bergman.m{m}.roundtrip", _max(rt), 1e-6),
            Check(f"bergman.m{m}.projection_kills_conj", _max(kill), 1e-8),
            Check(f"bergman.m{m}.quadrature_vs_series", dual, 1e-8),
        ]
    return checks


def segal_bargmann_checks(rng: np.random.Generator) -> list[Check]:
    th = cs.segal_bargmann()
    z = _points(rng, 30, 2.5)
    leak = []
    for n in range(7):
        v = cs.reduced_transform(th, hermite_function(n), z)
        want = np.exp(-np.abs(z) ** 2 / 2) * z**n / math.sqrt(math.factorial(n))
        leak.append(float(np.max(np.abs(v - want))))
    w = _points(rng, 30, 2.5)
    kern = float(np.max(np.abs(cs.scaled_kernel(th, z, w) - np.exp(-np.abs(z) ** 2 + w * np.conj(z)))))
    cr = _max(cs.cr_residual(th, cs.transform_function(th, hermite_function(n)), h=1e-3).residual for n in range(7))
    ident = _max(
        np.max(np.abs(cs.project(th, hermite_function(n)).values - hermite_function(n).sample(th.x_grid).values))
        for n in range(7)
    )
    return [
        Check("sb.hermite_to_monomial", _max(leak), 1e-8),
        Check("sb.scaled_kernel", kern, 1e-12),
        Check("sb.cauchy_riemann_dirac", cr, 1e-6),
        Check("sb.projection_identity", ident, 1e-8),
    ]


def _theory_inputs(th: cs.Theory):
    if th.name == "hardy":
        return FourierSeries({0: 0.5, 1: 1.0, 3: -0.3j, -2: 0.2})
    if th.name == "bergman":
        return DiskPolynomial({(0, 0): 0.5, (2, 0): 1.0, (1, 1): 0.3j})
    return hermite_function(0).scaled(0.5) + hermite_function(3)


def intertwining_checks(rng: np.random.Generator, n_elements: int = 10) -> list[Check]:
    checks = []
    for th in (cs.hardy(256), cs.bergman(3), cs.segal_bargmann()):
        f = _theory_inputs(th)
        sb = th.name == "segal-bargmann"
        draw = (lambda: groups.random_heis(rng, 0.6)) if sb else (lambda: groups.random_su11(rng, 0.5))
        wav, rho = [], []
        Cf = cs.transform_function(th, f)
        pts = _points(rng, 6, 1.5 if sb else 0.6)
        for _ in range(n_elements):
            g, g2 = draw(), draw()
            moved = reps.apply(th.rep, g, f)
            wav.append(abs(cs.wavelet_full(th, moved, g2) - cs.wavelet_full(th, f, g.inverse() * g2)))
            lhs = cs.apply_rho(th, g, Cf)(pts)
            rhs = cs.reduced_transform(th, moved, pts)
            rho.append(float(np.max(np.abs(lhs - rhs))))
        checks += [
            Check(f"{th.name}.wavelet_intertwining", _max(wav), 1e-8),
            Check(f"{th.name}.rho_C_equals_C_pi", _max(rho), 1e-6),
        ]
    return checks


def suite_cstrans(rng: np.random.Generator) -> list[Check]:
    return hardy_checks(rng) + bergman_checks(rng) + segal_bargmann_checks(rng) + intertwining_checks(rng)


def suite_qplane(rng: np.random.Generator) -> list[Check]:
    report = qplane.verify_mq2()
    clock = []
    for n in range(2, 9):
        X, Y, q = qplane.clock_shift(n)
        clock.append(float(np.linalg.norm(X.data @ Y.data - q * Y.data @ X.data, 2)))
    hom = _max(qplane.identity_residual(qplane.random_ncpoly(rng), n) for _ in range(50) for n in (2, 3, 5))
    rel = qplane.manin_relations()
    trip = 0.0
    for _ in range(20):
        p = qplane.random_ncpoly(rng, "xyabcd")
        if qplane.parse_nc(str(p)) != p:
            trip = 1.0
        nf = qplane.normal_order(p, rel)
        if qplane.normal_order(nf, rel) != nf:
            trip = 1.0
    return [
        Check("mq2.forward_remainder_zero", 0.0 if all(r == "0" for r in report.remainders.values()) else 1.0, 0.0,
              detail=report.remainders),
        Check("mq2.converse_six_relations", abs(report.rank - 6) + (0 if report.matches_six else 1), 0.0,
              detail=report.extracted),
        Check("mq2.classical_limit_commutative", 0.0 if report.classical_commutative else 1.0, 0.0),
        Check("clock_shift.residual", _max(clock), 1e-14),
        Check("clock_shift.evaluation_homomorphism", hom, 1e-12),
        Check("nc.parse_print_and_idempotence", trip, 0.0),
    ]


def random_contraction(rng: np.random.Generator, d: int, limit: float = 0.8) -> CMatrix:
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return CMatrix(A / np.linalg.norm(A, 2) * limit * rng.uniform(0.2, 1.0))


def random_hermitian(rng: np.random.Generator, d: int, scale: float = 1.0) -> np.ndarray:
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    H = A + A.conj().T
    return scale * H / np.linalg.norm(H, 2)


def calculus_checks(rng: np.random.Generator) -> list[Check]:
    poly, ident = [], []
    for _ in range(20):
        d = int(rng.integers(1, 5))
        t = random_contraction(rng, d)
        deg = int(rng.integers(0, 9))
        f = opcalc.BoundaryFunction.fourier(rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1))
        poly.append(opcalc.riesz_dunford_contour(f, t, 512).dist(opcalc.spectral_oracle(f, t)))
        ident.append(opcalc.riesz_dunford_contour(opcalc.BoundaryFunction.one(), t, 512).dist(np.eye(d)))
    inter = []
    for k in range(10):
        f = opcalc.BoundaryFunction.fourier({1: 1.0}) if k == 0 else opcalc.parse_function("1/(2-z) + z^3 - 0.5i z")
        inter.append(opcalc.intertwine_residual(f, groups.random_su11(rng, 0.4), random_contraction(rng, 3, 0.6)))
    t = random_contraction(rng, 2, 0.5)
    one = opcalc.BoundaryFunction.one()
    d1 = opcalc.riesz_dunford_disk(one, t, 0.9).drift
    d2 = opcalc.riesz_dunford_disk(one, t, 0.95).drift
    T = CMatrix(np.diag([0.4, -0.3 + 0.2j]))
    reg = opcalc.disk_regularized(opcalc.parse_function("z"), T).dist(T)
    return [
        Check("contour.polynomial_vs_oracle", _max(poly), 1e-8),
        Check("contour.unit", _max(ident), 1e-12),
        Check("contour.intertwining", _max(inter), 1e-6),
        Check("disk.drift_increasing", 0.0 if d2 > d1 > 0 else 1.0, 0.0, detail={"drift_0.9": d1, "drift_0.95": d2}),
        Check("disk.regularized_identity_symbol", reg, 1e-4),
    ]


def weyl_checks(rng: np.random.Generator) -> list[Check]:
    T1, T2 = random_hermitian(rng, 3), random_hermitian(rng, 3)
    sym = opcalc.weyl_poly({(1, 1): 1.0}, [T1, T2]).dist(0.5 * (T1 @ T2 + T2 @ T1))
    sx = np.array([[0, 1], [1, 0]])
    sy = np.array([[0, -1j], [1j, 0]])
    pauli = float(np.max(np.abs(opcalc.weyl_poly({(1, 1): 1.0}, [sx, sy]).data)))
    A = np.diag(rng.uniform(-1, 1, size=3))
    B = np.diag(rng.uniform(-1, 1, size=3))
    g = opcalc.GaussPolyND({(0, 0): 1.0}, np.eye(2))
    joint = opcalc.weyl_integral(g, [A, B]).dist(opcalc.joint_spectral(g, [A, B]))
    f = opcalc.GaussPolyND({(0, 0): 1.0, (1, 0): 0.5, (1, 1): -0.25}, [[1.0, 0.3], [0.3, 1.4]])
    aff = []
    for _ in range(10):
        m = rng.normal(size=(2, 2))
        while abs(np.linalg.det(m)) < 0.2:
            m = rng.normal(size=(2, 2))
        m = m / max(1.0, np.linalg.norm(m, 2))
        S = [m[0, 0] * T1 + m[0, 1] * T2, m[1, 0] * T1 + m[1, 1] * T2]
        aff.append(opcalc.weyl_integral(f, S).dist(opcalc.weyl_integral(f.pullback(m), [T1, T2])))
    return [
        Check("weyl.symmetrization", sym, 1e-14),
        Check("weyl.pauli_pair", pauli, 1e-14),
        Check("weyl.commuting_pair_vs_joint_oracle", joint, 1e-6),
        Check("weyl.affine_covariance", _max(aff), 1e-6),
    ]


def suite_opcalc(rng: np.random.Generator) -> list[Check]:
    return calculus_checks(rng) + weyl_checks(rng)


_RUNNERS: dict[str, Callable[[np.random.Generator], list[Check]]] = {
    "groups": suite_groups,
    "reps": suite_reps,
    "cstrans": suite_cstrans,
    "qplane": suite_qplane,
    "opcalc": suite_opcalc,
}


def run_suite(name: str, seed: int = 0, tolerance_scale: float = 1.0) -> list[Check]:
    """Run one suite (or ``"all"``); each suite gets its own seeded generator."""
    names = SUITES if name == "all" else (name,)
    out = []
    for n in names:
        if n not in _RUNNERS:
            raise KeyError(n)
        rng = np.random.default_rng([seed, SUITES.index(n)])
        for c in _RUNNERS[n](rng):
            c.name = f"{n}.{c.name}"
            if tolerance_scale != 1.0:
                c.tolerance *= tolerance_scale
                c.ok = bool(np.isfinite(c.value) and c.value <= c.tolerance)
            out.append(c)
    return out
