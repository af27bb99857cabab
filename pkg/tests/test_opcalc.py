import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covcalc import groups, opcalc
from covcalc.cmatrix import CMatrix, norm_certificate
from covcalc.errors import (
    DimensionMismatchError,
    DomainError,
    InvalidInputError,
    NormViolationError,
    NumericalError,
    ParseError,
    PoleError,
)
from covcalc.opcalc import BoundaryFunction, parse_function

NILPOTENT = np.array([[0, 0.5], [0, 0]])


def contraction(rng, d, limit=0.8):
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return CMatrix(A / np.linalg.norm(A, 2) * limit * rng.uniform(0.2, 1.0))


def hermitian(rng, d):
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    H = A + A.conj().T
    return H / np.linalg.norm(H, 2)


# norm certificate


def test_norm_certificate_bounds_spectral_norm(rng):
    for d in (1, 2, 4, 7):
        A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        cert = norm_certificate(A)
        true = np.linalg.norm(A, 2)
        # (tr G^64)^(1/128) overshoots by at most a factor d^(1/128)
        assert true <= cert.upper <= true * d ** (1 / 128) * (1 + 1e-12)
        assert cert.estimate <= true * (1 + 1e-12)
        assert cert.estimate == pytest.approx(true, rel=1e-3)


def test_norm_certificate_on_nilpotent():
    cert = norm_certificate(NILPOTENT)
    assert 0.5 <= cert.upper <= 0.5 * (1 + 1e-10)


def test_cmatrix_validation_and_json():
    with pytest.raises(InvalidInputError):
        CMatrix(np.zeros((2, 3)))
    with pytest.raises(InvalidInputError):
        CMatrix([[np.nan]])
    m = CMatrix([[1, 2j], [0.5, -1]])
    assert CMatrix.from_json(m.to_json()).dist(m) == 0
    assert CMatrix.from_json([[1, [0, 2]], [0.5, -1]]).dist(m) == 0
    with pytest.raises(DimensionMismatchError):
        CMatrix.from_json({"dimension": 3, "entries": [[1]]})
    with pytest.raises(DimensionMismatchError):
        m @ CMatrix.identity(3)


# symbols


@pytest.mark.parametrize(
    "src, z, value",
    [("1", 0.3, 1), ("z^2", 0.5j, -0.25), ("1/(1-z/2)", 0.5, 4 / 3), ("2i z + (1-z)(1+z)", 0.1, 0.99 + 0.2j)],
)
def test_parse_function_values(src, z, value):
    assert parse_function(src)(z) == pytest.approx(value, abs=1e-15)


@pytest.mark.parametrize("src, position", [("1/(1-w)", 5), ("z +", 3), ("1/(z-z)", 1)])
def test_parse_function_errors(src, position):
    with pytest.raises(ParseError) as err:
        parse_function(src)
    assert err.value.position == position


@pytest.mark.parametrize(
    "src, inside",
    [("1/(1-z/2)", False), ("1/(z-0.5)", True), ("1/(1-z)", True), ("(z-0.5)/(z-0.5)", False), ("(z-0.5)/(z-0.5)^2", True)],
)
def test_poles(src, inside):
    f = parse_function(src)
    if inside:
        with pytest.raises(PoleError):
            f.check_analytic()
    else:
        f.check_analytic()


def test_taylor_coefficients():
    f = parse_function("1/(1-z/2)")
    assert np.allclose(f.taylor(6), [0.5**k for k in range(7)], atol=1e-15)
    assert np.array_equal(BoundaryFunction.fourier([1, 2, 3]).taylor(4), [1, 2, 3, 0, 0])


# contour calculus


def test_contour_examples():
    t = np.array([[0.3, 0.1], [0.0, -0.2j]])
    one = opcalc.riesz_dunford_contour(BoundaryFunction.one(), t, 256)
    assert one.dist(np.eye(2)) <= 1e-12
    z = opcalc.riesz_dunford_contour(parse_function("z"), NILPOTENT)
    assert z.dist(NILPOTENT) <= 1e-12
    geo = opcalc.riesz_dunford_contour(parse_function("1/(1-z/2)"), NILPOTENT)
    assert geo.dist([[1, 0.25], [0, 1]]) <= 1e-12
    sq = opcalc.riesz_dunford_contour(parse_function("z^2"), np.diag([0.5, -0.3]))
    assert sq.dist(np.diag([0.25, 0.09])) <= 1e-12


def test_contour_matches_oracle(rng):
    for _ in range(20):
        d = int(rng.integers(1, 5))
        t = contraction(rng, d)
        deg = int(rng.integers(0, 9))
        f = BoundaryFunction.fourier(rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1))
        assert opcalc.riesz_dunford_contour(f, t, 512).dist(opcalc.spectral_oracle(f, t)) <= 1e-8


def test_contour_is_independent_of_node_count(rng):
    t = contraction(rng, 3, 0.7)
    f = parse_function("1/(3-z) + z^5")
    assert opcalc.riesz_dunford_contour(f, t, 512).dist(opcalc.riesz_dunford_contour(f, t, 1024)) <= 1e-12


def test_contour_rejects_large_norm_and_poles():
    with pytest.raises(NormViolationError):
        opcalc.riesz_dunford_contour(BoundaryFunction.one(), np.diag([0.96, 0]))
    with pytest.raises(PoleError):
        opcalc.riesz_dunford_contour(parse_function("1/(z-0.2)"), np.diag([0.5, 0]))
    with pytest.raises(InvalidInputError):
        opcalc.riesz_dunford_contour(BoundaryFunction.one(), np.eye(2) * 0.1, N=8)


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=1, max_size=5),
    st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=1, max_size=5),
    st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
)
def test_contour_is_linear(p, q, lam):
    t = np.array([[0.2, 0.3], [-0.1j, 0.4]])
    fp, fq = BoundaryFunction.fourier(p), BoundaryFunction.fourier(q)
    n = max(len(p), len(q))
    both = BoundaryFunction.fourier([lam * (p[k] if k < len(p) else 0) + (q[k] if k < len(q) else 0) for k in range(n)])
    lhs = opcalc.riesz_dunford_contour(both, t, 128).data
    rhs = lam * opcalc.riesz_dunford_contour(fp, t, 128).data + opcalc.riesz_dunford_contour(fq, t, 128).data
    assert np.allclose(lhs, rhs, atol=1e-11 * (1 + abs(lam)) * 10)


# Mobius action on operators


def test_op_mobius_scalar_case():
    a = 0.3
    g = groups.su11_section(a).inverse()
    t = 0.5 * np.eye(2)
    want = groups.mobius_disk(g, 0.5) * np.eye(2)
    assert opcalc.op_mobius(g, t).dist(want) <= 1e-12
    assert opcalc.op_mobius(groups.SU11_IDENTITY, t).dist(t) <= 1e-15


def test_op_mobius_action_and_contraction(rng):
    for _ in range(100):
        g1, g2 = groups.random_su11(rng, 0.7), groups.random_su11(rng, 0.7)
        t = contraction(rng, 3)
        moved = opcalc.op_mobius(g1, t)
        assert moved.norm.upper < 1
        both = opcalc.op_mobius(g1 * g2, t)
        assert both.dist(opcalc.op_mobius(g1, opcalc.op_mobius(g2, t))) <= 1e-9


def test_op_mobius_domain():
    with pytest.raises(DomainError):
        opcalc.op_mobius(groups.SU11_IDENTITY, np.eye(2))


def test_intertwining(rng):
    assert opcalc.intertwine_residual(parse_function("z"), groups.SU11_IDENTITY, contraction(rng, 3, 0.6)) <= 1e-12
    f = BoundaryFunction.fourier({1: 1.0})
    assert opcalc.intertwine_residual(f, groups.random_su11(rng, 0.4), contraction(rng, 3, 0.6)) <= 1e-8
    for _ in range(10):
        f = parse_function("1/(2-z) + z^3 - 0.5i z")
        assert opcalc.intertwine_residual(f, groups.random_su11(rng, 0.4), contraction(rng, 3, 0.6)) <= 1e-6


# disk form


def test_disk_form_diverges_and_regularises(rng):
    t = contraction(rng, 2, 0.5)
    one = BoundaryFunction.one()
    d1 = opcalc.riesz_dunford_disk(one, t, 0.9).drift
    d2 = opcalc.riesz_dunford_disk(one, t, 0.95).drift
    assert 0 < d1 < d2
    zero = opcalc.riesz_dunford_disk(BoundaryFunction.fourier({}), t, 0.9)
    assert np.all(zero.value.data == 0)
    T = np.diag([0.4, -0.3 + 0.2j])
    assert opcalc.disk_regularized(parse_function("z"), T).dist(T) <= 1e-4
    assert opcalc.disk_regularized(parse_function("1/(2-z)"), T).dist(opcalc.spectral_oracle(parse_function("1/(2-z)"), T)) <= 1e-4


def test_disk_cutoff_validated():
    with pytest.raises(InvalidInputError):
        opcalc.riesz_dunford_disk(BoundaryFunction.one(), np.eye(1) * 0.1, 1.0)


# oracle and exponential


def test_oracle_falls_back_to_series_for_defective_matrices():
    rep = opcalc.spectral_oracle_report(parse_function("1/(1-z/2)"), NILPOTENT)
    assert rep.method == "series"
    assert rep.value.dist([[1, 0.25], [0, 1]]) <= 1e-15


@pytest.mark.parametrize(
    "A, expected",
    [
        (np.zeros((2, 2)), np.eye(2)),
        (1j * math.pi * np.array([[0, 1], [1, 0]]), -np.eye(2)),
        (NILPOTENT, np.eye(2) + NILPOTENT),
        (np.diag([1.0, -2.0, 3j]), np.diag(np.exp([1.0, -2.0, 3j]))),
    ],
)
def test_matrix_exp(A, expected):
    assert opcalc.matrix_exp(A).dist(expected) <= 1e-12 * max(1, np.linalg.norm(expected, 2))


def test_matrix_exp_of_large_hermitian(rng):
    H = 30 * hermitian(rng, 4)
    lam, U = np.linalg.eigh(H)
    want = U @ np.diag(np.exp(1j * lam)) @ U.conj().T
    assert opcalc.matrix_exp(1j * H).dist(want) <= 1e-11


# Weyl calculus


def test_weyl_poly_examples(rng):
    T1, T2 = hermitian(rng, 3), hermitian(rng, 3)
    assert opcalc.weyl_poly({(1, 1): 1.0}, [T1, T2]).dist(0.5 * (T1 @ T2 + T2 @ T1)) <= 1e-15
    assert opcalc.weyl_poly({(2,): 1.0}, [T1]).dist(T1 @ T1) <= 1e-15
    sx = np.array([[0, 1], [1, 0]])
    sy = np.array([[0, -1j], [1j, 0]])
    assert np.max(np.abs(opcalc.weyl_poly({(1, 1): 1.0}, [sx, sy]).data)) <= 1e-14
    # x1^2 x2 symmetrises over the three orderings
    want = (T1 @ T1 @ T2 + T1 @ T2 @ T1 + T2 @ T1 @ T1) / 3
    assert opcalc.weyl_poly({(2, 1): 1.0}, [T1, T2]).dist(want) <= 1e-15


def test_weyl_rejects_non_hermitian_and_mismatch():
    with pytest.raises(InvalidInputError):
        opcalc.weyl_poly({(1,): 1.0}, [NILPOTENT])
    with pytest.raises(DimensionMismatchError):
        opcalc.weyl_poly({(1, 1): 1.0}, [np.eye(2)])
    with pytest.raises(DimensionMismatchError):
        opcalc.weyl_poly({(1, 1): 1.0}, [np.eye(2), np.eye(3)])


def test_weyl_integral_single_gaussian(rng):
    T = np.diag(rng.uniform(-1, 1, 4))
    f = opcalc.GaussPolyND.gaussian(1)
    want = np.diag(np.exp(-np.diag(T) ** 2 / 2))
    assert opcalc.weyl_integral(f, [T]).dist(want) <= 1e-8


def test_weyl_integral_commuting_pair(rng):
    A, B = np.diag(rng.uniform(-1, 1, 3)), np.diag(rng.uniform(-1, 1, 3))
    g = opcalc.GaussPolyND({(0, 0): 1.0, (2, 0): 0.5, (1, 1): -1.0}, [[1.0, 0.2], [0.2, 0.8]])
    assert opcalc.weyl_integral(g, [A, B]).dist(opcalc.joint_spectral(g, [A, B])) <= 1e-6


def test_weyl_integral_polynomial_part_matches_symmetrisation(rng):
    # for a polynomial times a very flat Gaussian the integral tends to the symmetrised polynomial
    T1, T2 = 0.3 * hermitian(rng, 2), 0.3 * hermitian(rng, 2)
    f = opcalc.GaussPolyND({(1, 1): 1.0}, 1e-6 * np.eye(2))
    sym = opcalc.weyl_poly({(1, 1): 1.0}, [T1, T2])
    assert opcalc.weyl_integral(f, [T1, T2], n=24).dist(sym) <= 1e-6


def test_weyl_affine_covariance(rng):
    T1, T2 = hermitian(rng, 3), hermitian(rng, 3)
    f = opcalc.GaussPolyND({(0, 0): 1.0, (1, 0): 0.5, (1, 1): -0.25}, [[1.0, 0.3], [0.3, 1.4]])
    for _ in range(10):
        m = rng.normal(size=(2, 2))
        while abs(np.linalg.det(m)) < 0.2:
            m = rng.normal(size=(2, 2))
        m = m / max(1.0, np.linalg.norm(m, 2))
        S = [m[0, 0] * T1 + m[0, 1] * T2, m[1, 0] * T1 + m[1, 1] * T2]
        assert opcalc.weyl_integral(f, S).dist(opcalc.weyl_integral(f.pullback(m), [T1, T2])) <= 1e-6


def test_weyl_integral_unresolved_raises(rng):
    T = 40 * hermitian(rng, 2)
    with pytest.raises(NumericalError):
        opcalc.weyl_integral(opcalc.GaussPolyND.gaussian(1, [[0.01]]), [T], n=16)


def test_gausspoly_validation():
    with pytest.raises(InvalidInputError):
        opcalc.GaussPolyND({(0,): 1.0}, [[-1.0]])
    with pytest.raises(DimensionMismatchError):
        opcalc.GaussPolyND({(1,): 1.0}, np.eye(2))
    with pytest.raises(InvalidInputError):
        opcalc.GaussPolyND.gaussian(2).pullback(np.zeros((2, 2)))
    with pytest.raises(InvalidInputError):
        opcalc.joint_spectral(opcalc.GaussPolyND.gaussian(2), [np.diag([1.0, 0.0]), np.array([[0, 1.0], [1.0, 0]])])
