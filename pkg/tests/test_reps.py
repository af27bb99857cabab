import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covcalc import groups, reps
from covcalc.errors import InvalidInputError
from covcalc.grids import DiskPolynomial, FourierSeries, GaussPoly, circle_grid, hermite_function

REPS = [reps.mock_discrete(256), reps.discrete_series(2), reps.discrete_series(4), reps.schrodinger(64)]
IDS = ["mock", "ds2", "ds4", "schr"]


def basis(rep, k):
    if rep.kind == "mock-discrete":
        return FourierSeries({k - 2: 1.0})
    if rep.kind == "discrete-series":
        return DiskPolynomial.monomial(k)
    return hermite_function(k)


def element(rep, rng):
    if rep.kind == "schrodinger":
        return groups.random_heis(rng, 0.7)
    return groups.random_su11(rng, 0.6)


def values(rep, f):
    return f.sample(rep.space).values


@pytest.mark.parametrize("rep", REPS, ids=IDS)
def test_identity_acts_trivially(rep):
    e = groups.heis_identity() if rep.kind == "schrodinger" else groups.SU11_IDENTITY
    f = basis(rep, 3)
    assert np.array_equal(values(rep, reps.apply(rep, e, f)), values(rep, f))
    assert reps.unitarity_residual(rep, e, f, f) == 0.0


@pytest.mark.parametrize("rep", REPS, ids=IDS)
def test_homomorphism(rep, rng):
    for _ in range(5):
        g1, g2 = element(rep, rng), element(rep, rng)
        f = basis(rep, 2)
        a = values(rep, reps.apply(rep, g1 * g2, f))
        b = values(rep, reps.apply(rep, g1, reps.apply(rep, g2, f)))
        assert np.max(np.abs(a - b)) <= 1e-10


@pytest.mark.parametrize("rep", REPS, ids=IDS)
def test_unitarity_on_canonical_basis(rep, rng):
    for _ in range(10):
        g = element(rep, rng)
        for j in range(5):
            for k in range(5):
                assert reps.unitarity_residual(rep, g, basis(rep, j), basis(rep, k)) <= 1e-6


def test_mock_discrete_unitarity_single_mode(rng):
    rep = reps.mock_discrete(256)
    f = FourierSeries({1: 1.0})
    for _ in range(10):
        assert reps.unitarity_residual(rep, groups.random_su11(rng, 0.7), f, f) <= 1e-10


def test_mock_discrete_moves_vacuum_to_cocycle():
    rep = reps.mock_discrete(64)
    a = 0.3 - 0.4j
    g = groups.su11_section(a).inverse()  # g^{-1} = s(a)
    inv = g.inverse()
    x = circle_grid(64).nodes
    want = 1.0 / (inv.beta.conjugate() * x + inv.alpha.conjugate())
    assert np.allclose(reps.apply(rep, g, reps.vacuum(rep))(x), want, atol=1e-15)


@pytest.mark.parametrize("t", [0.0, 0.4, -1.3, 2.9])
def test_schrodinger_center_acts_by_phase(t):
    rep = reps.schrodinger(64)
    f0 = reps.vacuum(rep)
    moved = reps.apply(rep, groups.HeisElement(t, 0), f0)
    assert np.allclose(values(rep, moved), np.exp(2j * t) * values(rep, f0), atol=1e-15)


@pytest.mark.parametrize(
    "rep, expected",
    [(reps.mock_discrete(64), lambda p: cmath.exp(-1j * p)),
     (reps.discrete_series(3), lambda p: cmath.exp(-3j * p))],
    ids=["mock", "ds3"],
)
@pytest.mark.parametrize("psi", [0.0, 0.7, -2.1])
def test_vacuum_character_su11(rep, expected, psi):
    h = groups.su11_rotation(psi)
    chi = reps.vacuum_character(rep, h)
    assert chi == pytest.approx(expected(psi), abs=1e-15)
    f0 = reps.vacuum(rep)
    moved = values(rep, reps.apply(rep, h, f0))
    assert np.max(np.abs(moved - chi * values(rep, f0))) <= 1e-12


def test_vacuum_character_schrodinger():
    assert reps.vacuum_character(reps.schrodinger(), groups.HeisElement(0.3, 0)) == pytest.approx(cmath.exp(0.6j))


def test_vacuum_character_outside_subgroup():
    with pytest.raises(InvalidInputError):
        reps.vacuum_character(reps.mock_discrete(), groups.su11_section(0.2))
    with pytest.raises(InvalidInputError):
        reps.vacuum_character(reps.schrodinger(), groups.HeisElement(0.3, 0.1))


@pytest.mark.parametrize("rep", REPS, ids=IDS)
def test_vacuum_norm(rep):
    f0 = reps.vacuum(rep).sample(rep.space)
    assert f0.norm() ** 2 == pytest.approx(reps.vacuum_norm_sq(rep), abs=1e-12)


def test_wrong_group_rejected():
    with pytest.raises(InvalidInputError):
        reps.apply(reps.schrodinger(), groups.SU11_IDENTITY, hermite_function(0))
    with pytest.raises(InvalidInputError):
        reps.apply(reps.mock_discrete(), groups.heis_identity(), FourierSeries({0: 1}))


def test_sampled_inputs():
    rep = reps.mock_discrete(64)
    f = FourierSeries({2: 1.0, -1: 0.5})
    s = f.sample(rep.space)
    g = groups.su11_section(0.2)
    # circle samples are interpolated (exact for band-limited data) ...
    moved = reps.apply(rep, g, s)
    assert np.max(np.abs(moved.values - values(rep, reps.apply(rep, g, f)))) <= 1e-12
    # ... while the line and the disk need closed forms
    with pytest.raises(InvalidInputError):
        reps.apply(reps.schrodinger(), groups.heis_identity(), hermite_function(1).sample(reps.schrodinger().space))
    ds = reps.discrete_series(2)
    with pytest.raises(InvalidInputError):
        reps.apply(ds, g, DiskPolynomial.monomial(1).sample(ds.space))


@settings(max_examples=40, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-3, 3), st.integers(0, 5))
def test_schrodinger_closed_form_matches_pointwise_formula(p, q, t, n):
    g = groups.HeisElement(t, complex(p, q))
    f = hermite_function(n)
    x = np.linspace(-4, 4, 9)
    want = np.exp(1j * (2 * t - math.sqrt(2) * q * x + q * p)) * f(x - math.sqrt(2) * p)
    got = reps.apply(reps.schrodinger(), g, f)
    assert isinstance(got, GaussPoly)
    assert np.allclose(got(x), want, atol=1e-12)
