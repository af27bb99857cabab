"""The three unitary representations and their vacuum vectors.

``mock-discrete``
    SU(1,1) on ``L2(circle, dphi/2pi)``:
    ``[pi_g f](x) = (conj(b) x + conj(a))^{-1} f((a x + b)/(conj(b) x + conj(a)))``
    where ``(a, b)`` are the entries of ``g^{-1}``.
``discrete-series(m)``
    SU(1,1) on ``L2(disk, 4^{1-m}(1-|w|^2)^{m-2} dw)`` with the cocycle raised
    to the power ``m``.
``schrodinger``
    ``H^1`` on ``L2(R)``:
    ``[pi_(t,z) f](x) = e^{i(2t - sqrt2 q x + q p)} f(x - sqrt2 p)``,
    ``z = p + i q``.

Using ``g^{-1}`` entries (see :func:`covcalc.groups.action_entries`) makes
every ``pi`` a homomorphism.  With this convention the compact subgroup acts on
the vacuum by ``chi(h_psi) = e^{-i psi}`` (mock) and ``e^{-i m psi}`` (discrete
series), and the centre of ``H^1`` by ``chi(t, 0) = e^{2 i t}``;
:func:`vacuum_character` reports whatever the implemented formulas produce.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import groups
from .errors import DomainError, InvalidInputError
from .grids import (
    ClosedForm,
    DiskPolynomial,
    Evaluable,
    FourierSeries,
    GaussPoly,
    Grid,
    SampledFunction,
    circle_grid,
    circle_interpolant,
    disk_grid,
    inner_product,
    line_grid,
)

KINDS = ("mock-discrete", "discrete-series", "schrodinger")
_DOMAIN = {"mock-discrete": "circle", "discrete-series": "disk", "schrodinger": "line"}


@dataclass(frozen=True, eq=False)
class Representation:
    kind: str
    m: int = 1
    space: Optional[Grid] = field(default=None)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown representation kind {self.kind!r}")
        if self.kind == "discrete-series" and self.m < 2:
            raise InvalidInputError(f"discrete series needs m >= 2, got {self.m}")
        space = self.space
        if space is None:
            space = default_space(self.kind, self.m)
        if space.domain != _DOMAIN[self.kind]:
            raise DomainError(f"{self.kind} acts on {_DOMAIN[self.kind]} functions, grid is {space.domain}")
        object.__setattr__(self, "space", space)

    @property
    def domain(self) -> str:
        return _DOMAIN[self.kind]

    def describe(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == "discrete-series":
            d["m"] = self.m
        return d


def default_space(kind: str, m: int = 2) -> Grid:
    if kind == "mock-discrete":
        return circle_grid(256)
    if kind == "discrete-series":
        return disk_grid(64, 256, "weighted", 1.0, m)
    return line_grid(64)


def mock_discrete(N: int = 256) -> Representation:
    return Representation("mock-discrete", space=circle_grid(N))


def discrete_series(m: int = 2, Nr: int = 64, Ntheta: int = 256) -> Representation:
    return Representation("discrete-series", m, disk_grid(Nr, Ntheta, "weighted", 1.0, m))


def schrodinger(N: int = 64) -> Representation:
    return Representation("schrodinger", space=line_grid(N))


def _check_group(rep: Representation, g):
    if rep.kind == "schrodinger":
        if not isinstance(g, groups.HeisElement):
            raise InvalidInputError("Schrodinger representation needs a Heisenberg element")
        if g.n != 1:
            raise InvalidInputError("only the H^1 Schrodinger representation is implemented")
    elif not isinstance(g, groups.SU11Element):
        raise InvalidInputError(f"{rep.kind} needs an SU(1,1) element")


def cocycle(g: groups.SU11Element, x, power: int = 1):
    """``(conj(b) x + conj(a))^{-power}`` with ``(a, b)`` the entries of ``g^{-1}``."""
    a, b = groups.action_entries(g)
    den = b.conjugate() * np.asarray(x, dtype=complex) + a.conjugate()
    # |conj(a)| > |conj(b)| for a valid element, so den != 0 on the closed disk
    assert np.all(np.abs(den) > 0)
    return den ** (-power)


def apply(rep: Representation, g, f):
    """``pi_g f``.  Closed forms map to closed forms."""
    _check_group(rep, g)
    if rep.kind == "schrodinger":
        if isinstance(f, SampledFunction):
            raise InvalidInputError("Schrodinger representation acts on closed forms only (no interpolation)")
        return _apply_schrodinger(g, f)
    power = 1 if rep.kind == "mock-discrete" else rep.m
    if isinstance(f, SampledFunction):
        if rep.kind != "mock-discrete":
            raise InvalidInputError("discrete-series action needs a closed-form function")
        moved = apply(rep, g, circle_interpolant(f))
        return moved.sample(f.grid)
    ginv = g.inverse()

    def moved(x, f=f, g=g, ginv=ginv, power=power):
        return cocycle(g, x, power) * f(groups.mobius_disk(ginv, x))

    return Evaluable(moved, rep.domain, f"pi_g[{f.label}]")


def _apply_schrodinger(g: groups.HeisElement, f):
    p, q = g.z1.real, g.z1.imag
    if isinstance(f, GaussPoly):
        return f.shifted(math.sqrt(2) * p).modulated(-math.sqrt(2) * q, 2 * g.t + q * p)

    def moved(x, f=f):
        return np.exp(1j * (2 * g.t - math.sqrt(2) * q * x + q * p)) * f(x - math.sqrt(2) * p)

    return Evaluable(moved, "line", f"pi_g[{f.label}]")


def vacuum(rep: Representation) -> ClosedForm:
    if rep.kind == "mock-discrete":
        return FourierSeries({0: 1.0})
    if rep.kind == "discrete-series":
        return DiskPolynomial({(0, 0): 1.0})
    return GaussPoly([math.pi**-0.25], label="f0")


def vacuum_norm_sq(rep: Representation) -> float:
    """Closed-form ``<f0, f0>`` on the representation's full space."""
    if rep.kind == "discrete-series":
        return 4.0 ** (1 - rep.m) * math.pi / (rep.m - 1)
    return 1.0


def in_subgroup(rep: Representation, h, tol: float = 1e-12) -> bool:
    if rep.kind == "schrodinger":
        return isinstance(h, groups.HeisElement) and all(abs(v) <= tol for v in h.z)
    return isinstance(h, groups.SU11Element) and abs(h.beta) <= tol


def vacuum_character(rep: Representation, h) -> complex:
    """``chi(h)`` with ``pi_h f0 = chi(h) f0`` for ``h`` in the stabiliser subgroup."""
    _check_group(rep, h)
    if not in_subgroup(rep, h):
        raise InvalidInputError("element is not in the vacuum's stabiliser subgroup")
    if rep.kind == "schrodinger":
        return cmath.exp(2j * h.t)
    # cocycle of h at any point: 1/alpha_h = e^{-i psi}
    psi = cmath.phase(h.alpha)
    power = 1 if rep.kind == "mock-discrete" else rep.m
    return cmath.exp(-1j * power * psi)


def character_of_angle(rep: Representation, psi_or_t: float) -> complex:
    """``chi`` evaluated on the subgroup parameter (``psi`` or central ``t``)."""
    if rep.kind == "schrodinger":
        return cmath.exp(2j * psi_or_t)
    power = 1 if rep.kind == "mock-discrete" else rep.m
    return cmath.exp(-1j * power * psi_or_t)


def unitarity_residual(rep: Representation, g, f1, f2, grid: Optional[Grid] = None) -> float:
    """``|<pi_g f1, pi_g f2> - <f1, f2>|`` on the representation's measure."""
    grid = grid or rep.space
    s1, s2 = _sample(f1, grid), _sample(f2, grid)
    t1, t2 = _sample(apply(rep, g, f1), grid), _sample(apply(rep, g, f2), grid)
    return abs(inner_product(t1, t2) - inner_product(s1, s2))


def _sample(f, grid):
    if isinstance(f, SampledFunction):
        return f
    return f.sample(grid)
