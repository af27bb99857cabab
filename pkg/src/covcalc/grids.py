"""Quadrature grids and functions living on them.

Four geometries are supported:

``circle``
    ``N`` equispaced nodes ``e^{2 pi i k / N}`` with weights ``1/N``; the
    measure is Lebesgue measure normalised to total mass one.
``disk``
    Gauss-Legendre radial nodes on ``[0, r_max]`` times equispaced angles.
    The weights carry either the invariant density ``(1 - |a|^2)^{-2}`` or the
    weighted density ``4^{1-m} (1 - |w|^2)^{m-2}`` (Lebesgue area ``da``
    underneath both).
``plane``
    Tensor Gauss-Hermite grid on ``C = R^2`` for the Gaussian measure
    ``e^{-|z|^2} dz`` (or, with ``law="lebesgue"``, Lebesgue measure with the
    Gaussian absorbed into the weights).
``line``
    Gauss-Hermite nodes on ``R`` with ``e^{-x^2}`` absorbed, i.e. Lebesgue
    ``dx``; exact for polynomial times ``e^{-x^2}``.

Functions come in two flavours: :class:`SampledFunction` (values at the nodes
of a grid) and closed forms (:class:`ClosedForm` subclasses) which can be
evaluated anywhere and sampled onto any grid deterministically.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np
from numpy.polynomial import hermite as _herm
from numpy.polynomial import legendre as _leg

from .errors import GridMismatchError, InvalidInputError

DOMAINS = ("circle", "disk", "plane", "line")


@dataclass(frozen=True, eq=False)
class Grid:
    domain: str
    nodes: np.ndarray
    weights: np.ndarray
    law: str
    params: Mapping = field(default_factory=dict)
    warning: Optional[str] = None

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise InvalidInputError(f"unknown domain {self.domain!r}")
        nodes = np.asarray(self.nodes, dtype=complex)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise InvalidInputError("nodes and weights must be 1-d arrays of equal length")
        if not np.all(weights > 0):
            raise InvalidInputError("quadrature weights must be positive")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "params", dict(self.params))

    def __len__(self):
        return self.nodes.size

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights))

    @property
    def checksum(self) -> str:
        h = hashlib.sha256()
        h.update(self.domain.encode())
        h.update(self.law.encode())
        h.update(np.ascontiguousarray(self.nodes).tobytes())
        h.update(np.ascontiguousarray(self.weights).tobytes())
        return h.hexdigest()[:16]

    def same_as(self, other: "Grid") -> bool:
        return self is other or self.checksum == other.checksum

    def describe(self) -> dict:
        return {"domain": self.domain, "law": self.law, "N": len(self), **self.params}

    def integrate(self, values) -> complex:
        return complex(np.dot(self.weights, np.asarray(values, dtype=complex)))


# --------------------------------------------------------------------------
# grid constructors


def circle_grid(N: int) -> Grid:
    if N < 4:
        raise InvalidInputError(f"circle grid needs N >= 4, got {N}")
    phi = 2 * np.pi * np.arange(N) / N
    return Grid("circle", np.exp(1j * phi), np.full(N, 1.0 / N), "normalized", {"N": N})


def disk_grid(Nr: int, Ntheta: int, law: str = "invariant", r_max: float = 1.0, m: int = 2) -> Grid:
    """Tensor grid on ``{|a| <= r_max}``.

    ``law`` is ``"invariant"`` (density ``(1-|a|^2)^{-2}``), ``"weighted"``
    (``4^{1-m}(1-|a|^2)^{m-2}``) or ``"lebesgue"``.  Radial Gauss-Legendre nodes
    never touch ``r_max``, so ``r_max = 1`` is usable for all laws; under the
    invariant law the grid then carries a warning because its mass is not
    finite in the limit.
    """
    if Nr < 1 or Ntheta < 4:
        raise InvalidInputError("disk grid needs Nr >= 1 and Ntheta >= 4")
    if not 0.0 < r_max <= 1.0:
        raise InvalidInputError(f"r_max must lie in (0, 1], got {r_max}")
    warning = None
    if law == "weighted":
        if m < 2:
            raise InvalidInputError(f"weight (1-|w|^2)^(m-2) is not integrable for m = {m} < 2")
    elif law == "invariant":
        if r_max > 1 - 1e-6:
            warning = "invariant measure is singular at |a| = 1; mass grows without bound as r_max -> 1"
    elif law != "lebesgue":
        raise InvalidInputError(f"unknown disk law {law!r}")
    x, w = _leg.leggauss(Nr)
    r = 0.5 * r_max * (x + 1.0)
    wr = 0.5 * r_max * w * r  # r dr
    one_minus = 1.0 - r**2
    if law == "invariant":
        wr = wr / one_minus**2
    elif law == "weighted":
        wr = wr * 4.0 ** (1 - m) * one_minus ** (m - 2)
    theta = 2 * np.pi * np.arange(Ntheta) / Ntheta
    nodes = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = (wr[:, None] * np.full(Ntheta, 2 * np.pi / Ntheta)[None, :]).ravel()
    params = {"Nr": Nr, "Ntheta": Ntheta, "r_max": r_max}
    if law == "weighted":
        params["m"] = m
    return Grid("disk", nodes, weights, law, params, warning)


def plane_grid(N: int, law: str = "gaussian", scale: float = 1.0) -> Grid:
    """Tensor Gauss-Hermite grid on the complex plane.

    With ``law="gaussian"`` the weights integrate against ``e^{-|z|^2} dz``
    and polynomials in ``z, conj(z)`` of degree ``<= 2N - 1`` in each real
    coordinate are integrated exactly.  ``law="lebesgue"`` absorbs the Gaussian
    (nodes scaled by ``scale``) so plain ``dz`` integrals of
    ``polynomial * e^{-|z|^2/scale^2}`` are exact.
    """
    if N < 8:
        raise InvalidInputError(f"plane grid needs N >= 8, got {N}")
    x, w = _herm.hermgauss(N)
    p = np.repeat(x, N)
    q = np.tile(x, N)
    wt = np.repeat(w, N) * np.tile(w, N)
    if law == "gaussian":
        return Grid("plane", p + 1j * q, wt, "gaussian", {"N": N})
    if law == "lebesgue":
        z = scale * (p + 1j * q)
        return Grid("plane", z, wt * scale**2 * np.exp(p**2 + q**2), "lebesgue", {"N": N, "scale": scale})
    raise InvalidInputError(f"unknown plane law {law!r}")


def line_grid(N: int) -> Grid:
    if N < 8:
        raise InvalidInputError(f"line grid needs N >= 8, got {N}")
    x, w = _herm.hermgauss(N)
    return Grid("line", x.astype(complex), w * np.exp(x**2), "lebesgue", {"N": N})


# --------------------------------------------------------------------------
# functions


@dataclass(frozen=True, eq=False)
class SampledFunction:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        if values.shape != (len(self.grid),):
            raise InvalidInputError(f"expected {len(self.grid)} values, got shape {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def _check(self, other):
        if not self.grid.same_as(other.grid):
            raise GridMismatchError("functions live on different grids")

    def __add__(self, other):
        if isinstance(other, SampledFunction):
            self._check(other)
            return SampledFunction(self.grid, self.values + other.values)
        return SampledFunction(self.grid, self.values + other)

    def __sub__(self, other):
        if isinstance(other, SampledFunction):
            self._check(other)
            return SampledFunction(self.grid, self.values - other.values)
        return SampledFunction(self.grid, self.values - other)

    def __mul__(self, scalar):
        return SampledFunction(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def norm(self) -> float:
        return math.sqrt(max(inner_product(self, self).real, 0.0))

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))


class ClosedForm:
    """A function that can be evaluated at arbitrary points."""

    domain: str = "any"
    label: str = "f"

    def __call__(self, x):
        raise NotImplementedError

    def sample(self, grid: Grid) -> SampledFunction:
        return SampledFunction(grid, self(grid.nodes))

    def __add__(self, other):
        return Evaluable(lambda x, a=self, b=other: a(x) + b(x), self.domain, f"({self.label} + {other.label})")

    def __sub__(self, other):
        return Evaluable(lambda x, a=self, b=other: a(x) - b(x), self.domain, f"({self.label} - {other.label})")

    def scale(self, c: complex):
        return Evaluable(lambda x, a=self: c * a(x), self.domain, f"{c}*{self.label}")

    def __repr__(self):
        return f"{type(self).__name__}({self.label})"


class Evaluable(ClosedForm):
    """Wraps a vectorised callable."""

    def __init__(self, func: Callable, domain: str = "any", label: str = "f"):
        self.func = func
        self.domain = domain
        self.label = label

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        return np.asarray(self.func(x), dtype=complex) * np.ones_like(x)


class FourierSeries(ClosedForm):
    """``sum_k c_k z^k`` on the unit circle (``k`` may be negative).

    Inside the disk, :meth:`analytic` evaluates the nonnegative part.
    """

    domain = "circle"

    def __init__(self, coeffs: Mapping[int, complex] | list):
        if not isinstance(coeffs, Mapping):
            coeffs = dict(enumerate(coeffs))
        self.coeffs = {int(k): complex(v) for k, v in coeffs.items() if v != 0}
        self.label = " + ".join(f"{c}*z^{k}" for k, c in sorted(self.coeffs.items())) or "0"

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for k, c in self.coeffs.items():
            out = out + c * z**k
        return out

    @property
    def is_analytic(self) -> bool:
        return all(k >= 0 for k in self.coeffs)

    def analytic(self, a):
        a = np.asarray(a, dtype=complex)
        out = np.zeros_like(a)
        for k, c in self.coeffs.items():
            if k >= 0:
                out = out + c * a**k
        return out


class DiskPolynomial(ClosedForm):
    """``sum c_{pq} w^p conj(w)^q``."""

    domain = "disk"

    def __init__(self, coeffs: Mapping[tuple, complex]):
        self.coeffs = {(int(p), int(q)): complex(v) for (p, q), v in coeffs.items() if v != 0}
        self.label = " + ".join(f"{c}*w^{p}*wbar^{q}" for (p, q), c in sorted(self.coeffs.items())) or "0"

    @classmethod
    def monomial(cls, n: int, conjugate: bool = False) -> "DiskPolynomial":
        return cls({(0, n) if conjugate else (n, 0): 1.0})

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        out = np.zeros_like(w)
        for (p, q), c in self.coeffs.items():
            out = out + c * w**p * np.conj(w) ** q
        return out


class GaussPoly(ClosedForm):
    """``P(x) exp(-x^2/2 + b x + c)`` on the real line.

    ``poly`` holds the complex coefficients of ``P`` in increasing degree.
    The class is closed under shifts and multiplication by ``e^{i k x}``,
    which is everything the Schrodinger representation does.
    """

    domain = "line"

    def __init__(self, poly, b: complex = 0.0, c: complex = 0.0, label: str | None = None):
        self.poly = np.atleast_1d(np.asarray(poly, dtype=complex))
        self.b = complex(b)
        self.c = complex(c)
        self.label = label or f"P{len(self.poly) - 1}*gauss(b={self.b:.3g}, c={self.c:.3g})"

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        return np.polynomial.polynomial.polyval(x, self.poly) * np.exp(-0.5 * x**2 + self.b * x + self.c)

    def shifted(self, s: float) -> "GaussPoly":
        """``x -> f(x - s)``."""
        poly = _poly_shift(self.poly, -s)
        # -(x-s)^2/2 + b (x - s) + c = -x^2/2 + (s + b) x + (c - s^2/2 - b s)
        return GaussPoly(poly, self.b + s, self.c - 0.5 * s * s - self.b * s, self.label + f"(x-{s:.3g})")

    def modulated(self, k: complex, phase: complex = 0.0) -> "GaussPoly":
        """``x -> e^{i (k x + phase)} f(x)``."""
        return GaussPoly(self.poly, self.b + 1j * k, self.c + 1j * phase, self.label)

    def scaled(self, factor: complex) -> "GaussPoly":
        return GaussPoly(self.poly * factor, self.b, self.c, self.label)


def _poly_shift(coeffs: np.ndarray, s: complex) -> np.ndarray:
    """Coefficients of ``P(x + s)``."""
    n = len(coeffs)
    out = np.zeros(n, dtype=complex)
    for k, ck in enumerate(coeffs):
        for j in range(k + 1):
            out[j] += ck * math.comb(k, j) * s ** (k - j)
    return out


def hermite_function(n: int) -> GaussPoly:
    """Normalised Hermite function ``h_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) e^{-x^2/2}``."""
    basis = np.zeros(n + 1)
    basis[n] = 1.0
    poly = _herm.herm2poly(basis) / math.sqrt(2.0**n * math.factorial(n) * math.sqrt(math.pi))
    return GaussPoly(poly, label=f"h_{n}")


def as_sampled(f, grid: Grid) -> SampledFunction:
    if isinstance(f, SampledFunction):
        if not f.grid.same_as(grid):
            raise GridMismatchError("sampled function is on a different grid")
        return f
    return f.sample(grid)


def inner_product(f: SampledFunction, g: SampledFunction) -> complex:
    """``sum_k w_k f(x_k) conj(g(x_k))``."""
    if not f.grid.same_as(g.grid):
        raise GridMismatchError("inner product of functions on different grids")
    # spelled out in real arithmetic so that <f, g> == conj(<g, f>) bit for bit
    fr, fi, gr, gi = f.values.real, f.values.imag, g.values.real, g.values.imag
    w = f.grid.weights
    return complex(np.dot(w, fr * gr + fi * gi), np.dot(w, fi * gr - fr * gi))


def circle_interpolant(f: SampledFunction) -> FourierSeries:
    """Trigonometric interpolant of samples on a circle grid (exact for band < N/2)."""
    if f.grid.domain != "circle":
        raise InvalidInputError("trigonometric interpolation needs a circle grid")
    N = len(f.grid)
    c = np.fft.fft(f.values) / N
    coeffs = {}
    for k in range(N):
        kk = k if k < N // 2 else k - N
        if c[k] != 0:
            coeffs[kk] = c[k]
    return FourierSeries(coeffs)


def fourier_modes(f: SampledFunction) -> dict:
    """Fourier coefficients ``<f, e^{ik phi}>`` of circle samples, ``k`` in ``[-N/2, N/2)``."""
    if f.grid.domain != "circle":
        raise InvalidInputError("Fourier modes need a circle grid")
    N = len(f.grid)
    c = np.fft.fft(f.values) / N
    return {(k if k < N // 2 else k - N): c[k] for k in range(N)}
