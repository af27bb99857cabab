"""Coherent-state transforms for the Hardy, Bergman and Segal-Bargmann theories.

A :class:`Theory` bundles a representation ``pi`` on ``L2(X)``, a vacuum
``f0``, the section ``s: Omega -> G`` and a quadrature grid on ``Omega``.
From these:

* ``wavelet_full(f, g)   = <f, pi_g f0>``                 (function on ``G``)
* ``reduced_transform(f)(a) = <f, pi_{s(a)} f0>``          (function on ``Omega``)
* ``inverse_transform(F)(x) = c * int F(a) f_{s(a)}(x) da`` (back to ``X``)
* ``project = inverse o reduced`` and the reduced projection on ``Omega``.

Numerical routes
----------------
Coherent states expand as ``f_{s(a)}(x) = sum_k psi_k(x) V_k(a)`` in the
canonical basis (Fourier modes, monomials, Hermite functions).  The ``series``
route truncates this expansion at the theory's ``band``.  The ``quadrature``
route integrates the closed-form coherent state directly.  Near the boundary
of the disk the coherent states are too sharply peaked for any fixed grid, so
the inverse transform and the Bergman projections use the series route.  Both
routes agree wherever the direct quadrature is resolved.

Orientation
-----------
``g^{-1} s(a) = s(b) h`` gives ``[C pi_g f](a) = conj(chi(h)) [C f](b)``, which is
what :func:`apply_rho` implements, so ``rho C = C pi`` holds exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import groups, reps
from .errors import DivergentIntegralError, DomainError, GridMismatchError, InvalidInputError
from .grids import (
    ClosedForm,
    DiskPolynomial,
    Evaluable,
    FourierSeries,
    Grid,
    SampledFunction,
    disk_grid,
    fourier_modes,
    hermite_function,
    inner_product,
    plane_grid,
)

THEORIES = ("hardy", "bergman", "segal-bargmann")
_CHUNK = 512


@dataclass(frozen=True, eq=False)
class Theory:
    name: str
    rep: reps.Representation
    omega_grid: Grid
    band: int
    m: int = 1
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in THEORIES:
            raise InvalidInputError(f"unknown theory {self.name!r}")
        want = "plane" if self.name == "segal-bargmann" else "disk"
        if self.omega_grid.domain != want:
            raise GridMismatchError(f"{self.name} needs an Omega grid on the {want}")

    @property
    def x_grid(self) -> Grid:
        return self.rep.space

    @property
    def vacuum(self) -> ClosedForm:
        return reps.vacuum(self.rep)

    def describe(self) -> dict:
        d = {
            "theory": self.name,
            "representation": self.rep.describe(),
            "band": self.band,
            "x_grid": {**self.x_grid.describe(), "checksum": self.x_grid.checksum},
            "omega_grid": {**self.omega_grid.describe(), "checksum": self.omega_grid.checksum},
            "calibration": calibration_descriptor(self),
        }
        if self.name == "bergman":
            d["m"] = self.m
        return d


def hardy(N: int = 256, omega_Nr: int = 32, omega_Ntheta: int = 64, omega_rmax: float = 0.95) -> Theory:
    rep = reps.mock_discrete(N)
    omega = disk_grid(omega_Nr, omega_Ntheta, "invariant", omega_rmax)
    return Theory("hardy", rep, omega, band=N // 2)


def bergman(m: int = 2, Nr: int = 64, Ntheta: int = 256) -> Theory:
    rep = reps.discrete_series(m, Nr, Ntheta)
    omega = disk_grid(Nr, Ntheta, "invariant", 1.0)
    return Theory("bergman", rep, omega, band=min(Ntheta // 2, Nr), m=m)


def segal_bargmann(N_line: int = 64, N_plane: int = 40) -> Theory:
    rep = reps.schrodinger(N_line)
    omega = plane_grid(N_plane, "gaussian")
    return Theory("segal-bargmann", rep, omega, band=min(N_line // 2, N_plane - 8))


def make_theory(name: str, m: int = 2, nodes: Optional[int] = None) -> Theory:
    if name in ("hardy",):
        return hardy(nodes or 256)
    if name == "bergman":
        return bergman(m)
    if name in ("sb", "segal-bargmann"):
        return segal_bargmann(nodes or 64)
    raise InvalidInputError(f"unknown theory {name!r}")


# --------------------------------------------------------------------------
# group bookkeeping on Omega


def section(th: Theory, a: complex):
    if th.name == "segal-bargmann":
        return groups.heis_section(a)
    return groups.su11_section(a)


def decompose(th: Theory, g) -> tuple[complex, float]:
    """``g = s(a) h``; returns ``a`` and the subgroup parameter of ``h``."""
    if th.name == "segal-bargmann":
        return groups.heis_decompose(g)
    return groups.su11_decompose(g)


def _chi(th: Theory, angle):
    angle = np.asarray(angle, dtype=float)
    if th.name == "segal-bargmann":
        return np.exp(2j * angle)
    power = 1 if th.name == "hardy" else th.m
    return np.exp(-1j * power * angle)


def _pull_back(th: Theory, g, a):
    """Vectorised ``g^{-1} s(a) = s(b) h``; returns ``(b, angle(h))``."""
    a = np.asarray(a, dtype=complex)
    if th.name == "segal-bargmann":
        w = g.z1
        # (-t, -w) * (0, a) = (-t + Im(conj(-w) a)/2, a - w)
        return a - w, -g.t - 0.5 * np.imag(np.conj(w) * a)
    al, be = groups.action_entries(g)
    scale = 1.0 / np.sqrt(1.0 - np.abs(a) ** 2)
    alpha = scale * (al + be * np.conj(a))
    beta = scale * (al * a + be)
    return beta / np.conj(alpha), np.angle(alpha)


# --------------------------------------------------------------------------
# coherent states and their expansions


def coherent_state(th: Theory, a) -> ClosedForm:
    """``f_{s(a)} = pi_{s(a)} f0`` in closed form."""
    a = complex(a)
    if th.name == "hardy":
        c = math.sqrt(1 - abs(a) ** 2)
        return Evaluable(lambda x: c / (1 - np.conj(a) * x), "circle", f"f_s({a})")
    if th.name == "bergman":
        c = (1 - abs(a) ** 2) ** (th.m / 2)
        return Evaluable(lambda w: c / (1 - np.conj(a) * w) ** th.m, "disk", f"f_s({a})")
    return _sb_coherent(a)


def _sb_coherent(z: complex) -> ClosedForm:
    zb = np.conj(z)
    return Evaluable(
        lambda x: math.pi**-0.25 * np.exp(-abs(z) ** 2 / 2 - (zb**2 + x**2) / 2 + math.sqrt(2) * zb * x),
        "line",
        f"f_s({z})",
    )


def _coherent_conj_matrix(th: Theory, a: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``conj(f_{s(a_i)}(x_j))`` as an ``(len(a), len(x))`` matrix."""
    a = a[:, None]
    x = x[None, :]
    if th.name == "hardy":
        return np.sqrt(1 - np.abs(a) ** 2) / (1 - a * np.conj(x))
    if th.name == "bergman":
        return (1 - np.abs(a) ** 2) ** (th.m / 2) / (1 - a * np.conj(x)) ** th.m
    xr = x.real
    return math.pi**-0.25 * np.exp(-np.abs(a) ** 2 / 2 - (a**2 + xr**2) / 2 + math.sqrt(2) * a * xr)


def basis_function(th: Theory, k: int) -> ClosedForm:
    """Canonical basis ``psi_k`` on ``X``."""
    if th.name == "hardy":
        return FourierSeries({k: 1.0})
    if th.name == "bergman":
        return DiskPolynomial.monomial(k)
    return hermite_function(k)


def basis_norm_sq(th: Theory, k: int) -> float:
    if th.name == "bergman":
        return 4.0 ** (1 - th.m) * math.pi * _beta(k + 1, th.m - 1)
    return 1.0


def _beta(p: int, q: int) -> float:
    return math.exp(math.lgamma(p) + math.lgamma(q) - math.lgamma(p + q))


def expansion_factor(th: Theory, a, k: int):
    """``V_k(a)`` in ``f_{s(a)} = sum_k psi_k V_k(a)``."""
    a = np.asarray(a, dtype=complex)
    if th.name == "hardy":
        return np.sqrt(1 - np.abs(a) ** 2) * np.conj(a) ** k
    if th.name == "bergman":
        return (1 - np.abs(a) ** 2) ** (th.m / 2) * math.comb(th.m + k - 1, k) * np.conj(a) ** k
    return np.exp(-np.abs(a) ** 2 / 2) * np.conj(a) ** k / math.sqrt(math.factorial(k))


def vacuum_transform(th: Theory, a):
    """Closed form of ``C f0``."""
    a = np.asarray(a, dtype=complex)
    if th.name == "hardy":
        return np.sqrt(1 - np.abs(a) ** 2) + 0j
    if th.name == "bergman":
        return (1 - np.abs(a) ** 2) ** (th.m / 2) * reps.vacuum_norm_sq(th.rep) + 0j
    return np.exp(-np.abs(a) ** 2 / 2) + 0j


def calibration(th: Theory, a):
    """Normaliser ``c(a)`` turning ``C f`` into the analytic function it encodes.

    Hardy: ``e^{in phi} -> a^n``; Bergman: ``w^n -> a^n``; Segal-Bargmann:
    the isometric ``f -> e^{|z|^2/2} C f`` onto the Gaussian-weighted space.
    """
    a = np.asarray(a, dtype=complex)
    if th.name == "hardy":
        return 1 / np.sqrt(1 - np.abs(a) ** 2)
    if th.name == "bergman":
        return (1 - np.abs(a) ** 2) ** (-th.m / 2) / reps.vacuum_norm_sq(th.rep)
    return np.exp(np.abs(a) ** 2 / 2)


def calibration_descriptor(th: Theory) -> dict:
    if th.name == "hardy":
        return {"c(a)": "(1-|a|^2)^(-1/2)", "haar_scale": None}
    if th.name == "bergman":
        return {"c(a)": f"(1-|a|^2)^(-{th.m}/2) / {reps.vacuum_norm_sq(th.rep)!r}", "haar_scale": haar_scale(th)}
    return {"c(a)": "exp(|z|^2/2)", "haar_scale": haar_scale(th)}


def haar_scale(th: Theory) -> float:
    """``<f0, f0> / int_Omega |C f0|^2 dmu``, making ``F C = I``.

    Infinite measure for the Hardy theory: raises.
    """
    if th.name == "hardy":
        raise DivergentIntegralError("int_D |C f0|^2 dmu diverges for the Hardy theory")
    if th.name == "bergman":
        n0 = reps.vacuum_norm_sq(th.rep)
        return 1.0 / (n0 * math.pi / (th.m - 1))
    return 1.0 / math.pi


def _omega_lebesgue_factor(th: Theory, a: np.ndarray) -> np.ndarray:
    """Density converting the Omega grid's measure to the Haar measure."""
    if th.name == "segal-bargmann":
        return np.exp(np.abs(a) ** 2)
    return np.ones(a.shape)


# --------------------------------------------------------------------------
# transforms


def _x_samples(th: Theory, f) -> SampledFunction:
    if isinstance(f, SampledFunction):
        if not f.grid.same_as(th.x_grid):
            raise GridMismatchError("function is not sampled on the theory's X grid")
        return f
    if th.name == "segal-bargmann" and not isinstance(f, ClosedForm):
        raise InvalidInputError("expected a closed-form function on the line")
    return f.sample(th.x_grid)


def wavelet_full(th: Theory, f, g) -> complex:
    """``<f, pi_g f0>`` for a full group element ``g``."""
    fs = _x_samples(th, f)
    coh = reps.apply(th.rep, g, th.vacuum).sample(th.x_grid)
    return inner_product(fs, coh)


def _points(th: Theory, points):
    if points is None:
        return th.omega_grid.nodes, True
    return np.atleast_1d(np.asarray(points, dtype=complex)), False


def reduced_transform(th: Theory, f, points=None, method: str = "quadrature"):
    """``[C f](a) = <f, pi_{s(a)} f0>``.

    With ``points=None`` the result is a :class:`SampledFunction` on the
    Omega grid, otherwise an array of values at ``points``.
    ``method="series"`` sums the coherent-state expansion up to ``th.band``.
    """
    pts, on_grid = _points(th, points)
    fs = _x_samples(th, f)
    if method == "quadrature":
        vals = np.empty(pts.shape, dtype=complex)
        wv = th.x_grid.weights * fs.values
        for i in range(0, pts.size, _CHUNK):
            block = _coherent_conj_matrix(th, pts[i : i + _CHUNK], th.x_grid.nodes)
            vals[i : i + _CHUNK] = block @ wv
    elif method == "series":
        coeffs = taylor_coeffs(th, fs, th.band)
        vals = taylor_sum(th, coeffs, pts)
    else:
        raise InvalidInputError(f"unknown method {method!r}")
    if on_grid:
        return SampledFunction(th.omega_grid, vals)
    return vals


def transform_function(th: Theory, f, method: str = "quadrature") -> Evaluable:
    """``C f`` as an evaluable function on Omega."""
    fs = _x_samples(th, f)
    return Evaluable(lambda a: reduced_transform(th, fs, a, method), "plane" if th.name == "segal-bargmann" else "disk", "Cf")


def analytic_extension(th: Theory, f, points=None, method: str = "quadrature"):
    """Calibrated transform ``c(a) [C f](a)``."""
    pts, on_grid = _points(th, points)
    vals = calibration(th, pts) * reduced_transform(th, f, pts, method)
    return SampledFunction(th.omega_grid, vals) if on_grid else vals


@dataclass(frozen=True)
class CoeffVector:
    theory: str
    coeffs: np.ndarray
    truncation_error: float

    @property
    def K(self) -> int:
        return len(self.coeffs) - 1


def max_band(th: Theory) -> int:
    return th.band


def taylor_coeffs(th: Theory, f, K: int) -> CoeffVector:
    """``f_k = <f, psi_k>`` for ``k = 0..K`` with a Bessel-residual error report."""
    if K > max_band(th):
        raise InvalidInputError(f"K = {K} exceeds the grid's resolvable band {max_band(th)}")
    fs = _x_samples(th, f)
    grid = th.x_grid
    if th.name == "hardy":
        modes = fourier_modes(fs)
        c = np.array([modes[k] for k in range(K + 1)])
    else:
        c = np.array([inner_product(fs, basis_function(th, k).sample(grid)) for k in range(K + 1)])
    norms = np.array([basis_norm_sq(th, k) for k in range(K + 1)])
    captured = float(np.sum(np.abs(c) ** 2 / norms))
    total = inner_product(fs, fs).real
    return CoeffVector(th.name, c, math.sqrt(max(total - captured, 0.0)))


def taylor_sum(th: Theory, coeffs: CoeffVector | np.ndarray, points) -> np.ndarray:
    """``sum_k conj(V_k(a)) f_k``."""
    c = coeffs.coeffs if isinstance(coeffs, CoeffVector) else np.asarray(coeffs)
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    out = np.zeros(pts.shape, dtype=complex)
    for k, ck in enumerate(c):
        if ck != 0:
            out += np.conj(expansion_factor(th, pts, k)) * ck
    return out


def _omega_samples(th: Theory, fhat) -> SampledFunction:
    if isinstance(fhat, SampledFunction):
        if not fhat.grid.same_as(th.omega_grid):
            raise GridMismatchError("function is not sampled on the theory's Omega grid")
        return fhat
    return fhat.sample(th.omega_grid) if isinstance(fhat, ClosedForm) else Evaluable(fhat).sample(th.omega_grid)


def _moments(th: Theory, fhat: SampledFunction, K: int) -> np.ndarray:
    """``haar * int fhat(a) V_k(a) da`` for ``k = 0..K``."""
    a = th.omega_grid.nodes
    w = th.omega_grid.weights * _omega_lebesgue_factor(th, a) * fhat.values * haar_scale(th)
    return np.array([np.dot(w, expansion_factor(th, a, k)) for k in range(K + 1)])


def inverse_transform(th: Theory, fhat, points=None, regularized: bool = False):
    """``[F fhat](x) = int_Omega fhat(a) f_{s(a)}(x) da`` (series route).

    The Hardy integral diverges; it raises :class:`DivergentIntegralError`
    unless ``regularized=True``, which reconstructs the boundary values from
    the Taylor coefficients of the calibrated extension (the ``r -> 1`` limit).
    """
    fs = _omega_samples(th, fhat)
    if th.name == "hardy":
        if not regularized:
            raise DivergentIntegralError(
                "the Hardy inverse integral diverges at the unit circle; pass regularized=True"
            )
        coeffs = _hardy_boundary_coeffs(th, fs)
    else:
        coeffs = _moments(th, fs, th.band)
    target = th.x_grid.nodes if points is None else np.atleast_1d(np.asarray(points, dtype=complex))
    vals = np.zeros(target.shape, dtype=complex)
    for k, ck in enumerate(coeffs):
        if ck != 0:
            vals += ck * basis_function(th, k)(target)
    if points is None:
        return SampledFunction(th.x_grid, vals)
    return vals


def inverse_transform_direct(th: Theory, fhat: Callable, points, grid: Optional[Grid] = None) -> np.ndarray:
    """Direct quadrature of the inverse integral at ``points``.

    Only reliable where the coherent states are resolved by ``grid`` (interior
    points for the disk theories).  Used to cross-check the series route.
    """
    if th.name == "hardy":
        raise DivergentIntegralError("the Hardy inverse integral diverges")
    grid = grid or th.omega_grid
    a = grid.nodes
    w = grid.weights * _omega_lebesgue_factor(th, a) * np.asarray(fhat(a)) * haar_scale(th)
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    conj_mat = _coherent_conj_matrix(th, a, pts)
    return np.conj(conj_mat).T @ w


def _hardy_boundary_coeffs(th: Theory, fs: SampledFunction) -> np.ndarray:
    g = th.omega_grid
    Nr, Nt = g.params["Nr"], g.params["Ntheta"]
    radii = np.abs(g.nodes.reshape(Nr, Nt)[:, 0])
    ring = int(np.argmin(np.abs(radii - 0.9)))
    r = radii[ring]
    ext = (calibration(th, g.nodes) * fs.values).reshape(Nr, Nt)[ring]
    c = np.fft.fft(ext) / Nt
    K = min(Nt // 2 - 1, th.band)
    return np.array([c[k] / r**k for k in range(K + 1)])


def project(th: Theory, f) -> SampledFunction:
    """Orthogonal projection of ``L2(X)`` onto the closed span of coherent states.

    Hardy: the regularised form, i.e. removal of negative Fourier modes.
    Bergman and Segal-Bargmann: ``F o C`` (series route).
    """
    fs = _x_samples(th, f)
    if th.name == "hardy":
        N = len(fs.grid)
        c = np.fft.fft(fs.values)
        c[N // 2 :] = 0
        return SampledFunction(fs.grid, np.fft.ifft(c))
    return inverse_transform(th, reduced_transform(th, fs, method="series"))


def kernel(th: Theory, z, w):
    """Closed-form reproducing kernels.

    Hardy, Bergman: ``K(z, w) = sum_k psi_k(z) conj(psi_k(w)) / |psi_k|^2`` so
    that ``f(z) = int f(w) K(z, w) dmu(w)`` on ``X``.
    Segal-Bargmann: the Omega-side kernel
    ``exp((-|z|^2 - |w|^2)/2 + w conj(z))`` of the reduced projection,
    ``[P f](w) = (1/pi) int f(z) K(z, w) dz``.
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if th.name == "segal-bargmann":
        return np.exp(0.5 * (-np.abs(z) ** 2 - np.abs(w) ** 2) + w * np.conj(z))
    prod = z * np.conj(w)
    if np.any(np.abs(prod) >= 1.0 - 1e-15):
        raise DomainError("kernel is singular at |conj(w) z| = 1")
    if th.name == "hardy":
        return 1.0 / (1.0 - prod)
    m = th.m
    return (m - 1) * 4.0 ** (m - 1) / math.pi / (1.0 - prod) ** m


def scaled_kernel(th: Theory, z, w):
    """Segal-Bargmann kernel multiplied by ``e^{(-|z|^2 + |w|^2)/2}``."""
    if th.name != "segal-bargmann":
        raise InvalidInputError("scaled kernel is defined for the Segal-Bargmann theory")
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return kernel(th, z, w) * np.exp((-np.abs(z) ** 2 + np.abs(w) ** 2) / 2)


def reduced_kernel(th: Theory, a, a2):
    """``C f0(s^{-1}(s(a)^{-1} s(a2))) * conj(chi(r(s(a)^{-1} s(a2))))``, vectorised."""
    a = np.asarray(a, dtype=complex)
    a2 = np.asarray(a2, dtype=complex)
    if th.name == "segal-bargmann":
        # (0, -a) * (0, a2) = (Im(-conj(a) a2)/2, a2 - a)
        b = a2 - a
        t = -0.5 * np.imag(np.conj(a) * a2)
        return vacuum_transform(th, b) * np.conj(_chi(th, t))
    alpha = 1 - a * np.conj(a2)
    b = (a2 - a) / np.conj(alpha)
    return vacuum_transform(th, b) * np.conj(_chi(th, np.angle(alpha)))


def reduced_kernel_groupwise(th: Theory, a: complex, a2: complex) -> complex:
    """Scalar version of :func:`reduced_kernel` built from the group operations."""
    g = section(th, a).inverse() * section(th, a2)
    b, ang = decompose(th, g)
    return complex(vacuum_transform(th, b)) * complex(np.conj(_chi(th, ang)))


def reduced_projection(th: Theory, w, points=None, method: str = "series"):
    """Orthogonal projection of ``L2(Omega)`` onto the image of ``C``.

    ``method="kernel"`` integrates :func:`reduced_kernel` against ``w`` on the
    Omega grid; ``method="series"`` computes ``C F w`` with the truncated
    expansion (stable up to the boundary).
    """
    ws = _omega_samples(th, w)
    pts, on_grid = _points(th, points)
    if th.name == "hardy":
        raise DivergentIntegralError("the Hardy reduced projection involves the divergent inverse")
    if method == "series":
        mom = _moments(th, ws, th.band)
        norms = np.array([basis_norm_sq(th, k) for k in range(th.band + 1)])
        vals = taylor_sum(th, mom * norms, pts)
    elif method == "kernel":
        a = th.omega_grid.nodes
        wv = th.omega_grid.weights * _omega_lebesgue_factor(th, a) * ws.values * haar_scale(th)
        vals = np.empty(pts.shape, dtype=complex)
        for i in range(0, pts.size, _CHUNK):
            block = reduced_kernel(th, a[None, :], pts[i : i + _CHUNK, None])
            vals[i : i + _CHUNK] = block @ wv
    else:
        raise InvalidInputError(f"unknown method {method!r}")
    return SampledFunction(th.omega_grid, vals) if on_grid else vals


def apply_rho(th: Theory, g, fhat: Callable) -> Evaluable:
    """Induced action on Omega: ``[rho_g F](a) = conj(chi(h)) F(b)``, ``g^{-1} s(a) = s(b) h``."""
    if isinstance(fhat, SampledFunction):
        raise InvalidInputError("rho moves points off the grid; pass an evaluable (see transform_function)")

    def moved(a):
        b, ang = _pull_back(th, g, a)
        return np.conj(_chi(th, ang)) * np.asarray(fhat(b))

    return Evaluable(moved, "plane" if th.name == "segal-bargmann" else "disk", "rho_g F")


@dataclass(frozen=True)
class CRResidual:
    residual: float
    error_estimate: float
    step: float


def cr_residual(th: Theory, fhat: Callable, points=None, h: float = 1e-3) -> CRResidual:
    """Sup-norm of the Cauchy-Riemann-Dirac operator applied to ``fhat``.

    Segal-Bargmann: ``(d/dzbar + z/2) fhat``.  Hardy, Bergman:
    ``d/dabar`` of the calibrated extension ``c(a) fhat(a)``.  Central
    differences at steps ``h`` and ``2h`` are combined into a fourth-order
    stencil; ``error_estimate`` is the size of the second-order correction.
    """
    if not 0 < h <= 0.1:
        raise InvalidInputError(f"finite-difference step {h} is outside (0, 0.1]")
    if points is None:
        nodes = th.omega_grid.nodes
        limit = 3.0 if th.name == "segal-bargmann" else 0.9
        points = nodes[np.abs(nodes) <= limit]
        # each stencil point costs a full quadrature; a spread subsample suffices
        points = points[:: max(1, len(points) // 64)]
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    if th.name != "segal-bargmann" and np.any(np.abs(pts) + 2 * h >= 1):
        raise DomainError("difference stencil leaves the unit disk")

    if th.name == "segal-bargmann":
        def target(a):
            return np.asarray(fhat(a))
    else:
        def target(a):
            return calibration(th, a) * np.asarray(fhat(a))

    def dzbar(step):
        dx = (target(pts + step) - target(pts - step)) / (2 * step)
        dy = (target(pts + 1j * step) - target(pts - 1j * step)) / (2 * step)
        out = 0.5 * (dx + 1j * dy)
        if th.name == "segal-bargmann":
            out = out + 0.5 * pts * target(pts)
        return out

    d1, d2 = dzbar(h), dzbar(2 * h)
    # Richardson combination of the h and 2h stencils is fourth-order accurate
    d = (4 * d1 - d2) / 3
    return CRResidual(float(np.max(np.abs(d))), float(np.max(np.abs(d1 - d2))) / 3.0, h)
