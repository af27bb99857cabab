"""Covariant functional calculi for square complex matrices.

Riesz-Dunford calculus
    ``Phi(f, t) = (1/N) sum_k f(z_k) z_k (z_k I - t)^{-1}``, ``z_k = e^{2 pi i k/N}``,
    the trapezoid rule for ``(1/2 pi i) oint f(z) (z - t)^{-1} dz``.  The
    constant is fixed by ``Phi(1, t) = I`` and ``Phi(z, t) = t``.  Covariance
    under SU(1,1), with ``tau_g`` built from the cocycle, is checked by
    :func:`intertwine_residual`.
Disk form
    ``2 pi int_{|a| <= rho} f(a) (1 - conj(a) t)^{-1} da / (1 - |a|^2)``, which
    diverges logarithmically as ``rho -> 1``.  Kept for diagnostics together
    with a calibrated regularisation.
Weyl calculus
    ``f(T) = int exp(i sum xi_j T_j) fhat(xi) dxi`` for Hermitian tuples, on
    polynomials (full symmetrisation) and on Gaussian-times-polynomial symbols.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from sympy.utilities.iterables import multiset_permutations

from . import groups, reps
from .cmatrix import CMatrix, NormCertificate
from .errors import (
    DimensionMismatchError,
    DomainError,
    InvalidInputError,
    NormViolationError,
    NumericalError,
    ParseError,
    PoleError,
)
from .expr import Parser
from .grids import Evaluable, disk_grid

NORM_LIMIT = 0.95
COND_LIMIT = 1e12
POLE_MARGIN = 1e-9

__all__ = [
    "CMatrix",
    "NormCertificate",
    "BoundaryFunction",
    "RationalFunction",
    "parse_function",
    "op_mobius",
    "riesz_dunford_contour",
    "riesz_dunford_disk",
    "disk_regularized",
    "intertwine_residual",
    "spectral_oracle",
    "weyl_poly",
    "weyl_integral",
    "GaussPolyND",
    "matrix_exp",
]


def as_cmatrix(t) -> CMatrix:
    return t if isinstance(t, CMatrix) else CMatrix(t)


# --------------------------------------------------------------------------
# boundary functions


class RationalFunction:
    """``num(z) / den(z)`` with ascending numpy coefficient arrays."""

    def __init__(self, num, den=(1.0,)):
        num = np.trim_zeros(np.atleast_1d(np.asarray(num, dtype=complex)), "b")
        den = np.trim_zeros(np.atleast_1d(np.asarray(den, dtype=complex)), "b")
        if den.size == 0:
            raise ZeroDivisionError("zero denominator")
        self.num = num if num.size else np.zeros(1, dtype=complex)
        self.den = den

    @classmethod
    def const(cls, c: complex) -> "RationalFunction":
        return cls([c])

    @classmethod
    def z(cls) -> "RationalFunction":
        return cls([0.0, 1.0])

    @staticmethod
    def _lift(x) -> "RationalFunction":
        return x if isinstance(x, RationalFunction) else RationalFunction.const(complex(x))

    def __add__(self, other):
        o = self._lift(other)
        return RationalFunction(P.polyadd(P.polymul(self.num, o.den), P.polymul(o.num, self.den)), P.polymul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return RationalFunction(P.polymul(self.num, o.num), P.polymul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if not np.any(o.num):
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(P.polymul(self.num, o.den), P.polymul(self.den, o.num))

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction(self.den, self.num) ** (-n) if np.any(self.num) else self / 0
        out = RationalFunction.const(1.0)
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return P.polyval(z, self.num) / P.polyval(z, self.den)

    def poles(self) -> np.ndarray:
        """Roots of the denominator that the numerator does not cancel."""
        if self.den.size == 1:
            return np.zeros(0, dtype=complex)
        roots = P.polyroots(self.den)
        scale = max(float(np.max(np.abs(self.num))), 1.0)
        keep = []
        for r in roots:
            # removable only if the numerator vanishes there at least as often
            if abs(P.polyval(r, self.num)) > 1e-10 * scale:
                keep.append(r)
            else:
                mult_den = int(np.sum(np.abs(roots - r) < 1e-7))
                mult_num = int(np.sum(np.abs(P.polyroots(self.num) - r) < 1e-7)) if self.num.size > 1 else 0
                if mult_num < mult_den:
                    keep.append(r)
        return np.array(keep, dtype=complex)

    def describe(self) -> dict:
        return {
            "num": [[float(c.real), float(c.imag)] for c in self.num],
            "den": [[float(c.real), float(c.imag)] for c in self.den],
        }


def _function_symbol(name: str, pos: int, src: str):
    if name == "z":
        return RationalFunction.z()
    if set(name) == {"z"}:
        return RationalFunction.z() ** len(name)
    raise ParseError(f"unknown symbol {name!r}", pos, src)


def parse_function(src: str) -> "BoundaryFunction":
    """Parse a rational expression in ``z``: ``"1"``, ``"z^2"``, ``"1/(1-z/2)"``."""
    value = Parser(src, RationalFunction.const, lambda name, pos: _function_symbol(name, pos, src)).parse()
    return BoundaryFunction.rational(value, label=src)


class BoundaryFunction:
    """A function on the unit circle used as a calculus symbol.

    Kinds: ``fourier`` (finite Laurent polynomial), ``rational`` (with poles
    computed from the denominator) and ``callable`` (declared analytic on a
    neighbourhood of the closed disk).
    """

    def __init__(self, kind: str, func: Callable, label: str, data=None, poles: Optional[np.ndarray] = None):
        self.kind = kind
        self._func = func
        self.label = label
        self.data = data
        self._poles = poles

    @classmethod
    def fourier(cls, coeffs: Mapping[int, complex] | Sequence[complex], label: Optional[str] = None) -> "BoundaryFunction":
        if not isinstance(coeffs, Mapping):
            coeffs = dict(enumerate(coeffs))
        coeffs = {int(k): complex(v) for k, v in coeffs.items() if complex(v) != 0}
        ks = np.array(sorted(coeffs), dtype=int)
        cs = np.array([coeffs[k] for k in ks], dtype=complex)

        def f(z):
            z = np.asarray(z, dtype=complex)
            return np.sum(cs * z[..., None] ** ks, axis=-1) if ks.size else np.zeros(z.shape, dtype=complex)

        neg = any(k < 0 for k in coeffs)
        label = label or "fourier" + str(sorted(coeffs.items()))
        return cls("fourier", f, label, coeffs, np.zeros(1, dtype=complex) if neg else np.zeros(0, dtype=complex))

    @classmethod
    def rational(cls, r: RationalFunction, label: str = "rational") -> "BoundaryFunction":
        return cls("rational", r, label, r, r.poles())

    @classmethod
    def from_callable(cls, func: Callable, label: str, poles=()) -> "BoundaryFunction":
        return cls("callable", func, label, None, np.asarray(poles, dtype=complex))

    @classmethod
    def one(cls) -> "BoundaryFunction":
        return cls.fourier({0: 1.0}, "1")

    def __call__(self, z):
        return np.asarray(self._func(np.asarray(z, dtype=complex)), dtype=complex)

    @property
    def poles(self) -> np.ndarray:
        return self._poles if self._poles is not None else np.zeros(0, dtype=complex)

    def check_analytic(self, radius: float = 1.0):
        """Raise :class:`PoleError` if a pole lies in ``|z| <= radius``."""
        inside = [p for p in self.poles if abs(p) <= radius + POLE_MARGIN]
        if inside:
            raise PoleError(f"{self.label}: pole at {complex(inside[0])!r} inside the closed unit disk")

    def taylor(self, K: int) -> np.ndarray:
        """Taylor coefficients ``c_0..c_K`` at the origin."""
        if self.kind == "fourier":
            return np.array([self.data.get(k, 0) for k in range(K + 1)], dtype=complex)
        M = 1 << max(9, int(math.ceil(math.log2(4 * (K + 1)))))
        z = np.exp(2j * math.pi * np.arange(M) / M)
        return (np.fft.fft(self(z)) / M)[: K + 1]

    def describe(self) -> dict:
        d = {"kind": self.kind, "label": self.label}
        if self.kind == "fourier":
            d["coeffs"] = {str(k): [v.real, v.imag] for k, v in sorted(self.data.items())}
        elif self.kind == "rational":
            d.update(self.data.describe())
        d["poles"] = [[float(p.real), float(p.imag)] for p in self.poles]
        return d


# --------------------------------------------------------------------------
# Mobius action and the contour calculus


def require_contraction(t: CMatrix, limit: float = NORM_LIMIT, what: str = "t") -> NormCertificate:
    cert = t.norm
    if cert.upper > limit:
        raise NormViolationError(f"certified ||{what}|| <= {cert.upper:.6g} exceeds the limit {limit}")
    return cert


def op_mobius(g: groups.SU11Element, t) -> CMatrix:
    """``g . t = (conj(beta) t + conj(alpha))^{-1} (alpha t + beta)``."""
    t = as_cmatrix(t)
    if t.norm.upper >= 1.0:
        raise DomainError(f"op_mobius needs ||t|| < 1, certified bound is {t.norm.upper!r}")
    eye = np.eye(t.d)
    A = np.conj(g.beta) * t.data + np.conj(g.alpha) * eye
    B = g.alpha * t.data + g.beta * eye
    if np.linalg.cond(A) > COND_LIMIT:
        raise NumericalError("near-singular denominator in the operator Mobius map")
    return CMatrix(np.linalg.solve(A, B))


def _resolvents(nodes: np.ndarray, t: np.ndarray) -> np.ndarray:
    d = t.shape[0]
    stack = nodes[:, None, None] * np.eye(d)[None] - t[None]
    return np.linalg.inv(stack)


def riesz_dunford_contour(f: BoundaryFunction, t, N: int = 512) -> CMatrix:
    """Trapezoid rule on the unit circle for the Cauchy integral."""
    t = as_cmatrix(t)
    if N < 16:
        raise InvalidInputError(f"contour quadrature needs N >= 16, got {N}")
    require_contraction(t)
    f.check_analytic()
    z = np.exp(2j * math.pi * np.arange(N) / N)
    weights = f(z) * z / N
    return CMatrix(np.tensordot(weights, _resolvents(z, t.data), axes=1))


@dataclass(frozen=True)
class DiskResult:
    value: CMatrix
    rho: float
    rho_next: float
    value_next: CMatrix
    drift: float
    divergent: bool = True


def _disk_integral(f: BoundaryFunction, t: np.ndarray, rho: float, Nr: int, Ntheta: int) -> np.ndarray:
    grid = disk_grid(Nr, Ntheta, "lebesgue", rho)
    a = grid.nodes
    w = 2 * math.pi * grid.weights * f(a) / (1 - np.abs(a) ** 2)
    d = t.shape[0]
    stack = np.eye(d)[None] - np.conj(a)[:, None, None] * t[None]
    return np.tensordot(w, np.linalg.inv(stack), axes=1)


def riesz_dunford_disk(f: BoundaryFunction, t, rho: float, Nr: int = 64, Ntheta: int = 128) -> DiskResult:
    """Truncated disk integral at cutoff ``rho`` and at ``(1 + rho)/2``.

    The integral has no limit as ``rho -> 1`` (``f = 1`` grows like
    ``-2 pi^2 log(1 - rho^2)``); ``drift`` is the change between the two cutoffs.
    """
    t = as_cmatrix(t)
    if not 0 < rho < 1:
        raise InvalidInputError(f"cutoff must lie in (0, 1), got {rho}")
    require_contraction(t)
    f.check_analytic()
    rho2 = 0.5 * (1 + rho)
    v1 = _disk_integral(f, t.data, rho, Nr, Ntheta)
    v2 = _disk_integral(f, t.data, rho2, Nr, Ntheta)
    return DiskResult(CMatrix(v1), rho, rho2, CMatrix(v2), float(np.linalg.norm(v2 - v1, 2)))


DEFAULT_CUTOFFS = (0.9, 0.95, 0.975, 0.99)


def disk_regularized(f: BoundaryFunction, t, cutoffs: Sequence[float] = DEFAULT_CUTOFFS, Nr: int = 64, Ntheta: int = 128) -> CMatrix:
    """Finite part of the disk form.

    The divergent profile ``l(rho)`` is measured from the ``f = 1`` run.  At each
    cutoff the value is modelled as ``A l(rho) + sum_k B_k (1 - rho^2)^k`` and
    the coefficient ``A`` (a matrix) is returned.
    """
    t = as_cmatrix(t)
    require_contraction(t)
    f.check_analytic()
    one = BoundaryFunction.one()
    rows, values = [], []
    for rho in cutoffs:
        prof = _disk_integral(one, t.data, rho, Nr, Ntheta)
        ell = np.trace(prof).real / t.d
        u = 1 - rho**2
        rows.append([ell] + [u**k for k in range(len(cutoffs) - 1)])
        values.append(_disk_integral(f, t.data, rho, Nr, Ntheta))
    M = np.array(rows)
    V = np.array(values).reshape(len(cutoffs), -1)
    coef = np.linalg.solve(M, V) if M.shape[0] == M.shape[1] else np.linalg.lstsq(M, V, rcond=None)[0]
    return CMatrix(coef[0].reshape(t.d, t.d))


def tau_function(g: groups.SU11Element, f: BoundaryFunction) -> BoundaryFunction:
    """``pi_g f`` from the mock discrete series, as a boundary function."""
    rep = reps.Representation("mock-discrete")
    moved = reps.apply(rep, g, Evaluable(f, "circle", f.label))
    # poles of pi_g f: the cocycle's pole and the images of the poles of f
    a, b = groups.action_entries(g)
    poles = [-np.conj(a) / np.conj(b)] if b != 0 else []
    poles += [groups.mobius_disk(g, p) for p in f.poles if abs(np.conj(b) * p + np.conj(a)) > 1e-14]
    return BoundaryFunction.from_callable(moved, f"pi_g[{f.label}]", poles)


def intertwine_residual(f: BoundaryFunction, g: groups.SU11Element, t, N: int = 512) -> float:
    """``|| (conj(b) t + conj(a))^{-1} Phi(f, g^{-1} . t) - Phi(pi_g f, t) ||``
    with ``(a, b)`` the entries of ``g^{-1}``, i.e. covariance of the calculus."""
    t = as_cmatrix(t)
    a, b = groups.action_entries(g)
    moved_t = op_mobius(g.inverse(), t)
    lhs_factor = np.linalg.inv(np.conj(b) * t.data + np.conj(a) * np.eye(t.d))
    lhs = lhs_factor @ riesz_dunford_contour(f, moved_t, N).data
    rhs = riesz_dunford_contour(tau_function(g, f), t, N).data
    return float(np.linalg.norm(lhs - rhs, 2))


# --------------------------------------------------------------------------
# oracle


@dataclass(frozen=True)
class OracleResult:
    value: CMatrix
    method: str
    tail_bound: float


def spectral_oracle_report(f: BoundaryFunction, t, series_tol: float = 1e-15) -> OracleResult:
    """Eigendecomposition when well conditioned, otherwise a Taylor series with
    the Cauchy tail bound ``max|f| ||t||^{K+1} / (1 - ||t||)``."""
    t = as_cmatrix(t)
    f.check_analytic()
    lam, V = np.linalg.eig(t.data)
    if np.linalg.cond(V) < 1e6:
        value = V @ np.diag(f(lam)) @ np.linalg.inv(V)
        return OracleResult(CMatrix(value), "eigen", 0.0)
    nb = t.norm.upper
    if nb >= 1:
        raise DomainError("series oracle needs ||t|| < 1")
    z = np.exp(2j * math.pi * np.arange(512) / 512)
    fmax = float(np.max(np.abs(f(z))))
    K = 1
    while fmax * nb ** (K + 1) / (1 - nb) > series_tol and K < 4096:
        K += 1
    c = f.taylor(K)
    # nilpotent or low-degree shortcuts keep the Horner loop short
    out = np.zeros_like(t.data)
    for ck in c[::-1]:
        out = out @ t.data + ck * np.eye(t.d)
    return OracleResult(CMatrix(out), "series", fmax * nb ** (K + 1) / (1 - nb))


def spectral_oracle(f: BoundaryFunction, t) -> CMatrix:
    return spectral_oracle_report(f, t).value


# --------------------------------------------------------------------------
# matrix exponential


def matrix_exp(A, tol: float = 1e-16) -> CMatrix:
    """Scaling and squaring with a Taylor core.

    ``A`` is scaled by ``2^-s`` to norm ``<= 1/2``; the Taylor sum stops once
    the remainder bound ``||B||^{n+1}/(n+1)! * 2`` drops below ``tol``.
    """
    A = as_cmatrix(A).data
    nrm = float(np.linalg.norm(A, 1))
    s = max(0, int(math.ceil(math.log2(nrm))) + 1) if nrm > 0.5 else 0
    B = A / 2**s
    b = nrm / 2**s
    d = A.shape[0]
    term = np.eye(d, dtype=complex)
    out = term.copy()
    n = 0
    bound = 1.0
    while True:
        n += 1
        term = term @ B / n
        out = out + term
        bound *= b / (n + 1)
        if 2 * bound <= tol or n > 60:
            break
    for _ in range(s):
        out = out @ out
    return CMatrix(out)


# --------------------------------------------------------------------------
# Weyl calculus


def _check_tuple(T: Sequence) -> list[np.ndarray]:
    mats = [as_cmatrix(x) for x in T]
    if not mats:
        raise InvalidInputError("empty operator tuple")
    d = mats[0].d
    for m in mats:
        if m.d != d:
            raise DimensionMismatchError("operators of different dimension")
        if not m.is_hermitian():
            raise InvalidInputError("Weyl calculus needs Hermitian operators")
    return [m.data for m in mats]


def weyl_poly(p: Mapping[tuple, complex], T: Sequence) -> CMatrix:
    """Image of ``sum_e c_e x^e`` with every monomial fully symmetrised."""
    mats = _check_tuple(T)
    d = mats[0].shape[0]
    out = np.zeros((d, d), dtype=complex)
    for exps, c in p.items():
        if len(exps) != len(mats):
            raise DimensionMismatchError(f"monomial {exps} for {len(mats)} operators")
        letters = [j for j, e in enumerate(exps) for _ in range(e)]
        acc = np.zeros((d, d), dtype=complex)
        count = 0
        for perm in multiset_permutations(letters):
            m = np.eye(d, dtype=complex)
            for j in perm:
                m = m @ mats[j]
            acc += m
            count += 1
        out += complex(c) * acc / max(count, 1)
    return CMatrix(out)


class GaussPolyND:
    """``f(x) = P(x) exp(-x^T Q x / 2)`` on ``R^k`` with ``Q`` positive definite."""

    def __init__(self, poly: Mapping[tuple, complex], Q):
        Q = np.atleast_2d(np.asarray(Q, dtype=float))
        if Q.shape[0] != Q.shape[1] or not np.allclose(Q, Q.T):
            raise InvalidInputError("Q must be symmetric")
        if np.min(np.linalg.eigvalsh(Q)) <= 0:
            raise InvalidInputError("Q must be positive definite")
        self.k = Q.shape[0]
        self.Q = Q
        self.poly = {tuple(int(e) for e in k): complex(v) for k, v in poly.items() if complex(v) != 0}
        for exps in self.poly:
            if len(exps) != self.k:
                raise DimensionMismatchError(f"monomial {exps} in {self.k} variables")

    @classmethod
    def gaussian(cls, k: int = 1, Q=None) -> "GaussPolyND":
        return cls({(0,) * k: 1.0}, np.eye(k) if Q is None else Q)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.poly), default=0)

    @property
    def is_real(self) -> bool:
        return all(v.imag == 0 for v in self.poly.values())

    def poly_eval(self, x: np.ndarray) -> np.ndarray:
        """``P`` at points ``x`` of shape ``(..., k)`` (complex allowed)."""
        x = np.asarray(x, dtype=complex)
        out = np.zeros(x.shape[:-1], dtype=complex)
        for exps, c in self.poly.items():
            out = out + c * np.prod(x ** np.array(exps), axis=-1)
        return out

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        quad = np.einsum("...i,ij,...j->...", x, self.Q, x)
        return self.poly_eval(x) * np.exp(-0.5 * quad)

    def pullback(self, m) -> "GaussPolyND":
        """``g(x) = f(m x)`` for an invertible real ``k x k`` matrix ``m``."""
        m = np.atleast_2d(np.asarray(m, dtype=float))
        if abs(np.linalg.det(m)) < 1e-12:
            raise InvalidInputError("linear map is singular")
        poly: dict[tuple, complex] = {}
        for exps, c in self.poly.items():
            # expand prod_i (sum_j m_ij x_j)^{e_i}
            terms = {(0,) * self.k: c}
            for i, e in enumerate(exps):
                for _ in range(e):
                    new: dict[tuple, complex] = {}
                    for mon, v in terms.items():
                        for j in range(self.k):
                            if m[i, j] != 0:
                                key = tuple(mon[l] + (l == j) for l in range(self.k))
                                new[key] = new.get(key, 0) + v * m[i, j]
                    terms = new
            for mon, v in terms.items():
                poly[mon] = poly.get(mon, 0) + v
        return GaussPolyND(poly, m.T @ self.Q @ m)

    def describe(self) -> dict:
        return {
            "poly": {",".join(map(str, k)): [v.real, v.imag] for k, v in sorted(self.poly.items())},
            "Q": self.Q.tolist(),
        }


def _tensor_gauss(n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and normalised weights for ``E[h(Z)]``, ``Z`` standard normal in ``R^k``."""
    x, w = np.polynomial.hermite_e.hermegauss(n)
    w = w / math.sqrt(2 * math.pi)
    nodes = np.array(list(itertools.product(x, repeat=k)))
    weights = np.array([math.prod(c) for c in itertools.product(w, repeat=k)])
    return nodes, weights


def _weyl_sum(f: GaussPolyND, mats: list[np.ndarray], n: int) -> np.ndarray:
    k, d = f.k, mats[0].shape[0]
    C = np.linalg.cholesky(f.Q)  # xi = C eta turns the Gaussian into exp(-|eta|^2/2)
    Qinv = np.linalg.inv(f.Q)
    Linv = np.linalg.cholesky(Qinv)
    eta, w = _tensor_gauss(n, k)
    xi = eta @ C.T
    # E[P(X)], X ~ N(-i Q^{-1} xi, Q^{-1}), exact by Gauss-Hermite of sufficient order
    zn, zw = _tensor_gauss(f.degree // 2 + 1, k)
    mean = -1j * xi @ Qinv.T
    pts = mean[:, None, :] + (zn @ Linv.T)[None, :, :]
    expect = f.poly_eval(pts) @ zw
    out = np.zeros((d, d), dtype=complex)
    for xi_row, weight in zip(xi, w * expect):
        H = sum(x * m for x, m in zip(xi_row, mats))
        out += weight * matrix_exp(1j * H).data
    return out


def weyl_integral(f: GaussPolyND, T: Sequence, n: int = 40, tol: float = 1e-8) -> CMatrix:
    """``f(T) = int exp(i xi . T) fhat(xi) dxi`` by tensor Gauss-Hermite in ``xi``.

    ``fhat`` is exact for the Gaussian-times-polynomial class.  The result at
    ``n`` nodes per axis is compared with ``n - 8``; a larger difference than
    ``tol`` means the quadrature does not resolve the oscillation and raises.
    """
    mats = _check_tuple(T)
    if len(mats) != f.k:
        raise DimensionMismatchError(f"symbol in {f.k} variables, {len(mats)} operators")
    fine = _weyl_sum(f, mats, n)
    coarse = _weyl_sum(f, mats, n - 8)
    if np.linalg.norm(fine - coarse, 2) > tol:
        raise NumericalError(
            f"Weyl quadrature unresolved (difference {np.linalg.norm(fine - coarse, 2):.3g}); increase n or shrink T"
        )
    return CMatrix(fine)


def joint_spectral(f: GaussPolyND, T: Sequence) -> CMatrix:
    """Oracle for commuting Hermitian tuples: simultaneous diagonalisation."""
    mats = _check_tuple(T)
    for A, B in itertools.combinations(mats, 2):
        if np.linalg.norm(A @ B - B @ A) > 1e-10:
            raise InvalidInputError("joint spectral oracle needs commuting operators")
    rng = np.random.default_rng(12345)
    mix = sum(c * m for c, m in zip(rng.normal(size=len(mats)), mats))
    _, U = np.linalg.eigh(mix)
    eig = np.array([np.real(np.diag(U.conj().T @ m @ U)) for m in mats]).T
    return CMatrix(U @ np.diag(f(eig)) @ U.conj().T)
