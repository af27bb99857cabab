"""SU(1,1) and Heisenberg group arithmetic.

Elements are immutable values.  SU(1,1) matrices have the form
``[[alpha, beta], [conj(beta), conj(alpha)]]`` with
``|alpha|**2 - |beta|**2 == 1``; the subgroup ``H`` of diagonal matrices
``h_psi = diag(e^{i psi}, e^{-i psi})`` is the maximal compact subgroup and the
unit disk is the quotient ``SU(1,1)/H`` through :func:`su11_section`.

Orientation convention
----------------------
:func:`mobius_disk` is the *left* action ``z -> (alpha z + beta)/(conj(beta) z
+ conj(alpha))`` computed from the element's own entries, so that
``mobius_disk(g1 * g2, z) == mobius_disk(g1, mobius_disk(g2, z))``.
Representations act on functions through ``g^{-1}``; the entries they need are
produced by :func:`action_entries`, the single place where that inversion
happens.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DimensionMismatchError, DomainError, InvalidInputError, PoleError

INVARIANT_TOL = 1e-12
NORMALIZE_TOL = 1e-8
POLE_TOL = 1e-14


@dataclass(frozen=True)
class SU11Element:
    alpha: complex
    beta: complex

    def __post_init__(self):
        alpha = complex(self.alpha)
        beta = complex(self.beta)
        norm = abs(alpha) ** 2 - abs(beta) ** 2
        if abs(norm - 1.0) > INVARIANT_TOL:
            if abs(norm - 1.0) > NORMALIZE_TOL or norm <= 0:
                raise InvalidInputError(
                    f"|alpha|^2 - |beta|^2 = {norm!r}, expected 1 (tolerance {NORMALIZE_TOL})"
                )
            scale = math.sqrt(norm)
            alpha, beta = alpha / scale, beta / scale
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def matrix(self) -> np.ndarray:
        a, b = self.alpha, self.beta
        return np.array([[a, b], [b.conjugate(), a.conjugate()]])

    @property
    def pseudo_norm(self) -> float:
        return abs(self.alpha) ** 2 - abs(self.beta) ** 2

    def inverse(self) -> "SU11Element":
        return SU11Element(self.alpha.conjugate(), -self.beta)

    def __mul__(self, other: "SU11Element") -> "SU11Element":
        return su11_mul(self, other)

    @property
    def disk_point(self) -> complex:
        return su11_decompose(self)[0]

    @property
    def angle(self) -> float:
        return su11_decompose(self)[1]


SU11_IDENTITY = SU11Element(1.0, 0.0)


def su11_from_sl2(a: float, b: float, c: float, d: float) -> SU11Element:
    """Map a real unimodular matrix ``[[a, b], [c, d]]`` to SU(1,1).

    The map is bijective and reverses products:
    ``su11_from_sl2(*(A @ B).ravel()) == su11_from_sl2(*B.ravel()) * su11_from_sl2(*A.ravel())``.
    Compose with :meth:`SU11Element.inverse` for an order-preserving version.
    """
    det = a * d - b * c
    if abs(det - 1.0) > 1e-10:
        raise InvalidInputError(f"determinant ad - bc = {det!r}, expected 1")
    alpha = 0.5 * complex(a + d, b - c)
    beta = 0.5 * complex(c + b, d - a)
    return SU11Element(alpha, beta)


def su11_mul(g1: SU11Element, g2: SU11Element) -> SU11Element:
    a1, b1, a2, b2 = g1.alpha, g1.beta, g2.alpha, g2.beta
    return SU11Element(a1 * a2 + b1 * b2.conjugate(), a1 * b2 + b1 * a2.conjugate())


def su11_rotation(psi: float) -> SU11Element:
    """The compact-subgroup element ``h_psi``."""
    return SU11Element(cmath.exp(1j * psi), 0.0)


def su11_section(a: complex) -> SU11Element:
    """Coset representative ``s(a) = (1 - |a|^2)^{-1/2} [[1, a], [conj(a), 1]]``."""
    a = complex(a)
    if abs(a) >= 1.0:
        raise DomainError(f"section needs |a| < 1, got |a| = {abs(a)!r}")
    alpha = 1.0 / math.sqrt(1.0 - abs(a) ** 2)
    return SU11Element(alpha, a * alpha)


def su11_decompose(g: SU11Element) -> tuple[complex, float]:
    """Return ``(a, psi)`` with ``g = s(a) h_psi``, ``psi`` in ``(-pi, pi]``."""
    psi = cmath.phase(g.alpha)
    if psi == -math.pi:
        psi = math.pi
    a = g.beta / g.alpha.conjugate()
    return a, psi


def action_entries(g: SU11Element) -> tuple[complex, complex]:
    """Entries ``(alpha, beta)`` of ``g^{-1}``, the ones substituted into the
    fraction-linear formulas of the representations."""
    inv = g.inverse()
    return inv.alpha, inv.beta


def mobius_disk(g: SU11Element, z):
    """Left fraction-linear action of ``g`` on the extended plane.

    Accepts scalars or numpy arrays.  Raises :class:`PoleError` when the
    denominator vanishes.
    """
    a, b = g.alpha, g.beta
    z_arr = np.asarray(z, dtype=complex)
    den = b.conjugate() * z_arr + a.conjugate()
    if np.any(np.abs(den) < POLE_TOL):
        raise PoleError("fraction-linear map evaluated at its pole")
    out = (a * z_arr + b) / den
    return complex(out) if out.ndim == 0 else out


def orbit_classify(z: complex, tol: float = 1e-12) -> str:
    r2 = abs(complex(z)) ** 2
    if abs(r2 - 1.0) <= tol:
        return "circle"
    return "disk" if r2 < 1.0 else "exterior"


def random_su11(rng: np.random.Generator, max_radius: float = 0.7) -> SU11Element:
    """``s(a) h_psi`` with ``|a| <= max_radius`` and uniform ``psi``."""
    r = max_radius * math.sqrt(rng.uniform())
    a = r * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
    return su11_mul(su11_section(a), su11_rotation(rng.uniform(-math.pi, math.pi)))


# --------------------------------------------------------------------------
# Heisenberg group


@dataclass(frozen=True)
class HeisElement:
    t: float
    z: tuple

    def __init__(self, t: float, z: Union[complex, "np.ndarray", tuple, list] = 0j):
        if np.ndim(z) == 0:
            zt = (complex(z),)
        else:
            zt = tuple(complex(v) for v in np.ravel(z))
        if len(zt) < 1:
            raise InvalidInputError("Heisenberg element needs n >= 1")
        object.__setattr__(self, "t", float(t))
        object.__setattr__(self, "z", zt)

    @property
    def n(self) -> int:
        return len(self.z)

    @property
    def z1(self) -> complex:
        return self.z[0]

    def __mul__(self, other: "HeisElement") -> "HeisElement":
        return heis_mul(self, other)

    def inverse(self) -> "HeisElement":
        return heis_inverse(self)


def heis_identity(n: int = 1) -> HeisElement:
    return HeisElement(0.0, (0j,) * n)


def heis_mul(g1: HeisElement, g2: HeisElement) -> HeisElement:
    if g1.n != g2.n:
        raise DimensionMismatchError(f"H^{g1.n} * H^{g2.n}")
    twist = 0.5 * sum((a.conjugate() * b).imag for a, b in zip(g1.z, g2.z))
    return HeisElement(g1.t + g2.t + twist, tuple(a + b for a, b in zip(g1.z, g2.z)))


def heis_inverse(g: HeisElement) -> HeisElement:
    # Im(conj(z) * (-z)) = 0, so the twist vanishes
    return HeisElement(-g.t, tuple(-v for v in g.z))


def heis_reduce(g: HeisElement) -> HeisElement:
    """Coset modulo the central subgroup ``{(pi m, 0)}``: ``t`` into ``[0, pi)``."""
    t = math.fmod(g.t, math.pi)
    if t < 0:
        t += math.pi
    if t >= math.pi:
        t -= math.pi
    return HeisElement(t, g.z)


def heis_section(z: complex) -> HeisElement:
    return HeisElement(0.0, z)


def heis_decompose(g: HeisElement) -> tuple[complex, float]:
    """``g = s(z) (t, 0)`` for ``H^1``; returns ``(z, t)``."""
    if g.n != 1:
        raise DimensionMismatchError("decomposition implemented for H^1")
    return g.z1, g.t


def random_heis(rng: np.random.Generator, scale: float = 1.0, n: int = 1) -> HeisElement:
    z = scale * (rng.normal(size=n) + 1j * rng.normal(size=n)) / math.sqrt(2)
    return HeisElement(rng.uniform(-math.pi, math.pi), z)


GroupElement = Union[SU11Element, HeisElement]
