"""Square complex matrices with a certified operator-norm bound."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatchError, InvalidInputError

_SQUARINGS = 6  # trace of G^(2^6) bounds lambda_max(G) within a factor d^(1/64)


@dataclass(frozen=True)
class NormCertificate:
    upper: float  # certified: ||A|| <= upper
    estimate: float  # power iteration on A^*A
    residual: float  # ||G v - lambda v|| at the last iterate
    steps: int


def _trace_power_bound(G: np.ndarray) -> float:
    """``(tr G^(2^k))^(1 / 2^k) >= lambda_max(G)`` for Hermitian ``G >= 0``."""
    scale = np.linalg.norm(G)
    if scale == 0:
        return 0.0
    H = G / scale
    log_scale = math.log(scale)
    for _ in range(_SQUARINGS):
        H = H @ H
        H = 0.5 * (H + H.conj().T)
        s = np.linalg.norm(H)
        if s == 0:
            return 0.0
        H = H / s
        log_scale = 2 * log_scale + math.log(s)
    tr = max(float(np.trace(H).real), 0.0)
    if tr == 0:
        return 0.0
    return math.exp((log_scale + math.log(tr)) / 2**_SQUARINGS)


def norm_certificate(A: np.ndarray, steps: int = 50) -> NormCertificate:
    G = A.conj().T @ A
    d = G.shape[0]
    # a fixed start vector keeps reports reproducible
    v = np.ones(d, dtype=complex) + 0.5j * np.arange(d)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(steps):
        w = G @ v
        nw = np.linalg.norm(w)
        if nw == 0:
            lam = 0.0
            break
        v = w / nw
        lam = float(np.vdot(v, G @ v).real)
    residual = float(np.linalg.norm(G @ v - lam * v))
    # small relative padding absorbs rounding in the squarings
    trace_bound = math.sqrt(_trace_power_bound(G)) * (1 + 1e-12)
    upper = min(float(np.linalg.norm(A)), trace_bound)
    return NormCertificate(upper, math.sqrt(max(lam, 0.0)), residual, steps)


@dataclass(frozen=True, eq=False)
class CMatrix:
    data: np.ndarray

    def __post_init__(self):
        a = np.array(self.data, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise InvalidInputError(f"expected a non-empty square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidInputError("matrix has non-finite entries")
        a.setflags(write=False)
        object.__setattr__(self, "data", a)

    @classmethod
    def identity(cls, d: int) -> "CMatrix":
        return cls(np.eye(d))

    @property
    def d(self) -> int:
        return self.data.shape[0]

    @cached_property
    def norm(self) -> NormCertificate:
        return norm_certificate(self.data)

    @property
    def norm_bound(self) -> float:
        return self.norm.upper

    @property
    def H(self) -> "CMatrix":
        return CMatrix(self.data.conj().T)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return float(np.max(np.abs(self.data - self.data.conj().T))) <= tol

    def _other(self, other) -> np.ndarray:
        if isinstance(other, CMatrix):
            if other.d != self.d:
                raise DimensionMismatchError(f"{self.d} x {self.d} vs {other.d} x {other.d}")
            return other.data
        return other

    def __matmul__(self, other):
        return CMatrix(self.data @ self._other(other))

    def __add__(self, other):
        return CMatrix(self.data + self._other(other))

    def __sub__(self, other):
        return CMatrix(self.data - self._other(other))

    def __neg__(self):
        return CMatrix(-self.data)

    def __mul__(self, c):
        if isinstance(c, CMatrix):
            raise TypeError("use @ for matrix products")
        return CMatrix(self.data * complex(c))

    __rmul__ = __mul__

    def dist(self, other) -> float:
        """Spectral-norm distance."""
        return float(np.linalg.norm(self.data - self._other(other), 2))

    def to_json(self) -> dict:
        return {
            "dimension": self.d,
            "entries": [[[float(z.real), float(z.imag)] for z in row] for row in self.data],
        }

    @classmethod
    def from_json(cls, obj) -> "CMatrix":
        """Accepts ``{"dimension", "entries"}`` with ``[re, im]`` pairs, or a bare
        nested list of numbers / pairs."""
        if isinstance(obj, dict):
            if "entries" not in obj:
                raise InvalidInputError("matrix JSON needs an 'entries' field")
            rows = obj["entries"]
            dim = obj.get("dimension")
        else:
            rows, dim = obj, None
        try:
            data = np.array([[_entry(v) for v in row] for row in rows], dtype=complex)
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"bad matrix entries: {exc}") from None
        m = cls(data)
        if dim is not None and dim != m.d:
            raise DimensionMismatchError(f"dimension field {dim} but {m.d} rows")
        return m


def _entry(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError("complex entries are [re, im] pairs")
        return complex(float(v[0]), float(v[1]))
    return complex(v)
