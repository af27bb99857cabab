"""Noncommutative polynomials, rewriting, the Manin plane and M_q(2).

Words are strings over the alphabet ``x y a b c d`` ordered by length and then
lexicographically with ``x < y < a < b < c < d``.  Coefficients are Laurent
polynomials in a formal ``q``, so identities are decided for every ``q`` at
once.

The Manin plane relation ``xy = q yx`` is oriented as ``yx -> q^{-1} xy``.
Requiring that both ``[[a, b], [c, d]]`` and its transpose preserve it
(with ``x, y`` commuting with ``a..d``) gives the six rules of
:func:`mq2_relations`, which :func:`verify_mq2` checks in both directions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

import numpy as np
import sympy as sp

from .cmatrix import CMatrix
from .errors import InvalidInputError, ParseError
from .expr import Parser

ALPHABET = "xyabcd"
ZERO_TOL = 1e-13
_RANK = {ch: i for i, ch in enumerate(ALPHABET)}


def word_key(w: str) -> tuple:
    return (len(w), tuple(_RANK[ch] for ch in w))


# --------------------------------------------------------------------------
# Laurent polynomials in q


class Laurent:
    """Finite sum ``sum_k c_k q^k`` with complex ``c_k``."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Union[Mapping[int, complex], complex, int, float, None] = None):
        if coeffs is None:
            coeffs = {}
        elif not isinstance(coeffs, Mapping):
            coeffs = {0: coeffs}
        self.c = {int(k): complex(v) for k, v in coeffs.items() if abs(complex(v)) > ZERO_TOL}

    @classmethod
    def q(cls, k: int = 1) -> "Laurent":
        return cls({k: 1.0})

    def is_zero(self) -> bool:
        return not self.c

    @property
    def is_monomial(self) -> bool:
        return len(self.c) == 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, Laurent):
            other = Laurent(other)
        return self.c == other.c

    def __hash__(self):
        return hash(tuple(sorted(self.c.items(), key=lambda kv: kv[0])))

    def __add__(self, other) -> "Laurent":
        other = other if isinstance(other, Laurent) else Laurent(other)
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out.get(k, 0) + v
        return Laurent(out)

    __radd__ = __add__

    def __neg__(self) -> "Laurent":
        return Laurent({k: -v for k, v in self.c.items()})

    def __sub__(self, other) -> "Laurent":
        return self + (-(other if isinstance(other, Laurent) else Laurent(other)))

    def __mul__(self, other) -> "Laurent":
        if not isinstance(other, Laurent):
            return Laurent({k: v * complex(other) for k, v in self.c.items()})
        out: dict[int, complex] = {}
        for k1, v1 in self.c.items():
            for k2, v2 in other.c.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + v1 * v2
        return Laurent(out)

    __rmul__ = __mul__

    def inverse(self) -> "Laurent":
        if not self.is_monomial:
            raise ZeroDivisionError("only monomials c*q^k are invertible")
        (k, v), = self.c.items()
        return Laurent({-k: 1 / v})

    def __call__(self, q: complex) -> complex:
        return sum((v * q**k for k, v in sorted(self.c.items())), 0j)

    def to_sympy(self, q: sp.Symbol) -> sp.Expr:
        return sp.Add(*[_sympy_number(v) * q**k for k, v in sorted(self.c.items())])

    @classmethod
    def from_sympy(cls, expr, q: sp.Symbol) -> "Laurent":
        num, den = sp.fraction(sp.cancel(sp.together(expr)))
        dpoly = sp.Poly(den, q)
        if len(dpoly.terms()) != 1:
            raise InvalidInputError(f"{expr} is not a Laurent polynomial in q")
        ((dk,), dc), = dpoly.terms()
        npoly = sp.Poly(num, q)
        return cls({k - dk: complex(v / dc) for (k,), v in npoly.terms()})

    def terms(self) -> list[tuple[int, complex]]:
        return sorted(self.c.items())

    def __repr__(self):
        return f"Laurent({self.c!r})"


def _sympy_number(v: complex) -> sp.Expr:
    re = sp.nsimplify(v.real) if v.real == int(v.real) else sp.Float(v.real)
    if v.imag == 0:
        return re
    im = sp.nsimplify(v.imag) if v.imag == int(v.imag) else sp.Float(v.imag)
    return re + sp.I * im


# --------------------------------------------------------------------------
# noncommutative polynomials


class NCPoly:
    """Element of the free algebra over ``ALPHABET`` with Laurent coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[str, Laurent]] = None):
        clean = {}
        for w, c in (terms or {}).items():
            if any(ch not in _RANK for ch in w):
                raise InvalidInputError(f"word {w!r} uses letters outside {ALPHABET!r}")
            c = c if isinstance(c, Laurent) else Laurent(c)
            if not c.is_zero():
                clean[w] = c
        self.terms = clean

    @classmethod
    def word(cls, w: str, coeff=1.0) -> "NCPoly":
        return cls({w: coeff if isinstance(coeff, Laurent) else Laurent(coeff)})

    @classmethod
    def scalar(cls, c) -> "NCPoly":
        return cls.word("", c)

    @classmethod
    def qpow(cls, k: int = 1) -> "NCPoly":
        return cls.word("", Laurent.q(k))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPoly):
            other = NCPoly.scalar(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items(), key=lambda kv: word_key(kv[0]))))

    @staticmethod
    def _lift(x) -> "NCPoly":
        if isinstance(x, NCPoly):
            return x
        return NCPoly.scalar(x)

    def __add__(self, other) -> "NCPoly":
        other = self._lift(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return NCPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "NCPoly":
        return NCPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other) -> "NCPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "NCPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "NCPoly":
        other = self._lift(other)
        out: dict[str, Laurent] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out[w] + c1 * c2 if w in out else c1 * c2
        return NCPoly(out)

    def __rmul__(self, other) -> "NCPoly":
        return self._lift(other) * self

    def scalar_value(self) -> Optional[Laurent]:
        if not self.terms:
            return Laurent()
        if set(self.terms) == {""}:
            return self.terms[""]
        return None

    def __truediv__(self, other) -> "NCPoly":
        s = self._lift(other).scalar_value()
        if s is None:
            raise ZeroDivisionError("can only divide by a scalar c*q^k")
        if s.is_zero():
            raise ZeroDivisionError("division by zero")
        return self * NCPoly.scalar(s.inverse())

    def __pow__(self, n: int) -> "NCPoly":
        if n < 0:
            s = self.scalar_value()
            if s is None or not s.is_monomial:
                raise ValueError("negative powers only for scalars c*q^k")
            return NCPoly.scalar(s.inverse()) ** (-n)
        out = NCPoly.scalar(1.0)
        for _ in range(n):
            out = out * self
        return out

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def specialize(self, q: complex) -> "NCPoly":
        return NCPoly({w: Laurent(c(q)) for w, c in self.terms.items()})

    def evaluate(self, assign: Mapping[str, np.ndarray], q: complex) -> np.ndarray:
        """Substitute matrices for letters and a number for ``q``."""
        mats = {k: (v.data if isinstance(v, CMatrix) else np.asarray(v, dtype=complex)) for k, v in assign.items()}
        if not mats:
            raise InvalidInputError("no matrices to evaluate on")
        d = next(iter(mats.values())).shape[0]
        out = np.zeros((d, d), dtype=complex)
        for w, c in sorted(self.terms.items(), key=lambda kv: word_key(kv[0])):
            m = np.eye(d, dtype=complex)
            for ch in w:
                if ch not in mats:
                    raise InvalidInputError(f"no matrix assigned to {ch!r}")
                m = m @ mats[ch]
            out += c(q) * m
        return out

    def __str__(self) -> str:
        return format_nc(self)

    def __repr__(self) -> str:
        return f"NCPoly({format_nc(self)!r})"


# --------------------------------------------------------------------------
# surface syntax


def _nc_symbol(name: str, pos: int, src: str) -> NCPoly:
    out = NCPoly.scalar(1.0)
    for k, ch in enumerate(name):
        if ch == "q":
            out = out * NCPoly.qpow(1)
        elif ch in _RANK:
            out = out * NCPoly.word(ch)
        else:
            raise ParseError(f"unknown symbol {ch!r}", pos + k, src)
    return out


def parse_nc(src: str) -> NCPoly:
    """Parse ``"x*y - q*y*x"``, ``"(a+b)(a-b)"``, ``"2.5i q^-1 x^2y"`` etc."""
    return Parser(src, NCPoly.scalar, lambda name, pos: _nc_symbol(name, pos, src)).parse()


def _format_scalar(c: complex) -> tuple[str, str]:
    """Sign and magnitude text of a coefficient."""
    if c.imag == 0:
        return ("-" if c.real < 0 else "+"), repr(abs(c.real))
    if c.real == 0:
        return ("-" if c.imag < 0 else "+"), f"{abs(c.imag)!r}i"
    sign = "-" if c.imag < 0 else "+"
    return "+", f"({c.real!r}{sign}{abs(c.imag)!r}i)"


def _format_word(w: str) -> str:
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        parts.append(w[i] if j - i == 1 else f"{w[i]}^{j - i}")
        i = j
    return "*".join(parts)


def format_nc(p: NCPoly) -> str:
    pieces = []
    for w in sorted(p.terms, key=word_key):
        for k, c in p.terms[w].terms():
            sign, mag = _format_scalar(c)
            factors = []
            if mag != "1.0" or (k == 0 and not w):
                factors.append(mag)
            if k:
                factors.append("q" if k == 1 else f"q^{k}")
            if w:
                factors.append(_format_word(w))
            pieces.append((sign, "*".join(factors)))
    if not pieces:
        return "0"
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


# --------------------------------------------------------------------------
# rewriting


class RelationSet:
    """Oriented rewrite rules ``lhs -> rhs`` on two-letter words.

    Construction checks that every rule decreases the word order and that all
    overlaps on three-letter words resolve (local confluence).
    """

    def __init__(self, rules: Mapping[str, NCPoly], name: str = "", check_confluence: bool = True):
        self.name = name
        self.rules: dict[str, NCPoly] = {}
        for lhs, rhs in rules.items():
            if len(lhs) != 2 or any(ch not in _RANK for ch in lhs):
                raise InvalidInputError(f"rule left-hand side {lhs!r} is not a two-letter word")
            rhs = rhs if isinstance(rhs, NCPoly) else parse_nc(rhs)
            for w in rhs.terms:
                if word_key(w) >= word_key(lhs):
                    raise InvalidInputError(f"rule {lhs} -> {format_nc(rhs)} does not decrease the word order")
            self.rules[lhs] = rhs
        self._cache: dict[str, NCPoly] = {}
        self.critical_pairs = 0
        if check_confluence:
            bad = self.non_confluent_overlaps()
            if bad:
                raise InvalidInputError(f"rules are not confluent on overlaps {bad[:5]}")

    def __iter__(self):
        return iter(self.rules.items())

    def __len__(self):
        return len(self.rules)

    def reduce_word(self, w: str) -> NCPoly:
        hit = self._cache.get(w)
        if hit is not None:
            return hit
        for i in range(len(w) - 1):
            rhs = self.rules.get(w[i : i + 2])
            if rhs is not None:
                out = NCPoly()
                for w2, c in rhs.terms.items():
                    tail = self.reduce_word(w[:i] + w2 + w[i + 2 :])
                    out = out + NCPoly({u: c * cu for u, cu in tail.terms.items()})
                break
        else:
            out = NCPoly.word(w)
        self._cache[w] = out
        return out

    def _reduce_at(self, w: str, i: int) -> NCPoly:
        out = NCPoly()
        for w2, c in self.rules[w[i : i + 2]].terms.items():
            tail = normal_order(NCPoly.word(w[:i] + w2 + w[i + 2 :]), self)
            out = out + NCPoly({u: c * cu for u, cu in tail.terms.items()})
        return out

    def non_confluent_overlaps(self) -> list[str]:
        bad = []
        self.critical_pairs = 0
        for l1 in self.rules:
            for l2 in self.rules:
                if l1[1] == l2[0]:
                    w = l1 + l2[1]
                    self.critical_pairs += 1
                    if self._reduce_at(w, 0) != self._reduce_at(w, 1):
                        bad.append(w)
        return bad

    def to_dict(self) -> dict:
        return {lhs: format_nc(rhs) for lhs, rhs in sorted(self.rules.items(), key=lambda kv: word_key(kv[0]))}


def normal_order(p: NCPoly, rel: RelationSet) -> NCPoly:
    """Canonical representative of ``p`` modulo the ideal generated by ``rel``."""
    out = NCPoly()
    for w, c in p.terms.items():
        out = out + NCPoly({w2: c * c2 for w2, c2 in rel.reduce_word(w).terms.items()})
    return out


def _qinv_word(w: str) -> NCPoly:
    return NCPoly.word(w, Laurent.q(-1))


def manin_relations() -> RelationSet:
    """``yx -> q^{-1} xy``."""
    return RelationSet({"yx": _qinv_word("xy")}, "manin")


def mq2_six() -> dict[str, NCPoly]:
    """The six M_q(2) rules in normal-ordering direction."""
    delta = Laurent({1: 1.0, -1: -1.0})  # q - q^{-1}
    return {
        "ba": _qinv_word("ab"),
        "ca": _qinv_word("ac"),
        "db": _qinv_word("bd"),
        "dc": _qinv_word("cd"),
        "cb": NCPoly.word("bc"),
        "da": NCPoly.word("ad") - NCPoly.word("bc", delta),
    }


def _ambient_rules() -> dict[str, NCPoly]:
    rules = {"yx": _qinv_word("xy")}
    for ch in "abcd":
        rules[ch + "x"] = NCPoly.word("x" + ch)
        rules[ch + "y"] = NCPoly.word("y" + ch)
    return rules


def ambient_relations() -> RelationSet:
    """Manin rule plus ``x, y`` commuting with ``a..d``."""
    return RelationSet(_ambient_rules(), "manin+commute")


def mq2_relations() -> RelationSet:
    """The six M_q(2) rules together with the ambient rules."""
    return RelationSet({**_ambient_rules(), **mq2_six()}, "mq2")


# --------------------------------------------------------------------------
# verification of the M_q(2) relations


def _plane_defect(M: tuple[str, str, str, str]) -> NCPoly:
    a, b, c, d = (NCPoly.word(ch) for ch in M)
    x, y = NCPoly.word("x"), NCPoly.word("y")
    xp = a * x + b * y
    yp = c * x + d * y
    return xp * yp - NCPoly.qpow(1) * yp * xp


MATRICES = {"M": ("a", "b", "c", "d"), "M^T": ("a", "c", "b", "d")}
_ENTRY_WORDS = sorted((u + v for u in "abcd" for v in "abcd"), key=word_key, reverse=True)


@dataclass
class MQ2Report:
    remainders: dict[str, str]
    extracted: dict[str, str]
    rank: int
    matches_six: bool
    classical: dict[str, str]
    classical_commutative: bool
    critical_pairs: int
    ok: bool = field(init=False)

    def __post_init__(self):
        self.ok = (
            all(r == "0" for r in self.remainders.values())
            and self.rank == 6
            and self.matches_six
            and self.classical_commutative
        )

    def to_dict(self) -> dict:
        return {
            "remainders": self.remainders,
            "extracted": self.extracted,
            "rank": self.rank,
            "matches_six": self.matches_six,
            "classical": self.classical,
            "classical_commutative": self.classical_commutative,
            "critical_pairs": self.critical_pairs,
            "ok": self.ok,
        }


def coefficient_conditions() -> list[NCPoly]:
    """Coefficients (polynomials in ``a..d``) of ``xx, xy, yy`` in the defects of
    both matrices, after normal ordering ``x, y`` only."""
    amb = ambient_relations()
    conds = []
    for M in MATRICES.values():
        nf = normal_order(_plane_defect(M), amb)
        by_xy: dict[str, NCPoly] = {}
        for w, c in nf.terms.items():
            head = w[:2]
            by_xy[head] = by_xy.get(head, NCPoly()) + NCPoly.word(w[2:], c)
        conds.extend(by_xy[k] for k in sorted(by_xy, key=word_key))
    return conds


def extract_relations(conditions: Iterable[NCPoly], q_value=None) -> dict[str, NCPoly]:
    """Row-reduce the linear conditions over ``Q(q)`` (or at ``q = q_value``).

    Columns are ordered with the largest word first, so every pivot row reads
    ``lead_word = combination of smaller words``.
    """
    q = sp.Symbol("q")
    rows = []
    for cond in conditions:
        row = []
        for w in _ENTRY_WORDS:
            c = cond.terms.get(w, Laurent())
            row.append(c.to_sympy(q) if q_value is None else _sympy_number(complex(c(q_value))))
        rows.append(row)
    R, pivots = sp.Matrix(rows).rref(simplify=True)
    rules = {}
    for i, col in enumerate(pivots):
        lhs = _ENTRY_WORDS[col]
        rhs = NCPoly()
        for j, w in enumerate(_ENTRY_WORDS):
            if j != col and R[i, j] != 0:
                coeff = -R[i, j] / R[i, col]
                rhs = rhs + NCPoly.word(w, Laurent.from_sympy(coeff, q) if q_value is None else Laurent(complex(coeff)))
        rules[lhs] = rhs
    return rules


def verify_mq2() -> MQ2Report:
    """Forward: both defects reduce to zero modulo the six rules.
    Converse: the defect coefficients are equivalent to exactly those rules."""
    rel = mq2_relations()
    remainders = {name: format_nc(normal_order(_plane_defect(M), rel)) for name, M in MATRICES.items()}
    conds = coefficient_conditions()
    extracted = extract_relations(conds)
    six = mq2_six()
    classical = extract_relations(conds, q_value=1)
    classical_ok = len(classical) == 6 and all(
        rhs == NCPoly.word("".join(sorted(lhs, key=_RANK.get))) for lhs, rhs in classical.items()
    )
    return MQ2Report(
        remainders=remainders,
        extracted={k: format_nc(v) for k, v in sorted(extracted.items(), key=lambda kv: word_key(kv[0]))},
        rank=len(extracted),
        matches_six=extracted == six,
        classical={k: format_nc(v) for k, v in sorted(classical.items(), key=lambda kv: word_key(kv[0]))},
        classical_commutative=classical_ok,
        critical_pairs=rel.critical_pairs,
    )


# --------------------------------------------------------------------------
# finite-dimensional witness


def clock_shift(n: int) -> tuple[CMatrix, CMatrix, complex]:
    """Clock ``X = diag(q^k)`` and cyclic shift ``Y`` with ``XY = q YX``, ``q = e^{2 pi i/n}``."""
    if n < 2:
        raise InvalidInputError(f"clock/shift needs n >= 2, got {n}")
    q = cmath.exp(2j * math.pi / n)
    if n == 2:
        q = -1.0 + 0j
    elif n == 4:
        q = 1j
    X = np.diag([q**k for k in range(n)])
    # Y e_k = e_{k+1}: then X Y e_k = q^{k+1} e_{k+1} = q Y X e_k
    Y = np.roll(np.eye(n), 1, axis=0)
    return CMatrix(X), CMatrix(Y), q


def random_ncpoly(rng: np.random.Generator, letters: str = "xy", max_len: int = 4, n_terms: int = 4) -> NCPoly:
    """Random polynomial with small integer Laurent coefficients."""
    p = NCPoly()
    for _ in range(n_terms):
        L = int(rng.integers(0, max_len + 1))
        w = "".join(rng.choice(list(letters), size=L))
        coeff = Laurent({int(rng.integers(-2, 3)): float(rng.integers(-3, 4)) + 1j * float(rng.integers(-2, 3))})
        p = p + NCPoly.word(w, coeff)
    return p


def identity_residual(p: NCPoly, n: int, rel: Optional[RelationSet] = None) -> float:
    """Spectral norm of ``p - normal_order(p)`` evaluated on the clock/shift pair.

    That difference lies in the ideal, so the result measures the evaluation
    homomorphism's consistency.
    """
    rel = rel or manin_relations()
    X, Y, q = clock_shift(n)
    ident = p - normal_order(p, rel)
    return float(np.linalg.norm(ident.evaluate({"x": X, "y": Y}, q), 2))
