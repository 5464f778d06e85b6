"""Sparse multivariate polynomials over the rationals.

A :class:`Poly` is a finite map from exponent tuples to nonzero
:class:`fractions.Fraction` coefficients, tied to a :class:`RingSpec`.
In series mode every stored term has total degree below ``trunc`` and
all arithmetic is exact modulo that degree.

Variables are numbered from 1 (``x1 .. xn``) in every public function;
the last variable ``xn`` is the distinguished one used by the
univariate utilities (gcd, antiderivative, series inverse).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import PreconditionError, RingMismatchError

Scalar = Fraction
Exponents = tuple


class Mode(enum.Enum):
    POLYNOMIAL = "poly"
    SERIES = "series"


@dataclass(frozen=True)
class RingSpec:
    """``k[x1..xn]`` or ``k[[x1..xn]]`` truncated below total degree ``trunc``."""

    nvars: int
    mode: Mode = Mode.POLYNOMIAL
    trunc: int | None = None

    def __post_init__(self):
        if not isinstance(self.nvars, int) or self.nvars < 1:
            raise ValueError(f"nvars must be a positive integer, got {self.nvars!r}")
        if self.mode is Mode.SERIES:
            if not isinstance(self.trunc, int) or self.trunc < 1:
                raise ValueError("series mode needs a truncation order >= 1")
        elif self.trunc is not None:
            raise ValueError("truncation order only applies to series mode")

    @classmethod
    def polynomial(cls, nvars: int) -> RingSpec:
        return cls(nvars)

    @classmethod
    def series(cls, nvars: int, trunc: int) -> RingSpec:
        return cls(nvars, Mode.SERIES, trunc)

    @property
    def is_series(self) -> bool:
        return self.mode is Mode.SERIES

    def __str__(self):
        if self.is_series:
            return f"series {self.nvars} trunc {self.trunc}"
        return f"poly {self.nvars}"


def as_scalar(c) -> Fraction:
    """Coerce an exact number to a Fraction. Floats are refused."""
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)) and not isinstance(c, bool):
        return Fraction(c)
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


def format_scalar(c: Fraction) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _is_number(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


class Poly:
    """Immutable sparse polynomial (or truncated series) with rational coefficients."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Mapping[tuple, object] | Iterable = ()):
        if isinstance(terms, Mapping):
            terms = terms.items()
        n = ring.nvars
        acc: dict[tuple, Fraction] = {}
        for exps, c in terms:
            exps = tuple(exps)
            if len(exps) != n:
                raise ValueError(f"exponent vector {exps} does not have length {n}")
            if any((not isinstance(e, int)) or e < 0 for e in exps):
                raise ValueError(f"exponents must be non-negative integers: {exps}")
            acc[exps] = acc.get(exps, Fraction(0)) + as_scalar(c)
        if ring.is_series:
            N = ring.trunc
            acc = {e: c for e, c in acc.items() if c and sum(e) < N}
        else:
            acc = {e: c for e, c in acc.items() if c}
        self.ring = ring
        self._terms = acc
        self._hash = None

    @classmethod
    def _raw(cls, ring: RingSpec, terms: dict) -> Poly:
        # trusted constructor: terms already pruned and truncated
        p = object.__new__(cls)
        p.ring = ring
        p._terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ring: RingSpec) -> Poly:
        return cls._raw(ring, {})

    @classmethod
    def const(cls, ring: RingSpec, c) -> Poly:
        return cls(ring, {(0,) * ring.nvars: c})

    @classmethod
    def var(cls, ring: RingSpec, j: int) -> Poly:
        """The generator ``xj`` (1-based)."""
        _check_index(ring, j)
        e = [0] * ring.nvars
        e[j - 1] = 1
        return cls(ring, {tuple(e): 1})

    @classmethod
    def monomial(cls, ring: RingSpec, exps: Sequence[int], c=1) -> Poly:
        return cls(ring, {tuple(exps): c})

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> Mapping[tuple, Fraction]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.ring.nvars, Fraction(0))

    def total_degree(self) -> int:
        """Largest total degree of a term; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, j: int) -> int:
        _check_index(self.ring, j)
        return max((e[j - 1] for e in self._terms), default=-1)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        """Terms in display order: lexicographic, x1 > x2 > ... > xn, descending."""
        return sorted(self._terms.items(), reverse=True)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> Poly | None:
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatchError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if _is_number(other):
            return Poly.const(self.ring, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.ring, {e: -c for e, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def scale(self, c) -> Poly:
        c = as_scalar(c)
        if not c:
            return Poly.zero(self.ring)
        return Poly._raw(self.ring, {e: c * v for e, v in self._terms.items()})

    def __mul__(self, other):
        if _is_number(other):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[tuple, Fraction] = {}
        N = self.ring.trunc if self.ring.is_series else None
        for e1, c1 in self._terms.items():
            d1 = sum(e1)
            for e2, c2 in other._terms.items():
                if N is not None and d1 + sum(e2) >= N:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly._raw(self.ring, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.const(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        # only division by a nonzero scalar; use exact_quotient for polynomials
        if _is_number(other):
            return self.scale(Fraction(1) / as_scalar(other))
        return NotImplemented

    def diff(self, j: int) -> Poly:
        """Formal partial derivative with respect to ``xj`` (1-based)."""
        _check_index(self.ring, j)
        i = j - 1
        out = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1 :]
                out[e2] = c * k
        return Poly._raw(self.ring, out)

    def exact_quotient(self, g: Poly) -> Poly | None:
        """Return ``q`` with ``q * g == self``, or None when ``g`` does not divide.

        Polynomial mode only. Uses leading-term division in lex order, which
        is exact for any monomial order when the division is exact.
        """
        if self.ring.is_series:
            raise PreconditionError("exact division is only defined in polynomial mode")
        g = self._coerce(g)
        if not g:
            raise ZeroDivisionError("division by the zero polynomial")
        lt_g = max(g._terms)
        lc_g = g._terms[lt_g]
        rem = dict(self._terms)
        quot: dict[tuple, Fraction] = {}
        while rem:
            lt = max(rem)
            m = tuple(a - b for a, b in zip(lt, lt_g))
            if any(k < 0 for k in m):
                return None
            c = rem[lt] / lc_g
            quot[m] = c
            for e, v in g._terms.items():
                e2 = tuple(a + b for a, b in zip(e, m))
                s = rem.get(e2, 0) - c * v
                if s:
                    rem[e2] = s
                else:
                    rem.pop(e2, None)
        return Poly._raw(self.ring, quot)

    # -- comparison and display ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self._terms == other._terms
        if _is_number(other):
            if not other:
                return not self._terms
            return self._terms == {(0,) * self.ring.nvars: Fraction(other)}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({str(self)!r}, {self.ring})"


def _check_index(ring: RingSpec, j: int) -> None:
    if not isinstance(j, int) or not 1 <= j <= ring.nvars:
        raise IndexError(f"variable index {j} out of range 1..{ring.nvars}")


def check_same_ring(*items) -> RingSpec:
    ring = items[0].ring
    for it in items[1:]:
        if it.ring != ring:
            raise RingMismatchError(f"ring mismatch: {ring} vs {it.ring}")
    return ring


# -- printing ----------------------------------------------------------------


def format_monomial(exps: Sequence[int]) -> str:
    parts = []
    for i, k in enumerate(exps, start=1):
        if k == 1:
            parts.append(f"x{i}")
        elif k > 1:
            parts.append(f"x{i}^{k}")
    return "*".join(parts)


def _format_term(exps, c: Fraction) -> str:
    mono = format_monomial(exps)
    a = abs(c)
    if not mono:
        return format_scalar(a)
    if a == 1:
        return mono
    return f"{format_scalar(a)}*{mono}"


def format_poly(f: Poly) -> str:
    """Canonical text form, e.g. ``x1 - 1/6*x3^3``; the zero polynomial is ``0``."""
    items = f.sorted_terms()
    if not items:
        return "0"
    out = []
    for k, (e, c) in enumerate(items):
        body = _format_term(e, c)
        if k == 0:
            out.append("-" + body if c < 0 else body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


# -- ring-level operations -------------------------------------------------------


def parse_poly(text: str, ring: RingSpec) -> Poly:
    from .parsing import parse_poly as _parse

    return _parse(text, ring)


def arith(op: str, f: Poly, g) -> Poly:
    """Dispatch ``add``, ``sub``, ``mul`` or ``scalar_mul``."""
    if op == "scalar_mul":
        return f.scale(g)
    if not isinstance(g, Poly):
        raise TypeError(f"{op} needs two polynomials")
    check_same_ring(f, g)
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def partial_derivative(f: Poly, j: int) -> Poly:
    return f.diff(j)


def truncate(f: Poly, order: int) -> Poly:
    """Drop every term of total degree >= ``order`` (ring unchanged)."""
    return Poly._raw(f.ring, {e: c for e, c in f._terms.items() if sum(e) < order})


def is_unit(f: Poly) -> bool:
    if f.ring.is_series:
        return f.constant_term() != 0
    return bool(f) and f.is_constant()


def foreign_variable(f: Poly) -> int | None:
    """Least index j < n such that ``xj`` occurs in ``f``; None if ``f`` lies in k[xn]."""
    n = f.ring.nvars
    best = None
    for e in f._terms:
        for i in range(n - 1):
            if e[i]:
                if best is None or i + 1 < best:
                    best = i + 1
                break
    return best


def depends_only_on_last(f: Poly) -> bool:
    return foreign_variable(f) is None


def eval_at(f: Poly, point: Sequence) -> Fraction:
    if f.ring.is_series:
        raise PreconditionError("evaluation is not defined for truncated series")
    if len(point) != f.ring.nvars:
        raise ValueError(f"point must have {f.ring.nvars} coordinates")
    pt = [as_scalar(a) for a in point]
    total = Fraction(0)
    for e, c in f._terms.items():
        v = c
        for a, k in zip(pt, e):
            if k:
                v *= a**k
        total += v
    return total


# -- univariate utilities in the last variable ---------------------------------


def _require_univariate(f: Poly) -> None:
    j = foreign_variable(f)
    if j is not None:
        raise PreconditionError(f"{f} is not univariate in x{f.ring.nvars} (depends on x{j})")


def to_dense(f: Poly) -> list[Fraction]:
    """Coefficient list of a univariate polynomial in xn, lowest degree first."""
    _require_univariate(f)
    if not f:
        return []
    out = [Fraction(0)] * (f.degree_in(f.ring.nvars) + 1)
    for e, c in f._terms.items():
        out[e[-1]] = c
    return out


def from_dense(ring: RingSpec, coeffs: Sequence) -> Poly:
    pad = (0,) * (ring.nvars - 1)
    return Poly(ring, {pad + (k,): c for k, c in enumerate(coeffs) if c})


def _trim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def _dsub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _dmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _ddivmod(a: list, b: list) -> tuple[list, list]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    if len(rem) < len(b):
        return [], _trim(rem)
    quot = [Fraction(0)] * (len(rem) - len(b) + 1)
    lb = b[-1]
    for k in range(len(rem) - len(b), -1, -1):
        c = rem[k + len(b) - 1] / lb
        quot[k] = c
        if c:
            for i, y in enumerate(b):
                rem[k + i] -= c * y
    return _trim(quot), _trim(rem[: len(b) - 1])


def _ext_gcd(a: list, b: list) -> tuple[list, list, list]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b), not normalized."""
    r0, r1 = a, b
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    if not a and not b:
        return [], [], []
    while r1:
        q, r = _ddivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _dsub(s0, _dmul(q, s1))
        t0, t1 = t1, _dsub(t0, _dmul(q, t1))
    return r0, s0, t0


def uni_extended_gcd(qs: Sequence[Poly], ring: RingSpec | None = None) -> tuple[Poly, list[Poly]]:
    """Monic gcd ``g`` of univariate polynomials in xn and cofactors with sum(r*q) == g.

    The zero list (or empty list, which needs ``ring``) gives ``g = 0`` and
    all-zero cofactors. When the gcd is a unit it is 1, so the cofactors form
    a Bezout certificate for 1.
    """
    if qs:
        ring = check_same_ring(*qs)
    elif ring is None:
        raise ValueError("ring is required for an empty list")
    if ring.is_series:
        raise PreconditionError("uni_extended_gcd works in polynomial mode; use series_gcd_order")
    dense = [to_dense(q) for q in qs]
    g: list = []
    rs: list[list] = [[] for _ in dense]
    for i, q in enumerate(dense):
        g, s, t = _ext_gcd(g, q)
        for k in range(i):
            rs[k] = _dmul(rs[k], s)
        rs[i] = t
    if g:
        inv = 1 / g[-1]
        g = [c * inv for c in g]
        rs = [[c * inv for c in r] for r in rs]
    return from_dense(ring, g), [from_dense(ring, r) for r in rs]


def order_in_last(f: Poly) -> int | None:
    """Least xn-exponent among the terms of a univariate ``f``; None for zero."""
    _require_univariate(f)
    return min((e[-1] for e in f._terms), default=None)


def series_gcd_order(qs: Sequence[Poly], ring: RingSpec | None = None) -> tuple[Poly, int | None]:
    """gcd in k[[xn]]: ``xn^m`` with ``m`` the least order among the nonzero ``qs``.

    Returns ``(g, i)`` where ``i`` is the first index attaining the minimum,
    or ``(0, None)`` when every entry is zero.
    """
    if qs:
        ring = check_same_ring(*qs)
    elif ring is None:
        raise ValueError("ring is required for an empty list")
    best, witness = None, None
    for i, q in enumerate(qs):
        m = order_in_last(q)
        if m is not None and (best is None or m < best):
            best, witness = m, i
    if best is None:
        return Poly.zero(ring), None
    e = [0] * ring.nvars
    e[-1] = best
    return Poly(ring, {tuple(e): 1}), witness


def series_inverse(f: Poly) -> Poly:
    """Inverse of a unit of k[[xn]] modulo the truncation order."""
    ring = f.ring
    if not ring.is_series:
        raise PreconditionError("series_inverse needs series mode")
    a = to_dense(f)
    if not a or not a[0]:
        raise PreconditionError(f"{f} is not a unit in k[[x{ring.nvars}]]")
    N = ring.trunc
    a = a + [Fraction(0)] * max(0, N - len(a))
    b = [1 / a[0]]
    for k in range(1, N):
        s = sum(a[i] * b[k - i] for i in range(1, k + 1))
        b.append(-s / a[0])
    return from_dense(ring, b)


def uni_antiderivative(f: Poly) -> Poly:
    """Antiderivative in xn with zero constant term."""
    a = to_dense(f)
    return from_dense(f.ring, [0] + [c / (k + 1) for k, c in enumerate(a)])


def scalar_ratio(a: Poly, b: Poly) -> Fraction | None:
    """The scalar ``c`` with ``a == c * b`` for nonzero ``b``, or None if there is none."""
    if not b:
        raise ZeroDivisionError("scalar_ratio by the zero polynomial")
    if not a:
        return Fraction(0)
    if a._terms.keys() != b._terms.keys():
        return None
    e0 = next(iter(b._terms))
    c = a._terms[e0] / b._terms[e0]
    if all(a._terms[e] == c * v for e, v in b._terms.items()):
        return c
    return None
