"""Derivations ``sum(a_j * d/dx_j)`` as coefficient vectors.

Application, Lie bracket, divergence, iteration, a semi-decision for local
nilpotency and the commutative-basis test all live here.

Local nilpotency is only checked on the generators ``x1 .. xn``. That is
enough: the elements killed by some power of a derivation form a
subalgebra (``d^(a+b)(fg)`` expands by Leibniz into products where one
factor is already zero), so a derivation nilpotent on every generator is
locally nilpotent on the whole polynomial ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import PreconditionError, RingMismatchError
from .matrix import determinant
from .poly import (
    Poly,
    RingSpec,
    _format_term,
    _is_number,
    check_same_ring,
    format_poly,
    is_unit,
    scalar_ratio,
)


class Derivation:
    """Immutable derivation; ``coeffs[j-1]`` is the coefficient of ``d/dxj``."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: RingSpec, coeffs: Sequence[Poly]):
        coeffs = tuple(coeffs)
        if len(coeffs) != ring.nvars:
            raise ValueError(f"a derivation of {ring} needs {ring.nvars} coefficients, got {len(coeffs)}")
        for c in coeffs:
            if not isinstance(c, Poly):
                raise TypeError("coefficients must be Poly instances")
            if c.ring != ring:
                raise RingMismatchError(f"coefficient ring {c.ring} differs from {ring}")
        self.ring = ring
        self.coeffs = coeffs

    @classmethod
    def zero(cls, ring: RingSpec) -> Derivation:
        return cls(ring, [Poly.zero(ring)] * ring.nvars)

    @classmethod
    def partial(cls, ring: RingSpec, j: int) -> Derivation:
        """``d/dxj`` (1-based)."""
        if not 1 <= j <= ring.nvars:
            raise IndexError(f"variable index {j} out of range 1..{ring.nvars}")
        coeffs = [Poly.zero(ring)] * ring.nvars
        coeffs[j - 1] = Poly.const(ring, 1)
        return cls(ring, coeffs)

    @classmethod
    def parse(cls, text: str, ring: RingSpec) -> Derivation:
        from .parsing import parse_derivation_coeffs

        return cls(ring, parse_derivation_coeffs(text, ring))

    def coefficient(self, j: int) -> Poly:
        return self.coeffs[j - 1]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def max_degree(self) -> int:
        return max((c.total_degree() for c in self.coeffs), default=-1)

    def __call__(self, f: Poly) -> Poly:
        return apply(self, f)

    def __add__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        check_same_ring(self, other)
        return Derivation(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        check_same_ring(self, other)
        return Derivation(self.ring, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return Derivation(self.ring, [-a for a in self.coeffs])

    def __rmul__(self, other):
        # polynomial or scalar multiple: (p*d)(f) = p*d(f)
        if isinstance(other, Poly) or _is_number(other):
            return Derivation(self.ring, [other * a for a in self.coeffs])
        return NotImplemented

    __mul__ = __rmul__

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __str__(self):
        return format_derivation(self)

    def __repr__(self):
        return f"Derivation({str(self)!r}, {self.ring})"


def format_derivation(d: Derivation) -> str:
    """Canonical text, e.g. ``x3^2*dx1 + x3*dx2 + 2*dx3``; ``(x2 + 1)*dx2`` for sums."""
    parts = []
    for j, c in enumerate(d.coeffs, start=1):
        if not c:
            continue
        if len(c) == 1:
            (e, v), = c.terms.items()
            body = _format_term(e, v)
            body = f"dx{j}" if body == "1" else f"{body}*dx{j}"
            negative = v < 0
        else:
            body = f"({format_poly(c)})*dx{j}"
            negative = False
        if not parts:
            parts.append("-" + body if negative else body)
        else:
            parts.append((" - " if negative else " + ") + body)
    return "".join(parts) or "0"


@dataclass(frozen=True)
class DerivationFamily:
    """Nonempty ordered family of named derivations over one ring."""

    ring: RingSpec
    names: tuple[str, ...]
    members: tuple[Derivation, ...]

    def __post_init__(self):
        if not self.members:
            raise ValueError("a derivation family must be nonempty")
        if len(self.names) != len(self.members):
            raise ValueError("names and members differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("member names must be unique")
        for d in self.members:
            if d.ring != self.ring:
                raise RingMismatchError(f"member ring {d.ring} differs from {self.ring}")

    @classmethod
    def of(cls, members: Sequence[Derivation], names: Sequence[str] | None = None) -> DerivationFamily:
        members = tuple(members)
        if not members:
            raise ValueError("a derivation family must be nonempty")
        if names is None:
            names = [f"d{i}" for i in range(1, len(members) + 1)]
        return cls(members[0].ring, tuple(names), members)

    def __len__(self):
        return len(self.members)

    def __iter__(self) -> Iterator[Derivation]:
        return iter(self.members)

    def __getitem__(self, key) -> Derivation:
        if isinstance(key, str):
            return self.members[self.names.index(key)]
        return self.members[key]

    def items(self):
        return zip(self.names, self.members)


# -- basic operations ------------------------------------------------------------


def apply(d: Derivation, f: Poly) -> Poly:
    if f.ring != d.ring:
        raise RingMismatchError(f"ring mismatch: {d.ring} vs {f.ring}")
    out = Poly.zero(f.ring)
    for j, a in enumerate(d.coeffs, start=1):
        if a:
            df = f.diff(j)
            if df:
                out = out + a * df
    return out


def bracket(d1: Derivation, d2: Derivation) -> Derivation:
    """Commutator ``d1∘d2 - d2∘d1``, computed componentwise as ``d1(b_j) - d2(a_j)``."""
    check_same_ring(d1, d2)
    return Derivation(
        d1.ring, [apply(d1, b) - apply(d2, a) for a, b in zip(d1.coeffs, d2.coeffs)]
    )


def commutes(d1: Derivation, d2: Derivation) -> bool:
    return bracket(d1, d2).is_zero()


def divergence(d: Derivation) -> Poly:
    out = Poly.zero(d.ring)
    for j, a in enumerate(d.coeffs, start=1):
        out = out + a.diff(j)
    return out


def is_special(d: Derivation) -> bool:
    return divergence(d).is_zero()


def iterate(d: Derivation, f: Poly, k: int) -> list[Poly]:
    """``[f, d(f), ..., d^k(f)]``."""
    if k < 0:
        raise ValueError("iteration count must be non-negative")
    chain = [f]
    for _ in range(k):
        chain.append(apply(d, chain[-1]))
    return chain


# -- local nilpotency --------------------------------------------------------------


@dataclass(frozen=True)
class Nilpotent:
    """``d^order(x) == 0`` and ``d^(order-1)(x) != 0``."""

    order: int


@dataclass(frozen=True)
class NotNilpotent:
    """``d^k(x) == c * d^m(x)`` with ``c != 0`` and ``d^m(x) != 0``, ``m < k``."""

    m: int
    k: int
    c: Fraction


@dataclass(frozen=True)
class Unknown:
    budget: int


@dataclass(frozen=True)
class NilpotencyReport:
    budget: int
    verdicts: tuple  # one verdict per generator x1..xn

    @property
    def locally_nilpotent(self) -> bool:
        """Nilpotent on every generator within budget, hence on the whole ring."""
        return all(isinstance(v, Nilpotent) for v in self.verdicts)

    @property
    def refuted(self) -> bool:
        return any(isinstance(v, NotNilpotent) for v in self.verdicts)

    @property
    def orders(self) -> tuple:
        return tuple(v.order if isinstance(v, Nilpotent) else None for v in self.verdicts)


def default_budget(d: Derivation) -> int:
    return 2 + d.ring.nvars * (1 + max(d.max_degree(), 0))


def _generator_verdict(d: Derivation, x: Poly, budget: int):
    seen: list[Poly] = [x]
    current = x
    for step in range(1, budget + 1):
        current = apply(d, current)
        if not current:
            return Nilpotent(step)
        for m, earlier in enumerate(seen):
            c = scalar_ratio(current, earlier) if earlier else None
            if c:
                return NotNilpotent(m, step, c)
        seen.append(current)
    return Unknown(budget)


def is_locally_nilpotent(d: Derivation, budget: int | None = None) -> NilpotencyReport:
    """Iterate ``d`` on each generator for at most ``budget`` steps.

    Each generator ends as Nilpotent (first zero iterate), NotNilpotent (an
    iterate repeated up to a nonzero scalar, which forbids ever reaching 0)
    or Unknown when the budget runs out.
    """
    if d.ring.is_series:
        raise PreconditionError("local nilpotency is only checked in polynomial mode")
    if budget is None:
        budget = default_budget(d)
    if not isinstance(budget, int) or budget < 1:
        raise PreconditionError("budget must be a positive integer")
    verdicts = tuple(
        _generator_verdict(d, Poly.var(d.ring, j), budget) for j in range(1, d.ring.nvars + 1)
    )
    return NilpotencyReport(budget, verdicts)


# -- commutative bases ---------------------------------------------------------------


@dataclass(frozen=True)
class BasisCheck:
    is_basis: bool
    det: Poly
    pairwise_commuting: bool


def coefficient_matrix(fam: DerivationFamily) -> list[list[Poly]]:
    return [list(d.coeffs) for d in fam]


def first_noncommuting_pair(fam: DerivationFamily):
    """``(i, j, bracket)`` for the first pair i < j with a nonzero bracket, else None."""
    members = fam.members
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            b = bracket(members[i], members[j])
            if not b.is_zero():
                return i, j, b
    return None


def basis_check(fam: DerivationFamily) -> BasisCheck:
    """Is ``fam`` a commutative basis of the module of derivations?

    A family of ``n`` derivations is a basis iff its coefficient matrix has
    a unit determinant.
    """
    if fam.ring.is_series:
        raise PreconditionError("basis_check is only defined in polynomial mode")
    if len(fam) != fam.ring.nvars:
        raise PreconditionError(f"a basis needs exactly {fam.ring.nvars} members, got {len(fam)}")
    det = determinant(coefficient_matrix(fam))
    return BasisCheck(is_unit(det), det, first_noncommuting_pair(fam) is None)
