"""Decision procedures for families of derivations containing the first n-1 partials.

Every derivation commuting with ``d/dx1 .. d/dx(n-1)`` has coefficients in
``k[xn]``. For such families simplicity is decided by the gcd of the
``d/dxn`` coefficients, commuting families split into two explicit shapes,
and a simple commuting family shrinks to ``n`` members which form a
commutative, locally nilpotent basis with explicit slice coordinates.

All results are re-verified before they are returned; a failed
re-verification raises :class:`InternalConsistencyError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .derivation import (
    BasisCheck,
    Derivation,
    DerivationFamily,
    NilpotencyReport,
    apply,
    basis_check,
    first_noncommuting_pair,
    is_locally_nilpotent,
)
from .errors import InternalConsistencyError, PreconditionError
from .matrix import determinant
from .poly import (
    Poly,
    RingSpec,
    foreign_variable,
    is_unit,
    scalar_ratio,
    series_gcd_order,
    series_inverse,
    truncate,
    uni_antiderivative,
    uni_extended_gcd,
)

# -- commutant form ---------------------------------------------------------------


@dataclass(frozen=True)
class FormWitness:
    """The coefficient of ``dx{coefficient}`` involves ``x{variable}`` (variable < n)."""

    coefficient: int
    variable: int


def lemma_form_witness(d: Derivation) -> FormWitness | None:
    for j, a in enumerate(d.coeffs, start=1):
        v = foreign_variable(a)
        if v is not None:
            return FormWitness(j, v)
    return None


def lemma_form_check(d: Derivation) -> bool:
    """True iff every coefficient of ``d`` lies in k[xn].

    Equivalently, ``d`` commutes with ``d/dx1, ..., d/dx(n-1)``.
    """
    return lemma_form_witness(d) is None


def partial_positions(fam: DerivationFamily) -> list[int | None]:
    """Position in ``fam`` of the first exact copy of ``d/dxj`` for j = 1..n-1."""
    out = []
    for j in range(1, fam.ring.nvars):
        target = Derivation.partial(fam.ring, j)
        out.append(next((i for i, d in enumerate(fam) if d == target), None))
    return out


def _require_partials(fam: DerivationFamily) -> list[int]:
    pos = partial_positions(fam)
    for j, p in enumerate(pos, start=1):
        if p is None:
            raise PreconditionError(f"family does not contain dx{j}")
    return pos


def _require_lemma_form(fam: DerivationFamily) -> None:
    for name, d in fam.items():
        w = lemma_form_witness(d)
        if w is not None:
            raise PreconditionError(
                f"member {name}: coefficient of dx{w.coefficient} depends on x{w.variable}"
            )


# -- simplicity ---------------------------------------------------------------------


class SimplicityCertificate:
    simple: bool


@dataclass(frozen=True)
class Simple(SimplicityCertificate):
    """``sum(bezout[i] * q[i]) == 1`` where ``q[i]`` is the dxn-coefficient of member i."""

    bezout: tuple[Poly, ...]
    simple = True


@dataclass(frozen=True)
class NotSimple(SimplicityCertificate):
    """A proper nonzero principal ideal stable under every member."""

    stable_generator: Poly
    simple = False


def _divides(g: Poly, h: Poly) -> bool:
    if not h:
        return True
    if is_unit(g):
        return True
    if not g.ring.is_series:
        return h.exact_quotient(g) is not None
    if len(g) != 1:
        raise PreconditionError(
            "principal-ideal membership in series mode is only decided for monomial or unit generators"
        )
    (ge,) = g.terms
    return all(all(a >= b for a, b in zip(e, ge)) for e in h.terms)


def stable_ideal_oracle(fam: DerivationFamily, g: Poly) -> bool:
    """True iff ``d(g)`` lies in the ideal ``<g>`` for every member ``d``."""
    if not g:
        raise PreconditionError("the zero ideal is trivially stable; pass a nonzero generator")
    return all(_divides(g, apply(d, g)) for d in fam)


def bezout_sum(fam: DerivationFamily, bezout: Sequence[Poly]) -> Poly:
    total = Poly.zero(fam.ring)
    for r, d in zip(bezout, fam):
        total = total + r * d.coeffs[-1]
    return total


def verify_certificate(fam: DerivationFamily, cert: SimplicityCertificate) -> bool:
    if isinstance(cert, Simple):
        return len(cert.bezout) == len(fam) and bezout_sum(fam, cert.bezout) == 1
    g = cert.stable_generator
    return bool(g) and not is_unit(g) and stable_ideal_oracle(fam, g)


def family_simplicity(fam: DerivationFamily) -> SimplicityCertificate:
    """Decide whether ``fam`` has no proper nonzero stable ideal.

    The family must contain ``dx1 .. dx(n-1)`` and all its members must have
    coefficients in k[xn]. The answer hinges on the gcd ``g`` of the
    dxn-coefficients: a unit ``g`` gives a Bezout certificate, otherwise
    ``<g>`` (or ``<xn>`` when every coefficient vanishes) is stable.
    """
    _require_partials(fam)
    _require_lemma_form(fam)
    ring = fam.ring
    qs = [d.coeffs[-1] for d in fam]
    xn = Poly.var(ring, ring.nvars)
    if ring.is_series:
        g, w = series_gcd_order(qs)
        if not g:
            cert = NotSimple(xn)
        elif is_unit(g):
            zero = Poly.zero(ring)
            cert = Simple(tuple(series_inverse(q) if i == w else zero for i, q in enumerate(qs)))
        else:
            cert = NotSimple(g)
    else:
        g, rs = uni_extended_gcd(qs)
        if not g:
            cert = NotSimple(xn)
        elif is_unit(g):
            cert = Simple(tuple(rs))
        else:
            cert = NotSimple(g)
    if not verify_certificate(fam, cert):
        raise InternalConsistencyError(f"certificate failed re-verification: {cert}")
    return cert


# -- classification of commuting families -------------------------------------------


class Classification:
    names: tuple[str, ...]


@dataclass(frozen=True)
class NotLemmaForm(Classification):
    names: tuple[str, ...]
    member: str
    witness: FormWitness


@dataclass(frozen=True)
class NotCommuting(Classification):
    names: tuple[str, ...]
    pair: tuple[str, str]
    bracket: Derivation


@dataclass(frozen=True)
class CaseA(Classification):
    """Every member is ``sum_l h_l(xn) dx_l`` over l < n; ``h_table[i]`` holds member i's h's."""

    names: tuple[str, ...]
    h_table: tuple[tuple[Poly, ...], ...]
    ring: RingSpec

    def reconstruct(self, i: int) -> Derivation:
        return Derivation(self.ring, list(self.h_table[i]) + [Poly.zero(self.ring)])


@dataclass(frozen=True)
class CaseB(Classification):
    """Member i is ``sum_l (lam_i v_l + c_l^i) dx_l + lam_i v_n dxn``.

    Normalized so the pivot (first member with a nonzero dxn-coefficient)
    has ``lam = 1`` and ``c = 0``.
    """

    names: tuple[str, ...]
    v: tuple[Poly, ...]
    lambdas: tuple[Fraction, ...]
    c: tuple[tuple[Fraction, ...], ...]
    pivot: int

    def reconstruct(self, i: int) -> Derivation:
        lam, cs = self.lambdas[i], self.c[i]
        coeffs = [vl * lam + cl for vl, cl in zip(self.v, cs)]
        coeffs.append(self.v[-1] * lam)
        return Derivation(self.v[0].ring, coeffs)


def _ratio(q: Poly, vn: Poly) -> Fraction | None:
    if q.ring.is_series:
        return scalar_ratio(q, vn)
    quot = q.exact_quotient(vn)
    if quot is None or not quot.is_constant():
        return None
    return quot.constant_term()


def classify_family(fam: DerivationFamily) -> Classification:
    """Split a family containing ``dx1 .. dx(n-1)`` into the commuting cases (a) / (b).

    Families that fail the commutant form or do not commute come back as
    NotLemmaForm / NotCommuting witnesses instead.
    """
    _require_partials(fam)
    ring = fam.ring
    n = ring.nvars
    names = fam.names
    for name, d in fam.items():
        w = lemma_form_witness(d)
        if w is not None:
            return NotLemmaForm(names, name, w)
    bad = first_noncommuting_pair(fam)
    if bad is not None:
        i, j, b = bad
        return NotCommuting(names, (names[i], names[j]), b)

    if all(not d.coeffs[-1] for d in fam):
        result = CaseA(names, tuple(tuple(d.coeffs[:-1]) for d in fam), ring)
    else:
        pivot = next(i for i, d in enumerate(fam) if d.coeffs[-1])
        v = fam[pivot].coeffs
        lambdas, cs = [], []
        for name, d in fam.items():
            lam = _ratio(d.coeffs[-1], v[-1])
            if lam is None:
                _truncation_or_bug(ring, f"dx{n}-coefficient of {name} is not a scalar multiple of the pivot's")
            row = []
            for l in range(n - 1):
                c = d.coeffs[l] - v[l] * lam
                if not c.is_constant():
                    _truncation_or_bug(ring, f"c_{l + 1} of {name} is not a scalar")
                row.append(c.constant_term())
            lambdas.append(lam)
            cs.append(tuple(row))
        result = CaseB(names, tuple(v), tuple(lambdas), tuple(cs), pivot)

    for i, d in enumerate(fam):
        if result.reconstruct(i) != d:
            raise InternalConsistencyError(f"classification does not reconstruct member {names[i]}")
    return result


def _truncation_or_bug(ring, message: str):
    if ring.is_series:
        # brackets vanish only modulo the truncation order, not in k[[x]]
        raise PreconditionError(f"{message}; the family commutes only modulo degree {ring.trunc}")
    raise InternalConsistencyError(message)


# -- upgrade, slices, nilpotent bases ---------------------------------------------------


def simplicity_upgrade(fam: DerivationFamily) -> DerivationFamily:
    """Shrink a simple case-(b) family to ``{dx1, .., dx(n-1), pivot}``, still simple."""
    cls = classify_family(fam)
    if isinstance(cls, NotLemmaForm):
        raise PreconditionError(
            f"member {cls.member}: coefficient of dx{cls.witness.coefficient} depends on x{cls.witness.variable}"
        )
    if isinstance(cls, NotCommuting):
        raise PreconditionError(f"members {cls.pair[0]} and {cls.pair[1]} do not commute")
    if isinstance(cls, CaseA):
        n = fam.ring.nvars
        raise PreconditionError(f"case (a): no member has a dx{n} component, so <x{n}> is stable")
    cert = family_simplicity(fam)
    if not cert.simple:
        raise PreconditionError(f"family is not simple: <{cert.stable_generator}> is stable")
    beta = cls.v[-1]
    ok = is_unit(beta) if fam.ring.is_series else (bool(beta) and beta.is_constant())
    if not ok:
        raise InternalConsistencyError(f"simple family with non-scalar pivot coefficient {beta}")
    keep = _require_partials(fam) + [cls.pivot]
    sub = DerivationFamily(
        fam.ring, tuple(fam.names[i] for i in keep), tuple(fam.members[i] for i in keep)
    )
    if not family_simplicity(sub).simple:
        raise InternalConsistencyError("upgraded subset lost simplicity")
    return sub


@dataclass(frozen=True)
class SliceCoordinates:
    """``d(f[-1]) == 1``, ``d(f[l]) == 0`` for the others, Jacobian determinant ``1/beta``."""

    f: tuple[Poly, ...]
    beta: Fraction


def jacobian_determinant(fs: Sequence[Poly]) -> Poly:
    n = fs[0].ring.nvars
    return determinant([[f.diff(j) for j in range(1, n + 1)] for f in fs])


def slice_coordinates(d: Derivation) -> SliceCoordinates:
    """Coordinates straightening ``d = sum_l a_l(xn) dx_l + beta dxn`` into ``d/d(f_n)``.

    ``f_n = xn / beta`` and ``f_l = x_l - F_l`` where ``F_l`` is the
    antiderivative of ``a_l / beta`` with zero constant term. In series mode
    ``d(f_l) = 0`` holds modulo degree ``trunc - 1``: the antiderivative's
    top term is cut off by the truncation.
    """
    ring = d.ring
    n = ring.nvars
    w = lemma_form_witness(d)
    if w is not None:
        raise PreconditionError(f"coefficient of dx{w.coefficient} depends on x{w.variable}")
    bn = d.coeffs[-1]
    if not bn or not bn.is_constant():
        raise PreconditionError(f"dx{n}-coefficient must be a nonzero scalar, got {bn}")
    beta = bn.constant_term()
    inv = 1 / beta
    fs = [Poly.var(ring, l) - uni_antiderivative(d.coeffs[l - 1] * inv) for l in range(1, n)]
    fs.append(Poly.var(ring, n) * inv)

    exact_below = ring.trunc - 1 if ring.is_series else None
    for l, f in enumerate(fs[:-1], start=1):
        image = apply(d, f)
        if exact_below is not None:
            image = truncate(image, exact_below)
        if image:
            raise InternalConsistencyError(f"d(f{l}) = {image}, expected 0")
    if apply(d, fs[-1]) != 1:
        raise InternalConsistencyError(f"d(f{n}) != 1")
    if jacobian_determinant(fs) != inv:
        raise InternalConsistencyError("Jacobian determinant of the slice is not 1/beta")
    return SliceCoordinates(tuple(fs), beta)


@dataclass(frozen=True)
class NilpotentBasisReport:
    subset: DerivationFamily
    basis: BasisCheck
    nilpotency: tuple[NilpotencyReport, ...]

    @property
    def certified(self) -> bool:
        """Commutative basis whose members are all nilpotent on generators within budget."""
        return (
            self.basis.is_basis
            and self.basis.pairwise_commuting
            and all(r.locally_nilpotent for r in self.nilpotency)
        )


def verify_nilpotent_basis(fam: DerivationFamily, budget: int | None = None) -> NilpotentBasisReport:
    """Upgrade ``fam``, then check the subset is a commutative basis of locally nilpotent derivations.

    ``budget=None`` uses each member's default iteration budget.
    """
    if fam.ring.is_series:
        raise PreconditionError("nilpotent-basis verification is only defined in polynomial mode")
    sub = simplicity_upgrade(fam)
    basis = basis_check(sub)
    reports = tuple(is_locally_nilpotent(d, budget) for d in sub)
    return NilpotentBasisReport(sub, basis, reports)
