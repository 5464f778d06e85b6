"""Random generators and independent oracles shared by the test modules."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from hypothesis import strategies as st

from derlab.derivation import Derivation, DerivationFamily
from derlab.poly import Poly, RingSpec

# -- seeded generators (acceptance suites) -------------------------------------------


def rand_scalar(rng: random.Random, nonzero=False, size=5) -> Fraction:
    while True:
        c = Fraction(rng.randint(-size, size), rng.randint(1, 3))
        if c or not nonzero:
            return c


def rand_poly(rng, ring, max_deg=3, max_terms=4, univariate=False) -> Poly:
    n = ring.nvars
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        if univariate:
            e = (0,) * (n - 1) + (rng.randint(0, max_deg),)
        else:
            e = [0] * n
            for _ in range(rng.randint(0, max_deg)):
                e[rng.randrange(n)] += 1
            e = tuple(e)
        terms[e] = terms.get(e, 0) + rand_scalar(rng)
    return Poly(ring, terms)


def rand_uni(rng, ring, max_deg=4) -> Poly:
    return rand_poly(rng, ring, max_deg=max_deg, max_terms=max_deg + 1, univariate=True)


def rand_derivation(rng, ring, max_deg=3, univariate=False) -> Derivation:
    return Derivation(ring, [rand_poly(rng, ring, max_deg, univariate=univariate) for _ in range(ring.nvars)])


def partials(ring):
    return [Derivation.partial(ring, j) for j in range(1, ring.nvars)]


def case_b_family(rng, ring, extra=2, max_deg=4):
    """Partials plus members sum_l (lam v_l + c_l) dx_l + lam*beta dxn; returns (family, v, params)."""
    n = ring.nvars
    v = [rand_uni(rng, ring, max_deg) for _ in range(n - 1)]
    beta = rand_scalar(rng, nonzero=True)
    v.append(Poly.const(ring, beta))
    members, params = partials(ring), []
    for k in range(extra):
        lam = rand_scalar(rng, nonzero=(k == 0))
        cs = [rand_scalar(rng) for _ in range(n - 1)]
        coeffs = [vl * lam + c for vl, c in zip(v, cs)] + [v[-1] * lam]
        members.append(Derivation(ring, coeffs))
        params.append((lam, cs))
    names = [f"p{j}" for j in range(1, n)] + [f"m{k}" for k in range(1, extra + 1)]
    return DerivationFamily.of(members, names), v, params


def case_a_family(rng, ring, extra=2, max_deg=4):
    n = ring.nvars
    members = partials(ring)
    for _ in range(extra):
        coeffs = [rand_uni(rng, ring, max_deg) for _ in range(n - 1)] + [Poly.zero(ring)]
        members.append(Derivation(ring, coeffs))
    return DerivationFamily.of(members)


def structured_family(rng, ring, extra=None):
    """Partials plus 1-3 members with univariate coefficients, often sharing a factor in xn."""
    n = ring.nvars
    extra = extra or rng.randint(1, 3)
    common = Poly.const(ring, 1)
    if rng.random() < 0.5:
        common = rand_uni(rng, ring, 2) or Poly.var(ring, n)
    members = partials(ring)
    for _ in range(extra):
        coeffs = [rand_uni(rng, ring, 3) for _ in range(n - 1)]
        coeffs.append(common * rand_uni(rng, ring, 3) if rng.random() < 0.85 else Poly.zero(ring))
        members.append(Derivation(ring, coeffs))
    return DerivationFamily.of(members)


# -- hypothesis strategies ----------------------------------------------------------------

scalars = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def polys(draw, ring, max_deg=4, max_terms=6, univariate=False):
    n = ring.nvars
    k = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(k):
        if univariate:
            e = (0,) * (n - 1) + (draw(st.integers(0, max_deg)),)
        else:
            e = tuple(draw(st.lists(st.integers(0, max_deg), min_size=n, max_size=n)))
            while sum(e) > max_deg:
                i = max(range(n), key=lambda j: e[j])
                e = e[:i] + (e[i] - 1,) + e[i + 1 :]
        terms[e] = terms.get(e, 0) + draw(scalars)
    return Poly(ring, terms)


rings = st.sampled_from([RingSpec.polynomial(1), RingSpec.polynomial(2), RingSpec.polynomial(3)])


@st.composite
def derivations(draw, ring, max_deg=3):
    return Derivation(ring, [draw(polys(ring, max_deg=max_deg, max_terms=3)) for _ in range(ring.nvars)])


# -- independent oracles --------------------------------------------------------------------


def permutation_determinant(rows):
    """Leibniz formula: sum over permutations of signed products."""
    n = len(rows)
    ring = rows[0][0].ring
    total = Poly.zero(ring)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Poly.const(ring, -1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term = term * rows[i][j]
        total = total + term
    return total


def compose_apply(d1, d2, f):
    """``d1(d2(f)) - d2(d1(f))`` evaluated by applying the operators directly."""
    from derlab.derivation import apply

    return apply(d1, apply(d2, f)) - apply(d2, apply(d1, f))


def commutes_with_partials(d) -> bool:
    """Brute-force commutant test: ``[dxj, d] (x_i) == 0`` for all j < n, all i, via composition."""
    ring = d.ring
    for j in range(1, ring.nvars):
        p = Derivation.partial(ring, j)
        for i in range(1, ring.nvars + 1):
            if compose_apply(p, d, Poly.var(ring, i)):
                return False
    return True
