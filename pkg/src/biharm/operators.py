"""Differential operators acting on banded kernel expansions.

A kernel candidate on the unit disc is stored as a finite sum

    u(z) = sum_beta f_beta(x) / |1 - z|^(2 beta),        x = |z|^2,

with each ``f_beta`` a polynomial in ``t = 1 - x`` (a ``LaurentPoly`` with
nonnegative exponents).  The Laplacian ``D = d^2/(dz dzbar)`` maps the band
``beta`` term to a pair of neighbouring bands:

    D(f / |1-z|^(2 beta)) = (P_beta f) / |1-z|^(2 beta)
                            + (Q_beta f) / |1-z|^(2 (beta+1)),

where, writing ' for d/dx,

    P_beta f = (1 - beta) f' + x f'',
    Q_beta f = beta (beta f + (1 - x) f').

Iterating the band map through division by the weight
``w(x) = (1 - x)^gamma`` gives the weighted biharmonic image of an
expansion.  For single monomials ``t^k`` the three two-step compositions
collapse to closed-form products, implemented in ``monomial_rule``; the
generic compositions remain available as an independent slow path, and the
two are required to agree everywhere (see the operator tests).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Tuple

from .exact import (
    LaurentPoly,
    poly_add,
    poly_d_dx,
    poly_from_terms,
    poly_mul_x,
    poly_scale,
    poly_shift,
)

# Band-indexed coefficient sequence: beta -> polynomial in t.  The same shape
# as KernelExpansion.terms, but entries may be genuinely Laurent (negative
# exponents) after division by the weight.
CoeffSequence = Dict[int, LaurentPoly]

RULE_KINDS = ("QQ", "PQ+QP", "PP")


@dataclass(frozen=True)
class KernelExpansion:
    """A finite banded expansion sum_beta f_beta(t) / |1-z|^(2 beta).

    terms maps beta >= 1 to a nonzero polynomial in t = 1 - x.  Instances
    are treated as immutable; the constructor helper ``make_expansion``
    canonicalizes by dropping zero polynomials.
    """

    gamma: int
    terms: Dict[int, LaurentPoly]

    def max_beta(self) -> int:
        return max(self.terms) if self.terms else 0


def make_expansion(gamma: int, terms: Dict[int, LaurentPoly]) -> KernelExpansion:
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    clean: Dict[int, LaurentPoly] = {}
    for beta, poly in terms.items():
        if beta < 1:
            raise ValueError(f"band index must be >= 1, got beta={beta}")
        if poly:
            clean[beta] = dict(poly)
    return KernelExpansion(gamma=gamma, terms=clean)


def expansion_add(u: KernelExpansion, v: KernelExpansion) -> KernelExpansion:
    if u.gamma != v.gamma:
        raise ValueError("cannot add expansions with different gamma")
    out: Dict[int, LaurentPoly] = dict(u.terms)
    for beta, poly in v.terms.items():
        out[beta] = poly_add(out.get(beta, {}), poly)
    return make_expansion(u.gamma, out)


def expansion_scale(c: Fraction | int, u: KernelExpansion) -> KernelExpansion:
    return make_expansion(u.gamma, {b: poly_scale(c, p) for b, p in u.terms.items()})


# ---------------------------------------------------------------------------
# single-band operators


def apply_P(beta: int, f: LaurentPoly) -> LaurentPoly:
    """P_beta f = (1 - beta) f' + x f'' with ' = d/dx."""
    df = poly_d_dx(f)
    return poly_add(poly_scale(1 - beta, df), poly_mul_x(poly_d_dx(df)))


def apply_Q(beta: int, f: LaurentPoly) -> LaurentPoly:
    """Q_beta f = beta (beta f + t f') with ' = d/dx.  Q_0 is identically 0."""
    if beta == 0:
        return {}
    return poly_scale(beta, poly_add(poly_scale(beta, f), poly_shift(poly_d_dx(f), 1)))


def apply_winv(gamma: int, f: LaurentPoly) -> LaurentPoly:
    """Divide by the weight (1 - x)^gamma, i.e. shift all exponents by -gamma."""
    return poly_shift(f, -gamma)


# ---------------------------------------------------------------------------
# closed-form monomial rules


def monomial_rule(gamma: int, beta: int, k: int, which: str) -> LaurentPoly:
    """Closed form of a two-step band composition applied to t^k.

    which selects the composition (lower band index beta in all three):

      "QQ"    : Q_(beta+1) w^-1 Q_beta        -> lands 2 bands up
      "PQ+QP" : P_(beta+1) w^-1 Q_beta + Q_beta w^-1 P_beta   -> 1 band up
      "PP"    : P_beta w^-1 P_beta            -> same band

    Each returns a polynomial with at most three terms; exponents may be
    negative for small k.  Agrees with the generic composition for every
    (gamma, beta, k) — the product forms below absorb all telescoping.
    """
    if which == "QQ":
        c = beta * (beta + 1) * (beta - k) * (beta + gamma + 1 - k)
        return poly_from_terms([(k - gamma, c)])
    if which == "PQ+QP":
        c1 = beta * (beta + gamma + 1 - k) * (beta - k) * (2 * k - gamma)
        c2 = beta * (
            k * (k - 1) * (beta + gamma + 2 - k)
            + (beta - k) * (k - gamma) * (k - gamma - 1)
        )
        return poly_from_terms([(k - gamma - 1, c1), (k - gamma - 2, c2)])
    if which == "PP":
        c1 = k * (beta - k) * (k - gamma - 1) * (beta + gamma + 1 - k)
        c2 = k * (k - gamma - 2) * (
            (beta - k) * (k - gamma - 1)
            + (beta - 1) * (k - 1)
            - (k - 1) * (k - gamma - 3)
        )
        c3 = k * (k - 1) * (k - gamma - 2) * (k - gamma - 3)
        return poly_from_terms(
            [(k - gamma - 2, c1), (k - gamma - 3, c2), (k - gamma - 4, c3)]
        )
    raise ValueError(f"unknown rule kind {which!r}; expected one of {RULE_KINDS}")


def monomial_rule_generic(gamma: int, beta: int, k: int, which: str) -> LaurentPoly:
    """The same compositions evaluated literally through apply_P/Q and w^-1."""
    mono: LaurentPoly = {k: Fraction(1)}
    if which == "QQ":
        return apply_Q(beta + 1, apply_winv(gamma, apply_Q(beta, mono)))
    if which == "PQ+QP":
        first = apply_P(beta + 1, apply_winv(gamma, apply_Q(beta, mono)))
        second = apply_Q(beta, apply_winv(gamma, apply_P(beta, mono)))
        return poly_add(first, second)
    if which == "PP":
        return apply_P(beta, apply_winv(gamma, apply_P(beta, mono)))
    raise ValueError(f"unknown rule kind {which!r}; expected one of {RULE_KINDS}")


def monomial_image(gamma: int, beta: int, k: int) -> Dict[int, LaurentPoly]:
    """Biharmonic image of t^k / |1-z|^(2 beta), banded: band -> polynomial.

    The monomial contributes to bands beta, beta+1, beta+2 through the PP,
    PQ+QP, and QQ rules respectively.  Zero contributions are dropped.
    """
    out: Dict[int, LaurentPoly] = {}
    for offset, which in ((0, "PP"), (1, "PQ+QP"), (2, "QQ")):
        poly = monomial_rule(gamma, beta, k, which)
        if poly:
            out[beta + offset] = poly
    return out


# ---------------------------------------------------------------------------
# band pipelines


def _seq_pq(seq: CoeffSequence) -> CoeffSequence:
    """One Laplacian pass on a band sequence: g_m = P_m s_m + Q_(m-1) s_(m-1)."""
    if not seq:
        return {}
    out: CoeffSequence = {}
    top = max(seq)
    for m in range(1, top + 2):
        g = poly_add(apply_P(m, seq.get(m, {})), apply_Q(m - 1, seq.get(m - 1, {})))
        if g:
            out[m] = g
    return out


def _seq_winv(gamma: int, seq: CoeffSequence) -> CoeffSequence:
    return {m: apply_winv(gamma, p) for m, p in seq.items()}


def laplacian(u: KernelExpansion) -> CoeffSequence:
    """Banded Laplacian of an expansion: band m of D(u)."""
    return _seq_pq(u.terms)


def biharmonic(u: KernelExpansion) -> CoeffSequence:
    """Banded image of u under D w^-1 D, via the generic composition."""
    return _seq_pq(_seq_winv(u.gamma, _seq_pq(u.terms)))


def biharmonic_via_rules(u: KernelExpansion) -> CoeffSequence:
    """Banded image of u under D w^-1 D, accumulated from monomial_rule.

    Must agree with ``biharmonic`` on every expansion; the builder uses this
    path because single-monomial columns are what the linear system needs.
    """
    acc: CoeffSequence = {}
    for beta, poly in u.terms.items():
        for k, coeff in poly.items():
            for band, img in monomial_image(u.gamma, beta, k).items():
                acc[band] = poly_add(acc.get(band, {}), poly_scale(coeff, img))
    return {m: p for m, p in acc.items() if p}


def seq_is_zero(seq: CoeffSequence) -> bool:
    return all(not p for p in seq.values())
