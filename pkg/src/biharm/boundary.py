"""Distributional boundary data of building-block terms t^k / |1-z|^(2 beta).

For a term u = t^k / |1-z|^(2 beta) the circular means u_r concentrate, as
r -> 1, at the boundary point z = 1: tested against a smooth function phi,

    <u_r, phi> = a phi(1) + b (1 - r) phi(1) + O((1 - r)^2),

so the boundary value is a * delta_1 and the inward normal derivative is
b * delta_1.  This module computes the exact pair (a, b).

The computation rests on the closed form of the integral mean

    mean of t^k / |1-z|^(2 beta) at radius r = (1 - s)^(k - 2 beta + 1) p(s),

with s = r^2 and p a polynomial of degree <= 2 beta - 2 (the truncation of
(1-s)^(2 beta - 1) sum_j C(j+beta-1, j)^2 s^j, which terminates because the
backward differences of squared binomials vanish from order 2 beta - 1 on).
Reading off the expansion at s = 1 gives

    k = 2 beta - 1  ->  (a, b) = (p(1), -2 p'(1))
    k = 2 beta      ->  (0, 2 p(1))
    k >= 2 beta + 1 ->  (0, 0)

while k < 2 beta - 1 means the mean diverges or tends to a non-delta limit
and is rejected.  The k >= 2 beta rules are a derived extension of the
k = 2 beta - 1 case, obtained by the factorization above; the numeric test
suite cross-checks them against high-precision quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import LaurentPoly, Rational, binom, poly_diff, poly_eval
from .operators import KernelExpansion


class NonDeltaBoundaryError(ValueError):
    """Raised for terms t^k / |1-z|^(2 beta) with k < 2 beta - 1, whose
    boundary behavior is not a multiple of delta_1."""


@dataclass(frozen=True)
class BoundaryData:
    """delta_1 coefficients of (boundary value, inward normal derivative)."""

    a: Rational
    b: Rational


@dataclass(frozen=True)
class IntegralMeansPoly:
    """The polynomial p with p(r^2) = mean of t^(2b-1)/|1-z|^(2b) at radius r."""

    beta: int
    poly: LaurentPoly  # in s = r^2, exponents 0 .. 2 beta - 2

    def value_at_one(self) -> Fraction:
        return poly_eval(self.poly, Fraction(1))

    def derivative_at_one(self) -> Fraction:
        return poly_eval(poly_diff(self.poly), Fraction(1))


def _inner_sum(beta: int, k: int) -> int:
    """sum_j (-1)^j C(2 beta - 1, j) C(k - j + beta - 1, k - j)^2 over 0 <= j <= min(2 beta - 1, k)."""
    total = 0
    for j in range(0, min(2 * beta - 1, k) + 1):
        total += (-1) ** j * binom(2 * beta - 1, j) * binom(k - j + beta - 1, k - j) ** 2
    return total


def ab_sums(beta: int) -> BoundaryData:
    """Boundary data of t^(2 beta - 1) / |1-z|^(2 beta), beta >= 2, as double sums.

    a = sum_{k=0}^{2 beta - 2} inner(k)   and   b = -sum_{k=1}^{2 beta - 2} 2 k inner(k).
    """
    if beta < 2:
        raise ValueError(f"ab_sums requires beta >= 2, got {beta}")
    a = sum(_inner_sum(beta, k) for k in range(0, 2 * beta - 1))
    b = -sum(2 * k * _inner_sum(beta, k) for k in range(1, 2 * beta - 1))
    return BoundaryData(a=Fraction(a), b=Fraction(b))


def integral_means_poly(beta: int) -> IntegralMeansPoly:
    """Exact integral-means polynomial p(s) for t^(2 beta - 1)/|1-z|^(2 beta)."""
    if beta < 2:
        raise ValueError(f"integral_means_poly requires beta >= 2, got {beta}")
    coeffs: LaurentPoly = {}
    for k in range(0, 2 * beta - 1):
        c = _inner_sum(beta, k)
        if c:
            coeffs[k] = Fraction(c)
    return IntegralMeansPoly(beta=beta, poly=coeffs)


def _a_value(beta: int) -> Fraction:
    # a_1 = 1 directly (the Poisson case); beta >= 2 via the double sum.
    return Fraction(1) if beta == 1 else ab_sums(beta).a


def monomial_boundary(k: int, beta: int) -> BoundaryData:
    """Boundary data (a, b) of t^k / |1-z|^(2 beta) for k >= 2 beta - 1."""
    if beta < 1:
        raise ValueError(f"beta must be >= 1, got {beta}")
    if k < 2 * beta - 1:
        raise NonDeltaBoundaryError(
            f"term t^{k}/|1-z|^{2 * beta} has non-delta boundary behavior "
            f"(k={k} < 2 beta - 1 = {2 * beta - 1})"
        )
    if k == 2 * beta - 1:
        if beta == 1:
            return BoundaryData(a=Fraction(1), b=Fraction(0))
        return ab_sums(beta)
    if k == 2 * beta:
        return BoundaryData(a=Fraction(0), b=2 * _a_value(beta))
    return BoundaryData(a=Fraction(0), b=Fraction(0))


def expansion_boundary(u: KernelExpansion) -> BoundaryData:
    """Componentwise boundary data of a banded expansion, by linearity."""
    a = Fraction(0)
    b = Fraction(0)
    for beta, poly in u.terms.items():
        for k, coeff in poly.items():
            if k < 2 * beta - 1:
                raise NonDeltaBoundaryError(
                    f"expansion term beta={beta}, k={k} has non-delta boundary "
                    f"behavior (k < 2 beta - 1)"
                )
            data = monomial_boundary(k, beta)
            a += coeff * data.a
            b += coeff * data.b
    return BoundaryData(a=a, b=b)
