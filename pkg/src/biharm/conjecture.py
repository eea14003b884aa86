"""Closed-form kernel generator, independent of the linear-system builder.

The kernels admit (conjecturally, for every integer gamma >= 0) explicit
banded formulas whose coefficient tables are, column by column, scaled rows
of Pascal's triangle:

    2 f_beta(t)        = sum_k c_k C(gamma+1-2k, beta-1-k) t^(beta+gamma+1-k)   (F)
    2 beta h_beta(t)   = sum_k c_k C(gamma-2k,   beta-1-k) t^(beta+gamma+1-k)   (H)

with k running from 0 to beta+gamma+1 - max(2 beta - 1, gamma+2) (F) or
beta+gamma+1 - max(2 beta, gamma+2) (H).  The scalars c_k are determined by
a unit-diagonal triangular recurrence:

    c_0 = 1,   sum_{k=0}^{j} c_k C(gamma+1-2k, j-k) = 0   (F, 1 <= j <= floor((gamma+1)/2))
    c_0 = 1,   sum_{k=0}^{j} c_k C(gamma-2k,   j-k) = 1   (H, 1 <= j <= floor(gamma/2))

This module generates the closed forms from those recurrences alone and
checks them three independent ways: symbolic biharmonicity, exact boundary
data, and coefficient-for-coefficient agreement with the builder.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .boundary import expansion_boundary
from .builder import KernelSpec, build_raw, normalize_F, normalize_H
from .exact import LaurentPoly, Rational, binom
from .operators import KernelExpansion, biharmonic, make_expansion


@dataclass(frozen=True)
class ConjectureCoefficients:
    gamma: int
    kind: str
    c: Tuple[Rational, ...]  # c[0] = 1


def _c_count(gamma: int, kind: str) -> int:
    return ((gamma + 1) // 2 if kind == "F" else gamma // 2) + 1


def _binom_row(gamma: int, kind: str, k: int) -> int:
    """Upper index of the Pascal row attached to column offset k."""
    return gamma + 1 - 2 * k if kind == "F" else gamma - 2 * k


def solve_ck(gamma: int, kind: str) -> ConjectureCoefficients:
    """Forward-substitute the unit-diagonal recurrence for the c_k."""
    if kind not in ("F", "H"):
        raise ValueError(f"kind must be 'F' or 'H', got {kind!r}")
    target = Fraction(0) if kind == "F" else Fraction(1)
    c: List[Fraction] = [Fraction(1)]
    for j in range(1, _c_count(gamma, kind)):
        acc = sum(
            (c[k] * binom(_binom_row(gamma, kind, k), j - k) for k in range(j)),
            Fraction(0),
        )
        # The j-th relation has leading coefficient C(row(j), 0) = 1 on c_j.
        c.append(target - acc)
    return ConjectureCoefficients(gamma=gamma, kind=kind, c=tuple(c))


def _grid_floor(gamma: int, kind: str, beta: int) -> int:
    offset = 1 if kind == "F" else 0
    return max(2 * beta - offset, gamma + 2)


def conjectured_kernel(gamma: int, kind: str) -> KernelExpansion:
    """Assemble the closed-form expansion exactly as displayed above."""
    coeffs = solve_ck(gamma, kind)
    beta_top = gamma + 2 if kind == "F" else gamma + 1
    terms: Dict[int, LaurentPoly] = {}
    for beta in range(1, beta_top + 1):
        kmax = beta + gamma + 1 - _grid_floor(gamma, kind, beta)
        scale = Fraction(1, 2) if kind == "F" else Fraction(1, 2 * beta)
        poly: LaurentPoly = {}
        for k in range(0, kmax + 1):
            value = coeffs.c[k] * binom(_binom_row(gamma, kind, k), beta - 1 - k) * scale
            if value:
                poly[beta + gamma + 1 - k] = value
        if poly:
            terms[beta] = poly
    return make_expansion(gamma, terms)


@dataclass(frozen=True)
class PascalReport:
    """Outcome of the column-structure check of an expansion."""

    ok: bool
    first_violation: Optional[Tuple[int, int]] = None  # (beta, k-offset)
    columns_checked: int = 0


def pascal_columns(expansion: KernelExpansion, gamma: int, kind: str) -> PascalReport:
    """Check that an expansion's coefficient table has Pascal-column structure.

    For each column offset k, the coefficients of t^(beta+gamma+1-k) across
    beta — read off 2 f_beta (F) or 2 beta h_beta (H) — must equal c_k times
    the Pascal row C(row(k), beta-1-k); no monomial may fall outside the
    displayed exponent range.  Reports the first violated (beta, k-offset).
    """
    coeffs = solve_ck(gamma, kind)
    beta_top = gamma + 2 if kind == "F" else gamma + 1
    checked = 0
    for beta in range(1, beta_top + 1):
        kmax = beta + gamma + 1 - _grid_floor(gamma, kind, beta)
        unscale = Fraction(2) if kind == "F" else Fraction(2 * beta)
        poly = expansion.terms.get(beta, {})
        for exp in poly:
            k = beta + gamma + 1 - exp
            if k < 0 or k > kmax:
                return PascalReport(ok=False, first_violation=(beta, k), columns_checked=checked)
        for k in range(0, kmax + 1):
            expected = coeffs.c[k] * binom(_binom_row(gamma, kind, k), beta - 1 - k)
            actual = unscale * poly.get(beta + gamma + 1 - k, Fraction(0))
            if actual != expected:
                return PascalReport(ok=False, first_violation=(beta, k), columns_checked=checked)
            checked += 1
    return PascalReport(ok=True, columns_checked=checked)


@dataclass(frozen=True)
class CheckResult:
    kind: str
    check: str  # "biharmonic-zero" | "boundary-exact" | "matches-builder"
    passed: bool


@dataclass(frozen=True)
class ConjectureVerdict:
    gamma: int
    entries: Tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def failures(self) -> Tuple[CheckResult, ...]:
        return tuple(e for e in self.entries if not e.passed)


def verify_conjecture(gamma: int) -> ConjectureVerdict:
    """Run the three independent checks for both kinds at one gamma.

    (i) the closed form is symbolically biharmonic-zero (via the generic
    operator composition, not the closed monomial rules); (ii) its exact
    boundary data is (1,0) / (0,1); (iii) it coincides with the built kernel
    coefficient-for-coefficient.  All three run unconditionally so that no
    single shared bug can validate itself.
    """
    entries: List[CheckResult] = []
    built_h = normalize_H(build_raw(KernelSpec(gamma=gamma, kind="H")))
    built = {
        "H": built_h,
        "F": normalize_F(build_raw(KernelSpec(gamma=gamma, kind="F")), built_h),
    }
    targets = {"F": (Fraction(1), Fraction(0)), "H": (Fraction(0), Fraction(1))}
    for kind in ("F", "H"):
        formed = conjectured_kernel(gamma, kind)
        entries.append(
            CheckResult(kind, "biharmonic-zero", not biharmonic(formed))
        )
        bd = expansion_boundary(formed)
        entries.append(
            CheckResult(kind, "boundary-exact", (bd.a, bd.b) == targets[kind])
        )
        entries.append(
            CheckResult(kind, "matches-builder", formed == built[kind])
        )
    return ConjectureVerdict(gamma=gamma, entries=tuple(entries))
