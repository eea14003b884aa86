"""Constructs the kernel pair (F, H) for integer weight exponents gamma >= 0.

The target functions are banded expansions annihilated by the weighted
biharmonic operator D w^-1 D, with distributional boundary data
(delta_1, 0) for F and (0, delta_1) for H.  The construction is:

  1. fix the top band: coefficient 1 on t^(2 gamma + 3) at beta_0 = gamma + 2
     (F-type) or on t^(2 gamma + 2) at beta_0 = gamma + 1 (H-type);
  2. place unknown coefficients on every grid monomial t^k / |1-z|^(2 beta)
     for 1 <= beta < beta_0, with k ranging over
         [max(2 beta - 1, gamma + 2), beta + gamma + 1]   (F-type)
         [max(2 beta,     gamma + 2), beta + gamma + 1]   (H-type);
  3. require the biharmonic image to vanish identically.  Each (band,
     exponent) pair of the image contributes one exact linear equation; the
     columns are generated by the closed monomial rules;
  4. solve exactly.  The H-type system is determined; the F-type system is
     underdetermined by exactly one direction — the H solution itself, which
     the final normalization cancels — so free unknowns are fixed to zero;
  5. read off boundary data and normalize:  H = raw / b  when the raw
     solution has boundary (0, b);  F = (raw - b h) / a  when it has
     boundary (a, b) and h is the normalized H.

Columns are eliminated in ascending (beta, k) order, which pins down the
free column of the underdetermined F-type system deterministically (it is
always the top monomial of the H solution); the raw solutions this produces
are reproducible constants, not artifacts of pivot luck.

If the tight grid of step 2 ever turned out infeasible, the build retries
once on the widened grid k in [beta, beta + gamma + 1] and then either
succeeds, fails loudly because surviving low exponents k < 2 beta - 1 have
no delta-type boundary data, or reports the ansatz as insufficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from .boundary import BoundaryData, NonDeltaBoundaryError, expansion_boundary
from .exact import ZERO, LaurentPoly, RationalLinearSystem, solve_linear
from .operators import (
    KernelExpansion,
    biharmonic_via_rules,
    expansion_add,
    expansion_scale,
    make_expansion,
    monomial_image,
)

KERNEL_KINDS = ("F", "H")


class AnsatzInsufficientError(RuntimeError):
    """Raised when even the widened coefficient grid admits no solution."""


@dataclass(frozen=True)
class KernelSpec:
    gamma: int
    kind: str  # "F" | "H"

    def __post_init__(self) -> None:
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"kind must be one of {KERNEL_KINDS}, got {self.kind!r}")


@dataclass(frozen=True)
class RawSolution:
    """An unnormalized kernel: exactly biharmonic-zero, boundary not yet scaled."""

    expansion: KernelExpansion
    boundary: BoundaryData


def top_term(spec: KernelSpec) -> Tuple[int, int]:
    """(beta_0, exponent) of the fixed leading monomial."""
    if spec.kind == "F":
        return spec.gamma + 2, 2 * spec.gamma + 3
    return spec.gamma + 1, 2 * spec.gamma + 2


def ansatz_grid(spec: KernelSpec, widened: bool = False) -> Dict[int, List[int]]:
    """Unknown exponent grid per band, for 1 <= beta < beta_0."""
    beta0, _ = top_term(spec)
    offset = 1 if spec.kind == "F" else 0  # grid floor 2*beta - offset
    grid: Dict[int, List[int]] = {}
    for beta in range(1, beta0):
        lo = beta if widened else max(2 * beta - offset, spec.gamma + 2)
        hi = beta + spec.gamma + 1
        grid[beta] = list(range(lo, hi + 1))
    return grid


def assemble_system(
    spec: KernelSpec, grid: Dict[int, List[int]]
) -> Tuple[List[Tuple[int, int]], RationalLinearSystem]:
    """Linear system expressing 'biharmonic image = 0' over the grid unknowns.

    Returns the column labels (beta, k) in ascending order together with the
    system; the right-hand side carries the negated image of the fixed top
    monomial.  Rows are the (band, exponent) pairs of the image space.
    """
    columns = sorted((beta, k) for beta, ks in grid.items() for k in ks)
    col_index = {bk: i for i, bk in enumerate(columns)}

    coeff: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    rhs: Dict[Tuple[int, int], Fraction] = {}

    beta0, k0 = top_term(spec)
    for band, img in monomial_image(spec.gamma, beta0, k0).items():
        for e, c in img.items():
            rhs[(band, e)] = rhs.get((band, e), ZERO) - c

    for bk in columns:
        beta, k = bk
        j = col_index[bk]
        for band, img in monomial_image(spec.gamma, beta, k).items():
            for e, c in img.items():
                coeff.setdefault((band, e), {})[j] = c

    rows: List[Tuple[List[Fraction], Fraction]] = []
    for key in sorted(set(coeff) | set(rhs)):
        vec = [ZERO] * len(columns)
        for j, c in coeff.get(key, {}).items():
            vec[j] = c
        rows.append((vec, rhs.get(key, ZERO)))
    return columns, RationalLinearSystem(rows=rows, unknowns=len(columns))


def _expansion_of(
    spec: KernelSpec, columns: List[Tuple[int, int]], values
) -> KernelExpansion:
    beta0, k0 = top_term(spec)
    terms: Dict[int, LaurentPoly] = {beta0: {k0: Fraction(1)}}
    for (beta, k), v in zip(columns, values):
        if v:
            terms.setdefault(beta, {})[k] = v
    return make_expansion(spec.gamma, terms)


def build_raw(spec: KernelSpec) -> RawSolution:
    """Solve the grid system for one kernel; exact, unnormalized."""
    columns, system = assemble_system(spec, ansatz_grid(spec))
    sol = solve_linear(system)
    if sol.is_infeasible:
        columns, system = assemble_system(spec, ansatz_grid(spec, widened=True))
        sol = solve_linear(system)
        if sol.is_infeasible:
            raise AnsatzInsufficientError(
                f"no biharmonic-zero expansion on the widened grid for "
                f"gamma={spec.gamma}, kind={spec.kind}"
            )
        for (beta, k), v in zip(columns, sol.particular):
            if v and k < 2 * beta - 1:
                raise NonDeltaBoundaryError(
                    f"widened-grid solution for gamma={spec.gamma}, "
                    f"kind={spec.kind} retains non-delta term beta={beta}, k={k}"
                )
    expansion = _expansion_of(spec, columns, sol.particular)
    if biharmonic_via_rules(expansion):
        raise RuntimeError(
            f"internal error: solved expansion is not biharmonic-zero "
            f"(gamma={spec.gamma}, kind={spec.kind})"
        )
    return RawSolution(expansion=expansion, boundary=expansion_boundary(expansion))


def normalize_H(raw: RawSolution) -> KernelExpansion:
    """Scale a raw solution with boundary (0, b), b != 0, to boundary (0, 1)."""
    if raw.boundary.a != 0:
        raise ValueError(f"normalize_H requires boundary a = 0, got a={raw.boundary.a}")
    if raw.boundary.b == 0:
        raise ValueError("normalize_H requires boundary b != 0")
    return expansion_scale(1 / raw.boundary.b, raw.expansion)


def normalize_F(raw: RawSolution, h: KernelExpansion) -> KernelExpansion:
    """Combine a raw solution having boundary (a, b), a != 0, with the
    normalized H kernel to reach boundary exactly (1, 0)."""
    if raw.boundary.a == 0:
        raise ValueError("normalize_F requires boundary a != 0")
    hb = expansion_boundary(h)
    if (hb.a, hb.b) != (0, 1):
        raise ValueError(f"normalize_F requires h with boundary (0, 1), got {hb}")
    combined = expansion_add(raw.expansion, expansion_scale(-raw.boundary.b, h))
    return expansion_scale(1 / raw.boundary.a, combined)


def build(spec: KernelSpec) -> KernelExpansion:
    """The normalized kernel for spec: boundary (1,0) for F, (0,1) for H."""
    if spec.kind == "H":
        return normalize_H(build_raw(spec))
    h = build(KernelSpec(gamma=spec.gamma, kind="H"))
    return normalize_F(build_raw(spec), h)
