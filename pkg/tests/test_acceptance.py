"""Acceptance suite: one test per contract item, at its stated tolerance.

Run with `pytest -v tests/test_acceptance.py` to get one pass/fail line per
item.  Setting BIHARM_ACCEPT_EXTENDED=1 widens the re-derivation sweep from
gamma <= 40 to gamma <= 80 (roughly half an hour of exact arithmetic).
"""

import math
import os
import random
import time
from fractions import Fraction

import pytest

from biharm.boundary import BoundaryData, ab_sums
from biharm.builder import KernelSpec, build, build_raw
from biharm.conjecture import verify_conjecture
from biharm.exact import binom
from biharm.numeric import (
    DiscPoint,
    fd_biharmonic_residual,
    integral_mean,
    l1_norm,
    solve_dirichlet,
)
from biharm.operators import RULE_KINDS, monomial_rule, monomial_rule_generic
from kernel_fixtures import KNOWN_KERNELS

F = Fraction


def test_published_kernels_reproduced_exactly():
    """The ten known kernels, coefficient for coefficient, in under 5 s."""
    start = time.perf_counter()
    for (kind, gamma), expected in sorted(KNOWN_KERNELS.items()):
        built = build(KernelSpec(gamma=gamma, kind=kind))
        assert built.terms == expected, (kind, gamma)
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"fixture rebuild took {elapsed:.2f}s"
    print(f"published-kernels-exact: PASS ({elapsed:.2f}s for 10 kernels)")


def test_closed_form_sweep():
    """Builder == closed form, biharmonic-zero, exact boundary, per gamma.

    Default range 0..40 in under 10 minutes; BIHARM_ACCEPT_EXTENDED=1 widens
    to 0..80 with a 2 hour budget.
    """
    extended = bool(os.environ.get("BIHARM_ACCEPT_EXTENDED"))
    gamma_max, budget = (80, 7200.0) if extended else (40, 600.0)
    start = time.perf_counter()
    for gamma in range(gamma_max + 1):
        verdict = verify_conjecture(gamma)
        assert verdict.all_passed, (gamma, verdict.failures())
    elapsed = time.perf_counter() - start
    assert elapsed < budget, f"sweep to {gamma_max} took {elapsed:.1f}s"
    print(f"closed-form-sweep: PASS (gamma<={gamma_max} in {elapsed:.1f}s)")


def test_boundary_double_sums():
    """ab_sums small values plus the central-binomial identities, beta <= 20."""
    start = time.perf_counter()
    assert ab_sums(2) == BoundaryData(F(2), F(-2))
    assert ab_sums(3) == BoundaryData(F(6), F(-12))
    assert ab_sums(4) == BoundaryData(F(20), F(-60))
    for beta in range(2, 21):
        data = ab_sums(beta)
        assert data.a == binom(2 * beta - 2, beta - 1), beta
        assert data.b == -(beta - 1) * data.a, beta
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"double sums took {elapsed:.2f}s"
    print(f"boundary-double-sums: PASS ({elapsed:.3f}s)")


def test_monomial_rules_equal_generic_composition():
    """Closed rules == literal operator composition over the whole box.

    gamma <= 12, 1 <= beta <= gamma+3, 0 <= k <= 3 gamma+6, all three rule
    kinds — about 10^4 exact cases in under 30 s.
    """
    start = time.perf_counter()
    cases = 0
    for gamma in range(0, 13):
        for beta in range(1, gamma + 4):
            for k in range(0, 3 * gamma + 7):
                for which in RULE_KINDS:
                    assert monomial_rule(gamma, beta, k, which) == (
                        monomial_rule_generic(gamma, beta, k, which)
                    ), (gamma, beta, k, which)
                    cases += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"{cases} cases took {elapsed:.1f}s"
    print(f"operator-rule-equivalence: PASS ({cases} cases in {elapsed:.1f}s)")


def test_intermediate_constants_weight_two():
    """Raw (unnormalized) solutions at weight exponent 2: the band-1 and
    band-2 coefficients and the raw boundary pairs."""
    raw_h = build_raw(KernelSpec(gamma=2, kind="H"))
    assert raw_h.expansion.terms[1][4] == 3
    assert raw_h.expansion.terms[2][5] == 3
    assert raw_h.boundary == BoundaryData(F(0), F(6))

    raw_f = build_raw(KernelSpec(gamma=2, kind="F"))
    assert raw_f.expansion.terms[1][4] == -8
    assert raw_f.expansion.terms[2][5] == -6
    assert raw_f.boundary == BoundaryData(F(2), F(-18))
    print("intermediate-constants: PASS (raw c1/c2 and boundary pairs)")


def test_l1_norm_behavior():
    """L1 flatness of F and linear decay of H near the boundary.

    - the weight-0 F kernel is positive with unit mean: L1 = 1 to 1e-8;
    - L1(H)/(1-r) varies by under 20% across r in {0.9, 0.95, 0.99};
    - L1(F) stays bounded across the same grid (spread under 50%).
    """
    for r in (0.5, 0.9, 0.99):
        assert l1_norm(build(KernelSpec(gamma=0, kind="F")), r) == pytest.approx(
            1.0, abs=1e-8
        ), r
    grid = (0.9, 0.95, 0.99)
    for gamma in (1, 2, 3):
        h = build(KernelSpec(gamma=gamma, kind="H"))
        ratios = [l1_norm(h, r) / (1.0 - r) for r in grid]
        assert max(ratios) / min(ratios) < 1.2, (gamma, ratios)
        f = build(KernelSpec(gamma=gamma, kind="F"))
        values = [l1_norm(f, r) for r in grid]
        assert max(values) / min(values) < 1.5, (gamma, values)
    print("l1-behavior: PASS (F flat, H linear in 1-r)")


def test_integral_mean_asymptotics():
    """mean(F) = 1 + O((1-r)^2) and mean(H) = (1-r) + O((1-r)^2), with the
    fitted quadratic constant stable under refining the radius grid."""
    coarse = (0.9, 0.95, 0.99)
    refined = (0.9, 0.925, 0.95, 0.975, 0.99, 0.995)
    for gamma in range(0, 4):
        f = build(KernelSpec(gamma=gamma, kind="F"))
        for r in refined:
            err = abs(integral_mean(f, r, n=16384) - 1.0)
            assert err <= 1e-4 * (1.0 - r) ** 2, (gamma, r, err)

        h = build(KernelSpec(gamma=gamma, kind="H"))
        fitted = {}
        for label, grid in (("coarse", coarse), ("refined", refined)):
            cs = [
                abs(integral_mean(h, r, n=16384) - (1.0 - r)) / (1.0 - r) ** 2
                for r in grid
            ]
            assert all(0.3 <= c <= 0.7 for c in cs), (gamma, label, cs)
            fitted[label] = max(cs)
        assert 1.0 <= fitted["refined"] / fitted["coarse"] < 1.3, (gamma, fitted)
    print("mean-asymptotics: PASS (quadratic remainder, stable constant)")


def test_fd_residual_second_order():
    """Nested five-point residuals on the weight-2 kernels decay like h^2 at
    20 random interior points (Richardson ratio within [3.5, 4.5])."""
    rng = random.Random(20260822)
    kernels = [build(KernelSpec(gamma=2, kind="F")), build(KernelSpec(gamma=2, kind="H"))]
    for i in range(20):
        p = DiscPoint(r=0.15 + 0.45 * rng.random(), theta=2.0 * math.pi * rng.random())
        kernel = kernels[i % 2]
        r1 = fd_biharmonic_residual(kernel, p, 1e-2)
        r2 = fd_biharmonic_residual(kernel, p, 5e-3)
        ratio = abs(r1) / abs(r2)
        assert 3.5 <= ratio <= 4.5, (i, p, ratio)
    print("fd-residual-order: PASS (20 points, ratio ~ 4)")


def test_dirichlet_boundary_recovery():
    """The convolution solution with boundary value cos(theta) approaches its
    data: sup error drops at least 5x from r = 0.9 to r = 0.99."""
    coeffs = {1: 0.5, -1: 0.5}
    sup = {}
    for r in (0.9, 0.99):
        worst = 0.0
        for j in range(48):
            theta = 2.0 * math.pi * j / 48
            u = solve_dirichlet(1, coeffs, {}, DiscPoint(r=r, theta=theta))
            worst = max(worst, abs(u - math.cos(theta)))
        sup[r] = worst
    assert sup[0.99] <= sup[0.9] / 5.0, sup
    print(f"dirichlet-recovery: PASS (sup err {sup[0.9]:.2e} -> {sup[0.99]:.2e})")
