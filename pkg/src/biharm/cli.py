"""Command-line interface: generate, verify, evaluate, and export kernels.

Subcommands:

  gen      print one kernel as JSON document, LaTeX table, or plain text
  verify   sweep gamma = 0..N, re-deriving and cross-checking every kernel
  eval     evaluate one kernel at one point of the disc
  l1check  tabulate L1 norms over an r-grid (TSV)
  means    tabulate integral means against their boundary prediction (TSV)

Exit codes: 0 success, 1 mathematical failure, 2 usage error.  The
environment variable BIHARM_PRECISION (double | extended) overrides the
default evaluation precision of `eval`.

The JSON document serializes every coefficient as exact decimal
numerator/denominator strings — coefficients outgrow 64-bit integers well
before the sweep limit, and nothing floating-point belongs in an exact
document.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import os
import sys
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from . import __version__
from .boundary import expansion_boundary
from .builder import KERNEL_KINDS, KernelSpec, build
from .conjecture import ConjectureVerdict, verify_conjecture
from .exact import LaurentPoly
from .numeric import (
    PRECISIONS,
    DiscPoint,
    eval_kernel,
    integral_mean,
    l1_norm,
)
from .operators import (
    KernelExpansion,
    RULE_KINDS,
    biharmonic_via_rules,
    make_expansion,
    monomial_rule,
    monomial_rule_generic,
)

_CHECK_NAMES = ("biharmonic-zero", "boundary-exact")


# ---------------------------------------------------------------------------
# KernelDocument (JSON schema)


def to_document(kernel: KernelExpansion, kind: str, checks_passed: Sequence[str]) -> Dict:
    """Exact JSON-ready dict for a kernel; lossless round trip guaranteed."""
    terms = []
    for beta in sorted(kernel.terms):
        coeffs = [
            {"k": k, "num": str(c.numerator), "den": str(c.denominator)}
            for k, c in sorted(kernel.terms[beta].items(), reverse=True)
        ]
        terms.append({"beta": beta, "coeffs": coeffs})
    return {
        "gamma": kernel.gamma,
        "kind": kind,
        "terms": terms,
        "provenance": {
            "builder_version": __version__,
            "checks_passed": list(checks_passed),
        },
    }


def from_document(doc: Dict) -> Tuple[KernelExpansion, str]:
    """Inverse of to_document."""
    terms: Dict[int, LaurentPoly] = {}
    for entry in doc["terms"]:
        beta = int(entry["beta"])
        terms[beta] = {
            int(c["k"]): Fraction(int(c["num"]), int(c["den"]))
            for c in entry["coeffs"]
        }
    return make_expansion(int(doc["gamma"]), terms), str(doc["kind"])


# ---------------------------------------------------------------------------
# formatters


def _int_or_frac_latex(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return rf"\frac{{{c.numerator}}}{{{c.denominator}}}"


def _pow_latex(k: int) -> str:
    return f"(1-x)^{k}" if 0 <= k <= 9 else f"(1-x)^{{{k}}}"


def _sub(beta: int) -> str:
    return str(beta) if beta <= 9 else f"{{{beta}}}"


def latex_lines(kernel: KernelExpansion, kind: str) -> List[str]:
    """One line per band, in the normalized layout 2f_b(x)=... / 2b h_b(x)=...

    Coefficients are those of 2 f_beta (F) or 2 beta h_beta (H); monomials
    descend in the exponent.  Unit coefficients are suppressed.
    """
    lines = []
    for beta in sorted(kernel.terms):
        scale = 2 if kind == "F" else 2 * beta
        label = f"2f_{_sub(beta)}(x)" if kind == "F" else f"{2 * beta}h_{_sub(beta)}(x)"
        parts: List[str] = []
        for k in sorted(kernel.terms[beta], reverse=True):
            c = scale * kernel.terms[beta][k]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = ("" if mag == 1 else _int_or_frac_latex(mag)) + _pow_latex(k)
            if not parts:
                parts.append(("-" if sign == "-" else "") + body)
            else:
                parts.append(sign + body)
        lines.append(f"{label}={''.join(parts)}")
    return lines


def text_line(kernel: KernelExpansion, kind: str) -> str:
    """Single-line plain-text formula, e.g. F_0 = 1/2·t^2/|1-z|^2 + ..."""
    parts: List[str] = []
    for beta in sorted(kernel.terms):
        for k in sorted(kernel.terms[beta], reverse=True):
            c = kernel.terms[beta][k]
            mag = abs(c)
            term = f"{mag}·t^{k}/|1-z|^{2 * beta}"
            if not parts:
                parts.append(("-" if c < 0 else "") + term)
            else:
                parts.append(("- " if c < 0 else "+ ") + term)
    return f"{kind}_{kernel.gamma} = " + " ".join(parts)


# ---------------------------------------------------------------------------
# verify sweep


def _deep_rules_ok(gamma: int) -> bool:
    for beta in range(1, gamma + 4):
        for k in range(0, 3 * gamma + 7):
            for which in RULE_KINDS:
                if monomial_rule(gamma, beta, k, which) != monomial_rule_generic(
                    gamma, beta, k, which
                ):
                    return False
    return True


def _verify_one(args: Tuple[int, bool]) -> Tuple[int, ConjectureVerdict, bool]:
    gamma, deep = args
    verdict = verify_conjecture(gamma)
    deep_ok = _deep_rules_ok(gamma) if deep else True
    return gamma, verdict, deep_ok


def _report_line(gamma: int, verdict: ConjectureVerdict, deep: bool, deep_ok: bool) -> str:
    cells = [f"gamma={gamma}"]
    for e in verdict.entries:
        cells.append(f"{e.kind}:{e.check}={'pass' if e.passed else 'FAIL'}")
    if deep:
        cells.append(f"deep-rules={'pass' if deep_ok else 'FAIL'}")
    return "\t".join(cells)


# ---------------------------------------------------------------------------
# argument plumbing


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text}")
    return v


def _radius(text: str) -> float:
    try:
        v = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not (0.0 <= v < 1.0):
        raise argparse.ArgumentTypeError(f"radius must satisfy 0 <= r < 1: {text}")
    return v


def _radius_grid(text: str) -> List[float]:
    return [_radius(part) for part in text.split(",") if part]


def _env_precision() -> str:
    value = os.environ.get("BIHARM_PRECISION", "double")
    if value not in PRECISIONS:
        raise argparse.ArgumentTypeError(
            f"BIHARM_PRECISION must be one of {PRECISIONS}, got {value!r}"
        )
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biharm",
        description="Exact kernel pair of the weighted biharmonic Dirichlet "
        "problem on the unit disc.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="print one kernel")
    gen.add_argument("--gamma", type=_nonneg_int, required=True)
    gen.add_argument("--kernel", choices=KERNEL_KINDS, required=True)
    gen.add_argument("--format", choices=("json", "latex", "text"), default="text")

    verify = sub.add_parser("verify", help="cross-check kernels for gamma = 0..N")
    verify.add_argument("--gamma-max", type=_nonneg_int, required=True)
    verify.add_argument("--jobs", type=int, default=1)
    verify.add_argument(
        "--deep",
        action="store_true",
        help="also re-derive every closed monomial rule from the generic composition",
    )

    ev = sub.add_parser("eval", help="evaluate a kernel at one point")
    ev.add_argument("--gamma", type=_nonneg_int, required=True)
    ev.add_argument("--kernel", choices=KERNEL_KINDS, required=True)
    ev.add_argument("--r", type=_radius, required=True)
    ev.add_argument("--theta", type=float, required=True)

    l1 = sub.add_parser("l1check", help="L1 norms over an r-grid")
    l1.add_argument("--gamma", type=_nonneg_int, required=True)
    l1.add_argument("--kernel", choices=KERNEL_KINDS, required=True)
    l1.add_argument("--r-grid", type=_radius_grid, required=True)

    means = sub.add_parser("means", help="integral means vs boundary prediction")
    means.add_argument("--gamma", type=_nonneg_int, required=True)
    means.add_argument("--kernel", choices=KERNEL_KINDS, required=True)
    means.add_argument("--r-grid", type=_radius_grid, required=True)

    return parser


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(gamma: int, kind: str, fmt: str, out=None) -> int:
    out = sys.stdout if out is None else out
    kernel = build(KernelSpec(gamma=gamma, kind=kind))
    checks = []
    if not biharmonic_via_rules(kernel):
        checks.append("biharmonic-zero")
    bd = expansion_boundary(kernel)
    if (bd.a, bd.b) == ((1, 0) if kind == "F" else (0, 1)):
        checks.append("boundary-exact")
    if len(checks) != len(_CHECK_NAMES):
        print(f"built kernel failed checks: passed only {checks}", file=sys.stderr)
        return 1
    if fmt == "json":
        json.dump(to_document(kernel, kind, checks), out, indent=2)
        out.write("\n")
    elif fmt == "latex":
        out.write("\n".join(latex_lines(kernel, kind)) + "\n")
    else:
        out.write(text_line(kernel, kind) + "\n")
    return 0


def cmd_verify(gamma_max: int, jobs: int, deep: bool, out=None) -> int:
    out = sys.stdout if out is None else out
    work = [(g, deep) for g in range(gamma_max + 1)]
    if jobs > 1:
        with multiprocessing.Pool(processes=jobs) as pool:
            results = pool.map(_verify_one, work, chunksize=1)
    else:
        results = [_verify_one(w) for w in work]
    failures = 0
    for gamma, verdict, deep_ok in sorted(results, key=lambda r: r[0]):
        out.write(_report_line(gamma, verdict, deep, deep_ok) + "\n")
        if not verdict.all_passed or not deep_ok:
            failures += 1
    out.write(f"checked={gamma_max + 1}\tfailures={failures}\n")
    return 0 if failures == 0 else 1


def cmd_eval(gamma: int, kind: str, r: float, theta: float, out=None) -> int:
    out = sys.stdout if out is None else out
    precision = _env_precision()
    kernel = build(KernelSpec(gamma=gamma, kind=kind))
    value = eval_kernel(kernel, DiscPoint(r=r, theta=theta), precision=precision)
    out.write(f"{value:.17g}\n")
    return 0


def _converged_mean(kernel: KernelExpansion, r: float) -> float:
    prev = None
    n = 4096
    while n <= 2**20:
        est = integral_mean(kernel, r, n)
        if prev is not None and abs(est - prev) <= 1e-10 * max(abs(est), 1e-300):
            return est
        prev = est
        n *= 2
    return prev  # spectrally convergent long before the cap; keep last estimate


def cmd_l1check(gamma: int, kind: str, r_grid: Iterable[float], out=None) -> int:
    out = sys.stdout if out is None else out
    kernel = build(KernelSpec(gamma=gamma, kind=kind))
    out.write("r\tl1\tl1_over_1mr\n")
    for r in r_grid:
        value = l1_norm(kernel, r)
        out.write(f"{r:.10g}\t{value:.10g}\t{value / (1.0 - r):.10g}\n")
    return 0


def cmd_means(gamma: int, kind: str, r_grid: Iterable[float], out=None) -> int:
    out = sys.stdout if out is None else out
    kernel = build(KernelSpec(gamma=gamma, kind=kind))
    bd = expansion_boundary(kernel)
    out.write("r\tmean\tpredicted\tabs_err\n")
    for r in r_grid:
        mean = _converged_mean(kernel, r)
        predicted = float(bd.a) + float(bd.b) * (1.0 - r)
        out.write(f"{r:.10g}\t{mean:.10g}\t{predicted:.10g}\t{abs(mean - predicted):.3g}\n")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "gen":
            return cmd_gen(args.gamma, args.kernel, args.format)
        if args.command == "verify":
            return cmd_verify(args.gamma_max, args.jobs, args.deep)
        if args.command == "eval":
            return cmd_eval(args.gamma, args.kernel, args.r, args.theta)
        if args.command == "l1check":
            return cmd_l1check(args.gamma, args.kernel, args.r_grid)
        if args.command == "means":
            return cmd_means(args.gamma, args.kernel, args.r_grid)
        raise AssertionError(f"unhandled command {args.command!r}")
    except argparse.ArgumentTypeError as exc:
        print(f"biharm: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"biharm: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
