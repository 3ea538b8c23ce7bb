"""Named groups of checks over the catalog, each filling a VerificationReport.

Suites: commutators, closures, syzygies, spectrum, hidden, conjecture.
Reductions and searches for k = 4 are slow and only run with ``heavy=True``;
otherwise they are recorded as SKIPPED.
"""

from __future__ import annotations

from collections import Counter

from . import catalog
from .catalog import NotPrinted, expected_closure, generators
from .genpoly import GenPolynomial
from .hidden_algebra import express_in_generators, t_tower_by_commutators, verify_structure
from .reduction import Expander, NoSolution, find_syzygy, reduce_to_generators
from .report import VerificationReport
from .repspace import NotInvariant, expected_spectrum, flag_check, matrix_of, spectrum
from .weyl import op_commutator, op_compose

SUITES = ("commutators", "closures", "syzygies", "spectrum", "hidden", "conjecture")
HEAVY_K = 4

_expanders: dict[int, Expander] = {}


def catalog_expander(k: int) -> Expander:
    """Shared Expander over (H, I1, I2, I12) so products are built once per k."""
    ex = _expanders.get(k)
    if ex is None:
        ex = _expanders[k] = Expander(generators(k))
    return ex


def syzygy_degree(k: int) -> int:
    # H^(2k) leads, and I1*I2^2 is always present
    return max(2 * k, 3)


def double_commutator(k: int, which: str):
    H, I1, I2, I12 = generators(k)
    return op_commutator(I1 if which == "doubleI1" else I2, I12)


def _diff_text(got: GenPolynomial, want: GenPolynomial) -> str:
    diff = got - want
    if diff.is_zero():
        return ""
    return f"{len(diff)} monomials differ, e.g. {diff.monomials()[:3]}"


def suite_commutators(k: int, report: VerificationReport, heavy: bool = False) -> None:
    H, I1, I2, I12 = generators(k)
    for name, op in (("I1", I1), ("I2", I2), ("I12", I12)):
        report.run(f"k={k}:[H,{name}]=0", lambda op=op: op_commutator(H, op).is_zero())
    report.run(
        f"k={k}:I12-table",
        lambda: catalog.build_I12(k, "computed") == catalog.build_I12(k, "fixture"),
    )
    orders = {"H": (H, 2), "I1": (I1, 2), "I2": (I2, 2 * k), "I12": (I12, 2 * k + 1)}
    report.record(
        f"k={k}:orders",
        all(op.order == want for op, want in orders.values()),
        ", ".join(f"{n}:{op.order}" for n, (op, _) in orders.items()),
    )
    report.run(f"k={k}:I2*I1=I1*I2-I12", lambda: op_compose(I2, I1) == op_compose(I1, I2) - I12)


def suite_closures(k: int, report: VerificationReport, heavy: bool = False) -> None:
    gens = generators(k)
    ex = catalog_expander(k)
    for which in ("doubleI1", "doubleI2"):
        want = expected_closure(k, which).rhs
        target = double_commutator(k, which)
        report.run(f"k={k}:{which}:table-expands", lambda want=want, target=target: ex.expand(want) == target)
        if k >= HEAVY_K and not heavy:
            report.skip(f"k={k}:{which}:reduce", "needs --heavy")
            report.skip(f"k={k}:{which}:none-at-degree-{k}", "needs --heavy")
            continue

        def reduce_matches(target=target, want=want):
            got = reduce_to_generators(target, gens, total_degree=k + 1, expander=ex)
            return got == want, _diff_text(got, want)

        def none_below(target=target):
            try:
                reduce_to_generators(target, gens, total_degree=k, expander=ex)
            except NoSolution as exc:
                return True, str(exc)
            return False, "a solution exists at degree k"

        report.run(f"k={k}:{which}:reduce", reduce_matches)
        report.run(f"k={k}:{which}:none-at-degree-{k}", none_below)


def suite_syzygies(k: int, report: VerificationReport, heavy: bool = False) -> None:
    gens = generators(k)
    ex = catalog_expander(k)
    square = ex((0, 0, 0, 2))
    zero_w = {"w": 0}
    try:
        full = expected_closure(k, "syzygy").rhs
    except NotPrinted:
        full = None
    if full is not None:
        report.run(f"k={k}:syzygy:table-expands", lambda: ex.expand(full) == square)
    at_zero = expected_closure(k, "syzygy_omega0").rhs
    report.run(
        f"k={k}:syzygy_omega0:table-expands",
        lambda: ex.expand(at_zero).eval_params(zero_w) == square.eval_params(zero_w),
    )
    if k >= HEAVY_K and not heavy:
        report.skip(f"k={k}:syzygy:find", "needs --heavy")
        return

    def found():
        got = find_syzygy(gens, total_degree=syzygy_degree(k), expander=ex)
        if ex.expand(got) != square:
            return False, "relation does not hold"
        if full is not None and got != full:
            return False, _diff_text(got, full)
        if got.eval_params(zero_w) != at_zero.eval_params(zero_w):
            return False, "w=0 part differs from the stored w=0 relation"
        return True, f"{len(got)} terms, degree {got.degree}"

    report.run(f"k={k}:syzygy:find", found)


def suite_spectrum(k: int, report: VerificationReport, heavy: bool = False, n_max: int = 8) -> None:
    H = catalog.build_hamiltonian(k)

    def triangular_spectrum():
        for N in range(n_max + 1):
            m = matrix_of(H, N, k)
            if not m.is_lower_triangular_by_grade():
                return False, f"not triangular at N={N}"
            if Counter(map(str, m.diagonal())) != Counter(map(str, expected_spectrum(k, N, k))):
                return False, f"diagonal differs at N={N}"
        return True, f"N <= {n_max}"

    report.run(f"k={k}:spectrum:s={k}", triangular_spectrum)
    for s in (k - 1, k):
        if s >= 1:
            flag = flag_check(H, s, 6)
            report.record(f"k={k}:flag:s={s}", flag.passed, "" if flag.passed else flag.failures()[0].detail)
    if k >= 3:

        def fails_below():
            try:
                matrix_of(H, 6, k - 2)
            except NotInvariant as exc:
                return True, str(exc)
            return False, "no invariance violation found"

        report.run(f"k={k}:flag:s={k - 2}-fails", fails_below)


def suite_hidden(k: int, report: VerificationReport, heavy: bool = False) -> None:
    structure = verify_structure(k)
    report.extend(structure, prefix=f"k={k}:")
    report.run(f"k={k}:T-tower-s<=6", lambda: all(t_tower_by_commutators(s, n) for s in range(1, 7) for n in (0, 3)))
    targets = [("x_k", catalog.build_I1(k), k), ("h_k", catalog.build_hamiltonian(k), k)]
    if k >= 2:
        targets.append(("h_k", catalog.build_hamiltonian(k), k - 1))
    for name, op, s in targets:
        report.run(
            f"k={k}:{name}-in-g({s})",
            lambda op=op, s=s: (True, f"{len(express_in_generators(op, s))} products"),
        )


def suite_conjecture(k: int, report: VerificationReport, heavy: bool = False) -> None:
    q_lead, r_lead = catalog.conjecture_forms(k)
    zero_w = {"w": 0}
    q = expected_closure(k, "doubleI2").rhs.eval_params(zero_w)
    report.record(f"k={k}:Q-lead", q == q_lead, _diff_text(q, q_lead))
    r = expected_closure(k, "syzygy_omega0").rhs.eval_params(zero_w)
    report.record(f"k={k}:R-lead", r == r_lead, _diff_text(r, r_lead))


_RUNNERS = {
    "commutators": suite_commutators,
    "closures": suite_closures,
    "syzygies": suite_syzygies,
    "spectrum": suite_spectrum,
    "hidden": suite_hidden,
    "conjecture": suite_conjecture,
}


def run_suite(k: int, suite: str = "all", heavy: bool = False) -> VerificationReport:
    if suite != "all" and suite not in _RUNNERS:
        raise ValueError(f"unknown suite {suite!r}")
    report = VerificationReport(f"k={k} {suite}")
    for name in SUITES if suite == "all" else (suite,):
        _RUNNERS[name](k, report, heavy)
    return report
