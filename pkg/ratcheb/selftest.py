"""
ratcheb - Selftest Module

A fast battery of closed-form and identity checks run by `ratcheb selftest`.
Each check returns (passed, detail); a check that raises counts as failed.
"""

import logging
import math
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .errors import ConvergenceError, RatchebError
from .extension import band_measure_check, bernstein_walsh_check, n_extension, representation_check
from .geometry import INF, CompactSet, ExtPoint, Mobius
from .potential import build_green, harmonic_measure, koosis_check
from .solver import (
    Problem,
    conformal_deviation,
    gap_structure_report,
    is_constant_case,
    solve,
    solve_lp_oracle,
    verify_alternation,
)

logger = logging.getLogger(__name__)

CheckResult = Tuple[bool, str]

INTERVAL = CompactSet([(-1.0, 1.0)])

ORACLE_PROBLEMS = [
    ("[-1,-0.2];[0.3,1]", "inf:3", INF),
    ("[-2,-0.5];[0.5,2]", "inf:2,3:1", INF),
    ("[-1,1]", "2:1", 2.0),
    ("[-1,1]", "inf:3", 2.0),
    ("[-2,-1];[0,1]", "-0.5:2,inf:2", INF),
    ("[-2,-1];[-0.5,0.5];[1,2]", "inf:4,0.75:1", INF),
]

KOOSIS_CASES = [
    ("[-1,1]", "[-1,1];[2,3]", INF, 5.0),
    ("[-1,-0.5];[0.5,1]", "[-1,1]", INF, 2.0),
    ("[-1,1]", "[-1,2]", 4.0, -3.0),
]


def random_problem(rng: np.random.Generator, max_degree: int = 8) -> Problem:
    """
    A random non-constant problem on two or three intervals of [-2, 2].

    Poles sit at infinity and near the middle of random gaps (the outer gap
    included); x_star is infinity or a point of a bounded gap.
    """
    while True:
        k = int(rng.integers(2, 4))
        edges = np.sort(rng.uniform(-2.0, 2.0, 2 * k))
        if np.min(np.diff(edges)) < 0.25:
            continue
        E = CompactSet([(float(edges[2 * i]), float(edges[2 * i + 1])) for i in range(k)])
        gaps = [(float(edges[2 * i + 1]), float(edges[2 * i + 2])) for i in range(k - 1)]
        sites = gaps + [(2.5, 4.0), (-4.0, -2.5)]
        atoms: Dict[ExtPoint, int] = {}
        inf_order = int(rng.integers(0, 4))
        if inf_order:
            atoms[INF] = inf_order
        for _ in range(int(rng.integers(0, 3))):
            a, b = sites[int(rng.integers(len(sites)))]
            c = round(a + (b - a) * float(rng.uniform(0.35, 0.65)), 6)
            atoms[c] = int(rng.integers(1, 4))
        if not 1 <= sum(atoms.values()) <= max_degree:
            continue
        x_star: ExtPoint = INF
        if rng.uniform() < 0.25:
            a, b = gaps[int(rng.integers(len(gaps)))]
            x_star = round(a + (b - a) * float(rng.uniform(0.2, 0.8)), 6)
            if x_star in atoms:
                continue
        p = Problem(E, atoms, x_star)
        if not is_constant_case(p):
            return p


def random_mobius(rng: np.random.Generator) -> Mobius:
    """An orientation preserving map whose pole lies outside [-2.5, 2.5]."""
    pole = float(rng.choice([-1.0, 1.0]) * rng.uniform(3.0, 5.0))
    a = float(rng.uniform(0.5, 2.0))
    return Mobius(a, -a * pole - float(rng.uniform(0.5, 2.0)), 1.0, -pole)


def _chebyshev_recovery() -> CheckResult:
    worst = 0.0
    x = np.linspace(-1.0, 1.0, 400)
    for n in range(1, 13):
        sol = solve(Problem(INTERVAL, {INF: n}, INF))
        err = float(np.max(np.abs(np.real(sol.F.evaluate(x)) - np.cos(n * np.arccos(x)))))
        rel = abs(sol.m - 2.0 ** (n - 1)) / 2.0 ** (n - 1)
        worst = max(worst, err, rel)
    return worst <= 1e-9, f"max deviation {worst:.3e}"


def _residual_growth() -> CheckResult:
    sol = solve(Problem(INTERVAL, {INF: 3}, 2.0))
    return abs(sol.m - 26.0) <= 26e-9, f"m_3 = {sol.m!r}"


def _single_pole() -> CheckResult:
    sol = solve(Problem(INTERVAL, {2.0: 1}, 2.0))
    x = np.linspace(-1.0, 1.0, 50)
    err = float(np.max(np.abs(np.real(sol.F.evaluate(x)) - (2 * x - 1) / (2 - x))))
    return abs(sol.m - 3.0) <= 1e-10 and err <= 1e-10, f"m = {sol.m!r}, deviation {err:.3e}"


def _constant_case() -> CheckResult:
    p = Problem("[-2,-1];[0,1]", {-0.5: 1}, INF)
    sol = solve(p)
    report = verify_alternation(sol.F, p)
    return sol.constant_case and sol.m == 1.0 and report.passed, f"alternation size {report.size}"


def _structure() -> CheckResult:
    p = Problem("[-2,-0.5];[0.5,2]", {0.0: 1, INF: 2}, INF)
    sol = solve(p)
    alternation = verify_alternation(sol.F, p)
    structure = gap_structure_report(sol)
    return alternation.passed and structure.passed, f"{alternation!r}, {structure!r}"


def _structure_battery(count: int = 20, seed: int = 3) -> CheckResult:
    rng = np.random.default_rng(seed)
    failed: List[str] = []
    skipped = 0
    for _ in range(count):
        p = random_problem(rng)
        try:
            sol = solve(p)
        except ConvergenceError as exc:
            logger.warning("battery problem %r did not converge: %s", p, exc)
            skipped += 1
            continue
        if not (verify_alternation(sol.F, p).passed and gap_structure_report(sol).passed
                and sol.defect <= 1e-10):
            failed.append(repr(p))
    ok = not failed and skipped <= count // 10
    return ok, f"{count - skipped} converged, {skipped} skipped, failures {failed}"


def _green_closed_forms() -> CheckResult:
    g_inf = build_green(INTERVAL, INF).eval(2.0)
    g_two = build_green(INTERVAL, 2.0).eval(3.0)
    err = max(abs(g_inf - math.log(2.0 + math.sqrt(3.0))), abs(g_two - math.log(5.0 + 2.0 * math.sqrt(6.0))))
    return err <= 1e-9, f"max deviation {err:.3e}"


def _harmonic_measure() -> CheckResult:
    value = harmonic_measure(build_green(INTERVAL, INF), (0.5, 1.0))
    return abs(value - 1.0 / 3.0) <= 1e-8, f"omega = {value!r}"


def _koosis() -> CheckResult:
    residuals = [koosis_check(CompactSet.from_literal(e1), CompactSet.from_literal(e2), c, z)
                 for e1, e2, c, z in KOOSIS_CASES]
    return max(residuals) <= 1e-6, "residuals " + ", ".join(f"{r:.3e}" for r in residuals)


def _representation() -> CheckResult:
    sol = solve(Problem(INTERVAL, {2.0: 1}, 2.0))
    bands = n_extension(sol.F, INTERVAL)
    rep = representation_check(sol.F, bands, [3.0, 5.0, 1.5j])
    sums = band_measure_check(sol.F, bands)
    err = max(abs(s - 1.0) for s in sums)
    return rep.passed and err <= 1e-6, f"{rep!r}, band sums {sums}"


def _bernstein_walsh() -> CheckResult:
    sol = solve(Problem(INTERVAL, {INF: 3}, INF))
    rng = np.random.default_rng(7)
    z = rng.uniform(-3, 3, 20) + 1j * rng.uniform(-3, 3, 20)
    report = bernstein_walsh_check(sol.F, INTERVAL, list(z), norm=1.0)
    return report.passed, repr(report)


def _oracle() -> CheckResult:
    worst = 0.0
    for E, poles, x_star in ORACLE_PROBLEMS:
        p = Problem(E, poles, x_star)
        worst = max(worst, abs(solve(p).m - solve_lp_oracle(p, grid_size=2001).m))
    return worst <= 5e-4, f"max |m_remez - m_grid| {worst:.3e}"


def _conformal_invariance(count: int = 10, seed: int = 11) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(count):
        E, poles, x_star = ORACLE_PROBLEMS[i % len(ORACLE_PROBLEMS)]
        sol = solve(Problem(E, poles, x_star))
        worst = max(worst, conformal_deviation(sol, random_mobius(rng)))
    return worst <= 1e-7, f"max deviation {worst:.3e}"


CHECKS: Dict[str, Callable[[], CheckResult]] = {
    "chebyshev-recovery": _chebyshev_recovery,
    "residual-growth": _residual_growth,
    "single-pole": _single_pole,
    "constant-case": _constant_case,
    "structure": _structure,
    "structure-battery": _structure_battery,
    "green-closed-forms": _green_closed_forms,
    "harmonic-measure": _harmonic_measure,
    "koosis": _koosis,
    "representation": _representation,
    "bernstein-walsh": _bernstein_walsh,
    "grid-oracle": _oracle,
    "conformal-invariance": _conformal_invariance,
}


class SelftestReport:
    """
    Outcome of the battery.

    Attributes:
        results (list): (name, passed, detail) triples in battery order.
    """

    def __init__(self, results: List[Tuple[str, bool, str]]):
        self.results = results

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.results)

    def failures(self) -> List[str]:
        return [name for name, ok, _ in self.results if not ok]

    def to_dict(self) -> Dict[str, object]:
        return {
            "passed": self.passed,
            "checks": [{"name": name, "passed": ok, "detail": detail} for name, ok, detail in self.results],
        }

    def __repr__(self) -> str:
        return f"SelftestReport(passed={self.passed}, failures={self.failures()})"


def run_selftest(names: Optional[List[str]] = None) -> SelftestReport:
    """Runs the named checks (all by default)."""
    results = []
    for name, check in CHECKS.items():
        if names and name not in names:
            continue
        try:
            ok, detail = check()
        except (RatchebError, ArithmeticError, ValueError) as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        logger.info("selftest %s: %s (%s)", name, "ok" if ok else "FAILED", detail)
        results.append((name, bool(ok), detail))
    return SelftestReport(results)
