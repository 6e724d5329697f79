"""
ratcheb - Asymptotics Module

This module runs sequences of extremal problems whose poles follow an
atomic limit measure mu = sum_i w_i delta_{c_i} and compares them with the
limits predicted by potential theory.

Features:
- PoleSequenceSpec: atoms, weights and the rule that lays out the poles
- generate_divisors: nested (or independent) pole divisors D_1, ..., D_n
- run_root_asymptotics: (1/n) log|F_n(z)| against sum_i w_i G_E(z, c_i)
- zero_measure_compare: Kolmogorov distance between zero counting measures
  and the mu-average of harmonic measures
- szego_widom_modulus: log|F_n| - sum D_n G_E along a residue class
- band_shrinkage: length of E_n minus E per n

Independent solves run on a ThreadPoolExecutor capped by RATCHEB_THREADS.
"""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ArgumentError, DomainError, IntegrityError, NumericError
from .extension import ExtensionOptions, n_extension
from .geometry import INF, CompactSet, ExtPoint, PoleDivisor, ext_point, format_point, gap_of, is_inf
from .potential import DEFAULT_CACHE, GreenCache, GreenOptions, HarmonicMeasure, green_sum
from .solver import Problem, Solution, SolveOptions, apportion, solve

logger = logging.getLogger(__name__)

THREADS_ENV = "RATCHEB_THREADS"

MODES = ("weighted-rotation", "periodic", "independent")


def default_workers() -> int:
    """
    Worker count for concurrent solves: RATCHEB_THREADS if set, else the CPU count.

    Raises:
        ArgumentError: If RATCHEB_THREADS is not a positive integer.
    """
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError as exc:
        raise ArgumentError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from exc
    if value < 1:
        raise ArgumentError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value


class AsymptoticsOptions:
    """
    Options of the asymptotic experiments.

    Attributes:
        max_workers (int): Concurrent solves; None reads RATCHEB_THREADS. Default is None.
        strict_bound (bool): Raise IntegrityError when h_n exceeds its per-n bound. Default is True.
        bound_tol (float): Slack of the per-n bound. Default is 1e-9.
        solve_options (SolveOptions): Options passed to every solve.
        green_options (GreenOptions): Options for Green function models.
    """

    def __init__(self):
        self.max_workers = None
        self.strict_bound = True
        self.bound_tol = 1e-9
        self.solve_options = SolveOptions()
        self.green_options = None

    def workers(self) -> int:
        return self.max_workers if self.max_workers else default_workers()


class PoleSequenceSpec:
    """
    Atomic pole distribution and the rule producing D_n.

    Attributes:
        atoms (list): (c_i, w_i) pairs, w_i > 0, sum w_i = 1.
        mode (str): 'weighted-rotation' (nested, greedy), 'periodic' (nested, cycles
            the atom list) or 'independent' (largest remainder per n).
        x_star: Constant extremal point or a list whose entry n - 1 is x_n*.

    Examples:
        >>> spec = PoleSequenceSpec.from_literal("2:0.5,-2:0.5", mode="periodic")
        >>> spec.period
        2
    """

    def __init__(self, atoms: Sequence[Tuple[ExtPoint, float]], mode: str = "weighted-rotation",
                 x_star=INF):
        if mode not in MODES:
            raise ArgumentError(f"unknown pole sequence mode {mode!r}; expected one of {MODES}")
        if not atoms:
            raise ArgumentError("a pole sequence needs at least one atom")
        self.atoms = [(ext_point(c), float(w)) for c, w in atoms]
        for c, w in self.atoms:
            if not w > 0:
                raise ArgumentError(f"weight of atom {format_point(c)} must be positive, got {w}")
        total = math.fsum(w for _, w in self.atoms)
        if abs(total - 1.0) > 1e-12:
            raise ArgumentError(f"atom weights sum to {total!r}, expected 1")
        if mode != "periodic" and len({c for c, _ in self.atoms}) != len(self.atoms):
            raise ArgumentError("repeated atoms are only meaningful in periodic mode")
        if mode == "periodic":
            p = len(self.atoms)
            if any(abs(w - 1.0 / p) > 1e-12 for _, w in self.atoms):
                raise ArgumentError("periodic mode needs equal weights 1/p; repeat atoms for multiplicity")
        self.mode = mode
        if isinstance(x_star, (list, tuple)):
            self.x_star = [ext_point(x) for x in x_star]
        else:
            self.x_star = ext_point(x_star)

    @classmethod
    def from_literal(cls, text: str, mode: str = "weighted-rotation", x_star=INF) -> "PoleSequenceSpec":
        """Parses 'c:w,c:w,...' (weights may be fractions such as 2/3)."""
        atoms = []
        for token in (t.strip() for t in text.split(",")):
            if not token:
                continue
            point, _, weight = token.rpartition(":")
            if not point:
                raise ArgumentError(f"atom {token!r} must read point:weight")
            try:
                if "/" in weight:
                    num, den = weight.split("/", 1)
                    value = float(num) / float(den)
                else:
                    value = float(weight)
            except (ValueError, ZeroDivisionError) as exc:
                raise ArgumentError(f"malformed weight in atom {token!r}") from exc
            atoms.append((ext_point(point), value))
        return cls(atoms, mode, x_star)

    @property
    def period(self) -> int:
        return len(self.atoms)

    @property
    def limit(self) -> Dict[ExtPoint, float]:
        """The limit measure mu as point -> mass."""
        out: Dict[ExtPoint, float] = {}
        for c, w in self.atoms:
            out[c] = out.get(c, 0.0) + w
        return out

    def x_star_for(self, n: int) -> ExtPoint:
        if isinstance(self.x_star, list):
            if n > len(self.x_star):
                raise ArgumentError(f"x_star sequence has {len(self.x_star)} entries, needed {n}")
            return self.x_star[n - 1]
        return self.x_star

    def validate_against(self, E: CompactSet) -> None:
        """
        Raises:
            DomainError: If an atom lies on E.
        """
        for c in self.limit:
            if E.contains(c):
                raise DomainError(f"atom {format_point(c)} lies on the set")

    def to_dict(self) -> Dict[str, object]:
        x_star = ([format_point(x) for x in self.x_star] if isinstance(self.x_star, list)
                  else format_point(self.x_star))
        return {
            "atoms": [[format_point(c), w] for c, w in self.atoms],
            "mode": self.mode,
            "x_star": x_star,
        }

    def __repr__(self) -> str:
        return f"PoleSequenceSpec({self.to_dict()!r})"


def _counts_divisor(atoms: Sequence[ExtPoint], counts: Sequence[int]) -> PoleDivisor:
    merged: Dict[ExtPoint, int] = {}
    for c, k in zip(atoms, counts):
        if k:
            merged[c] = merged.get(c, 0) + int(k)
    return PoleDivisor(merged)


def generate_divisors(spec: PoleSequenceSpec, n: int) -> List[PoleDivisor]:
    """
    Returns D_1, ..., D_n.

    Nested modes add one pole per step: periodic mode takes the atoms in
    turn, weighted rotation takes the atom with the largest deficit
    k w_i - count_i (smallest index on ties). Independent mode apportions
    every n afresh by largest remainder.

    Examples:
        >>> spec = PoleSequenceSpec([(2.0, 2 / 3), (-2.0, 1 / 3)], mode="independent")
        >>> generate_divisors(spec, 4)[-1].items()
        [(-2.0, 1), (2.0, 3)]
    """
    if n < 1:
        raise ArgumentError(f"n must be at least 1, got {n}")
    points = [c for c, _ in spec.atoms]
    weights = [w for _, w in spec.atoms]
    out: List[PoleDivisor] = []
    if spec.mode == "independent":
        for k in range(1, n + 1):
            out.append(_counts_divisor(points, apportion(weights, k)))
        return out
    counts = [0] * len(points)
    for k in range(1, n + 1):
        if spec.mode == "periodic":
            i = (k - 1) % len(points)
        else:
            deficits = [k * w - c for w, c in zip(weights, counts)]
            i = max(range(len(points)), key=lambda j: (deficits[j], -j))
        counts[i] += 1
        out.append(_counts_divisor(points, counts))
    return out


def _divisors_for(spec: PoleSequenceSpec, n_list: Sequence[int]) -> Dict[int, PoleDivisor]:
    if not n_list:
        raise ArgumentError("need at least one n")
    divisors = generate_divisors(spec, max(n_list))
    return {n: divisors[n - 1] for n in n_list}


def _solve_all(E: CompactSet, spec: PoleSequenceSpec, n_list: Sequence[int],
               options: AsymptoticsOptions) -> Tuple[Dict[int, Solution], Optional[Tuple[int, str]]]:
    """Solves every n concurrently; returns the solutions and the first failure (n, message)."""
    divisors = _divisors_for(spec, n_list)
    problems = {n: Problem(E, D, spec.x_star_for(n)) for n, D in divisors.items()}
    solutions: Dict[int, Solution] = {}
    failures: Dict[int, str] = {}
    with ThreadPoolExecutor(max_workers=options.workers()) as executor:
        futures = {executor.submit(solve, p, options.solve_options): n for n, p in problems.items()}
        for future in as_completed(futures):
            n = futures[future]
            try:
                solutions[n] = future.result()
            except NumericError as exc:
                logger.warning("solve failed at n=%d: %s", n, exc)
                failures[n] = str(exc)
    failure = None
    if failures:
        first = min(failures)
        failure = (first, failures[first])
        solutions = {n: s for n, s in solutions.items() if n < first}
    return solutions, failure


class AsymptoticsRow:
    """One (n, z) row of an asymptotics report; missing values are NaN."""

    COLUMNS = ("n", "z", "h_n", "target", "error", "v_n", "cauchy_increment", "ks_distance")

    def __init__(self, n: int, z: complex, h_n: float, target: float, error: float,
                 bound: float = math.nan, v_n: float = math.nan,
                 cauchy_increment: float = math.nan, ks_distance: float = math.nan):
        self.n = n
        self.z = z
        self.h_n = h_n
        self.target = target
        self.error = error
        self.bound = bound
        self.v_n = v_n
        self.cauchy_increment = cauchy_increment
        self.ks_distance = ks_distance

    def values(self) -> List[object]:
        return [self.n, format_complex(self.z), self.h_n, self.target, self.error, self.v_n,
                self.cauchy_increment, self.ks_distance]

    def to_dict(self) -> Dict[str, object]:
        out = dict(zip(self.COLUMNS, self.values()))
        out["bound"] = self.bound
        return out


def format_complex(z: complex) -> str:
    """'2', '2i', '1-0.5i' style rendering used in reports."""
    z = complex(z)
    if z.imag == 0.0:
        return repr(z.real)
    if z.real == 0.0:
        return f"{z.imag!r}i"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


class ConvergenceReport:
    """
    Rows of an asymptotics run.

    Attributes:
        kind (str): 'root', 'szego' or 'zeros'.
        rows (list): AsymptoticsRow objects ordered by (n, z).
        solutions (dict): n -> Solution.
        failure (tuple): (n, message) of the first failed solve, or None.
        limit_divisor (dict): Estimated limit zero divisor (szego runs).
    """

    def __init__(self, kind: str, rows: List[AsymptoticsRow], solutions: Dict[int, Solution],
                 failure: Optional[Tuple[int, str]] = None,
                 limit_divisor: Optional[Dict[ExtPoint, int]] = None):
        self.kind = kind
        self.rows = rows
        self.solutions = solutions
        self.failure = failure
        self.limit_divisor = limit_divisor or {}

    @property
    def complete(self) -> bool:
        return self.failure is None

    def errors(self, z: complex) -> List[Tuple[int, float]]:
        return [(r.n, r.error) for r in self.rows if r.z == complex(z)]

    def n_error_constant(self) -> float:
        """max n * error over all rows."""
        return max((r.n * r.error for r in self.rows if math.isfinite(r.error)), default=0.0)

    def bound_violations(self, tol: float = 1e-9) -> List[AsymptoticsRow]:
        return [r for r in self.rows if math.isfinite(r.bound) and r.h_n > r.bound + tol]

    def table(self) -> List[List[object]]:
        return [r.values() for r in self.rows]

    def to_dict(self) -> Dict[str, object]:
        return {
            "kind": self.kind,
            "columns": list(AsymptoticsRow.COLUMNS),
            "rows": [r.to_dict() for r in self.rows],
            "n_error_constant": self.n_error_constant(),
            "failure": list(self.failure) if self.failure else None,
            "limit_divisor": [[format_point(c), k] for c, k in sorted(self.limit_divisor.items())],
        }

    def __repr__(self) -> str:
        return f"ConvergenceReport(kind={self.kind!r}, rows={len(self.rows)}, complete={self.complete})"


def _check_points(E: CompactSet, z_list: Sequence[complex]) -> List[complex]:
    points = [complex(z) for z in z_list]
    if not points:
        raise ArgumentError("need at least one evaluation point")
    for z in points:
        if z.imag == 0.0 and E.contains(z.real):
            raise ArgumentError(f"evaluation point {format_complex(z)} lies on the set")
    return points


def _green_arg(z: complex):
    return z.real if z.imag == 0.0 else z


def _log_modulus(F, z: complex) -> float:
    value = abs(F(z))
    return math.log(value) if value > 0 else -math.inf


def run_root_asymptotics(E: CompactSet, spec: PoleSequenceSpec, n_list: Sequence[int],
                         z_list: Sequence[complex], options: Optional[AsymptoticsOptions] = None,
                         cache: Optional[GreenCache] = None) -> ConvergenceReport:
    """
    Compares h_n(z) = (1/n) log|F_n(z)| with the limit sum_i w_i G_E(z, c_i).

    Every row also carries the per-n bound (1/n) sum_c D_n(c) G_E(z, c),
    v_n(z) and the Kolmogorov distance of the zero counting measure (when
    E is bounded).

    Raises:
        IntegrityError: If strict_bound is set and h_n exceeds its per-n bound.

    Examples:
        >>> spec = PoleSequenceSpec([(INF, 1.0)])
        >>> report = run_root_asymptotics(CompactSet([(-1, 1)]), spec, [4], [2.0])
        >>> report.rows[0].error < 0.2
        True
    """
    if options is None:
        options = AsymptoticsOptions()
    cache = cache if cache is not None else DEFAULT_CACHE
    spec.validate_against(E)
    points = _check_points(E, z_list)
    solutions, failure = _solve_all(E, spec, sorted(set(n_list)), options)
    distances: Dict[int, float] = {}
    if E.is_bounded and solutions:
        for row in zero_measure_compare(E, solutions, spec.limit, cache, options.green_options):
            distances[row.n] = row.distance
    rows = []
    for n in sorted(solutions):
        sol = solutions[n]
        for z in points:
            zg = _green_arg(z)
            target = green_sum(E, spec.limit, zg, cache, options.green_options)
            weighted = green_sum(E, sol.problem.poles, zg, cache, options.green_options)
            log_f = _log_modulus(sol.F, z)
            h = log_f / n
            row = AsymptoticsRow(n, z, h, target, abs(h - target), weighted / n, log_f - weighted,
                                 ks_distance=distances.get(n, math.nan))
            rows.append(row)
            logger.info("root asymptotics n=%d z=%s h=%.12g target=%.12g", n, format_complex(z), h, target)
    report = ConvergenceReport("root", rows, solutions, failure)
    violations = report.bound_violations(options.bound_tol)
    if violations and options.strict_bound:
        worst = violations[0]
        raise IntegrityError(f"h_n exceeds its per-n bound at n={worst.n}, "
                             f"z={format_complex(worst.z)}: {worst.h_n!r} > {worst.bound!r}")
    return report


class ZeroMeasureRow:
    """
    Kolmogorov distance of nu_n to rho at one n.

    Attributes:
        n (int): Degree of the pole divisor.
        distance (float): sup_x |nu_n(-inf, x] - rho(-inf, x]|.
        max_gap_mass (float): Largest nu_n mass inside a gap of E.
        x_star_gap_mass (float): nu_n mass inside the gap of x_n*.
    """

    def __init__(self, n: int, distance: float, max_gap_mass: float, x_star_gap_mass: float):
        self.n = n
        self.distance = distance
        self.max_gap_mass = max_gap_mass
        self.x_star_gap_mass = x_star_gap_mass

    def to_dict(self) -> Dict[str, object]:
        return {"n": self.n, "distance": self.distance, "max_gap_mass": self.max_gap_mass,
                "x_star_gap_mass": self.x_star_gap_mass}

    def __repr__(self) -> str:
        return f"ZeroMeasureRow(n={self.n}, distance={self.distance:.3e})"


def zero_measure_compare(E: CompactSet, solutions: Dict[int, Solution], mu: Dict[ExtPoint, float],
                         cache: Optional[GreenCache] = None,
                         options: Optional[GreenOptions] = None) -> List[ZeroMeasureRow]:
    """
    Kolmogorov distance between nu_n = (1/n) D_n^0 and rho = sum_i w_i omega_E(., c_i).

    Raises:
        ArgumentError: If E is unbounded.

    Examples:
        >>> sol = solve(Problem("[-1,1]", "inf:8", INF))
        >>> zero_measure_compare(CompactSet([(-1, 1)]), {8: sol}, {INF: 1.0})[0].distance < 1 / 8 + 1e-6
        True
    """
    if not E.is_bounded:
        raise ArgumentError("zero measures are compared on bounded sets only")
    cache = cache if cache is not None else DEFAULT_CACHE
    measures = [(HarmonicMeasure(cache.get(E, c, options)), w) for c, w in mu.items()]

    def rho_cdf(x: float) -> float:
        return sum(w * hm.cdf(x) for hm, w in measures)

    gaps = E.gaps()
    rows = []
    for n in sorted(solutions):
        sol = solutions[n]
        if sol.zeros.nonreal:
            logger.warning("n=%d: %d non-real zeros left out of nu_n", n, len(sol.zeros.nonreal))
        finite = sorted((x, k) for x, k in sol.zeros.items() if not is_inf(x))
        at_infinity = sum(k for x, k in sol.zeros.items() if is_inf(x))
        below = 0.0
        distance = 0.0
        for x, k in finite:
            r = rho_cdf(x)
            distance = max(distance, abs(below - r))
            below += k / n
            distance = max(distance, abs(below - r))
        distance = max(distance, at_infinity / n)
        masses = {g: 0.0 for g in gaps}
        for x, k in sol.zeros.items():
            if E.contains(x):
                continue
            masses[gap_of(E, x)] += k / n
        star_gap = gap_of(E, sol.problem.x_star)
        rows.append(ZeroMeasureRow(n, distance, max(masses.values(), default=0.0), masses[star_gap]))
        logger.info("zero measure n=%d distance=%.6g", n, distance)
    return rows


def _limit_divisor(E: CompactSet, solution: Solution) -> Tuple[Dict[ExtPoint, int], List[Tuple[ExtPoint, int]]]:
    """Gap zeros of the largest-n solve plus the left edge of the x_star gap; the second list feeds green_sum."""
    star_gap = gap_of(E, solution.problem.x_star)
    divisor: Dict[ExtPoint, int] = {star_gap.left: 1}
    in_gaps = []
    for x, k in solution.zeros.items():
        if E.contains(x) or star_gap.contains(x):
            continue
        divisor[x] = divisor.get(x, 0) + k
        in_gaps.append((x, k))
    return divisor, in_gaps


def szego_widom_modulus(E: CompactSet, spec: PoleSequenceSpec, z_list: Sequence[complex], n_max: int,
                        residue: Optional[int] = None, n_min: int = 1,
                        options: Optional[AsymptoticsOptions] = None,
                        cache: Optional[GreenCache] = None) -> ConvergenceReport:
    """
    v_n(z) = log|F_n(z)| - sum_c D_n(c) G_E(z, c) along n = residue mod period.

    The limit candidate is -log 2 - sum_t D(t) G_E(z, t) with D estimated from
    the gap zeros of the largest-n solve (the x_star gap edge carries D = 1
    and contributes nothing since G vanishes on E).

    Raises:
        ArgumentError: If the pole sequence is not periodic or the subsequence has fewer than 3 terms.
    """
    if spec.mode != "periodic":
        raise ArgumentError("szego_widom_modulus needs a periodic pole sequence")
    if options is None:
        options = AsymptoticsOptions()
    cache = cache if cache is not None else DEFAULT_CACHE
    p = spec.period
    r = n_max % p if residue is None else residue % p
    n_list = [n for n in range(max(1, n_min), n_max + 1) if n % p == r]
    if len(n_list) < 3:
        raise ArgumentError(f"residue class {r} mod {p} up to {n_max} has {len(n_list)} terms; need 3")
    spec.validate_against(E)
    points = _check_points(E, z_list)
    solutions, failure = _solve_all(E, spec, n_list, options)
    if not solutions:
        return ConvergenceReport("szego", [], solutions, failure)
    divisor, in_gaps = _limit_divisor(E, solutions[max(solutions)])
    rows = []
    for z in points:
        zg = _green_arg(z)
        limit = -math.log(2.0) - green_sum(E, in_gaps, zg, cache, options.green_options)
        previous = None
        for n in sorted(solutions):
            sol = solutions[n]
            weighted = green_sum(E, sol.problem.poles, zg, cache, options.green_options)
            log_f = _log_modulus(sol.F, z)
            v = log_f - weighted
            increment = abs(v - previous) if previous is not None else math.nan
            rows.append(AsymptoticsRow(n, z, log_f / n, limit, abs(v - limit), weighted / n, v, increment))
            previous = v
    rows.sort(key=lambda row: (row.n, points.index(row.z)))
    logger.info("szego-widom modulus: %d rows, limit divisor %s", len(rows), divisor)
    return ConvergenceReport("szego", rows, solutions, failure, divisor)


def band_shrinkage(solutions: Dict[int, Solution], E: CompactSet,
                   options: Optional[ExtensionOptions] = None) -> List[Tuple[int, float]]:
    """
    Total length of E_n minus E for every solution (NaN for the constant case).

    Raises:
        ArgumentError: If an extension is unbounded.
    """
    out = []
    base = E.total_length()
    for n in sorted(solutions):
        sol = solutions[n]
        if sol.constant_case:
            out.append((n, math.nan))
            continue
        ext = n_extension(sol.F, E, options).extension
        if not ext.is_bounded:
            raise ArgumentError(f"extension at n={n} is unbounded")
        out.append((n, max(0.0, float(ext.total_length() - base))))
    return out
