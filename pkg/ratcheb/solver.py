"""
ratcheb - Solver Module

This module computes the extremal function of the problem

    maximize  lim_{x -> x*} F(x) / r(x, x*)^d   over F in L(D), ||F||_E <= 1,

with d = D(x*), by a Remez-type exchange driven by equioscillation. The
problem is first moved so that x* sits at infinity; there the constraint
becomes a single linear functional l(F) = 1 (the coefficient of w^d, or the
value at infinity when d = 0) and the exchange minimizes the sup norm.

Features:
- Problem / Solution / SolveOptions
- is_constant_case, solve, verify_alternation
- solve_lp_oracle: dense-simplex linear program on a grid
- gap_structure_report: zero structure, degree bound and gap-edge laws
- compare_gap_change: extremizers for two extremal points in one gap
- conformal_deviation: solution against the solve of its Mobius image
"""

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ArgumentError, ConvergenceError, DomainError, NumericError, RatchebError
from .geometry import (
    INF,
    CompactSet,
    ExtPoint,
    Mobius,
    PoleDivisor,
    ext_point,
    format_point,
    gap_of,
    in_cyclic_interval,
    normalize_problem,
)
from .potential import DEFAULT_CACHE, HarmonicMeasure
from .rational import OrthoBasis, RationalFn, ZeroDivisor, generalized_zeros
from .simplex import linprog_max

logger = logging.getLogger(__name__)


class SolveOptions:
    """
    Options of the exchange iteration.

    Attributes:
        tol (float): Stop when (||F|| - |h|) / |h| <= tol. Default is 1e-10.
        max_iterations (int): Iteration cap. Default is 200.
        eps_pole (float): Relative threshold for pole-order reductions. Default is 1e-8.
        samples_per_interval (int): Minimum derivative samples per interval. Default is 32.
        refine_tol (float): Abscissa tolerance of extremum refinement. Default is 1e-13.
        rescale (bool): Affine rescale of the normalized set into [-1, 1]. Default is True.
        init (str): Initial reference rule: 'harmonic' (counts by harmonic measure of the poles,
            the default), 'length' (counts by interval length) or 'equal'.
        cond_limit (float): Condition number of the exchange system above which a warning is logged. Default is 1e10.

    Examples:
        >>> options = SolveOptions()
        >>> options.tol = 1e-12
    """

    def __init__(self):
        self.tol = 1e-10
        self.max_iterations = 200
        self.eps_pole = 1e-8
        self.samples_per_interval = 32
        self.refine_tol = 1e-13
        self.rescale = True
        self.init = "harmonic"
        self.cond_limit = 1e10

    def to_dict(self) -> Dict[str, object]:
        return dict(vars(self))


class Problem:
    """
    The extremal problem on E with allowed poles D and extremal point x*.

    Attributes:
        set (CompactSet): The set E.
        poles (PoleDivisor): Allowed poles D_n^inf.
        x_star (float): Extremal point off E.
        d (int): D(x_star); d > 0 is a Chebyshev problem, d = 0 a residual problem.

    Examples:
        >>> p = Problem("[-1,1]", "2:1", 2)
        >>> p.d, p.n
        (1, 1)
    """

    def __init__(self, E, poles, x_star: ExtPoint, d: Optional[int] = None):
        if isinstance(E, str):
            E = CompactSet.from_literal(E)
        if isinstance(poles, str):
            poles = PoleDivisor.from_literal(poles)
        elif isinstance(poles, dict):
            poles = PoleDivisor(poles)
        elif not isinstance(poles, PoleDivisor):
            poles = PoleDivisor(poles.atoms)
        x_star = ext_point(x_star)
        if E.contains(x_star):
            raise DomainError(f"extremal point {format_point(x_star)} lies on the set")
        poles.validate_against(E)
        expected = poles.get(x_star)
        if d is not None and int(d) != expected:
            raise ArgumentError(f"d={d} does not match D(x_star)={expected}")
        self.set = E
        self.poles = poles
        self.x_star = x_star
        self.d = expected

    @property
    def n(self) -> int:
        return self.poles.degree

    @property
    def is_chebyshev(self) -> bool:
        return self.d > 0

    def transformed(self, g: Mobius) -> "Problem":
        """The image problem under g (set, poles and x_star all moved)."""
        return Problem(self.set.transform(g), PoleDivisor(self.poles.pushforward(g).atoms),
                       g.apply(self.x_star))

    def to_dict(self) -> Dict[str, object]:
        return {
            "set": self.set.to_literal(),
            "poles": self.poles.to_literal(),
            "x_star": format_point(self.x_star),
            "d": self.d,
            "n": self.n,
        }

    def __repr__(self) -> str:
        return (f"Problem(set={self.set.to_literal()!r}, poles={self.poles.to_literal()!r}, "
                f"x_star={format_point(self.x_star)})")


class Solution:
    """
    The extremizer of a Problem with its certificate.

    Attributes:
        problem (Problem): The solved problem.
        F (RationalFn): Extremal function, ||F||_E = 1.
        m (float): Extremal value.
        alternation (list): n + 1 (point, sign) pairs in cyclic order after x_star.
        zeros (ZeroDivisor): Generalized zero divisor D_n^0.
        constant_case (bool): True when F is identically 1.
        iterations (int): Exchange iterations.
        defect (float): Final equioscillation defect.
        level (float): Final reference level |h| (normalized frame).
        condition (float): Condition number of the last linear system.
    """

    def __init__(self, problem: Problem, F: RationalFn, m: float,
                 alternation: List[Tuple[ExtPoint, int]], zeros: ZeroDivisor,
                 constant_case: bool = False, iterations: int = 0, defect: float = 0.0,
                 level: float = 1.0, condition: float = 1.0):
        self.problem = problem
        self.F = F
        self.m = m
        self.alternation = alternation
        self.zeros = zeros
        self.constant_case = constant_case
        self.iterations = iterations
        self.defect = defect
        self.level = level
        self.condition = condition

    def to_dict(self) -> Dict[str, object]:
        return {
            "problem": self.problem.to_dict(),
            "m": self.m,
            "constant_case": self.constant_case,
            "alternation": [[format_point(x), s] for x, s in self.alternation],
            "zeros": [[format_point(x), k] for x, k in self.zeros.items()],
            "nonreal_zeros": [[z.real, z.imag] for z in self.zeros.nonreal],
            "diagnostics": {
                "iterations": self.iterations,
                "defect": self.defect,
                "level": self.level,
                "condition": self.condition,
            },
            "F": self.F.to_dict(),
        }

    def __repr__(self) -> str:
        return f"Solution(m={self.m!r}, n={self.problem.n}, iterations={self.iterations})"


class _Frame:
    """The problem moved to x_star = inf with its working basis and sign law."""

    def __init__(self, problem: Problem, rescale: bool = True):
        f, W, Dn, _ = normalize_problem(problem.set, problem.poles, problem.x_star, rescale)
        self.problem = problem
        self.chart = f
        self.set = W
        self.divisor = Dn
        self.d = Dn.get(INF)
        self.basis = OrthoBasis.for_set(Dn, W)
        self.functional = self.basis.leading_row(INF, self.d)
        self.functional_norm = float(np.max(np.abs(self.functional)))
        if not self.functional_norm > 0 or not np.isfinite(self.functional_norm):
            raise NumericError(f"degenerate normalization functional for {problem}")
        self.unit_functional = self.functional / self.functional_norm
        self.finite_poles = Dn.finite_atoms()
        self.kappa = f.local_scale(problem.x_star) if self.d else 1.0

    @property
    def n(self) -> int:
        return self.divisor.degree

    def sign_counts(self, w) -> np.ndarray:
        """S(w): number of poles (with multiplicity) to the right of w."""
        w = np.asarray(w, dtype=float)
        S = np.zeros(w.shape, dtype=int)
        for c, m in self.finite_poles:
            S += m * (w < c)
        return S

    def phase(self, w, values) -> np.ndarray:
        """q(w) = sign(F(w)) (-1)^S(w); alternates along an alternation set."""
        return np.sign(values) * (-1.0) ** self.sign_counts(w)

    def sigma(self, ref) -> np.ndarray:
        k = len(ref)
        j = np.arange(1, k + 1)
        return (-1.0) ** (k - j - self.sign_counts(ref))

    def to_original(self, w: Sequence[float]) -> List[ExtPoint]:
        back = self.chart.inverse()
        return [back.apply(float(x)) for x in w]

    def from_original(self, x: Sequence[ExtPoint]) -> np.ndarray:
        return np.array([self.chart.apply(ext_point(v)) for v in x], dtype=float)


def is_constant_case(p: Problem) -> bool:
    """
    True iff every pole is simple and x_star and the poles lie in pairwise distinct gaps.

    Examples:
        >>> is_constant_case(Problem("[-2,-1];[0,1]", "-0.5:1", INF))
        True
        >>> is_constant_case(Problem("[-1,1]", "2:1", 2))
        False
    """
    if any(m > 1 for _, m in p.poles.items()):
        return False
    gaps = [gap_of(p.set, p.x_star)]
    for c in p.poles.support:
        gaps.append(gap_of(p.set, c))
    return len(set(gaps)) == len(gaps)


# ----------------------------------------------------------------------------
# extremum search and reference selection
# ----------------------------------------------------------------------------

def _candidate_points(value, derivative, W: CompactSet, per_interval: int, xatol: float) -> np.ndarray:
    """Interval endpoints plus local extrema of |value| located by derivative sign changes."""
    points: List[float] = []
    k = np.arange(per_interval)
    for a, b in W.intervals:
        t = 0.5 * (a + b) - 0.5 * (b - a) * np.cos(np.pi * k / (per_interval - 1))
        t[0], t[-1] = a, b
        slope = np.sign(np.real(derivative(t)))
        points.extend([a, b])
        for i in range(per_interval - 1):
            if slope[i] == 0.0 and i > 0:
                points.append(float(t[i]))
            elif slope[i] * slope[i + 1] < 0:
                res = minimize_scalar(lambda x: -abs(float(np.real(value(np.array([x]))[0]))),
                                      bounds=(float(t[i]), float(t[i + 1])), method="bounded",
                                      options={"xatol": xatol})
                points.append(float(res.x))
    return np.unique(np.array(points))


def _alternating_runs(points: np.ndarray, values: np.ndarray, phase: np.ndarray) -> List[List[float]]:
    """Merges runs of equal phase keeping the largest |value| (leftmost on ties); drops a trailing negative run."""
    runs: List[List[float]] = []
    for x, v, q in zip(points, values, phase):
        if q == 0:
            continue
        if runs and runs[-1][2] == q:
            if abs(v) > abs(runs[-1][1]):
                runs[-1] = [float(x), float(v), float(q)]
        else:
            runs.append([float(x), float(v), float(q)])
    if runs and runs[-1][2] < 0:
        runs.pop()
    return runs


def _trim(runs: List[List[float]], size: int) -> List[List[float]]:
    """Reduces an alternating sequence to size points keeping the global maximum when possible."""
    runs = list(runs)
    peak = max(runs, key=lambda r: abs(r[1]))[0]
    while len(runs) > size:
        if (len(runs) - size) % 2:
            runs.pop(0)
            continue
        best, best_val = -1, math.inf
        for i in range(len(runs) - 1):
            if runs[i][0] == peak or runs[i + 1][0] == peak:
                continue
            val = max(abs(runs[i][1]), abs(runs[i + 1][1]))
            if val < best_val:
                best, best_val = i, val
        if best < 0:
            best = 0
        del runs[best:best + 2]
    return runs


def _select_reference(points, values, phase, size) -> Optional[np.ndarray]:
    runs = _alternating_runs(points, values, phase)
    if len(runs) < size:
        return None
    return np.array([r[0] for r in _trim(runs, size)])


# ----------------------------------------------------------------------------
# linear algebra
# ----------------------------------------------------------------------------

def _solve_levelled(frame: _Frame, ref: np.ndarray, cond_limit: float) -> Tuple[np.ndarray, float, float]:
    """
    Solves V(ref) a - sigma h = 0, l(a) = 1; returns (a, h, condition).

    The constraint row enters scaled to unit size; a and h are scaled back.
    """
    N = frame.basis.size
    A = np.zeros((N + 1, N + 1))
    A[:N, :N] = frame.basis.matrix(ref)
    A[:N, N] = -frame.sigma(ref)
    A[N, :N] = frame.unit_functional
    rhs = np.zeros(N + 1)
    rhs[N] = 1.0
    cond = float(np.linalg.cond(A))
    if cond > cond_limit:
        logger.warning("exchange system condition %.3e above %.1e", cond, cond_limit)
    if not np.isfinite(cond) or cond > 1e15:
        raise NumericError(f"degenerate exchange system (condition {cond:.3e})")
    try:
        sol = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericError("singular exchange system") from exc
    scale = frame.functional_norm
    return sol[:N] / scale, float(sol[N]) / scale, cond


# ----------------------------------------------------------------------------
# initial references
# ----------------------------------------------------------------------------

def apportion(weights: Sequence[float], total: int) -> List[int]:
    """Largest-remainder rounding of total * weights / sum(weights)."""
    w = np.asarray(weights, dtype=float)
    quotas = total * w / w.sum()
    counts = np.floor(quotas).astype(int)
    remainder = quotas - counts
    for i in sorted(range(len(w)), key=lambda i: (-remainder[i], i))[:total - counts.sum()]:
        counts[i] += 1
    return [int(c) for c in counts]


def _lobatto_reference(W: CompactSet, counts: Sequence[int]) -> np.ndarray:
    pts: List[float] = []
    for (a, b), k in zip(W.intervals, counts):
        if k == 1:
            pts.append(0.5 * (a + b))
        elif k > 1:
            pts.extend(a + 0.5 * (b - a) * (1.0 - math.cos(math.pi * i / (k - 1))) for i in range(k))
    return np.array(sorted(pts))


def _harmonic_counts(frame: _Frame, size: int) -> List[int]:
    """
    Reference points per interval from the harmonic measure of the pole divisor.

    Interval E_i carries about n * omega_D(E_i) zeros of the extremizer and
    one alternation point more than that; the counts are rounded to size.
    """
    W = frame.set
    weights = np.ones(len(W))
    for c, m in frame.divisor.items():
        hm = HarmonicMeasure(DEFAULT_CACHE.get(W, c))
        weights += m * np.array([hm.measure([iv]) for iv in W.intervals])
    return apportion(weights, size)


def _initial_counts(frame: _Frame, options: SolveOptions) -> List[List[int]]:
    """The chosen apportionment followed by one-point moves across gaps holding poles."""
    W = frame.set
    size = frame.n + 1
    by_length = apportion([b - a for a, b in W.intervals], size)
    if options.init == "equal":
        base = apportion([1.0] * len(W), size)
    elif options.init == "length":
        base = by_length
    elif options.init == "harmonic":
        base = by_length
        if len(W) > 1:
            try:
                base = _harmonic_counts(frame, size)
            except RatchebError as exc:
                logger.warning("harmonic apportionment failed (%s); using interval lengths", exc)
    else:
        raise ArgumentError(f"unknown init rule {options.init!r}")
    variants = [base]
    gaps = [(i, any(b0 < c < a1 for c, _ in frame.finite_poles))
            for i, ((_, b0), (a1, _)) in enumerate(zip(W.intervals, W.intervals[1:]))]
    gaps.sort(key=lambda g: not g[1])
    for i, _ in gaps:
        for src, dst in ((i, i + 1), (i + 1, i)):
            if base[src] > 0:
                moved = list(base)
                moved[src] -= 1
                moved[dst] += 1
                variants.append(moved)
    if by_length not in variants:
        variants.append(by_length)
    return variants[:max(frame.n + 1, 2 * len(W) + 2)]


def _initial_reference(frame: _Frame, options: SolveOptions,
                       initial_reference: Optional[Sequence[ExtPoint]]):
    if initial_reference is not None:
        ref = np.sort(frame.from_original(initial_reference))
        if len(ref) != frame.n + 1 or len(np.unique(ref)) != len(ref):
            raise ArgumentError(f"initial reference needs {frame.n + 1} distinct points")
        if not all(frame.set.contains(float(x), 1e-12) for x in ref):
            raise ArgumentError("initial reference points must lie on the set")
        coeffs, h, cond = _solve_levelled(frame, ref, options.cond_limit)
        if not h > 0:
            raise NumericError(f"initial reference gives non-positive level {h:.3e}")
        return ref, coeffs, h, cond
    last_error = None
    for attempt, counts in enumerate(_initial_counts(frame, options)):
        ref = _lobatto_reference(frame.set, counts)
        try:
            coeffs, h, cond = _solve_levelled(frame, ref, options.cond_limit)
        except NumericError as exc:
            last_error = exc
            continue
        if h > 0:
            return ref, coeffs, h, cond
        logger.warning("initial reference %d gives level %.3e; redistributing", attempt, h)
    raise NumericError("no initial reference with positive level") from last_error


# ----------------------------------------------------------------------------
# solve
# ----------------------------------------------------------------------------

def _constant_solution(p: Problem) -> Solution:
    F = RationalFn.constant(1.0, p.poles)
    zeros = generalized_zeros(F, allow_constant=True)
    report = verify_alternation(F, p)
    logger.info("constant case %s: F = 1, m = 1", p)
    return Solution(p, F, 1.0, report.points[:p.n + 1], zeros, constant_case=True)


def solve(p: Problem, options: Optional[SolveOptions] = None,
          initial_reference: Optional[Sequence[ExtPoint]] = None) -> Solution:
    """
    Computes the extremizer of p.

    Args:
        p: The problem.
        options: Iteration options.
        initial_reference: Optional n + 1 points of E to start the exchange from.

    Returns:
        Solution: F with ||F||_E = 1, the extremal value m and the certificate.

    Raises:
        ConvergenceError: If the iteration cap is reached.
        NumericError: If the exchange system degenerates.

    Examples:
        >>> sol = solve(Problem("[-1,1]", "inf:3", INF))
        >>> round(sol.m, 9)
        4.0
    """
    if options is None:
        options = SolveOptions()
    if is_constant_case(p):
        return _constant_solution(p)
    frame = _Frame(p, options.rescale)
    basis = frame.basis
    size = frame.n + 1
    per_interval = max(options.samples_per_interval, 8 * size)

    ref, coeffs, h, cond = _initial_reference(frame, options, initial_reference)
    single = False
    defect = math.inf
    for iteration in range(1, options.max_iterations + 1):
        def value(w, a=coeffs):
            return basis.matrix(w) @ a

        def derivative(w, a=coeffs):
            return basis.derivative_matrix(w) @ a

        cands = _candidate_points(value, derivative, frame.set, per_interval, options.refine_tol)
        cands = np.unique(np.concatenate([cands, ref]))
        vals = value(cands)
        norm = float(np.max(np.abs(vals)))
        defect = (norm - abs(h)) / abs(h)
        logger.debug("iteration %d: h=%.16g norm=%.16g defect=%.3e", iteration, h, norm, defect)
        if defect <= options.tol:
            break
        phase = frame.phase(cands, vals)
        if single:
            peak = int(np.argmax(np.abs(vals)))
            pool = np.unique(np.concatenate([ref, [cands[peak]]]))
            new_ref = _select_reference(pool, value(pool), frame.phase(pool, value(pool)), size)
        else:
            new_ref = _select_reference(cands, vals, phase, size)
        if new_ref is None or np.array_equal(new_ref, ref):
            if single:
                raise ConvergenceError(f"exchange stalled at defect {defect:.3e}", defect, iteration)
            logger.warning("multi-point exchange failed; falling back to single-point exchange")
            single = True
            continue
        try:
            new_coeffs, new_h, new_cond = _solve_levelled(frame, new_ref, options.cond_limit)
        except NumericError:
            new_h = -1.0
        if not new_h > 0:
            logger.warning("non-positive level at iteration %d; single-point exchange", iteration)
            if single:
                raise ConvergenceError(f"exchange lost the sign pattern at defect {defect:.3e}",
                                       defect, iteration)
            single = True
            continue
        ref, coeffs, h, cond = new_ref, new_coeffs, new_h, new_cond
        single = False
    else:
        raise ConvergenceError(f"no convergence in {options.max_iterations} iterations "
                               f"(defect {defect:.3e})", defect, options.max_iterations)

    F = RationalFn(basis, coeffs / norm, chart=frame.chart)
    m = (1.0 / norm) / frame.kappa ** frame.d
    sigma = frame.sigma(ref)
    alternation = [(x, int(s)) for x, s in zip(frame.to_original(ref), sigma)]
    zeros = generalized_zeros(F, options.eps_pole)
    solution = Solution(p, F, float(m), alternation, zeros, iterations=iteration,
                        defect=float(max(defect, 0.0)), level=float(h), condition=cond)
    logger.info("solved %s: m=%.16g in %d iterations (defect %.2e)", p, m, iteration, defect)
    return solution


# ----------------------------------------------------------------------------
# certificates
# ----------------------------------------------------------------------------

class AlternationReport:
    """
    Result of verify_alternation.

    Attributes:
        points (list): The maximal alternation set found, as (point, sign) pairs.
        size (int): Its size.
        required (int): n + 1.
        passed (bool): size >= n + 1.
        norm (float): Sup norm of F on E (sampled extrema).
        sign_residual (float): max over the set of |F(x_j) - sign_j|.
        bound (int): n + 1 - D^0(x_star), the largest admissible size.
        bound_respected (bool): size <= bound.
    """

    def __init__(self, points, required, norm, sign_residual, bound):
        self.points = points
        self.size = len(points)
        self.required = required
        self.passed = self.size >= required
        self.norm = norm
        self.sign_residual = sign_residual
        self.bound = bound
        self.bound_respected = self.size <= bound

    def to_dict(self) -> Dict[str, object]:
        return {
            "points": [[format_point(x), s] for x, s in self.points],
            "size": self.size,
            "required": self.required,
            "passed": self.passed,
            "norm": self.norm,
            "sign_residual": self.sign_residual,
            "bound": self.bound,
            "bound_respected": self.bound_respected,
        }

    def __repr__(self) -> str:
        return f"AlternationReport(size={self.size}, required={self.required}, passed={self.passed})"


def verify_alternation(F: RationalFn, p: Problem, tol: float = 1e-8,
                       options: Optional[SolveOptions] = None) -> AlternationReport:
    """
    Searches E for a maximal alternation set of F with the sign law of p.

    An alternation set of size k is x_1, ..., x_k in cyclic order after
    x_star with F(x_j) = (-1)^(k - j - S(x_j)).

    Examples:
        >>> T3 = RationalFn.from_parts(PoleDivisor({INF: 3}), parts={INF: [-3.0, 0.0, 4.0]})
        >>> verify_alternation(T3, Problem("[-1,1]", "inf:3", INF)).size
        4
    """
    if options is None:
        options = SolveOptions()
    frame = _Frame(p, options.rescale)
    G = F.with_chart(frame.chart.inverse())

    def value(w):
        return np.real(G.evaluate(np.asarray(w, dtype=float)))

    def derivative(w):
        return np.real(G.derivative(np.asarray(w, dtype=float)))

    per_interval = max(options.samples_per_interval, 8 * (frame.n + 1))
    cands = _candidate_points(value, derivative, frame.set, per_interval, options.refine_tol)
    vals = value(cands)
    norm = float(np.max(np.abs(vals)))
    keep = np.abs(vals) >= 1.0 - tol
    runs = _alternating_runs(cands[keep], vals[keep], frame.phase(cands[keep], vals[keep]))
    originals = frame.to_original([r[0] for r in runs])
    points = [(x, int(np.sign(r[1]))) for x, r in zip(originals, runs)]
    sign_residual = max((abs(r[1] - np.sign(r[1])) for r in runs), default=0.0)
    if F.is_constant(options.eps_pole):
        d0 = p.poles.get(p.x_star)
    else:
        d0 = generalized_zeros(F, options.eps_pole).get(p.x_star)
    report = AlternationReport(points, p.n + 1, norm, float(sign_residual), p.n + 1 - d0)
    logger.debug("alternation for %s: %r", p, report)
    return report


# ----------------------------------------------------------------------------
# grid oracle
# ----------------------------------------------------------------------------

class OracleResult:
    """
    Discrete minimax solution on a grid.

    Attributes:
        m (float): Discrete extremal value (original normalization).
        h (float): Minimal discrete norm with l(a) = 1 (normalized frame).
        coeffs (numpy.ndarray): Basis coefficients of the discrete extremizer scaled to norm 1.
        F (RationalFn): The discrete extremizer.
        grid_size (int): Number of grid points.
        iterations (int): Simplex pivots.
    """

    def __init__(self, m, h, coeffs, F, grid_size, iterations):
        self.m = m
        self.h = h
        self.coeffs = coeffs
        self.F = F
        self.grid_size = grid_size
        self.iterations = iterations

    def to_dict(self) -> Dict[str, object]:
        return {"m": self.m, "h": self.h, "coeffs": [float(c) for c in self.coeffs],
                "grid_size": self.grid_size, "iterations": self.iterations}

    def __repr__(self) -> str:
        return f"OracleResult(m={self.m!r}, grid_size={self.grid_size})"


def _grid(W: CompactSet, grid_size: int) -> np.ndarray:
    counts = [max(2, c) for c in apportion([b - a for a, b in W.intervals], grid_size)]
    return np.concatenate([np.linspace(a, b, k) for (a, b), k in zip(W.intervals, counts)])


def solve_lp_oracle(p: Problem, grid_size: int = 2001) -> OracleResult:
    """
    Solves the grid-discretized problem as a dense linear program.

    The program solved is the dual form

        maximize mu  subject to  sum(u + v) = 1,  V^T (u - v) - mu l = 0,  u, v, mu >= 0,

    whose multipliers are (h, -a) for the discrete problem min h,
    |V a| <= h, l(a) = 1.

    Raises:
        ArgumentError: If grid_size exceeds 10^4.
        IntegrityError: If the program is infeasible or unbounded.
    """
    if grid_size > 10 ** 4 or grid_size < 2:
        raise ArgumentError(f"grid_size must lie in [2, 10^4], got {grid_size}")
    if is_constant_case(p):
        F = RationalFn.constant(1.0, p.poles)
        return OracleResult(1.0, 1.0, np.array(F.coeffs), F, grid_size, 0)
    frame = _Frame(p)
    grid = _grid(frame.set, grid_size)
    V = frame.basis.matrix(grid)
    N = frame.basis.size
    M = grid.size
    A = np.zeros((N + 1, 2 * M + 1))
    A[0, :2 * M] = 1.0
    A[1:, :M] = V.T
    A[1:, M:2 * M] = -V.T
    A[1:, 2 * M] = -frame.unit_functional
    b = np.zeros(N + 1)
    b[0] = 1.0
    c = np.zeros(2 * M + 1)
    c[-1] = 1.0
    result = linprog_max(c, A, b)
    a = -result.duals[1:]
    h = float(np.max(np.abs(V @ a)))
    scale = float(frame.functional @ a)
    if not scale > 0:
        raise NumericError(f"oracle multipliers violate the normalization (l(a) = {scale:.3e})")
    h /= scale
    a = a / scale
    F = RationalFn(frame.basis, a / h, chart=frame.chart)
    m = (1.0 / h) / frame.kappa ** frame.d
    logger.info("grid oracle for %s: m=%.10g (grid %d, %d pivots)", p, m, M, result.iterations)
    return OracleResult(float(m), h, a / h, F, int(M), result.iterations)


# ----------------------------------------------------------------------------
# structure reports
# ----------------------------------------------------------------------------

class GapStructureReport:
    """
    Zero structure and edge values of an extremal function.

    Attributes:
        zero_counts (list): (gap, count) for every gap of E.
        real (bool): All generalized zeros are real.
        simple (bool): All generalized zeros are simple.
        per_gap_ok (bool): At most one generalized zero per gap.
        x_star_gap_empty (bool): No generalized zero in the gap of x_star.
        degree (int): deg F.
        degree_bound (int): ceil((n + 1) / 2).
        degree_ok (bool): degree >= degree_bound (True for constant solutions).
        edge_values (tuple): F at the edges (a, b) of the x_star gap.
        edge_expected (tuple): The signs (-1)^{D((a, x*))} and (-1)^{D([x*, b))}.
        edge_ok (bool): Edge values match within tolerance.
        pole_gaps (list): Per gap holding a pole: dict with edge moduli and the one/both edge law.
        passed (bool): Conjunction of the asserted checks.
    """

    def __init__(self):
        self.zero_counts: List[Tuple[object, int]] = []
        self.real = True
        self.simple = True
        self.per_gap_ok = True
        self.x_star_gap_empty = True
        self.degree = 0
        self.degree_bound = 0
        self.degree_ok = True
        self.edge_values = (0.0, 0.0)
        self.edge_expected = (1, 1)
        self.edge_ok = True
        self.pole_gaps: List[Dict[str, object]] = []

    @property
    def passed(self) -> bool:
        return (self.real and self.simple and self.per_gap_ok and self.x_star_gap_empty
                and self.degree_ok and self.edge_ok)

    def to_dict(self) -> Dict[str, object]:
        return {
            "zero_counts": [[format_point(g.left), format_point(g.right), k] for g, k in self.zero_counts],
            "real": self.real,
            "simple": self.simple,
            "per_gap_ok": self.per_gap_ok,
            "x_star_gap_empty": self.x_star_gap_empty,
            "degree": self.degree,
            "degree_bound": self.degree_bound,
            "degree_ok": self.degree_ok,
            "edge_values": list(self.edge_values),
            "edge_expected": list(self.edge_expected),
            "edge_ok": self.edge_ok,
            "pole_gaps": self.pole_gaps,
            "passed": self.passed,
        }

    def __repr__(self) -> str:
        return f"GapStructureReport(passed={self.passed})"


def _real_value(F: RationalFn, x: ExtPoint) -> float:
    return float(F(x).real)


def gap_structure_report(solution: Solution, tol: float = 1e-8) -> GapStructureReport:
    """
    Checks the zero structure and gap-edge laws of an extremal solution.

    Examples:
        >>> sol = solve(Problem("[-1,1]", "2:1", 2))
        >>> gap_structure_report(sol).edge_expected
        (1, -1)
    """
    p = solution.problem
    F = solution.F
    report = GapStructureReport()
    zeros = solution.zeros
    report.real = not zeros.nonreal
    report.simple = all(k == 1 for _, k in zeros.items())
    star_gap = gap_of(p.set, p.x_star)
    for gap in p.set.gaps():
        count = sum(k for x, k in zeros.items() if not p.set.contains(x) and gap.contains(x))
        report.zero_counts.append((gap, count))
        if count > 1:
            report.per_gap_ok = False
        if gap == star_gap and count:
            report.x_star_gap_empty = False
    if not solution.constant_case:
        report.degree = F.actual_pole_divisor().degree
        report.degree_bound = (p.n + 2) // 2
        report.degree_ok = report.degree >= report.degree_bound

    a, b = star_gap.left, star_gap.right
    left_sum = sum(m for c, m in p.poles.items() if in_cyclic_interval(c, a, p.x_star))
    right_sum = sum(m for c, m in p.poles.items()
                    if in_cyclic_interval(c, p.x_star, b, include_left=True))
    report.edge_expected = ((-1) ** left_sum, (-1) ** right_sum)
    report.edge_values = (_real_value(F, a), _real_value(F, b))
    report.edge_ok = all(abs(v - e) <= tol for v, e in zip(report.edge_values, report.edge_expected))

    for c in p.poles.support:
        if c == p.x_star:
            continue
        gap = gap_of(p.set, c)
        moduli = (abs(_real_value(F, gap.left)), abs(_real_value(F, gap.right)))
        at_one = [abs(v - 1.0) <= tol for v in moduli]
        zero_at_pole = zeros.get(c) == 1
        report.pole_gaps.append({
            "pole": format_point(c),
            "edge_moduli": list(moduli),
            "one_edge": any(at_one),
            "both_edges_expected": zero_at_pole,
            "both_edges": all(at_one),
        })
    logger.debug("gap structure for %s: %r", p, report)
    return report


def _set_samples(E: CompactSet, per_interval: int) -> np.ndarray:
    """Sample points of E; infinite intervals are cut off at distance 1e3."""
    if E.is_bounded:
        return np.array(E.sample(per_interval))
    return np.concatenate([np.linspace(max(a, -1e3), min(b, 1e3), per_interval)
                           for a, b in E.intervals])


class GapChangeReport:
    """
    Comparison of extremizers for two extremal points of one gap.

    Attributes:
        sign (int): The factor s with F_1 = s F_2 (best fit).
        deviation (float): max |F_1 - s F_2| over sample points of E.
        passed (bool): deviation <= tol.
    """

    def __init__(self, sign: int, deviation: float, tol: float, first: Solution, second: Solution):
        self.sign = sign
        self.deviation = deviation
        self.passed = deviation <= tol
        self.first = first
        self.second = second

    def to_dict(self) -> Dict[str, object]:
        return {"sign": self.sign, "deviation": self.deviation, "passed": self.passed,
                "m_first": self.first.m, "m_second": self.second.m}

    def __repr__(self) -> str:
        return f"GapChangeReport(sign={self.sign}, deviation={self.deviation:.3e})"


def compare_gap_change(E: CompactSet, D: PoleDivisor, x_star_1: ExtPoint, x_star_2: ExtPoint,
                       options: Optional[SolveOptions] = None, tol: float = 1e-7) -> GapChangeReport:
    """
    Solves for two extremal points in the same gap and compares the extremizers up to sign.

    Raises:
        ArgumentError: If the two points lie in different gaps.

    Examples:
        >>> E = CompactSet([(-1, 1)])
        >>> compare_gap_change(E, PoleDivisor({2.0: 1}), 2.0, INF).sign
        -1
    """
    if gap_of(E, x_star_1) != gap_of(E, x_star_2):
        raise ArgumentError(f"{format_point(ext_point(x_star_1))} and {format_point(ext_point(x_star_2))} "
                            "lie in different gaps")
    first = solve(Problem(E, D, x_star_1), options)
    second = solve(Problem(E, D, x_star_2), options)
    xs = _set_samples(E, 64)
    f1 = np.real(first.F.evaluate(xs))
    f2 = np.real(second.F.evaluate(xs))
    plus = float(np.max(np.abs(f1 - f2)))
    minus = float(np.max(np.abs(f1 + f2)))
    sign, deviation = (1, plus) if plus <= minus else (-1, minus)
    return GapChangeReport(sign, deviation, tol, first, second)


def conformal_deviation(solution: Solution, g: Mobius, per_interval: int = 16,
                        options: Optional[SolveOptions] = None) -> float:
    """
    Solves the image of solution.problem under g and compares it with the transport.

    The image extremizer F_g must satisfy F_g(g(x)) = F(x) on E, and its
    extremal value m_g = m * kappa^d with kappa = g.local_scale(x_star).
    Returns the larger of the relative deviation in m and the sup deviation
    in F over samples of E.

    Examples:
        >>> sol = solve(Problem("[-1,1]", "2:1", 2))
        >>> conformal_deviation(sol, Mobius.affine(2.0, 1.0)) < 1e-8
        True
    """
    p = solution.problem
    image = solve(p.transformed(g), options)
    kappa = g.local_scale(p.x_star) if p.d else 1.0
    expected = solution.m * kappa ** p.d
    deviation = abs(image.m - expected) / abs(expected)
    xs = _set_samples(p.set, per_interval)
    mapped = np.array([g.apply(float(x)) for x in xs], dtype=float)
    keep = np.isfinite(mapped)
    moved = np.real(image.F.evaluate(mapped[keep]))
    here = np.real(solution.F.evaluate(xs[keep]))
    deviation = max(deviation, float(np.max(np.abs(moved - here))))
    logger.debug("conformal deviation of %s under %r: %.3e", p, g, deviation)
    return deviation
