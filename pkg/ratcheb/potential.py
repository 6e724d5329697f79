"""
ratcheb - Potential Module

This module provides Green functions, harmonic measures and critical
points for finite unions of real intervals.

G_E(z, c) is the real part of an abelian integral of the third kind,

    G_E(z, c) = Re int_{e}^{z} M(t) / ((t - c) sqrt(R(t))) dt,
    R(t) = prod_j (t - e_j),

(M(t)/sqrt(R(t)) dt for c = inf) started at an endpoint e of E. The
polynomial M is fixed by the logarithmic singularity at c and by the
vanishing of the real integrals over every bounded gap, which keeps G at
zero along all of E.

Features:
- build_green / green_eval with GreenOptions tolerances
- HarmonicMeasure densities, sub-interval masses and distribution function
- critical_points: zeros of the Green differential in the gaps
- koosis_check and monotonicity_check self-tests
- green_sum over weighted divisors, with a thread-safe GreenCache
"""

import cmath
import logging
import math
import threading
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import quad
from scipy.special import roots_jacobi

from .errors import ArgumentError, DomainError, NumericError
from .geometry import (
    INF,
    CompactSet,
    Divisor,
    ExtPoint,
    Mobius,
    ext_point,
    format_point,
    is_inf,
)
from .quadrature import MAX_NODES, gauss_chebyshev, gauss_legendre

logger = logging.getLogger(__name__)


class GreenOptions:
    """
    Numerical options of the Green-function engine.

    Attributes:
        quad_tol (float): Order-doubling tolerance of the period quadratures. Default is 1e-12.
        max_nodes (int): Node cap for Gauss-Chebyshev rules. Default is 2**14.
        eval_epsabs (float): Absolute tolerance of path integrals. Default is 1e-13.
        eval_epsrel (float): Relative tolerance of path integrals. Default is 1e-12.
        eval_limit (int): Subinterval limit of the adaptive path quadrature. Default is 400.
        min_gap (float): Relative length below which a gap is rejected as degenerate. Default is 1e-9.
        period_tol (float): Largest accepted gap-period residual. Default is 1e-10.
        measure_tol (float): Order-doubling tolerance for harmonic measures. Default is 1e-12.
    """

    def __init__(self):
        self.quad_tol = 1e-12
        self.max_nodes = MAX_NODES
        self.eval_epsabs = 1e-13
        self.eval_epsrel = 1e-12
        self.eval_limit = 400
        self.min_gap = 1e-9
        self.period_tol = 1e-10
        self.measure_tol = 1e-12

    def key(self) -> Tuple:
        return (self.quad_tol, self.max_nodes, self.eval_epsabs, self.eval_epsrel,
                self.eval_limit, self.min_gap, self.period_tol, self.measure_tol)


def _working_chart(E: CompactSet) -> Mobius:
    """Mobius map taking E into [-1, 1] (sending a gap point to inf first if E contains inf)."""
    f = Mobius.identity()
    if E.contains_infinity:
        gap = E.gaps()[0]
        f = Mobius.send_to_infinity(gap.sample(1)[0])
    image = E.transform(f)
    lo, hi = image.hull
    alpha = 2.0 / (hi - lo)
    beta = -(hi + lo) / (hi - lo)
    if alpha == 1.0 and beta == 0.0:
        return f
    return Mobius.affine(alpha, beta).compose(f)


class GreenModel:
    """
    Numeric model of G_E(., c).

    The model lives in working coordinates w = chart(z), where the set is a
    bounded union of intervals inside [-1, 1]. All public methods take
    points in the caller's coordinates.

    Attributes:
        set (CompactSet): The set in caller coordinates.
        pole (float): The pole in caller coordinates.
        chart (Mobius): Map from caller to working coordinates.
        working_set (CompactSet): chart(set).
        working_pole (float): chart(pole).
        endpoints (numpy.ndarray): Working endpoints e_1 < ... < e_{2g+2}.
        numerator_coeffs (numpy.ndarray): Monomial coefficients of M (lowest first, working variable).
        period_residuals (list): Achieved gap-period integrals.
    """

    def __init__(self, E: CompactSet, c: ExtPoint, chart: Mobius, numerator_coeffs: np.ndarray,
                 period_residuals: Sequence[float], options: GreenOptions):
        self.set = E
        self.pole = c
        self.chart = chart
        self.working_set = E.transform(chart)
        self.working_pole = chart.apply(c)
        self.endpoints = np.array(self.working_set.endpoints)
        self.numerator_coeffs = np.asarray(numerator_coeffs, dtype=float)
        self.period_residuals = [float(r) for r in period_residuals]
        self.options = options
        self._coeff_list = [float(x) for x in self.numerator_coeffs]
        self._ends = [float(x) for x in self.endpoints]

    @property
    def genus(self) -> int:
        return len(self.endpoints) // 2 - 1

    @property
    def pole_at_infinity(self) -> bool:
        return is_inf(self.working_pole)

    # working-coordinate kernels ---------------------------------------------

    def numerator(self, t):
        """M(t) in working coordinates (scalar or array)."""
        acc = 0.0 * t
        for coef in reversed(self._coeff_list):
            acc = acc * t + coef
        return acc

    def _integrand(self, t: complex, skip: int = -1) -> complex:
        """M(t)/((t-c) sqrt R(t)); with skip=k the factor sqrt(t - e_k) is left out."""
        den = 1.0 + 0j
        for k, e in enumerate(self._ends):
            if k != skip:
                den *= cmath.sqrt(t - e)
        if not self.pole_at_infinity:
            den *= t - self.working_pole
        return self.numerator(t) / den

    def working_density(self, x: np.ndarray) -> np.ndarray:
        """Harmonic measure density |M(x)| / (pi |x - c| sqrt|R(x)|) at interior points of the working set."""
        x = np.asarray(x, dtype=float)
        R = np.ones_like(x)
        for e in self._ends:
            R = R * np.abs(x - e)
        dens = np.abs(self.numerator(x)) / (math.pi * np.sqrt(R))
        if not self.pole_at_infinity:
            dens = dens / np.abs(x - self.working_pole)
        return dens

    def _reduced_density(self, x: np.ndarray, a: float, b: float) -> np.ndarray:
        """Density times sqrt((x - a)(b - x)) for an interval [a, b] of the working set."""
        x = np.asarray(x, dtype=float)
        Q = np.ones_like(x)
        for e in self._ends:
            if e != a and e != b:
                Q = Q * np.abs(x - e)
        dens = np.abs(self.numerator(x)) / (math.pi * np.sqrt(Q))
        if not self.pole_at_infinity:
            dens = dens / np.abs(x - self.working_pole)
        return dens

    def working_eval(self, w: complex) -> float:
        """G at a working-coordinate point (finite, not the pole)."""
        w = complex(w)
        if w.imag < 0:
            w = w.conjugate()
        if w.imag == 0.0 and self.working_set.contains(w.real):
            return 0.0
        k = int(np.argmin(np.abs(self.endpoints - w)))
        e = self._ends[k]
        height = max(w.imag, 0.5 * abs(w.real - e), 0.05)
        opts = dict(epsabs=self.options.eval_epsabs, epsrel=self.options.eval_epsrel,
                    limit=self.options.eval_limit)
        rot = cmath.exp(-0.25j * math.pi)

        def leg1(y: float) -> float:
            return (1j * self._integrand(complex(e, y), skip=k) * rot).real

        def leg2(x: float) -> float:
            return self._integrand(complex(x, height)).real

        def leg3(y: float) -> float:
            return (1j * self._integrand(complex(w.real, y))).real

        total, _ = quad(leg1, 0.0, height, weight="alg", wvar=(-0.5, 0.0), **opts)
        if w.real != e:
            part, _ = quad(leg2, e, w.real, **opts)
            total += part
        if height != w.imag:
            part, _ = quad(leg3, height, w.imag, **opts)
            total += part
        return float(total)

    # caller-coordinate API --------------------------------------------------

    def eval(self, z: Union[complex, float]) -> float:
        """G_E(z, c); +inf at the pole."""
        if isinstance(z, (float, int)) and math.isinf(z):
            w = complex(self.chart.apply(INF))
        else:
            w = self.chart.apply_complex(complex(z))
        if math.isinf(w.real) or math.isinf(w.imag):
            if self.pole_at_infinity:
                return INF
            # symmetry G(inf, c) = G(c, inf)
            partner = build_green(self.working_set, INF, self.options)
            return partner.working_eval(self.working_pole)
        if w.imag == 0.0 and not self.pole_at_infinity and w.real == self.working_pole:
            return INF
        return self.working_eval(w)

    def __repr__(self) -> str:
        return (f"GreenModel(set={self.set.to_literal()!r}, pole={format_point(self.pole)}, "
                f"genus={self.genus})")


def _gap_integrals(model_ends: Sequence[float], c: ExtPoint, degree: int,
                   options: GreenOptions) -> np.ndarray:
    """
    Matrix I[j, k] = (PV) int_{gap j} t^k / ((t - c) sqrt R(t)) dt over the bounded gaps.

    Uses t = mid + half*x, which turns the edge singularities into the
    Chebyshev weight; a pole inside the gap is removed by subtracting its
    value, since PV int dx / ((x - x0) sqrt(1 - x^2)) = 0.
    """
    ends = list(model_ends)
    g = len(ends) // 2 - 1
    out = np.zeros((g, degree + 1))
    powers = np.arange(degree + 1)
    for j in range(g):
        left, right = ends[2 * j + 1], ends[2 * j + 2]
        mid, half = 0.5 * (left + right), 0.5 * (right - left)
        others = [e for e in ends if e != left and e != right]
        root_mid = complex(1.0)
        for e in ends:
            root_mid *= cmath.sqrt(mid - e)
        sign = 1.0 if root_mid.real > 0 else -1.0

        def q(t: np.ndarray) -> np.ndarray:
            acc = np.ones_like(t)
            for e in others:
                acc = acc * np.sqrt(np.abs(t - e))
            return sign * acc

        def phi(t: np.ndarray) -> np.ndarray:
            return t[:, None] ** powers[None, :] / q(t)[:, None]

        inside = (not is_inf(c)) and left < c < right

        def func(x: np.ndarray) -> np.ndarray:
            t = mid + half * x
            if is_inf(c):
                return phi(t)
            if not inside:
                return phi(t) / (t - c)[:, None]
            diff = t - c
            near = np.abs(diff) < 1e-13 * max(1.0, abs(c))
            safe = np.where(near, 1.0, diff)
            quotient = (phi(t) - phi(np.array([c]))) / safe[:, None]
            if np.any(near):
                h = 1e-7 * half
                slope = (phi(np.array([c + h])) - phi(np.array([c - h]))) / (2 * h)
                quotient[near] = slope
            return quotient

        # dt / sqrt|R| = dx / (|q| sqrt(1 - x^2)) after the substitution
        value, _ = gauss_chebyshev(func, options.quad_tol, options.max_nodes)
        out[j] = value
    return out


def build_green(E: CompactSet, c: ExtPoint, options: Optional[GreenOptions] = None) -> GreenModel:
    """
    Builds the model of G_E(., c).

    Args:
        E: The set (may contain inf; a working chart is chosen).
        c: Pole off E.
        options: Numerical options.

    Returns:
        GreenModel: The model with numerator and achieved period residuals.

    Raises:
        DomainError: If c lies on E (gap edges included) or a gap is degenerate.
        NumericError: If quadrature fails or the period residuals exceed options.period_tol.

    Examples:
        >>> model = build_green(CompactSet([(-1, 1)]), INF)
        >>> round(model.eval(2.0), 10)
        1.3169578969
    """
    if options is None:
        options = GreenOptions()
    c = ext_point(c)
    if E.contains(c):
        raise DomainError(f"pole {format_point(c)} lies on the set")
    chart = _working_chart(E)
    W = E.transform(chart)
    cw = chart.apply(c)
    ends = W.endpoints
    for gap in W.gaps():
        if not gap.unbounded and gap.length < options.min_gap * W.scale:
            raise DomainError(f"degenerate gap of length {gap.length:.3e} in {E.to_literal()}")
    g = W.genus
    if is_inf(cw):
        I = _gap_integrals(ends, cw, g, options)
        if g:
            try:
                lower = np.linalg.solve(I[:, :g], -I[:, g])
            except np.linalg.LinAlgError as exc:
                raise NumericError(f"singular period system for {E.to_literal()}") from exc
            coeffs = np.concatenate([lower, [1.0]])
        else:
            coeffs = np.array([1.0])
    else:
        I = _gap_integrals(ends, cw, g, options)
        root_c = complex(1.0)
        for e in ends:
            root_c *= cmath.sqrt(cw - e)
        norm_row = cw ** np.arange(g + 1)
        A = np.vstack([I, norm_row[None, :]]) if g else norm_row[None, :]
        rhs = np.zeros(g + 1)
        rhs[-1] = -root_c.real
        try:
            coeffs = np.linalg.solve(A, rhs)
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"singular period system for pole {format_point(c)}") from exc
    residuals = (I @ coeffs).tolist() if g else []
    scale = max(1.0, float(np.max(np.abs(I))) if g else 1.0)
    if residuals and max(abs(r) for r in residuals) > options.period_tol * scale:
        raise NumericError(f"gap-period residuals too large for {E.to_literal()}", residuals)
    model = GreenModel(E, c, chart, coeffs, residuals, options)
    logger.debug("built %s residuals=%s", model, residuals)
    return model


def green_eval(model: GreenModel, z: Union[complex, float]) -> float:
    """
    Evaluates G_E(z, c).

    Examples:
        >>> model = build_green(CompactSet([(-1, 1)]), 2.0)
        >>> round(green_eval(model, 3.0), 8)
        2.29243167
    """
    return model.eval(z)


class HarmonicMeasure:
    """
    Harmonic measure omega_E(., c) attached to a Green model.

    Attributes:
        green (GreenModel): The model providing the density.

    Examples:
        >>> hm = HarmonicMeasure(build_green(CompactSet([(-1, 1)]), INF))
        >>> round(hm.measure([(0.5, 1.0)]), 10)
        0.3333333333
    """

    def __init__(self, green: GreenModel):
        self.green = green

    def density(self, x) -> np.ndarray:
        """Density with respect to dx in caller coordinates, at interior points of the set."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        f = self.green.chart
        w = np.array([f.apply(float(v)) for v in x])
        jac = f.determinant / (f.c * x + f.d) ** 2
        return self.green.working_density(w) * np.abs(jac)

    def _working_piece(self, u: float, v: float) -> float:
        W = self.green.working_set
        tol = 1e-12 * W.scale
        for a, b in W.intervals:
            if a - tol <= u and v <= b + tol:
                u, v = max(u, a), min(v, b)
                if not v > u:
                    return 0.0
                theta_u = math.acos(min(1.0, max(-1.0, 1.0 - 2.0 * (u - a) / (b - a))))
                theta_v = math.acos(min(1.0, max(-1.0, 1.0 - 2.0 * (v - a) / (b - a))))

                def func(theta: np.ndarray) -> np.ndarray:
                    x = a + 0.5 * (b - a) * (1.0 - np.cos(theta))
                    return self.green._reduced_density(x, a, b)

                value, _ = gauss_legendre(func, theta_u, theta_v, self.green.options.measure_tol)
                return float(value)
        raise ArgumentError(f"interval [{u}, {v}] is not contained in the set")

    def measure(self, sub: Iterable[Sequence[float]]) -> float:
        """
        Mass of a union of sub-intervals of the set.

        Raises:
            ArgumentError: If a piece is not contained in the set.
        """
        f = self.green.chart
        total = 0.0
        for piece in sub:
            u, v = ext_point(piece[0]), ext_point(piece[1])
            if piece[0] == -math.inf:
                u = INF
            wu, wv = f.apply(u), f.apply(v)
            if not wv >= wu:
                raise ArgumentError(f"sub-interval [{piece[0]}, {piece[1]}] is reversed")
            total += self._working_piece(wu, wv)
        return total

    def total(self) -> float:
        return self.measure(self.green.set.intervals)

    def cdf(self, x: float) -> float:
        """Mass of the set intersected with (-inf, x] (bounded sets)."""
        pieces = [(a, min(b, x)) for a, b in self.green.set.intervals if a < x]
        return self.measure(pieces)

    def __repr__(self) -> str:
        return f"HarmonicMeasure({self.green!r})"


def harmonic_measure(model: GreenModel, sub: Union[Sequence[float], Sequence[Sequence[float]]]) -> float:
    """
    Returns omega_E(sub, c) for an interval or a list of intervals inside E.

    Raises:
        ArgumentError: If sub is not contained in E.
    """
    if len(sub) == 2 and not isinstance(sub[0], (list, tuple)):
        sub = [sub]
    return HarmonicMeasure(model).measure(sub)


def critical_points(model: GreenModel) -> List[float]:
    """
    Real critical points of G_E(., c): zeros of M inside the gaps (caller coordinates).

    Examples:
        >>> critical_points(build_green(CompactSet([(-2, -1), (1, 2)]), INF))
        [0.0]
    """
    coeffs = model.numerator_coeffs
    if len(coeffs) < 2:
        return []
    roots = np.roots(coeffs[::-1])
    W = model.working_set
    back = model.chart.inverse()
    out = []
    for r in roots:
        if abs(r.imag) > 1e-8:
            continue
        x = float(r.real)
        if not W.contains(x):
            y = back.apply(x)
            out.append(0.0 if abs(y) < 1e-13 * model.set.scale else y)
    return sorted(out)


class GreenCache:
    """
    Thread-safe cache of Green models keyed by (set, pole, options).

    Models are built outside the lock; concurrent builders of the same key
    produce identical models and the first insert wins.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._models: Dict[Tuple, GreenModel] = {}
        self.hits = 0
        self.misses = 0

    def get(self, E: CompactSet, c: ExtPoint, options: Optional[GreenOptions] = None) -> GreenModel:
        if options is None:
            options = GreenOptions()
        c = ext_point(c)
        key = (E.intervals, c, options.key())
        with self._lock:
            model = self._models.get(key)
            if model is not None:
                self.hits += 1
                return model
            self.misses += 1
        model = build_green(E, c, options)
        with self._lock:
            return self._models.setdefault(key, model)

    def clear(self) -> None:
        with self._lock:
            self._models.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self._models)

    def __repr__(self) -> str:
        return f"GreenCache(models={len(self)}, hits={self.hits}, misses={self.misses})"


DEFAULT_CACHE = GreenCache()


def _weighted_atoms(D) -> List[Tuple[ExtPoint, float]]:
    if isinstance(D, Divisor):
        return [(c, float(m)) for c, m in D.items()]
    if isinstance(D, dict):
        return [(ext_point(c), float(w)) for c, w in D.items()]
    return [(ext_point(c), float(w)) for c, w in D]


def green_sum(E: CompactSet, D, z: Union[complex, float], cache: Optional[GreenCache] = None,
              options: Optional[GreenOptions] = None) -> float:
    """
    Returns sum_t D(t) G_E(z, t) for a divisor with real weights.

    Args:
        E: The set.
        D: Divisor, dict point -> weight, or list of (point, weight).
        z: Evaluation point.
        cache: Model cache (defaults to the module cache).

    Raises:
        DomainError: If an atom lies on E.

    Examples:
        >>> round(green_sum(CompactSet([(-1, 1)]), {}, 2.0), 6)
        0.0
    """
    cache = cache if cache is not None else DEFAULT_CACHE
    total = 0.0
    for c, weight in _weighted_atoms(D):
        if weight == 0.0:
            continue
        if E.contains(c):
            raise DomainError(f"atom {format_point(c)} lies on the set")
        total += weight * cache.get(E, c, options).eval(z)
    return total


def _difference_pieces(E1: CompactSet, E2: CompactSet) -> List[Tuple[float, float, bool, bool]]:
    """
    Closures of the components of E2 minus E1.

    Each entry is (u, v, u_is_edge_of_E2, v_is_edge_of_E2).
    """
    pieces = []
    for a, b in E2.intervals:
        cursor, cursor_is_edge = a, True
        for a1, b1 in E1.intervals:
            if b1 < a or a1 > b:
                continue
            if a1 > cursor:
                pieces.append((cursor, a1, cursor_is_edge, False))
            cursor, cursor_is_edge = max(cursor, b1), b1 >= b
        if cursor < b:
            pieces.append((cursor, b, cursor_is_edge, True))
    return pieces


def _check_containment(E1: CompactSet, E2: CompactSet) -> None:
    for a1, b1 in E1.intervals:
        if not any(a <= a1 and b1 <= b for a, b in E2.intervals):
            raise ArgumentError(f"{E1.to_literal()} is not contained in {E2.to_literal()}")


def koosis_check(E1: CompactSet, E2: CompactSet, c: ExtPoint, z: complex,
                 options: Optional[GreenOptions] = None, tol: float = 1e-9) -> float:
    """
    Residual of G_{E1}(z,c) - G_{E2}(z,c) = int_{E2 \\ E1} G_{E1}(z,x) omega_{E2}(dx,c).

    The right side is integrated piecewise with Gauss-Jacobi rules whose
    weights match the endpoint behaviour: inverse square root at edges of
    E2 (harmonic measure density) and square root at edges of E1 (Green
    function in its pole).

    Raises:
        ArgumentError: If E1 is not contained in E2.
        DomainError: If c lies on E2.
    """
    if options is None:
        options = GreenOptions()
    _check_containment(E1, E2)
    c = ext_point(c)
    if E2.contains(c):
        raise DomainError(f"pole {format_point(c)} lies on the larger set")
    if E1 == E2:
        return 0.0
    lhs = build_green(E1, c, options).eval(z) - build_green(E2, c, options).eval(z)
    hm = HarmonicMeasure(build_green(E2, c, options))
    rhs = 0.0
    for u, v, u_edge, v_edge in _difference_pieces(E1, E2):
        alpha = -0.5 if v_edge else 0.5
        beta = -0.5 if u_edge else 0.5
        mid, half = 0.5 * (u + v), 0.5 * (v - u)

        def rule(n: int) -> float:
            x, w = roots_jacobi(n, alpha, beta)
            t = mid + half * x
            dens = hm.density(t)
            g = np.array([build_green(E1, float(p), options).eval(z) for p in t])
            weight = (1.0 - x) ** alpha * (1.0 + x) ** beta
            return float(half * np.sum(w * g * dens / weight))

        n = 8
        prev = rule(n)
        while True:
            n *= 2
            cur = rule(n)
            if abs(cur - prev) < tol * max(1.0, abs(cur)) or n >= 128:
                break
            prev = cur
        rhs += cur
    residual = abs(lhs - rhs)
    logger.debug("koosis residual %.3e (lhs=%.12g rhs=%.12g)", residual, lhs, rhs)
    return residual


def monotonicity_check(E1: CompactSet, E2: CompactSet, c: ExtPoint, points: Iterable[complex],
                       options: Optional[GreenOptions] = None) -> float:
    """
    Returns min over points of G_{E1}(z,c) - G_{E2}(z,c); non-negative when E1 is inside E2.

    Raises:
        ArgumentError: If E1 is not contained in E2.
    """
    _check_containment(E1, E2)
    m1 = build_green(E1, c, options)
    m2 = build_green(E2, c, options)
    return min(m1.eval(z) - m2.eval(z) for z in points)
