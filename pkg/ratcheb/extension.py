"""
ratcheb - Extension Module

This module computes the n-extension E_n = F^-1([-1, 1]) of an extremal
function, splits it into bands, classifies what happened to every gap of
E, and checks the identities that tie E_n to potential theory.

The extended real line is walked once as a circle made of the intervals
and gaps of E (in coordinates where E is bounded). On every piece the
boundary of E_n is located by bracketing |F| - 1 and refining with brentq;
double +-1 points are located as critical points of F with |F| = 1.

Features:
- n_extension: BandSet with bands, E_n and per-gap GapBehavior
- band_measure_check: weighted harmonic measure of every open band
- representation_check: |F| = cosh(sum of Green functions) off E_n
- bernstein_walsh_check: exp and cosh growth bounds
"""

import logging
import math
from enum import IntEnum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import IntegrityError
from .geometry import INF, CompactSet, ExtPoint, Gap, Mobius, format_point, gap_of, is_inf
from .potential import DEFAULT_CACHE, GreenCache, GreenOptions, harmonic_measure
from .rational import RationalFn

logger = logging.getLogger(__name__)


class GapBehavior(IntEnum):
    """What the extension does to a gap of E."""

    UNCHANGED = 0  # no point of E_n inside the gap
    ONE_SIDED = 1  # E_n grows into the gap from one edge
    INTERNAL = 2  # an interval not touching the edges is added
    CLOSED = 3  # the whole gap belongs to E_n

    @property
    def tag(self) -> str:
        return self.name.lower().replace("_", "-")


class ExtensionOptions:
    """
    Options of the band extraction.

    Attributes:
        root_merge_tol (float): Relative distance below which +-1 points are merged. Default is 1e-9.
        classify_tol (float): Relative tolerance comparing band and gap edges. Default is 1e-8.
        touch_tol (float): | |F| - 1 | at a critical point below which it is a double +-1 point. Default is 1e-7.
        monotone_samples (int): Samples per band for the monotonicity check. Default is 64.
        samples_per_piece (int): Minimum scan samples per interval or gap. Default is 64.
    """

    def __init__(self):
        self.root_merge_tol = 1e-9
        self.classify_tol = 1e-8
        self.touch_tol = 1e-7
        self.monotone_samples = 64
        self.samples_per_piece = 64


class _Circle:
    """The extended real line as consecutive pieces: interval, gap, interval, ..., wrap gap."""

    def __init__(self, W: CompactSet):
        self.pieces: List[Tuple[float, float, bool, bool]] = []
        intervals = W.intervals
        for k, (a, b) in enumerate(intervals):
            self.pieces.append((a, b, True, False))
            if k + 1 < len(intervals):
                self.pieces.append((b, intervals[k + 1][0], False, False))
            else:
                self.pieces.append((b, intervals[0][0], False, True))

    @property
    def size(self) -> int:
        return len(self.pieces)

    def point(self, tau: float) -> ExtPoint:
        tau = tau % self.size
        k = min(int(math.floor(tau)), self.size - 1)
        u = tau - k
        left, right, _, unbounded = self.pieces[k]
        if not unbounded:
            return left + u * (right - left)
        if u >= 1.0:
            return right
        w = u / (1.0 - u)
        if w == 1.0:
            return INF
        return (right * w - left) / (w - 1.0)

    def points(self, taus) -> np.ndarray:
        return np.array([self.point(float(t)) for t in np.atleast_1d(taus)])

    def param(self, k: int, x: ExtPoint) -> float:
        """tau of a point x lying in piece k."""
        left, right, _, unbounded = self.pieces[k]
        if not unbounded:
            return k + (x - left) / (right - left)
        w = 1.0 if is_inf(x) else (x - left) / (x - right)
        return k + w / (1.0 + w)

    def piece_of(self, x: ExtPoint) -> int:
        """Index of the gap piece holding x, or -1."""
        for k, (left, right, is_interval, unbounded) in enumerate(self.pieces):
            if is_interval:
                continue
            if unbounded:
                if is_inf(x) or x > left or x < right:
                    return k
            elif left < x < right:
                return k
        return -1


class GapClassification:
    """
    Behaviour of one gap of E under the extension.

    Attributes:
        gap (Gap): The gap of E.
        behavior (GapBehavior): Its classification.
        side (str): 'left' or 'right' for one-sided extensions, else None.
        segments (list): Pieces of E_n inside the gap (original coordinates).
        flagged (bool): True when the decision sat within tolerance of another tag.
    """

    def __init__(self, gap: Gap, behavior: GapBehavior, side: Optional[str],
                 segments: List[Tuple[ExtPoint, ExtPoint]], flagged: bool):
        self.gap = gap
        self.behavior = behavior
        self.side = side
        self.segments = segments
        self.flagged = flagged

    def to_dict(self) -> Dict[str, object]:
        return {
            "gap": [format_point(self.gap.left), format_point(self.gap.right)],
            "behavior": self.behavior.tag,
            "side": self.side,
            "segments": [[format_point(a), format_point(b)] for a, b in self.segments],
            "flagged": self.flagged,
        }

    def __repr__(self) -> str:
        return f"GapClassification({self.gap!r}, {self.behavior.tag})"


class BandSet:
    """
    The n-extension of E with its bands.

    Attributes:
        F (RationalFn): The function.
        base (CompactSet): The set E.
        extension (CompactSet): E_n in original coordinates.
        bands (list): Closed bands as cyclic arcs (start, end); start > end for an arc through inf.
        classifications (list): GapClassification per gap of E, in E.gaps() order.
        plus_minus_points (int): Real +-1 points found, with multiplicity.
        degree (int): deg F.
    """

    def __init__(self, F: RationalFn, base: CompactSet, circle: _Circle, chart: Mobius,
                 value, runs: List[Tuple[float, float]], band_taus: List[Tuple[float, float]],
                 classifications: List[GapClassification], plus_minus_points: int, degree: int,
                 options: ExtensionOptions):
        self.F = F
        self.base = base
        self.bands_tau = band_taus
        self.classifications = classifications
        self.plus_minus_points = plus_minus_points
        self.degree = degree
        self._circle = circle
        self._chart = chart
        self._value = value
        self._runs = runs
        self._options = options
        back = chart.inverse()
        self.bands = [(back.apply(circle.point(t0)), back.apply(circle.point(t1))) for t0, t1 in band_taus]
        self.extension = self._extension_set(back)

    def _extension_set(self, back: Mobius) -> CompactSet:
        circle = self._circle
        inf_tau = circle.size - 0.5
        pieces: List[Tuple[float, float]] = []
        for t0, t1 in self._runs:
            x0, x1 = circle.point(t0), circle.point(t1)
            if t0 <= inf_tau <= t1 or t0 <= inf_tau + circle.size <= t1:
                pieces.append((-math.inf, x1))
                pieces.append((x0, math.inf))
            else:
                pieces.append((x0, x1))
        pieces.sort(key=lambda iv: iv[0])
        return CompactSet(pieces).transform(back)

    @property
    def open_band_count(self) -> int:
        return len(self.bands)

    def behaviors(self) -> List[str]:
        return [c.behavior.tag for c in self.classifications]

    def covers_base(self, tol: float = 1e-9, samples: int = 50) -> bool:
        """E inside the union of bands, at sampled points of every interval of E."""
        size = self._circle.size
        for k in range(0, size, 2):
            for u in np.linspace(0.0, 1.0, samples):
                tau = k + u
                if not any(t0 - tol <= tau + s <= t1 + tol for t0, t1 in self._runs for s in (0, size)):
                    return False
        return True

    def monotone_on_bands(self) -> List[bool]:
        """Strict monotonicity of F on each open band, by sign constancy of differences."""
        out = []
        m = self._options.monotone_samples
        for t0, t1 in self.bands_tau:
            taus = t0 + (t1 - t0) * (np.arange(1, m + 1) / (m + 1))
            vals = self._value(taus)
            diffs = np.diff(vals[np.isfinite(vals)])
            out.append(bool(np.all(diffs > 0) or np.all(diffs < 0)))
        return out

    def to_dict(self) -> Dict[str, object]:
        return {
            "extension": self.extension.to_literal(),
            "bands": [[format_point(a), format_point(b)] for a, b in self.bands],
            "open_bands": self.open_band_count,
            "degree": self.degree,
            "plus_minus_points": self.plus_minus_points,
            "gaps": [c.to_dict() for c in self.classifications],
        }

    def __repr__(self) -> str:
        return f"BandSet(extension={self.extension.to_literal()!r}, bands={self.open_band_count})"


def _working_function(F: RationalFn, E: CompactSet) -> Tuple[RationalFn, Mobius, List[ExtPoint]]:
    """Returns (G, h, poles) with G(w) = F(h^-1(w)) and h(E) bounded; poles are the actual poles of G."""
    inner = RationalFn(F.basis, F.coeffs)
    orders = F.actual_orders()
    poles = [c for c, k in orders.items() if k]
    W = E.transform(F.chart)
    if W.is_bounded:
        return inner, F.chart, poles
    s = Mobius.send_to_infinity(W.gaps()[0].sample(1)[0])
    G = RationalFn(F.basis, F.coeffs, chart=s.inverse())
    return G, s.compose(F.chart), [s.apply(c) for c in poles]


def n_extension(F: RationalFn, E: CompactSet, options: Optional[ExtensionOptions] = None) -> BandSet:
    """
    Computes E_n = F^-1([-1, 1]), its bands and the gap classification.

    Args:
        F: A nonconstant real function with |F| <= 1 on E.
        E: The base set.
        options: Extraction options.

    Returns:
        BandSet: Bands, E_n and one GapBehavior per gap of E.

    Raises:
        IntegrityError: If F has non-real +-1 points (fewer than 2 deg F real ones).

    Examples:
        >>> from ratcheb.geometry import PoleDivisor
        >>> T3 = RationalFn.from_parts(PoleDivisor({INF: 3}), parts={INF: [-3.0, 0.0, 4.0]})
        >>> n_extension(T3, CompactSet([(-1, 1)])).open_band_count
        3
    """
    if options is None:
        options = ExtensionOptions()
    degree = F.actual_pole_divisor().degree
    if degree == 0:
        raise IntegrityError("the extension of a constant function is not a finite union of bands")
    G, chart, poles = _working_function(F, E)
    W = E.transform(chart)
    circle = _Circle(W)
    scale = W.scale

    def value(taus) -> np.ndarray:
        with np.errstate(all="ignore"):
            return np.real(G.evaluate(circle.points(taus)))

    def scalar(tau: float) -> float:
        return float(value([tau])[0])

    # odd, so a symmetric piece has a sample at its midpoint
    samples = max(options.samples_per_piece, 16 * (degree + 1)) | 1
    eps = 1e-9
    segments: List[Tuple[float, float, bool]] = []
    touches: List[float] = []
    for k in range(circle.size):
        cuts = sorted(circle.param(k, c) for c in poles if circle.piece_of(c) == k) if k % 2 else []
        bounds = [float(k)]
        for t in cuts:
            bounds.extend([t - eps, t + eps])
        bounds.append(float(k + 1))
        for j in range(0, len(bounds), 2):
            u0, u1 = bounds[j], bounds[j + 1]
            if j > 0:
                segments.append((bounds[j - 1], u0, False))
            _scan_piece(u0, u1, value, scalar, samples, options, segments, touches)

    runs, band_taus, crossings = _assemble(segments, touches, circle.size)
    if not runs:
        raise IntegrityError("no point of the circle satisfies |F| <= 1")
    if sum(t1 - t0 for t0, t1 in runs) >= circle.size - 1e-12:
        raise IntegrityError("|F| <= 1 on the whole extended real line")
    found = crossings + 2 * len(touches)
    if found < 2 * degree:
        raise IntegrityError(f"only {found} real +-1 points for degree {degree}; "
                             "the remaining ones are not real")
    if found > 2 * degree:
        logger.warning("found %d +-1 points for degree %d", found, degree)

    back = chart.inverse()
    classifications: Dict[Gap, GapClassification] = {}
    for k in range(1, circle.size, 2):
        gap = gap_of(E, back.apply(circle.point(k + 0.5)))
        classifications[gap] = _classify(k, gap, runs, circle, back, scale, options)
    ordered = [classifications[g] for g in E.gaps() if g in classifications]
    bandset = BandSet(F, E, circle, chart, value, runs, band_taus, ordered, found, degree, options)
    for c in ordered:
        if c.flagged:
            logger.warning("ambiguous classification of %r as %s", c.gap, c.behavior.tag)
    logger.debug("extension %r", bandset)
    return bandset


def _scan_piece(u0: float, u1: float, value, scalar, samples: int, options: ExtensionOptions,
                segments: List[Tuple[float, float, bool]], touches: List[float]) -> None:
    """Splits [u0, u1] into segments inside/outside E_n and records double +-1 points."""
    k = np.arange(samples)
    u = u0 + (u1 - u0) * 0.5 * (1.0 - np.cos(np.pi * k / (samples - 1)))
    h = value(u)
    g = np.abs(h) - 1.0
    events: List[float] = []
    for i in range(1, samples - 1):
        if not np.all(np.isfinite(h[i - 1:i + 2])):
            continue
        d1, d2 = h[i] - h[i - 1], h[i + 1] - h[i]
        if d1 * d2 < 0:
            sign = 1.0 if d1 > 0 else -1.0
            res = minimize_scalar(lambda s: -sign * scalar(s), bounds=(float(u[i - 1]), float(u[i + 1])),
                                  method="bounded", options={"xatol": 1e-14})
            uc = float(res.x)
            if abs(abs(scalar(uc)) - 1.0) <= options.touch_tol:
                events.append(uc)
                touches.append(uc)
    for i in range(samples - 1):
        if not (np.isfinite(g[i]) and np.isfinite(g[i + 1])):
            continue
        if g[i] * g[i + 1] < 0:
            root = brentq(lambda s: abs(scalar(s)) - 1.0, float(u[i]), float(u[i + 1]),
                          xtol=1e-15, rtol=4 * np.finfo(float).eps)
            events.append(root)
        elif g[i] == 0.0 and 0 < i:
            events.append(float(u[i]))
    marks = [u0] + sorted(e for e in set(events) if u0 < e < u1) + [u1]
    for a, b in zip(marks, marks[1:]):
        if b <= a:
            continue
        mid = scalar(0.5 * (a + b))
        segments.append((a, b, bool(np.isfinite(mid) and abs(mid) <= 1.0 + options.touch_tol)))


def _assemble(segments: List[Tuple[float, float, bool]], touches: List[float], size: int):
    """Merges segments into runs of E_n and bands; returns (runs, bands, transitions)."""
    segments = sorted(segments)
    runs: List[List[float]] = []
    for a, b, inside in segments:
        if not inside:
            continue
        if runs and abs(runs[-1][1] - a) <= 1e-12:
            runs[-1][1] = b
        else:
            runs.append([a, b])
    if len(runs) > 1 and runs[0][0] <= 1e-12 and runs[-1][1] >= size - 1e-12:
        last = runs.pop()
        runs[0] = [last[0], runs[0][1] + size]
    transitions = 2 * len(runs)
    touch_sorted = sorted(set(touches))
    bands: List[Tuple[float, float]] = []
    for t0, t1 in runs:
        cuts = [t + s for t in touch_sorted for s in (0, size) if t0 < t + s < t1]
        edges = [t0] + sorted(cuts) + [t1]
        bands.extend((a, b) for a, b in zip(edges, edges[1:]) if b > a)
    return [(a, b) for a, b in runs], bands, transitions


def _classify(k: int, gap: Gap, runs: List[Tuple[float, float]], circle: _Circle, back: Mobius,
              scale: float, options: ExtensionOptions) -> GapClassification:
    left, right, _, _ = circle.pieces[k]
    width = abs(right - left)
    tol = options.classify_tol * scale / max(width, 1e-300)
    parts: List[Tuple[float, float]] = []
    for t0, t1 in runs:
        for s in (0, circle.size, -circle.size):
            a, b = max(t0 + s, k), min(t1 + s, k + 1)
            if b - a > tol:
                parts.append((a, b))
    parts.sort()
    segments = [(back.apply(circle.point(a)), back.apply(circle.point(b))) for a, b in parts]
    flagged = False
    side = None
    at_left = [p for p in parts if p[0] <= k + tol]
    at_right = [p for p in parts if p[1] >= k + 1 - tol]
    covered = sum(b - a for a, b in parts)
    if not parts:
        behavior = GapBehavior.UNCHANGED
    elif covered >= 1.0 - tol:
        behavior = GapBehavior.CLOSED
        flagged = len(parts) > 1
    elif len(parts) == 1 and at_left and not at_right:
        behavior, side = GapBehavior.ONE_SIDED, "left"
    elif len(parts) == 1 and at_right and not at_left:
        behavior, side = GapBehavior.ONE_SIDED, "right"
    elif len(parts) == 1 and not at_left and not at_right:
        behavior = GapBehavior.INTERNAL
    else:
        flagged = True
        if at_left and at_right and covered >= 1.0 - 10 * tol:
            behavior = GapBehavior.CLOSED
        elif at_left or at_right:
            behavior = GapBehavior.ONE_SIDED
            side = "left" if at_left else "right"
        else:
            behavior = GapBehavior.INTERNAL
    return GapClassification(gap, behavior, side, segments, flagged)


# ----------------------------------------------------------------------------
# identities
# ----------------------------------------------------------------------------

def band_measure_check(F: RationalFn, bands: BandSet, cache: Optional[GreenCache] = None,
                       options: Optional[GreenOptions] = None) -> List[float]:
    """
    Returns sum_c (F)_inf(c) omega_{E_n}(I, c) for every open band I.

    Each sum equals 1 for an extremal function.

    Examples:
        >>> from ratcheb.geometry import PoleDivisor
        >>> F = RationalFn.from_parts(PoleDivisor({2.0: 1}), -2.0, {2.0: [3.0]})
        >>> [round(s, 8) for s in band_measure_check(F, n_extension(F, CompactSet([(-1, 1)])))]
        [1.0]
    """
    cache = cache if cache is not None else DEFAULT_CACHE
    poles = F.actual_pole_divisor().items()
    sums = []
    for band in bands.bands:
        total = 0.0
        for c, m in poles:
            total += m * harmonic_measure(cache.get(bands.extension, c, options), [band])
        sums.append(total)
    logger.debug("band measures %s", sums)
    return sums


class RepresentationReport:
    """
    Result of representation_check.

    Attributes:
        rows (list): (x, |F(x)|, cosh(sum G), relative deviation) at real points off E_n.
        max_deviation (float): Largest relative deviation on the real rows.
        worst_margin (float): Smallest 1 - |F(z)| / cosh(sum G) over non-real points (inf if none).
        passed (bool): max_deviation <= tol and worst_margin >= -tol.
    """

    def __init__(self, rows, max_deviation: float, worst_margin: float, tol: float):
        self.rows = rows
        self.max_deviation = max_deviation
        self.worst_margin = worst_margin
        self.passed = max_deviation <= tol and worst_margin >= -tol

    def to_dict(self) -> Dict[str, object]:
        return {
            "rows": [[x, f, c, dev] for x, f, c, dev in self.rows],
            "max_deviation": self.max_deviation,
            "worst_margin": self.worst_margin,
            "passed": self.passed,
        }

    def __repr__(self) -> str:
        return f"RepresentationReport(max_deviation={self.max_deviation:.3e}, passed={self.passed})"


def _log_cosh(s: float) -> float:
    return s + math.log1p(math.exp(-2.0 * s)) - math.log(2.0)


def _pole_sum(E: CompactSet, poles, z, cache: GreenCache, options: Optional[GreenOptions]) -> float:
    return sum(m * cache.get(E, c, options).eval(z) for c, m in poles)


def representation_check(F: RationalFn, bands: BandSet, z: Sequence[complex],
                         cache: Optional[GreenCache] = None, options: Optional[GreenOptions] = None,
                         tol: float = 1e-6) -> RepresentationReport:
    """
    Compares |F| with cosh(sum_c (F)_inf(c) G_{E_n}(., c)).

    Real points off E_n are checked for equality (relative deviation);
    non-real points for the inequality |F| <= cosh(...). Real points on
    E_n and poles of F are skipped.

    Examples:
        >>> from ratcheb.geometry import PoleDivisor
        >>> F = RationalFn.from_parts(PoleDivisor({2.0: 1}), -2.0, {2.0: [3.0]})
        >>> representation_check(F, n_extension(F, CompactSet([(-1, 1)])), [3.0]).max_deviation < 1e-8
        True
    """
    cache = cache if cache is not None else DEFAULT_CACHE
    poles = F.actual_pole_divisor().items()
    pole_points = {c for c, _ in poles}
    rows = []
    max_dev = 0.0
    worst = math.inf
    for point in z:
        zc = complex(point)
        real = zc.imag == 0.0
        if real and (bands.extension.contains(zc.real) or zc.real in pole_points):
            continue
        s = _pole_sum(bands.extension, poles, zc.real if real else zc, cache, options)
        modulus = abs(F(zc))
        log_bound = _log_cosh(s)
        ratio = math.exp(math.log(modulus) - log_bound) if modulus > 0 else 0.0
        if real:
            dev = abs(ratio - 1.0)
            rows.append((zc.real, modulus, math.exp(log_bound) if log_bound < 700 else INF, dev))
            max_dev = max(max_dev, dev)
        else:
            worst = min(worst, 1.0 - ratio)
    return RepresentationReport(rows, max_dev, worst, tol)


class BernsteinWalshReport:
    """
    Result of bernstein_walsh_check.

    Attributes:
        norm (float): ||F||_E.
        rows (list): (z, |F(z)|/||F||, exp margin, cosh margin).
        worst_exp_margin (float): min of 1 - |F|/(||F|| exp(sum G)).
        worst_cosh_margin (float): min of 1 - |F|/(||F|| cosh(sum G)).
        worst_margin (float): The smaller of the two.
        passed (bool): worst_margin >= -tol.
    """

    def __init__(self, norm: float, rows, tol: float):
        self.norm = norm
        self.rows = rows
        self.worst_exp_margin = min((r[2] for r in rows), default=math.inf)
        self.worst_cosh_margin = min((r[3] for r in rows), default=math.inf)
        self.worst_margin = min(self.worst_exp_margin, self.worst_cosh_margin)
        self.passed = self.worst_margin >= -tol

    def to_dict(self) -> Dict[str, object]:
        return {
            "norm": self.norm,
            "worst_exp_margin": self.worst_exp_margin,
            "worst_cosh_margin": self.worst_cosh_margin,
            "worst_margin": self.worst_margin,
            "passed": self.passed,
            "points": len(self.rows),
        }

    def __repr__(self) -> str:
        return f"BernsteinWalshReport(worst_margin={self.worst_margin:.3e}, passed={self.passed})"


def sup_norm(F: RationalFn, E: CompactSet, samples: int = 0) -> float:
    """||F||_E from a Chebyshev sample refined around the largest value on every interval."""
    per = samples or max(64, 32 * (F.n + 1))
    best = 0.0
    for a, b in E.intervals:
        lo, hi = max(a, -1e6), min(b, 1e6)
        k = np.arange(per)
        x = 0.5 * (lo + hi) - 0.5 * (hi - lo) * np.cos(np.pi * k / (per - 1))
        vals = np.abs(F.evaluate(x))
        i = int(np.argmax(vals))
        best = max(best, float(vals[i]))
        if 0 < i < per - 1:
            res = minimize_scalar(lambda t: -abs(F.evaluate(np.array([t]))[0]),
                                  bounds=(float(x[i - 1]), float(x[i + 1])), method="bounded",
                                  options={"xatol": 1e-14})
            best = max(best, float(-res.fun))
    return best


def bernstein_walsh_check(F: RationalFn, E: CompactSet, z: Sequence[complex],
                          cache: Optional[GreenCache] = None, options: Optional[GreenOptions] = None,
                          tol: float = 1e-9, norm: Optional[float] = None) -> BernsteinWalshReport:
    """
    Checks |F(z)| <= ||F||_E exp(sum G) and the sharper cosh bound.

    Margins are relative: 1 - |F(z)| / (||F|| bound).

    Examples:
        >>> from ratcheb.geometry import PoleDivisor
        >>> T3 = RationalFn.from_parts(PoleDivisor({INF: 3}), parts={INF: [-3.0, 0.0, 4.0]})
        >>> abs(bernstein_walsh_check(T3, CompactSet([(-1, 1)]), [2.0]).worst_cosh_margin) < 1e-8
        True
    """
    cache = cache if cache is not None else DEFAULT_CACHE
    if norm is None:
        norm = sup_norm(F, E)
    poles = F.actual_pole_divisor().items()
    pole_points = {c for c, _ in poles}
    rows = []
    for point in z:
        zc = complex(point)
        if zc.imag == 0.0 and zc.real in pole_points:
            continue
        s = _pole_sum(E, poles, zc.real if zc.imag == 0.0 else zc, cache, options)
        modulus = abs(F(zc))
        if modulus == 0.0:
            rows.append((zc, 0.0, 1.0, 1.0))
            continue
        log_lhs = math.log(modulus) - math.log(norm)
        exp_margin = 1.0 - math.exp(min(log_lhs - s, 700.0))
        cosh_margin = 1.0 - math.exp(min(log_lhs - _log_cosh(s), 700.0))
        rows.append((zc, math.exp(min(log_lhs, 700.0)), exp_margin, cosh_margin))
    report = BernsteinWalshReport(norm, rows, tol)
    logger.debug("bernstein-walsh %r", report)
    return report
