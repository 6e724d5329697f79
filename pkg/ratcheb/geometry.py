"""
ratcheb - Geometry Module

This module provides the geometric data model shared by every other
module: points of the extended real line, finite unions of closed
intervals, their gaps, pole divisors, orientation preserving Mobius maps
and the cyclic order on the extended real line.

Features:
- ExtPoint values (floats, with math.inf as the single point at infinity)
- CompactSet with gap list and Mobius images
- Divisor / PoleDivisor with pushforward under Mobius maps
- Cyclic order, cyclic interval membership and the sign function S_n
- Normalization sending the extremal point to infinity
- Set and divisor literal parsing and rendering
"""

import logging
import math
import re
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import ArgumentError, DomainError

logger = logging.getLogger(__name__)

INF = math.inf

ExtPoint = float
Interval = Tuple[float, float]


def ext_point(value: Union[float, int, str]) -> ExtPoint:
    """
    Converts a number or token into an ExtPoint.

    Signed infinities collapse to the single point at infinity.

    Args:
        value: A real number, or one of the tokens 'inf', '+inf', '-inf', 'infinity'.

    Returns:
        float: The finite value, or INF.

    Raises:
        ArgumentError: If the value is not a real number or is NaN.

    Examples:
        >>> ext_point('inf')
        inf
        >>> ext_point(-math.inf)
        inf
    """
    if isinstance(value, str):
        token = value.strip().lower()
        if token in ("inf", "+inf", "-inf", "infinity", "oo"):
            return INF
        try:
            value = float(token)
        except ValueError as exc:
            raise ArgumentError(f"Not a point of the extended real line: {value!r}") from exc
    if isinstance(value, complex):
        raise ArgumentError(f"Complex value {value!r} is not an extended real point")
    x = float(value)
    if math.isnan(x):
        raise ArgumentError("NaN is not an extended real point")
    if math.isinf(x):
        return INF
    return x


def is_inf(x: ExtPoint) -> bool:
    """Returns True for the point at infinity."""
    return math.isinf(x)


def format_point(x: ExtPoint) -> str:
    """Renders an ExtPoint as a literal token ('inf' or the shortest round-trip decimal)."""
    if is_inf(x):
        return "inf"
    return repr(float(x))


def point_sort_key(x: ExtPoint) -> Tuple[int, float]:
    """Sort key placing finite points in increasing order and infinity last."""
    return (1, 0.0) if is_inf(x) else (0, x)


# ----------------------------------------------------------------------------
# Mobius maps
# ----------------------------------------------------------------------------

class Mobius:
    """
    Orientation preserving Mobius map z -> (a z + b) / (c z + d) with ad - bc > 0.

    Attributes:
        a, b, c, d (float): Matrix entries.

    Examples:
        >>> f = Mobius.send_to_infinity(2.0)
        >>> f.apply(2.0)
        inf
        >>> f.apply(1.0)
        1.0
    """

    def __init__(self, a: float, b: float, c: float, d: float):
        a, b, c, d = float(a), float(b), float(c), float(d)
        det = a * d - b * c
        if not det > 0 or not math.isfinite(det):
            raise ArgumentError(f"Mobius determinant must be positive, got {det}")
        self.a = a
        self.b = b
        self.c = c
        self.d = d

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def affine(cls, alpha: float, beta: float) -> "Mobius":
        """Returns z -> alpha z + beta (alpha > 0)."""
        return cls(alpha, beta, 0.0, 1.0)

    @classmethod
    def send_to_infinity(cls, x: ExtPoint) -> "Mobius":
        """Returns z -> -1 / (z - x) for finite x, the identity for x = inf."""
        if is_inf(x):
            return cls.identity()
        return cls(0.0, -1.0, 1.0, -x)

    @property
    def determinant(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def pole(self) -> ExtPoint:
        """The point mapped to infinity."""
        if self.c == 0.0:
            return INF
        return -self.d / self.c

    def apply(self, x: ExtPoint) -> ExtPoint:
        """Applies the map to an extended real point."""
        if is_inf(x):
            return INF if self.c == 0.0 else self.a / self.c
        den = self.c * x + self.d
        if den == 0.0:
            return INF
        return (self.a * x + self.b) / den

    def apply_complex(self, z: complex) -> complex:
        """Applies the map to a complex number; the pole maps to complex('inf')."""
        z = complex(z)
        if math.isinf(z.real) or math.isinf(z.imag):
            return complex(INF, 0.0) if self.c == 0.0 else complex(self.a / self.c)
        den = self.c * z + self.d
        if den == 0:
            return complex(INF, 0.0)
        return (self.a * z + self.b) / den

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "Mobius") -> "Mobius":
        """Returns self o other."""
        return Mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def local_scale(self, x: ExtPoint) -> float:
        """
        Returns kappa with r(z, x) ~ kappa * r(w, f(x)) as z -> x, where w = f(z).

        r(z, c) = 1/(c - z) for finite c and r(z, inf) = z. The constant
        transports leading coefficients: lim F/r(z,x)^d = lim G/r(w,f(x))^d / kappa^d
        for F = G o f.
        """
        a, b, c, d = self.a, self.b, self.c, self.d
        det = self.determinant
        if not is_inf(x):
            den = c * x + d
            if den != 0.0:
                return det / (den * den)
            return -c / (a * x + b)
        if c != 0.0:
            return det / (c * c)
        return d / a

    def is_identity(self) -> bool:
        return self.b == 0.0 and self.c == 0.0 and self.a == self.d

    def to_dict(self) -> Dict[str, float]:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mobius):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __repr__(self) -> str:
        return f"Mobius(a={self.a!r}, b={self.b!r}, c={self.c!r}, d={self.d!r})"


# ----------------------------------------------------------------------------
# Cyclic order
# ----------------------------------------------------------------------------

def _rotate(x: ExtPoint, origin: ExtPoint) -> ExtPoint:
    """Coordinates in which origin sits at infinity, preserving orientation."""
    if is_inf(origin):
        return x
    if is_inf(x):
        return 0.0
    if x == origin:
        return INF
    return -1.0 / (x - origin)


def cyclically_ordered(points: Sequence[ExtPoint]) -> bool:
    """
    Tests whether a sequence of extended real points is cyclically ordered.

    Args:
        points: At least three points.

    Returns:
        bool: True iff there are no repetitions and, after rotating the first
        point to infinity, the remaining points strictly increase.

    Raises:
        ArgumentError: If fewer than three points are given.

    Examples:
        >>> cyclically_ordered([2, 3, INF, -1, 1])
        True
        >>> cyclically_ordered([0, 2, 1])
        False
    """
    if len(points) < 3:
        raise ArgumentError(f"cyclic order needs at least 3 points, got {len(points)}")
    pts = [ext_point(p) for p in points]
    if len(set(pts)) != len(pts):
        return False
    rotated = [_rotate(p, pts[0]) for p in pts[1:]]
    descents = sum(1 for u, v in zip(rotated, rotated[1:]) if not u < v)
    return descents == 0


def in_cyclic_interval(x: ExtPoint, left: ExtPoint, right: ExtPoint,
                       include_left: bool = False, include_right: bool = False) -> bool:
    """
    Tests x in the cyclic interval running from left to right in positive direction.

    Raises:
        DomainError: If left and right coincide.
    """
    if left == right:
        raise DomainError(f"degenerate cyclic interval at {format_point(left)}")
    if x == left:
        return include_left
    if x == right:
        return include_right
    return _rotate(x, left) < _rotate(right, left)


def cyclic_sorted(points: Iterable[ExtPoint], origin: ExtPoint) -> List[ExtPoint]:
    """Sorts points in the cyclic order starting just after origin."""
    return sorted(points, key=lambda p: _rotate(p, origin))


# ----------------------------------------------------------------------------
# Sets and gaps
# ----------------------------------------------------------------------------

class Gap:
    """
    A connected component of the complement of a CompactSet.

    Attributes:
        left (float): Edge b_j of the set where the gap starts.
        right (float): Edge a_{j+1} where the gap ends (cyclically).
        unbounded (bool): True for the gap through (or towards) infinity.
    """

    def __init__(self, left: ExtPoint, right: ExtPoint, unbounded: bool = False):
        self.left = left
        self.right = right
        self.unbounded = unbounded

    def contains(self, x: ExtPoint) -> bool:
        """Open cyclic membership."""
        return in_cyclic_interval(x, self.left, self.right)

    @property
    def length(self) -> float:
        if self.unbounded:
            return INF
        return self.right - self.left

    def sample(self, count: int) -> List[float]:
        """Interior sample points; for the unbounded gap they run out towards infinity."""
        out = []
        for k in range(1, count + 1):
            s = k / (count + 1)
            if not self.unbounded:
                out.append(self.left + s * (self.right - self.left))
                continue
            w = s / (1.0 - s)
            if is_inf(self.left):
                out.append(self.right - w)
            elif is_inf(self.right):
                out.append(self.left + w)
            elif w != 1.0:
                # w in (0, inf) runs over the cyclic interval (left, right)
                out.append((self.right * w - self.left) / (w - 1.0))
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Gap):
            return NotImplemented
        return (self.left, self.right, self.unbounded) == (other.left, other.right, other.unbounded)

    def __hash__(self) -> int:
        return hash((self.left, self.right, self.unbounded))

    def __repr__(self) -> str:
        return f"Gap({format_point(self.left)}, {format_point(self.right)}, unbounded={self.unbounded})"


class CompactSet:
    """
    A finite union of disjoint closed intervals of the extended real line.

    Intervals are given in increasing order. The first interval may start at
    -inf and the last may end at +inf; in that case the set contains the
    point at infinity (contains_infinity is True).

    Attributes:
        intervals (tuple): Ordered (a_j, b_j) pairs with a_j < b_j < a_{j+1}.
        contains_infinity (bool): Whether the point at infinity belongs to the set.

    Examples:
        >>> E = CompactSet.from_literal("[-2,-1];[0,1]")
        >>> len(E.gaps())
        2
    """

    def __init__(self, intervals: Iterable[Sequence[float]]):
        items: List[Interval] = []
        for pair in intervals:
            if len(pair) != 2:
                raise ArgumentError(f"interval must have two endpoints, got {pair!r}")
            a, b = float(pair[0]), float(pair[1])
            if math.isnan(a) or math.isnan(b):
                raise ArgumentError("interval endpoints must not be NaN")
            if not a < b:
                raise ArgumentError(f"interval endpoints reversed or degenerate: [{a}, {b}]")
            items.append((a, b))
        if not items:
            raise ArgumentError("a compact set needs at least one interval")
        for (a0, b0), (a1, b1) in zip(items, items[1:]):
            if not b0 < a1:
                raise ArgumentError(f"intervals overlap or are unordered: [{a0}, {b0}] and [{a1}, {b1}]")
        for k, (a, b) in enumerate(items):
            if a == math.inf or b == -math.inf:
                raise ArgumentError(f"invalid infinite endpoint in [{a}, {b}]")
            if a == -math.inf and k != 0:
                raise ArgumentError("only the first interval may start at -inf")
            if b == math.inf and k != len(items) - 1:
                raise ArgumentError("only the last interval may end at +inf")
        if len(items) == 1 and items[0] == (-math.inf, math.inf):
            raise ArgumentError("the set must be a proper subset of the extended real line")
        self.intervals: Tuple[Interval, ...] = tuple(items)
        self.contains_infinity = items[0][0] == -math.inf or items[-1][1] == math.inf

    @classmethod
    def from_literal(cls, text: str) -> "CompactSet":
        """
        Parses a set literal of the form "[a1,b1];[a2,b2];...".

        Raises:
            ArgumentError: If the literal is malformed or the endpoints are invalid.
        """
        parts = [p.strip() for p in text.strip().split(";") if p.strip()]
        if not parts:
            raise ArgumentError(f"empty set literal: {text!r}")
        intervals = []
        for part in parts:
            match = _INTERVAL_RE.fullmatch(part)
            if match is None:
                raise ArgumentError(f"malformed interval {part!r} in set literal")
            a = _parse_signed(match.group(1))
            b = _parse_signed(match.group(2))
            intervals.append((a, b))
        return cls(intervals)

    def to_literal(self) -> str:
        return ";".join(f"[{_format_signed(a)},{_format_signed(b)}]" for a, b in self.intervals)

    @property
    def is_bounded(self) -> bool:
        return not self.contains_infinity

    @property
    def endpoints(self) -> List[float]:
        """Flattened endpoints e_1 < e_2 < ... (bounded sets only)."""
        self._require_bounded("endpoints")
        return [x for pair in self.intervals for x in pair]

    @property
    def hull(self) -> Interval:
        self._require_bounded("hull")
        return self.intervals[0][0], self.intervals[-1][1]

    @property
    def scale(self) -> float:
        """A length scale for tolerances: the hull length, or 1 for unbounded sets."""
        if self.contains_infinity:
            return 1.0
        lo, hi = self.hull
        return max(hi - lo, max(abs(lo), abs(hi)) * 1e-3)

    @property
    def genus(self) -> int:
        """Number of bounded gaps of a bounded set."""
        return len(self.intervals) - 1

    def total_length(self) -> float:
        return sum(b - a for a, b in self.intervals)

    def contains(self, x: ExtPoint, tol: float = 0.0) -> bool:
        """Tests membership of an extended real point."""
        if is_inf(x):
            return self.contains_infinity
        return any(a - tol <= x <= b + tol for a, b in self.intervals)

    def interval_index(self, x: float, tol: float = 0.0) -> int:
        """Index of the interval holding x, or -1."""
        for k, (a, b) in enumerate(self.intervals):
            if a - tol <= x <= b + tol:
                return k
        return -1

    def gaps(self) -> List[Gap]:
        """Returns the bounded gaps in order, followed by the wrap-around gap if there is one."""
        out = [Gap(b0, a1) for (_, b0), (a1, _) in zip(self.intervals, self.intervals[1:])]
        first_lo = self.intervals[0][0]
        last_hi = self.intervals[-1][1]
        if first_lo == -math.inf and last_hi == math.inf:
            return out
        left = INF if last_hi == math.inf else last_hi
        right = INF if first_lo == -math.inf else first_lo
        out.append(Gap(left, right, unbounded=True))
        return out

    def transform(self, f: Mobius) -> "CompactSet":
        """Returns the image f(E) in CompactSet normal form."""
        pieces: List[Interval] = []
        p = f.pole
        for start, end in self.arcs():
            fs, fe = f.apply(start), f.apply(end)
            if is_inf(fs):
                pieces.append((-math.inf, fe))
            elif is_inf(fe):
                pieces.append((fs, math.inf))
            elif in_cyclic_interval(p, start, end):
                pieces.append((fs, math.inf))
                pieces.append((-math.inf, fe))
            else:
                pieces.append((fs, fe))
        pieces.sort(key=lambda iv: iv[0])
        return CompactSet(pieces)

    def arcs(self) -> List[Tuple[ExtPoint, ExtPoint]]:
        """The components as cyclic arcs (start, end); an arc through infinity has start > end."""
        arcs = [(ext_point(a), ext_point(b)) for a, b in self.intervals]
        first_lo = self.intervals[0][0]
        last_hi = self.intervals[-1][1]
        if first_lo == -math.inf and last_hi == math.inf and len(arcs) > 1:
            joined = (arcs[-1][0], arcs[0][1])
            arcs = arcs[1:-1] + [joined]
        return arcs

    def sample(self, per_interval: int, kind: str = "chebyshev") -> List[float]:
        """
        Sample points of a bounded set.

        Args:
            per_interval (int): Points per interval (at least 2, endpoints included).
            kind (str): 'chebyshev' for Chebyshev-Lobatto points, 'uniform' otherwise.
        """
        self._require_bounded("sample")
        n = max(2, int(per_interval))
        out: List[float] = []
        for a, b in self.intervals:
            mid, half = 0.5 * (a + b), 0.5 * (b - a)
            for k in range(n):
                if kind == "chebyshev":
                    x = mid - half * math.cos(math.pi * k / (n - 1))
                else:
                    x = a + (b - a) * k / (n - 1)
                out.append(min(max(x, a), b))
            out[-n] = a
            out[-1] = b
        return out

    def _require_bounded(self, what: str) -> None:
        if self.contains_infinity:
            raise DomainError(f"{what} requires a set not containing infinity; normalize first")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CompactSet):
            return NotImplemented
        return self.intervals == other.intervals

    def __hash__(self) -> int:
        return hash(self.intervals)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __repr__(self) -> str:
        return f"CompactSet({self.to_literal()!r})"


_NUMBER = r"\s*([+-]?(?:inf(?:inity)?|\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?))\s*"
_INTERVAL_RE = re.compile(r"\[" + _NUMBER + "," + _NUMBER + r"\]", re.IGNORECASE)


def _parse_signed(token: str) -> float:
    t = token.strip().lower()
    if t.lstrip("+-").startswith("inf"):
        return -math.inf if t.startswith("-") else math.inf
    return float(t)


def _format_signed(x: float) -> str:
    if x == math.inf:
        return "inf"
    if x == -math.inf:
        return "-inf"
    return repr(float(x))


def gap_of(E: CompactSet, x: ExtPoint) -> Gap:
    """
    Returns the gap of E containing x.

    Raises:
        DomainError: If x belongs to E.

    Examples:
        >>> gap_of(CompactSet([(-2, -1), (0, 1)]), INF)
        Gap(1.0, -2.0, unbounded=True)
    """
    x = ext_point(x)
    if E.contains(x):
        raise DomainError(f"point {format_point(x)} lies on the set")
    for gap in E.gaps():
        if gap.contains(x):
            return gap
    raise DomainError(f"no gap contains {format_point(x)}")


# ----------------------------------------------------------------------------
# Divisors
# ----------------------------------------------------------------------------

class Divisor:
    """
    An integral divisor with finite support on the extended real line.

    Attributes:
        atoms (dict): Point -> positive multiplicity.
    """

    def __init__(self, atoms: Optional[Dict[ExtPoint, int]] = None):
        merged: Dict[ExtPoint, int] = {}
        for point, mult in (atoms or {}).items():
            x = ext_point(point)
            m = int(mult)
            if m != mult:
                raise ArgumentError(f"multiplicity must be an integer, got {mult!r}")
            if m < 0:
                raise ArgumentError(f"multiplicity must be non-negative, got {m} at {format_point(x)}")
            if m:
                merged[x] = merged.get(x, 0) + m
        self.atoms: Dict[ExtPoint, int] = {p: merged[p] for p in sorted(merged, key=point_sort_key)}

    @property
    def degree(self) -> int:
        return sum(self.atoms.values())

    @property
    def support(self) -> List[ExtPoint]:
        return list(self.atoms)

    def get(self, x: ExtPoint) -> int:
        return self.atoms.get(ext_point(x), 0)

    def items(self) -> List[Tuple[ExtPoint, int]]:
        return list(self.atoms.items())

    def finite_atoms(self) -> List[Tuple[float, int]]:
        return [(c, m) for c, m in self.atoms.items() if not is_inf(c)]

    def pushforward(self, f: Mobius) -> "Divisor":
        """Returns f_* D = D o f^-1."""
        return type(self)({f.apply(c): m for c, m in self.atoms.items()})

    def to_literal(self) -> str:
        return ",".join(f"{format_point(c)}:{m}" for c, m in self.atoms.items())

    @classmethod
    def from_literal(cls, text: str) -> "Divisor":
        """Parses "c1:m1,c2:m2" where each c is a decimal or 'inf'."""
        atoms: Dict[ExtPoint, int] = {}
        text = text.strip()
        if not text:
            return cls({})
        for part in text.split(","):
            if ":" not in part:
                raise ArgumentError(f"malformed divisor atom {part.strip()!r}; expected c:m")
            left, right = part.rsplit(":", 1)
            c = ext_point(left)
            try:
                m = int(right.strip())
            except ValueError as exc:
                raise ArgumentError(f"multiplicity must be an integer in {part.strip()!r}") from exc
            if m <= 0:
                raise ArgumentError(f"multiplicity must be positive in {part.strip()!r}")
            atoms[c] = atoms.get(c, 0) + m
        return cls(atoms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Divisor):
            return NotImplemented
        return self.atoms == other.atoms

    def __hash__(self) -> int:
        return hash(tuple(self.atoms.items()))

    def __le__(self, other: "Divisor") -> bool:
        return all(m <= other.get(c) for c, m in self.atoms.items())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_literal()!r})"


class PoleDivisor(Divisor):
    """
    The pole divisor D_n^inf: allowed poles with multiplicities.

    Examples:
        >>> D = PoleDivisor.from_literal("2:1,inf:3")
        >>> D.degree
        4
    """

    def validate_against(self, E: CompactSet) -> None:
        """
        Checks that every atom lies strictly inside a gap of E.

        Raises:
            DomainError: If an atom lies on E (gap edges belong to E).
        """
        for c in self.atoms:
            if E.contains(c):
                raise DomainError(f"pole {format_point(c)} lies on the set")


def sign_function(D: Divisor, x_star: ExtPoint, x: ExtPoint) -> int:
    """
    Returns S_n(x): the multiplicity of atoms c != x_star with x in [x_star, c).

    Raises:
        DomainError: If x coincides with an atom or with x_star.

    Examples:
        >>> sign_function(PoleDivisor({2.0: 1}), INF, 0.0)
        1
    """
    x_star = ext_point(x_star)
    x = ext_point(x)
    if x == x_star or D.get(x):
        raise DomainError(f"sign function undefined at {format_point(x)}")
    total = 0
    for c, m in D.atoms.items():
        if c == x_star:
            continue
        if in_cyclic_interval(x, x_star, c, include_left=True):
            total += m
    return total


def normalize_problem(E: CompactSet, D: PoleDivisor, x_star: ExtPoint,
                      rescale: bool = True) -> Tuple[Mobius, CompactSet, PoleDivisor, ExtPoint]:
    """
    Moves the extremal point to infinity.

    Uses f(z) = -1/(z - x_star) for finite x_star and the identity otherwise,
    followed (when rescale is True) by an affine map placing f(E) in [-1, 1].

    Args:
        E: The set.
        D: Pole divisor, atoms off E.
        x_star: Extremal point off E.
        rescale (bool): Apply the affine conditioning rescale.

    Returns:
        tuple: (f, f(E), f_* D, inf).

    Raises:
        DomainError: If x_star or an atom lies on E.
    """
    x_star = ext_point(x_star)
    if E.contains(x_star):
        raise DomainError(f"extremal point {format_point(x_star)} lies on the set")
    D.validate_against(E)
    f = Mobius.send_to_infinity(x_star)
    image = E.transform(f)
    if rescale:
        lo, hi = image.hull
        alpha = 2.0 / (hi - lo)
        beta = -(hi + lo) / (hi - lo)
        if not (alpha == 1.0 and beta == 0.0):
            f = Mobius.affine(alpha, beta).compose(f)
            image = E.transform(f)
    pushed = PoleDivisor(D.pushforward(f).atoms)
    logger.debug("normalized %s with x_star=%s via %s", E, format_point(x_star), f)
    return f, image, pushed, INF
