"""
ratcheb - Rational Module

This module provides the space L(D) of real rational functions whose poles
are bounded by a pole divisor D, together with evaluation, leading
coefficients at a pole and generalized zero extraction.

Each atom c of D contributes a Chebyshev block: the functions T_k(t_c) for
k = 1..D(c), where t_c is an affine rescaling of s_c = r(w, c) over a
window (s_c = w for c = inf, s_c = 1/(c - w) otherwise). Together with the
constant these span the same space as 1, w^k and (c - w)^-k, with far
better conditioning on the set of interest.

Features:
- Basis: block-Chebyshev basis with evaluation/derivative matrices
- OrthoBasis: orthonormal rational Krylov basis on samples of a set, used by the solver
- RationalFn: immutable element of L(D), optionally precomposed with a Mobius chart
- ZeroDivisor: generalized zero divisor (actual zeros plus pole-order reductions)
- leading_coeff / generalized_zeros / cleared_values / basis module functions
"""

import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial
from numpy.polynomial import chebyshev as cheb

from .errors import DomainError, NumericError
from .geometry import (
    INF,
    CompactSet,
    Divisor,
    ExtPoint,
    Mobius,
    PoleDivisor,
    ext_point,
    format_point,
    is_inf,
)

logger = logging.getLogger(__name__)

Window = Tuple[float, float]

_DEFAULT_WINDOW: Window = (-1.0, 1.0)


class ZeroDivisor(Divisor):
    """
    Generalized zero divisor D^0 = (F)_0 + D - (F)_inf.

    Attributes:
        atoms (dict): Real generalized zeros with multiplicities.
        nonreal (list): Zeros off the real line (empty for extremal functions).
    """

    def __init__(self, atoms: Optional[Dict[ExtPoint, int]] = None,
                 nonreal: Optional[Sequence[complex]] = None):
        super().__init__(atoms)
        self.nonreal: List[complex] = list(nonreal or [])

    @property
    def degree(self) -> int:
        return sum(self.atoms.values()) + len(self.nonreal)

    def is_simple(self) -> bool:
        return not self.nonreal and all(m == 1 for m in self.atoms.values())


class Basis:
    """
    Working basis of L(D): the constant, then one Chebyshev block per atom.

    Attributes:
        divisor (PoleDivisor): The pole divisor (in the coordinates of evaluation).
        windows (dict): Atom -> (lo, hi) window of the block variable s_c.
        hull (tuple): Interval used as the interpolation domain for zero finding.
    """

    def __init__(self, divisor: PoleDivisor, windows: Optional[Dict[ExtPoint, Window]] = None,
                 hull: Window = _DEFAULT_WINDOW):
        self.divisor = divisor
        self.windows: Dict[ExtPoint, Window] = {}
        for c, _ in divisor.items():
            lo, hi = (windows or {}).get(c, _DEFAULT_WINDOW)
            if not hi > lo:
                raise DomainError(f"empty window for atom {format_point(c)}")
            self.windows[c] = (float(lo), float(hi))
        self.hull = (float(hull[0]), float(hull[1]))
        self._columns: List[Tuple[ExtPoint, int]] = [(c, k) for c, m in divisor.items()
                                                     for k in range(1, m + 1)]

    @classmethod
    def for_set(cls, divisor: PoleDivisor, E: CompactSet) -> "Basis":
        """
        Builds windows adapted to a bounded set E.

        The window of atom c is the range of s_c over E; s_c is monotone on
        each interval because c lies off E.
        """
        ends = np.array(E.endpoints)
        windows: Dict[ExtPoint, Window] = {}
        for c, _ in divisor.items():
            s = ends if is_inf(c) else 1.0 / (c - ends)
            lo, hi = float(s.min()), float(s.max())
            if hi - lo < 1e-12 * max(1.0, abs(hi)):
                lo, hi = lo - 1.0, hi + 1.0
            windows[c] = (lo, hi)
        return cls(divisor, windows, E.hull)

    @property
    def size(self) -> int:
        return self.divisor.degree + 1

    @property
    def columns(self) -> List[Tuple[ExtPoint, int]]:
        """Labels (atom, k) of the non-constant columns."""
        return list(self._columns)

    def column_index(self, c: ExtPoint, k: int) -> int:
        return 1 + self._columns.index((c, k))

    def _block_variable(self, c: ExtPoint, w: np.ndarray) -> np.ndarray:
        lo, hi = self.windows[c]
        s = w if is_inf(c) else 1.0 / (c - w)
        return (s - 0.5 * (lo + hi)) / (0.5 * (hi - lo))

    def matrix(self, w: Sequence[complex]) -> np.ndarray:
        """
        Evaluation matrix V with V[i, j] = phi_j(w_i).

        Rows at poles contain inf/nan entries; callers mask them.
        """
        w = np.asarray(w)
        dtype = complex if np.iscomplexobj(w) else float
        V = np.zeros((w.size, self.size), dtype=dtype)
        V[:, 0] = 1.0
        col = 1
        with np.errstate(divide="ignore", invalid="ignore"):
            for c, m in self.divisor.items():
                t = self._block_variable(c, w.ravel())
                V[:, col:col + m] = cheb.chebvander(t, m)[:, 1:]
                col += m
        return V

    def derivative_matrix(self, w: Sequence[float]) -> np.ndarray:
        """Matrix of d/dw phi_j(w_i)."""
        w = np.asarray(w)
        dtype = complex if np.iscomplexobj(w) else float
        flat = w.ravel()
        dV = np.zeros((flat.size, self.size), dtype=dtype)
        col = 1
        with np.errstate(divide="ignore", invalid="ignore"):
            for c, m in self.divisor.items():
                lo, hi = self.windows[c]
                t = self._block_variable(c, flat)
                ds = np.ones_like(flat) if is_inf(c) else 1.0 / (c - flat) ** 2
                for k in range(1, m + 1):
                    dT = cheb.chebval(t, cheb.chebder([0.0] * k + [1.0]))
                    dV[:, col] = dT * ds / (0.5 * (hi - lo))
                    col += 1
        return dV

    def infinity_row(self) -> np.ndarray:
        """Values of the basis functions at w = inf (finite only if inf is not an atom)."""
        row = np.zeros(self.size)
        row[0] = 1.0
        col = 1
        for c, m in self.divisor.items():
            if is_inf(c):
                row[col:col + m] = np.inf
            else:
                lo, hi = self.windows[c]
                t0 = (0.0 - 0.5 * (lo + hi)) / (0.5 * (hi - lo))
                row[col:col + m] = cheb.chebvander(np.array([t0]), m)[0, 1:]
            col += m
        return row

    def leading_row(self, c: ExtPoint, d: int) -> np.ndarray:
        """
        Linear functional returning the coefficient of r(w, c)^d.

        For d = 0 and c = inf this is evaluation at infinity.
        """
        if d == 0:
            if is_inf(c):
                return self.infinity_row()
            return self.matrix(np.array([c]))[0]
        row = np.zeros(self.size)
        lo, hi = self.windows[c]
        row[self.column_index(c, d)] = 2.0 ** (d - 1) / (0.5 * (hi - lo)) ** d
        return row

    def block(self, coeffs: np.ndarray, c: ExtPoint) -> np.ndarray:
        """Chebyshev coefficients (k = 1..D(c)) of the block of atom c."""
        m = self.divisor.get(c)
        return np.asarray(coeffs)[[self.column_index(c, k) for k in range(1, m + 1)]]

    def principal_part(self, coeffs: np.ndarray, c: ExtPoint) -> np.ndarray:
        """Coefficients of r(w, c)^k, k = 1..D(c), in the partial-fraction form."""
        m = self.divisor.get(c)
        lo, hi = self.windows[c]
        series = Chebyshev(np.concatenate(([0.0], self.block(coeffs, c))), domain=[lo, hi])
        power = series.convert(kind=Polynomial).coef
        out = np.zeros(m)
        out[:max(0, min(m, len(power) - 1))] = power[1:m + 1]
        return out

    def coefficient_scale(self, coeffs: np.ndarray) -> float:
        return float(np.max(np.abs(coeffs))) if len(coeffs) else 0.0

    def functions(self) -> List[Callable[[complex], complex]]:
        """The basis as a list of callables."""
        out: List[Callable[[complex], complex]] = [lambda z: 1.0 + 0.0 * z]
        for j in range(1, self.size):
            def phi(z, j=j):
                return self.matrix(np.atleast_1d(z))[0, j]
            out.append(phi)
        return out

    def to_dict(self) -> Dict[str, object]:
        return {
            "windows": [[format_point(c), lo, hi] for c, (lo, hi) in self.windows.items()],
            "hull": list(self.hull),
        }

    def __repr__(self) -> str:
        return f"Basis(divisor={self.divisor.to_literal()!r}, size={self.size})"


def _multiplier(c: ExtPoint, w: np.ndarray) -> np.ndarray:
    """r(w, c): w for c = inf, 1 / (c - w) otherwise."""
    return w if is_inf(c) else 1.0 / (c - w)


def _multiplier_derivative(c: ExtPoint, w: np.ndarray) -> np.ndarray:
    return np.ones_like(w) if is_inf(c) else 1.0 / (c - w) ** 2


class _Expansion:
    """
    Truncated Laurent expansion at a point p in the scaled local parameter u.

    At a finite p, u = (w - p) / tau; at infinity, u = rho / w. Coefficients
    are kept for orders lo..hi, index 0 holding order lo.
    """

    def __init__(self, point: ExtPoint, order: int, scale: float):
        self.point = point
        self.scale = scale
        if is_inf(point):
            self.lo, self.hi = -order, order
        else:
            self.lo, self.hi = -order, max(order - 1, 0)
        self.size = self.hi - self.lo + 1

    def unit(self) -> np.ndarray:
        e = np.zeros(self.size)
        e[-self.lo] = 1.0
        return e

    def multiply(self, c: ExtPoint, L: np.ndarray) -> np.ndarray:
        """Expansion of r(w, c) * f from the expansion L of f."""
        K = self.size
        out = np.zeros(K)
        p, s = self.point, self.scale
        if is_inf(c) and is_inf(p):
            out[:-1] = s * L[1:]
        elif is_inf(c):
            out = p * L
            out[1:] += s * L[:-1]
        elif c == p:
            out[:-1] = -L[1:] / s
        elif is_inf(p):
            ratio = c / s
            kernel = np.concatenate(([0.0], -(ratio ** np.arange(K - 1)) / s))
            out = np.convolve(L, kernel)[:K]
        else:
            delta = c - p
            kernel = (s / delta) ** np.arange(K) / delta
            out = np.convolve(L, kernel)[:K]
        return out

    def coefficient(self, L: np.ndarray, k: int) -> np.ndarray:
        """Coefficient of r(w, p)^k (k >= 1) or the value at p (k = 0); L may hold one row per vector."""
        idx = -k - self.lo
        if is_inf(self.point):
            return L[..., idx] * self.scale ** (-k)
        return L[..., idx] * (-self.scale) ** k


class OrthoBasis:
    """
    Orthonormal working basis of L(D) on a sample of a bounded set.

    Vectors are generated one pole order at a time: the latest vector of the
    block of c is multiplied by r(w, c), orthogonalized twice against every
    earlier vector and normalized in the sample mean square. The recurrence
    coefficients are stored, so the basis evaluates (and differentiates)
    anywhere with the same recurrence. Truncated Laurent expansions at every
    atom and at infinity ride along and give pole orders, leading
    coefficients and the value at infinity.

    Attributes:
        divisor (PoleDivisor): The pole divisor.
        windows (dict): Block windows, shared with the Chebyshev block basis.
        hull (tuple): Interpolation domain for zero finding.
        samples (numpy.ndarray): Points of E carrying the inner product.
    """

    def __init__(self, divisor: PoleDivisor, E: CompactSet, per_interval: Optional[int] = None):
        blocks = Basis.for_set(divisor, E)
        self.divisor = divisor
        self.windows = blocks.windows
        self.hull = blocks.hull
        self._blocks = blocks
        count = per_interval or max(3 * self.size, 64)
        nodes = np.cos(np.pi * (np.arange(count) + 0.5) / count)
        self.samples = np.concatenate([0.5 * (a + b) - 0.5 * (b - a) * nodes for a, b in E.intervals])
        self._expansions = self._make_expansions()
        self._build()

    @classmethod
    def for_set(cls, divisor: PoleDivisor, E: CompactSet) -> "OrthoBasis":
        return cls(divisor, E)

    @property
    def size(self) -> int:
        return self.divisor.degree + 1

    def _make_expansions(self) -> Dict[ExtPoint, _Expansion]:
        finite = [c for c, _ in self.divisor.finite_atoms()]
        rho = max([1.0] + [2.0 * abs(c) for c in finite])
        out = {INF: _Expansion(INF, self.divisor.get(INF), rho)}
        for c in finite:
            others = [abs(a - c) for a in finite if a != c]
            tau = min([1.0] + [0.5 * d for d in others])
            out[c] = _Expansion(c, self.divisor.get(c), tau)
        return out

    def _schedule(self) -> List[ExtPoint]:
        remaining = dict(self.divisor.items())
        order: List[ExtPoint] = []
        while any(remaining.values()):
            for c in list(remaining):
                if remaining[c]:
                    order.append(c)
                    remaining[c] -= 1
        return order

    def _build(self) -> None:
        x = self.samples
        M, N = x.size, self.size
        Q = np.zeros((M, N))
        Q[:, 0] = 1.0
        H = np.zeros((N, N))
        H[0, 0] = 1.0
        self._ops: List[Optional[ExtPoint]] = [None]
        self._parents = [0]
        self._laurent = {p: np.zeros((N, e.size)) for p, e in self._expansions.items()}
        for p, e in self._expansions.items():
            self._laurent[p][0] = e.unit()
        latest = {c: 0 for c, _ in self.divisor.items()}
        for j, c in enumerate(self._schedule(), start=1):
            parent = latest[c]
            v = _multiplier(c, x) * Q[:, parent]
            start = np.linalg.norm(v)
            h = np.zeros(j)
            for _ in range(2):
                step = Q[:, :j].T @ v / M
                v = v - Q[:, :j] @ step
                h += step
            norm = np.linalg.norm(v) / math.sqrt(M)
            if not norm * math.sqrt(M) > 1e-13 * start:
                raise NumericError(f"orthogonal basis lost rank at vector {j} (atom {format_point(c)})")
            Q[:, j] = v / norm
            H[:j, j] = h
            H[j, j] = norm
            for p, e in self._expansions.items():
                L = self._laurent[p]
                L[j] = (e.multiply(c, L[parent]) - h @ L[:j]) / norm
            self._ops.append(c)
            self._parents.append(parent)
            latest[c] = j
        self._H = H
        logger.debug("orthogonal basis for %s on %d samples", self.divisor.to_literal(), M)

    def matrix(self, w: Sequence[complex]) -> np.ndarray:
        """Evaluation matrix V with V[i, j] = q_j(w_i); rows at poles contain inf/nan entries."""
        w = np.asarray(w)
        flat = w.ravel()
        dtype = complex if np.iscomplexobj(flat) else float
        V = np.zeros((flat.size, self.size), dtype=dtype)
        V[:, 0] = 1.0
        H = self._H
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            for j in range(1, self.size):
                v = _multiplier(self._ops[j], flat) * V[:, self._parents[j]]
                V[:, j] = (v - V[:, :j] @ H[:j, j]) / H[j, j]
        return V

    def derivative_matrix(self, w: Sequence[float]) -> np.ndarray:
        """Matrix of d/dw q_j(w_i)."""
        w = np.asarray(w)
        flat = w.ravel()
        V = self.matrix(flat)
        dV = np.zeros_like(V)
        H = self._H
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            for j in range(1, self.size):
                c, parent = self._ops[j], self._parents[j]
                dv = _multiplier_derivative(c, flat) * V[:, parent] + _multiplier(c, flat) * dV[:, parent]
                dV[:, j] = (dv - dV[:, :j] @ H[:j, j]) / H[j, j]
        return dV

    def infinity_row(self) -> np.ndarray:
        """Values of the basis functions at w = inf (the constant term when inf is an atom)."""
        e = self._expansions[INF]
        return e.coefficient(self._laurent[INF], 0)

    def leading_row(self, c: ExtPoint, d: int) -> np.ndarray:
        """Linear functional returning the coefficient of r(w, c)^d (evaluation when d = 0)."""
        if d == 0:
            if is_inf(c):
                return self.infinity_row()
            return self.matrix(np.array([c]))[0]
        return self._expansions[c].coefficient(self._laurent[c], d)

    def principal_part(self, coeffs: np.ndarray, c: ExtPoint) -> np.ndarray:
        m = self.divisor.get(c)
        return np.array([self.leading_row(c, k) @ coeffs for k in range(1, m + 1)])

    def block(self, coeffs: np.ndarray, c: ExtPoint) -> np.ndarray:
        """Chebyshev block coefficients equivalent to the principal part at c."""
        m = self.divisor.get(c)
        lo, hi = self.windows[c]
        series = Polynomial(np.concatenate(([0.0], self.principal_part(coeffs, c))))
        chebc = series.convert(kind=Chebyshev, domain=[lo, hi]).coef
        out = np.zeros(m)
        out[:max(0, min(m, len(chebc) - 1))] = chebc[1:m + 1]
        return out

    def coefficient_scale(self, coeffs: np.ndarray) -> float:
        scale = float(np.max(np.abs(coeffs))) if len(coeffs) else 0.0
        for c, _ in self.divisor.items():
            gamma = self.block(coeffs, c)
            if gamma.size:
                scale = max(scale, float(np.max(np.abs(gamma))))
        return scale

    def to_dict(self) -> Dict[str, object]:
        return {
            "kind": "orthonormal",
            "windows": [[format_point(c), lo, hi] for c, (lo, hi) in self.windows.items()],
            "hull": list(self.hull),
            "samples": int(self.samples.size),
        }

    def __repr__(self) -> str:
        return f"OrthoBasis(divisor={self.divisor.to_literal()!r}, size={self.size})"


def basis(D: PoleDivisor) -> List[Callable[[complex], complex]]:
    """
    Returns the n + 1 basis functions of L(D) (default windows).

    Examples:
        >>> fns = basis(PoleDivisor({2.0: 1}))
        >>> len(fns)
        2
    """
    return Basis(D).functions()


class RationalFn:
    """
    An element F of L(D), stored as coefficients in a working Basis.

    When chart is not the identity, F(z) = G(chart(z)) where G is the
    function described by basis and coeffs in chart coordinates.

    Attributes:
        basis (Basis): Working basis in chart coordinates.
        coeffs (numpy.ndarray): Real coefficients, length n + 1.
        chart (Mobius): Map from evaluation coordinates to basis coordinates.

    Examples:
        >>> F = RationalFn.from_parts(PoleDivisor({INF: 3}), parts={INF: [-3.0, 0.0, 4.0]})
        >>> round(F(0.5).real, 12)
        -1.0
    """

    def __init__(self, basis: Basis, coeffs: Sequence[float], chart: Optional[Mobius] = None):
        coeffs = np.asarray(coeffs, dtype=float).copy()
        if coeffs.shape != (basis.size,):
            raise DomainError(f"expected {basis.size} coefficients, got {coeffs.shape}")
        coeffs.setflags(write=False)
        self.basis = basis
        self.coeffs = coeffs
        self.chart = chart if chart is not None else Mobius.identity()

    @classmethod
    def from_parts(cls, divisor: PoleDivisor, constant: float = 0.0,
                   parts: Optional[Dict[ExtPoint, Sequence[float]]] = None,
                   windows: Optional[Dict[ExtPoint, Window]] = None) -> "RationalFn":
        """
        Builds F = constant + sum_c sum_k parts[c][k-1] * r(z, c)^k.

        Args:
            divisor: Allowed poles.
            constant: Constant term.
            parts: Atom -> power coefficients for k = 1.. (missing atoms are zero).
            windows: Optional block windows.
        """
        b = Basis(divisor, windows)
        coeffs = np.zeros(b.size)
        coeffs[0] = constant
        for c, powers in (parts or {}).items():
            c = ext_point(c)
            m = divisor.get(c)
            if len(powers) > m:
                raise DomainError(f"atom {format_point(c)} allows order {m}, got {len(powers)}")
            lo, hi = b.windows[c]
            series = Polynomial([0.0] + list(powers)).convert(kind=Chebyshev, domain=[lo, hi])
            chebc = np.zeros(m + 1)
            chebc[:len(series.coef)] = series.coef
            coeffs[0] += chebc[0]
            for k in range(1, m + 1):
                coeffs[b.column_index(c, k)] = chebc[k]
        return cls(b, coeffs)

    @classmethod
    def constant(cls, value: float, divisor: Optional[PoleDivisor] = None,
                 chart: Optional[Mobius] = None) -> "RationalFn":
        b = Basis(divisor or PoleDivisor({}))
        coeffs = np.zeros(b.size)
        coeffs[0] = value
        return cls(b, coeffs, chart)

    # ------------------------------------------------------------------
    # structure
    # ------------------------------------------------------------------

    @property
    def n(self) -> int:
        return self.basis.divisor.degree

    @property
    def pole_divisor(self) -> PoleDivisor:
        """The ambient pole divisor in evaluation coordinates."""
        if self.chart.is_identity():
            return self.basis.divisor
        return PoleDivisor(self.basis.divisor.pushforward(self.chart.inverse()).atoms)

    @property
    def inner_divisor(self) -> PoleDivisor:
        return self.basis.divisor

    def coefficient_scale(self) -> float:
        return self.basis.coefficient_scale(self.coeffs)

    def block(self, c: ExtPoint) -> np.ndarray:
        """Chebyshev coefficients (k = 1..D(c)) of the block of inner atom c."""
        return self.basis.block(self.coeffs, c)

    def principal_part(self, c: ExtPoint) -> np.ndarray:
        """Coefficients of r(w, c)^k, k = 1..D(c), at the inner atom c."""
        return self.basis.principal_part(self.coeffs, c)

    def actual_orders(self, eps_pole: float = 1e-8) -> Dict[ExtPoint, int]:
        """Inner atom -> actual pole order (top significant Chebyshev degree of its block)."""
        scale = self.coefficient_scale()
        orders: Dict[ExtPoint, int] = {}
        for c, m in self.basis.divisor.items():
            gamma = self.block(c)
            order = 0
            for k in range(m, 0, -1):
                if abs(gamma[k - 1]) > eps_pole * scale:
                    order = k
                    break
            orders[c] = order
        return orders

    def actual_pole_divisor(self, eps_pole: float = 1e-8) -> PoleDivisor:
        """(F)_inf in evaluation coordinates."""
        inner = PoleDivisor({c: k for c, k in self.actual_orders(eps_pole).items() if k})
        if self.chart.is_identity():
            return inner
        return PoleDivisor(inner.pushforward(self.chart.inverse()).atoms)

    def is_constant(self, eps_pole: float = 1e-8) -> bool:
        return all(k == 0 for k in self.actual_orders(eps_pole).values())

    # ------------------------------------------------------------------
    # evaluation
    # ------------------------------------------------------------------

    def _inner_values(self, w: np.ndarray) -> np.ndarray:
        V = self.basis.matrix(w)
        with np.errstate(invalid="ignore"):
            out = V @ self.coeffs
        poles = np.zeros(w.shape, dtype=bool)
        for c, _ in self.basis.divisor.items():
            if not is_inf(c):
                poles |= w == c
        out = np.where(poles, np.inf, out)
        return out

    def _chart_array(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        f = self.chart
        if f.is_identity():
            return z, np.isinf(np.abs(z))
        with np.errstate(divide="ignore", invalid="ignore"):
            den = f.c * z + f.d
            w = (f.a * z + f.b) / den
        at_inf = (den == 0) & ~np.isinf(np.abs(z))
        from_inf = np.isinf(np.abs(z))
        w = np.where(from_inf, f.a / f.c if f.c != 0 else np.inf, w)
        at_inf = at_inf | (from_inf & (f.c == 0))
        return w, at_inf

    def value_at_inner_infinity(self) -> float:
        """G(inf) for the inner function; inf if inf is an actual pole."""
        orders = self.actual_orders(0.0)
        if orders.get(INF, 0):
            return INF
        row = self.basis.infinity_row()
        row = np.where(np.isinf(row), 0.0, row)
        return float(row @ self.coeffs)

    def evaluate(self, z) -> np.ndarray:
        """
        Vectorized evaluation; poles give inf.

        Args:
            z: Scalar or array of real or complex points (inf allowed).

        Returns:
            numpy.ndarray: Values with the dtype of the input (complex for complex input).
        """
        z = np.asarray(z)
        shape = z.shape
        flat = z.ravel()
        w, at_inf = self._chart_array(flat)
        out = np.empty(flat.shape, dtype=complex if np.iscomplexobj(flat) else float)
        finite = ~at_inf
        if np.any(finite):
            out[finite] = self._inner_values(w[finite])
        if np.any(at_inf):
            out[at_inf] = self.value_at_inner_infinity()
        return out.reshape(shape)

    def __call__(self, z):
        """Scalar evaluation returning a complex number (complex inf at poles)."""
        if np.ndim(z) == 0:
            value = complex(self.evaluate(np.array([complex(z)]))[0])
            if math.isinf(value.real) or math.isinf(value.imag) or math.isnan(value.real):
                return complex(INF, 0.0)
            return value
        return self.evaluate(z)

    def derivative(self, z) -> np.ndarray:
        """Vectorized derivative dF/dz at finite, non-pole points."""
        z = np.asarray(z)
        w, _ = self._chart_array(z.ravel())
        dV = self.basis.derivative_matrix(w)
        inner = dV @ self.coeffs
        f = self.chart
        if f.is_identity():
            return inner.reshape(z.shape)
        jac = f.determinant / (f.c * z.ravel() + f.d) ** 2
        return (inner * jac).reshape(z.shape)

    # ------------------------------------------------------------------
    # algebra
    # ------------------------------------------------------------------

    def scaled(self, factor: float) -> "RationalFn":
        return RationalFn(self.basis, self.coeffs * factor, self.chart)

    def with_chart(self, chart: Mobius) -> "RationalFn":
        """Returns F o g where the new chart is self.chart o g."""
        return RationalFn(self.basis, self.coeffs, self.chart.compose(chart))

    # ------------------------------------------------------------------
    # polynomial form
    # ------------------------------------------------------------------

    def denominator_roots(self) -> List[float]:
        """Roots of R_n: finite allowed poles repeated by multiplicity (evaluation coordinates)."""
        return [c for c, m in self.pole_divisor.finite_atoms() for _ in range(m)]

    def numerator(self) -> Polynomial:
        """
        The polynomial P with F = P / R_n, R_n = prod over finite poles of (z - c)^m.

        Obtained by Chebyshev interpolation of F * R_n at n + 1 nodes. In
        basis coordinates the product is assembled block by block; through a
        chart the nodes are moved off the poles.
        """
        roots = self.denominator_roots()
        radius = max([1.0] + [1.5 * abs(c) + 1.0 for c in roots])
        deg = max(self.n, 0)
        if self.chart.is_identity() and isinstance(self.basis, Basis):
            poles = dict(self.basis.divisor.finite_atoms())
            series = Chebyshev.interpolate(lambda x: cleared_values(self, x, poles), deg,
                                           domain=[-radius, radius])
            return series.convert(kind=Polynomial)

        def product(x: np.ndarray) -> np.ndarray:
            vals = self.evaluate(x.astype(float))
            for c in roots:
                vals = vals * (x - c)
            return vals

        series = _interpolate_off(product, deg, (-radius, radius), roots)
        return series.convert(kind=Polynomial)

    def to_dict(self) -> Dict[str, object]:
        poles = [[format_point(c), m] for c, m in self.pole_divisor.items()]
        return {
            "poles": poles,
            "coeffs": [float(x) for x in self.coeffs],
            "numerator": [float(x) for x in self.numerator().coef],
            "denominator_roots": self.denominator_roots(),
            "basis": self.basis.to_dict(),
            "chart": self.chart.to_dict(),
        }

    def __repr__(self) -> str:
        return f"RationalFn(poles={self.pole_divisor.to_literal()!r}, n={self.n})"


def evaluate(F: RationalFn, z: complex) -> complex:
    """
    Evaluates F at z; returns complex inf at a pole.

    Examples:
        >>> F = RationalFn.from_parts(PoleDivisor({2.0: 1}), -2.0, {2.0: [3.0]})
        >>> evaluate(F, 3.0)
        (-5+0j)
    """
    return F(z)


def leading_coeff(F: RationalFn, x_star: ExtPoint, d: int) -> float:
    """
    Returns lim_{x -> x_star} F(x) / r(x, x_star)^d.

    Args:
        F: A real rational function.
        x_star: The point (evaluation coordinates).
        d (int): Non-negative order.

    Raises:
        DomainError: If F has a pole of order greater than d at x_star.
    """
    x_star = ext_point(x_star)
    if d < 0:
        raise DomainError(f"order must be non-negative, got {d}")
    u = F.chart.apply(x_star)
    order = F.actual_orders().get(u, 0)
    if order > d:
        raise DomainError(f"pole of order {order} at {format_point(x_star)} exceeds d={d}")
    if d == 0:
        value = F(x_star)
        return float(value.real)
    if order < d:
        return 0.0
    kappa = F.chart.local_scale(x_star)
    beta = F.principal_part(u)[d - 1]
    return float(beta / kappa ** d)


def cleared_values(G: RationalFn, x: np.ndarray, poles: Dict[ExtPoint, int],
                   half: float = 1.0) -> np.ndarray:
    """
    Values of G(x) * prod_c ((x - c) / half)^k over the finite poles c of order k.

    G is read in basis coordinates (its chart is ignored). The block at c is
    expanded in powers of s_c = 1 / (c - x) and multiplied through by
    (x - c)^k term by term, so the result stays finite at c itself. Blocks
    of finite atoms missing from poles, and block coefficients above the
    given order, are dropped.

    Examples:
        >>> F = RationalFn.from_parts(PoleDivisor({0.0: 2}), 1.0, {0.0: [0.0, 1.0]})
        >>> float(cleared_values(F, np.array([0.0]), {0.0: 2})[0])
        1.0
    """
    x = np.asarray(x, dtype=float)
    b = G.basis
    factors = {c: ((x - c) / half) ** k for c, k in poles.items()}

    def others(skip: Optional[ExtPoint] = None) -> np.ndarray:
        out = np.ones_like(x)
        for c, f in factors.items():
            if c != skip:
                out = out * f
        return out

    total = G.coeffs[0] * others()
    for c, m in b.divisor.items():
        gamma = G.block(c)
        if is_inf(c):
            t = b._block_variable(c, x)
            total = total + cheb.chebval(t, np.concatenate(([0.0], gamma))) * others()
            continue
        k = poles.get(c, 0)
        if k == 0:
            continue
        lo, hi = b.windows[c]
        power = Chebyshev(np.concatenate(([0.0], gamma[:k])), domain=[lo, hi]).convert(kind=Polynomial).coef
        dx = x - c
        block = np.zeros_like(x)
        for j, p in enumerate(power[:k + 1]):
            block = block + p * (-1.0) ** j * dx ** (k - j)
        total = total + block / half ** k * others(c)
    return total


def _interpolate_off(func: Callable[[np.ndarray], np.ndarray], deg: int, domain: Window,
                     avoid: Sequence[float], attempts: int = 24) -> Chebyshev:
    """Chebyshev interpolant of func on a copy of domain shifted until every node keeps clear of avoid."""
    lo, hi = domain
    width = hi - lo
    nodes = cheb.chebpts1(deg + 1)
    clearance = 0.05 * width / (deg + 1)
    for attempt in range(attempts):
        shift = ((0.618034 * attempt) % 1.0) * width / (deg + 1)
        a, b = lo + shift, hi + shift
        x = 0.5 * (a + b) + 0.5 * width * nodes
        if not len(avoid) or np.min(np.abs(x[:, None] - np.asarray(avoid)[None, :])) > clearance:
            return Chebyshev.interpolate(func, deg, domain=[a, b])
    raise NumericError(f"no pole-free interpolation nodes on [{lo}, {hi}]")


def _polish(F: RationalFn, root: complex, steps: int = 8) -> complex:
    """Newton steps on the inner function; a step is kept only if |G| decreases."""
    inner = RationalFn(F.basis, F.coeffs)
    r = complex(root)
    fr = abs(inner.evaluate(np.array([r]))[0])
    for _ in range(steps):
        if fr == 0.0:
            break
        val = inner.evaluate(np.array([r]))[0]
        der = inner.derivative(np.array([r]))[0]
        if der == 0 or not np.isfinite(der):
            break
        cand = r - val / der
        fc = abs(inner.evaluate(np.array([cand]))[0])
        if not fc < fr:
            break
        r, fr = cand, fc
    return r


def generalized_zeros(F: RationalFn, eps_pole: float = 1e-8,
                      allow_constant: bool = False) -> ZeroDivisor:
    """
    Extracts the generalized zero divisor D^0 = (F)_0 + D - (F)_inf.

    Actual zeros are eigenvalues of the colleague matrix of a Chebyshev
    interpolant of the numerator, polished by Newton steps on F; roots with
    |Im| below 1e-8 * scale are snapped to the real line. Pole-order
    reductions are read from the top significant Chebyshev degree of each
    atom's block.

    Args:
        F: A real rational function.
        eps_pole (float): Relative threshold for vanishing block coefficients.
        allow_constant (bool): Accept constant F (then D^0 = D).

    Raises:
        DomainError: If F is constant and allow_constant is False.

    Examples:
        >>> F = RationalFn.from_parts(PoleDivisor({2.0: 1}), -2.0, {2.0: [3.0]})
        >>> [(round(x, 12), k) for x, k in generalized_zeros(F).items()]
        [(0.5, 1)]
    """
    orders = F.actual_orders(eps_pole)
    D = F.basis.divisor
    if all(k == 0 for k in orders.values()):
        if not allow_constant:
            raise DomainError("generalized zeros of a constant function are handled by the caller")
        if F.coefficient_scale() == 0.0:
            raise DomainError("the zero function has no zero divisor")
    lo, hi = F.basis.hull
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    scale = max(half, abs(mid), 1.0)
    finite_poles = {c: k for c, k in orders.items() if k and not is_inf(c)}
    pole_degree = sum(orders.values())
    inner = RationalFn(F.basis, F.coeffs)

    roots: List[complex] = []
    if pole_degree > 0:
        if isinstance(inner.basis, Basis):
            series = Chebyshev.interpolate(lambda x: cleared_values(inner, x, finite_poles, half),
                                           pole_degree, domain=[lo, hi])
        else:
            def product(x: np.ndarray) -> np.ndarray:
                vals = inner.evaluate(x)
                for c, k in finite_poles.items():
                    vals = vals * ((x - c) / half) ** k
                return vals

            atoms = [c for c, _ in D.finite_atoms()]
            series = _interpolate_off(product, pole_degree, (lo, hi), atoms)
        lo, hi = series.domain
        coef = np.array(series.coef)
        if not np.all(np.isfinite(coef)):
            raise NumericError(f"non-finite numerator coefficients for {F}")
        cmax = np.max(np.abs(coef))
        top = len(coef) - 1
        while top > 0 and abs(coef[top]) <= eps_pole * cmax:
            top -= 1
        if top > 0:
            try:
                raw = Chebyshev(coef[:top + 1], domain=[lo, hi]).roots()
            except np.linalg.LinAlgError as exc:
                raise NumericError(f"colleague eigenvalues failed for {F}") from exc
            roots = [_polish(F, r) for r in raw]
    zeros_at_inf = max(0, pole_degree - len(roots)) if orders.get(INF, 0) == 0 else 0

    real_roots: List[float] = []
    nonreal: List[complex] = []
    for r in roots:
        if abs(r.imag) <= 1e-8 * scale:
            real_roots.append(float(r.real))
        else:
            nonreal.append(complex(r))
    atoms: Dict[ExtPoint, int] = {}
    for x in _cluster(sorted(real_roots), 1e-7 * scale):
        atoms[x[0]] = atoms.get(x[0], 0) + x[1]
    if zeros_at_inf:
        atoms[INF] = atoms.get(INF, 0) + zeros_at_inf
    for c, m in D.items():
        reduction = m - orders.get(c, 0)
        if reduction:
            atoms[c] = atoms.get(c, 0) + reduction

    if not F.chart.is_identity():
        back = F.chart.inverse()
        atoms_out: Dict[ExtPoint, int] = {}
        for x, m in atoms.items():
            y = back.apply(x)
            atoms_out[y] = atoms_out.get(y, 0) + m
        atoms = atoms_out
        nonreal = [back.apply_complex(z) for z in nonreal]
    if nonreal:
        logger.debug("%d non-real zeros found for %s", len(nonreal), F)
    return ZeroDivisor(atoms, nonreal)


def _cluster(values: List[float], tol: float) -> List[Tuple[float, int]]:
    """Groups sorted values closer than tol; returns (mean, count) pairs."""
    groups: List[List[float]] = []
    for v in values:
        if groups and v - groups[-1][-1] <= tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    return [(float(np.mean(g)), len(g)) for g in groups]
