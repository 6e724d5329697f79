"""
ratcheb - Quadrature Module

Gauss-Chebyshev and Gauss-Legendre rules with order doubling, shared by
the Green-function engine for gap periods, harmonic measures and
sub-band integrals.
"""

import logging
from typing import Callable, Tuple

import numpy as np
from numpy.polynomial.chebyshev import chebgauss
from numpy.polynomial.legendre import leggauss

from .errors import NumericError

logger = logging.getLogger(__name__)

START_NODES = 16
MAX_NODES = 2 ** 14


def _converged(new: np.ndarray, old: np.ndarray, tol: float) -> bool:
    scale = max(1.0, float(np.max(np.abs(new))))
    return float(np.max(np.abs(new - old))) < tol * scale


def gauss_chebyshev(func: Callable[[np.ndarray], np.ndarray], tol: float = 1e-12,
                    max_nodes: int = MAX_NODES, start: int = START_NODES) -> Tuple[np.ndarray, int]:
    """
    Integrates f(x) / sqrt(1 - x^2) over [-1, 1].

    func maps an array of N nodes to an array of shape (N,) or (N, k); the
    number of nodes is doubled until successive results differ by less
    than tol (relative to max(1, |I|)).

    Returns:
        tuple: (integral, nodes used)

    Raises:
        NumericError: If max_nodes is reached without convergence.
    """
    n = start
    x, w = chebgauss(n)
    prev = np.tensordot(w, func(x), axes=(0, 0))
    while n < max_nodes:
        n *= 2
        x, w = chebgauss(n)
        cur = np.tensordot(w, func(x), axes=(0, 0))
        if _converged(cur, prev, tol):
            logger.debug("gauss-chebyshev converged with %d nodes", n)
            return cur, n
        prev = cur
    raise NumericError(f"Gauss-Chebyshev quadrature did not converge with {max_nodes} nodes",
                       np.atleast_1d(np.abs(cur - prev)).tolist())


def gauss_legendre(func: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                   tol: float = 1e-12, max_nodes: int = 2 ** 10,
                   start: int = START_NODES) -> Tuple[np.ndarray, int]:
    """
    Integrates func over [a, b] with Gauss-Legendre rules of doubling order.

    Raises:
        NumericError: If max_nodes is reached without convergence.
    """
    half, mid = 0.5 * (b - a), 0.5 * (b + a)

    def rule(n: int) -> np.ndarray:
        x, w = leggauss(n)
        return half * np.tensordot(w, func(mid + half * x), axes=(0, 0))

    n = start
    prev = rule(n)
    while n < max_nodes:
        n *= 2
        cur = rule(n)
        if _converged(cur, prev, tol):
            return cur, n
        prev = cur
    raise NumericError(f"Gauss-Legendre quadrature did not converge with {max_nodes} nodes",
                       np.atleast_1d(np.abs(cur - prev)).tolist())
