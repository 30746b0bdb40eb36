"""Quadrature building blocks shared by the special-function and moment code.

Provides cached Gauss-Legendre rules, composite fixed-panel integration for
vectorized integrands, and an adaptive Gauss-Kronrod (G7/K15) integrator
with an error estimate.
"""

from __future__ import annotations

import heapq
import math
from functools import lru_cache

import numpy as np

from .errors import AccuracyError

# G7/K15 nodes on [-1, 1]; Gauss weights are zero at the Kronrod-only nodes.
_K15_NODES = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759,
    0.991455371120813,
])
_K15_WEIGHTS = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529,
])
_G7_WEIGHTS = np.array([
    0.0, 0.129484966168870, 0.0, 0.279705391489277, 0.0,
    0.381830050505119, 0.0, 0.417959183673469, 0.0,
    0.381830050505119, 0.0, 0.279705391489277, 0.0,
    0.129484966168870, 0.0,
])


@lru_cache(maxsize=32)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def panel_nodes(edges: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Flattened nodes/weights of an n-point GL rule on each [e_i, e_{i+1}]."""
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(n)
    a = edges[:-1]
    half = 0.5 * np.diff(edges)
    nodes = (a + half)[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel()


def fixed_panels(f, edges, n: int = 16) -> float:
    """Composite Gauss-Legendre integral of a vectorized f over given edges."""
    nodes, weights = panel_nodes(np.asarray(edges, dtype=float), n)
    return float(np.dot(weights, f(nodes)))


def _gk_panel(f, a: float, b: float) -> tuple[float, float]:
    half = 0.5 * (b - a)
    x = a + half * (_K15_NODES + 1.0)
    y = np.asarray(f(x), dtype=float)
    k15 = half * float(np.dot(_K15_WEIGHTS, y))
    g7 = half * float(np.dot(_G7_WEIGHTS, y))
    # Standard QUADPACK-style sharpened estimate.
    err = (200.0 * abs(k15 - g7)) ** 1.5
    scale = half * float(np.dot(_K15_WEIGHTS, np.abs(y)))
    return k15, min(err, abs(k15 - g7)) + 1e-16 * scale


def adaptive_gauss_kronrod(f, a: float, b: float, tol: float = 1e-11,
                           limit: int = 400) -> tuple[float, float]:
    """Adaptive G7/K15 integration of a vectorized integrand on [a, b].

    Returns (integral, error_estimate). Raises AccuracyError if the
    requested tolerance cannot be reached within the subdivision limit.
    """
    if not b > a:
        if b == a:
            return 0.0, 0.0
        raise ValueError("integration limits must satisfy a <= b")
    val, err = _gk_panel(f, a, b)
    heap = [(-err, a, b, val, err)]
    total, total_err = val, err
    while total_err > tol * max(1.0, abs(total)) and len(heap) < limit:
        _, lo, hi, v, e = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk_panel(f, lo, mid)
        v2, e2 = _gk_panel(f, mid, hi)
        total += v1 + v2 - v
        total_err += e1 + e2 - e
        heapq.heappush(heap, (-e1, lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, mid, hi, v2, e2))
    if total_err > tol * max(1.0, abs(total)) and not math.isclose(
            total_err, 0.0, abs_tol=tol):
        raise AccuracyError(
            f"adaptive quadrature stalled at error {total_err:.3e}",
            achieved=total_err)
    return total, total_err
