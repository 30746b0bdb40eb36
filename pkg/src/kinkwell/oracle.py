"""Independent Numerov eigensolver used to cross-check the closed forms.

Shoots inward from a truncation point L (where the growing solution would
otherwise take over) down to the origin and tunes the energy until the
parity boundary condition holds: psi'(0) = 0 for even states, psi(0) = 0
for odd ones. Nothing here touches the special-function code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoRootError
from .wells import Parity, WellSpec, WellKind, potential, turning_point


@dataclass(frozen=True)
class GridSolution:
    x_grid: np.ndarray
    psi: np.ndarray
    energy: float
    parity: Parity
    mismatch: float


def default_domain(well: WellSpec, e: float) -> float:
    """Truncation point L; generous for slow tails, tight for the
    super-exponentially confined divergent well."""
    if well.kind is WellKind.DIV_EXP:
        return turning_point(well, e) + 4.0 * well.a
    return turning_point(well, e) + 12.0 * well.a


def _shoot(q: np.ndarray, h: float) -> np.ndarray:
    """Integrate psi'' = q psi from the last grid point inward."""
    n = q.size
    psi = np.empty(n)
    c = 1.0 - (h * h / 12.0) * q
    psi[-1] = 0.0
    psi[-2] = 1e-120
    # Numerov three-term recurrence, marching toward x = 0
    for i in range(n - 2, 0, -1):
        psi[i - 1] = ((12.0 - 10.0 * c[i]) * psi[i] - c[i + 1] * psi[i + 1]) \
            / c[i - 1]
        if abs(psi[i - 1]) > 1e200:
            psi[: i + 2] /= 1e200
            psi[i - 1] /= 1e200
    return psi


def _mismatch(well: WellSpec, parity: Parity, e: float, h: float,
              ll: float) -> tuple[float, np.ndarray, np.ndarray]:
    n = int(round(ll / h)) + 1
    x = np.arange(n) * h
    q = potential(well, x) - e
    psi = _shoot(np.asarray(q), h)
    scale = np.max(np.abs(psi))
    psi = psi / scale
    if parity is Parity.ODD:
        return psi[0], x, psi
    # one-sided 4th-order derivative at the origin
    d = (-25.0 * psi[0] + 48.0 * psi[1] - 36.0 * psi[2]
         + 16.0 * psi[3] - 3.0 * psi[4]) / (12.0 * h)
    return d, x, psi


def numerov_solve(well: WellSpec, parity: Parity,
                  e_bracket: tuple[float, float], h: float | None = None,
                  domain: float | None = None,
                  tol: float = 1e-10) -> GridSolution:
    """Tune E inside e_bracket until the parity condition at 0 holds.

    The bracket must contain exactly one eigenvalue (take it from the
    closed-form scan). h defaults to 1e-3 * a.
    """
    e_lo, e_hi = float(e_bracket[0]), float(e_bracket[1])
    if h is None:
        h = 1e-3 * well.a
    if domain is None:
        domain = default_domain(well, e_hi)

    def f(e: float) -> float:
        return _mismatch(well, parity, e, h, domain)[0]

    f_lo, f_hi = f(e_lo), f(e_hi)
    if f_lo == 0.0:
        e_root = e_lo
    elif f_hi == 0.0:
        e_root = e_hi
    elif (f_lo < 0.0) == (f_hi < 0.0):
        raise NoRootError(
            f"no boundary-mismatch sign change in [{e_lo}, {e_hi}] "
            f"for {well.kind.value}/{parity.value}")
    else:
        a, b, fa, fb = e_lo, e_hi, f_lo, f_hi
        for _ in range(200):
            # secant step, safeguarded by the bracket
            m = b - fb * (b - a) / (fb - fa)
            if not (a < m < b):
                m = 0.5 * (a + b)
            fm = f(m)
            if abs(fm) <= tol or (b - a) < 1e-14 * max(1.0, abs(m)):
                break
            if (fa < 0.0) == (fm < 0.0):
                a, fa = m, fm
            else:
                b, fb = m, fm
        e_root = m

    mis, x, psi = _mismatch(well, parity, e_root, h, domain)
    return GridSolution(x_grid=x, psi=psi, energy=e_root, parity=parity,
                        mismatch=mis)
