"""Normalization and position-representation momentum moments.

With 2m = hbar = 1 the closed forms below avoid finite differencing
entirely:

  <p^2> = <E - V>                      (first-derivative quadratic form)
  <p^4> = int ((V - E) psi)^2 dx       since psi'' = (V - E) psi
  <p^6> = int (psi''')^2 dx  piecewise, psi''' = V' psi + (V - E) psi'

The last integrand is evaluated separately on each open half-line because
psi''' jumps at the kink; a shrinking-cutoff study around the origin is
reported so a hidden divergence could not go unnoticed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .quadrature import adaptive_gauss_kronrod
from .wells import (EigenState, Parity, decay_cutoff, eigenfunction,
                    eigenfunction_derivative, potential, potential_derivative)


@dataclass(frozen=True)
class NormalizedState:
    state: EigenState
    accuracy: float


@dataclass(frozen=True)
class MomentEntry:
    """One even moment <p^(2j)> evaluated in position space."""
    j: int
    value: float
    ev_term: float                       # <(E - V)^j>
    converged: bool
    cutoff_study: tuple[tuple[float, float], ...] = ()


@dataclass(frozen=True)
class PositionMoments:
    p2: float
    p4: float
    p6_quadratic_form: float
    p6_converged: bool
    ev_terms: dict


def normalize(state: EigenState, tol: float = 1e-11) -> NormalizedState:
    """Fix norm_const so that int psi^2 dx = 1 (parity halves the integral)."""
    cut = decay_cutoff(state)

    def density(x):
        # |psi| of the positive branch; sgn factors square away
        return eigenfunction(replace(state, parity=Parity.EVEN), x) ** 2

    total, err = adaptive_gauss_kronrod(density, 0.0, cut, tol=tol)
    c_new = state.norm_const / math.sqrt(2.0 * total)
    return NormalizedState(state=replace(state, norm_const=c_new),
                           accuracy=err / total)


def position_moment(ns: NormalizedState, j: int) -> MomentEntry:
    """<p^(2j)> for j = 1, 2, 3 from the position representation."""
    if j not in (1, 2, 3):
        raise ValueError("only even moments j = 1, 2, 3 are defined")
    state = ns.state
    e = state.energy
    cut = decay_cutoff(state)

    def ev_integrand(x):
        return eigenfunction(state, x) ** 2 * (e - potential(state.well, x)) ** j

    ev, _ = adaptive_gauss_kronrod(ev_integrand, 0.0, cut, tol=1e-11)
    ev *= 2.0

    if j == 1:
        return MomentEntry(j=1, value=ev, ev_term=ev, converged=True)

    if j == 2:
        def integrand(x):
            psi = eigenfunction(state, x)
            return ((potential(state.well, x) - e) * psi) ** 2
        val, _ = adaptive_gauss_kronrod(integrand, 0.0, cut, tol=1e-11)
        return MomentEntry(j=2, value=2.0 * val, ev_term=ev, converged=True)

    def integrand3(x):
        psi = eigenfunction(state, x)
        dpsi = eigenfunction_derivative(state, x)
        v = potential(state.well, x)
        dv = potential_derivative(state.well, x)
        return (dv * psi + (v - e) * dpsi) ** 2

    # shrinking symmetric cutoff around the kink: the integral over
    # [eps, cut] must plateau as eps -> 0 for the moment to be finite
    study = []
    for eps in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6):
        val, _ = adaptive_gauss_kronrod(integrand3, eps, cut, tol=1e-11)
        study.append((eps, 2.0 * val))
    increments = [abs(study[i + 1][1] - study[i][1])
                  for i in range(len(study) - 1)]
    scale = max(abs(study[-1][1]), 1e-300)
    converged = increments[-1] <= max(0.5 * increments[-2], 1e-9 * scale)
    return MomentEntry(j=3, value=study[-1][1], ev_term=ev,
                       converged=converged, cutoff_study=tuple(study))


def position_moments(ns: NormalizedState) -> PositionMoments:
    """All even moments up to <p^6> plus the <(E-V)^j> building blocks."""
    m1 = position_moment(ns, 1)
    m2 = position_moment(ns, 2)
    m3 = position_moment(ns, 3)
    return PositionMoments(
        p2=m1.value, p4=m2.value, p6_quadratic_form=m3.value,
        p6_converged=m3.converged,
        ev_terms={1: m1.ev_term, 2: m2.ev_term, 3: m3.ev_term})
