"""The three symmetric wells, their closed-form eigenfunctions and spectra.

Units: 2m = 1, hbar = 1 throughout the package. With this convention the
Schroedinger equation reads psi'' = (V - E) psi and the triangular-well
ground state sits at E = 1.0187929716... * v0^(2/3), matching the benchmark
value 2.9789 for v0 = 5, a = 1.

All three potentials are functions of |x|, continuous at the origin but
with a kink there. Even/odd bound states come from zeros of a special
function (odd) or of its derivative (even); for the exponential wells the
energy enters through the ORDER of the Bessel function while the argument
q*a stays fixed, so the spectrum scan runs over the order.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from . import specfun
from .errors import DomainError, NoRootError, ResolutionError


class WellKind(enum.Enum):
    TRIANGULAR = "triangular"
    CONV_EXP = "convexp"
    DIV_EXP = "divexp"


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class WellSpec:
    """One of the three wells, with depth/scale v0 and width a."""
    kind: WellKind
    v0: float
    a: float = 1.0

    def __post_init__(self):
        if not (self.v0 > 0.0 and math.isfinite(self.v0)):
            raise DomainError(f"v0 must be positive, got {self.v0}")
        if not (self.a > 0.0 and math.isfinite(self.a)):
            raise DomainError(f"a must be positive, got {self.a}")

    @property
    def qa(self) -> float:
        """sqrt(v0)*a, the fixed Bessel argument of the exponential wells."""
        return math.sqrt(self.v0) * self.a

    @property
    def airy_scale(self) -> float:
        """g = (v0/a)^(1/3) of the triangular well's Airy substitution."""
        return (self.v0 / self.a) ** (1.0 / 3.0)


@dataclass(frozen=True)
class EigenState:
    """A bound state; norm_const is provisional (1.0) until normalized."""
    well: WellSpec
    n: int
    parity: Parity
    energy: float
    norm_const: float = 1.0

    @property
    def order(self) -> float:
        """The special-function order/argument parameter derived from E."""
        well = self.well
        if well.kind is WellKind.TRIANGULAR:
            return -self.energy / well.airy_scale ** 2   # y0
        if well.kind is WellKind.CONV_EXP:
            return well.a * math.sqrt(-self.energy)      # k*a
        return well.a * math.sqrt(self.energy + well.v0)  # kappa*a


def potential(well: WellSpec, x) -> np.ndarray | float:
    """V(x); symmetric in x and continuous (kinked) at the origin."""
    xa = np.abs(np.asarray(x, dtype=float)) / well.a
    if well.kind is WellKind.TRIANGULAR:
        v = well.v0 * xa
    elif well.kind is WellKind.CONV_EXP:
        v = -well.v0 * np.exp(-2.0 * xa)
    else:
        v = well.v0 * np.expm1(2.0 * xa)
    return v if np.ndim(x) else float(v)


def potential_derivative(well: WellSpec, x) -> np.ndarray | float:
    """dV/dx away from the origin (one-sided values on each half-line)."""
    x = np.asarray(x, dtype=float)
    s = np.sign(x)
    xa = np.abs(x) / well.a
    if well.kind is WellKind.TRIANGULAR:
        v = well.v0 / well.a * s
    elif well.kind is WellKind.CONV_EXP:
        v = (2.0 * well.v0 / well.a) * np.exp(-2.0 * xa) * s
    else:
        v = (2.0 * well.v0 / well.a) * np.exp(2.0 * xa) * s
    return v if np.ndim(x) else float(v)


def admissible_range(well: WellSpec, e_max_scan: float | None = None
                     ) -> tuple[float, float]:
    """Open energy interval in which bound states are searched."""
    if e_max_scan is None:
        e_max_scan = 40.0 * well.v0
    if well.kind is WellKind.CONV_EXP:
        return -well.v0, 0.0
    return 0.0, e_max_scan


def quantization_residual(well: WellSpec, parity: Parity, e: float) -> float:
    """LHS of the parity matching condition; bound states are its zeros."""
    lo, hi = admissible_range(well, e_max_scan=math.inf)
    if not (lo < e < hi) or not math.isfinite(e):
        raise DomainError(
            f"energy {e} outside admissible range ({lo}, {hi}) "
            f"for {well.kind.value}")
    deriv = parity is Parity.EVEN
    if well.kind is WellKind.TRIANGULAR:
        y0 = -e / well.airy_scale ** 2
        return specfun.airy_ai(y0, derivative=deriv).value
    if well.kind is WellKind.CONV_EXP:
        nu = well.a * math.sqrt(-e)
        return specfun.bessel_j(nu, well.qa, derivative=deriv).value
    nu = well.a * math.sqrt(e + well.v0)
    return specfun.bessel_k_imag(nu, well.qa, derivative=deriv).value


def _order_to_energy(well: WellSpec, u: float) -> float:
    if well.kind is WellKind.TRIANGULAR:
        return -u * well.airy_scale ** 2          # u = y0 (negative)
    if well.kind is WellKind.CONV_EXP:
        return -((u / well.a) ** 2)               # u = k*a
    return (u / well.a) ** 2 - well.v0            # u = kappa*a


def _energy_to_order(well: WellSpec, e: float) -> float:
    return EigenState(well, 0, Parity.EVEN, e).order


def _bisect(f, a: float, b: float, fa: float, fb: float,
            xtol: float = 1e-13) -> float:
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if a > b:
        a, b, fa, fb = b, a, fb, fa
    for _ in range(200):
        m = 0.5 * (a + b)
        if b - a < xtol * max(1.0, abs(m)):
            return m
        fm = f(m)
        if fm == 0.0:
            return m
        if (fa < 0.0) == (fm < 0.0):
            a, fa = m, fm
        else:
            b, fb = m, fm
    return 0.5 * (a + b)


def solve_spectrum(well: WellSpec, max_states: int,
                   e_max_scan: float | None = None,
                   n_cells: int = 400) -> list[EigenState]:
    """Bound states ordered by energy, parity alternating even/odd.

    Scans the admissible interval uniformly in the special-function order
    parameter (where the residual oscillates roughly uniformly), bisects
    each sign change, then polishes with one finite-difference Newton step.
    Raises ResolutionError if refinement cannot restore parity interlacing.
    """
    if max_states < 1:
        raise DomainError("max_states must be >= 1")
    for attempt, cells in enumerate((n_cells, 4 * n_cells)):
        states = _scan_spectrum(well, max_states, e_max_scan, cells)
        if _interlaced(states):
            return states
    raise ResolutionError(
        f"parity interlacing violated for {well} even at {4 * n_cells} cells")


def _scan_spectrum(well: WellSpec, max_states: int,
                   e_max_scan: float | None, n_cells: int
                   ) -> list[EigenState]:
    e_lo, e_hi = admissible_range(well, e_max_scan)
    # map to the order variable; shrink slightly inside the open interval
    span = e_hi - e_lo
    e_a = e_lo + 1e-9 * span
    e_b = e_hi - 1e-9 * span
    u_a = _energy_to_order(well, e_a)
    u_b = _energy_to_order(well, e_b)
    found: list[EigenState] = []
    for parity in (Parity.EVEN, Parity.ODD):
        def res_u(u: float) -> float:
            return quantization_residual(well, parity, _order_to_energy(well, u))

        us = np.linspace(u_a, u_b, n_cells + 1)
        vals = np.array([res_u(u) for u in us])
        for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
            u_root = _bisect(res_u, us[i], us[i + 1], vals[i], vals[i + 1])
            e_root = _order_to_energy(well, u_root)
            e_root = _newton_polish(well, parity, e_root)
            found.append(EigenState(well, -1, parity, e_root))
    found.sort(key=lambda s: s.energy)
    found = found[:max_states]
    return [replace(s, n=i) for i, s in enumerate(found)]


def _newton_polish(well: WellSpec, parity: Parity, e: float) -> float:
    h = 1e-7 * max(1.0, abs(e))
    try:
        f0 = quantization_residual(well, parity, e)
        slope = (quantization_residual(well, parity, e + h)
                 - quantization_residual(well, parity, e - h)) / (2.0 * h)
    except DomainError:
        return e
    if slope == 0.0:
        return e
    step = f0 / slope
    if abs(step) < 1e-6 * max(1.0, abs(e)):
        return e - step
    return e


def _interlaced(states: list[EigenState]) -> bool:
    for i, s in enumerate(states):
        want = Parity.EVEN if i % 2 == 0 else Parity.ODD
        if s.parity is not want:
            return False
    energies = [s.energy for s in states]
    return energies == sorted(energies)


def eigenfunction(state: EigenState, x) -> np.ndarray | float:
    """psi(x) from the closed-form branch, vectorized in x."""
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    well = state.well
    xa = np.abs(x_arr) / well.a
    if well.kind is WellKind.TRIANGULAR:
        y = (well.v0 * xa - state.energy) / well.airy_scale ** 2
        vals, _ = specfun.airy_ai_vec(y)
    elif well.kind is WellKind.CONV_EXP:
        w = well.qa * np.exp(-xa)
        vals, _ = specfun.bessel_j_vec(state.order, w)
    else:
        z = well.qa * np.exp(xa)
        vals = np.zeros_like(z)
        live = z <= specfun._KIMAG_X_MAX  # K is below double tiny beyond
        if np.any(live):
            vals[live], _ = specfun.bessel_k_imag_vec(state.order, z[live])
    psi = state.norm_const * vals
    if state.parity is Parity.ODD:
        psi = psi * np.sign(x_arr)
    return psi if np.ndim(x) else float(psi[0])


def eigenfunction_derivative(state: EigenState, x) -> np.ndarray | float:
    """psi'(x) via the special-function derivative (one-sided at 0)."""
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    well = state.well
    xa = np.abs(x_arr) / well.a
    sgn = np.where(x_arr >= 0.0, 1.0, -1.0)
    if well.kind is WellKind.TRIANGULAR:
        y = (well.v0 * xa - state.energy) / well.airy_scale ** 2
        d, _ = specfun.airy_ai_vec(y, derivative=True)
        inner = (well.v0 / well.a) / well.airy_scale ** 2
        dpsi = d * inner * sgn
    elif well.kind is WellKind.CONV_EXP:
        w = well.qa * np.exp(-xa)
        d, _ = specfun.bessel_j_vec(state.order, w, derivative=True)
        dpsi = d * (-w / well.a) * sgn
    else:
        z = well.qa * np.exp(xa)
        dpsi = np.zeros_like(z)
        live = z <= specfun._KIMAG_X_MAX
        if np.any(live):
            d, _ = specfun.bessel_k_imag_vec(state.order, z[live],
                                             derivative=True)
            dpsi[live] = d * (z[live] / well.a) * sgn[live]
    dpsi = state.norm_const * dpsi
    if state.parity is Parity.EVEN:
        # psi even => psi' odd; the sgn factor flips the left branch
        pass
    else:
        # psi odd => psi' = |branch|' which is even in x
        dpsi = dpsi * sgn
    return dpsi if np.ndim(x) else float(dpsi[0])


def turning_point(well: WellSpec, e: float) -> float:
    """Classical turning point V(x_t) = E on the positive half-line."""
    if well.kind is WellKind.TRIANGULAR:
        return max(0.0, e) * well.a / well.v0
    if well.kind is WellKind.CONV_EXP:
        return 0.5 * well.a * math.log(well.v0 / max(-e, 1e-300))
    return 0.5 * well.a * math.log1p(max(e, 0.0) / well.v0)


def decay_cutoff(state: EigenState, log_tiny: float = 32.0) -> float:
    """x beyond which |psi| has dropped by ~exp(-log_tiny) of its peak."""
    well = state.well
    e = state.energy
    if well.kind is WellKind.TRIANGULAR:
        # Ai(y) ~ exp(-2/3 y^(3/2)): 2/3 y^(3/2) = log_tiny
        y_cut = (1.5 * log_tiny) ** (2.0 / 3.0)
        return well.a * (y_cut * well.airy_scale ** 2 + e) / well.v0
    if well.kind is WellKind.CONV_EXP:
        # psi ~ exp(-k x)
        k = math.sqrt(-e)
        return log_tiny / k + well.a * math.log(max(well.qa, 1.0) + 1.0)
    # K_{i nu}(z) ~ exp(-z): z = qa e^(x/a) = log_tiny + qa
    return well.a * math.log((log_tiny + well.qa) / well.qa)
