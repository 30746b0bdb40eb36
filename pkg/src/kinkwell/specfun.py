"""Special functions needed by the quantization conditions.

Everything here is built from series, asymptotic expansions and integral
representations directly; no external special-function library is used.

  * Airy Ai and Ai' on the real line.
  * Bessel J of nonnegative real order and its argument derivative.
  * Modified Bessel K of purely imaginary order (a real-valued function)
    and its argument derivative, via the cosh-integral representation
    K_{i nu}(x) = int_0^inf exp(-x cosh t) cos(nu t) dt.

All public entry points return an EvalResult carrying the value together
with an absolute error estimate, so downstream root-finders can react when
accuracy degrades. Vectorized private helpers (suffix ``_vec``) operate on
numpy arrays and are what the eigenfunction evaluators call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, DomainError
from .quadrature import adaptive_gauss_kronrod, panel_nodes

_EPS = 2.2e-16

# Ai(0) = 3^(-2/3)/Gamma(2/3) and -Ai'(0) = 3^(-1/3)/Gamma(1/3)
_AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
_AIP0 = 3.0 ** (-1.0 / 3.0) / math.gamma(1.0 / 3.0)

# Region switches for Ai: Maclaurin series on [-8, 3], K_{1/3} integral for
# y > 3 (the series loses ~9 digits to cancellation near y = +8, so the
# textbook "series to |y|=8" split is kept only on the negative side),
# trigonometric asymptotics below -8.
_AIRY_SERIES_NEG = -8.0
_AIRY_SERIES_POS = 3.0


@dataclass(frozen=True)
class EvalResult:
    """A function value with an absolute error estimate."""
    value: float
    abs_error_estimate: float


def _check_finite(name: str, v: float) -> float:
    v = float(v)
    if not math.isfinite(v):
        raise DomainError(f"{name} must be finite, got {v!r}")
    return v


# ---------------------------------------------------------------------------
# Airy Ai
# ---------------------------------------------------------------------------

def _airy_series_vec(y: np.ndarray) -> tuple[np.ndarray, np.ndarray,
                                             np.ndarray, np.ndarray]:
    """Maclaurin series for Ai and Ai' (valid for moderate |y|).

    Returns (ai, ai_err, aip, aip_err).
    """
    y = np.asarray(y, dtype=float)
    y3 = y ** 3
    # f = sum t_k, g = sum u_k with  Ai = c1 f - c2 g
    t = np.ones_like(y)
    u = y.copy()
    # series for the derivatives: f' = sum p_k (k>=1), g' = sum q_k
    p = 0.5 * y * y
    q = np.ones_like(y)
    f, g = t.copy(), u.copy()
    fp, gp = p.copy(), q.copy()
    scale_f = np.abs(t) + np.abs(u)
    scale_fp = np.abs(p) + np.abs(q)
    for k in range(0, 120):
        t = t * y3 / ((3 * k + 2) * (3 * k + 3))
        u = u * y3 / ((3 * k + 3) * (3 * k + 4))
        q = q * y3 / ((3 * k + 1) * (3 * k + 3))
        f += t
        g += u
        gp += q
        if k >= 1:
            p = p * y3 / ((3 * k) * (3 * k + 2))
            fp += p
        scale_f += np.abs(t) + np.abs(u)
        scale_fp += (np.abs(p) if k >= 1 else 0.0) + np.abs(q)
        if (np.abs(t) + np.abs(u)).max(initial=0.0) < 1e-20 * max(
                1.0, scale_f.max(initial=1.0)):
            break
    ai = _AI0 * f - _AIP0 * g
    aip = _AI0 * fp - _AIP0 * gp
    return (ai, 4.0 * _EPS * scale_f, aip, 4.0 * _EPS * scale_fp)


def _airy_neg_asymptotic_vec(y: np.ndarray) -> tuple[np.ndarray, np.ndarray,
                                                     np.ndarray, np.ndarray]:
    """Oscillatory asymptotic expansion of Ai, Ai' for y <= -8."""
    x = -np.asarray(y, dtype=float)
    xi = (2.0 / 3.0) * x ** 1.5
    # u_k, v_k coefficient pairs of the Airy asymptotic series
    n_terms = 14
    u = [1.0]
    v = [1.0]
    for k in range(n_terms - 1):
        r = ((6 * k + 1) * (6 * k + 3) * (6 * k + 5)
             / (216.0 * (k + 1) * (2 * k + 1)))
        u.append(u[-1] * r)
        v.append(-u[-1] * (6 * (k + 1) + 1) / (6 * (k + 1) - 1))
    v = [1.0] + [-u[k] * (6 * k + 1) / (6 * k - 1) for k in range(1, n_terms)]

    inv_xi = 1.0 / xi
    s_even = np.zeros_like(x)   # sum (-1)^k u_{2k} xi^{-2k}
    s_odd = np.zeros_like(x)    # sum (-1)^k u_{2k+1} xi^{-2k-1}
    t_even = np.zeros_like(x)
    t_odd = np.zeros_like(x)
    last = np.zeros_like(x)
    pw = np.ones_like(x)
    for k in range(0, n_terms // 2):
        sgn = -1.0 if k % 2 else 1.0
        s_even += sgn * u[2 * k] * pw
        t_even += sgn * v[2 * k] * pw
        pw_odd = pw * inv_xi
        s_odd += sgn * u[2 * k + 1] * pw_odd
        t_odd += sgn * v[2 * k + 1] * pw_odd
        last = np.abs(u[2 * k + 1] * pw_odd)
        pw = pw_odd * inv_xi
    phase = xi - 0.25 * math.pi
    c, s = np.cos(phase), np.sin(phase)
    pref = 1.0 / (math.sqrt(math.pi) * x ** 0.25)
    ai = pref * (c * s_even + s * s_odd)
    aip = (x ** 0.25 / math.sqrt(math.pi)) * (s * t_even - c * t_odd)
    err = pref * (last + np.abs(u[n_terms - 1] * pw)) + 4.0 * _EPS * np.abs(ai)
    errp = err * x ** 0.5 + 4.0 * _EPS * np.abs(aip)
    return ai, err, aip, errp


def _k_real_order_scaled(nu: float, z: np.ndarray) -> tuple[np.ndarray,
                                                            np.ndarray]:
    """exp(z) * K_nu(z) for small real order nu, vectorized in z.

    Trapezoidal rule on the even analytic integrand
    exp(-z(cosh t - 1)) cosh(nu t); geometric convergence in the step.
    """
    z = np.asarray(z, dtype=float)
    zmin = float(z.min())
    zmax = float(z.max())
    t_max = math.acosh(1.0 + (46.0 + 2.0 * abs(nu)) / zmin)
    # saddle width shrinks like 1/sqrt(z); keep the trapezoid resolved
    h = min(0.18, 1.0 / math.sqrt(zmax))

    def total(step: float) -> np.ndarray:
        t = np.arange(0.0, t_max + step, step)
        w = np.full(t.shape, step)
        w[0] *= 0.5
        integ = np.exp(-z[:, None] * (np.cosh(t)[None, :] - 1.0)) \
            * np.cosh(nu * t)[None, :]
        return integ @ w

    coarse = total(h)
    fine = total(0.5 * h)
    return fine, np.abs(fine - coarse) + 4.0 * _EPS * np.abs(fine)


def _airy_pos_integral_vec(y: np.ndarray) -> tuple[np.ndarray, np.ndarray,
                                                   np.ndarray, np.ndarray]:
    """Ai, Ai' for y > 3 through K_{1/3}, K_{2/3} cosh integrals."""
    y = np.asarray(y, dtype=float)
    zeta = (2.0 / 3.0) * y ** 1.5
    ai = np.zeros_like(y)
    aip = np.zeros_like(y)
    err = np.full_like(y, 1e-300)
    errp = np.full_like(y, 1e-300)
    live = zeta < 700.0  # exp(-zeta) underflows beyond; Ai is 0 in double
    if np.any(live):
        zl = zeta[live]
        yl = y[live]
        k13, e13 = _k_real_order_scaled(1.0 / 3.0, zl)
        k23, e23 = _k_real_order_scaled(2.0 / 3.0, zl)
        damp = np.exp(-zl)
        pref = np.sqrt(yl / 3.0) / math.pi
        prefp = yl / (math.pi * math.sqrt(3.0))
        ai[live] = pref * damp * k13
        aip[live] = -prefp * damp * k23
        err[live] = pref * damp * e13 + 4.0 * _EPS * np.abs(ai[live])
        errp[live] = prefp * damp * e23 + 4.0 * _EPS * np.abs(aip[live])
    return ai, err, aip, errp


def airy_ai_vec(y: np.ndarray, derivative: bool = False
                ) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized Ai(y) or Ai'(y) with absolute error estimates."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if not np.all(np.isfinite(y)):
        raise DomainError("airy_ai: argument must be finite")
    val = np.empty_like(y)
    err = np.empty_like(y)
    regions = [
        (y < _AIRY_SERIES_NEG, _airy_neg_asymptotic_vec),
        ((y >= _AIRY_SERIES_NEG) & (y <= _AIRY_SERIES_POS), _airy_series_vec),
        (y > _AIRY_SERIES_POS, _airy_pos_integral_vec),
    ]
    for mask, fn in regions:
        if np.any(mask):
            a, ea, ap, eap = fn(y[mask])
            val[mask] = ap if derivative else a
            err[mask] = eap if derivative else ea
    return val, err


def airy_ai(y: float, derivative: bool = False) -> EvalResult:
    """Airy function Ai(y), or Ai'(y) with derivative=True."""
    y = _check_finite("airy_ai argument", y)
    v, e = airy_ai_vec(np.array([y]), derivative)
    return EvalResult(float(v[0]), float(e[0]))


# ---------------------------------------------------------------------------
# Bessel J of real order
# ---------------------------------------------------------------------------

_BESSEL_NU_MAX = 50.0
_BESSEL_X_MAX = 100.0


def _bessel_j_series_vec(nu: float, x: np.ndarray
                         ) -> tuple[np.ndarray, np.ndarray]:
    """Ascending series, reliable where cancellation stays mild."""
    x = np.asarray(x, dtype=float)
    val = np.zeros_like(x)
    err = np.full_like(x, 1e-300)
    lp = nu * np.log(0.5 * x) - math.lgamma(nu + 1.0)
    live = lp > -700.0
    if not np.any(live):
        return val, err
    xl = x[live]
    q = 0.25 * xl * xl
    term = np.ones_like(xl)
    total = term.copy()
    scale = np.abs(term)
    for k in range(0, 200):
        term = -term * q / ((k + 1.0) * (nu + k + 1.0))
        total += term
        scale += np.abs(term)
        if np.abs(term).max(initial=0.0) < 1e-20 * max(
                1.0, scale.max(initial=1.0)):
            break
    pref = np.exp(lp[live])
    val[live] = pref * total
    err[live] = pref * scale * 4.0 * _EPS
    return val, err


def _bessel_j_integral(nu: float, x: float) -> tuple[float, float]:
    """Schlaefli integral representation, good for large argument/order."""
    n_panels = max(6, int(math.ceil(math.pi * (nu + x) / 3.0)))
    edges = np.linspace(0.0, math.pi, n_panels + 1)
    nodes, weights = panel_nodes(edges, 12)
    osc = float(np.dot(weights, np.cos(nu * nodes - x * np.sin(nodes))))
    osc /= math.pi
    err = 8.0 * _EPS * (1.0 + nu + x) / math.pi

    s = math.sin(math.pi * nu)
    tail = 0.0
    if abs(s) > 1e-15:
        t_hi = math.asinh(46.0 / x)
        if nu > 0.0:
            t_hi = min(t_hi, 46.0 / nu)

        def decayed(t):
            return np.exp(-nu * t - x * np.sinh(t))

        tail, tail_err = adaptive_gauss_kronrod(decayed, 0.0, t_hi, tol=1e-13)
        tail *= s / math.pi
        err += abs(tail_err) / math.pi
    return osc - tail, err


def bessel_j_vec(nu: float, x: np.ndarray, derivative: bool = False,
                 _validate: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized J_nu(x) or d/dx J_nu(x) for fixed order nu."""
    nu = float(nu)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if _validate and not (0.0 <= nu <= _BESSEL_NU_MAX):
        raise DomainError(f"bessel_j: order {nu} outside [0, {_BESSEL_NU_MAX}]")
    if not np.all((x > 0.0) & (x <= _BESSEL_X_MAX)):
        raise DomainError("bessel_j: argument must lie in (0, 100]")
    if derivative:
        # J'_nu = (nu/x) J_nu - J_{nu+1}, valid for all nu >= 0
        j0, e0 = bessel_j_vec(nu, x, False, _validate=_validate)
        j1, e1 = bessel_j_vec(nu + 1.0, x, False, _validate=False)
        return (nu / x) * j0 - j1, (nu / x) * e0 + e1

    val = np.empty_like(x)
    err = np.empty_like(x)
    cut = max(6.0, 2.0 * math.sqrt(nu + 1.0))
    small = x <= cut
    if np.any(small):
        v, e = _bessel_j_series_vec(nu, x[small])
        val[small] = v
        err[small] = e
    big_idx = np.nonzero(~small)[0]
    for i in big_idx:
        val[i], err[i] = _bessel_j_integral(nu, float(x[i]))
    return val, err


def bessel_j(nu: float, x: float, derivative: bool = False) -> EvalResult:
    """Bessel function J_nu(x) of real order nu >= 0, or its x-derivative."""
    nu = _check_finite("bessel_j order", nu)
    x = _check_finite("bessel_j argument", x)
    v, e = bessel_j_vec(nu, np.array([x]), derivative)
    return EvalResult(float(v[0]), float(e[0]))


# ---------------------------------------------------------------------------
# Modified Bessel K of imaginary order
# ---------------------------------------------------------------------------

_KIMAG_NU_MAX = 20.0
_KIMAG_X_MAX = 60.0


def bessel_k_imag_vec(nu: float, x: np.ndarray, derivative: bool = False
                      ) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized K_{i nu}(x) (real-valued) or d/dx K_{i nu}(x), fixed nu.

    Trapezoidal rule on int_0^inf exp(-x cosh t) cos(nu t) dt; the step is
    shrunk with the order so the cosine stays resolved.
    """
    nu = float(abs(nu))  # K_{i nu} is even in nu
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if nu > _KIMAG_NU_MAX:
        raise DomainError(
            f"bessel_k_imag: order {nu} outside [0, {_KIMAG_NU_MAX}]")
    if not np.all((x > 0.0) & (x <= _KIMAG_X_MAX)):
        raise DomainError("bessel_k_imag: argument must lie in (0, 60]")

    xmin = float(x.min())
    xmax = float(x.max())
    t_max = math.acosh(1.0 + 46.0 / xmin)
    h = min(0.18, 1.0 / math.sqrt(xmax), math.pi / (2.0 * (nu + 4.0)))
    damp = np.exp(-x)

    def total(step: float) -> np.ndarray:
        t = np.arange(0.0, t_max + step, step)
        w = np.full(t.shape, step)
        w[0] *= 0.5
        kernel = np.exp(-x[:, None] * (np.cosh(t)[None, :] - 1.0))
        trig = np.cos(nu * t)
        if derivative:
            kernel = kernel * (-np.cosh(t)[None, :])
        return (kernel * trig[None, :]) @ w

    coarse = total(h)
    fine = total(0.5 * h)
    val = damp * fine
    err = damp * (np.abs(fine - coarse) + 8.0 * _EPS * np.abs(fine)
                  + 4.0 * _EPS * t_max / h)
    return val, err


def bessel_k_imag(nu: float, x: float, derivative: bool = False) -> EvalResult:
    """Modified Bessel K_{i nu}(x) of purely imaginary order (real-valued).

    Raises AccuracyError when the quadrature error estimate exceeds the
    advertised tolerance relative to the achievable scale.
    """
    nu = _check_finite("bessel_k_imag order", nu)
    x = _check_finite("bessel_k_imag argument", x)
    v, e = bessel_k_imag_vec(nu, np.array([x]), derivative)
    value, estimate = float(v[0]), float(e[0])
    if estimate > 1e-6 * max(abs(value), math.exp(-x)):
        raise AccuracyError(
            f"bessel_k_imag({nu}, {x}) quadrature stalled at {estimate:.3e}",
            achieved=estimate)
    return EvalResult(value, estimate)
