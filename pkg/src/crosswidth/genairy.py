"""The generalized Airy function family A_n.

A_n(y) = (1/2 pi) Integral exp(i P(eta)) d eta over the real line, with
phase P(eta) = Integral_0^eta (y + tau^2)^n d tau.  A_1 is the classical
Airy function Ai.  Since P is odd, A_n(y) = (1/pi) Integral_0^infty
cos(P) d eta, which is what the oscillatory quadrature evaluates.

Evaluation strategy by regime:
  * oscillatory quadrature: the half line is cut into segments on which P
    advances by pi (plus a cut at the stationary point when y < 0); each
    segment is subdivided and integrated with Gauss-Legendre rules, and
    once the phase is far past the stationary region the rest of the line
    is summed exactly by an integration-by-parts series in the phase
    variable, whose boundary terms are rational in eta.
  * deep negative y: degenerate stationary phase expansion.
  * positive y: the value decays like exp(-c_n y^(n+1/2)); once the decay
    exceeds what double precision quadrature can see, the contour is
    rotated into the decay sector and integrated in arbitrary precision.

y = 0 is deliberately routed through the quadrature so that the closed
form gen_airy_zero stays an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial import polynomial as _poly

import mpmath as mp

from .errors import NumericError, RangeError

N_MAX = 6

METHOD_QUADRATURE = "oscillatory_quadrature"
METHOD_ASYMP_NEG = "asymptotic_neg"
METHOD_ASYMP_POS = "asymptotic_pos"
METHOD_ZERO = "closed_form_zero"
_METHODS = (METHOD_QUADRATURE, METHOD_ASYMP_NEG, METHOD_ASYMP_POS, METHOD_ZERO)

# stationary phase magnitude c_n |y|^(n + 1/2) thresholds
_PHASE_RAY = 18.0       # positive side: switch to the rotated-ray contour
_PHASE_UNDERFLOW = 670.0  # positive side: value underflows double precision
_PHASE_QUAD_MAX = 6.0e5   # negative side: phase accuracy of the marcher runs out
_Y_RAY = 8.0

_GL16 = np.polynomial.legendre.leggauss(16)
_GL12 = np.polynomial.legendre.leggauss(12)


@dataclass(frozen=True)
class GenAiryResult:
    value: float
    n: int
    method: str
    est_error: float


def _check_n(n):
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise RangeError("n must be an integer")
    if not 1 <= n <= N_MAX:
        raise RangeError("n must lie in [1, %d]" % N_MAX)
    return int(n)


def gamma_fn(z):
    """Gamma function on the positive half line."""
    z = float(z)
    if not z > 0.0:
        raise RangeError("gamma_fn requires z > 0")
    return math.gamma(z)


def cn_const(n):
    """c_n = Integral_0^1 (1 - t^2)^n dt, computed exactly."""
    n = _check_n(n)
    frac = Fraction(4 ** n * math.factorial(n) ** 2, math.factorial(2 * n + 1))
    return float(frac)


def degenerate_stationary_phase(k, a):
    """Integral over the real line of exp(i a z^(k+1)) for integer k >= 1."""
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool) or k < 1:
        raise RangeError("k must be an integer >= 1")
    a = float(a)
    if a == 0.0:
        raise RangeError("a must be nonzero")
    m = k + 1
    mag = 2.0 * gamma_fn((k + 2) / (k + 1)) / abs(a) ** (1.0 / m)
    if k % 2 == 1:
        # even monomial: both half lines add the same Fresnel phase
        return mag * complex(math.cos(math.pi / (2 * m)),
                             math.copysign(math.sin(math.pi / (2 * m)), a))
    # odd monomial: the half lines are conjugate, the result is real
    return complex(mag * math.cos(math.pi / (2 * m)), 0.0)


def gen_airy_zero(n):
    """A_n(0) in closed form."""
    n = _check_n(n)
    m = 2 * n + 1
    return ((m ** (1.0 / m)) / math.pi
            * gamma_fn((m + 1) / m) * math.cos(math.pi / (2 * m)))


def gen_airy_asymptotic_neg(n, y):
    """Leading stationary-phase form of A_n(y) for y <= -10."""
    n = _check_n(n)
    y = float(y)
    if not y <= -10.0:
        raise RangeError("asymptotic form is validated for y <= -10 only")
    t = -y
    m = n + 1
    amp = (2.0 / math.pi * gamma_fn((n + 2) / (n + 1))
           * m ** (1.0 / m) * 2.0 ** (-n / m) * t ** (-n / (2.0 * m)))
    phase = cn_const(n) * t ** (n + 0.5)
    if n % 2 == 1:
        osc = math.cos(phase - math.pi / (2 * m))
    else:
        osc = math.cos(math.pi / (2 * m)) * math.cos(phase)
    return amp * osc


def _phase_coeffs(n, y):
    c = np.zeros(2 * n + 2)
    for k in range(n + 1):
        c[2 * k + 1] = math.comb(n, k) * y ** (n - k) / (2 * k + 1)
    return c


def _solve_phase(coeffs, n, y, target, lo, hi):
    """Solve P(eta) = target on a bracket where P is monotone."""
    flo = _poly.polyval(lo, coeffs) - target
    fhi = _poly.polyval(hi, coeffs) - target
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise NumericError("phase bracket does not contain the target")
    x = 0.5 * (lo + hi)
    for _ in range(140):
        f = _poly.polyval(x, coeffs) - target
        if f * flo > 0.0:
            lo = x
        else:
            hi = x
        d = (y + x * x) ** n
        if d != 0.0:
            step = x - f / d
        else:
            step = 0.5 * (lo + hi)
        if not lo < step < hi:
            step = 0.5 * (lo + hi)
        if abs(f) < 1e-12 * (1.0 + abs(target)):
            return x
        x = step
    return x


def _segment_edges(n, y, phase_span):
    """Panel edges: pi-phase increments with a cut at the stationary point.

    The tail marching stops once the phase has advanced by phase_span past
    the stationary region; beyond that the analytic tail series takes over.
    """
    coeffs = _phase_coeffs(n, y)
    edges = [0.0]
    if y < 0.0:
        eta_s = math.sqrt(-y)
        p_s = _poly.polyval(eta_s, coeffs)
        sgn = 1.0 if p_s >= 0.0 else -1.0
        nfull = int(abs(p_s) / math.pi)
        for k in range(1, nfull + 1):
            edges.append(_solve_phase(coeffs, n, y, sgn * k * math.pi,
                                      edges[-1], eta_s))
        if eta_s > edges[-1]:
            edges.append(eta_s)
        base = p_s
        cur = eta_s
    else:
        base = 0.0
        cur = 0.0
    k = 0
    while k * math.pi < phase_span:
        k += 1
        target = base + k * math.pi
        d = (y + cur * cur) ** n
        # near the stationary point d underflows; cap the expansion step
        # and double it, the bracket only needs to contain the target
        step = min(math.pi / d, 1.0 + 0.5 * cur) if d > 0.0 else 1.0
        step = max(step, 1e-8)
        hi = cur + step
        while _poly.polyval(hi, coeffs) < target:
            step *= 2.0
            hi = cur + step
        cur = _solve_phase(coeffs, n, y, target, cur, hi)
        edges.append(cur)
    return np.array(edges)


def _refined_edges(edges, sub):
    frac = np.arange(sub) / sub
    inner = edges[:-1, None] + np.diff(edges)[:, None] * frac[None, :]
    return np.append(inner.ravel(), edges[-1])


def _segment_integrals(coeffs, edges, rule):
    gx, gw = rule
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = mid[:, None] + half[:, None] * gx[None, :]
    vals = np.cos(_poly.polyval(nodes, coeffs))
    return (vals @ gw) * half


def _ibp_tail(n, y, eta0, orders=10):
    """Analytic value of the integral of cos(phase) from eta0 to infinity.

    In the phase variable u the integrand is g(u) cos(u) with
    g = 1 / phase'(eta(u)), and repeated integration by parts gives
    Re sum_m i^(m + 1) g^(m)(u0) e^(i u0) plus a remainder bounded by the
    integral of |g^(orders)|.  Each u-derivative of g is an explicit
    polynomial over a power of (y + eta^2), so the boundary terms are exact.
    """
    base = np.array([y, 0.0, 1.0])
    coeffs = _phase_coeffs(n, y)
    phase = np.exp(1j * _poly.polyval(eta0, coeffs))
    base0 = y + eta0 * eta0
    poly = np.array([1.0])
    total = 0.0 + 0.0j
    g_last = 0.0
    for m in range(orders + 1):
        power = (m + 1) * n + m
        g_last = _poly.polyval(eta0, poly) * base0 ** (-power)
        if m == orders:
            break
        total += (1j, -1.0, -1j, 1.0)[m % 4] * g_last * phase
        poly = _poly.polysub(_poly.polymul(_poly.polyder(poly), base),
                             _poly.polymul(poly, [0.0, 2.0 * power]))
    remainder = abs(g_last) * (1.0 + _poly.polyval(eta0, coeffs) / orders)
    return float(total.real), abs(remainder)


def _quadrature(n, y):
    coeffs = _phase_coeffs(n, y)
    stat_phase = cn_const(n) * abs(y) ** (n + 0.5) if y < 0.0 else 0.0
    value = est = 0.0
    for phase_span, sub in ((110.0, 4), (320.0, 8)):
        edges = _refined_edges(_segment_edges(n, y, phase_span), sub)
        t16 = _segment_integrals(coeffs, edges, _GL16)
        t12 = _segment_integrals(coeffs, edges, _GL12)
        gl_diff = float(np.abs(t16 - t12).sum())
        tail, tail_err = _ibp_tail(n, y, float(edges[-1]))
        value = (float(t16.sum()) + tail) / math.pi
        floor = 5e-16 * (1.0 + stat_phase) + 5e-16 * float(np.abs(t16).sum())
        est = (tail_err + gl_diff + floor) / math.pi
        if est < 1e-11 * (1.0 + abs(value)):
            break
    return value, est


def _ray_quadrature(n, y):
    """Rotated-contour evaluation in arbitrary precision for y > 0."""
    m = 2 * n + 1
    phase = cn_const(n) * y ** (n + 0.5)
    dps = int(30 + phase / math.log(10) + 10)
    old = mp.mp.dps
    try:
        mp.mp.dps = dps
        rot = mp.expjpi(mp.mpf(1) / (2 * m))
        yy = mp.mpf(y)
        binom = [mp.binomial(n, k) for k in range(n + 1)]

        def integrand(rho):
            eta = rot * rho
            p = mp.mpc(0)
            for k in range(n + 1):
                p += binom[k] * yy ** (n - k) * eta ** (2 * k + 1) / (2 * k + 1)
            return mp.expj(p) * rot

        s0 = max(1.0, math.sqrt(y))
        val = mp.quad(integrand, [0, s0, 2 * s0, 4 * s0, mp.inf])
        result = float(mp.re(val) / mp.pi)
    finally:
        mp.mp.dps = old
    return result, abs(result) * 1e-18 + 1e-300


Y_ABS_MAX = 50.0


def gen_airy(n, y, method=None):
    """Evaluate A_n(y), dispatching on regime unless a method is forced."""
    n = _check_n(n)
    y = float(y)
    if not abs(y) <= Y_ABS_MAX:
        raise RangeError("y must lie in [-%g, %g]" % (Y_ABS_MAX, Y_ABS_MAX))
    if method is not None and method not in _METHODS:
        raise RangeError("unknown method %r" % (method,))
    if method is None:
        scaled = cn_const(n) * abs(y) ** (n + 0.5)
        if y < 0.0:
            method = (METHOD_ASYMP_NEG if scaled > _PHASE_QUAD_MAX
                      else METHOD_QUADRATURE)
        elif y > 0.0 and (scaled > _PHASE_RAY or y > _Y_RAY):
            method = METHOD_ASYMP_POS
        else:
            method = METHOD_QUADRATURE

    if method == METHOD_ZERO:
        if y != 0.0:
            raise RangeError("closed_form_zero is only valid at y = 0")
        return GenAiryResult(gen_airy_zero(n), n, METHOD_ZERO, 1e-16)
    if method == METHOD_ASYMP_NEG:
        value = gen_airy_asymptotic_neg(n, y)
        m = n + 1
        amp = (2.0 / math.pi * gamma_fn((n + 2) / (n + 1))
               * m ** (1.0 / m) * 2.0 ** (-n / m) * (-y) ** (-n / (2.0 * m)))
        phase = cn_const(n) * (-y) ** (n + 0.5)
        return GenAiryResult(value, n, METHOD_ASYMP_NEG, amp / max(phase, 1.0))
    if method == METHOD_ASYMP_POS:
        if not y > 0.0:
            raise RangeError("positive-side branch needs y > 0")
        if cn_const(n) * y ** (n + 0.5) > _PHASE_UNDERFLOW:
            return GenAiryResult(0.0, n, METHOD_ASYMP_POS, 1e-290)
        value, est = _ray_quadrature(n, y)
        return GenAiryResult(value, n, METHOD_ASYMP_POS, est)
    value, est = _quadrature(n, y)
    return GenAiryResult(value, n, METHOD_QUADRATURE, est)
