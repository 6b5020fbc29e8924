"""Crossing integral, the kappa coefficient, and the closed transfer matrix.

The off-diagonal coupling between the two channels is governed by an
oscillatory integral of a product of Airy functions taken across the
tangential crossing.  Its leading behaviour is kappa_n(lambda) times
h^(1/(2n+1)), where lambda rescales the energy to the natural window
width h^(2/(2n+1)).  This module evaluates the integral by adaptive
panel quadrature, evaluates kappa_n through the generalized Airy
function and through its closed form at lambda = 0, and assembles the
closed-form 2x2 transfer matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .airy import airy_eval
from .errors import NumericError, RangeError
from .genairy import gamma_fn, gen_airy
from .panels import build_breakpoints
from .potentials import langer_xi, turning_point

H_MIN = 1e-6
H_MAX = 1e-1

_GL16 = np.polynomial.legendre.leggauss(16)
_GL12 = np.polynomial.legendre.leggauss(12)
# forbidden-side cutoff for the Airy product: beyond xi h^(-2/3) = 45 on
# both factors the product is below e^(-180) of its peak
_FORBIDDEN_CUT = 45.0
_CHUNK = 16384


def epsilon_exponent(n):
    """Exponent defect in the remainder order, by contact order."""
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise RangeError("contact order must be a positive integer")
    if n == 1:
        return 0.0
    if n == 2:
        return 0.5
    return 3.0 / (4.0 * n + 3.0)


def signed_root(value, order):
    """Odd root with sign, sgn(value) |value|^(1/order)."""
    return math.copysign(abs(value) ** (1.0 / order), value)


@dataclass(frozen=True)
class SemiclassicalPoint:
    E: complex
    h: float
    n: int
    lam: float
    window: str


def semiclassical_point(E, h, n, L=1.0):
    """Classify an energy in the resonance window and attach lambda.

    The window is "small" when Re E is below L h^(4/(2n+1)), so lambda
    itself tends to zero, and "full" when Re E is within the natural
    width L h^(2/(2n+1)).  For n = 1 the two regimes coincide (both
    exponents give h^(2/3) up to the constant), so everything inside the
    window is classified as "full".
    """
    E = complex(E)
    h = float(h)
    if not 0.0 < h:
        raise RangeError("h must be positive")
    scale = h ** (2.0 / (2 * n + 1))
    if abs(E.imag) > L * h * (1.0 + 1e-12):
        raise RangeError("Im E exceeds the window height L h")
    if n >= 2 and abs(E.real) <= L * scale * scale:
        window = "small"
    elif abs(E.real) <= L * scale * (1.0 + 1e-12):
        window = "full"
    else:
        raise RangeError("Re E outside the window half-width L h^(2/(2n+1))")
    lam = E.real / scale
    return SemiclassicalPoint(E=E, h=h, n=int(n), lam=lam, window=window)


@dataclass(frozen=True)
class TransferMatrix:
    entries: np.ndarray
    provenance: str
    error_order: float


def kappa_n(crossing, r0_at_0, lam):
    """Width coefficient kappa_n(lambda) through the generalized Airy A_n."""
    order = 2 * crossing.n + 1
    q_root = signed_root(crossing.q_n, order)
    y = -(q_root * q_root) * lam / crossing.v0
    a_val = gen_airy(crossing.n, y)
    return (2.0 * math.pi * r0_at_0 / math.sqrt(crossing.v0)) \
        * a_val.value / q_root


def kappa_n_zero(crossing, r0_at_0):
    """Closed form of kappa_n at lambda = 0.

    Equivalent to kappa_n(crossing, r0_at_0, 0) through the closed value
    of A_n(0); the two routes must agree to 1e-10 relative.
    """
    n = crossing.n
    m = 2 * n + 1
    root = signed_root(crossing.q_n, m)
    factor = (float(m)) ** (1.0 / m) / root
    return 2.0 * r0_at_0 * factor * gamma_fn((m + 1.0) / m) \
        * math.cos(math.pi / (2.0 * m)) / math.sqrt(crossing.v0)


def _bisect_on_chart(chart, target, lo, hi):
    """x with xi(x) = target, xi increasing, bracketed by [lo, hi]."""
    flo = chart.xi_evaluator(lo)[0] - target
    fhi = chart.xi_evaluator(hi)[0] - target
    if flo * fhi > 0.0:
        return hi
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if (chart.xi_evaluator(mid)[0] - target) * flo <= 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def crossing_integral(model, interaction, E, h):
    """Oscillatory integral of the weighted Airy product across the crossing.

    I(E, h) = -(2 pi / h^(1/3)) integral of
        r0(x) (xi_1' xi_2')^(-1/2) Ai(h^(-2/3) xi_1) Ai(h^(-2/3) xi_2)
    over the interaction support, truncated on the forbidden side where
    both Airy factors have decayed below e^(-180) of their peak.
    """
    E = float(E)
    h = float(h)
    if not H_MIN <= h <= H_MAX:
        raise RangeError("h outside the validated range [%g, %g]" % (H_MIN, H_MAX))
    if abs(E) > model.e_max:
        raise RangeError("|E| exceeds the validated energy range")
    radius = interaction.support_radius
    chart1 = langer_xi(model, 1, E)
    chart2 = langer_xi(model, 2, E)
    h23 = h ** (2.0 / 3.0)

    x_lo = -radius
    cut = _FORBIDDEN_CUT * h23
    x_hi = radius
    if chart1.xi_evaluator(radius)[0] > cut and chart2.xi_evaluator(radius)[0] > cut:
        a_max = max(chart1.turning_point, chart2.turning_point)
        x_hi = max(_bisect_on_chart(chart1, cut, a_max, radius),
                   _bisect_on_chart(chart2, cut, a_max, radius))
    if x_hi <= x_lo:
        return 0.0

    def step(x):
        v1 = model.v(1, x)
        v2 = model.v(2, x)
        local = np.minimum(np.abs(E - v1), np.abs(E - v2))
        return 1.2 * h / np.sqrt(local + 2.25 * h23)

    forced = [x_lo, x_hi, 0.0]
    for a in (chart1.turning_point, chart2.turning_point):
        if x_lo < a < x_hi:
            forced.append(a)
    edges = build_breakpoints(x_lo, x_hi, step, forced)

    def integrand(xs):
        out = np.zeros_like(xs)
        for start in range(0, len(xs), _CHUNK):
            sl = slice(start, start + _CHUNK)
            x = xs[sl]
            xi1, xi1p = chart1.xi_evaluator(x)
            xi2, xi2p = chart2.xi_evaluator(x)
            ai1 = airy_eval(xi1 / h23).ai
            ai2 = airy_eval(xi2 / h23).ai
            out[sl] = interaction.r0(x) / np.sqrt(xi1p * xi2p) * ai1 * ai2
        return out

    def composite(edges_arr, rule):
        nodes, weights = rule
        half = 0.5 * np.diff(edges_arr)
        centers = edges_arr[:-1] + half
        xs = (centers[:, None] + half[:, None] * nodes[None, :]).ravel()
        vals = integrand(xs).reshape(len(half), len(nodes))
        return float(((vals @ weights) * half).sum())

    total = composite(edges, _GL16)
    estimate = abs(total - composite(edges, _GL12))
    tolerance = 1e-5 * abs(total) + 1e-13
    if estimate > tolerance:
        refined = np.append(
            (edges[:-1, None] + np.diff(edges)[:, None] * np.array([0.0, 0.5])).ravel(),
            edges[-1])
        refined_total = composite(refined, _GL16)
        estimate = abs(refined_total - total)
        total = refined_total
    prefactor = 2.0 * math.pi / h ** (1.0 / 3.0)
    value = -prefactor * total
    est_scaled = prefactor * estimate
    if est_scaled > 1e-4 * abs(value) + 1e-12:
        raise NumericError("crossing integral quadrature estimate %.3g "
                           "exceeds tolerance" % est_scaled)
    return value


def crossing_error_exponent(spoint):
    """Absolute-error exponent of the leading crossing-integral term."""
    n = spoint.n
    if spoint.window == "small":
        return min(2.0 / (2 * n + 1), 1.0 / 3.0)
    return (2.0 - epsilon_exponent(n)) / (2 * n + 1)


def crossing_integral_asymptotic(spoint, crossing, r0_at_0):
    """Leading term of the crossing integral in the declared window.

    The signed-root convention inside kappa_n makes kappa negative for
    odd contact order; the integral itself carries |q_n|^(-1/(2n+1)), so
    the leading term is -sgn(q_n) kappa_n(lambda) h^(1/(2n+1)).  The two
    agree for even n and the quadrature oracle fixes the odd case.
    """
    h = spoint.h
    n = spoint.n
    power = h ** (1.0 / (2 * n + 1))
    if spoint.window == "small":
        kappa = kappa_n_zero(crossing, r0_at_0)
    else:
        kappa = kappa_n(crossing, r0_at_0, spoint.lam)
    return -math.copysign(1.0, crossing.q_n) * kappa * power


def transfer_matrix_asymptotic(spoint, crossing, r0_at_0):
    """Closed-form transfer matrix: iT = Id - i kappa h^(1/(2n+1)) offdiag.

    The off-diagonal entry equals the leading crossing integral, so it
    carries the same sgn(q_n) factor as crossing_integral_asymptotic.
    """
    n = spoint.n
    h = spoint.h
    if spoint.window == "small":
        kappa = kappa_n_zero(crossing, r0_at_0)
    else:
        kappa = kappa_n(crossing, r0_at_0, spoint.lam)
    coupling = math.copysign(1.0, crossing.q_n) * kappa * h ** (1.0 / (2 * n + 1))
    i_t = np.array([[1.0, -1j * coupling], [-1j * coupling, 1.0]])
    return TransferMatrix(entries=-1j * i_t,
                          provenance="asymptotic_closed_form",
                          error_order=(2.0 - epsilon_exponent(n)) / (2 * n + 1))


_GL64 = np.polynomial.legendre.leggauss(64)


def wkb_phase_sigma(model, E, x):
    """WKB reduction data left of both turning points.

    phi is the difference of the two action phases measured from the
    respective turning points, sigma the shared amplitude weight
    (1/2) r0(x) [(E - V1)(E - V2)]^(-1/4).
    """
    E = float(E)
    x = float(x)
    a1 = turning_point(model, 1, E).real
    a2 = turning_point(model, 2, E).real
    if not (x < a1 and x < a2):
        raise RangeError("x must lie strictly left of both turning points")
    phases = []
    gx, gw = _GL64
    for j, a in ((1, a1), (2, a2)):
        # int_x^a sqrt(E - V_j) dt with t = a - s^2
        root = math.sqrt(a - x)
        half = 0.5 * root
        s = half * (gx + 1.0)
        ts = a - s * s
        vals = 2.0 * s * s * np.sqrt(np.maximum(E - model.v(j, ts), 0.0)
                                     / np.maximum(s * s, 1e-300))
        # integrand rewritten as 2 s^2 sqrt((E - V)/ (a - t)) via Q; for a
        # simple turning point (E - V)/(a - t) stays bounded and positive
        phases.append(float(half * (vals @ gw)))
    s1, s2 = phases
    phi = s2 - s1
    weight = (E - model.v(1, x)) * (E - model.v(2, x))
    if weight <= 0.0:
        raise RangeError("x is not in the common classically allowed region")
    sigma = 0.5 * model.interaction.r0(x) * weight ** (-0.25)
    return phi, sigma
