"""Quantization points of the closed channel and their resonance widths.

The well of the first potential carries a ladder of real quantization
points where cos(A(E) / 2h) vanishes.  Coupling to the open channel
pushes each one into the lower half plane by an amount governed by the
level parameter lambda = E h^{-2/(2n+1)} through the generalized Airy
factor; the closed width formula lives in the crossing module and is
cross-checked here against the oscillatory integral it summarizes.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .crossing import (
    epsilon_exponent,
    kappa_n,
    kappa_n_zero,
    crossing_integral,
    semiclassical_point,
)
from .errors import ModelError, NumericError, RangeError
from .potentials import action, detect_contact_order

_BS_RESIDUAL = 1e-10
_BOUNDARY_MARGIN = 2.0


@dataclass(frozen=True)
class ResonanceWindow:
    """Energy rectangle [-delta1, delta1] + i [-delta2, delta2]."""

    L: float
    delta1: float
    delta2: float
    h: float
    n: int

    def __post_init__(self):
        if not (self.delta1 > 0.0 and self.delta2 > 0.0):
            raise RangeError("window half-widths must be positive")
        if not 0.0 < self.h:
            raise RangeError("h must be positive")


def resonance_window(n, h, L=1.0, small=False, delta1=None):
    """Window with the natural half-width L h^{2/(2n+1)}.

    small=True shrinks the real half-width to L h^{4/(2n+1)}, where the
    width formula freezes at lambda = 0; pass delta1 to override it with
    any smaller value.
    """
    n = int(n)
    if n < 1:
        raise RangeError("contact order must be a positive integer")
    h = float(h)
    L = float(L)
    if not 0.0 < h:
        raise RangeError("h must be positive")
    if L <= 0.0:
        raise RangeError("L must be positive")
    if delta1 is None:
        exponent = 4.0 / (2 * n + 1) if small else 2.0 / (2 * n + 1)
        delta1 = L * h ** exponent
    return ResonanceWindow(L=L, delta1=float(delta1), delta2=L * h,
                           h=h, n=n)


@dataclass(frozen=True)
class ResonancePrediction:
    """One predicted resonance and its declared remainder orders."""

    E_bs: float
    z: complex
    width_leading: float
    error_exponent_re: float
    error_exponent_im: float


def bohr_sommerfeld_points(model, window):
    """All roots of A(E) = (2k+1) pi h in [-delta1, delta1], ascending.

    The action is strictly increasing on the window, so each admissible
    odd multiple of pi h is bracketed once and polished with the
    analytic derivative.  An interval containing no root gives an empty
    list.
    """
    h = float(window.h)
    lo, hi = -window.delta1, window.delta1
    a_lo, _ = action(model, lo)
    a_hi, _ = action(model, hi)
    if a_hi <= a_lo:
        raise NumericError("action is not increasing across the window")
    k_min = math.ceil((a_lo / (math.pi * h) - 1.0) / 2.0 - 1e-12)
    k_max = math.floor((a_hi / (math.pi * h) - 1.0) / 2.0 + 1e-12)
    points = []
    for k in range(k_min, k_max + 1):
        target = (2 * k + 1) * math.pi * h
        if not a_lo <= target <= a_hi:
            continue
        root = brentq(lambda x: action(model, x)[0] - target, lo, hi,
                      xtol=1e-15, rtol=4.0 * np.finfo(float).eps)
        val, der = action(model, root)
        root -= (val - target) / der
        residual = abs(math.cos(action(model, root)[0] / (2.0 * h)))
        if residual >= _BS_RESIDUAL:
            raise NumericError(
                "quantization residual %.3e at E=%.8g exceeds %g"
                % (residual, root, _BS_RESIDUAL))
        points.append(float(root))
    return points


def _predict_one(model, crossing, r0_at_0, window, e_bs):
    h = window.h
    n = window.n
    point = semiclassical_point(complex(e_bs), h, n, window.L)
    if point.window == "small":
        kappa = kappa_n_zero(crossing, r0_at_0)
    else:
        kappa = kappa_n(crossing, r0_at_0, point.lam)
    _, a_der = action(model, e_bs)
    width = kappa * kappa / a_der * h ** ((2 * n + 3.0) / (2 * n + 1))
    exponent_im = (2 * n + 4.0) / (2 * n + 1)
    if point.window == "full":
        exponent_im = (2 * n + 4.0 - epsilon_exponent(n)) / (2 * n + 1)
    prediction = ResonancePrediction(
        E_bs=float(e_bs),
        z=complex(e_bs, -width),
        width_leading=float(width),
        error_exponent_re=(2 * n + 3.0) / (2 * n + 1),
        error_exponent_im=float(exponent_im))
    extras = {
        "lambda": float(point.lam),
        "kappa": float(kappa),
        "window": point.window,
        "boundary_flag": bool(
            abs(abs(e_bs) - window.delta1) <= _BOUNDARY_MARGIN * h),
    }
    return prediction, extras


def _checked_crossing(model, window):
    crossing = detect_contact_order(model)
    if crossing.n != window.n:
        raise ModelError(
            "window is built for contact order %d but the model has "
            "order %d" % (window.n, crossing.n))
    return crossing


def predict_resonances(model, interaction, window):
    """One prediction per quantization point in the window.

    The real part stays at the quantization point; no computable
    correction is available at its declared order, so the shift is
    carried as metadata only.  The imaginary part is the leading width
    with the lambda-frozen coefficient in the small-window regime.
    """
    crossing = _checked_crossing(model, window)
    r0_at_0 = float(interaction.r0(0.0))
    return [
        _predict_one(model, crossing, r0_at_0, window, e)[0]
        for e in bohr_sommerfeld_points(model, window)
    ]


def prediction_rows(model, interaction, window):
    """Predictions as flat dict rows for tables and serialization.

    Points within two h of the window edge get boundary_flag set; the
    prediction map is not trustworthy there.
    """
    crossing = _checked_crossing(model, window)
    r0_at_0 = float(interaction.r0(0.0))
    rows = []
    for e in bohr_sommerfeld_points(model, window):
        prediction, extras = _predict_one(model, crossing, r0_at_0,
                                          window, e)
        rows.append({
            "E_bs": prediction.E_bs,
            "re_z": prediction.z.real,
            "im_z": prediction.z.imag,
            "lambda": extras["lambda"],
            "kappa": extras["kappa"],
            "window": extras["window"],
            "boundary_flag": extras["boundary_flag"],
            "error_exponent_re": prediction.error_exponent_re,
            "error_exponent_im": prediction.error_exponent_im,
        })
    return rows


def width_consistency_check(model, interaction, window, h_grid,
                            integrals=None):
    """Compare the closed width coefficient with its integral route.

    At E = 0 the oscillatory crossing integral reduces to the width
    coefficient times -sgn(q_n) h^{1/(2n+1)}; inverting that relation
    at each h of the grid gives an extracted coefficient whose relative
    gap against the closed form must shrink as h does.  integrals may
    carry precomputed values of the crossing integral keyed by h.
    """
    crossing = _checked_crossing(model, window)
    r0_at_0 = float(interaction.r0(0.0))
    kappa_closed = kappa_n_zero(crossing, r0_at_0)
    if kappa_closed == 0.0:
        raise ModelError("closed width coefficient vanishes; the gap "
                         "is not defined")
    m = 2 * crossing.n + 1
    sign = math.copysign(1.0, crossing.q_n)
    rows = []
    fitted = []
    for h in h_grid:
        h = float(h)
        row = {"h": h, "kappa_closed": kappa_closed}
        try:
            if integrals is not None and h in integrals:
                integral = integrals[h]
            else:
                integral = crossing_integral(model, interaction, 0.0, h)
            extracted = -sign * float(integral) / h ** (1.0 / m)
            gap = abs(extracted - kappa_closed) / abs(kappa_closed)
            row.update(kappa_extracted=extracted, gap=gap, status="ok")
            fitted.append((h, gap))
        except (RangeError, NumericError) as exc:
            row.update(kappa_extracted=math.nan, gap=math.nan,
                       status=str(exc))
        rows.append(row)
    slope = math.nan
    if len(fitted) >= 2 and all(g > 0.0 for _, g in fitted):
        hs, gaps = zip(*fitted)
        slope = float(np.polyfit(np.log(hs), np.log(gaps), 1)[0])
    ordered = sorted(fitted, key=lambda item: -item[0])
    decreasing = len(fitted) == len(rows) and all(
        later <= earlier
        for (_, earlier), (_, later) in zip(ordered[:-1], ordered[1:]))
    return {
        "rows": rows,
        "kappa_closed": kappa_closed,
        "slope": slope,
        "gap_decreasing": decreasing,
    }
