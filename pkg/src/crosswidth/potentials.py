"""Potential models for a tangential level crossing at the origin.

A model is a pair of real polynomials V1, V2 with V1(0) = V2(0) = 0 that
cross tangentially at x = 0 with finite contact order, plus a smooth
compactly supported interaction profile.  V1 has a second zero at b0 < 0
so that it forms a well over [b0, 0] at small positive energies.  This
module validates the structural assumptions, extracts the crossing
invariants, and computes classical quantities: turning points, the
Langer variable xi with xi * xi'^2 = V - E, and the action integral of
the V1 well together with its energy derivative.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Tuple

import numpy as np
from numpy.polynomial import polynomial as _poly

from .errors import ModelError, NumericError, RangeError

N_CONTACT_MAX = 6
_GRID_POINTS = 10_000
_GL64 = np.polynomial.legendre.leggauss(64)

SHIPPED_MODELS = ("contact1", "contact2", "contact3")


@dataclass(frozen=True)
class Interaction:
    """Smooth bump-profile coefficients of the off-diagonal coupling.

    r0(x) = r0_amplitude * exp(u / (u - 1)) with u = (x / support_radius)^2
    for |x| < support_radius and 0 beyond; r1 uses the same profile.
    """

    r0_amplitude: float
    r1_amplitude: float
    support_radius: float

    def _bump(self, x):
        x = np.asarray(x, dtype=float)
        u = (x / self.support_radius) ** 2
        out = np.zeros_like(u)
        inside = u < 1.0
        ui = u[inside]
        out[inside] = np.exp(ui / (ui - 1.0))
        return out

    def _bump_prime(self, x):
        x = np.asarray(x, dtype=float)
        u = (x / self.support_radius) ** 2
        out = np.zeros_like(u)
        inside = u < 1.0
        ui = u[inside]
        xi = x[inside]
        r2 = self.support_radius ** 2
        out[inside] = -np.exp(ui / (ui - 1.0)) * 2.0 * xi / (r2 * (ui - 1.0) ** 2)
        return out

    def r0(self, x):
        return self.r0_amplitude * self._bump(x)

    def r0_prime(self, x):
        return self.r0_amplitude * self._bump_prime(x)

    def r1(self, x):
        return self.r1_amplitude * self._bump(x)

    def r1_prime(self, x):
        return self.r1_amplitude * self._bump_prime(x)


@dataclass(frozen=True)
class PotentialModel:
    v1_coeffs: Tuple[float, ...]
    v2_coeffs: Tuple[float, ...]
    b0: float
    domain: Tuple[float, float]
    e_max: float
    interaction: Interaction

    def __post_init__(self):
        object.__setattr__(self, "v1_coeffs", tuple(float(c) for c in self.v1_coeffs))
        object.__setattr__(self, "v2_coeffs", tuple(float(c) for c in self.v2_coeffs))
        object.__setattr__(self, "domain", (float(self.domain[0]), float(self.domain[1])))
        _validate_model(self)

    def v(self, j, x):
        return _poly.polyval(np.asarray(x, dtype=float), self._coeffs(j))

    def v_prime(self, j, x):
        return _poly.polyval(np.asarray(x, dtype=float), _poly.polyder(self._coeffs(j)))

    def _coeffs(self, j):
        if j == 1:
            return np.array(self.v1_coeffs)
        if j == 2:
            return np.array(self.v2_coeffs)
        raise RangeError("potential index must be 1 or 2")


def _deflate_at_root(coeffs, root, scale):
    """Divide a polynomial by (x - root), requiring a tiny remainder."""
    coeffs = np.asarray(coeffs, dtype=float)
    quotient = np.zeros(len(coeffs) - 1)
    carry = 0.0
    for k in range(len(coeffs) - 1, 0, -1):
        carry = coeffs[k] + root * carry
        quotient[k - 1] = carry
    remainder = coeffs[0] + root * carry
    if abs(remainder) > 1e-12 * scale:
        raise ModelError("potential does not vanish where the model requires "
                         "a zero (remainder %.3g at x = %g)" % (remainder, root))
    return quotient


def _validate_model(model):
    lo, hi = model.domain
    if not lo < hi:
        raise ModelError("domain must be a nonempty interval")
    if not model.b0 < 0.0:
        raise ModelError("b0 must be negative")
    if not (lo < model.b0 and 0.0 < hi):
        raise ModelError("domain must contain [b0, 0] in its interior")
    if not model.e_max > 0.0:
        raise ModelError("e_max must be positive")
    if not 0.0 < model.interaction.support_radius < hi:
        raise ModelError("interaction support must sit inside the domain")

    c1 = np.array(model.v1_coeffs)
    c2 = np.array(model.v2_coeffs)
    scale = max(1.0, np.abs(c1).max(), np.abs(c2).max())
    if len(c1) < 2 or len(c2) < 2:
        raise ModelError("potentials must be nonconstant")
    if model.v_prime(1, 0.0) <= 0.0 or model.v_prime(2, 0.0) <= 0.0:
        raise ModelError("both potentials must have positive slope at 0")

    # sign conditions: V1 / (x (x - b0)) > 0 and V2 / x > 0, via exact
    # deflation so the grid check never divides by a near-zero factor
    w1 = _deflate_at_root(_deflate_at_root(c1, 0.0, scale), model.b0, scale)
    w2 = _deflate_at_root(c2, 0.0, scale)
    grid = np.linspace(lo, hi, _GRID_POINTS)
    if not np.all(_poly.polyval(grid, w1) > 0.0):
        raise ModelError("V1 / (x (x - b0)) must stay positive on the domain")
    if not np.all(_poly.polyval(grid, w2) > 0.0):
        raise ModelError("V2 / x must stay positive on the domain")
    neg = grid[grid < 0.0]
    length = max(len(c1), len(c2))
    if not np.all(_poly.polyval(neg, _pad_to(c1, length) - _pad_to(c2, length)) > 0.0):
        raise ModelError("V2 must stay below V1 for x < 0")


def _pad_to(coeffs, length):
    coeffs = np.asarray(coeffs, dtype=float)
    if len(coeffs) >= length:
        return coeffs
    return np.concatenate([coeffs, np.zeros(length - len(coeffs))])


@dataclass(frozen=True)
class CrossingData:
    n: int
    q_n: float
    v0: float
    bracket_2n: float


def detect_contact_order(model):
    """Contact order and crossing invariants from exact coefficients."""
    c1 = np.array(model.v1_coeffs)
    c2 = np.array(model.v2_coeffs)
    length = max(len(c1), len(c2))
    diff = _pad_to(c1, length) - _pad_to(c2, length)
    scale = max(1.0, np.abs(c1).max(), np.abs(c2).max())
    n = None
    for k in range(1, length):
        if abs(diff[k]) > 1e-12 * scale:
            n = k
            break
    if n is None:
        raise ModelError("potentials agree to the truncation degree; the "
                         "contact order must be finite")
    if n > N_CONTACT_MAX:
        raise ModelError("contact order %d exceeds the supported cap %d"
                         % (n, N_CONTACT_MAX))
    d_n = float(diff[n])
    v0 = math.sqrt(float(model.v_prime(1, 0.0)) * float(model.v_prime(2, 0.0)))
    q_n = d_n / math.sqrt(v0)
    if q_n * (-1.0) ** n <= 0.0:
        raise ModelError("sign of the leading coefficient of V1 - V2 is "
                         "incompatible with V2 < V1 on x < 0")
    bracket = (-1.0) ** (n + 1) * math.factorial(2 * n) \
        * float(model.v_prime(1, 0.0)) ** n * d_n
    # consistency between the bracket and the normalized coefficient q_n
    recon = math.factorial(2 * n) * float(model.v_prime(1, 0.0)) ** n \
        * abs(q_n) * math.sqrt(v0)
    if abs(abs(bracket) - recon) > 1e-12 * max(1.0, recon):
        raise NumericError("crossing invariants disagree between routes")
    return CrossingData(n=n, q_n=q_n, v0=v0, bracket_2n=bracket)


def turning_point(model, j, energy):
    """Root of V_j = E nearest the origin, Newton-polished."""
    energy = complex(energy)
    if abs(energy) > model.e_max:
        raise RangeError("|E| exceeds the validated energy range")
    coeffs = model._coeffs(j).astype(complex)
    coeffs[0] -= energy
    roots = _poly.polyroots(coeffs)
    order = np.argsort(np.abs(roots))
    a = roots[order[0]]
    if len(roots) > 1 and not abs(a) < 0.5 * abs(roots[order[1]]):
        raise RangeError("turning point is not isolated near the origin")
    der = _poly.polyder(coeffs)
    for _ in range(50):
        step = _poly.polyval(a, coeffs) / _poly.polyval(a, der)
        a -= step
        if abs(step) < 1e-16 * (1.0 + abs(a)):
            break
    residual = abs(_poly.polyval(a, coeffs))
    if residual > 1e-13 * max(1.0, abs(_poly.polyval(a, der))):
        raise NumericError("turning point refinement stalled "
                           "(residual %.3g)" % residual)
    if abs(energy.imag) == 0.0:
        a = complex(a.real, 0.0)
    return complex(a)


@dataclass(frozen=True)
class LangerChart:
    """Turning-point chart for one potential at one real energy.

    xi_evaluator maps x (scalar or array) to (xi, xi_prime); the extra
    second-derivative channel is exposed separately because only the
    ODE seeds need it.
    """

    which: int
    energy: float
    turning_point: float
    xi_evaluator: Callable
    xi_second: Callable
    valid_interval: Tuple[float, float]


def langer_xi(model, j, energy):
    """Langer variable xi with sgn(xi) = sgn(x - a) and xi xi'^2 = V - E."""
    energy = float(energy)
    a = turning_point(model, j, energy).real
    coeffs = model._coeffs(j)
    # Q(delta) = (V(a + delta) - E) / delta, exact by Taylor shift
    shifted = _shift_poly(coeffs, a)
    shifted[0] -= energy
    q_coeffs = shifted[1:]
    q0 = float(q_coeffs[0])
    if q0 <= 0.0:
        raise ModelError("turning point is not simple")
    # the chart ends where Q has a real root (the next turning point)
    q_roots = _poly.polyroots(q_coeffs.astype(complex))
    real = q_roots[np.abs(q_roots.imag) < 1e-9].real
    left = max((r for r in real if r < 0.0), default=-np.inf)
    right = min((r for r in real if r > 0.0), default=np.inf)
    lo, hi = model.domain
    valid = (max(float(left) * 0.999, lo - a), min(float(right) * 0.999, hi - a))

    a1 = float(q_coeffs[1]) / q0 if len(q_coeffs) > 1 else 0.0
    a2 = float(q_coeffs[2]) / q0 if len(q_coeffs) > 2 else 0.0
    c1 = q0 ** (1.0 / 3.0)
    c2 = c1 * a1 / 5.0
    c3 = c1 * (a2 / 7.0 - 8.0 * a1 * a1 / 175.0)
    taylor_radius = 1e-4 * max(1.0, -valid[0], valid[1])

    gx, gw = _GL64

    def _phase_integral(delta):
        # S(|delta|) = 2 int_0^sqrt|delta| s^2 sqrt(Q(sgn * s^2)) ds
        sign = np.sign(delta)
        root = np.sqrt(np.abs(delta))
        half = 0.5 * root
        nodes = half[..., None] * (gx + 1.0)
        qv = _poly.polyval(sign[..., None] * nodes ** 2, q_coeffs)
        if np.any(qv <= 0.0):
            raise NumericError("lost positivity of the deflated potential "
                               "inside the chart")
        vals = nodes ** 2 * np.sqrt(qv)
        return 2.0 * half * (vals @ gw)

    def evaluate(x, second=False):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        delta = np.atleast_1d(x - a)
        if np.any(delta < valid[0] - 1e-12) or np.any(delta > valid[1] + 1e-12):
            raise RangeError("x leaves the turning-point chart")
        xi = np.empty_like(delta)
        xi_p = np.empty_like(delta)
        xi_pp = np.empty_like(delta)
        near = np.abs(delta) < taylor_radius
        if near.any():
            d = delta[near]
            xi[near] = d * (c1 + d * (c2 + d * c3))
            xi_p[near] = c1 + d * (2.0 * c2 + d * 3.0 * c3)
            xi_pp[near] = 2.0 * c2 + 6.0 * c3 * d
        far = ~near
        if far.any():
            d = delta[far]
            s = _phase_integral(d)
            xi_f = np.sign(d) * (1.5 * s) ** (2.0 / 3.0)
            v_minus_e = d * _poly.polyval(d, q_coeffs)
            xi_pf = np.sqrt(v_minus_e / xi_f)
            vp = _poly.polyval(d + a, _poly.polyder(coeffs))
            xi[far] = xi_f
            xi_p[far] = xi_pf
            xi_pp[far] = (vp - xi_pf ** 3) / (2.0 * xi_f * xi_pf)
        if second:
            out = (xi, xi_p, xi_pp)
        else:
            out = (xi, xi_p)
        if scalar:
            return tuple(float(v[0]) for v in out)
        return out

    return LangerChart(
        which=j,
        energy=energy,
        turning_point=a,
        xi_evaluator=lambda x: evaluate(x, second=False),
        xi_second=lambda x: evaluate(x, second=True),
        valid_interval=(a + valid[0], a + valid[1]),
    )


def _shift_poly(coeffs, a):
    """Coefficients of p(a + delta) as a polynomial in delta."""
    coeffs = np.asarray(coeffs, dtype=float)
    out = np.zeros(1)
    for c in coeffs[::-1]:
        out = _poly.polyadd(_poly.polymul(out, [a, 1.0]), [c])
    return _pad_to(out, len(coeffs))


def action(model, energy):
    """Action of the V1 well at energy E and its derivative dA/dE.

    E - V1 is deflated by both simple turning points and the remaining
    factor is integrated over a half circle, which removes the
    square-root endpoints exactly.
    """
    energy = float(energy)
    if energy > model.e_max:
        raise RangeError("E exceeds the validated energy range")
    coeffs = model._coeffs(1).astype(complex)
    coeffs[0] -= energy
    roots = _poly.polyroots(coeffs)
    real = np.sort(roots[np.abs(roots.imag) < 1e-9 * (1.0 + np.abs(roots.real))].real)
    lo, hi = model.domain
    real = [r for r in real if lo < r < hi]
    # the well is the sublevel component of {V1 < E} meeting (b0, 0)
    pair = None
    for b, aa in zip(real[:-1], real[1:]):
        mid = 0.5 * (b + aa)
        if model.v(1, mid) < energy and aa > model.b0 and b < 0.0:
            pair = (b, aa)
            break
    if pair is None:
        raise RangeError("energy does not cut a two-turning-point well")
    b, aa = pair
    if aa - b < 1e-8:
        raise RangeError("turning points of the well have merged")
    # V1 - E = (x - a)(x - b) H  =>  E - V1 = (a - x)(x - b) H with H > 0
    # between the turning points
    scale = max(1.0, float(np.abs(coeffs.real).max()))
    quo = _deflate_at_root(coeffs.real, aa, 1e3 * scale)
    h_coeffs = _deflate_at_root(quo, b, 1e3 * scale)
    gx, gw = _GL64
    theta = 0.5 * math.pi * gx
    w = 0.5 * math.pi * gw
    center = 0.5 * (aa + b)
    radius = 0.5 * (aa - b)
    xs = center + radius * np.sin(theta)
    hv = _poly.polyval(xs, h_coeffs)
    if np.any(hv <= 0.0):
        raise NumericError("well factor lost positivity between the "
                           "turning points")
    sqrt_h = np.sqrt(hv)
    act = 2.0 * radius ** 2 * float((np.cos(theta) ** 2 * sqrt_h) @ w)
    act_deriv = float((1.0 / sqrt_h) @ w)
    return act, act_deriv


def _model_from_dict(data):
    inter = data.get("interaction", {})
    return PotentialModel(
        v1_coeffs=tuple(data["v1_coeffs"]),
        v2_coeffs=tuple(data["v2_coeffs"]),
        b0=float(data["b0"]),
        domain=tuple(data["domain"]),
        e_max=float(data.get("e_max", 0.35)),
        interaction=Interaction(
            r0_amplitude=float(inter.get("r0_amplitude", 1.0)),
            r1_amplitude=float(inter.get("r1_amplitude", 0.0)),
            support_radius=float(inter.get("support_radius", 0.08)),
        ),
    )


def load_model(path):
    """Load a model description from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelError("model file is not valid JSON: %s" % exc) from exc
    return _model_from_dict(data)


def get_model(name):
    """Load one of the shipped example models by name."""
    if name not in SHIPPED_MODELS:
        raise ModelError("unknown model %r; shipped models: %s"
                         % (name, ", ".join(SHIPPED_MODELS)))
    ref = resources.files(__package__) / "models" / (name + ".json")
    return _model_from_dict(json.loads(ref.read_text(encoding="utf-8")))
