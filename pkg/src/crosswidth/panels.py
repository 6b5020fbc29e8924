"""Piecewise Chebyshev representation of functions on an interval.

Functions are stored as their values at Chebyshev-Lobatto nodes on a
sequence of panels.  Integration, cumulative integrals anchored at either
end, differentiation and interpolation all go through the per-panel
Chebyshev coefficients, so they stay spectrally accurate as long as the
panels resolve the function.

Cumulative integrals anchored at the right end are built from per-panel
right-anchored pieces plus a suffix sum of panel totals.  They are never
formed as "total minus prefix": when the integrand decays exponentially to
the right, that subtraction would destroy the relative accuracy of the
small tail values.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import chebyshev as _cheb

from .errors import NumericError

MAX_PANELS = 60000

_BASIS_CACHE: dict[int, dict] = {}


def _basis(degree):
    """Reference-interval operators for one panel, cached per degree."""
    cached = _BASIS_CACHE.get(degree)
    if cached is not None:
        return cached
    n = degree
    k = np.arange(n + 1)
    ref = -np.cos(k * np.pi / n)  # ascending nodes in [-1, 1]
    ref[0] = -1.0
    ref[-1] = 1.0
    vander = _cheb.chebvander(ref, n)
    to_coeffs = np.linalg.inv(vander)
    # evaluation of a degree n+1 series (an antiderivative) at the nodes
    vander_int = _cheb.chebvander(ref, n + 1)
    e_minus = (-1.0) ** np.arange(n + 2)
    e_plus = np.ones(n + 2)
    vander_der = _cheb.chebvander(ref, max(n - 1, 0))
    bary_w = np.where(k % 2 == 0, 1.0, -1.0)
    bary_w[0] *= 0.5
    bary_w[-1] *= 0.5
    cached = {
        "ref": ref,
        "to_coeffs": to_coeffs,
        "vander_int": vander_int,
        "e_minus": e_minus,
        "e_plus": e_plus,
        "vander_der": vander_der,
        "bary_w": bary_w,
    }
    _BASIS_CACHE[degree] = cached
    return cached


def build_breakpoints(lo, hi, step_fn, forced=(), max_panels=MAX_PANELS):
    """March from lo to hi with local panel length step_fn(x).

    Every point of `forced` that falls inside (lo, hi) becomes a panel
    edge exactly.  The last panel before each forced point is merged with
    its neighbour when it would otherwise be a sliver.
    """
    lo = float(lo)
    hi = float(hi)
    if not hi > lo:
        raise ValueError("empty interval")
    targets = sorted({float(t) for t in forced if lo < t < hi} | {hi})
    pts = [lo]
    cur = lo
    floor = (hi - lo) * 1e-12
    for tgt in targets:
        while cur < tgt:
            dx = float(step_fn(cur))
            if not dx > 0.0:
                raise ValueError("step_fn must return positive lengths")
            dx = max(dx, floor)
            rem = tgt - cur
            if rem <= 1.5 * dx:
                cur = tgt
            else:
                cur = cur + dx
            pts.append(cur)
            if len(pts) > max_panels:
                raise NumericError(
                    "panel budget exceeded (%d panels); "
                    "parameters are outside the validated range" % max_panels
                )
        cur = tgt
    return np.array(pts)


class PanelGrid:
    """Chebyshev-Lobatto nodes on a fixed sequence of panels."""

    def __init__(self, breakpoints, degree=16):
        breaks = np.asarray(breakpoints, dtype=float)
        if breaks.ndim != 1 or breaks.size < 2:
            raise ValueError("need at least two breakpoints")
        if not np.all(np.diff(breaks) > 0):
            raise ValueError("breakpoints must be strictly increasing")
        if degree < 4:
            raise ValueError("degree must be at least 4")
        self.breaks = breaks
        self.degree = int(degree)
        self.npanels = breaks.size - 1
        self._b = _basis(self.degree)
        self.half = 0.5 * np.diff(breaks)
        self.mid = 0.5 * (breaks[:-1] + breaks[1:])
        # nodes, shape (npanels, degree + 1), ascending along both axes
        self.x = self.mid[:, None] + self.half[:, None] * self._b["ref"][None, :]
        self.x[:, 0] = breaks[:-1]
        self.x[:, -1] = breaks[1:]

    @property
    def a(self):
        return self.breaks[0]

    @property
    def b(self):
        return self.breaks[-1]

    def sample(self, fn):
        return np.asarray(fn(self.x))

    def zeros(self, dtype=float):
        return np.zeros_like(self.x, dtype=dtype)

    def _check(self, vals):
        vals = np.asarray(vals)
        if vals.shape != self.x.shape:
            raise ValueError("values have shape %s, grid needs %s"
                             % (vals.shape, self.x.shape))
        return vals

    def coeffs(self, vals):
        vals = self._check(vals)
        return vals @ self._b["to_coeffs"].T

    def panel_totals(self, vals):
        ci = _cheb.chebint(self.coeffs(vals), axis=1)
        span = ci @ (self._b["e_plus"] - self._b["e_minus"])
        return self.half * span

    def integral(self, vals):
        return self.panel_totals(vals).sum()

    def integral_tail_estimate(self, vals):
        """Crude spectral error estimate for integral(vals)."""
        c = self.coeffs(vals)
        tail = np.abs(c[:, -2:]).sum(axis=1)
        return 2.0 * float(np.sum(self.half * tail))

    def cumulative_left(self, vals):
        """F(x) = integral from the grid's left end to x, at every node."""
        ci = _cheb.chebint(self.coeffs(vals), axis=1)
        at_nodes = ci @ self._b["vander_int"].T
        at_left = ci @ self._b["e_minus"]
        local = self.half[:, None] * (at_nodes - at_left[:, None])
        totals = self.half * (ci @ (self._b["e_plus"] - self._b["e_minus"]))
        offsets = np.concatenate([[0.0], np.cumsum(totals)[:-1]])
        return offsets[:, None] + local

    def cumulative_right(self, vals):
        """F(x) = integral from x to the grid's right end, at every node."""
        ci = _cheb.chebint(self.coeffs(vals), axis=1)
        at_nodes = ci @ self._b["vander_int"].T
        at_right = ci @ self._b["e_plus"]
        local = self.half[:, None] * (at_right[:, None] - at_nodes)
        totals = self.half * (ci @ (self._b["e_plus"] - self._b["e_minus"]))
        rev = np.cumsum(totals[::-1])[::-1]
        offsets = np.concatenate([rev[1:], [0.0]])
        return offsets[:, None] + local

    def derivative(self, vals):
        cd = _cheb.chebder(self.coeffs(vals), axis=1)
        return (cd @ self._b["vander_der"].T) / self.half[:, None]

    def panel_of(self, x):
        idx = np.searchsorted(self.breaks, x, side="right") - 1
        return np.clip(idx, 0, self.npanels - 1)

    def interpolate(self, vals, x):
        """Barycentric evaluation of the panel representation at points x."""
        vals = self._check(vals)
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        xf = np.atleast_1d(x).ravel()
        idx = self.panel_of(xf)
        out = np.empty(xf.shape, dtype=vals.dtype)
        w = self._b["bary_w"]
        ref = self._b["ref"]
        for p in np.unique(idx):
            sel = idx == p
            u = (xf[sel] - self.mid[p]) / self.half[p]
            diff = u[:, None] - ref[None, :]
            hit = np.abs(diff) < 1e-14
            diff = np.where(hit, 1.0, diff)
            q = w[None, :] / diff
            num = q @ vals[p]
            den = q.sum(axis=1)
            res = num / den
            exact = hit.any(axis=1)
            if exact.any():
                res[exact] = vals[p][hit.argmax(axis=1)[exact]]
            out[sel] = res
        if scalar:
            return out[0]
        return out.reshape(np.atleast_1d(x).shape)
