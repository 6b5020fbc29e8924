"""Finite-h transfer matrix for the coupled two-channel equation.

The scalar building blocks are honest solutions of the single-channel
equation -h^2 u'' + (V_j - E) u = 0, launched from uniform turning-point
(Airy) data and integrated with a high-order Runge-Kutta method, sampled
on piecewise Chebyshev grids.  The coupled system is then solved by a
Neumann series of Volterra kernel applications, the coupling strengths
between the channels are quadratures of the iterates, and the transfer
matrix follows from matching the decaying solutions of the right half
line against the outgoing and incoming family of the left half line at
x = 0.

Everything in this module is a finite-h measurement with controlled
numerics; the asymptotic formulas in the crossing module are judged
against these numbers, not the other way around.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from .airy import airy_eval
from .crossing import TransferMatrix
from .errors import NumericError, RangeError
from .panels import PanelGrid, build_breakpoints
from .potentials import LangerChart, langer_xi

# Grid extent: this many h^(2/3) beyond each turning point and this
# factor beyond the interaction support.
_TURN_MARGIN = 11.0
_SUPPORT_MARGIN = 1.1
# One-sided action over h beyond which the growing basis member
# overflows a double.
_ACTION_CAP = 600.0
_ODE_RTOL = 1e-12
_ODE_ATOL = 1e-280
_DRIFT_LIMIT = 1e-6
_NEUMANN_MAX = 12
_NEUMANN_TOL = 1e-12
_TAIL_LIMIT = 1e-10
_CONTRACTION_LIMIT = 0.5
_COND_LIMIT = 1e8
_ROUTE_LIMIT = 1e-5

_ROT = complex(math.sqrt(0.5), math.sqrt(0.5))  # exp(i pi / 4)

P_SEEDS = ("minus1", "minus2")
A_SEEDS = ("out1", "inc1", "out2", "inc2")


@dataclass
class GridFunction:
    """Complex samples of a function, and optionally its derivative, at
    the nodes of one panel grid."""

    grid: PanelGrid
    values: np.ndarray
    derivs: Optional[np.ndarray] = None

    def norm(self):
        return float(np.max(np.abs(self.values)))

    def at_left(self):
        return complex(self.values[0, 0]), complex(self.derivs[0, 0])

    def at_right(self):
        return complex(self.values[-1, -1]), complex(self.derivs[-1, -1])


def _gf_zero(grid):
    return GridFunction(grid, grid.zeros(complex), grid.zeros(complex))


def _gf_add(a, b):
    return GridFunction(a.grid, a.values + b.values, a.derivs + b.derivs)


@dataclass
class SystemGrid:
    """Panel grids on the two sides of the crossing point.

    The left grid spans [x_L, 0] and carries the oscillatory bases, the
    right grid spans [0, x_R] and carries the decaying and growing pair.
    x = 0 is a panel edge of both grids, so matching there uses node
    values, never interpolation.
    """

    left: PanelGrid
    right: PanelGrid
    energy: float
    h: float
    charts: Dict[int, LangerChart]
    turning: Dict[int, float]
    support_radius: float


def _real_energy(energy):
    e = complex(energy)
    if e.imag != 0.0:
        raise RangeError("the finite-h oracle runs at real energies; "
                         "imaginary parts are handled perturbatively")
    return float(e.real)


def build_system_grid(model, interaction, energy, h):
    """Two-sided panel grid sized for the given energy and h.

    The grid must cover the interaction support and reach well past both
    turning points, while staying inside both turning-point charts; h
    values that cannot satisfy this raise RangeError.
    """
    energy = _real_energy(energy)
    h = float(h)
    if not 0.0 < h:
        raise RangeError("h must be positive")
    charts = {j: langer_xi(model, j, energy) for j in (1, 2)}
    turning = {j: charts[j].turning_point for j in (1, 2)}
    margin = _TURN_MARGIN * h ** (2.0 / 3.0)
    radius = float(interaction.support_radius) if interaction is not None else 0.0
    x_r = max(_SUPPORT_MARGIN * radius, max(turning.values()) + margin)
    x_l = min(-_SUPPORT_MARGIN * radius, min(turning.values()) - margin)
    for j in (1, 2):
        lo, hi = charts[j].valid_interval
        if not (lo < x_l and x_r < hi):
            raise RangeError(
                "grid [%g, %g] leaves the turning-point chart [%g, %g] of "
                "potential %d; reduce h or the support radius"
                % (x_l, x_r, lo, hi, j))
        xi, _ = charts[j].xi_evaluator(x_r)
        if (2.0 / 3.0) * max(float(xi), 0.0) ** 1.5 > _ACTION_CAP * h:
            raise RangeError(
                "one-sided action at the right edge exceeds %g h for "
                "potential %d; the growing solution would overflow"
                % (_ACTION_CAP, j))

    reg = 2.25 * h ** (2.0 / 3.0)

    def step(x):
        gap = min(abs(energy - model.v(1, x)), abs(energy - model.v(2, x)))
        return 1.2 * h / math.sqrt(gap + reg)

    forced = [turning[1], turning[2]]
    if radius > 0.0:
        forced += [-radius, radius]
    left = PanelGrid(build_breakpoints(x_l, 0.0, step, forced=forced))
    right = PanelGrid(build_breakpoints(0.0, x_r, step, forced=forced))
    return SystemGrid(left=left, right=right, energy=energy, h=h,
                      charts=charts, turning=turning, support_radius=radius)


def _uniform_seed(chart, h, x, kind):
    """Value and derivative of the uniform turning-point formula at x.

    kind selects the Airy flavor: "ai" for the decaying member, "bi" for
    the growing one, "ci" for the outgoing complex combination.
    """
    xi, xi_p, xi_pp = (float(v) for v in chart.xi_second(x))
    scale = h ** (-2.0 / 3.0)
    pair = airy_eval(xi * scale)
    if kind == "ai":
        f, fp = pair.ai, pair.ai_deriv
    elif kind == "bi":
        f, fp = pair.bi, pair.bi_deriv
    elif kind == "ci":
        f = _ROT * pair.ai + np.conj(_ROT) * pair.bi
        fp = _ROT * pair.ai_deriv + np.conj(_ROT) * pair.bi_deriv
    else:
        raise ValueError("unknown seed kind %r" % (kind,))
    pref = math.sqrt(math.pi) * h ** (-1.0 / 6.0)
    val = pref * f / math.sqrt(xi_p)
    der = pref * (-0.5 * xi_pp * xi_p ** -1.5 * f
                  + math.sqrt(xi_p) * scale * fp)
    return complex(val), complex(der)


def _solve_scalar(model, j, energy, h, grid, x_start, data):
    """Integrate the scalar equation across one panel grid.

    x_start must be one of the grid ends; the solution is evaluated at
    every Chebyshev node and returned with its derivative channel.
    """
    coeffs = tuple(float(c) for c in model._coeffs(j))
    inv_h2 = 1.0 / (h * h)
    energy = float(energy)

    def rhs(x, y):
        acc = 0.0
        for c in reversed(coeffs):
            acc = acc * x + c
        return (y[1], (acc - energy) * inv_h2 * y[0])

    nodes = grid.x.ravel()
    uniq, inverse = np.unique(nodes, return_inverse=True)
    leftward = x_start == grid.b
    if leftward:
        t_span = (grid.b, grid.a)
        t_eval = uniq[::-1]
    elif x_start == grid.a:
        t_span = (grid.a, grid.b)
        t_eval = uniq
    else:
        raise ValueError("x_start must be a grid end")
    y0 = np.array(data, dtype=complex)
    sol = solve_ivp(rhs, t_span, y0, method="DOP853", t_eval=t_eval,
                    rtol=_ODE_RTOL, atol=_ODE_ATOL)
    if not sol.success:
        raise NumericError("scalar integration for potential %d failed: %s"
                           % (j, sol.message))
    vals = sol.y[0][::-1] if leftward else sol.y[0]
    ders = sol.y[1][::-1] if leftward else sol.y[1]
    return GridFunction(grid, vals[inverse].reshape(grid.x.shape),
                        ders[inverse].reshape(grid.x.shape))


def _wronskian_nodes(u, v):
    return u.values * v.derivs - u.derivs * v.values


def _wronskian_at(fu, fv):
    (uv, ud), (vv, vd) = fu, fv
    return uv * vd - ud * vv


@dataclass
class ScalarBasis:
    """The four reference solutions of one channel.

    u_minus decays and u_plus grows on the right grid, normalized so
    their Wronskian is exactly 1/h.  u_out and u_inc live on the left
    grid with Wronskian 2i/h; u_inc is the complex conjugate of u_out.
    p_coef and r_coef expand u_minus and u_plus in the left pair at
    x = 0, and t_factor is the resulting connection factor, which tends
    to exp(-i pi / 4) as h decreases.
    """

    which: int
    u_minus: GridFunction
    u_plus: GridFunction
    u_out: GridFunction
    u_inc: GridFunction
    wronskian_mp: complex
    wronskian_oi: complex
    t_factor: complex
    p_coef: complex
    r_coef: complex
    drift_mp: float
    drift_oi: float
    t_mismatch: float


def _oscillatory_pair(model, j, energy, h, chart, left):
    """Outgoing and incoming members on the left grid, with their drift.

    The incoming one is the conjugate of the outgoing one, which solves
    the same real equation at real energy.  Seeding at the right edge
    (the crossing point, which is also the turning point inside the
    energy window) pins the pair to the same uniform formula as the
    decaying member: the connection factor then carries no transport
    phase and the uncoupled transfer matrix is -i times the identity to
    integration accuracy.
    """
    seed = _uniform_seed(chart, h, left.b, "ci")
    u_out = _solve_scalar(model, j, energy, h, left, left.b, seed)
    w_imag = np.imag(u_out.values * np.conj(u_out.derivs))  # W(out, inc) = 2i w_imag
    w_ref_oi = float(w_imag[-1, -1])
    if w_ref_oi < 0.0:
        u_out = GridFunction(left, np.conj(u_out.values),
                             np.conj(u_out.derivs))
        w_imag = -w_imag
        w_ref_oi = -w_ref_oi
    if w_ref_oi <= 0.0:
        raise NumericError("outgoing and incoming members are degenerate")
    scale = math.sqrt((1.0 / h) / w_ref_oi)
    u_out = GridFunction(left, u_out.values * scale, u_out.derivs * scale)
    drift_oi = float(np.max(np.abs(w_imag / w_ref_oi - 1.0)))
    if drift_oi > _DRIFT_LIMIT:
        raise NumericError(
            "Wronskian drift %.3e on the outgoing/incoming pair of "
            "potential %d" % (drift_oi, j))
    u_inc = GridFunction(left, np.conj(u_out.values), np.conj(u_out.derivs))
    return u_out, u_inc, drift_oi


def scalar_basis(model, j, energy, h, grid):
    """Reference solutions for channel j on the two-sided grid."""
    energy = _real_energy(energy)
    h = float(h)
    chart = grid.charts[j]

    # Decaying member: launched where it is smallest, integrated left,
    # so the growing admixture picked up along the way dies out.
    seed = _uniform_seed(chart, h, grid.right.b, "ai")
    u_minus = _solve_scalar(model, j, energy, h, grid.right, grid.right.b, seed)
    # Growing member: launched at the crossing point, integrated right,
    # its own growth keeps the integration stable.
    seed = _uniform_seed(chart, h, grid.right.a, "bi")
    u_plus = _solve_scalar(model, j, energy, h, grid.right, grid.right.a, seed)

    w_nodes = _wronskian_nodes(u_minus, u_plus)
    w_ref = complex(w_nodes[0, 0])
    local = np.abs(u_minus.values) * np.abs(u_plus.derivs) \
        + np.abs(u_minus.derivs) * np.abs(u_plus.values)
    if abs(w_ref) < 1e-12 * float(local[0, 0]):
        raise NumericError("decaying and growing members are degenerate")
    scale = (1.0 / h) / w_ref
    u_plus = GridFunction(grid.right, u_plus.values * scale,
                          u_plus.derivs * scale)
    drift_mp = float(np.max(np.abs(w_nodes / w_ref - 1.0)))
    if drift_mp > _DRIFT_LIMIT:
        raise NumericError(
            "Wronskian drift %.3e on the decaying/growing pair of "
            "potential %d" % (drift_mp, j))

    u_out, u_inc, drift_oi = _oscillatory_pair(model, j, energy, h, chart,
                                               grid.left)

    # Expansion of the right pair in the left pair at the shared edge.
    w_oi = 2.0j / h
    minus0 = u_minus.at_left()
    plus0 = u_plus.at_left()
    out0 = u_out.at_right()
    inc0 = u_inc.at_right()
    p = _wronskian_at(minus0, inc0) / w_oi
    r = _wronskian_at(plus0, inc0) / w_oi
    t_factor = p + np.conj(r)
    t_mismatch = abs(2.0 * p - np.conj(2.0 * r))
    return ScalarBasis(which=j, u_minus=u_minus, u_plus=u_plus,
                       u_out=u_out, u_inc=u_inc,
                       wronskian_mp=complex(1.0 / h),
                       wronskian_oi=w_oi, t_factor=complex(t_factor),
                       p_coef=complex(p), r_coef=complex(r),
                       drift_mp=drift_mp, drift_oi=drift_oi,
                       t_mismatch=float(t_mismatch))


def apply_interaction(interaction, conjugated, f, h):
    """U f = r0 f + h r1 f', or the adjoint U* f = (r0 - h r1') f - h r1 f'.

    Returns the value channel only; the callers integrate it against a
    reference solution and never differentiate it.
    """
    x = f.grid.x
    derivs = f.derivs if f.derivs is not None else f.grid.derivative(f.values)
    r0 = interaction.r0(x)
    r1 = interaction.r1(x)
    if not conjugated:
        vals = r0 * f.values + h * r1 * derivs
    else:
        vals = (r0 - h * interaction.r1_prime(x)) * f.values - h * r1 * derivs
    return GridFunction(f.grid, vals, None)


def _anchor_is_left(grid, point, name):
    if point == -math.inf or point == grid.a:
        return True
    if point == math.inf or point == grid.b:
        return False
    raise RangeError("kernel anchor %s=%r is not a grid end" % (name, point))


def kernel_apply(basis_pair, s, t, f, h):
    """Particular solution of (-h^2 d^2/dx^2 + V - E) v = f.

    Variation of parameters with the given solution pair; s and t anchor
    the two cumulative integrals and must be grid ends (infinities map
    to the nearest end, where the integrands of interest have either
    decayed or left the interaction support).
    """
    u, udag = basis_pair
    grid = u.grid
    if udag.grid is not grid or f.grid is not grid:
        raise ValueError("kernel operands must share one grid")
    w = complex(u.values[0, 0] * udag.derivs[0, 0]
                - u.derivs[0, 0] * udag.values[0, 0])
    local = abs(u.values[0, 0]) * abs(udag.derivs[0, 0]) \
        + abs(u.derivs[0, 0]) * abs(udag.values[0, 0])
    if abs(w) < 1e-12 * (local + 1e-300):
        raise NumericError("kernel basis pair is degenerate")
    gu = udag.values * f.values
    gv = u.values * f.values
    if _anchor_is_left(grid, s, "s"):
        a_cum = grid.cumulative_left(gu)
    else:
        a_cum = -grid.cumulative_right(gu)
    if _anchor_is_left(grid, t, "t"):
        b_cum = grid.cumulative_left(gv)
    else:
        b_cum = -grid.cumulative_right(gv)
    pref = 1.0 / (h * h * w)
    vals = (u.values * a_cum - udag.values * b_cum) * pref
    ders = (u.derivs * a_cum - udag.derivs * b_cum) * pref
    return GridFunction(grid, vals, ders)


def ode_residual(model, j, energy, h, f, source=None):
    """Sup norm of (-h^2 d^2/dx^2 + V_j - E) f - source at the nodes.

    Uses the stored derivative channel when present, so only one
    spectral differentiation is applied.
    """
    energy = _real_energy(energy)
    d1 = f.derivs if f.derivs is not None else f.grid.derivative(f.values)
    d2 = f.grid.derivative(d1)
    res = -h * h * d2 + (model.v(j, f.grid.x) - energy) * f.values
    if source is not None:
        res = res - source.values
    return float(np.max(np.abs(res)))


@dataclass
class SystemSolution:
    """One solution of the coupled system, as channel components."""

    seed: str
    components: Tuple[GridFunction, GridFunction]
    term_norms: Tuple[float, ...]
    contraction_ratio: float
    n_terms: int


def _seed_info(seed, bases):
    if seed in P_SEEDS:
        j = int(seed[-1])
        return j, "p", bases[j].u_minus
    if seed in A_SEEDS:
        j = int(seed[-1])
        kind = seed[:-1]
        return j, "a", getattr(bases[j], "u_%s" % kind)
    raise ValueError("unknown seed %r; use one of %s"
                     % (seed, P_SEEDS + A_SEEDS))


def neumann_solve(model, interaction, energy, h, seed,
                  grid=None, bases=None):
    """Solve the coupled system by iterating the two coupling kernels.

    seed picks the scalar solution the series starts from: "minus1" or
    "minus2" for the decaying family on the right grid, "out1", "inc1",
    "out2" or "inc2" for the oscillatory family on the left grid.  The
    series is truncated once its geometric tail is below 1e-10 of the
    seed norm; failure to contract raises NumericError with the observed
    ratio.
    """
    energy = _real_energy(energy)
    h = float(h)
    if grid is None:
        grid = build_system_grid(model, interaction, energy, h)
    if bases is None:
        bases = {j: scalar_basis(model, j, energy, h, grid) for j in (1, 2)}
    j0, family, seed_gf = _seed_info(seed, bases)
    other = 3 - j0

    def ktilde(m, f):
        g = apply_interaction(interaction, m == 2, f, h)
        if family == "p":
            pair = (bases[m].u_minus, bases[m].u_plus)
            out = kernel_apply(pair, grid.right.a, math.inf, g, h)
        else:
            pair = (bases[m].u_out, bases[m].u_inc)
            out = kernel_apply(pair, -math.inf, -math.inf, g, h)
        return GridFunction(out.grid, -h * out.values, -h * out.derivs)

    comps = {j0: GridFunction(seed_gf.grid, seed_gf.values.copy(),
                              seed_gf.derivs.copy()),
             other: _gf_zero(seed_gf.grid)}
    first = seed_gf.norm()
    norms = [first]
    prev = first
    ratio = 0.0
    cur = seed_gf
    for _ in range(_NEUMANN_MAX):
        mid = ktilde(other, cur)
        comps[other] = _gf_add(comps[other], mid)
        cur = ktilde(j0, mid)
        comps[j0] = _gf_add(comps[j0], cur)
        nrm = cur.norm()
        norms.append(nrm)
        ratio = nrm / prev if prev > 0.0 else 0.0
        prev = nrm
        if nrm <= _NEUMANN_TOL * first:
            break
    if ratio >= _CONTRACTION_LIMIT:
        raise NumericError(
            "kernel iteration is not contracting (ratio %.3f at h=%g); "
            "reduce h or the interaction strength" % (ratio, h))
    tail = prev * ratio / (1.0 - ratio)
    if tail > _TAIL_LIMIT * first:
        raise NumericError(
            "Neumann tail bound %.3e exceeds %.0e of the seed norm; "
            "reduce h or the interaction strength" % (tail / first, _TAIL_LIMIT))
    contraction = max(norms[k + 1] / norms[k]
                      for k in range(len(norms) - 1)) if len(norms) > 1 else 0.0
    return SystemSolution(seed=seed,
                          components=(comps[1], comps[2]),
                          term_norms=tuple(norms),
                          contraction_ratio=float(contraction),
                          n_terms=len(norms))


@dataclass
class CoefficientSet:
    """The twelve coupling functionals of one (E, h) pair.

    alpha and beta hold the decay-side couplings (alpha_1, alpha_2) and
    (beta_1, beta_2).  alpha_grid and beta_grid hold the eight
    oscillatory-side couplings keyed by (channel, seed label, output
    label) with labels "out" and "inc".
    """

    alpha: Tuple[complex, complex]
    beta: Tuple[complex, complex]
    alpha_grid: Dict[Tuple[int, str, str], complex]
    beta_grid: Dict[Tuple[int, str, str], complex]


@dataclass
class ExactContext:
    grid: SystemGrid
    bases: Dict[int, ScalarBasis]
    psols: Dict[int, SystemSolution]
    asols: Dict[Tuple[int, str], SystemSolution]
    coeffs: CoefficientSet


def _c_functional(grid_side, udag_vals, wronskian, interaction, conjugated,
                  f, h, from_left):
    """(1 / h W) times the integral from 0 of udag (U f).

    from_left integrates toward the left end (and so flips the sign of
    the grid integral, which always runs left to right).
    """
    g = apply_interaction(interaction, conjugated, f, h)
    total = grid_side.integral(udag_vals * g.values)
    if from_left:
        total = -total
    return complex(total / (h * wronskian))


def _coefficient_context(model, interaction, energy, h):
    energy = _real_energy(energy)
    h = float(h)
    grid = build_system_grid(model, interaction, energy, h)
    bases = {j: scalar_basis(model, j, energy, h, grid) for j in (1, 2)}
    psols = {j: neumann_solve(model, interaction, energy, h, "minus%d" % j,
                              grid=grid, bases=bases) for j in (1, 2)}
    asols = {}
    for j in (1, 2):
        for kind in ("out", "inc"):
            asols[(j, kind)] = neumann_solve(
                model, interaction, energy, h, "%s%d" % (kind, j),
                grid=grid, bases=bases)

    w_mp = 1.0 / h          # W(u_minus, u_plus)
    w_oi = 2.0j / h         # W(u_out, u_inc)
    alpha = []
    beta = []
    for j in (1, 2):
        jh = 3 - j
        # cross-channel and same-channel couplings of the decaying family,
        # both integrated over the right half line
        alpha.append(_c_functional(
            grid.right, bases[jh].u_minus.values, -w_mp, interaction,
            jh == 2, psols[j].components[j - 1], h, from_left=False))
        beta.append(_c_functional(
            grid.right, bases[j].u_minus.values, -w_mp, interaction,
            j == 2, psols[j].components[jh - 1], h, from_left=False))
    alpha_grid = {}
    beta_grid = {}
    for j in (1, 2):
        jh = 3 - j
        for src in ("out", "inc"):
            sol = asols[(j, src)]
            for dst in ("out", "inc"):
                wr = w_oi if dst == "out" else -w_oi
                udag_a = getattr(bases[jh], "u_inc" if dst == "out" else "u_out")
                alpha_grid[(j, src, dst)] = _c_functional(
                    grid.left, udag_a.values, wr, interaction, jh == 2,
                    sol.components[j - 1], h, from_left=True)
                udag_b = getattr(bases[j], "u_inc" if dst == "out" else "u_out")
                beta_grid[(j, src, dst)] = _c_functional(
                    grid.left, udag_b.values, wr, interaction, j == 2,
                    sol.components[jh - 1], h, from_left=True)
    coeffs = CoefficientSet(alpha=(alpha[0], alpha[1]),
                            beta=(beta[0], beta[1]),
                            alpha_grid=alpha_grid, beta_grid=beta_grid)
    return ExactContext(grid=grid, bases=bases, psols=psols, asols=asols,
                        coeffs=coeffs)


def coefficient_set(model, interaction, energy, h):
    """All twelve coupling functionals by quadrature of the iterates."""
    return _coefficient_context(model, interaction, energy, h).coeffs


def _oscillatory_couplings(model, interaction, energy, h):
    """The eight oscillatory-side couplings, computed without the
    exponential family.

    The growing member overflows once the one-sided action at the right
    edge exceeds a few hundred h, which caps how small h can get for the
    full basis.  The oscillatory couplings only involve the left grid,
    where everything stays bounded, so they remain computable far below
    that cap.  Returns (alpha_grid, beta_grid, diagnostics).
    """
    energy = _real_energy(energy)
    h = float(h)
    if not 0.0 < h:
        raise RangeError("h must be positive")
    charts = {j: langer_xi(model, j, energy) for j in (1, 2)}
    turning = {j: charts[j].turning_point for j in (1, 2)}
    margin = _TURN_MARGIN * h ** (2.0 / 3.0)
    radius = float(interaction.support_radius)
    x_l = min(-_SUPPORT_MARGIN * radius, min(turning.values()) - margin)
    for j in (1, 2):
        lo, hi = charts[j].valid_interval
        if not (lo < x_l and 0.0 < hi):
            raise RangeError(
                "grid [%g, 0] leaves the turning-point chart [%g, %g] of "
                "potential %d; reduce h or the support radius"
                % (x_l, lo, hi, j))
    reg = 2.25 * h ** (2.0 / 3.0)

    def step(x):
        gap = min(abs(energy - model.v(1, x)), abs(energy - model.v(2, x)))
        return 1.2 * h / math.sqrt(gap + reg)

    forced = [turning[1], turning[2], -radius, radius]
    left = PanelGrid(build_breakpoints(x_l, 0.0, step, forced=forced))
    grid = SystemGrid(left=left, right=None, energy=energy, h=h,
                      charts=charts, turning=turning, support_radius=radius)
    bases = {}
    for j in (1, 2):
        u_out, u_inc, drift_oi = _oscillatory_pair(model, j, energy, h,
                                                   charts[j], left)
        # Only the oscillatory family is populated; the seeds iterated
        # below never touch the exponential members.
        bases[j] = ScalarBasis(which=j, u_minus=None, u_plus=None,
                               u_out=u_out, u_inc=u_inc,
                               wronskian_mp=complex(1.0 / h),
                               wronskian_oi=2.0j / h,
                               t_factor=0.0j, p_coef=0.0j, r_coef=0.0j,
                               drift_mp=0.0, drift_oi=drift_oi,
                               t_mismatch=0.0)
    asols = {}
    for j in (1, 2):
        for kind in ("out", "inc"):
            asols[(j, kind)] = neumann_solve(
                model, interaction, energy, h, "%s%d" % (kind, j),
                grid=grid, bases=bases)
    w_oi = 2.0j / h
    alpha_grid = {}
    beta_grid = {}
    for j in (1, 2):
        jh = 3 - j
        for src in ("out", "inc"):
            sol = asols[(j, src)]
            for dst in ("out", "inc"):
                wr = w_oi if dst == "out" else -w_oi
                udag_a = getattr(bases[jh], "u_inc" if dst == "out" else "u_out")
                alpha_grid[(j, src, dst)] = _c_functional(
                    left, udag_a.values, wr, interaction, jh == 2,
                    sol.components[j - 1], h, from_left=True)
                udag_b = getattr(bases[j], "u_inc" if dst == "out" else "u_out")
                beta_grid[(j, src, dst)] = _c_functional(
                    left, udag_b.values, wr, interaction, j == 2,
                    sol.components[jh - 1], h, from_left=True)
    diagnostics = {
        "drift_oi_max": max(bases[j].drift_oi for j in (1, 2)),
        "contraction_ratio": max(s.contraction_ratio for s in asols.values()),
        "npanels": left.npanels,
    }
    return alpha_grid, beta_grid, diagnostics


def teh_matrix(coefficients):
    """Explicit small-h transfer matrix built from the couplings alone.

    This is the closed combination whose entries the full assembly
    reproduces up to O(h) corrections; it is returned for comparison,
    not used inside the numeric route.
    """
    ag = coefficients.alpha_grid
    a1, a2 = coefficients.alpha
    x1 = ag[(1, "inc", "inc")] - ag[(1, "out", "out")] \
        + 1j * (2.0 * a1 + ag[(1, "out", "inc")] + ag[(1, "inc", "out")])
    x2 = ag[(2, "inc", "inc")] - ag[(2, "out", "out")] \
        + 1j * (2.0 * a2 + ag[(2, "out", "inc")] + ag[(2, "inc", "out")])
    entries = -1j * np.array([[1.0, x2], [x1, 1.0]], dtype=complex)
    return TransferMatrix(entries=entries, provenance="explicit_approximation",
                          error_order=1.0)


def _solution_data_at_zero(sol, family):
    w1, w2 = sol.components
    if family == "a":
        (v1, d1), (v2, d2) = w1.at_right(), w2.at_right()
    else:
        (v1, d1), (v2, d2) = w1.at_left(), w2.at_left()
    return np.array([v1, v2, d1, d2], dtype=complex)


@dataclass
class ExactAssembly:
    """Everything the transfer-matrix assembly produced, with diagnostics."""

    grid: SystemGrid
    bases: Dict[int, ScalarBasis]
    coefficients: CoefficientSet
    a_inc: np.ndarray
    a_out: np.ndarray
    transfer: TransferMatrix
    explicit: TransferMatrix
    diagnostics: Dict[str, float]


def assemble(model, interaction, energy, h):
    """Assemble the finite-h transfer matrix with full diagnostics.

    Two independent routes produce the coefficients of the decaying
    solutions in the oscillatory family: one through the coupling
    functionals and the exact basis change at x = 0, one through a
    direct 4x4 solve on the matched values and derivatives.  Their
    agreement is recorded and enforced.
    """
    ctx = _coefficient_context(model, interaction, energy, h)
    b1, b2 = ctx.bases[1], ctx.bases[2]
    c = ctx.coeffs
    a1, a2 = c.alpha
    be1, be2 = c.beta
    ag, bg = c.alpha_grid, c.beta_grid

    # Expansion of the decaying solutions in the four scalar functions
    # of the right grid; exact at finite h.
    n_wpm = np.array([[1.0, 0.0],
                      [0.0, 1.0],
                      [be1, a2],
                      [a1, be2]], dtype=complex)
    # Exact change from the right scalar pair to the left one at x = 0.
    phi = np.array([
        [np.conj(b1.p_coef), 0.0, np.conj(b1.r_coef), 0.0],
        [0.0, np.conj(b2.p_coef), 0.0, np.conj(b2.r_coef)],
        [b1.p_coef, 0.0, b1.r_coef, 0.0],
        [0.0, b2.p_coef, 0.0, b2.r_coef]], dtype=complex)
    # Expansion of the oscillatory-family solutions in the left scalar
    # functions; also exact at finite h.
    m_wfs = np.array([
        [1.0 + bg[(1, "inc", "inc")], ag[(2, "inc", "inc")],
         bg[(1, "out", "inc")], ag[(2, "out", "inc")]],
        [ag[(1, "inc", "inc")], 1.0 + bg[(2, "inc", "inc")],
         ag[(1, "out", "inc")], bg[(2, "out", "inc")]],
        [bg[(1, "inc", "out")], ag[(2, "inc", "out")],
         1.0 + bg[(1, "out", "out")], ag[(2, "out", "out")]],
        [ag[(1, "inc", "out")], bg[(2, "inc", "out")],
         ag[(1, "out", "out")], 1.0 + bg[(2, "out", "out")]]], dtype=complex)
    a_stack = np.linalg.solve(m_wfs, phi @ n_wpm)

    # Independent route: match values and derivatives of both channel
    # components at x = 0 directly.
    g_cols = [_solution_data_at_zero(ctx.asols[(1, "inc")], "a"),
              _solution_data_at_zero(ctx.asols[(2, "inc")], "a"),
              _solution_data_at_zero(ctx.asols[(1, "out")], "a"),
              _solution_data_at_zero(ctx.asols[(2, "out")], "a")]
    d_cols = [_solution_data_at_zero(ctx.psols[1], "p"),
              _solution_data_at_zero(ctx.psols[2], "p")]
    a_stack_b = np.linalg.solve(np.stack(g_cols, axis=1),
                                np.stack(d_cols, axis=1))
    scale = float(np.max(np.abs(a_stack)))
    route_gap = float(np.max(np.abs(a_stack - a_stack_b)) / (scale + 1e-300))
    if route_gap > _ROUTE_LIMIT:
        raise NumericError(
            "the two assembly routes disagree by %.3e relative" % route_gap)

    a_inc = a_stack[:2, :]
    a_out = a_stack[2:, :]
    cond = float(np.linalg.cond(a_inc))
    if cond > _COND_LIMIT:
        raise NumericError(
            "incoming coefficient matrix is ill conditioned (%.3e)" % cond)
    entries = a_out @ np.linalg.inv(a_inc)
    transfer = TransferMatrix(entries=entries, provenance="numeric_oracle",
                              error_order=0.0)
    explicit = teh_matrix(c)
    teh_gap = float(np.max(np.abs(entries - explicit.entries)))
    contraction = max(
        [ctx.psols[j].contraction_ratio for j in (1, 2)]
        + [s.contraction_ratio for s in ctx.asols.values()])
    diagnostics = {
        "route_gap": route_gap,
        "cond_a_inc": cond,
        "contraction_ratio": float(contraction),
        "teh_gap": teh_gap,
        "drift_max": max(max(b.drift_mp, b.drift_oi)
                         for b in ctx.bases.values()),
        "t_mismatch_max": max(b.t_mismatch for b in ctx.bases.values()),
    }
    return ExactAssembly(grid=ctx.grid, bases=ctx.bases, coefficients=c,
                         a_inc=a_inc, a_out=a_out, transfer=transfer,
                         explicit=explicit, diagnostics=diagnostics)


def transfer_matrix_numeric(model, interaction, energy, h):
    """The finite-h transfer matrix from the full numeric assembly."""
    return assemble(model, interaction, energy, h).transfer


class WKBBasis:
    """Oscillatory phase and leading amplitude left of both wells.

    The phases solve (phi')^2 = E - V_j on the allowed side x < a_j;
    phi_sharp increases toward the turning point and phi_flat is its
    negative.  sigma0 is the leading amplitude (E - V_j)^(-1/4).
    """

    def __init__(self, model, energy):
        self.model = model
        self.energy = _real_energy(energy)
        self.charts = {j: langer_xi(model, j, self.energy) for j in (1, 2)}
        self.turning_points = (self.charts[1].turning_point,
                               self.charts[2].turning_point)

    def _action(self, j, x):
        xi, _ = self.charts[j].xi_evaluator(x)
        xi = float(xi)
        if xi >= 0.0:
            raise RangeError("x=%g is not on the allowed side of potential %d"
                             % (x, j))
        return (2.0 / 3.0) * (-xi) ** 1.5

    def phi_sharp(self, j, x):
        return self._action(j, x)

    def phi_flat(self, j, x):
        return -self._action(j, x)

    def sigma0(self, j, x):
        gap = self.energy - float(self.model.v(j, x))
        if gap <= 0.0:
            raise RangeError("x=%g is not on the allowed side of potential %d"
                             % (x, j))
        return gap ** -0.25

    def pair_at(self, j, x, h):
        """Values and derivatives of the two oscillatory elements at x."""
        gap = self.energy - float(self.model.v(j, x))
        if gap <= 0.0:
            raise RangeError("x=%g is not on the allowed side of potential %d"
                             % (x, j))
        root = math.sqrt(gap)
        sigma = gap ** -0.25
        dsigma = 0.25 * gap ** -1.25 * float(self.model.v_prime(j, x))
        out = []
        for sign in (-1.0, 1.0):
            # d/dx of -/+ the action integral toward the turning point
            phase = sign * self._action(j, x)
            dphase = -sign * root
            f = np.exp(1j * phase / h) * sigma
            fp = f * (1j * dphase / h + dsigma / sigma)
            out.append((complex(f), complex(fp)))
        return tuple(out)


def wkb_basis(model, energy):
    return WKBBasis(model, energy)


def microlocal_coefficients(wkb, solution, j, x0, h):
    """Expand one channel of a left-grid solution in the WKB pair at x0.

    The absolute normalization follows the pair returned by pair_at; the
    numbers are reported as computed, with no extra convention applied.
    """
    comp = solution.components[j - 1]
    grid = comp.grid
    if not grid.a <= x0 <= grid.b:
        raise RangeError("x0=%g is outside the solution grid" % x0)
    val = complex(grid.interpolate(comp.values, x0))
    der = complex(grid.interpolate(comp.derivs, x0))
    (fb, fbp), (fs, fsp) = wkb.pair_at(j, x0, h)
    mat = np.array([[fb, fs], [fbp, fsp]], dtype=complex)
    c_flat, c_sharp = np.linalg.solve(mat, np.array([val, der]))
    return complex(c_flat), complex(c_sharp)
