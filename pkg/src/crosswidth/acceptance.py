"""Acceptance suite: the quantitative checks the package must pass.

Each criterion measures a stated quantity at stated tolerances and
returns a record with the numbers, a pass flag and its runtime.  Two
expensive intermediates are shared: the oscillatory-integral scan on
the order-2 model feeds both the convergence check and the width
consistency check, and the order-1 transfer suite feeds both the
transfer-matrix check and the Wronskian drift audit.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from .airy import airy_eval, airy_product_integral
from .crossing import (
    crossing_integral,
    crossing_integral_asymptotic,
    kappa_n,
    kappa_n_zero,
    semiclassical_point,
)
from .exactsys import _oscillatory_couplings, assemble, coefficient_set
from .genairy import METHOD_QUADRATURE, gen_airy, gen_airy_zero
from .potentials import detect_contact_order, get_model, langer_xi
from .resonances import (
    bohr_sommerfeld_points,
    resonance_window,
    width_consistency_check,
)

_GL16 = np.polynomial.legendre.leggauss(16)

H_SCAN = (1e-2, 3e-3, 1e-3, 3e-4, 1e-4)
H_COUPLING_EXP = tuple(np.logspace(-4.1, -2.1, 5)[::-1])
H_COUPLING_OSC = tuple(np.logspace(math.log10(1.2e-6),
                                   math.log10(1.2e-4), 5)[::-1])


@dataclass
class CriterionResult:
    """Outcome of one acceptance criterion."""

    index: int
    name: str
    passed: bool
    runtime: float
    runtime_limit: float
    summary: str
    details: dict

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return "%s criterion %2d [%s]: %s (%.1f s, limit %.0f s)" % (
            flag, self.index, self.name, self.summary,
            self.runtime, self.runtime_limit)


def _slope(hs, values):
    return float(np.polyfit(np.log(np.asarray(hs, dtype=float)),
                            np.log(np.asarray(values, dtype=float)), 1)[0])


class Suite:
    """Runs the criteria, caching the shared intermediates."""

    def __init__(self):
        self._integrals = None
        self._transfer = None

    def scan_integrals(self):
        """Crossing integral at E = 0 on the order-2 model, per h."""
        if self._integrals is None:
            model = get_model("contact2")
            self._integrals = {
                h: crossing_integral(model, model.interaction, 0.0, h)
                for h in H_SCAN}
        return self._integrals

    def transfer_suite(self):
        """Finite-h transfer assembly at E = 0 on the order-1 model."""
        if self._transfer is None:
            model = get_model("contact1")
            self._transfer = {
                h: assemble(model, model.interaction, 0.0, h)
                for h in H_SCAN}
        return self._transfer

    # -- criterion bodies ------------------------------------------------

    def criterion_1(self):
        """A_1 equals Ai on a fixed set of arguments."""
        start = time.perf_counter()
        ys = (-10.0, -5.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0)
        worst = max(abs(gen_airy(1, y).value - float(airy_eval(y).ai))
                    for y in ys)
        passed = worst < 1e-8
        return CriterionResult(
            1, "generalized Airy reduces to Ai", passed,
            time.perf_counter() - start, 5.0,
            "max |A_1(y) - Ai(y)| = %.2e (< 1e-8)" % worst,
            {"max_abs_diff": worst, "arguments": ys})

    def criterion_2(self):
        """Quadrature value at zero matches the closed form."""
        start = time.perf_counter()
        rels = {}
        for n in (1, 2, 3):
            closed = gen_airy_zero(n)
            quad = gen_airy(n, 0.0, method=METHOD_QUADRATURE).value
            rels[n] = abs(quad - closed) / abs(closed)
        worst = max(rels.values())
        passed = worst < 1e-7
        return CriterionResult(
            2, "A_n(0) closed value", passed,
            time.perf_counter() - start, 5.0,
            "max relative gap %.2e over n in {1,2,3} (< 1e-7)" % worst,
            {"relative_gaps": rels})

    def criterion_3(self):
        """Airy product integral: closed form vs direct quadrature."""
        start = time.perf_counter()
        rng = np.random.default_rng(20230823)
        worst = 0.0
        rows = []
        count = 0
        while count < 20:
            l1, l2 = rng.uniform(0.5, 3.0, 2) * rng.choice((-1.0, 1.0), 2)
            m1, m2 = rng.uniform(-1.0, 1.0, 2)
            if l1 * l2 > 0.0 and abs(
                    abs(l1) ** 1.5 - abs(l2) ** 1.5) < 0.15:
                # nearly equal frequencies: the value grows like the
                # inverse cube root of the gap and the conditional tail
                # cutoff like a negative power of it; a floor on the gap
                # keeps the referee within its error budget
                continue
            closed = airy_product_integral(l1, l2, m1, m2)
            quad = _product_quadrature(l1, l2, m1, m2)
            diff = abs(closed - quad)
            rows.append({"lambda1": l1, "lambda2": l2, "mu1": m1,
                         "mu2": m2, "closed": closed, "quadrature": quad,
                         "abs_diff": diff})
            worst = max(worst, diff)
            count += 1
        passed = worst < 1e-6
        return CriterionResult(
            3, "Airy product closed form vs quadrature", passed,
            time.perf_counter() - start, 30.0,
            "max |closed - quadrature| = %.2e over 20 tuples (< 1e-6)"
            % worst,
            {"max_abs_diff": worst, "tuples": rows})

    def criterion_4(self):
        """kappa_n at lambda = 0: Airy route vs closed route."""
        start = time.perf_counter()
        rels = {}
        for name in ("contact1", "contact2", "contact3"):
            model = get_model(name)
            crossing = detect_contact_order(model)
            r0 = float(model.interaction.r0(0.0))
            via_airy = kappa_n(crossing, r0, 0.0)
            via_closed = kappa_n_zero(crossing, r0)
            rels[name] = abs(via_airy - via_closed) / abs(via_closed)
        worst = max(rels.values())
        passed = worst < 1e-10
        return CriterionResult(
            4, "two-route width coefficient", passed,
            time.perf_counter() - start, 5.0,
            "max relative gap %.2e over n in {1,2,3} (< 1e-10)" % worst,
            {"relative_gaps": rels})

    def criterion_5(self):
        """Crossing integral against its leading term on the n=2 model."""
        start = time.perf_counter()
        model = get_model("contact2")
        crossing = detect_contact_order(model)
        r0 = float(model.interaction.r0(0.0))
        integrals = self.scan_integrals()
        ratios = {}
        residuals = []
        for h in H_SCAN:
            leading = crossing_integral_asymptotic(
                semiclassical_point(0.0, h, crossing.n), crossing, r0)
            ratios[h] = integrals[h] / leading
            residuals.append(abs(ratios[h] - 1.0))
        slope = _slope(H_SCAN, residuals)
        at_small = ratios[1e-4]
        passed = 0.9 <= at_small <= 1.1 and slope >= 0.05
        return CriterionResult(
            5, "oscillatory integral convergence", passed,
            time.perf_counter() - start, 600.0,
            "ratio %.4f at h=1e-4 (in [0.9, 1.1]), residual slope %.3f "
            "(>= 0.05)" % (at_small, slope),
            {"ratios": ratios, "residual_slope": slope})

    def criterion_6(self):
        """Finite-h transfer matrix against the closed form, n = 1."""
        start = time.perf_counter()
        model = get_model("contact1")
        crossing = detect_contact_order(model)
        r0 = float(model.interaction.r0(0.0))
        suite = self.transfer_suite()
        h_ref = 1e-4
        t_ref = 1j * suite[h_ref].transfer.entries
        denom = -1j * kappa_n(crossing, r0, 0.0) * h_ref ** (1.0 / 3.0)
        off_ratios = (abs(t_ref[0, 1] / denom), abs(t_ref[1, 0] / denom))
        diag_dev = []
        for h in H_SCAN:
            it = 1j * suite[h].transfer.entries
            diag_dev.append(max(abs(it[0, 0] - 1.0), abs(it[1, 1] - 1.0)))
        slope = _slope(H_SCAN, diag_dev)
        passed = all(0.85 <= r <= 1.15 for r in off_ratios) and slope > 0.0
        return CriterionResult(
            6, "transfer matrix off-diagonal", passed,
            time.perf_counter() - start, 1200.0,
            "offdiag ratios (%.4f, %.4f) at h=1e-4 (in [0.85, 1.15]), "
            "diagonal deviation slope %.3f (> 0)"
            % (off_ratios[0], off_ratios[1], slope),
            {"off_ratios": off_ratios, "diag_deviation": diag_dev,
             "diag_slope": slope})

    def criterion_7(self):
        """Coupling coefficient orders on the n = 2 model.

        The stated orders are family-wide upper bounds: the exponential
        couplings alpha_j carry order 1/3 and the oscillatory family
        alpha_{j,src}^{dst} carries order 1/(2n+1).  The fit checks the
        family envelope against the bound and requires every member to
        decay no slower; cross-label members genuinely decay faster (at
        1/3), which is consistent with the bound.  The envelope fit for
        the oscillatory family needs the beat phase across the support
        to exceed a few radians, which puts its two-decade window below
        the reach of the growing exponential member; the dedicated
        left-grid path supplies those values.
        """
        start = time.perf_counter()
        model = get_model("contact2")
        inter = model.interaction
        n = 2
        target_exp = 1.0 / 3.0
        target_osc = 1.0 / (2 * n + 1)

        envelope_exp = []
        for h in H_COUPLING_EXP:
            coeffs = coefficient_set(model, inter, 0.0, h)
            envelope_exp.append(max(abs(a) for a in coeffs.alpha))
        slope_exp = _slope(H_COUPLING_EXP, envelope_exp)

        keys = [(j, s, d) for j in (1, 2) for s in ("out", "inc")
                for d in ("out", "inc")]
        per_key = {k: [] for k in keys}
        for h in H_COUPLING_OSC:
            grid, _, _ = _oscillatory_couplings(model, inter, 0.0, h)
            for k in keys:
                per_key[k].append(abs(grid[k]))
        envelope_osc = [max(per_key[k][i] for k in keys)
                        for i in range(len(H_COUPLING_OSC))]
        slope_osc = _slope(H_COUPLING_OSC, envelope_osc)
        member_slopes = {k: _slope(H_COUPLING_OSC, per_key[k])
                         for k in keys}
        slowest = min(member_slopes.values())

        exp_ok = 0.75 * target_exp <= slope_exp <= 1.25 * target_exp
        osc_ok = 0.75 * target_osc <= slope_osc <= 1.25 * target_osc
        members_ok = slowest >= 0.75 * target_osc
        passed = exp_ok and osc_ok and members_ok
        return CriterionResult(
            7, "coupling coefficient orders", passed,
            time.perf_counter() - start, 1200.0,
            "alpha_j envelope slope %.3f (1/3 +- 25%%), oscillatory "
            "envelope slope %.3f (1/5 +- 25%%), slowest member %.3f "
            "(>= 0.15)" % (slope_exp, slope_osc, slowest),
            {"slope_exponential": slope_exp,
             "slope_oscillatory": slope_osc,
             "member_slopes": {str(k): v
                               for k, v in member_slopes.items()},
             "window_exponential": H_COUPLING_EXP,
             "window_oscillatory": H_COUPLING_OSC})

    def criterion_8(self):
        """Quantization ladder on the quadratic well is exact."""
        start = time.perf_counter()
        model = get_model("contact1")
        worst_root = 0.0
        worst_gap = 0.0
        for h in (1e-2, 1e-3):
            window = resonance_window(1, h, L=1.0)
            points = np.array(bohr_sommerfeld_points(model, window))
            ks = np.rint((points + 0.25) / (2.0 * h) - 0.5)
            exact = (2.0 * ks + 1.0) * h - 0.25
            worst_root = max(worst_root,
                             float(np.max(np.abs(points - exact))))
            worst_gap = max(worst_gap,
                            float(np.max(np.abs(np.diff(points) - 2 * h))))
        passed = worst_root < 1e-10 and worst_gap < 1e-10
        return CriterionResult(
            8, "quantization ladder exactness", passed,
            time.perf_counter() - start, 5.0,
            "max root error %.2e, max spacing error %.2e (< 1e-10)"
            % (worst_root, worst_gap),
            {"max_root_error": worst_root, "max_spacing_error": worst_gap})

    def criterion_9(self):
        """Chart identity and Wronskian drift on the transfer suite."""
        start = time.perf_counter()
        model = get_model("contact2")
        worst_xi = 0.0
        for j in (1, 2):
            for energy in np.linspace(-0.2, 0.3, 10):
                chart = langer_xi(model, j, float(energy))
                lo, hi = chart.valid_interval
                width = hi - lo
                xs = np.linspace(lo + 0.025 * width, hi - 0.025 * width, 50)
                xi, xi_p = chart.xi_evaluator(xs)
                resid = np.max(np.abs(xi * xi_p ** 2
                                      - (model.v(j, xs) - energy)))
                worst_xi = max(worst_xi, float(resid))
        suite = self.transfer_suite()
        worst_drift = max(
            max(basis.drift_mp, basis.drift_oi)
            for assembly in suite.values()
            for basis in assembly.bases.values())
        passed = worst_xi < 1e-10 and worst_drift < 1e-8
        return CriterionResult(
            9, "chart identity and Wronskian drift", passed,
            time.perf_counter() - start, 60.0,
            "max chart residual %.2e (< 1e-10), max drift %.2e (< 1e-8)"
            % (worst_xi, worst_drift),
            {"max_xi_residual": worst_xi, "max_drift": worst_drift})

    def criterion_10(self):
        """Width coefficient: closed form vs integral extraction."""
        start = time.perf_counter()
        model = get_model("contact2")
        window = resonance_window(2, 1e-4, L=1.0)
        report = width_consistency_check(
            model, model.interaction, window, H_SCAN,
            integrals=self.scan_integrals())
        by_h = {row["h"]: row for row in report["rows"]}
        gap_small = by_h[1e-4]["gap"]
        passed = gap_small < 0.10 and report["gap_decreasing"]
        return CriterionResult(
            10, "width formula consistency", passed,
            time.perf_counter() - start, 600.0,
            "gap %.4f at h=1e-4 (< 0.10), decreasing across the grid: %s"
            % (gap_small, report["gap_decreasing"]),
            {"report": report})

    def run(self, indices=None):
        if indices is None:
            indices = range(1, 11)
        return [getattr(self, "criterion_%d" % k)() for k in indices]


def run_all(indices=None):
    """Run the acceptance criteria and return their results."""
    return Suite().run(indices)


# -- quadrature referee for the Airy product integral --------------------

def _product_quadrature(l1, l2, m1, m2):
    """Direct quadrature of the Airy product integral over the line.

    Mixed-sign scale pairs decay at both ends and are integrated over a
    finite window.  Same-sign pairs oscillate over the whole common left
    axis and converge only conditionally; there the tail is handled
    through the exact identity (u'v - uv')' = (A - B) uv for u'' = Au,
    v'' = Bv with A - B linear in x.  One integration by parts turns the
    tail beyond a cutoff into the boundary value of (u'v - uv')/(A - B)
    plus a remainder whose leading part falls off like the inverse 5/2
    power of the cutoff; the cutoff is sized so that part sits near
    1e-7, three orders below the finite-window quadrature's resolution
    of the boundary data.
    """
    if l1 < 0.0 and l2 < 0.0:
        # mirror x -> -x so both scales are positive
        l1, l2, m1, m2 = -l1, -l2, -m1, -m2

    def integrand(x):
        return airy_eval(l1 * (x - m1)).ai * airy_eval(l2 * (x - m2)).ai

    if l1 > 0.0 and l2 > 0.0:
        hi = min(m1 + 22.0 / l1, m2 + 22.0 / l2)
        s1, s2 = l1 ** 1.5, l2 ** 1.5
        gap = abs(s1 - s2)
        dcoef = l1 ** 3 - l2 ** 3
        x_c = (l1 ** 3 * m1 - l2 ** 3 * m2) / dcoef
        # oscillation amplitude bound for u'v - uv' on the far left
        amp = (1.3 / math.pi) * (l1 * (l1 / l2) ** 0.25
                                 + l2 * (l2 / l1) ** 0.25)
        cut = (amp / (1.5 * abs(dcoef) * gap * 1e-7)) ** 0.4
        cut = max(cut, abs(x_c) + 10.0, 40.0)
        p1 = airy_eval(l1 * (-cut - m1))
        p2 = airy_eval(l2 * (-cut - m2))
        wronsk = l1 * p1.ai_deriv * p2.ai - l2 * p1.ai * p2.ai_deriv
        boundary = wronsk / (dcoef * (-cut - x_c))
        return _osc_integrate(integrand, -cut, hi, s1 + s2) + boundary

    # mixed signs: one factor decays at each end, the integral is
    # absolutely convergent
    if l1 > 0.0:
        lo = m2 - 22.0 / abs(l2)
        hi = m1 + 22.0 / l1
    else:
        lo = m1 - 22.0 / abs(l1)
        hi = m2 + 22.0 / l2
    return _osc_integrate(integrand, lo, hi, abs(l1) ** 1.5 + abs(l2) ** 1.5)


def _osc_integrate(f, lo, hi, freq):
    """Composite Gauss panels sized to the local oscillation phase.

    freq scales the far-field phase (2/3) freq |x|^(3/2) on the negative
    axis; panel edges hold the per-panel phase step near 1.2 radians
    there and fall back to a short uniform step around the origin.
    """
    nodes, weights = _GL16
    chunks = []
    x0 = min(hi, -1.0)
    if lo < x0:
        k_lo = (2.0 / 3.0) * freq * abs(x0) ** 1.5 / 1.2
        k_hi = (2.0 / 3.0) * freq * abs(lo) ** 1.5 / 1.2
        ks = np.arange(math.floor(k_lo) + 1, math.ceil(k_hi))
        inner = -(1.8 * ks / freq) ** (2.0 / 3.0)
        chunks.append(np.concatenate(([lo], inner[::-1], [x0])))
    if x0 < hi:
        left = max(lo, x0)
        npan = max(1, int(math.ceil((hi - left) * (1.0 + freq) / 0.8)))
        chunks.append(np.linspace(left, hi, npan + 1))
    edges = np.unique(np.concatenate(chunks))
    half = 0.5 * np.diff(edges)
    mid = edges[:-1] + half
    total = 0.0
    block = 12500  # panels per vectorized evaluation block
    for i in range(0, half.size, block):
        hb = half[i:i + block]
        mb = mid[i:i + block]
        xs = (mb[:, None] + hb[:, None] * nodes[None, :]).ravel()
        vals = f(xs).reshape(hb.size, nodes.size)
        total += float(((vals @ weights) * hb).sum())
    return total
