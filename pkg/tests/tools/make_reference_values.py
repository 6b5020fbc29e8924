"""Regenerate the frozen reference constants used by the test suite.

Everything here is computed with mpmath at high working precision, completely
independently of the package under test.  Run it from the repository root:

    python3 tests/tools/make_reference_values.py

and paste the printed blocks into the matching test modules (or into
``src/crosswidth/airy.py`` for the anchor table) if they ever need to be
refreshed.  The script is deliberately slow and paranoid: several quantities
are computed along two different routes and cross-checked before printing.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath as mp


def phase_poly(n: int, y, eta):
    """Inner phase  integral_0^eta (y + t^2)^n dt  expanded binomially."""
    total = mp.mpf(0) if not isinstance(eta, mp.mpc) else mp.mpc(0)
    total = 0
    for k in range(n + 1):
        c = mp.binomial(n, k)
        total += c * y ** (n - k) * eta ** (2 * k + 1) / (2 * k + 1)
    return total


def gen_airy_mp(n: int, y: float, extra_dps: int = 35):
    """Generalized Airy value via the rotated-ray form of the defining integral.

    The real-line integral (1/2pi) int exp(i * phase(eta)) deta is rotated onto
    the ray eta = rho * exp(i*pi/(2*(2n+1))), rho >= 0, on which the integrand
    decays superexponentially; by symmetry the value is Re of the ray integral
    over pi.  Working precision absorbs the interior cancellation (the hump of
    size exp(c_n |y|^(n+1/2)) for negative y, resp. the tiny result for
    positive y).
    """
    cn = float(Fraction(2 ** (2 * n) * math.factorial(n) ** 2,
                        math.factorial(2 * n + 1)))
    cancel_digits = int(cn * abs(y) ** (n + 0.5) * 0.4343) + 1
    dps = 25 + extra_dps + cancel_digits
    with mp.workdps(dps):
        yy = mp.mpf(y)
        theta = mp.pi / (2 * (2 * n + 1))
        w = mp.expjpi(mp.mpf(1) / (2 * (2 * n + 1)))

        def f(rho):
            return mp.exp(1j * phase_poly(n, yy, rho * w))

        s = mp.sqrt(abs(yy)) if y != 0 else mp.mpf(1)
        pts = [0, s, 2 * s, 4 * s, mp.inf]
        val = mp.re(w * mp.quad(f, pts)) / mp.pi
        return +val


def an_zero_mp(n: int):
    """Closed value at the origin via the degenerate stationary phase identity."""
    with mp.workdps(60):
        return (mp.power(2 * n + 1, mp.mpf(1) / (2 * n + 1))
                * mp.gamma(mp.mpf(2 * n + 2) / (2 * n + 1))
                * mp.cos(mp.pi / (2 * (2 * n + 1))) / mp.pi)


def neg_amplitude_mp(n: int, y: float):
    """Leading negative-axis asymptotic value (derived amplitude, prefactor 2/pi)."""
    with mp.workdps(60):
        t = mp.mpf(abs(y))
        cn = mp.mpf(2 ** (2 * n) * math.factorial(n) ** 2) / math.factorial(2 * n + 1)
        amp = (2 / mp.pi) * mp.power(mp.mpf(n + 1) / 2 ** n, mp.mpf(1) / (n + 1)) \
            * mp.gamma(mp.mpf(n + 2) / (n + 1))
        if n % 2 == 1:
            osc = mp.cos(cn * t ** (n + mp.mpf('0.5')) - mp.pi / (2 * (n + 1)))
        else:
            osc = mp.cos(mp.pi / (2 * (n + 1))) * mp.cos(cn * t ** (n + mp.mpf('0.5')))
        return amp * osc * t ** (-mp.mpf(n) / (2 * (n + 1)))


def fmt(x, digits: int = 17) -> str:
    return mp.nstr(mp.mpf(x), digits, strip_zeros=False)


def airy_anchor_table():
    print("# --- Airy anchor table: center -> (Ai, Ai', Bi, Bi') ------------")
    print("_ANCHORS = {")
    with mp.workdps(40):
        for c in range(-10, 11):
            ai = mp.airyai(c)
            aip = mp.airyai(c, derivative=1)
            bi = mp.airybi(c)
            bip = mp.airybi(c, derivative=1)
            print(f"    {c}: ({fmt(ai)}, {fmt(aip)}, {fmt(bi)}, {fmt(bip)}),")
    print("}")


def airy_far_values():
    print("# --- far-field Airy reference values ---------------------------")
    with mp.workdps(40):
        for y in (-200.0, -100.0, -50.0, -12.5, 12.0, 20.0, 50.0, 80.0):
            ai = mp.airyai(y)
            aip = mp.airyai(y, derivative=1)
            bi = mp.airybi(y)
            bip = mp.airybi(y, derivative=1)
            print(f"    {y!r}: ({fmt(ai)}, {fmt(aip)}, {fmt(bi)}, {fmt(bip)}),")


def gen_airy_anchors():
    print("# --- generalized Airy anchors: (n, y) -> value ------------------")
    with mp.workdps(40):
        a1 = gen_airy_mp(1, -5.0)
        check = mp.airyai(-5.0)
        assert abs(a1 - check) < mp.mpf(10) ** (-25), (a1, check)
        a1p = gen_airy_mp(1, 2.0)
        checkp = mp.airyai(2.0)
        assert abs(a1p - checkp) < mp.mpf(10) ** (-25), (a1p, checkp)
    pairs = [(1, -10.0), (1, -5.0), (1, -1.0), (1, 2.0), (1, 4.0),
             (1, 12.0), (1, 16.0),
             (2, -8.0), (2, -5.0), (2, -1.0), (2, 2.0), (2, 3.0),
             (2, 6.0), (2, 10.0),
             (3, -3.0), (3, -1.0), (3, 1.0),
             (4, -2.0), (5, -1.5), (6, -2.0)]
    print("GEN_AIRY_ANCHORS = {")
    for n, y in pairs:
        v = gen_airy_mp(n, y)
        print(f"    ({n}, {y!r}): {fmt(v)},")
    print("}")
    print("# origin values, rotated-ray quadrature vs closed form")
    print("GEN_AIRY_ZERO = {")
    for n in range(1, 7):
        vq = gen_airy_mp(n, 0.0)
        vc = an_zero_mp(n)
        assert abs(vq - vc) < mp.mpf(10) ** (-25), (n, vq, vc)
        print(f"    {n}: {fmt(vc)},")
    print("}")


def deep_oscillatory_check():
    print("# --- deep negative-axis check (quadrature vs leading amplitude) --")
    for n, y in ((1, -30.0), (2, -14.0), (3, -8.0)):
        v = gen_airy_mp(n, y)
        lead = neg_amplitude_mp(n, y)
        rel = float(abs((v - lead) / v))
        print(f"    n={n} y={y}: value={fmt(v)} leading={fmt(lead)} rel_gap={rel:.3e}")


def cn_table():
    print("# --- c_n = int_0^1 (1-t^2)^n dt as exact fractions --------------")
    for n in range(1, 7):
        frac = Fraction(2 ** (2 * n) * math.factorial(n) ** 2,
                        math.factorial(2 * n + 1))
        with mp.workdps(40):
            quad = mp.quad(lambda t: (1 - t ** 2) ** n, [0, 1])
            assert abs(quad - mp.mpf(frac.numerator) / frac.denominator) < mp.mpf(10) ** (-35)
        print(f"    {n}: Fraction({frac.numerator}, {frac.denominator}),")


def model_constants():
    print("# --- shipped-model closed-form constants ------------------------")
    with mp.workdps(50):
        # quintic-contact model (contact order 2): coupling at the crossing
        a2_zero = an_zero_mp(2)
        kappa2 = 2 * mp.power(5, mp.mpf(1) / 5) * mp.gamma(mp.mpf(6) / 5) \
            * mp.cos(mp.pi / 10)
        kappa2_via_a2 = 2 * mp.pi * a2_zero  # q_2 = 1, v0 = 1 for this model
        assert abs(kappa2 - kappa2_via_a2) < mp.mpf(10) ** (-40)
        print(f"    A2_ZERO      = {fmt(a2_zero)}")
        print(f"    KAPPA2_ZERO  = {fmt(kappa2)}")
        width = kappa2 ** 2 / mp.pi * mp.mpf('1e-4') ** (mp.mpf(7) / 5)
        print(f"    WIDTH_EXAMPLE (h=1e-4)  = {fmt(width)}")

        # linear-contact model (contact order 1): V1' = 1, V2' = 2
        a1_zero = an_zero_mp(1)
        q1 = -mp.power(2, -mp.mpf(1) / 4)
        kappa1_kpn = 2 * mp.pi / mp.power(2, mp.mpf(1) / 4) \
            * (-mp.power(-q1, -mp.mpf(1) / 3)) * a1_zero
        # rewrite through the iterated-bracket constant |B| = 2, slope ratio 1/2
        kappa1_bracket = -2 * mp.power(mp.mpf(6) / 2, mp.mpf(1) / 3) \
            * mp.power(mp.mpf(1) / 2, mp.mpf(1) / 6) \
            * mp.gamma(mp.mpf(4) / 3) * mp.cos(mp.pi / 6)
        assert abs(kappa1_kpn - kappa1_bracket) < mp.mpf(10) ** (-40), \
            (kappa1_kpn, kappa1_bracket)
        print(f"    A1_ZERO      = {fmt(a1_zero)}")
        print(f"    KAPPA1_ZERO  = {fmt(kappa1_kpn)}")

        # cubic-contact model (contact order 3): q_3 = -1, v0 = 1
        a3_zero = an_zero_mp(3)
        q3 = mp.mpf(-1)
        kappa3 = 2 * mp.pi * (-mp.power(-q3, -mp.mpf(1) / 7)) * a3_zero
        print(f"    A3_ZERO      = {fmt(a3_zero)}")
        print(f"    KAPPA3_ZERO  = {fmt(kappa3)}")


def main():
    airy_anchor_table()
    airy_far_values()
    gen_airy_anchors()
    deep_oscillatory_check()
    cn_table()
    model_constants()


if __name__ == "__main__":
    main()
