"""Command line front end: tables, scans and convergence reports.

Subcommands: airy (function tables), scan-integral (oscillatory integral
vs its leading term over an h grid), transfer (finite-h transfer matrix
vs the closed form), resonances (quantization points and predicted
widths), check (the acceptance suite).  Output is CSV or JSON lines with
a versioned header line; floats carry 17 significant digits so identical
configurations reproduce byte-identical files.  Exit status: 0 success,
1 numeric failure, 2 usage or configuration error.
"""

import argparse
import csv
import dataclasses
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .acceptance import Suite
from .airy import airy_eval, ci_eval
from .crossing import (
    crossing_integral,
    crossing_integral_asymptotic,
    kappa_n,
    semiclassical_point,
    transfer_matrix_asymptotic,
)
from .errors import ModelError, NumericError, RangeError
from .exactsys import assemble
from .genairy import gen_airy
from .potentials import (
    SHIPPED_MODELS,
    detect_contact_order,
    get_model,
    load_model,
)
from .resonances import prediction_rows, resonance_window

_FORMATS = ("csv", "json")


def _fmt(value):
    """17-significant-digit decimal rendering, stable across runs."""
    return "%.17g" % float(value)


def _cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _fmt(value)
    return str(value)


def _json_token(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if math.isnan(x):
            return '"nan"'
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        return _fmt(x)
    return json.dumps(str(value))


class TableWriter:
    """Writes one header line plus rows, as CSV or JSON lines."""

    def __init__(self, stream, fmt, schema, columns):
        self.stream = stream
        self.fmt = fmt
        self.columns = list(columns)
        header = "crosswidth %s schema=%s.v1" % (__version__, schema)
        if fmt == "csv":
            self.stream.write("# %s\n" % header)
            self._csv = csv.writer(stream, lineterminator="\n")
            self._csv.writerow(self.columns)
        else:
            self.stream.write('{"header": %s}\n' % json.dumps(header))

    def row(self, record):
        if self.fmt == "csv":
            self._csv.writerow([_cell(record[c]) for c in self.columns])
        else:
            body = ", ".join('%s: %s' % (json.dumps(c), _json_token(record[c]))
                             for c in self.columns)
            self.stream.write("{%s}\n" % body)

    def note(self, key, value):
        """A trailing summary entry outside the row schema."""
        if self.fmt == "csv":
            self.stream.write("# %s=%s\n" % (key, _cell(value)))
        else:
            self.stream.write('{%s: %s}\n' % (json.dumps(key),
                                              _json_token(value)))


def _open_output(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _parse_grid(text, name):
    """A float grid: 'lo:hi:step' (inclusive) or a comma list or one value.

    Config files may also supply a ready-made list of numbers.
    """
    if isinstance(text, (list, tuple)):
        return [float(p) for p in text]
    if isinstance(text, (int, float)):
        return [float(text)]
    text = text.strip()
    if not text:
        raise RangeError("%s must not be empty" % name)
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise RangeError("%s range must be lo:hi:step" % name)
        lo, hi, step = (float(p) for p in parts)
        if step <= 0.0 or hi < lo:
            raise RangeError("%s range needs hi >= lo and step > 0" % name)
        count = int(round((hi - lo) / step)) + 1
        return [lo + k * step for k in range(count)]
    return [float(p) for p in text.split(",")]


def _parse_h_grid(text):
    grid = _parse_grid(text, "h grid")
    if any(h <= 0.0 for h in grid):
        raise RangeError("h grid values must be positive")
    if any(b >= a for a, b in zip(grid, grid[1:])):
        raise RangeError("h grid must be strictly decreasing")
    return grid


def _load_run_model(spec, r0_scale):
    if spec in SHIPPED_MODELS:
        model = get_model(spec)
    elif os.path.exists(spec):
        model = load_model(spec)
    else:
        raise ModelError("model %r is neither a shipped name (%s) nor a file"
                         % (spec, ", ".join(SHIPPED_MODELS)))
    if r0_scale != 1.0:
        inter = model.interaction
        inter = dataclasses.replace(
            inter,
            r0_amplitude=r0_scale * inter.r0_amplitude,
            r1_amplitude=r0_scale * inter.r1_amplitude)
        model = dataclasses.replace(model, interaction=inter)
    return model


def _complex_fields(prefix, value):
    value = complex(value)
    return {prefix + "_re": value.real, prefix + "_im": value.imag}


# -- subcommand bodies ----------------------------------------------------

def _cmd_airy(args):
    ys = _parse_grid(args.y, "y grid")
    rows = []
    for y in ys:
        pair = airy_eval(y)
        ci = ci_eval(y)
        gen = gen_airy(args.n, y)
        rows.append({
            "y": y,
            "ai": float(pair.ai),
            "bi": float(pair.bi),
            "ci_re": complex(ci.ci).real,
            "ci_im": complex(ci.ci).imag,
            "a_n": gen.value,
        })
    stream, owned = _open_output(args.output)
    try:
        table = TableWriter(stream, args.format, "airy",
                            ("y", "ai", "bi", "ci_re", "ci_im", "a_n"))
        for row in rows:
            table.row(row)
    finally:
        if owned:
            stream.close()
    return 0


def _cmd_scan_integral(args):
    model = _load_run_model(args.model, args.r0_scale)
    crossing = detect_contact_order(model)
    r0_at_0 = float(model.interaction.r0(0.0))
    h_grid = _parse_h_grid(args.h_grid)
    energy = args.energy
    rows = []
    residuals = []
    for h in h_grid:
        spoint = semiclassical_point(energy, h, crossing.n)
        integral = crossing_integral(model, model.interaction, energy, h)
        leading = crossing_integral_asymptotic(spoint, crossing, r0_at_0)
        ratio = integral / leading if leading != 0.0 else math.nan
        residual = abs(ratio - 1.0)
        rows.append({
            "h": h, "energy": energy, "lambda": spoint.lam,
            "n": crossing.n, "window": spoint.window,
            "integral": integral, "leading": leading,
            "ratio": ratio, "residual": residual,
        })
        residuals.append(residual)
    fit = [(h, r) for h, r in zip(h_grid, residuals)
           if math.isfinite(r) and r > 0.0]
    if len(fit) >= 2:
        slope = float(np.polyfit(np.log([f[0] for f in fit]),
                                 np.log([f[1] for f in fit]), 1)[0])
    else:
        slope = math.nan
    stream, owned = _open_output(args.output)
    try:
        table = TableWriter(stream, args.format, "scan-integral",
                            ("h", "energy", "lambda", "n", "window",
                             "integral", "leading", "ratio", "residual"))
        for row in rows:
            table.row(row)
        table.note("residual_slope", slope)
    finally:
        if owned:
            stream.close()
    return 0


def _cmd_transfer(args):
    model = _load_run_model(args.model, args.r0_scale)
    crossing = detect_contact_order(model)
    r0_at_0 = float(model.interaction.r0(0.0))
    h_grid = _parse_h_grid(args.h_grid)
    energy = args.energy
    columns = ["h", "energy", "n"]
    for prefix in ("t11", "t12", "t21", "t22"):
        columns += [prefix + "_re", prefix + "_im"]
    for prefix in ("s11", "s12", "s21", "s22"):
        columns += [prefix + "_re", prefix + "_im"]
    columns += ["offdiag_ratio", "diag_deviation", "contraction_ratio"]
    rows = []
    for h in h_grid:
        assembly = assemble(model, model.interaction, energy, h)
        spoint = semiclassical_point(energy, h, crossing.n)
        closed = transfer_matrix_asymptotic(spoint, crossing, r0_at_0).entries
        t = assembly.transfer.entries
        it = 1j * t
        kappa = kappa_n(crossing, r0_at_0, spoint.lam)
        denom = kappa * h ** (1.0 / (2 * crossing.n + 1))
        if denom != 0.0:
            off = 0.5 * (abs(it[0, 1]) + abs(it[1, 0])) / abs(denom)
        else:
            off = math.nan
        row = {"h": h, "energy": energy, "n": crossing.n}
        for prefix, value in zip(("t11", "t12", "t21", "t22"),
                                 (t[0, 0], t[0, 1], t[1, 0], t[1, 1])):
            row.update(_complex_fields(prefix, value))
        for prefix, value in zip(("s11", "s12", "s21", "s22"),
                                 (closed[0, 0], closed[0, 1],
                                  closed[1, 0], closed[1, 1])):
            row.update(_complex_fields(prefix, value))
        row["offdiag_ratio"] = off
        row["diag_deviation"] = max(abs(it[0, 0] - 1.0), abs(it[1, 1] - 1.0))
        row["contraction_ratio"] = assembly.diagnostics["contraction_ratio"]
        rows.append(row)
    stream, owned = _open_output(args.output)
    try:
        table = TableWriter(stream, args.format, "transfer", columns)
        for row in rows:
            table.row(row)
    finally:
        if owned:
            stream.close()
    return 0


def _cmd_resonances(args):
    model = _load_run_model(args.model, args.r0_scale)
    crossing = detect_contact_order(model)
    window = resonance_window(crossing.n, args.h, L=args.L, small=args.small)
    rows = prediction_rows(model, model.interaction, window)
    stream, owned = _open_output(args.output)
    try:
        table = TableWriter(stream, args.format, "resonances",
                            ("E_bs", "re_z", "im_z", "lambda", "kappa",
                             "window", "boundary_flag",
                             "error_exponent_re", "error_exponent_im"))
        for row in rows:
            table.row(row)
        table.note("count", len(rows))
    finally:
        if owned:
            stream.close()
    return 0


def _cmd_check(args):
    if args.criteria is None:
        indices = list(range(1, 11))
    else:
        indices = sorted({int(p) for p in args.criteria.split(",")})
        if any(not 1 <= k <= 10 for k in indices):
            raise RangeError("criteria indices must lie in [1, 10]")
    suite = Suite()
    stream, owned = _open_output(args.output)
    failures = 0
    try:
        stream.write("# crosswidth %s schema=check.v1\n" % __version__)
        for k in indices:
            result = suite.run([k])[0]
            flag = "PASS" if result.passed else "FAIL"
            # runtimes go to stderr so the report file is reproducible
            stream.write("%s criterion %2d [%s]: %s\n"
                         % (flag, result.index, result.name, result.summary))
            stream.flush()
            print("criterion %d finished in %.1f s (limit %.0f s)"
                  % (result.index, result.runtime, result.runtime_limit),
                  file=sys.stderr)
            failures += 0 if result.passed else 1
        stream.write("# %d of %d criteria passed\n"
                     % (len(indices) - failures, len(indices)))
    finally:
        if owned:
            stream.close()
    return 1 if failures else 0


# -- parser and dispatch --------------------------------------------------

def _add_common(sub, model=True):
    sub.add_argument("--format", choices=_FORMATS, default="csv",
                     help="output format (default csv)")
    sub.add_argument("--output", default="-", metavar="PATH",
                     help="output file, '-' for stdout (default)")
    sub.add_argument("--config", default=None, metavar="PATH",
                     help="JSON file with defaults for this command's flags")
    if model:
        sub.add_argument("--model", default=None,
                         help="shipped model name (%s) or a model file"
                              % ", ".join(SHIPPED_MODELS))
        sub.add_argument("--r0-scale", type=float, default=1.0,
                         dest="r0_scale", metavar="C",
                         help="scale the interaction amplitudes by C")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="crosswidth",
        description="Resonance widths from tangential crossings of two "
                    "potential curves: tables, scans and checks.")
    parser.add_argument("--version", action="version",
                        version="crosswidth %s" % __version__)
    subs = parser.add_subparsers(dest="command", required=True)

    airy = subs.add_parser(
        "airy", help="tabulate Ai, Bi, Ci and the generalized function A_n")
    airy.add_argument("--n", type=int, default=1,
                      help="generalized-Airy order for the a_n column")
    airy.add_argument("--y", default=None,
                      help="argument grid: lo:hi:step, a comma list or one "
                           "value")
    _add_common(airy, model=False)
    airy.set_defaults(func=_cmd_airy, needed=("y",))

    scan = subs.add_parser(
        "scan-integral",
        help="oscillatory integral vs its leading term over an h grid")
    scan.add_argument("--h-grid", default=None, dest="h_grid",
                      help="strictly decreasing h values (comma list)")
    scan.add_argument("--energy", type=float, default=0.0,
                      help="energy E at which to scan (default 0)")
    _add_common(scan)
    scan.set_defaults(func=_cmd_scan_integral, needed=("h_grid", "model"))

    transfer = subs.add_parser(
        "transfer",
        help="finite-h transfer matrix vs the closed-form approximation")
    transfer.add_argument("--h-grid", default=None, dest="h_grid",
                          help="strictly decreasing h values (comma list)")
    transfer.add_argument("--energy", type=float, default=0.0,
                          help="energy E (default 0)")
    _add_common(transfer)
    transfer.set_defaults(func=_cmd_transfer, needed=("h_grid", "model"))

    reson = subs.add_parser(
        "resonances",
        help="quantization points and predicted widths in the energy window")
    reson.add_argument("--h", type=float, default=None,
                       help="semiclassical parameter")
    reson.add_argument("--L", type=float, default=1.0,
                       help="window size constant (default 1)")
    reson.add_argument("--small", action="store_true",
                       help="use the narrow window |E| <= L h^(4/(2n+1))")
    _add_common(reson)
    reson.set_defaults(func=_cmd_resonances, needed=("h", "model"))

    check = subs.add_parser("check", help="run the acceptance suite")
    check.add_argument("--criteria", default=None,
                       help="comma list of criterion indices (default all)")
    _add_common(check, model=False)
    check.set_defaults(func=_cmd_check, needed=())
    return parser


def _apply_config(parser, argv):
    """Read --config JSON (if present) as defaults, then reparse fully."""
    probe, _ = parser.parse_known_args(argv)
    path = getattr(probe, "config", None)
    if not path:
        return parser.parse_args(argv)
    try:
        with open(path) as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ModelError("cannot read config %s: %s" % (path, exc))
    except ValueError as exc:
        raise ModelError("config %s is not valid JSON: %s" % (path, exc))
    if not isinstance(data, dict):
        raise ModelError("config %s must hold a JSON object" % path)
    subparsers = [
        sub
        for action in parser._actions
        if isinstance(action, argparse._SubParsersAction)
        for sub in action.choices.values()]
    known = {a.dest for a in parser._actions}
    for sub in subparsers:
        known |= {a.dest for a in sub._actions}
    defaults = {str(k).replace("-", "_"): v for k, v in data.items()}
    unknown = set(defaults) - known
    if unknown:
        raise ModelError("config %s has unknown keys: %s"
                         % (path, ", ".join(sorted(unknown))))
    for sub in subparsers:
        sub.set_defaults(**{k: v for k, v in defaults.items()
                            if k in {a.dest for a in sub._actions}})
    return parser.parse_args(argv)


def _merge_negative_grids(argv):
    """Join grid flags with values that open with a minus sign.

    argparse would otherwise read '--y -5:5:0.5' as a flag followed by
    an unknown option; rewriting it to '--y=-5:5:0.5' keeps the
    documented syntax working.
    """
    merged = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if (tok in ("--y", "--h-grid") and len(nxt) > 1
                and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == ".")):
            merged.append(tok + "=" + nxt)
            i += 2
        else:
            merged.append(tok)
            i += 1
    return merged


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    argv = _merge_negative_grids(list(argv))
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        for name in args.needed:
            if getattr(args, name) is None:
                raise ModelError("--%s is required, on the command line or "
                                 "in the config file"
                                 % name.replace("_", "-"))
        return args.func(args)
    except (RangeError, ModelError) as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return 2
    except NumericError as exc:
        print("numeric failure: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
