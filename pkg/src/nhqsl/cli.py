"""Command-line front end.

Every subcommand emits data only (CSV or JSON) on stdout or to ``--out``.
Exit codes: 0 success, 2 invalid arguments, 3 numerical domain error,
4 I/O error.
"""

import argparse
import csv
import io
import json
import logging
import math
import sys

import numpy as np

from . import analysis, bounds, models, scatter
from .dynamics import orthogonality_time
from .errors import NhqslError, NumericalDomainError

log = logging.getLogger("nhqsl")

EXIT_OK, EXIT_ARGS, EXIT_DOMAIN, EXIT_IO = 0, 2, 3, 4


class ArgumentError(Exception):
    pass


def _floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _grid(text, lo, hi):
    """``N`` gives ``N`` cell midpoints on (lo, hi); otherwise a comma list."""
    if "," not in text:
        try:
            n = int(text)
        except ValueError:
            raise ArgumentError(f"bad grid {text!r}")
        if n < 1:
            raise ArgumentError("grid size must be positive")
        return lo + (np.arange(n) + 0.5) * (hi - lo) / n
    return np.array(_floats(text))


def _num(x):
    if x is None:
        return None
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    x = float(x)
    return x if math.isfinite(x) else str(x)


def _canonical(args):
    if args.mu is None or args.nu is None:
        raise ArgumentError("--mu and --nu are required")
    return models.TwoLevelCanonical(args.mu, args.nu), models.StateAngles(args.alpha, args.phi)


def _system(args):
    """Spectrum and state for ``bounds``: two-level if ``--mu`` is given, else WPT FIS."""
    if args.mu is not None:
        c, s = _canonical(args)
        spec, plus_first = models.canonical_spectrum(c)
        return spec, models.canonical_state(s, plus_first)
    _, spec = scatter.wpt_system(_wpt_model(args))
    return spec, analysis.fis(spec)


def _wpt_model(args):
    return {"kappa": args.kappa, "eta": args.eta, "sigma": args.sigma}


def cmd_bounds(args):
    spec, state = _system(args)
    horizon = args.horizon or (8 * math.pi / spec.omega_max if spec.omega_max > 0 else 50.0)
    out = {"omega": spec.omega.tolist(), "gamma": spec.gamma.tolist(),
           "populations": state.populations.tolist(),
           "tau": orthogonality_time(state, spec, horizon, args.eps)}
    for kind in (bounds.BoundKind.ML, bounds.BoundKind.MT, bounds.BoundKind.WML, bounds.BoundKind.WMT):
        out["tau_" + kind.value.lower()] = bounds.tau_bound(kind, state, spec, horizon)
    out["tau_comb"] = bounds.tau_comb(state, spec, horizon)
    if spec.dim == 2:
        out["tau_g"] = bounds.tau_bound(bounds.BoundKind.G, state, spec, horizon)
    if args.time is not None:
        t = args.time
        p = state.populations
        out["t"] = t
        out["f_ml"] = float(bounds.ml_kernel(p, spec, t)[0])
        rad = float(bounds.mt_radicand(p, spec, t)[0])
        out["f_mt"] = bounds.f_mt(state, spec, t).value if rad >= 0 else None
        out["f_wml"], out["f_wmt"] = (e.value for e in bounds.f_weak(state, spec, t))
    return [out]


def cmd_fis(args):
    _, spec = scatter.wpt_system(_wpt_model(args))
    if args.mu is not None:
        c, _ = _canonical(args)
        spec, _ = models.canonical_spectrum(c)
    st = analysis.fis(spec)
    tmin = math.pi / spec.omega_max
    return [{"populations": st.populations.tolist(), "tau_min": tmin,
             "tau": orthogonality_time(st, spec, args.horizon, args.eps),
             "f_ml": bounds.f_ml(st, spec, tmin).value, "f_mt": bounds.f_mt(st, spec, tmin).value}]


def cmd_wpt(args):
    p = models.WptParams(args.sigma, args.eta, args.kappa)
    h, regime = models.build_wpt(p)
    return [{"regime": regime.value, "eigenvalues": [_num(z) for z in models.wpt_eigenvalues(p)],
             "tau_min": models.wpt_tau_min(p)}]


def cmd_two_level(args):
    c, s = _canonical(args)
    horizon = args.horizon or 10.0 / math.hypot(c.mu, c.nu)
    rows = []
    for t in np.linspace(horizon / args.n, horizon, args.n):
        ml, mt, g = models.two_level_bounds(c, s, float(t), check=True, strict=False)
        rows.append({"t": float(t), "f_ml": ml, "f_mt": mt, "f_g": g})
    return rows


def cmd_scan(args):
    th = _grid(args.theta_grid, 0.0, math.pi)
    al = _grid(args.alpha_grid, 0.0, 0.5 * math.pi)
    cells = analysis.delta_tau_scan(th, al, args.horizon or 200.0)
    return [{"theta": c.theta, "alpha_angle": c.alpha_angle, "delta_tau": c.delta_tau,
             "region": c.region.value, "flag": c.flag} for c in cells]


def cmd_near_fis(args):
    if args.ratio_alpha is None:
        raise ArgumentError("--ratio-alpha is required")
    tau = args.tau
    if args.ratio_alpha < 1:
        g = _floats(args.gammas) if args.gammas else [0.5, 0.0, 0.2]
        m = analysis.near_fis_below_one(g, args.ratio_alpha, args.delta, tau)
        extra = {"delta": m.delta, "b_coefficient": m.b_coefficient}
    else:
        g = _floats(args.gammas) if args.gammas else [0.1, 0.3]
        if len(g) != 2:
            raise ArgumentError("--gammas takes gamma1,gamma2k1 for ratio above one")
        m = analysis.near_fis_above_one(g[0], g[1], args.k, args.ratio_alpha, tau)
        extra = {"k": m.k, "beta": m.beta, "f_ml_predicted": m.f_ml_predicted,
                 "f_mt_predicted": m.f_mt_predicted}
    row = {"regime": m.regime.value, "ratio_alpha": m.ratio_alpha, "tau": tau,
           "omega": m.spectrum.omega.tolist(), "gamma": m.spectrum.gamma.tolist(),
           "populations": m.state.populations.tolist(),
           "f_ml": bounds.f_ml(m.state, m.spectrum, tau).value,
           "f_mt": bounds.f_mt(m.state, m.spectrum, tau).value,
           "alpha_ratio": analysis.alpha_ratio(m.state, m.spectrum, tau)}
    row.update(extra)
    return [row]


def cmd_scatter(args):
    cfg = scatter.RunConfig("scatter", _wpt_model(args), args.seed, args.n, args.horizon,
                            args.eps, args.out, args.format, args.inject_fis)
    records, summary = scatter.run_scatter(cfg)
    if not args.out:
        scatter.write_records(records, sys.stdout, args.format, summary)
    log.info("min tau %s, %d absent, %d violations", summary.min_tau, summary.n_absent,
             summary.n_violations)
    return None


def emit(rows, fmt, out):
    """Write a list of flat-ish dicts as CSV or JSON."""
    if fmt == "json":
        text = json.dumps([{k: (v if isinstance(v, (list, str)) else _num(v)) for k, v in r.items()}
                           for r in rows], indent=1) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        keys = list(rows[0].keys())
        w.writerow(keys)
        for r in rows:
            cells = []
            for k in keys:
                v = r[k]
                if v is None:
                    cells.append("")
                elif isinstance(v, str):
                    cells.append(v)
                elif isinstance(v, list):
                    cells.append(" ".join("%.17g" % x if not isinstance(x, list) else
                                          "%.17g%+.17gj" % tuple(x) for x in v))
                else:
                    cells.append("%.17g" % v)
            w.writerow(cells)
        text = buf.getvalue()
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


COMMANDS = {
    "bounds": cmd_bounds,
    "fis": cmd_fis,
    "scatter": cmd_scatter,
    "scan-regions": cmd_scan,
    "two-level": cmd_two_level,
    "wpt": cmd_wpt,
    "near-fis": cmd_near_fis,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("WPT chain")
    g.add_argument("--kappa", type=float, default=2.5, help="coil coupling")
    g.add_argument("--eta", type=float, default=1.0, help="gain/loss rate")
    g.add_argument("--sigma", type=float, default=1.0, help="resonance frequency")
    g = common.add_argument_group("two-level canonical system")
    g.add_argument("--mu", type=float)
    g.add_argument("--nu", type=float)
    g.add_argument("--alpha", type=float, default=math.pi / 4, help="state angle")
    g.add_argument("--phi", type=float, default=0.0, help="relative phase")
    g = common.add_argument_group("region scan")
    g.add_argument("--theta-grid", default="100", help="count N or comma list")
    g.add_argument("--alpha-grid", default="100", help="count N or comma list")
    g = common.add_argument_group("near-FIS families")
    g.add_argument("--delta", type=float, default=0.01)
    g.add_argument("--ratio-alpha", type=float)
    g.add_argument("--k", type=int, default=8)
    g.add_argument("--gammas", help="g'0,g'1,g'2 (below one) or gamma1,gamma2k1 (above one)")
    g.add_argument("--tau", type=float, default=0.5, help="orthogonality time of the family")
    g = common.add_argument_group("run control")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int, default=1000, help="number of states or time points")
    g.add_argument("--horizon", type=float)
    g.add_argument("--eps", type=float, default=1e-8)
    g.add_argument("--time", type=float, help="evaluation time for `bounds`")
    g.add_argument("--inject-fis", action="store_true", help="replace state 0 by the FIS")
    g.add_argument("--out", help="output path (default stdout)")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    g.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="nhqsl", description="Speed-limit bounds for non-Hermitian systems.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _validate(args):
    if args.n < 1:
        raise ArgumentError("--n must be positive")
    if not 0 <= args.seed < 2 ** 64:
        raise ArgumentError("--seed must be an unsigned 64-bit integer")
    if args.horizon is not None and not args.horizon > 0:
        raise ArgumentError("--horizon must be positive")
    if not args.eps > 0:
        raise ArgumentError("--eps must be positive")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ARGS if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _validate(args)
        rows = COMMANDS[args.command](args)
        if rows is not None:
            emit(rows, args.format, args.out)
    except NumericalDomainError as e:
        print(f"nhqsl: numerical domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ArgumentError, NhqslError, ValueError) as e:
        print(f"nhqsl: invalid arguments: {e}", file=sys.stderr)
        return EXIT_ARGS
    except OSError as e:
        print(f"nhqsl: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
