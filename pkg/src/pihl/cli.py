"""
Command-line front end.

    pi-hl bound   --n 1000 --delta 1 --lambda-span 1
    pi-hl figures --out figs/
    pi-hl scaling --n 10 50 200
    pi-hl prior   --kind kaiser --alpha 2 --bandwidth 8
    pi-hl well    --width 102 --points 4000
    pi-hl freq    --time 2 --lambda-span 1
    pi-hl sample  --n 20 --state sine --seed 1 --count 100000

CSV output uses 12 significant digits, a header row and LF line endings.
Files are written atomically (temporary file, then rename).
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import bounds, estimation, priors
from .numerics import QuadratureError, QuadratureSpec

WARN_VACUOUS = "bound vacuous below N*delta = 26.09"


class CLIError(Exception):
    pass


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def csv_text(header, rows, comments=()) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    for line in comments:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(Path(out), text)
    else:
        sys.stdout.write(text)


def spectrum_from_args(args) -> bounds.GeneratorSpectrum:
    if args.lambda_span is not None:
        if not args.lambda_span > 0:
            raise CLIError("lambda span must be positive (need lambda_plus > lambda_minus)")
        return bounds.GeneratorSpectrum.from_span(args.lambda_span)
    if args.lambda_minus is None or args.lambda_plus is None:
        return bounds.GeneratorSpectrum(-0.5, 0.5)
    if not args.lambda_plus > args.lambda_minus:
        raise CLIError("need --lambda-plus > --lambda-minus")
    return bounds.GeneratorSpectrum(args.lambda_minus, args.lambda_plus)


# --- commands ----------------------------------------------------------------


def cmd_bound(args) -> int:
    spec = spectrum_from_args(args)
    if args.N is not None:
        N = args.N
    elif args.n is not None:
        if args.n < 1:
            raise CLIError("--n must be >= 1")
        N = args.n * spec.span
    else:
        raise CLIError("give --n (with the generator spectrum) or --N")
    inputs = bounds.BoundInputs(N, args.delta)
    report = bounds.bound_report(inputs)
    if report.vacuous:
        print(f"warning: {WARN_VACUOUS} (N*delta = {inputs.product:.6g})", file=sys.stderr)

    if args.format == "json":
        emit(json.dumps(report.to_json(), indent=2) + "\n", args.out)
        return 0
    rows = []
    for name in ("bound_bandlimited", "bound1_raw", "bound2"):
        v = getattr(report, name)
        rows.append((name, v, None if v is None else math.sqrt(max(v, 0.0))))
    for name in ("conventional_hl", "pi_hl"):
        v = getattr(report, name)
        rows.append((name, v * v, v))
    if args.n is not None:
        sql, _ = bounds.conventional_limits(args.n, args.k, spec)
        rows.append(("conventional_sql", sql * sql, sql))
    text = csv_text(("quantity", "mse", "rmse"), rows, comments=[
        f"N={fmt(report.N)} delta={fmt(report.delta)} alpha={fmt(report.alpha)} "
        f"L={fmt(report.L)} epsilon={fmt(report.epsilon)}"
    ])
    emit(text, args.out)
    return 0


def figure_nalpha(alphas=None, spec: QuadratureSpec | None = None):
    if alphas is None:
        alphas = np.round(np.arange(1.0, 6.0 + 1e-9, 0.1), 10)
    rows = []
    for a in alphas:
        n_alpha = priors.kaiser_normalization(a, spec)
        rows.append((a, n_alpha / priors.kaiser_normalization_asymptote(a),
                     n_alpha / priors.kaiser_normalization_series(a)))
    return ("alpha", "ratio_asymptote", "ratio_series"), rows


def figure_repsilon(points: int = 200):
    eps = np.linspace(bounds.EPS_MAX / points, bounds.EPS_MAX, points)
    rows = [(e, bounds.r_epsilon(e) / e**2, bounds.R_EPSILON_CAP) for e in eps]
    return ("eps", "r_over_eps2", "cap"), rows


def figure_bound(points: int = 50, lo: float = 30.0, hi: float = 1e6):
    rows = []
    for x in np.geomspace(lo, hi, points):
        inputs = bounds.BoundInputs(x, 1.0)
        scale = x**2 / math.pi**2
        b1 = bounds.bound1(inputs, bounds.default_params(inputs))
        rows.append((x, b1 * scale, bounds.bound2(inputs) * scale))
    return ("N_delta", "bound1_scaled", "bound2_scaled"), rows


_PLOT_SCRIPT = """\
# Plot {csv} (requires matplotlib).
import csv
import matplotlib.pyplot as plt

with open("{csv}") as fh:
    rows = [r for r in csv.DictReader(fh)]
x = [float(r["{x}"]) for r in rows]
for col in {cols!r}:
    plt.plot(x, [float(r[col]) for r in rows], label=col)
{extra}plt.xlabel("{x}")
plt.legend()
plt.savefig("{png}")
"""


def _plot_script(csv_name, x, cols, extra=""):
    return _PLOT_SCRIPT.format(csv=csv_name, x=x, cols=list(cols), extra=extra,
                               png=csv_name.replace(".csv", ".png"))


def cmd_figures(args) -> int:
    out = Path(args.out or ".")
    if not out.is_dir():
        raise CLIError(f"output directory {out} does not exist")
    spec = QuadratureSpec.from_env()
    figs = {
        "fig_nalpha.csv": (figure_nalpha(spec=spec), ""),
        "fig_repsilon.csv": (figure_repsilon(), ""),
        "fig_bound.csv": (figure_bound(), 'plt.xscale("log")\nplt.axhline(1.0, color="g")\n'),
    }
    for name, ((header, rows), extra) in figs.items():
        write_atomic(out / name, csv_text(header, rows))
        script = _plot_script(name, header[0], header[1:], extra)
        write_atomic(out / name.replace("fig_", "plot_").replace(".csv", ".py"), script)
        print(out / name)
    return 0


def _n_values(args) -> list[int]:
    values = list(args.n or [])
    if args.n_range:
        start, stop, step = args.n_range
        values.extend(range(start, stop + 1, step))
    if not values:
        raise CLIError("give --n values or --n-range START STOP STEP")
    if min(values) < 1:
        raise CLIError("every n must be >= 1")
    return values


def cmd_scaling(args) -> int:
    rows = estimation.scaling_sweep(_n_values(args))
    if args.format == "json":
        data = [dict(zip(estimation.CSV_COLUMNS + ("sandwich_violation",),
                         r.csv_row() + (r.sandwich_violation,))) for r in rows]
        emit(json.dumps(data, indent=2) + "\n", args.out)
    else:
        header = estimation.CSV_COLUMNS + ("sandwich_violation",)
        emit(csv_text(header, [r.csv_row() + (r.sandwich_violation,) for r in rows]), args.out)
    violations = sum(r.sandwich_violation for r in rows)
    if violations:
        print(f"warning: {violations} sandwich violation(s)", file=sys.stderr)
    return 0


def _parse_weights(text: str):
    out = []
    for item in text.split(","):
        l, p = item.split(":")
        out.append((int(l), float(p)))
    return out


def cmd_prior(args) -> int:
    spec = QuadratureSpec.from_env()
    kind = args.kind
    summary = []
    if kind == "kaiser":
        _require(args, "alpha", "bandwidth")
        prior = priors.KaiserPrior.create(args.alpha, args.bandwidth, spec)
        reach = 4 * prior.core_halfwidth
        summary = [
            ("total_mass", priors.kaiser_total_mass(prior, spec)),
            ("tail_mass", priors.kaiser_tail_mass(prior)),
            ("tail_mass_bound", priors.kaiser_tail_mass_bound(args.alpha, spec)),
            ("bandwidth_excess", priors.bandwidth_excess(prior, tol=spec.abs_tol)),
        ]
        density = prior.density
    elif kind == "smeared":
        _require(args, "alpha", "bandwidth", "delta")
        try:
            prior = priors.SmearedRectPrior.create(args.alpha, args.bandwidth, args.delta, spec)
        except ValueError as exc:
            raise CLIError(str(exc)) from exc
        reach = prior.delta
        density = lambda phi: prior.density(phi, spec)  # noqa: E731
        summary = [
            ("outside_mass", priors.smeared_outside_mass(prior)),
            ("tail_mass_bound", priors.kaiser_tail_mass_bound(args.alpha, spec)),
        ]
    elif kind == "rect":
        _require(args, "delta")
        prior = priors.RectPrior(args.delta)
        reach = prior.delta
        density = prior.density
        summary = [("total_mass", 1.0)]
    else:
        _require(args, "delta", "weights")
        prior = priors.comb_from_samples(args.delta, _parse_weights(args.weights))
        lo, hi = prior.support
        reach = max(abs(lo), abs(hi)) * 1.1
        density = prior.density
        summary = [("total_mass", prior.total_mass())]

    phi = np.linspace(-reach, reach, args.points)
    dens = np.atleast_1d(density(phi))
    if args.format == "json":
        payload = {"prior": prior.to_json(), "phi": phi.tolist(), "density": dens.tolist(),
                   "summary": dict(summary)}
        emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        comments = [f"{k}={fmt(v)}" for k, v in summary]
        emit(csv_text(("phi", "density"), zip(phi, dens), comments), args.out)
    return 0


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise CLIError("missing required option(s): " + ", ".join("--" + n for n in missing))


def cmd_well(args) -> int:
    W, pts = args.width, args.points
    if not W > 0:
        raise CLIError("--width must be positive")
    if pts < 10:
        raise CLIError("--points must be >= 10")
    state = bounds.well_ground_state(W, pts)
    exact = math.pi**2 / W**2
    order = bounds.well_convergence_order(W, pts)
    rows = [("energy", state.energy), ("analytic", exact),
            ("relative_error", abs(state.energy - exact) / exact), ("order", order),
            ("profile_sup_error", float(np.max(np.abs(state.profile - np.sin(math.pi * state.mu / W)))))]
    if args.format == "json":
        emit(json.dumps(dict(rows), indent=2) + "\n", None)
    else:
        emit(csv_text(("quantity", "value"), rows), None)
    if args.out:
        write_atomic(Path(args.out), csv_text(("mu", "profile", "sine"),
                                              zip(state.mu, state.profile, np.sin(math.pi * state.mu / W))))
    return 0


def cmd_freq(args) -> int:
    spec = spectrum_from_args(args)
    if not args.time > 0:
        raise CLIError("--time must be positive")
    value = bounds.frequency_bound(args.time, spec)
    if args.format == "json":
        emit(json.dumps({"T": args.time, "span": spec.span, "delta_omega": value}) + "\n", args.out)
    else:
        emit(csv_text(("T", "span", "delta_omega"), [(args.time, spec.span, value)]), args.out)
    return 0


_STATES = {
    "optimal": lambda n: estimation.optimal_probe(n)[0],
    "sine": estimation.sine_state,
    "noon": estimation.noon_state,
    "uniform": estimation.uniform_state,
}


def cmd_sample(args) -> int:
    if args.n < 1:
        raise CLIError("--n must be >= 1")
    if args.count < 2:
        raise CLIError("--count must be >= 2")
    state = _STATES[args.state](args.n)
    draws = estimation.sample_outcome(state, args.phi, args.seed, size=args.count)
    sq = (draws - args.phi) ** 2
    stderr = float(sq.std(ddof=1) / math.sqrt(sq.size))
    row = {"n": args.n, "state": args.state, "seed": args.seed, "count": args.count,
           "mse_mc": float(sq.mean()), "stderr": stderr, "mse_exact": estimation.covariant_mse(state)}
    if args.format == "json":
        emit(json.dumps(row, indent=2) + "\n", args.out)
    else:
        emit(csv_text(tuple(row), [tuple(row.values())]), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pi-hl", description="pi-corrected Heisenberg limit toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="csv"):
        p.add_argument("--out", help="output file (directory for 'figures')")
        p.add_argument("--format", choices=("csv", "json"), default=fmt_default)

    def spectrum(p):
        p.add_argument("--lambda-minus", type=float)
        p.add_argument("--lambda-plus", type=float)
        p.add_argument("--lambda-span", type=float, help="lambda_plus - lambda_minus")

    p = sub.add_parser("bound", help="evaluate all bounds for one (N, delta)")
    p.add_argument("--n", type=int, help="number of gate applications")
    p.add_argument("--N", type=float, help="total resource n*(lambda_plus - lambda_minus)")
    p.add_argument("--k", type=int, default=1, help="repetitions for the conventional SQL")
    p.add_argument("--delta", type=float, required=True, help="prior cell width (radians)")
    spectrum(p)
    common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("figures", help="write figure CSVs and matching plot scripts")
    common(p)
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("scaling", help="optimal covariant MSE against n")
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--n-range", type=int, nargs=3, metavar=("START", "STOP", "STEP"))
    common(p)
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("prior", help="sample a prior density")
    p.add_argument("--kind", choices=("kaiser", "smeared", "rect", "comb"), required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--bandwidth", type=float, help="bandwidth L")
    p.add_argument("--delta", type=float)
    p.add_argument("--weights", help="comb cells as l:p,l:p,...")
    p.add_argument("--points", type=int, default=401)
    common(p)
    p.set_defaults(func=cmd_prior)

    p = sub.add_parser("well", help="finite-difference infinite-well ground state")
    p.add_argument("--width", type=float, required=True)
    p.add_argument("--points", type=int, default=4000)
    common(p)
    p.set_defaults(func=cmd_well)

    p = sub.add_parser("freq", help="frequency estimation bound")
    p.add_argument("--time", type=float, required=True, help="total interrogation time T")
    spectrum(p)
    common(p)
    p.set_defaults(func=cmd_freq)

    p = sub.add_parser("sample", help="Monte-Carlo covariant MSE of a probe state")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--state", choices=tuple(_STATES), default="optimal")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=100_000)
    p.add_argument("--phi", type=float, default=0.0, help="true phase")
    common(p)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CLIError, ValueError, OSError, QuadratureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
