"""Command-line front end.

Every figure command writes one CSV per curve::

    # W0_mixed, alpha=30, V=1000, form=derived; gamma_t dimensionless
    gamma_t,value
    1.0000000000000001e-05,-6.3564...e-01
    ...

Exit status: 0 success, 1 usage error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from pathlib import Path

from . import decoherence as dc
from .states import MqsParams, linear_entropy, mean_photon_mixed, mean_photon_pure

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2

FIGURES = {
    "fig1": {"panels": [[(20, 1), (30, 1), (50, 1)]], "grid": (1e-5, 1.0)},
    "fig2": {"panels": [[(30, 1), (30, 1e3)], [(100, 1), (100, 1e4)]], "grid": (1e-5, 1.0)},
    "fig3": {"panels": [[(30, 1), (20, 1e3)], [(100, 1), (50, 1.5e4)]], "grid": (1e-5, 1.0)},
    "fig4": {"panels": [[(30, 1e3)], [(100, 1e4)]], "grid": (1e-5, 1e-2)},
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _pair(text: str) -> MqsParams:
    try:
        return MqsParams.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def curve_csv(curve: dc.Curve) -> str:
    p = curve.params
    head = f"# {curve.quantity}, alpha={p.alpha:g}, V={p.V:g}"
    if "form" in curve.meta:
        head += f", form={curve.meta['form']}"
    lines = [head + "; gamma_t dimensionless", "gamma_t,value"]
    lines += [f"{_fmt(t)},{_fmt(v)}" for t, v in zip(curve.gamma_t, curve.values)]
    return "\n".join(lines) + "\n"


def curve_filename(prefix: str, curve: dc.Curve) -> str:
    p = curve.params
    return f"{prefix}_{curve.quantity}_a{p.alpha:g}_V{p.V:g}.csv"


def write_curves(curves, out: str, prefix: str):
    """Write each curve to ``out/<prefix>_<quantity>_a<alpha>_V<V>.csv``, or all
    of them to stdout when ``out`` is ``-``.  Returns the paths written."""
    if out == "-":
        for c in curves:
            sys.stdout.write(curve_csv(c))
        return []
    root = Path(out)
    root.mkdir(parents=True, exist_ok=True)
    paths = []
    for c in curves:
        path = root / curve_filename(prefix, c)
        path.write_text(curve_csv(c))
        paths.append(path)
    return paths


def _grid(args, default):
    tmin = default[0] if args.tmin is None else args.tmin
    tmax = default[1] if args.tmax is None else args.tmax
    return dc.time_grid(tmin, tmax, args.tcount, args.tscale)


def _describe(p: MqsParams) -> str:
    nbar = mean_photon_pure(p.alpha) if p.is_pure else mean_photon_mixed(p)
    return f"alpha={p.alpha:g} V={p.V:g}: linear entropy {linear_entropy(p):.6f}, mean photons {nbar:.6g}"


def _figure_curves(name: str, args):
    figure = FIGURES[name]
    grid = _grid(args, figure["grid"])
    panels = []
    for pairs in figure["panels"]:
        params = [MqsParams(a, V) for a, V in pairs]
        if name == "fig4":
            p = params[0]
            panels.append([dc.decay_mixture_curve(p, grid), dc.single_decay_curve(p, grid)])
        else:
            panels.append([dc.w0_curve(p, grid, form=args.form) for p in params])
    return panels


def cmd_figure(args) -> int:
    panels = _figure_curves(args.command, args)
    curves = [c for panel in panels for c in panel]
    paths = write_curves(curves, args.out, args.command)
    seen = set()
    for c in curves:
        if c.params not in seen and c.quantity != "single_decay":
            seen.add(c.params)
            print(_describe(c.params), file=sys.stderr)
    for path in paths:
        print(path, file=sys.stderr)
    if args.plot:
        if args.out == "-":
            raise UsageError("--plot needs a directory for --out")
        from .plotting import render

        png = Path(args.out) / f"{args.command}.png"
        render(panels, png, title=args.command)
        print(png, file=sys.stderr)
    return EXIT_OK


def _sweep_params(args):
    params = list(args.pair or [])
    if args.alpha:
        for a, V in itertools.product(args.alpha, args.V or [1.0]):
            params.append(MqsParams(a, V))
    elif args.V:
        raise UsageError("--V needs at least one --alpha")
    if not params:
        raise UsageError("sweep needs --pair alpha:V or --alpha/--V")
    return params


def cmd_sweep(args) -> int:
    grid = _grid(args, (1e-5, 1.0))
    curves = []
    for p in _sweep_params(args):
        if args.quantity == "W0":
            curves.append(dc.w0_curve(p, grid, form=args.form))
        else:
            curves.append(dc.decay_mixture_curve(p, grid))
    for path in write_curves(curves, args.out, "sweep"):
        print(path, file=sys.stderr)
    if args.plot:
        if args.out == "-":
            raise UsageError("--plot needs a directory for --out")
        from .plotting import render

        png = Path(args.out) / "sweep.png"
        render([curves], png, title="sweep")
        print(png, file=sys.stderr)
    return EXIT_OK


def cmd_crossover(args) -> int:
    lo, hi = args.bracket
    try:
        t = dc.crossover_time(args.pure, args.mixed, (lo, hi), form=args.form)
    except dc.NoCrossoverError as exc:
        print(f"crossover: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"bracket,{_fmt(lo)},{_fmt(hi)}")
    print(f"crossover_gamma_t,{_fmt(t)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_all

    checks = run_all()
    worst = 0.0
    for c in checks:
        worst = max(worst, c.deviation)
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.deviation:.3e} <= {c.tol:.0e}  {c.name}")
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed; max deviation {worst:.3e}")
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mixedcat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def grid_opts(sp):
        sp.add_argument("--tmin", type=float, help="smallest gamma_t")
        sp.add_argument("--tmax", type=float, help="largest gamma_t")
        sp.add_argument("--tcount", type=int, default=400, help="number of samples (default 400)")
        sp.add_argument("--tscale", choices=("log", "lin"), default="log")
        sp.add_argument("--out", default=".", help="output directory, or - for stdout")
        sp.add_argument("--plot", action="store_true", help="also render a PNG (needs matplotlib)")

    def form_opt(sp):
        sp.add_argument("--form", choices=tuple(dc.WIGNER_ORIGIN_FORMS), default="derived",
                        help="closed form for W(0) (default: derived)")

    for name, help_ in (("fig1", "W(0) of pure cats, alpha = 20, 30, 50"),
                        ("fig2", "pure vs mixed cats at equal separation"),
                        ("fig3", "pure vs mixed cats at equal mean photon number"),
                        ("fig4", "decay mixture C(t) vs the single decay")):
        sp = sub.add_parser(name, help=help_)
        grid_opts(sp)
        form_opt(sp)
        sp.set_defaults(func=cmd_figure)

    sp = sub.add_parser("sweep", help="curves for arbitrary parameters")
    grid_opts(sp)
    form_opt(sp)
    sp.add_argument("--pair", type=_pair, action="append", metavar="ALPHA:V")
    sp.add_argument("--alpha", type=float, action="append")
    sp.add_argument("--V", type=float, action="append")
    sp.add_argument("--quantity", choices=("W0", "C"), default="W0")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("crossover", help="gamma_t where pure and mixed W(0) cross")
    sp.add_argument("--pure", type=_pair, required=True, metavar="ALPHA")
    sp.add_argument("--mixed", type=_pair, required=True, metavar="ALPHA:V")
    sp.add_argument("--bracket", type=float, nargs=2, default=(1e-4, 1e-2), metavar=("LO", "HI"))
    form_opt(sp)
    sp.set_defaults(func=cmd_crossover)

    sp = sub.add_parser("verify", help="closed forms vs the Fock-space oracle")
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"mixedcat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
