"""Command-line workbench: ``kgoursat <subcommand> [flags]``.

Exit codes: 0 success, 1 usage error, 2 non-convergence, 3 violated
precondition (incompatible corners, mismatched traces, out-of-domain
arguments, ...). CSV outputs start with ``#`` lines carrying the argv and
are written atomically.
"""

import argparse
import itertools
import sys

import numpy as np

from . import analysis, picard, riemann
from .bessel import SeriesParams, eval_biv_bessel
from .boundary import parse_function_spec
from .errors import ConvergenceError, PreconditionError, UsageError
from .field import Grid, read_field_csv, write_atomic
from .laplace import evolution_table, laplace
from .quadrature import QuadratureSpec

SUBCOMMANDS = (
    "bessel", "solve", "residual", "glue", "laplace", "evolve-check",
    "regime", "bound-sweep", "covering", "legendre", "growth-demo",
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fmt(v):
    return format(float(v), ".17g")


def _function(text):
    try:
        return parse_function_spec(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _complexes(text):
    try:
        return [complex(v.strip().replace("i", "j")) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated complex numbers, got {text!r}") from None


def _complex(text):
    vals = _complexes(text)
    if len(vals) != 1:
        raise argparse.ArgumentTypeError(f"expected one complex number, got {text!r}")
    return vals[0]


def _positive_int(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return n


def _line(text):
    kind, _, c = text.partition(":")
    if kind not in ("horizontal", "vertical") or not c:
        raise argparse.ArgumentTypeError("line must be horizontal:C or vertical:C")
    try:
        return picard.CharacteristicLine(kind, float(c))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad line position {c!r}") from None


def _sample_set(text):
    """Y sample: explicit list ``0,-1,-2``, ``arith:STEP,N`` (0, -STEP, ..., -N STEP)
    or ``geom:BASE,N`` (-1, -BASE, ..., -BASE^N)."""
    head, _, rest = text.partition(":")
    try:
        if head == "arith":
            step, n = rest.split(",")
            return tuple(-float(step) * k for k in range(int(n) + 1))
        if head == "geom":
            base, n = rest.split(",")
            return tuple(-float(base) ** k for k in range(int(n) + 1))
        return tuple(_floats(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad sample set {text!r}") from None


def _numerics(p):
    g = p.add_argument_group("numerics")
    g.add_argument("--panels-per-unit", type=_positive_int, default=8)
    g.add_argument("--nodes-per-panel", type=_positive_int, default=8)
    g.add_argument("--rel-tol", type=float, default=1e-15, help="series truncation tolerance")
    g.add_argument("--max-terms", type=_positive_int, default=400)


def _grid_flags(p, xmin=0.0, xmax=None, ymin=None, ymax=0.0, n=41):
    g = p.add_argument_group("grid")
    g.add_argument("--xmin", type=float, default=xmin)
    g.add_argument("--xmax", type=float, default=xmax, required=xmax is None)
    g.add_argument("--ymin", type=float, default=ymin, required=ymin is None)
    g.add_argument("--ymax", type=float, default=ymax)
    g.add_argument("--nx", type=_positive_int, default=n)
    g.add_argument("--ny", type=_positive_int, default=n)


def build_parser():
    parser = _Parser(prog="kgoursat", description="Klein-Gordon u_xy + u = 0 workbench")
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("bessel", help="evaluate J_{a,0}(x, y)")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    _numerics(p)

    p = sub.add_parser("solve", help="solve the Goursat problem on a grid")
    p.add_argument("--f", type=_function, required=True)
    p.add_argument("--g", type=_function, required=True)
    p.add_argument("--method", choices=("riemann", "picard"), default="riemann")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-iter", type=_positive_int, default=50)
    p.add_argument("--out")
    _grid_flags(p)
    _numerics(p)

    p = sub.add_parser("residual", help="quadrature-identity residual of a solution")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--field", help="field CSV (sampled bilinearly)")
    src.add_argument("--f", type=_function)
    p.add_argument("--g", type=_function)
    p.add_argument("--rect", type=_floats, help="a,a',b,b' (default: all probe rectangles)")
    p.add_argument("--max-nodes", type=_positive_int, default=41)
    _grid_flags(p, xmax=2.0, ymin=-2.0)
    _numerics(p)

    p = sub.add_parser("glue", help="residual of two solutions glued along a characteristic")
    p.add_argument("--line", type=_line, required=True, help="horizontal:C or vertical:C")
    p.add_argument("--lower-f", type=_function, required=True)
    p.add_argument("--lower-g", type=_function, required=True)
    p.add_argument("--upper-f", type=_function, required=True)
    p.add_argument("--upper-g", type=_function, required=True)
    p.add_argument("--max-nodes", type=_positive_int, default=9)
    _grid_flags(p, xmin=-1.0, xmax=1.0, ymin=-1.0, ymax=1.0, n=21)
    _numerics(p)

    p = sub.add_parser("laplace", help="truncated Laplace transform of boundary data")
    p.add_argument("--f", type=_function, required=True)
    p.add_argument("--zeta", type=_complex, required=True)
    p.add_argument("--x-max", type=float)
    _numerics(p)

    p = sub.add_parser("evolve-check", help="check the Laplace evolution law of a unilateral wave")
    p.add_argument("--f", type=_function, required=True)
    p.add_argument("--zetas", type=_complexes, default=[1, 2, 1 + 1j])
    p.add_argument("--ys", type=_floats, default=[0.0, -0.5, -1.0])
    p.add_argument("--out")
    _grid_flags(p, xmax=30.0, ymin=-1.0, n=31)
    _numerics(p)

    p = sub.add_parser("regime", help="classify the uniqueness regime")
    p.add_argument("--q", type=_floats, required=True)
    p.add_argument("--theta1", type=_floats, required=True)
    p.add_argument("--theta2", type=_floats, required=True)
    p.add_argument("--out")

    p = sub.add_parser("bound-sweep", help="growth integral against its closed-form bound")
    p.add_argument("--qs", type=_floats, default=[k / 10 for k in range(1, 10)])
    p.add_argument("--thetas", type=_floats, default=[0.5, 1.0, 2.0])
    p.add_argument("--sigmas", type=_floats, default=[0.1, 1.0, 10.0])
    p.add_argument("--out")

    p = sub.add_parser("covering", help="asymptotic covering predicate")
    p.add_argument("--Y", type=_sample_set, required=True, help="list, arith:STEP,N or geom:BASE,N")
    p.add_argument("--M", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--y1", type=float, required=True)
    p.add_argument("--depth", type=float, required=True, help="lower end of the probed range")

    p = sub.add_parser("legendre", help="convex conjugate of y exp(theta2 sqrt y)")
    p.add_argument("--theta2", type=float, required=True)
    p.add_argument("--t", type=_floats, required=True)

    p = sub.add_parser("growth-demo", help="envelope check of the ramp-driven unilateral wave")
    p.add_argument("--theta1", type=float, default=1.0)
    p.add_argument("--theta2", type=float, default=1.0)
    p.add_argument("--out")
    _grid_flags(p, xmax=6.0, ymin=-6.0, n=61)
    _numerics(p)
    return parser


def parse_args(argv):
    """Validated namespace for ``argv``; UsageError on any bad flag."""
    args = build_parser().parse_args(list(argv))
    args.argv = list(argv)
    return args


def _quad(args):
    return QuadratureSpec(args.panels_per_unit, args.nodes_per_panel)


def _series(args):
    return SeriesParams(args.rel_tol, args.max_terms)


def _grid(args, ymin=None, ymax=None):
    ymin = args.ymin if ymin is None else ymin
    ymax = args.ymax if ymax is None else ymax
    return Grid.uniform(args.xmin, args.xmax, args.nx, ymin, ymax, args.ny)


def _argv_comment(args):
    return "argv: kgoursat " + " ".join(args.argv)


def _write_csv(args, header, rows):
    lines = [f"# {_argv_comment(args)}", header]
    lines.extend(",".join(r) for r in rows)
    write_atomic(args.out, "\n".join(lines) + "\n")


def cmd_bessel(args):
    v = eval_biv_bessel(args.a, args.x, args.y, _series(args))
    print(f"J_{args.a},0({args.x:g}, {args.y:g}) = {_fmt(v.value.real)} est_error {v.est_error:.3g}")


def cmd_solve(args):
    grid = _grid(args)
    if args.method == "riemann":
        field = riemann.riemann_solve(args.f, args.g, grid, _quad(args), _series(args))
        extra = ""
    else:
        field, rep = picard.picard_solve(args.f, args.g, grid, _quad(args), args.tol, args.max_iter)
        extra = f" iterations {rep.iterations} update {rep.final_update_sup:.3g}"
    if args.out:
        field.to_csv(args.out, [_argv_comment(args)])
    print(f"solve {args.method} grid {grid.shape[0]}x{grid.shape[1]} max|u| {np.max(np.abs(field.values)):.6g}{extra}")


def cmd_residual(args):
    quad = _quad(args)
    if args.field:
        u = read_field_csv(args.field)
        probe_x, probe_y = u.grid.xs, u.grid.ys
    else:
        if args.g is None:
            raise UsageError("residual: --f needs --g")
        grid = _grid(args)
        u = riemann.riemann_solve(args.f, args.g, grid, quad, _series(args))
        probe_x, probe_y = grid.xs, grid.ys
    if args.rect is not None:
        if len(args.rect) != 4:
            raise UsageError("residual: --rect needs a,a',b,b'")
        r = picard.quadrature_residual(u, args.rect, quad)
        print(f"residual {_fmt(r.real)} {_fmt(r.imag)} abs {abs(r):.3g}")
        return
    res = picard.max_probe_residual(
        u, picard.probe_nodes(probe_x, args.max_nodes), picard.probe_nodes(probe_y, args.max_nodes), quad
    )
    print(f"max_residual {res:.3g}")


def cmd_glue(args):
    c = args.line.c
    quad, series = _quad(args), _series(args)
    if args.line.orientation == "horizontal":
        ny = max(2, args.ny // 2 + 1)
        lo = Grid.uniform(args.xmin, args.xmax, args.nx, args.ymin, c, ny)
        up = Grid.uniform(args.xmin, args.xmax, args.nx, c, args.ymax, ny)
    else:
        nx = max(2, args.nx // 2 + 1)
        lo = Grid.uniform(args.xmin, c, nx, args.ymin, args.ymax, args.ny)
        up = Grid.uniform(c, args.xmax, nx, args.ymin, args.ymax, args.ny)
    u_lo = riemann.riemann_solve(args.lower_f, args.lower_g, lo, quad, series)
    u_up = riemann.riemann_solve(args.upper_f, args.upper_g, up, quad, series)
    res = picard.glue_residual(u_lo, u_up, args.line, quad, args.max_nodes)
    print(f"glue_residual {res:.3g}")


def cmd_laplace(args):
    ev = laplace(args.f, args.zeta, args.x_max, _quad(args))
    print(f"L[f]({ev.zeta}) = {_fmt(ev.value.real)} {_fmt(ev.value.imag)}i tail_bound {ev.tail_bound:.3g} x_max {ev.x_max:g}")


def cmd_evolve(args):
    grid = _grid(args)
    rows = evolution_table(args.f, grid, _quad(args), args.zetas, args.ys, series=_series(args))
    if args.out:
        _write_csv(
            args,
            "re_zeta,im_zeta,y,re_lhs,im_lhs,re_rhs,im_rhs,deviation",
            [
                [_fmt(z.real), _fmt(z.imag), _fmt(y), _fmt(a.real), _fmt(a.imag), _fmt(b.real), _fmt(b.imag), _fmt(d)]
                for z, y, a, b, d in rows
            ],
        )
    print(f"max_deviation {max(r[4] for r in rows):.3g} over {len(rows)} points")


def cmd_regime(args):
    rows = []
    for q, t1, t2 in itertools.product(args.q, args.theta1, args.theta2):
        r = analysis.regime_classify(q, t1, t2)
        rows.append([_fmt(q), _fmt(t1), _fmt(t2), r.verdict, r.theorem])
        print(f"{r.verdict} {r.theorem}")
    if args.out:
        _write_csv(args, "q,theta1,theta2,verdict,theorem", rows)


def cmd_bound_sweep(args):
    rows = []
    violations = 0
    for q, th, s in itertools.product(args.qs, args.thetas, args.sigmas):
        li = analysis.log_growth_integral(q, th, s)
        lb = analysis.log_lemma_bound(q, th, s)
        ok = li <= lb
        violations += not ok
        integral = np.exp(li) if li < 709 else np.inf
        bound = np.exp(lb) if lb < 709 else np.inf
        rows.append([_fmt(q), _fmt(th), _fmt(s), _fmt(integral), _fmt(bound), "true" if ok else "false"])
    if args.out:
        _write_csv(args, "q,theta,sigma,integral,bound,ok", rows)
    print(f"cells {len(rows)} violations {violations}")


def cmd_covering(args):
    spec = analysis.CoveringSpec(args.Y, args.M, args.q, args.y1, args.depth)
    miss = analysis.first_uncovered_probe(spec)
    if miss is None:
        print("true")
    else:
        print(f"false first_uncovered {_fmt(miss)}")


def cmd_legendre(args):
    for t in args.t:
        print(f"beta*({t:g}) = {_fmt(analysis.legendre_conjugate_beta(args.theta2, t))}")


def cmd_growth_demo(args):
    grid = _grid(args)
    quad, series = _quad(args), _series(args)
    viol, ratio = analysis.u1_envelope_check(grid, quad, args.theta1, args.theta2, series)
    if args.out:
        u1 = riemann.unilateral_horizontal(riemann.BoundaryFunction.ramp(), grid, quad, series)
        u1.to_csv(args.out, [_argv_comment(args)])
    print(f"max_violation {viol:.3g} sup_ratio {ratio:.6g}")


COMMANDS = {
    "bessel": cmd_bessel,
    "solve": cmd_solve,
    "residual": cmd_residual,
    "glue": cmd_glue,
    "laplace": cmd_laplace,
    "evolve-check": cmd_evolve,
    "regime": cmd_regime,
    "bound-sweep": cmd_bound_sweep,
    "covering": cmd_covering,
    "legendre": cmd_legendre,
    "growth-demo": cmd_growth_demo,
}


def run(args):
    """Execute a parsed command; returns the process exit code."""
    try:
        code = COMMANDS[args.command](args)
        return code or 0
    except ConvergenceError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
