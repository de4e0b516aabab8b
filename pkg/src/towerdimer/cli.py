"""Command-line front end.

Subcommands: sample, exact, kernel, limitshape, isoradial, verify,
render.  Rationals are given as "p/q" strings so the exact code paths
stay float-free; a JSON config file can preload any flag, with explicit
flags taking precedence.  The only environment variable honoured is
TOWERDIMER_WORKERS (worker count for the verification harness).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import interlacing, isoradial, kasteleyn, kernels, lattice, limitshape, render, shuffle, verify


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _complex_pair(text: str) -> complex:
    try:
        re, im = (float(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected RE,IM: {text!r}") from exc
    return complex(re, im)


def _float_pair(text: str) -> tuple[float, float]:
    try:
        a, b = (float(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected X,U: {text!r}") from exc
    return a, b


def _coord(text: str) -> lattice.Coord:
    try:
        x, u = (int(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected X,U integers: {text!r}") from exc
    return lattice.Coord(x, u)


def _check_params(args) -> None:
    if getattr(args, "n", 1) < 1:
        raise SystemExit("N must be >= 1")
    for name in ("alpha", "beta"):
        v = getattr(args, name, None)
        if v is not None and v <= 0:
            raise SystemExit(f"{name} must be positive")
    z0 = getattr(args, "z0", None)
    if z0 is not None and z0.imag < 0:
        raise SystemExit("z0 must lie in the closed upper half plane")


def _out(args):
    import contextlib

    if args.out and args.out != "-":
        return open(args.out, "w")
    return contextlib.nullcontext(sys.stdout)


def cmd_sample(args) -> int:
    _check_params(args)
    r = shuffle.StepRandomness.from_seed(args.alpha, args.beta, args.seed)
    g = lattice.build_tower(args.n, args.alpha, args.beta)
    if args.format == "svg":
        c = shuffle.evolve(args.n, r)
        m = interlacing.arrays_to_matching(g, c)
        with _out(args) as f:
            f.write(render.matching_svg(g, m))
        return 0
    with _out(args) as f:
        if args.format == "csv":
            rows = []
            for i in range(args.count):
                c = shuffle.evolve(args.n, r)
                for e in sorted(interlacing.arrays_to_matching(g, c)):
                    rows.append((i, e.white.x, e.white.u, e.black.x, e.black.u))
            import csv as _csv

            w = _csv.writer(f, lineterminator="\r\n")
            w.writerow(["sample", "white_x", "white_u", "black_x", "black_u"])
            w.writerows(rows)
        else:  # jsonl
            for i in range(args.count):
                c = shuffle.evolve(args.n, r)
                m = interlacing.arrays_to_matching(g, c)
                f.write(json.dumps({
                    "sample": i,
                    "config": json.loads(interlacing.config_to_json(c)),
                    "matching": [[list(e.white), list(e.black)] for e in sorted(m)],
                }) + "\n")
    return 0


def cmd_exact(args) -> int:
    _check_params(args)
    g = lattice.build_tower(args.n, args.alpha, args.beta)
    z = kasteleyn.partition_function(g)
    payload = {
        "n": args.n,
        "alpha": str(args.alpha),
        "beta": str(args.beta),
        "partition_function": str(z),
        "num_whites": len(g.whites),
        "num_blacks": len(g.blacks),
    }
    if args.probabilities:
        matchings = kasteleyn.enumerate_matchings(g)
        payload["matchings"] = [
            {
                "weight": str(kasteleyn.matching_weight(m)),
                "probability": str(kasteleyn.matching_weight(m) / z),
                "edges": [[list(e.white), list(e.black)] for e in sorted(m)],
            }
            for m in matchings
        ]
    with _out(args) as f:
        json.dump(payload, f, indent=2)
        f.write("\n")
    return 0


def cmd_kernel(args) -> int:
    _check_params(args)
    rows = []
    if args.z0 is not None:
        pt = kernels.GibbsPoint(args.z0, float(args.alpha), float(args.beta))
        val = kernels.gibbs_kernel(pt, args.white, args.black)
        rows.append(("gibbs", args.white.x, args.white.u, args.black.x, args.black.u, val.real, val.imag))
        if args.edge_probabilities:
            for name, p in kernels.gibbs_edge_probabilities(pt).items():
                rows.append((name, 0, 0, 0, 0, float(p), 0.0))
    else:
        val = kernels.finite_kernel(args.white, args.black, args.n, float(args.alpha), float(args.beta))
        rows.append(("finite", args.white.x, args.white.u, args.black.x, args.black.u, val.real, val.imag))
    if args.format == "json":
        with _out(args) as f:
            json.dump(
                [dict(zip(("kind", "wx", "wu", "bx", "bu", "re", "im"), r)) for r in rows], f, indent=2
            )
            f.write("\n")
    else:
        path = args.out if args.out and args.out != "-" else None
        if path:
            render.emit_csv(["kind", "wx", "wu", "bx", "bu", "re", "im"], rows, path)
        else:
            print("kind,wx,wu,bx,bu,re,im")
            for r in rows:
                print(",".join(render._fmt(v) for v in r))
    return 0


def cmd_limitshape(args) -> int:
    _check_params(args)
    a, b = float(args.alpha), float(args.beta)
    if args.arctic:
        pts = limitshape.arctic_curve(a, b, resolution=args.resolution)
        if args.format == "svg":
            with _out(args) as f:
                f.write(render.arctic_svg(pts))
        else:
            path = args.out if args.out and args.out != "-" else None
            if path:
                render.emit_csv(["x", "u"], pts, path)
            else:
                print("x,u")
                for x, u in pts:
                    print(f"{x:.17g},{u:.17g}")
    elif args.height is not None:
        x, u, tau = args.height
        h = limitshape.limit_height(x, u, tau)
        print(f"x,u,tau,height\n{x:.17g},{u:.17g},{tau:.17g},{h:.17g}")
    elif args.current is not None:
        pt = kernels.GibbsPoint(args.current, a, b)
        print(f"z0_re,z0_im,current\n{pt.z0.real:.17g},{pt.z0.imag:.17g},{limitshape.current(pt):.17g}")
    elif args.point is not None:
        x, u = args.point
        label = limitshape.classify(x, u, a, b)
        z = limitshape.critical_point(x, u, a, b)
        row = [x, u, label, z.real, z.imag]
        header = ["x", "u", "phase", "z_re", "z_im"]
        if label == limitshape.LIQUID:
            s, t = limitshape.slopes_of(kernels.GibbsPoint(z, a, b))
            header += ["slope_s", "slope_t"]
            row += [s, t]
        print(",".join(header))
        print(",".join(render._fmt(v) for v in row))
    if args.report:
        files = render.save_report_figures(args.report, a, b)
        print("report files: " + ", ".join(files), file=sys.stderr)
    return 0


def cmd_isoradial(args) -> int:
    _check_params(args)
    a, b = float(args.alpha), float(args.beta)
    w = args.window
    emb = isoradial.embed_patch(args.z0, a, b, (0, 3 * w), (-w - 1, w))
    if args.svg:
        with open(args.svg, "w") as f:
            f.write(render.embedding_svg(emb))
    rep = isoradial.isoradiality_report(args.z0, a, b)
    print("face_type,center_re,center_im,radius,spread")
    for s in rep.stats:
        print(f"{s.label},{s.center.real:.17g},{s.center.imag:.17g},{s.radius:.17g},{s.spread:.17g}")
    print(f"# cross-type radius spread: {rep.radius_spread:.3e}", file=sys.stderr)
    print(f"# closure residual: {isoradial.max_closure_residual(args.z0, a, b):.3e}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    results = verify.run_suite(args.level)
    for r in results:
        print(r.line())
    if args.json:
        with open(args.json, "w") as f:
            f.write(verify.report_json(results))
    if args.report:
        import os

        os.makedirs(args.report, exist_ok=True)
        render.emit_csv(
            ["criterion", "name", "passed", "measured", "tolerance", "runtime"],
            [(r.criterion, r.name, r.passed, r.measured, r.tolerance, r.runtime) for r in results],
            os.path.join(args.report, "verify.csv"),
        )
        render.save_report_figures(args.report, 1.0, 1.0)
    return 0 if all(r.passed for r in results) else 1


def cmd_render(args) -> int:
    with open(args.input) as f:
        payload = json.load(f)
    g = lattice.build_tower(payload["n"], Fraction(payload["alpha"]), Fraction(payload["beta"]))
    edges = frozenset(
        lattice.edge_between(lattice.Coord(*w), lattice.Coord(*b), g.alpha, g.beta)
        for w, b in payload["matching"]
    )
    with open(args.out_path, "w") as f:
        f.write(render.matching_svg(g, edges))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="towerdimer", description=__doc__)
    p.add_argument("--config", help="JSON file preloading any subcommand flag")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n=True):
        if n:
            sp.add_argument("--n", type=int, default=2, help="tower size N")
        sp.add_argument("--alpha", type=_fraction, default=Fraction(1), help='weight alpha as "p/q"')
        sp.add_argument("--beta", type=_fraction, default=Fraction(1), help='weight beta as "p/q"')

    sp = sub.add_parser("sample", help="sample matchings with the shuffling chain")
    common(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--format", choices=("jsonl", "csv", "svg"), default="jsonl")
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("exact", help="exact partition function and probabilities")
    common(sp)
    sp.add_argument("--probabilities", action="store_true", help="enumerate matchings with exact probabilities")
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("kernel", help="evaluate the finite or full-plane kernel")
    common(sp)
    sp.add_argument("--white", type=_coord, required=True, help="white vertex X,U")
    sp.add_argument("--black", type=_coord, required=True, help="black vertex X,V")
    sp.add_argument("--z0", type=_complex_pair, help="evaluate the full-plane kernel at z0 = RE,IM")
    sp.add_argument("--edge-probabilities", action="store_true")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_kernel)

    sp = sub.add_parser("limitshape", help="critical points, arctic curve, height, current")
    common(sp, n=False)
    sp.add_argument("--point", type=_float_pair, help="classify and solve at x,u")
    sp.add_argument("--arctic", action="store_true")
    sp.add_argument("--resolution", type=int, default=200)
    sp.add_argument("--height", type=lambda t: tuple(float(v) for v in t.split(",")), help="x,u,tau")
    sp.add_argument("--current", type=_complex_pair, help="current at z0 = RE,IM")
    sp.add_argument("--format", choices=("csv", "svg"), default="csv")
    sp.add_argument("--out", default="-")
    sp.add_argument("--report", help="directory for CSV tables plus matplotlib figures")
    sp.set_defaults(func=cmd_limitshape)

    sp = sub.add_parser("isoradial", help="embed the dual lattice and report circumcircles")
    common(sp, n=False)
    sp.add_argument("--z0", type=_complex_pair, required=True)
    sp.add_argument("--window", type=int, default=3)
    sp.add_argument("--svg", help="write the embedding drawing to this SVG file")
    sp.set_defaults(func=cmd_isoradial)

    sp = sub.add_parser("verify", help="run the verification harness")
    sp.add_argument("--level", choices=("fast", "full"), default="fast")
    sp.add_argument("--json", help="write the machine-readable report here")
    sp.add_argument("--report", help="directory for the CSV report plus figures")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("render", help="render a sampled matching JSON to SVG")
    sp.add_argument("--input", required=True, help="JSON with n, alpha, beta, matching")
    sp.add_argument("--out", dest="out_path", required=True)
    sp.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    # Install config values as subcommand defaults so that explicit flags
    # still take precedence.
    if "--config" in argv:
        path = argv[argv.index("--config") + 1]
        with open(path) as f:
            loaded = json.load(f)
        for key in ("alpha", "beta"):
            if key in loaded:
                loaded[key] = Fraction(loaded[key])
        for action in parser._subparsers._group_actions:
            for sp in action.choices.values():
                dests = {a.dest for a in sp._actions}
                sp.set_defaults(**{k: v for k, v in loaded.items() if k in dests})
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
