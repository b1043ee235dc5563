"""Refinement tables for the linear focusing data.

Prints, per grid size, the Holder quotient of u at the Schrodinger focus and
max|dv| at the first KdV focus, plus the ratio to the previous level.  Passing
several lengths shows how the box size caps the visible growth.
"""

import argparse

from skdv_lab.diagnostics import holder_quotient, max_derivative
from skdv_lab.groups import AIRY, SCHRODINGER, evolve
from skdv_lab.initial_data import KdvDatumParams, SchrodingerDatumParams, kdv_datum, schrodinger_datum
from skdv_lab.spectral import make_grid


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--which", choices=["schrodinger", "kdv"], default="schrodinger")
    ap.add_argument("--lengths", type=float, nargs="+", default=[200.0])
    ap.add_argument("--log2n", type=int, nargs="+", default=[12, 13, 14, 15])
    ap.add_argument("--time", type=float, default=None, help="default: the first focus")
    ap.add_argument("--beta", type=float, default=0.6)
    ap.add_argument("--window", type=float, default=0.2)
    ap.add_argument("--alpha", type=float, default=1.0)
    args = ap.parse_args(argv)

    print("length,n_points,time,value,ratio")
    for L in args.lengths:
        prev = None
        for m in args.log2n:
            g = make_grid(2 ** m, L)
            if args.which == "schrodinger":
                p = SchrodingerDatumParams(alpha=args.alpha)
                t = p.focus[1] if args.time is None else args.time
                u = evolve(schrodinger_datum(p, g), t, SCHRODINGER)
                value = holder_quotient(u, args.beta, args.window, center=p.x0, max_pairs=None)[0]
            else:
                p = KdvDatumParams(alpha=args.alpha)
                t = p.alpha if args.time is None else args.time
                value = max_derivative(evolve(kdv_datum(p, g), t, AIRY))[0]
            ratio = value / prev if prev else float("nan")
            print(f"{L:g},{g.n_points},{t:g},{value:.10g},{ratio:.6f}", flush=True)
            prev = value


if __name__ == "__main__":
    main()
