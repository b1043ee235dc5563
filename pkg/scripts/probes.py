"""Contraction, growth and sharp-Kato probes as plain tables.

    python scripts/probes.py contraction --scales 1 0.5 0.25 0.125
    python scripts/probes.py growth
    python scripts/probes.py kato
"""

import argparse
import time

import numpy as np

from skdv_lab.estimates import EstimateId
from skdv_lab.groups import AIRY, SCHRODINGER
from skdv_lab.spectral import Field, make_grid
from skdv_lab.trials import PROBE_T, contraction_probe, growth_probe, kato_sharp_ratio


def contraction(args):
    print("scale,T,factor")
    for k in args.scales:
        t0 = time.perf_counter()
        table = contraction_probe(k, s=args.s, T_grid=args.T)
        for T, factor in table.rows:
            print(f"{k:g},{T:g},{factor:.6g}")
        print(f"# scale {k:g}: admissible T = {table.admissible_T:g} ({time.perf_counter() - t0:.1f}s)",
              flush=True)


def growth(args):
    g = make_grid(args.n_points, args.length)
    f = Field(g, np.exp(-g.x ** 2))
    for eid in (EstimateId.MAX_SCH_L2, EstimateId.MAX_KDV_L2):
        p = growth_probe(eid, f)
        rows = ", ".join(f"T={t:g}: {v:.5g}" for t, v in zip(p.horizons, p.growth))
        print(f"{eid.name}: {rows}; slope {p.slope:.3f} vs exponent {p.exponent:g} "
              f"({'bounded' if p.bounded else 'exceeds'})")


def kato(args):
    for kind in (AIRY, SCHRODINGER):
        t0 = time.perf_counter()
        ratio, oracle = kato_sharp_ratio(kind)
        print(f"{kind}: measured {ratio:.7f}, oracle {oracle:.7f}, "
              f"off by {abs(ratio - oracle) / oracle:.3%} ({time.perf_counter() - t0:.1f}s)")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="probe", required=True)
    p = sub.add_parser("contraction")
    p.add_argument("--scales", type=float, nargs="+", default=[1.0, 0.5, 0.25, 0.125])
    p.add_argument("--T", type=float, nargs="+", default=list(PROBE_T))
    p.add_argument("--s", type=float, default=0.8)
    p.set_defaults(fn=contraction)
    p = sub.add_parser("growth")
    p.add_argument("--n-points", type=int, default=4096)
    p.add_argument("--length", type=float, default=400.0)
    p.set_defaults(fn=growth)
    p = sub.add_parser("kato")
    p.set_defaults(fn=kato)
    args = ap.parse_args(argv)
    args.fn(args)


if __name__ == "__main__":
    main()
