"""Record the worst ensemble ratio of every catalog entry as its regression constant.

Run once per ensemble version; the table it writes is what the regression
checks compare against.
"""

import argparse
import time

from skdv_lab.estimates import EstimateParams, estimate_key
from skdv_lab.trials import CONSTANTS_PATH, default_campaign, load_constants, run_trials, save_constants


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--output", default=str(CONSTANTS_PATH))
    ap.add_argument("--only", nargs="*", help="entry names to (re)calibrate")
    args = ap.parse_args(argv)

    table = load_constants(args.output)
    params = EstimateParams()
    for eid, ens in default_campaign(args.size, args.seed):
        if args.only and eid.name not in args.only:
            continue
        t0 = time.perf_counter()
        worst, _ = run_trials(eid, ens, params)
        table[(estimate_key(eid, params), ens.label)] = worst.ratio
        print(f"{eid.name:26s} {ens.label:32s} {worst.ratio:.12g}  ({time.perf_counter() - t0:.1f}s)",
              flush=True)
    save_constants(table, args.output)
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
