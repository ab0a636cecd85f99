"""Negativity and purity of the conditional mirror state for thermal mirrors.

    python scripts/thermal_study.py --n-th 0,0.05,0.1,0.2,0.5 --beta 1 --samples 10000
"""

import argparse
import csv
import sys

from mirrorent import ThermalConfig, analytic_logneg, logneg_density, thermal_post_state


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-th", default="0,0.05,0.1,0.2,0.5")
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--displacement-phase", action="store_true")
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["n_th", "sign", "EN_numeric", "EN_pure", "purity", "dim"])
    for n_th in (float(v) for v in args.n_th.split(",")):
        cfg = ThermalConfig(n_th=n_th, samples=args.samples, seed=args.seed)
        for sign in (1, -1):
            rho = thermal_post_state(cfg, args.beta, 0.0, sign, args.displacement_phase)
            writer.writerow([f"{n_th:.9g}", "+" if sign > 0 else "-",
                             f"{logneg_density(rho).value:.9g}",
                             f"{analytic_logneg(args.beta, 0.0, sign).value:.9g}",
                             f"{rho.purity():.9g}", rho.dims[0]])
            fh.flush()
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
