"""Zero-phase negativities and probabilities versus coupling.

Writes a CSV (and optionally a PNG) of the analytic curves together with
the partial-transpose values of the constructed mirror states.

    python scripts/zero_phase_sweep.py --out zero_phase.csv --plot zero_phase.png
"""

import argparse
import csv
import sys

import numpy as np

from mirrorent import analytic_logneg, logneg_density, mirror_state, probabilities


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--beta-max", type=float, default=2.0)
    ap.add_argument("--steps", type=int, default=100)
    ap.add_argument("--numeric-every", type=int, default=10,
                    help="also compute the numeric negativity on every k-th point")
    ap.add_argument("--out", default="-")
    ap.add_argument("--plot", default=None)
    args = ap.parse_args(argv)

    betas = np.linspace(0.01, args.beta_max, args.steps)
    rows = []
    for i, beta in enumerate(betas):
        en = {s: analytic_logneg(beta, 0.0, s).value for s in (1, -1)}
        num = {1: "", -1: ""}
        if i % args.numeric_every == 0:
            for s in (1, -1):
                num[s] = f"{logneg_density(mirror_state(beta, 0.0, s)[0]).value:.9g}"
        p_plus, p_minus = probabilities(beta, 0.0)
        rows.append([f"{beta:.9g}", f"{en[1]:.9g}", f"{en[-1]:.9g}", num[1], num[-1],
                     f"{p_plus:.9g}", f"{p_minus:.9g}"])

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["beta", "EN_plus", "EN_minus", "EN_plus_numeric", "EN_minus_numeric",
                     "P_plus", "P_minus"])
    writer.writerows(rows)
    if fh is not sys.stdout:
        fh.close()

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        data = np.array([[float(r[i]) for i in (0, 1, 2, 5, 6)] for r in rows])
        fig, ax = plt.subplots(1, 2, figsize=(9, 3.5))
        ax[0].plot(data[:, 0], data[:, 1], label="E_N plus")
        ax[0].plot(data[:, 0], data[:, 2], label="E_N minus")
        ax[1].plot(data[:, 0], data[:, 3], label="P plus")
        ax[1].plot(data[:, 0], data[:, 4], label="P minus")
        for a in ax:
            a.set_xlabel("beta")
            a.legend()
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)


if __name__ == "__main__":
    main()
