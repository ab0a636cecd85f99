"""Plus/minus negativities when the branch phase is kept.

``--mode fig3`` uses theta = 2 pi beta^2 (half a period); ``--mode indexed``
uses theta_n = 2 pi (2n+1) beta^2 for each n in ``--n``.

    python scripts/branch_phase_sweep.py --mode indexed --n 0,1,2 --out branch_phase.csv
"""

import argparse
import csv
import sys

import numpy as np

from mirrorent import analytic_logneg, branch_phase, probabilities
from mirrorent.entanglement import DegenerateStateError


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mode", choices=["fig3", "indexed"], default="fig3")
    ap.add_argument("--n", default="0", help="comma-separated oscillation indices")
    ap.add_argument("--beta-max", type=float, default=2.0)
    ap.add_argument("--steps", type=int, default=401)
    ap.add_argument("--out", default="-")
    ap.add_argument("--plot", default=None)
    args = ap.parse_args(argv)

    ns = [0] if args.mode == "fig3" else [int(v) for v in args.n.split(",")]
    betas = np.linspace(0.0, args.beta_max, args.steps)
    rows = []
    for n in ns:
        for beta in betas:
            theta = branch_phase(beta, args.mode, n)
            vals = []
            for s in (1, -1):
                try:
                    vals.append(f"{analytic_logneg(beta, theta, s).value:.9g}")
                except DegenerateStateError:
                    vals.append("")
            p_plus, p_minus = probabilities(beta, theta)
            rows.append([n, f"{beta:.9g}", *vals, f"{p_plus:.9g}", f"{p_minus:.9g}", f"{theta:.9g}"])

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["n", "beta", "EN_plus", "EN_minus", "P_plus", "P_minus", "theta"])
    writer.writerows(rows)
    if fh is not sys.stdout:
        fh.close()

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(5, 3.5))
        for n in ns:
            sel = [r for r in rows if r[0] == n and r[2]]
            ax.plot([float(r[1]) for r in sel], [float(r[2]) for r in sel], label=f"E_N plus, n={n}")
        ax.set_xlabel("beta")
        ax.legend()
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)


if __name__ == "__main__":
    main()
