"""Command-line front end.

    mirrorent sweep   --beta-min 0.01 --beta-max 2 --beta-steps 100 --phase-mode zero --out zero_phase.csv
    mirrorent verify  [--tolerance 1e-8]
    mirrorent thermal --n-th 0,0.2,0.5 --beta 1 --samples 10000 --seed 0 --out thermal.csv
    mirrorent evolve  --beta 0.5 --wt-max 6.283185307179586 --wt-steps 9

Defaults may come from ``--config FILE`` (``key = value`` lines, keys named
like the long flags); flags on the command line win.  Exit codes: 0 success,
1 verification failure, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .dynamics import (
    OptomechParams,
    eta,
    evolve_closed_form,
    initial_state,
    phi,
    remove_sector_phases,
)
from .entanglement import DegenerateStateError, analytic_logneg, logneg_density
from .hilbert import auto_dim, fidelity_pure
from .protocol import PHASE_MODES, DegenerateOutcomeError, branch_phase, probabilities
from .thermal import ThermalConfig, thermal_post_state
from .verify import run_checks

log = logging.getLogger("mirrorent")

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_USAGE = 0, 1, 2

SWEEP_HEADER = ["beta", "EN_plus", "EN_minus", "P_plus", "P_minus", "theta"]
THERMAL_HEADER = ["n_th", "beta", "sign", "EN_numeric", "purity", "samples", "seed"]
EVOLVE_HEADER = ["wt", "eta_re", "eta_im", "phi", "fidelity_to_initial"]


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if x == 0.0:
        return "0"  # avoid "-0"
    return f"{x:.9g}"


def parse_phase_mode(text: str) -> tuple[str, int]:
    """``zero``, ``fig3``, ``indexed`` or ``indexed:N``."""
    mode, _, n = text.partition(":")
    if mode not in PHASE_MODES:
        raise argparse.ArgumentTypeError(f"phase mode must be one of {PHASE_MODES} (got {text!r})")
    if n and mode != "indexed":
        raise argparse.ArgumentTypeError("only 'indexed' takes an oscillation index")
    try:
        return mode, int(n) if n else -1
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad oscillation index in {text!r}") from None


def parse_truncation(text: str):
    if text == "auto":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("truncation must be 'auto' or an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError("truncation must be >= 1")
    return value


def float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def beta_grid(beta_min: float, beta_max: float, steps: int) -> np.ndarray:
    if steps < 1:
        raise UsageError("--beta-steps must be >= 1")
    if not 0 <= beta_min <= beta_max:
        raise UsageError("need 0 <= beta-min <= beta-max")
    if steps == 1:
        return np.array([beta_min])
    return np.linspace(beta_min, beta_max, steps)


def write_csv(path, header, rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if not isinstance(v, str) else v for v in row])
    text = buf.getvalue()
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


def _theta_and_n(args, beta: float) -> float:
    mode, n = args.phase_mode
    if n < 0:
        n = args.n
    return branch_phase(beta, mode, n)


def sweep_rows(betas, phase_mode: str, n: int):
    rows = []
    for beta in betas:
        theta = branch_phase(beta, phase_mode, n)
        p_plus, p_minus = probabilities(beta, theta)
        values = {}
        for sign in (1, -1):
            try:
                values[sign] = analytic_logneg(beta, theta, sign).value
            except DegenerateStateError:
                log.warning("beta=%s: sign %+d state is degenerate, EN left blank", fmt(beta), sign)
                values[sign] = None
        rows.append([beta, values[1], values[-1], p_plus, p_minus, theta])
    return rows


def cmd_sweep(args) -> int:
    mode, n = args.phase_mode
    n = args.n if n < 0 else n
    betas = beta_grid(args.beta_min, args.beta_max, args.beta_steps)
    write_csv(args.out, SWEEP_HEADER, sweep_rows(betas, mode, n))
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_checks(args.tolerance)
    lines = ["name,max_error,threshold,status"] + [r.line() for r in results]
    text = "\n".join(lines) + "\n"
    if args.out and str(args.out) != "-":
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from exc
    else:
        sys.stdout.write(text)
    failed = [r.name for r in results if not r.passed]
    if failed:
        log.error("failed checks: %s", ", ".join(failed))
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_thermal(args) -> int:
    signs = {"both": (1, -1), "+": (1,), "plus": (1,), "-": (-1,), "minus": (-1,)}[args.sign]
    betas = args.beta if isinstance(args.beta, list) else [args.beta]
    rows = []
    for beta in betas:
        theta = _theta_and_n(args, beta)
        for n_th in args.n_th:
            cfg = ThermalConfig(n_th=n_th, samples=args.samples, seed=args.seed,
                                truncation=args.truncation)
            for sign in signs:
                try:
                    rho = thermal_post_state(cfg, beta, theta, sign, args.displacement_phase)
                except DegenerateOutcomeError:
                    log.warning("n_th=%s beta=%s sign %+d: degenerate, row left blank",
                                fmt(n_th), fmt(beta), sign)
                    rows.append([n_th, beta, "+" if sign > 0 else "-", None, None,
                                 args.samples, args.seed])
                    continue
                value = logneg_density(rho, (0,)).value
                rows.append([n_th, beta, "+" if sign > 0 else "-", value, rho.purity(),
                             args.samples, args.seed])
                log.info("n_th=%s beta=%s sign %+d dim=%d EN=%s",
                         fmt(n_th), fmt(beta), sign, rho.dims[0], fmt(value))
    write_csv(args.out, THERMAL_HEADER, rows)
    return EXIT_OK


def cmd_evolve(args) -> int:
    params = OptomechParams(beta=args.beta, omega_m=1.0)
    if args.wt is not None:
        grid = np.asarray(args.wt, dtype=float)
    else:
        grid = np.linspace(args.wt_min, args.wt_max, args.wt_steps) if args.wt_steps > 1 \
            else np.array([args.wt_min])
    d = args.truncation or auto_dim(2 * args.beta)
    psi0 = initial_state((2, d, d))
    rows = []
    for wt in grid:
        # omega_m = 1, so t equals the dimensionless w_m t.  The fidelity is
        # taken after undoing the photon-number phases (free cavity and Kerr
        # terms), so it measures whether the mirrors have come back.
        psi = remove_sector_phases(evolve_closed_form(psi0, wt, params), wt, params)
        e = eta(params, wt, 1)
        rows.append([wt, e.real, e.imag, phi(params, wt, 1), fidelity_pure(psi0, psi)])
    write_csv(args.out, EVOLVE_HEADER, rows)
    return EXIT_OK


def read_config(path) -> dict:
    """``key = value`` per line; ``#`` starts a comment; keys use flag names."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(
        prog="mirrorent",
        description="Single-photon entanglement of two cavity end mirrors.",
    )
    parser.add_argument("--config", help="key = value file with default flag values")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help="output CSV path (default: stdout)")
        p.add_argument("--truncation", type=parse_truncation, default=None,
                       help="mirror Fock dim or 'auto'")

    def phase(p, default):
        p.add_argument("--phase-mode", type=parse_phase_mode, default=parse_phase_mode(default),
                       help="zero | fig3 | indexed | indexed:N")
        p.add_argument("--n", type=int, default=0, help="oscillation index for 'indexed'")

    sp = sub.add_parser("sweep", help="analytic negativities and probabilities over a beta grid")
    sp.add_argument("--beta-min", type=float, default=0.0)
    sp.add_argument("--beta-max", type=float, default=2.0)
    sp.add_argument("--beta-steps", type=int, default=101)
    phase(sp, "zero")
    common(sp)
    sp.set_defaults(func=cmd_sweep)

    vp = sub.add_parser("verify", help="run the internal consistency checks")
    vp.add_argument("--tolerance", type=float, default=None,
                    help="override every check's threshold")
    vp.add_argument("--out", default=None)
    vp.set_defaults(func=cmd_verify)

    tp = sub.add_parser("thermal", help="Monte-Carlo negativity for thermal mirrors")
    tp.add_argument("--n-th", type=float_list, default=[0.0, 0.2, 0.5])
    tp.add_argument("--beta", type=float_list, default=[1.0])
    tp.add_argument("--sign", choices=["both", "+", "-", "plus", "minus"], default="both")
    tp.add_argument("--samples", type=int, default=10_000)
    tp.add_argument("--seed", type=int, default=0)
    tp.add_argument("--displacement-phase", action="store_true",
                    help="keep the displacement phase on the shifted branch")
    phase(tp, "zero")
    common(tp)
    tp.set_defaults(func=cmd_thermal)

    ep = sub.add_parser("evolve", help="trajectory of the cavity-mirror state")
    ep.add_argument("--beta", type=float, default=0.5)
    ep.add_argument("--wt", type=float_list, default=None, help="explicit w_m t values")
    ep.add_argument("--wt-min", type=float, default=0.0)
    ep.add_argument("--wt-max", type=float, default=2 * math.pi)
    ep.add_argument("--wt-steps", type=int, default=9)
    common(ep)
    ep.set_defaults(func=cmd_evolve)

    return parser, {"sweep": sp, "verify": vp, "thermal": tp, "evolve": ep}


def _apply_config(parser, subparsers, argv) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    if not known.config:
        return
    values = read_config(known.config)
    command = next((a for a in rest if a in subparsers), None)
    if command is None:
        return
    sp = subparsers[command]
    actions = {a.dest: a for a in sp._actions}
    defaults = {}
    for key, text in values.items():
        action = actions.get(key)
        if action is None:
            raise UsageError(f"unknown config key {key!r} for '{command}'")
        if action.type is not None:
            try:
                defaults[key] = action.type(text)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"config key {key!r}: {exc}") from exc
        elif isinstance(action, argparse._StoreTrueAction):
            defaults[key] = text.lower() in ("1", "true", "yes", "on")
        else:
            defaults[key] = text
    sp.set_defaults(**defaults)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = build_parser()
    try:
        _apply_config(parser, subparsers, argv)
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"mirrorent: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except UsageError as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
