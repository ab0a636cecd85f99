"""Self-checks run by ``mirrorent verify``.

Each check returns the largest error it measured; the caller compares it
against the threshold.  Every check pairs two independent computations.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dynamics import (
    OptomechParams,
    evolve_closed_form,
    evolve_numeric,
    initial_state,
    remove_sector_phases,
)
from .entanglement import (
    analytic_logneg,
    logneg_density,
    logneg_pure,
    schmidt_pure,
)
from .hilbert import (
    CompositeSpace,
    StateVector,
    coherent_state,
    fidelity_pure,
    fidelity_with_pure,
    partial_trace,
    tensor,
)
from .protocol import branch_phase, mirror_state, probabilities, run_protocol
from .thermal import ThermalConfig, thermal_negativity

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Check:
    name: str
    threshold: float
    run: Callable[[], float]


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_error: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.max_error) and self.max_error <= self.threshold)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name},{self.max_error:.3e},{self.threshold:.3e},{status}"


def random_low_fock_state(rng, dims, max_mirror=2) -> StateVector:
    """Random state whose mirror occupations stay at or below ``max_mirror``."""
    amps = np.zeros(dims, dtype=complex)
    m = max_mirror + 1
    amps[:, :m, :m] = rng.standard_normal((dims[0], m, m)) + 1j * rng.standard_normal((dims[0], m, m))
    return StateVector(CompositeSpace.of(*dims), amps).normalized()


def _recurrence() -> float:
    rng = np.random.default_rng(11)
    worst = 0.0
    for beta in (0.3, 0.8):
        params = OptomechParams(beta=beta, n=1)
        d = 24
        for psi in (initial_state((2, d, d)), random_low_fock_state(rng, (2, d, d))):
            t = params.tau_recurrence
            out = remove_sector_phases(evolve_closed_form(psi, t, params), t, params)
            worst = max(worst, 1.0 - fidelity_pure(psi, out))
    return worst


def _oracle() -> float:
    rng = np.random.default_rng(7)
    params = OptomechParams(beta=0.3)
    dims = (3, 14, 14)
    worst = 0.0
    for _ in range(5):
        psi = random_low_fock_state(rng, dims)
        t = rng.uniform(0, 2 * np.pi)
        a = evolve_closed_form(psi, t, params)
        b = evolve_numeric(psi, t, params, pad=16)
        worst = max(worst, float(np.linalg.norm(a.amplitudes - b.amplitudes)))
    return worst


def _displacement_law() -> float:
    params = OptomechParams(beta=0.5)
    d = 20
    psi = StateVector(CompositeSpace.of(2, d, d), np.eye(1, 2 * d * d, d * d))
    worst = 0.0
    for t in (0.4, 1.9, np.pi, 4.4):
        rho1 = partial_trace(evolve_closed_form(psi, t, params), (1,))
        eta = params.beta[0] * (1 - np.exp(-1j * t))
        worst = max(worst, 1.0 - fidelity_with_pure(rho1, coherent_state(d, eta)))
    return worst


def _probabilities() -> float:
    worst = 0.0
    for beta in (0.1, 0.5, 1.0):
        for mode, n in (("zero", 0), ("fig3", 0), ("indexed", 2)):
            g, e = run_protocol(OptomechParams(beta=beta, n=n), mode)
            pp, pm = probabilities(beta, branch_phase(beta, mode, n))
            worst = max(worst, abs(e.probability - pp), abs(g.probability - pm))
            worst = max(worst, abs(e.probability + g.probability - 1.0))
    return worst


def _branch_reconstruction() -> float:
    worst = 0.0
    for beta in (0.2, 0.7):
        for mode, n in (("zero", 0), ("indexed", 1)):
            g, e = run_protocol(OptomechParams(beta=beta, n=n), mode)
            d = g.post_state.dims[0]
            theta = branch_phase(beta, mode, n)
            plus = np.sqrt(e.probability) * e.post_state.amplitudes
            minus = np.sqrt(g.probability) * g.post_state.amplitudes
            vac = tensor(coherent_state(d, 0), coherent_state(d, 0)).amplitudes
            disp = tensor(coherent_state(d, 2 * beta), coherent_state(d, -2 * beta)).amplitudes
            worst = max(
                worst,
                float(np.linalg.norm(plus + minus - vac)),
                float(np.linalg.norm(plus - minus - np.exp(1j * theta) * disp)),
            )
    return worst


def _protocol_vs_direct() -> float:
    worst = 0.0
    for beta in (0.05, 0.5, 1.2):
        g, e = run_protocol(OptomechParams(beta=beta), "indexed")
        theta = branch_phase(beta, "indexed", 0)
        for out in (g, e):
            direct, _ = mirror_state(beta, theta, out.sign, out.post_state.dims)
            worst = max(worst, 1.0 - fidelity_pure(direct, out.post_state))
    return worst


def _negativity_pm() -> float:
    worst = 0.0
    for beta in (0.2, 0.6, 1.0):
        for n in (0, 1):
            theta = branch_phase(beta, "indexed", n)
            for sign in (1, -1):
                psi, _ = mirror_state(beta, theta, sign)
                ref = analytic_logneg(beta, theta, sign).value
                worst = max(
                    worst,
                    abs(logneg_pure(psi, (0,)).value - ref),
                    abs(logneg_density(psi, (0,)).value - ref),
                )
    return worst


def _traced_state_ppt() -> float:
    params = OptomechParams(beta=0.8)
    d = 24
    worst = 0.0
    for t in (0.3, np.pi, 1.7 * np.pi):
        psi = evolve_closed_form(initial_state((2, d, d)), t, params)
        worst = max(worst, logneg_density(partial_trace(psi, (1, 2)), (0,)).value)
    return worst


def _schmidt_reconstruction() -> float:
    rng = np.random.default_rng(3)
    worst = 0.0
    for dims in ((4, 7), (16, 16), (32, 24)):
        amps = rng.standard_normal(dims) + 1j * rng.standard_normal(dims)
        psi = StateVector(CompositeSpace.of(*dims), amps).normalized()
        sd = schmidt_pure(psi, (0,))
        worst = max(worst, float(np.max(np.abs(sd.reconstruct() - psi.tensor_view()))))
    return worst


def _thermal_zero_limit() -> float:
    worst = 0.0
    for sign in (1, -1):
        cfg = ThermalConfig(n_th=0.0, samples=20, seed=1)
        value = thermal_negativity(cfg, 0.6, 0.0, sign).value
        worst = max(worst, abs(value - analytic_logneg(0.6, 0.0, sign).value))
    return worst


CHECKS = (
    Check("recurrence_tau_n", 1e-10, _recurrence),
    Check("oracle_evolution", 1e-8, _oracle),
    Check("displacement_law", 1e-9, _displacement_law),
    Check("probabilities", 1e-10, _probabilities),
    Check("branch_reconstruction", 1e-10, _branch_reconstruction),
    Check("protocol_vs_direct", 1e-9, _protocol_vs_direct),
    Check("negativity_pm", 1e-7, _negativity_pm),
    Check("traced_state_ppt", 1e-9, _traced_state_ppt),
    Check("schmidt_reconstruction", 1e-9, _schmidt_reconstruction),
    Check("thermal_zero_limit", 2e-3, _thermal_zero_limit),
)


def run_checks(tolerance: float | None = None, names=None) -> list[CheckResult]:
    """Run the checks; ``tolerance`` replaces every threshold when given."""
    results = []
    for check in CHECKS:
        if names and check.name not in names:
            continue
        try:
            err = float(check.run())
        except Exception:
            log.exception("check %s raised", check.name)
            err = float("inf")
        thr = check.threshold if tolerance is None else tolerance
        results.append(CheckResult(check.name, err, thr))
    return results
