"""Readout of the cavity through a flying two-level atom.

The cavity photon is swapped into an atom in ``|g>`` (a pi Rabi rotation,
``|0>_c|g> -> |0>_c|g>``, ``|1>_c|g> -> |0>_c|e>``), the atom gets a pi/2
pulse and is detected.  Finding ``e`` leaves the mirrors in the "+" state,
finding ``g`` in the "-" state:

    psi_pm = (|0, 0> +- exp(i theta) |2 beta, -2 beta>) / sqrt(4 P_pm)
    P_pm   = 1/2 +- 1/2 cos(theta) exp(-4 beta^2)

Both atomic operations are treated as ideal and instantaneous.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dynamics import (
    OptomechParams,
    evolve_closed_form,
    initial_state,
    remove_sector_phases,
    theta_n,
)
from .hilbert import (
    CompositeSpace,
    DimensionError,
    StateVector,
    auto_dim,
    coherent_state,
    tensor,
)

ATOM_G, ATOM_E = 0, 1
LABELS = {"g": ATOM_G, "e": ATOM_E}
SIGN_OF_LABEL = {"e": +1, "g": -1}
PHASE_MODES = ("zero", "fig3", "indexed")
MIN_PROBABILITY = 1e-15


class ProtocolError(ValueError):
    pass


class DegenerateOutcomeError(ArithmeticError):
    """The requested outcome has (numerically) zero probability."""


@dataclass(frozen=True)
class MeasurementOutcome:
    label: str
    probability: float
    post_state: StateVector

    @property
    def sign(self) -> int:
        return SIGN_OF_LABEL[self.label]


def branch_phase(beta: float, phase_mode: str = "indexed", n: int = 0) -> float:
    """Phase between the two mirror branches used by each convention.

    ``zero`` drops it, ``fig3`` uses 2 pi beta^2, ``indexed`` uses
    2 pi (2n+1) beta^2.
    """
    if phase_mode == "zero":
        return 0.0
    if phase_mode == "fig3":
        return theta_n(beta, 0)
    if phase_mode == "indexed":
        return theta_n(beta, n)
    raise ValueError(f"unknown phase mode {phase_mode!r}; expected one of {PHASE_MODES}")


def probabilities(beta: float, theta: float) -> tuple[float, float]:
    """Outcome probabilities ``(P_plus, P_minus)``."""
    if beta < 0:
        raise ValueError("beta must be >= 0")
    c = 0.5 * np.cos(theta) * np.exp(-4.0 * beta**2)
    return 0.5 + c, 0.5 - c


def map_and_rotate(system_state: StateVector, tol: float = 1e-12) -> StateVector:
    """Swap the cavity photon into the atom and apply the pi/2 pulse.

    Returns a state on (atom, cavity, mirror1, mirror2) with the cavity in
    vacuum.  Raises ``ProtocolError`` if the cavity holds two or more photons.
    """
    if system_state.space.n_modes != 3:
        raise DimensionError(f"expected (cavity, m1, m2), got dims {system_state.dims}")
    psi = system_state.tensor_view()
    dc, d1, d2 = psi.shape
    if dc > 2:
        stray = float(np.sum(np.abs(psi[2:]) ** 2))
        if stray > tol:
            raise ProtocolError(
                f"cavity has weight {stray:.3g} on two or more photons; the swap is undefined"
            )
    zero = psi[0]
    one = psi[1] if dc > 1 else np.zeros_like(zero)

    out = np.zeros((2, dc, d1, d2), dtype=complex)
    # R|g> = (|g> + |e>)/sqrt2, R|e> = (-|g> + |e>)/sqrt2
    out[ATOM_G, 0] = (zero - one) / np.sqrt(2)
    out[ATOM_E, 0] = (zero + one) / np.sqrt(2)
    space = CompositeSpace.of(2) * system_state.space
    return StateVector(space, out, system_state.truncation_loss)


def collapse(mapped_state: StateVector, label: str) -> MeasurementOutcome:
    """Project the atom onto ``label`` and return the normalized mirror state."""
    if label not in LABELS:
        raise ValueError(f"label must be 'g' or 'e', got {label!r}")
    if mapped_state.space.n_modes != 4 or mapped_state.dims[0] != 2:
        raise DimensionError(f"expected (atom, cavity, m1, m2), got dims {mapped_state.dims}")
    branch = mapped_state.tensor_view()[LABELS[label]]
    prob = float(np.sum(np.abs(branch) ** 2))
    if prob < MIN_PROBABILITY:
        raise DegenerateOutcomeError(f"outcome {label} has probability {prob:.3g}")
    mirrors = branch[0] / np.sqrt(prob)
    return MeasurementOutcome(label, prob, StateVector(mapped_state.space.modes[2:], mirrors))


def mirror_state(
    beta: float, theta: float, sign: int, dims: tuple[int, int] | None = None
) -> tuple[StateVector, float]:
    """Build ``psi_pm`` directly from coherent states.

    Returns the normalized state and the squared norm of
    ``(|0,0> +- e^{i theta}|2 beta,-2 beta>)/2``, i.e. the outcome probability.
    """
    if dims is None:
        d = auto_dim(2 * beta)
        dims = (d, d)
    vac = tensor(coherent_state(dims[0], 0), coherent_state(dims[1], 0))
    disp = tensor(coherent_state(dims[0], 2 * beta), coherent_state(dims[1], -2 * beta))
    amps = 0.5 * (vac.amplitudes + sign * np.exp(1j * theta) * disp.amplitudes)
    prob = float(np.sum(np.abs(amps) ** 2))
    if prob < MIN_PROBABILITY:
        raise DegenerateOutcomeError(f"sign {sign:+d} state vanishes at beta={beta}")
    return StateVector(vac.space, amps / np.sqrt(prob), disp.truncation_loss), prob


def run_protocol(
    params: OptomechParams,
    phase_mode: str = "indexed",
    dims: tuple[int, int, int] | None = None,
) -> tuple[MeasurementOutcome | None, MeasurementOutcome | None]:
    """Evolve to the maximal-displacement time, read the atom out, collapse.

    ``fig3`` evolves for half a period (n = 0).  ``zero`` evolves to
    ``tau_{n+1/2}`` and then removes the branch phase with an ideal cavity
    phase shift on the one-photon branch.  Outcomes with zero probability
    are returned as ``None``.
    """
    if phase_mode not in PHASE_MODES:
        raise ValueError(f"unknown phase mode {phase_mode!r}")
    if phase_mode == "fig3":
        params = replace(params, n=0)
    if dims is None:
        d = auto_dim(2 * max(params.beta))
        dims = (2, d, d)
    psi = evolve_closed_form(initial_state(dims), params.tau_half, params)
    if phase_mode == "zero":
        psi = remove_sector_phases(psi, params.tau_half, params)
    mapped = map_and_rotate(psi)
    outcomes = []
    for label in ("g", "e"):
        try:
            outcomes.append(collapse(mapped, label))
        except DegenerateOutcomeError:
            outcomes.append(None)
    return outcomes[0], outcomes[1]
