"""Thermal initial mirrors, sampled from their Glauber P function.

Each mirror starts in a thermal state, i.e. a Gaussian mixture of coherent
states |alpha> with weight exp(-|alpha|^2/n_th) / (pi n_th).  A sample
(alpha1, alpha2) goes through the protocol and yields

    (|alpha1, alpha2> +- e^{i theta} |alpha1 + 2 beta, alpha2 - 2 beta>) / 2

whose squared norm is that sample's outcome probability.  The conditional
mirror state is the probability-weighted mixture of the normalized samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entanglement import NegativityResult, logneg_density
from .hilbert import (
    MAX_TRUNCATION_LOSS,
    CompositeSpace,
    DensityMatrix,
    StateVector,
    auto_dim,
    coherent_amplitudes,
    _check_loss,
)
from .protocol import MIN_PROBABILITY, DegenerateOutcomeError

DEFAULT_SAMPLES = 10_000
_CHUNK = 512


@dataclass(frozen=True)
class ThermalConfig:
    """Monte-Carlo settings.

    ``truncation=None`` picks the mirror dim from the largest sampled
    amplitude plus the 2 beta displacement.
    """

    n_th: float = 0.0
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    truncation: int | None = None

    def __post_init__(self):
        if self.n_th < 0:
            raise ValueError("n_th must be >= 0")
        if int(self.samples) < 1:
            raise ValueError("samples must be >= 1")

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(int(self.seed) & (2**64 - 1)))


def thermal_occupation(hbar_omega_over_kT: float) -> float:
    """Bose-Einstein mean phonon number 1 / (e^x - 1)."""
    return float(1.0 / np.expm1(hbar_omega_over_kT))


def sample_alpha_pair(config: ThermalConfig, rng: np.random.Generator) -> tuple[complex, complex]:
    a = sample_alphas(config, rng, 1)[0]
    return complex(a[0]), complex(a[1])


def sample_alphas(
    config: ThermalConfig, rng: np.random.Generator | None = None, size: int | None = None
) -> np.ndarray:
    """``(size, 2)`` complex amplitudes; real and imaginary parts have variance n_th/2."""
    if rng is None:
        rng = config.rng()
    if size is None:
        size = config.samples
    scale = np.sqrt(config.n_th / 2.0)
    draws = rng.standard_normal((size, 2, 2)) * scale
    return draws[..., 0] + 1j * draws[..., 1]


def _displaced_phase(alpha1: complex, alpha2: complex, beta: float) -> complex:
    # D(2b)|a1> D(-2b)|a2> = exp(-2 i b (Im a1 - Im a2)) |a1 + 2b, a2 - 2b>
    return np.exp(-2j * beta * (alpha1.imag - alpha2.imag))


def collapsed_state_for(
    alpha1: complex,
    alpha2: complex,
    beta: float,
    theta: float,
    sign: int,
    truncation: int,
    displacement_phase: bool = False,
    max_loss: float | None = MAX_TRUNCATION_LOSS,
) -> tuple[StateVector, float]:
    """Post-measurement mirror state for one thermal sample, and its probability.

    With ``displacement_phase=True`` the second branch also carries the phase
    that the displacement operators pick up on a coherent input, which is
    what the propagator actually produces.
    """
    alpha1, alpha2 = complex(alpha1), complex(alpha2)
    d = int(truncation)
    pieces = []
    for a in (alpha1, alpha2, alpha1 + 2 * beta, alpha2 - 2 * beta):
        amps = coherent_amplitudes(d, a)
        kept = float(np.sum(np.abs(amps) ** 2))
        _check_loss(1.0 - kept, max_loss, "raise", f"thermal sample alpha={a:.4g}")
        pieces.append(amps / np.sqrt(kept))
    rel = sign * np.exp(1j * theta)
    if displacement_phase:
        rel = rel * _displaced_phase(alpha1, alpha2, beta)
    amps = 0.5 * (np.kron(pieces[0], pieces[1]) + rel * np.kron(pieces[2], pieces[3]))
    weight = float(np.sum(np.abs(amps) ** 2))
    if weight < MIN_PROBABILITY:
        raise DegenerateOutcomeError(f"sign {sign:+d} branch vanishes for this sample")
    return StateVector(CompositeSpace.of(d, d), amps / np.sqrt(weight)), weight


def thermal_truncation(alphas: np.ndarray, beta: float) -> int:
    reach = float(np.max(np.abs(alphas), initial=0.0)) + 2.0 * beta
    return auto_dim(reach)


def thermal_post_state(
    config: ThermalConfig,
    beta: float,
    theta: float,
    sign: int,
    displacement_phase: bool = False,
) -> DensityMatrix:
    """Monte-Carlo estimate of the conditional mirror state.

    Samples are accumulated in fixed-size chunks in sample order, so a given
    seed reproduces the same matrix bit for bit.
    """
    alphas = sample_alphas(config)
    d = config.truncation or thermal_truncation(alphas, beta)
    rho = np.zeros((d * d, d * d), dtype=complex)
    total = 0.0
    for start in range(0, len(alphas), _CHUNK):
        rows, weights = [], []
        for a1, a2 in alphas[start : start + _CHUNK]:
            try:
                psi, w = collapsed_state_for(a1, a2, beta, theta, sign, d, displacement_phase)
            except DegenerateOutcomeError:
                continue
            rows.append(psi.amplitudes)
            weights.append(w)
        if not rows:
            continue
        block = np.asarray(rows) * np.sqrt(np.asarray(weights))[:, None]
        rho += block.T @ block.conj()
        total += float(np.sum(weights))
    if total == 0.0:
        raise DegenerateOutcomeError(f"every sample is degenerate for sign {sign:+d}")
    return DensityMatrix(CompositeSpace.of(d, d), rho / total)


def _log_coherent_overlap(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # log <a|b> for every pair (rows of a, columns of b)
    a = a[:, None]
    return -0.5 * np.abs(a) ** 2 - 0.5 * np.abs(b) ** 2 + np.conj(a) * b


def thermal_purity(
    config: ThermalConfig,
    beta: float,
    theta: float,
    sign: int,
    displacement_phase: bool = False,
) -> float:
    """Purity of the conditional mirror state without building it.

    Uses Tr rho^2 = sum_ij |<phi_i|phi_j>|^2 / (sum_i <phi_i|phi_i>)^2 over the
    unnormalized samples phi_i, with coherent-state overlaps in closed form,
    so there is no Fock truncation.  Same samples as ``thermal_post_state``.
    """
    alphas = sample_alphas(config)
    a1, a2 = alphas[:, 0], alphas[:, 1]
    rel = sign * np.exp(1j * theta) * np.ones(len(alphas), dtype=complex)
    if displacement_phase:
        rel = rel * np.exp(-2j * beta * (a1.imag - a2.imag))
    branches = [(a1, a2, np.ones_like(rel)), (a1 + 2 * beta, a2 - 2 * beta, rel)]
    weights = np.zeros(len(alphas))
    for x1, x2, c in branches:
        for y1, y2, k in branches:
            weights += 0.25 * np.real(
                np.conj(c) * k * np.exp(-0.5 * abs(x1 - y1) ** 2 - 0.5 * abs(x2 - y2) ** 2
                                        + 1j * np.imag(np.conj(x1) * y1 + np.conj(x2) * y2))
            )
    keep = weights >= MIN_PROBABILITY
    if not np.any(keep):
        raise DegenerateOutcomeError(f"every sample is degenerate for sign {sign:+d}")
    branches = [(x1[keep], x2[keep], c[keep]) for x1, x2, c in branches]
    total = float(np.sum(weights[keep]))
    n = int(np.sum(keep))
    acc = 0.0
    for start in range(0, n, _CHUNK):
        sl = slice(start, start + _CHUNK)
        gram = np.zeros((min(_CHUNK, n - start), n), dtype=complex)
        for x1, x2, c in branches:
            for y1, y2, k in branches:
                log_ov = _log_coherent_overlap(x1[sl], y1) + _log_coherent_overlap(x2[sl], y2)
                gram += 0.25 * np.conj(c[sl])[:, None] * k * np.exp(log_ov)
        acc += float(np.sum(np.abs(gram) ** 2))
    return acc / total**2


def thermal_negativity(
    config: ThermalConfig,
    beta: float,
    theta: float,
    sign: int,
    displacement_phase: bool = False,
) -> NegativityResult:
    rho = thermal_post_state(config, beta, theta, sign, displacement_phase)
    return logneg_density(rho, (0,))
