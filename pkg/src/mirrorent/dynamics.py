"""Cavity field coupled to two end mirrors by radiation pressure.

In units of hbar the Hamiltonian is

    H = w_c c^dag c + sum_j w_j b_j^dag b_j
        - c^dag c [beta_1 w_1 (b_1^dag + b_1) - beta_2 w_2 (b_2^dag + b_2)]

and its propagator factorizes exactly, per cavity photon number n, into a
free mechanical rotation, a displacement of mirror 1 by n*eta_1(t) and of
mirror 2 by -n*eta_2(t), and the phase exp(-i w_c t n + i (phi_1 + phi_2) n^2).
``evolve_closed_form`` applies that product; ``evolve_numeric`` is a
brute-force check that exponentiates ``H`` by dense eigendecomposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hilbert import (
    MAX_TRUNCATION_LOSS,
    CompositeSpace,
    DimensionError,
    StateVector,
    _as_space,
    _check_loss,
    annihilation,
    auto_dim,
    displacement_matrix,
    embed,
    fock_state,
    number_op,
)


class ResourceError(RuntimeError):
    """Raised when a dense computation would be too large."""


def _pair(x) -> tuple[float, float]:
    if np.ndim(x) == 0:
        return (float(x), float(x))
    a, b = x
    return (float(a), float(b))


@dataclass(frozen=True)
class OptomechParams:
    """Physical parameters of the cavity and the two mirrors.

    ``beta`` and ``omega_m`` accept a scalar (equal mirrors) or a pair.
    ``omega_c`` only contributes a global phase on each photon-number
    sector and defaults to 0.  ``n`` is the oscillation index used for the
    measurement time and the branch phase ``theta_n``.
    """

    beta: tuple[float, float] = (0.0, 0.0)
    omega_m: tuple[float, float] = (1.0, 1.0)
    omega_c: float = 0.0
    n: int = 0

    def __post_init__(self):
        beta = _pair(self.beta)
        omega_m = _pair(self.omega_m)
        if min(beta) < 0:
            raise ValueError(f"beta must be >= 0, got {beta}")
        if min(omega_m) <= 0:
            raise ValueError(f"omega_m must be > 0, got {omega_m}")
        if int(self.n) < 0:
            raise ValueError("oscillation index n must be >= 0")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "omega_m", omega_m)
        object.__setattr__(self, "omega_c", float(self.omega_c))
        object.__setattr__(self, "n", int(self.n))

    def tau(self, k: float) -> float:
        """Time after ``k`` mechanical periods of mirror 1 (k may be half-integer)."""
        return 2.0 * np.pi * k / self.omega_m[0]

    @property
    def tau_recurrence(self) -> float:
        return self.tau(self.n)

    @property
    def tau_half(self) -> float:
        return self.tau(self.n + 0.5)

    @property
    def theta_n(self) -> float:
        """Branch phase at the maximal-displacement time, 2 pi (2n+1) beta^2."""
        return theta_n(self.beta[0], self.n)


def theta_n(beta: float, n: int = 0) -> float:
    return 2.0 * np.pi * (2 * n + 1) * beta**2


@dataclass(frozen=True)
class PhaseSet:
    phi: tuple[float, float]
    eta: tuple[complex, complex]
    theta_n: float


def eta(params: OptomechParams, t: float, j: int) -> complex:
    """Displacement per photon of mirror ``j`` (1 or 2): beta_j (1 - exp(-i w_j t))."""
    b, w = params.beta[j - 1], params.omega_m[j - 1]
    return complex(b * (1.0 - np.exp(-1j * w * t)))


def phi(params: OptomechParams, t: float, j: int) -> float:
    """Kerr-like phase of mirror ``j``: beta_j^2 (w_j t - sin w_j t)."""
    b, w = params.beta[j - 1], params.omega_m[j - 1]
    return float(b**2 * (w * t - np.sin(w * t)))


def phases(params: OptomechParams, t: float) -> PhaseSet:
    return PhaseSet(
        phi=(phi(params, t, 1), phi(params, t, 2)),
        eta=(eta(params, t, 1), eta(params, t, 2)),
        theta_n=params.theta_n,
    )


def initial_state(dims=(2, 1, 1)) -> StateVector:
    """(|0> + |1>)/sqrt 2 in the cavity, both mirrors in the ground state."""
    space = _as_space(dims)
    if space.n_modes != 3 or space.dims[0] < 2:
        raise DimensionError(f"need (cavity >= 2, m1, m2) dims, got {space.dims}")
    psi = fock_state(space, (0, 0, 0)).amplitudes + fock_state(space, (1, 0, 0)).amplitudes
    return StateVector(space, psi / np.sqrt(2))


def default_dims(params: OptomechParams, max_photons: int = 1) -> tuple[int, int, int]:
    """Cavity/mirror truncation that holds the largest displacement 2 n beta."""
    return (
        max_photons + 1,
        auto_dim(2 * max_photons * params.beta[0]),
        auto_dim(2 * max_photons * params.beta[1]),
    )


def sector_phase(params: OptomechParams, t: float, nc: int) -> complex:
    """Phase that U(t) puts on the ``nc``-photon sector: exp(-i w_c t nc + i (phi_1 + phi_2) nc^2)."""
    kerr = phi(params, t, 1) + phi(params, t, 2)
    return complex(np.exp(-1j * params.omega_c * t * nc + 1j * kerr * nc**2))


def remove_sector_phases(state: StateVector, t: float, params: OptomechParams) -> StateVector:
    """Undo the photon-number-dependent phases of U(t) with an ideal cavity phase shift.

    At a recurrence time tau_n the mirrors are back in their initial state,
    but the one-photon sector still carries exp(2 i phi(tau_n)); this strips it.
    """
    amps = state.tensor_view().copy()
    for nc in range(amps.shape[0]):
        amps[nc] *= np.conj(sector_phase(params, t, nc))
    return StateVector(state.space, amps, state.truncation_loss)


def _check_tripartite(state: StateVector):
    if state.space.n_modes != 3:
        raise DimensionError(
            f"expected a (cavity, mirror1, mirror2) state, got dims {state.dims}"
        )


def evolve_closed_form(
    state: StateVector,
    t: float,
    params: OptomechParams,
    max_loss: float | None = MAX_TRUNCATION_LOSS,
    on_truncation: str = "raise",
) -> StateVector:
    """Apply the exact factored propagator U(t) to a (cavity, m1, m2) state.

    The result is the exact evolution projected onto the truncated basis and
    renormalized; the discarded weight is stored on the returned state.
    """
    _check_tripartite(state)
    dc, d1, d2 = state.dims
    psi = state.tensor_view()
    out = np.empty_like(psi)

    w1, w2 = params.omega_m
    rot1 = np.exp(-1j * w1 * t * np.arange(d1))
    rot2 = np.exp(-1j * w2 * t * np.arange(d2))
    e1, e2 = eta(params, t, 1), eta(params, t, 2)

    for nc in range(dc):
        block = psi[nc] * rot1[:, None] * rot2[None, :]
        if nc:
            block = displacement_matrix(d1, nc * e1) @ block @ displacement_matrix(d2, -nc * e2).T
        out[nc] = sector_phase(params, t, nc) * block

    kept = float(np.sum(np.abs(out) ** 2))
    before = state.norm() ** 2
    loss = max(0.0, 1.0 - kept / before)
    _check_loss(loss, max_loss, on_truncation, f"closed-form evolution to t={t}")
    out *= np.sqrt(before / kept)
    return StateVector(state.space, out, loss)


def hamiltonian_matrix(space, params: OptomechParams) -> np.ndarray:
    """Dense ``H / hbar`` on a (cavity, m1, m2) space."""
    space = _as_space(space)
    dims = space.dims
    if len(dims) != 3:
        raise DimensionError(f"expected three modes, got {dims}")
    nc = embed(number_op(dims[0]), 0, dims)
    H = params.omega_c * nc
    for j in (1, 2):
        b = annihilation(dims[j])
        x = embed(b + b.conj().T, j, dims)
        w, beta = params.omega_m[j - 1], params.beta[j - 1]
        sign = 1.0 if j == 1 else -1.0
        H = H + w * embed(number_op(dims[j]), j, dims) - sign * beta * w * (nc @ x)
    return H


def sector_hamiltonian(mirror_dims: tuple[int, int], params: OptomechParams, nc: int) -> np.ndarray:
    """Block of ``H / hbar`` acting on the mirrors when the cavity holds ``nc`` photons."""
    d1, d2 = mirror_dims
    w1, w2 = params.omega_m
    b1, b2 = params.beta
    a1, a2 = annihilation(d1), annihilation(d2)
    h1 = w1 * number_op(d1) - nc * b1 * w1 * (a1 + a1.conj().T)
    h2 = w2 * number_op(d2) + nc * b2 * w2 * (a2 + a2.conj().T)
    return (
        params.omega_c * nc * np.eye(d1 * d2)
        + np.kron(h1, np.eye(d2))
        + np.kron(np.eye(d1), h2)
    )


@lru_cache(maxsize=64)
def _sector_eigh(mirror_dims: tuple[int, int], params: OptomechParams, nc: int):
    evals, evecs = np.linalg.eigh(sector_hamiltonian(mirror_dims, params, nc))
    evals.setflags(write=False)
    evecs.setflags(write=False)
    return evals, evecs


def evolve_numeric(
    state: StateVector,
    t: float,
    params: OptomechParams,
    pad: int = 20,
    max_dim: int = 2000,
    max_loss: float | None = MAX_TRUNCATION_LOSS,
    on_truncation: str = "raise",
) -> StateVector:
    """Apply ``exp(-i H t)`` by dense Hermitian eigendecomposition.

    The mirror modes are padded with ``pad`` extra levels before ``H`` is
    built, so that the truncation edge does not feed back into the levels
    that are kept; the result is cropped to the input dims and renormalized.
    ``H`` conserves the photon number, so each photon-number sector
    (a contiguous diagonal block since the cavity is the leading mode) is
    diagonalized on its own.
    """
    _check_tripartite(state)
    dc, d1, d2 = state.dims
    pdims = (dc, d1 + pad, d2 + pad)
    size = pdims[1] * pdims[2]
    if size > max_dim:
        raise ResourceError(f"sector dimension {size} exceeds max_dim={max_dim}")

    psi = np.zeros(pdims, dtype=complex)
    psi[:, :d1, :d2] = state.tensor_view()
    psi = psi.reshape(dc, size)
    out = np.zeros_like(psi)
    for nc in range(dc):
        if not np.any(psi[nc]):
            continue
        evals, evecs = _sector_eigh(pdims[1:], params, nc)
        out[nc] = evecs @ (np.exp(-1j * evals * t) * (evecs.conj().T @ psi[nc]))

    out = out.reshape(pdims)[:, :d1, :d2]
    kept = float(np.sum(np.abs(out) ** 2))
    before = state.norm() ** 2
    loss = max(0.0, 1.0 - kept / before)
    _check_loss(loss, max_loss, on_truncation, f"numeric evolution to t={t}")
    out = out * np.sqrt(before / kept)
    return StateVector(state.space, out, loss)


def photon_number(state: StateVector) -> float:
    """Expectation of c^dag c (cavity is mode 0)."""
    probs = np.sum(np.abs(state.tensor_view()) ** 2, axis=tuple(range(1, state.space.n_modes)))
    return float(np.dot(np.arange(state.dims[0]), probs))

