"""Schmidt decomposition and logarithmic negativity.

Negativities are in bits.  For a pure state with Schmidt coefficients c_k,
E_N = log2 (sum_k c_k)^2; for a density matrix, E_N = log2 ||rho^{T_A}||_1.
The closed forms for the two post-measurement mirror states are in
``analytic_dk`` / ``analytic_logneg``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .hilbert import (
    DensityMatrix,
    StateVector,
    _normalize_modes,
    coherent_state,
    partial_transpose,
)

#: Eigenvalues of rho^{T_A} above this (negative) threshold are treated as zero.
NEGATIVE_EIG_CUTOFF = 1e-12


class DegenerateStateError(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """``psi = sum_k coefficients[k] |left[k]> |right[k]>``.

    ``left_basis`` / ``right_basis`` hold one basis vector per row.
    """

    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray
    left_dims: tuple[int, ...]
    right_dims: tuple[int, ...]

    def __len__(self):
        return len(self.coefficients)

    def rank(self, tol: float = 1e-9) -> int:
        return int(np.sum(self.coefficients > tol))

    def left_states(self) -> list[StateVector]:
        return [StateVector(self.left_dims, v) for v in self.left_basis]

    def right_states(self) -> list[StateVector]:
        return [StateVector(self.right_dims, v) for v in self.right_basis]

    def reconstruct(self) -> np.ndarray:
        """Amplitude matrix (left index, right index)."""
        return (self.left_basis.T * self.coefficients) @ self.right_basis


class NegativityResult(NamedTuple):
    value: float
    method: str

    def __float__(self):
        return self.value


def _bipartition(psi: StateVector, part) -> tuple[tuple[int, ...], tuple[int, ...]]:
    part = _normalize_modes(part, psi.space.n_modes)
    rest = tuple(i for i in range(psi.space.n_modes) if i not in part)
    if not part or not rest:
        raise ValueError("a bipartition needs modes on both sides")
    return part, rest


def schmidt_pure(psi: StateVector, part, tol: float = 1e-14) -> SchmidtDecomposition:
    """Schmidt decomposition across ``part`` versus the remaining modes.

    Coefficients at or below ``tol`` are dropped.  Each left basis vector is
    phased so that its first nonzero amplitude is real and positive.
    """
    part, rest = _bipartition(psi, part)
    dims = psi.dims
    ldims = tuple(dims[i] for i in part)
    rdims = tuple(dims[i] for i in rest)
    mat = np.transpose(psi.tensor_view(), part + rest).reshape(math.prod(ldims), -1)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    keep = s > tol
    u, s, vh = u[:, keep], s[keep], vh[keep]
    left = u.T.copy()
    right = vh.copy()
    for k, vec in enumerate(left):
        nz = np.flatnonzero(np.abs(vec) > 1e-12)
        if nz.size:
            ph = vec[nz[0]] / abs(vec[nz[0]])
            left[k] = vec / ph
            right[k] = right[k] * ph
    return SchmidtDecomposition(s, left, right, ldims, rdims)


def logneg_pure(psi: StateVector, part=(0,)) -> NegativityResult:
    coeffs = schmidt_pure(psi, part).coefficients
    return NegativityResult(float(2.0 * np.log2(np.sum(coeffs))), "pure_schmidt")


def trace_norm_pt(rho: DensityMatrix, part) -> float:
    """``||rho^{T_A}||_1`` from the negative eigenvalues of the partial transpose."""
    evals = np.linalg.eigvalsh(partial_transpose(rho, part))
    neg = evals[evals < -NEGATIVE_EIG_CUTOFF]
    return float(1.0 + 2.0 * abs(np.sum(neg)))


def logneg_density(rho: DensityMatrix | StateVector, part=(0,)) -> NegativityResult:
    if isinstance(rho, StateVector):
        rho = rho.dm()
    try:
        norm = trace_norm_pt(rho, part)
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError(f"eigensolve of the partial transpose failed: {exc}") from exc
    return NegativityResult(float(np.log2(norm)), "partial_transpose")


class ZeroPhaseCoefficients(NamedTuple):
    raw: tuple[float, float]
    """Coefficients as written for each state: c_1, c_2."""
    weights: tuple[float, float]
    """Normalized Schmidt weights, nonincreasing."""


def analytic_coeffs_zero_phase(beta: float, sign: int) -> ZeroPhaseCoefficients:
    """Closed-form Schmidt data of ``psi_pm`` when the branch phase is 1.

    For the minus state ``raw`` holds the basis-rotation amplitudes
    sqrt((1 -+ sqrt(1 - e^{-4 beta^2}))/2) and the weights are both 1/sqrt2.
    For the plus state ``raw`` is (1 - e^{-2 beta^2}, 1 + e^{-2 beta^2}) and
    the weights are those divided by sqrt(4 P_plus).
    """
    if beta < 0:
        raise ValueError("beta must be >= 0")
    ov = math.exp(-2.0 * beta**2)
    if sign < 0:
        if beta == 0:
            raise DegenerateStateError("the minus state does not exist at beta = 0")
        root = math.sqrt(1.0 - ov**2)
        raw = (math.sqrt((1.0 - root) / 2.0), math.sqrt((1.0 + root) / 2.0))
        w = 1.0 / math.sqrt(2.0)
        return ZeroPhaseCoefficients(raw, (w, w))
    raw = (1.0 - ov, 1.0 + ov)
    norm = math.sqrt(2.0 + 2.0 * ov**2)  # sqrt(4 P_plus)
    return ZeroPhaseCoefficients(raw, (raw[1] / norm, raw[0] / norm))


def _overlap_ratio(beta: float, theta: float, sign: int) -> float:
    ov = math.exp(-4.0 * beta**2)
    den = 1.0 + sign * ov * math.cos(theta)
    if den <= 1e-15:
        raise DegenerateStateError(
            f"vanishing normalization for sign {sign:+d} at beta={beta}, theta={theta}"
        )
    return (1.0 - ov) / den


def analytic_dk(beta: float, theta: float, sign: int) -> tuple[float, float]:
    """Schmidt coefficients (d_1, d_2) of ``psi_pm`` for any branch phase, d_1 <= d_2."""
    x = _overlap_ratio(beta, theta, sign)
    root = math.sqrt(max(0.0, 1.0 - x * x))
    return math.sqrt(0.5 - 0.5 * root), math.sqrt(0.5 + 0.5 * root)


def analytic_logneg(beta: float, theta: float, sign: int) -> NegativityResult:
    # 2 log2(d1 + d2) = log2(1 + 2 d1 d2) = log2(1 + x); the second form
    # avoids cancellation in d1 when x is small
    x = _overlap_ratio(beta, theta, sign)
    return NegativityResult(math.log2(1.0 + x), "analytic")


def logneg_plus_zero_phase(beta: float) -> float:
    return 1.0 - math.log2(1.0 + math.exp(-4.0 * beta**2))


def zero_phase_modes(beta: float, sign: int, dim: int) -> tuple[tuple[float, float], list[tuple[np.ndarray, np.ndarray]]]:
    """Explicit two-term decomposition of ``psi_pm`` at zero branch phase.

    Both mirror bases are spanned by |0> and the normalized component of
    |+-2 beta> orthogonal to it.  Returns ``(weights, modes)`` where
    ``modes[k] = (mirror1_vector, mirror2_vector)`` and
    ``psi = sum_k weights[k] modes[k][0] (x) modes[k][1]``.
    """
    if beta <= 0:
        raise DegenerateStateError("the decomposition needs beta > 0")
    ov = math.exp(-2.0 * beta**2)
    vac = coherent_state(dim, 0).amplitudes

    def orth(j):
        disp = coherent_state(dim, (-1) ** (j + 1) * 2 * beta).amplitudes
        return (disp - ov * vac) / math.sqrt(1.0 - ov**2)

    t1, t2 = orth(1), orth(2)
    if sign < 0:
        c1, c2 = analytic_coeffs_zero_phase(beta, -1).raw
        a1 = [(-1) ** j * (c1 * vac + c2 * t) for j, t in ((1, t1), (2, t2))]
        a2 = [c2 * vac - c1 * t for t in (t1, t2)]
        w = 1.0 / math.sqrt(2.0)
        return (w, w), [(a1[0], a1[1]), (a2[0], a2[1])]
    c1, c2 = 1.0 - ov, 1.0 + ov
    norm = math.sqrt(2.0 + 2.0 * ov**2)
    b1 = [math.sqrt(c1 / 2) * vac - math.sqrt(c2 / 2) * t for t in (t1, t2)]
    b2 = [math.sqrt(c2 / 2) * vac + math.sqrt(c1 / 2) * t for t in (t1, t2)]
    return (c1 / norm, c2 / norm), [(b1[0], b1[1]), (b2[0], b2[1])]
