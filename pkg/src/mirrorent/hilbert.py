"""Truncated Fock-space linear algebra.

States are dense complex vectors over a composite space whose modes are
ordered (cavity, mirror 1, mirror 2) by convention.  Amplitude indexing is
row-major over that order, so the last mode varies fastest.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

#: Default ceiling on the weight discarded when a state is cut to its basis.
MAX_TRUNCATION_LOSS = 1e-6


class DimensionError(ValueError):
    """Raised for occupations or shapes that do not fit the space."""


class TruncationError(RuntimeError):
    """Raised when a truncated state discards more weight than allowed."""


class TruncationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ModeSpace:
    dim: int

    def __post_init__(self):
        if int(self.dim) < 1:
            raise DimensionError(f"mode dimension must be >= 1, got {self.dim}")


@dataclass(frozen=True)
class CompositeSpace:
    """Ordered tensor product of single-mode spaces."""

    modes: tuple[ModeSpace, ...]

    def __post_init__(self):
        if not self.modes:
            raise DimensionError("a composite space needs at least one mode")

    @classmethod
    def of(cls, *dims: int) -> "CompositeSpace":
        if len(dims) == 1 and not isinstance(dims[0], (int, np.integer)):
            dims = tuple(dims[0])
        return cls(tuple(ModeSpace(int(d)) for d in dims))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(m.dim for m in self.modes)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    def subspace(self, modes: Iterable[int]) -> "CompositeSpace":
        return CompositeSpace(tuple(self.modes[i] for i in sorted(modes)))

    def __mul__(self, other: "CompositeSpace") -> "CompositeSpace":
        return CompositeSpace(self.modes + other.modes)


def _as_space(space) -> CompositeSpace:
    if isinstance(space, CompositeSpace):
        return space
    if isinstance(space, ModeSpace):
        return CompositeSpace((space,))
    if isinstance(space, (int, np.integer)):
        return CompositeSpace.of(int(space))
    space = tuple(space)
    if all(isinstance(m, ModeSpace) for m in space):
        return CompositeSpace(space)
    return CompositeSpace.of(*space)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state over a composite truncated Fock space.

    ``truncation_loss`` records the weight that was dropped (and renormalized
    away) when the state was cut to the finite basis.
    """

    space: CompositeSpace
    amplitudes: np.ndarray
    truncation_loss: float = 0.0

    def __post_init__(self):
        space = _as_space(self.space)
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != space.total_dim:
            raise DimensionError(
                f"{amps.size} amplitudes do not fit space of dims {space.dims}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.space.dims

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        nrm = self.norm()
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.space, self.amplitudes / nrm, self.truncation_loss)

    def tensor_view(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per mode."""
        return self.amplitudes.reshape(self.dims)

    def dm(self) -> "DensityMatrix":
        return DensityMatrix.from_state(self)

    def __repr__(self):
        return f"StateVector(dims={self.dims}, norm={self.norm():.12g})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    space: CompositeSpace
    matrix: np.ndarray

    def __post_init__(self):
        space = _as_space(self.space)
        mat = np.array(self.matrix, dtype=complex)
        n = space.total_dim
        if mat.shape != (n, n):
            raise DimensionError(f"matrix shape {mat.shape} does not fit dims {space.dims}")
        mat.setflags(write=False)
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_state(cls, psi: StateVector) -> "DensityMatrix":
        a = psi.amplitudes
        return cls(psi.space, np.outer(a, a.conj()))

    @property
    def dims(self) -> tuple[int, ...]:
        return self.space.dims

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def purity(self) -> float:
        # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
        return float(np.sum(np.abs(self.matrix) ** 2))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def check(self, herm_tol=1e-12, trace_tol=1e-10, psd_tol=1e-10) -> None:
        """Raise ``ValueError`` if the matrix is not a valid density matrix."""
        m = self.matrix
        herm = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        if herm > herm_tol:
            raise ValueError(f"not Hermitian (deviation {herm:.3g})")
        tr = self.trace()
        if abs(tr - 1) > trace_tol:
            raise ValueError(f"trace {tr:.12g} differs from 1")
        lo = self.eigenvalues().min()
        if lo < -psd_tol:
            raise ValueError(f"negative eigenvalue {lo:.3g}")


def auto_dim(alpha_max: float) -> int:
    """Truncation covering coherent amplitudes up to ``|alpha_max|``."""
    a = abs(alpha_max)
    return int(math.ceil(a * a + 6.0 * a + 10.0))


def fock_state(space, occupations: Sequence[int]) -> StateVector:
    space = _as_space(space)
    occupations = tuple(int(n) for n in occupations)
    if len(occupations) != space.n_modes:
        raise DimensionError(
            f"{len(occupations)} occupations for a {space.n_modes}-mode space"
        )
    for n, d in zip(occupations, space.dims):
        if not 0 <= n < d:
            raise DimensionError(f"occupation {n} outside mode of dim {d}")
    amps = np.zeros(space.total_dim, dtype=complex)
    amps[np.ravel_multi_index(occupations, space.dims)] = 1.0
    return StateVector(space, amps)


def _check_loss(loss: float, max_loss: float | None, on_truncation: str, what: str):
    if max_loss is None or loss <= max_loss:
        return
    msg = f"{what}: truncation discards weight {loss:.3g} > {max_loss:.3g}"
    if on_truncation == "raise":
        raise TruncationError(msg)
    if on_truncation == "warn":
        warnings.warn(msg, TruncationWarning, stacklevel=3)


def coherent_amplitudes(dim: int, alpha: complex) -> np.ndarray:
    """Unnormalized ``<n|alpha>`` for ``n < dim``, built by a_{n+1} = a_n alpha / sqrt(n+1)."""
    amps = np.empty(dim, dtype=complex)
    amps[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for n in range(dim - 1):
        amps[n + 1] = amps[n] * alpha / np.sqrt(n + 1)
    return amps


def coherent_state(
    dim: int,
    alpha: complex,
    max_loss: float | None = MAX_TRUNCATION_LOSS,
    on_truncation: str = "raise",
) -> StateVector:
    """Single-mode coherent state truncated to ``dim`` levels and renormalized.

    Parameters
    ----------
    dim : int
        Number of Fock levels kept.
    alpha : complex
        Coherent amplitude.
    max_loss : float or None
        Largest tolerated discarded weight ``1 - sum_n |<n|alpha>|^2``.
    on_truncation : {"raise", "warn", "ignore"}
        What to do when ``max_loss`` is exceeded.
    """
    if dim < 1:
        raise DimensionError("dim must be >= 1")
    amps = coherent_amplitudes(dim, complex(alpha))
    kept = float(np.sum(np.abs(amps) ** 2))
    loss = max(0.0, 1.0 - kept)
    _check_loss(loss, max_loss, on_truncation, f"coherent state alpha={alpha}")
    return StateVector(CompositeSpace.of(dim), amps / np.sqrt(kept), loss)


def tensor(*states: StateVector) -> StateVector:
    """Kronecker product in the given mode order."""
    if len(states) == 1 and not isinstance(states[0], StateVector):
        states = tuple(states[0])
    if not states:
        raise ValueError("tensor needs at least one state")
    amps = states[0].amplitudes
    space = states[0].space
    loss = states[0].truncation_loss
    for s in states[1:]:
        amps = np.kron(amps, s.amplitudes)
        space = space * s.space
        loss = 1.0 - (1.0 - loss) * (1.0 - s.truncation_loss)
    return StateVector(space, amps, loss)


def _normalize_modes(modes, n_modes: int) -> tuple[int, ...]:
    if isinstance(modes, (int, np.integer)):
        modes = (modes,)
    modes = tuple(sorted(set(int(m) for m in modes)))
    for m in modes:
        if not 0 <= m < n_modes:
            raise DimensionError(f"mode index {m} outside 0..{n_modes - 1}")
    return modes


def partial_trace(state: StateVector | DensityMatrix, keep) -> DensityMatrix:
    """Reduced density matrix on the modes listed in ``keep``."""
    space = state.space
    keep = _normalize_modes(keep, space.n_modes)
    if not keep:
        raise ValueError("keep must name at least one mode")
    drop = tuple(i for i in range(space.n_modes) if i not in keep)
    dims = space.dims
    dk = math.prod(dims[i] for i in keep)
    if isinstance(state, StateVector):
        psi = np.transpose(state.tensor_view(), keep + drop).reshape(dk, -1)
        rho = psi @ psi.conj().T
    else:
        n = space.n_modes
        t = state.matrix.reshape(dims + dims)
        # contract each dropped ket axis with its bra partner
        letters = "abcdefghijklmnopqrstuvwxyz"
        ket = list(letters[:n])
        bra = list(letters[n : 2 * n])
        for i in drop:
            bra[i] = ket[i]
        out = "".join(ket[i] for i in keep) + "".join(bra[i] for i in keep)
        rho = np.einsum("".join(ket) + "".join(bra) + "->" + out, t).reshape(dk, dk)
    return DensityMatrix(space.subspace(keep), rho)


def partial_transpose(rho: DensityMatrix | np.ndarray, part, dims=None) -> np.ndarray:
    """Transpose the ket/bra indices of the modes in ``part`` only."""
    if isinstance(rho, DensityMatrix):
        dims = rho.dims
        mat = rho.matrix
    else:
        mat = np.asarray(rho)
        if dims is None:
            raise ValueError("dims are required for a bare matrix")
        dims = tuple(dims)
    n = len(dims)
    part = _normalize_modes(part, n)
    t = mat.reshape(tuple(dims) + tuple(dims))
    axes = list(range(2 * n))
    for i in part:
        axes[i], axes[n + i] = axes[n + i], axes[i]
    return np.transpose(t, axes).reshape(mat.shape)


def overlap(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``."""
    if a.dims != b.dims:
        raise DimensionError(f"space mismatch: {a.dims} vs {b.dims}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity_pure(a: StateVector, b: StateVector) -> float:
    return abs(overlap(a, b)) ** 2


def fidelity_with_pure(rho: DensityMatrix, psi: StateVector) -> float:
    """``<psi|rho|psi>``."""
    if rho.dims != psi.dims:
        raise DimensionError(f"space mismatch: {rho.dims} vs {psi.dims}")
    a = psi.amplitudes
    return float(np.real(np.vdot(a, rho.matrix @ a)))


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def number_op(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def embed(op: np.ndarray, mode: int, dims: Sequence[int]) -> np.ndarray:
    """Lift a single-mode operator to the full composite space."""
    out = np.ones((1, 1), dtype=complex)
    for i, d in enumerate(dims):
        out = np.kron(out, op if i == mode else np.eye(d, dtype=complex))
    return out


def displacement_matrix(dim: int, alpha: complex) -> np.ndarray:
    """Exact matrix elements ``<m|D(alpha)|n>`` for ``m, n < dim``.

    Uses ``D|n> = (b^dag - alpha^*) D|n-1> / sqrt(n)``, seeded by the
    coherent amplitudes in column 0.  The block is the projection of the
    infinite-dimensional operator, not the exponential of a truncated
    generator.
    """
    alpha = complex(alpha)
    D = np.zeros((dim, dim), dtype=complex)
    D[:, 0] = coherent_amplitudes(dim, alpha)
    sq = np.sqrt(np.arange(dim, dtype=float))
    ac = alpha.conjugate()
    for n in range(1, dim):
        col = -ac * D[:, n - 1]
        col[1:] += sq[1:] * D[:-1, n - 1]
        D[:, n] = col / sq[n]
    return D
