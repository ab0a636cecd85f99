import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mirrorent.hilbert import (
    CompositeSpace,
    DensityMatrix,
    DimensionError,
    StateVector,
    TruncationError,
    TruncationWarning,
    auto_dim,
    coherent_amplitudes,
    coherent_state,
    displacement_matrix,
    fidelity_pure,
    fock_state,
    overlap,
    partial_trace,
    partial_transpose,
    tensor,
)

from conftest import random_state


def series_coherent(dim, alpha):
    """<n|alpha> straight from the factorial formula."""
    return np.array(
        [np.exp(-abs(alpha) ** 2 / 2) * alpha**n / math.sqrt(math.factorial(n)) for n in range(dim)],
        dtype=complex,
    )


def test_fock_vacuum():
    psi = fock_state(CompositeSpace.of(2, 5, 5), (0, 0, 0))
    assert psi.amplitudes[0] == 1
    assert np.count_nonzero(psi.amplitudes) == 1


def test_fock_row_major_indexing():
    n = 7
    psi = fock_state((2, n, n), (1, 0, 0))
    assert np.flatnonzero(psi.amplitudes).tolist() == [n * n]


def test_fock_out_of_range():
    n = 7
    with pytest.raises(DimensionError):
        fock_state((2, n, n), (0, n, 0))
    with pytest.raises(DimensionError):
        fock_state((2, n, n), (0, 0))


def test_coherent_vacuum():
    psi = coherent_state(10, 0)
    np.testing.assert_allclose(psi.amplitudes, np.eye(10)[0])


def test_coherent_overlap_with_vacuum():
    beta = 1.0
    ov = overlap(coherent_state(30, 0), coherent_state(30, 2 * beta))
    assert abs(ov - np.exp(-2.0)) < 1e-12
    assert abs(ov - 0.1353352832) < 1e-10


def test_coherent_normalized_against_series():
    alpha = 1.5 + 0.5j
    series = series_coherent(40, alpha)
    assert abs(np.sum(np.abs(series) ** 2) - 1) < 1e-12
    psi = coherent_state(40, alpha)
    assert abs(psi.norm() - 1) < 1e-12
    np.testing.assert_allclose(psi.amplitudes, series, atol=1e-12)


def test_coherent_recurrence_exact():
    alpha = 0.9 - 0.3j
    a = coherent_amplitudes(25, alpha)
    for n in range(24):
        assert a[n + 1] == a[n] * alpha / np.sqrt(n + 1)


def test_coherent_overlap_closed_form():
    # |<a|g>| = exp(-|a-g|^2/2), phase exp(i Im(a^* g))
    a, g = 0.4 + 0.7j, -1.1 + 0.2j
    d = 40
    expected = np.exp(-abs(a - g) ** 2 / 2 + 1j * (np.conj(a) * g).imag)
    assert abs(overlap(coherent_state(d, a), coherent_state(d, g)) - expected) < 1e-12


def test_truncation_loss_reported_and_enforced():
    with pytest.raises(TruncationError):
        coherent_state(4, 2.0)
    with pytest.warns(TruncationWarning):
        psi = coherent_state(4, 2.0, on_truncation="warn")
    assert psi.truncation_loss > 0.1
    assert abs(psi.norm() - 1) < 1e-12


def test_auto_dim_keeps_loss_small():
    for alpha in (0.1, 0.5, 1.0, 2.0, 3.0, 4.0):
        psi = coherent_state(auto_dim(alpha), alpha)
        assert psi.truncation_loss < 1e-10


def test_tensor_vacuum():
    psi = tensor(fock_state(3, (0,)), fock_state(4, (0,)))
    assert psi.dims == (3, 4)
    assert psi.amplitudes[0] == 1


def test_tensor_matches_elementwise_product():
    beta = 0.7
    d = 20
    a, b = coherent_state(d, 2 * beta), coherent_state(d, -2 * beta)
    psi = tensor(a, b).tensor_view()
    direct = np.array([[a.amplitudes[i] * b.amplitudes[j] for j in range(d)] for i in range(d)])
    np.testing.assert_allclose(psi, direct, atol=1e-15)


def test_tensor_associative(rng):
    a, b, c = (random_state(rng, (d,)) for d in (2, 3, 4))
    np.testing.assert_array_equal(tensor(tensor(a, b), c).amplitudes, tensor(a, b, c).amplitudes)


def test_tensor_norm_multiplicative(rng):
    a = StateVector(3, rng.standard_normal(3))
    b = StateVector(4, rng.standard_normal(4))
    assert abs(tensor(a, b).norm() - a.norm() * b.norm()) < 1e-12


def test_partial_trace_of_product_is_pure(rng):
    a, b = random_state(rng, (3,)), random_state(rng, (5,))
    rho = partial_trace(tensor(a, b), (0,))
    assert abs(rho.purity() - 1) < 1e-12
    np.testing.assert_allclose(rho.matrix, np.outer(a.amplitudes, a.amplitudes.conj()), atol=1e-14)


def test_partial_trace_state_and_density_agree(rng):
    psi = random_state(rng, (2, 3, 4))
    for keep in ((0,), (1,), (2,), (0, 2), (1, 2)):
        r1 = partial_trace(psi, keep)
        r2 = partial_trace(psi.dm(), keep)
        np.testing.assert_allclose(r1.matrix, r2.matrix, atol=1e-14)
        assert abs(r1.trace() - 1) < 1e-12
        r1.check()


def test_partial_trace_needs_kept_modes(rng):
    with pytest.raises(ValueError):
        partial_trace(random_state(rng, (2, 2)), ())


def test_partial_transpose_product_state(rng):
    a, b = random_state(rng, (3,)), random_state(rng, (4,))
    ra, rb = np.outer(a.amplitudes, a.amplitudes.conj()), np.outer(b.amplitudes, b.amplitudes.conj())
    pt = partial_transpose(tensor(a, b).dm(), (0,))
    np.testing.assert_allclose(pt, np.kron(ra.T, rb), atol=1e-15)
    assert np.linalg.eigvalsh(pt).min() > -1e-12


def test_partial_transpose_involution(rng):
    rho = random_state(rng, (3, 4)).dm()
    twice = partial_transpose(partial_transpose(rho, (0,)), (0,), dims=rho.dims)
    assert np.max(np.abs(twice - rho.matrix)) < 1e-14


def test_partial_transpose_bell():
    amps = np.zeros(4)
    amps[2], amps[1] = 1 / np.sqrt(2), -1 / np.sqrt(2)  # (|10> - |01>)/sqrt2
    pt = partial_transpose(StateVector((2, 2), amps).dm(), (0,))
    # direct 4x4 eigensolve of the hand-built transpose
    assert abs(np.linalg.eigvalsh(pt).min() + 0.5) < 1e-14


def test_overlap_basics(rng):
    psi = random_state(rng, (3, 3))
    assert abs(overlap(psi, psi) - 1) < 1e-12
    assert overlap(fock_state(3, (0,)), fock_state(3, (1,))) == 0
    with pytest.raises(DimensionError):
        overlap(fock_state(3, (0,)), fock_state(4, (0,)))


def test_overlap_conjugate_linear(rng):
    a, b = random_state(rng, (5,)), random_state(rng, (5,))
    c = 0.3 - 1.2j
    scaled = StateVector(a.space, c * a.amplitudes)
    assert abs(overlap(scaled, b) - np.conj(c) * overlap(a, b)) < 1e-12
    assert abs(fidelity_pure(a, b) - abs(overlap(a, b)) ** 2) < 1e-15


def test_displacement_matrix_matches_generator_exponential():
    # exponentiate the generator on a much larger space and crop
    alpha = 0.8 - 0.4j
    d, big = 12, 80
    b = np.diag(np.sqrt(np.arange(1, big)), 1)
    gen = alpha * b.T - np.conj(alpha) * b
    w, v = np.linalg.eig(gen)
    full = v @ np.diag(np.exp(w)) @ np.linalg.inv(v)
    np.testing.assert_allclose(displacement_matrix(d, alpha), full[:d, :d], atol=1e-12)


def test_states_are_read_only():
    psi = coherent_state(5, 0.3)
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 0


def test_density_matrix_check_rejects_bad_trace():
    with pytest.raises(ValueError):
        DensityMatrix((2,), np.eye(2)).check()


@settings(max_examples=40, deadline=None)
@given(
    re=st.floats(-2, 2),
    im=st.floats(-2, 2),
)
def test_coherent_unit_norm_property(re, im):
    alpha = complex(re, im)
    psi = coherent_state(auto_dim(alpha), alpha)
    assert abs(psi.norm() - 1) < 1e-10
    assert psi.truncation_loss < 1e-10


@settings(max_examples=30, deadline=None)
@given(
    dims=st.lists(st.integers(1, 4), min_size=2, max_size=3),
    seed=st.integers(0, 2**32 - 1),
    data=st.data(),
)
def test_partial_trace_unit_trace_property(dims, seed, data):
    psi = random_state(np.random.default_rng(seed), tuple(dims))
    keep = data.draw(st.sets(st.integers(0, len(dims) - 1), min_size=1))
    rho = partial_trace(psi, keep)
    assert abs(rho.trace() - 1) < 1e-10
    assert np.max(np.abs(rho.matrix - rho.matrix.conj().T)) < 1e-12
    part = data.draw(st.sets(st.integers(0, len(dims) - 1), min_size=1))
    full = psi.dm()
    pt = partial_transpose(full, part)
    assert abs(np.trace(pt) - 1) < 1e-12
    assert np.max(np.abs(pt - pt.conj().T)) < 1e-14
    assert np.max(np.abs(partial_transpose(pt, part, full.dims) - full.matrix)) < 1e-14
