"""Single-photon entanglement of two movable cavity mirrors."""

from .dynamics import (
    OptomechParams,
    eta,
    evolve_closed_form,
    evolve_numeric,
    hamiltonian_matrix,
    initial_state,
    phi,
    theta_n,
)
from .entanglement import (
    analytic_coeffs_zero_phase,
    analytic_dk,
    analytic_logneg,
    logneg_density,
    logneg_pure,
    schmidt_pure,
)
from .hilbert import (
    CompositeSpace,
    DensityMatrix,
    StateVector,
    coherent_state,
    fidelity_pure,
    fock_state,
    overlap,
    partial_trace,
    partial_transpose,
    tensor,
)
from .protocol import (
    MeasurementOutcome,
    branch_phase,
    collapse,
    map_and_rotate,
    mirror_state,
    probabilities,
    run_protocol,
)
from .thermal import ThermalConfig, thermal_negativity, thermal_post_state, thermal_purity

__version__ = "0.1.0"
