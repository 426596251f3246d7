"""Coherent and extended coherent operators on a truncated Fock space.

The package builds ``U(z) = exp(z a^dag - conj(z) a)`` and
``U(z, t) = exp(z a^dag - conj(z) a + i t N)`` as dense matrices, provides
their closed forms (ordered products, matrix elements, commutation phases,
regularised traces) and checks each closed form against a brute-force
exponential on an interior band of the cutoff.
"""
from .coherent import (
    DisentangleForm,
    coherent_matrix_block,
    coherent_matrix_element,
    coherent_state,
    commutation_phase,
    displacement_disentangled,
    displacement_exact,
)
from .errors import (
    DegenerateMeasureError,
    DivergentSeriesError,
    DomainError,
    GridResolutionError,
    PreconditionError,
    TruncationWarning,
)
from .extended import (
    ExtendedMatrixElementParts,
    ExtendedParam,
    conjugated_decomposition,
    extended_commutation_phase,
    extended_commutation_residual,
    extended_disentangled,
    extended_exact,
    extended_matrix_block,
    extended_matrix_element,
    extended_trace_abel,
    extended_trace_closed,
    full_turn_value,
    matrix_element_parts,
    product_uv,
    squeeze_extended,
    squeeze_vacuum_phases,
)
from .kernels import (
    LaguerreEval,
    PhaseKernelValue,
    abel_sum,
    abel_trace,
    abs_f_sq,
    f_of_t,
    g_of_t,
    laguerre_assoc,
    laguerre_eval,
    laguerre_sequence,
    phase_kernel,
)
from .matrix_core import (
    TruncationConfig,
    band_residual,
    expm_skew,
    expm_triangular,
    max_entry,
    unitarity_residual,
)
from .oscillator import LadderSet, Su11Set, build_ladder, build_su11, number_state
from .phase_space import (
    LineQuadratureT,
    PolarQuadrature,
    build_polar_grid,
    build_t_grid,
    glauber_reconstruct,
    resolution_residual_coherent,
    resolution_residual_extended,
    resolution_residual_t_integrated,
    trace_limit_probe,
    trace_limit_probe_numeric,
)

__version__ = "0.1.0"
