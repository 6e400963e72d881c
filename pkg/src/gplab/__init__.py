"""gplab: a numerical laboratory for the Gross-Pitaevskii limit of bosonic
many-body dynamics.

Subpackages cover zero-energy scattering (scattering length two ways),
GP and modified-GP evolution on periodic boxes, truncated-Fock-space
operator algebra (Weyl, Bogoliubov, squeezed coherent states), exact
small-system many-body evolution, and convergence/fluctuation diagnostics
that probe condensation trends at desk scale.
"""

__version__ = "0.1.0"

from .scattering import (
    RadialPotential,
    ScatteringSolution,
    gaussian_bump,
    potential_from_samples,
    scaled_scattering_profile,
    scattering_length_integral,
    soft_ball,
    solve_zero_energy,
)
from .grids import PeriodicGrid, WaveField, field_distance
from .gp import (
    ConvolutionKernel,
    GPParams,
    build_convolution_kernel,
    evolve_gp,
    evolve_modified_gp,
    gp_energy,
    gp_ground_state,
)
from .fock import (
    CorrelationKernel,
    FockBasis,
    FockOperator,
    FockVector,
    ModeBasis,
    assemble_hamiltonian,
    bogoliubov,
    bogoliubov_apply,
    build_correlation_kernel,
    cosh_sinh,
    ladder_ops,
    number_operator,
    reduced_density,
    squeezed_coherent,
    trace_norm_distance,
    trap_operator,
    weyl,
    weyl_apply,
)
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    SweepContext,
    chi_hypothesis_expectation,
    convergence_sweep,
    energy_expansion_check,
    evolve_many_body,
    fluctuation_number,
    fluctuation_number_derivative,
    fluctuation_state,
    sector_ground_energy_scan,
)

__all__ = [name for name in dir() if not name.startswith("_")]
