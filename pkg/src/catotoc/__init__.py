"""Coupled quantized cat maps on the torus: OTOCs, entropies, phase space.

The package quantizes perturbed cat maps on a finite torus Hilbert
space, couples two of them, and measures how entanglement entropies,
out-of-time-ordered correlators, and operator-Schmidt spectra grow
under hyperbolic versus elliptic dynamics, next to a classical
companion map.  See the harness module for the scenario engine and the
cli module for the command line entry point.
"""

from .catmap import (
    CoupledPropagator,
    CoupledSpec,
    MapSpec,
    coupling_matrix,
    elliptic_spec,
    hyperbolic_spec,
    propagator_1d,
    propagator_2d,
)
from .classical import (
    coarse_distribution,
    cse,
    evolve_ensemble_2d,
    lyapunov_estimate,
    lyapunov_spectrum_2d,
    step_1d,
    step_2d,
)
from .config import VERSION as __version__
from .entropy import linear_entropy, purity, renyi2, rmt_saturation, von_neumann
from .errors import (
    BudgetExceededError,
    CatotocError,
    ConfigError,
    DimensionMismatchError,
    InvalidDimensionError,
    InvalidSpecError,
    NumericalHealthError,
    UnsupportedMapError,
)
from .harness import ScenarioConfig, run_figure_suite, run_scenario, sweep
from .hilbert import (
    clock_operator,
    dft_matrix,
    effective_hbar,
    momentum_operator,
    partial_trace,
    partial_trace_pure,
    position_operator,
    shift_operator,
    tensor_product,
    two_dof_momentum,
    two_dof_position,
)
from .otoc import (
    correlators_2_4,
    heisenberg_evolve,
    otoc_full,
    otoc_re_sum,
    rescale_for_comparison,
)
from .states import PhasePoint, coherent_state, density_of, product_state
from .verify import verify
from .wigner import (
    operator_schmidt,
    wigner_grid,
    wigner_schmidt_crosscheck,
    wse,
    wse_pure_fast,
)

__all__ = [name for name in dir() if not name.startswith("_")]
