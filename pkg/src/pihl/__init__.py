"""Numerical toolkit for the pi-corrected Heisenberg limit of unitary phase estimation."""
from .bounds import (
    BoundInputs,
    BoundParams,
    BoundReport,
    GeneratorSpectrum,
    bandlimited_bound,
    bound1,
    bound2,
    bound_report,
    conventional_limits,
    crossover,
    default_params,
    frequency_bound,
    pi_corrected_hl,
    r_epsilon,
    r_epsilon_numeric,
    well_ground_state,
)
from .estimation import (
    CostMatrix,
    MeasurementReport,
    ProbeState,
    cost_matrix,
    covariant_mse,
    noon_state,
    optimal_probe,
    sample_outcome,
    scaling_sweep,
    sine_state,
    two_level_embedding,
)
from .numerics import QuadratureError, QuadratureSpec, integrate_adaptive
from .priors import (
    CombPrior,
    KaiserPrior,
    RectPrior,
    SmearedRectPrior,
    comb_from_samples,
    kaiser_density,
    kaiser_normalization,
    kaiser_normalization_series,
    smeared_density,
)

__version__ = "0.1.0"
