"""Classical and Monte Carlo solutions of the path-dependent heat equation,
and the lookback example"""

from ._GaussianCylModel import GaussianCylModel
from ._lookback import (
    DISCRETE_MAX_SHIFT,
    hedging_check,
    local_time_check,
    lookback_derivatives,
    lookback_f,
    lookback_martingale_check,
    lookback_partials,
    lookback_pde_check,
    lookback_U,
    lookback_value,
    lookback_value_mc,
    reflection_check,
    running_max,
)
from ._LookbackState import LookbackState
from ._methods import (
    classical_solution,
    coordinate_samples,
    heat_residual,
    mc_cylindrical_price,
    mc_price,
    psi_derivatives,
    psi_eval,
    solution_functional,
)
from ._QuadratureRule import QUADRATURE_KINDS, QuadratureRule
