"""Regularization integrals, covariations and integration by parts"""

from ._AtomicMeasure import AtomicMeasure
from ._convergence import estimate_limit, is_decreasing_trend
from ._EpsilonSchedule import EpsilonSchedule
from ._LimitEstimate import LimitEstimate
from ._methods import (
    backward_approximant,
    backward_integral,
    backward_integral_measure,
    backward_measure_approximant,
    covariation,
    covariation_approximant,
    forward_approximant,
    forward_integral,
    ibp_check,
    quadratic_variation,
    stieltjes_integral,
)
from ._quadrature import breakpoints, extended, integrate_piecewise
