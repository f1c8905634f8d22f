"""Horizontal and vertical derivatives of path functionals"""

from ._BasisFunction import BASIS_TYPES, BasisFunction
from ._coordinates import window_weights
from ._CylindricalFunctional import CylindricalFunctional
from ._DerivativeResult import DerivativeResult, exact_estimate
from ._methods import (
    default_h_schedule,
    derivatives,
    eval_cyl,
    frechet_rep_check,
    horizontal_derivative,
    time_derivative,
    vertical_derivatives,
)
from ._OuterFunction import OUTER_TYPES, OuterFunction
from ._PathFunctional import DifferentiablePathFunctional, PathFunctional
from ._registry import (
    FUNCTIONAL_LABELS,
    integral_functional,
    make_functional,
    present_functional,
    present_squared_functional,
    sup_functional,
)
