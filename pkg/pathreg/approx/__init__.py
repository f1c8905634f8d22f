"""Fejer approximation of path functionals and the strong-viscosity
approximation pipeline"""

from ._FejerOperator import FejerOperator
from ._FourierCoefficients import FourierCoefficients
from ._methods import (
    coordinate_matrix,
    endpoint_convergence,
    endpoint_functional,
    fejer_apply,
    fejer_checks,
    fejer_damping,
    fejer_exactness,
    fejer_linearity,
    fejer_sup_error,
    fejer_uniform_bound,
    fourier_coeffs,
    lambda_op,
)
from ._Mollifier import Mollifier
from ._pipeline import (
    SmoothedFejerFunctional,
    build_Gnek,
    diagonal_schedule,
    sv_convergence,
    sv_value,
)
from ._smoothing import axis_nodes, gaussian_smoothed
from ._TrigBasis import TrigBasis
