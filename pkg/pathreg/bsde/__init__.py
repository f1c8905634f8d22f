"""Forward SDEs with mollified coefficients and regression BSDE solvers"""

from ._BSDEProblem import BSDE_FLAVORS, BSDEProblem
from ._BSDESolution import BSDESolution
from ._EulerSample import EulerSample
from ._methods import (
    apriori_check,
    apriori_stability,
    bsde_solve,
    bsde_value,
    comparison_check,
    limit_diagnostic,
    moment_bound,
    sde_convergence,
    sde_euler,
)
from ._mollify import KERNEL_GL_ORDER, kernel_rule, mollify_coeffs, smooth_map
from ._regression import exponents, polynomial_features, regress
from ._scenarios import (
    DEFAULT_PARAMS,
    GENERATORS,
    SDE_SCENARIOS,
    TERMINALS,
    make_generator,
    make_problem,
    make_sde,
    make_terminal,
)
from ._SDECoeffs import SDECoeffs
