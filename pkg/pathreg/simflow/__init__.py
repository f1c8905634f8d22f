"""Brownian simulation, the stochastic flow and a functional Ito verifier"""

from ._FlowSample import FlowSample
from ._ItoResidual import ItoResidual
from ._methods import (
    flow_window,
    flow_windows,
    ito_verify,
    martingale_check,
    sample_flow,
    simulate_bm,
)
from ._random import (
    brownian_paths,
    gaussian_increments,
    map_blocks,
    path_rng,
    split_blocks,
)
from ._SimConfig import SCHEMES, SimConfig
