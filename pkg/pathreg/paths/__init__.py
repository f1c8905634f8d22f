"""Paths on an interval, extension conventions and window extraction"""

from ._fixtures import PATH_GENERATORS, make_path, read_path_csv
from ._Grid import Grid
from ._methods import (
    join,
    restrict,
    shift_future,
    shift_past,
    split,
    value_at,
    values_at,
    window_at,
)
from ._SampledPath import SampledPath
from ._Trajectory import Trajectory
