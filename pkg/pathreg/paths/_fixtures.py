import pathlib
from typing import Optional

import numpy as np

from pathreg.report.json_io import printpathstr

from ._Grid import Grid
from ._SampledPath import SampledPath

PATH_GENERATORS = ["constant", "linear", "quadratic", "sine", "brownian", "csv"]


def read_path_csv(path: pathlib.Path, present: Optional[float] = None):
    """Read a path from a two-column CSV file (x, value)

    The x column must be a uniform grid. A header line is allowed.
    """
    path = pathlib.Path(path)
    if not path.exists():
        raise FileNotFoundError(
            "Required file: '" + printpathstr(path) + "' does not exist"
        )
    with open(path, "r") as f:
        first = f.readline()
    skiprows = 0
    try:
        [float(x) for x in first.strip().split(",")]
    except ValueError:
        skiprows = 1
    data = np.loadtxt(path, delimiter=",", skiprows=skiprows, ndmin=2)
    if data.shape[1] != 2:
        raise ValueError(
            f"Error in read_path_csv: expected 2 columns in {printpathstr(path)}"
        )
    x = data[:, 0]
    grid = Grid(x[0], x[-1], x.size)
    if not np.allclose(x, grid.points, atol=1e-9 * max(1.0, grid.length)):
        raise ValueError(
            f"Error in read_path_csv: x column is not uniform in {printpathstr(path)}"
        )
    return SampledPath(grid=grid, values=data[:, 1], present=present)


def make_path(
    name: str,
    grid: Grid,
    value: float = 1.0,
    offset: float = 0.0,
    slope: float = 1.0,
    amplitude: float = 1.0,
    frequency: float = 1.0,
    seed: int = 0,
    present: Optional[float] = None,
    path: Optional[pathlib.Path] = None,
) -> SampledPath:
    """Make a named path fixture

    Parameters
    ----------
    name: str
        One of:

        - ``"constant"``: ``value``
        - ``"linear"``: ``offset + slope * x``
        - ``"quadratic"``: ``amplitude * x**2``
        - ``"sine"``: ``amplitude * sin(2 pi frequency x / L)``, L the
          interval length
        - ``"brownian"``: a Brownian sample started at 0 at the left end
        - ``"csv"``: read from `path`

    grid: Grid
        The sampling grid (ignored for ``"csv"``).
    present: Optional[float] = None
        Optional present value.

    Returns
    -------
    path: SampledPath
        The fixture.
    """
    x = grid.points
    if name == "constant":
        values = np.full(x.shape, float(value))
    elif name == "linear":
        values = offset + slope * x
    elif name == "quadratic":
        values = amplitude * x**2
    elif name == "sine":
        values = amplitude * np.sin(2.0 * np.pi * frequency * x / grid.length)
    elif name == "brownian":
        rng = np.random.default_rng(seed)
        increments = rng.standard_normal(grid.n_points - 1) * np.sqrt(grid.spacing)
        values = np.concatenate([[0.0], np.cumsum(increments)])
    elif name == "csv":
        if path is None:
            raise ValueError("Error in make_path: 'csv' requires a file path")
        return read_path_csv(path, present=present)
    else:
        raise ValueError(
            f"Error in make_path: unknown path generator '{name}'; "
            f"expected one of {PATH_GENERATORS}"
        )
    return SampledPath(grid=grid, values=values, present=present)
