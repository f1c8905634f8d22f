from typing import Optional, Union

import numpy as np

from pathreg.report.json_io import pretty_json

from ._Grid import Grid


class SampledPath:
    """A real function on a uniform grid, with an optional present value

    Values are linearly interpolated between grid points. Left of the grid
    the path is constant equal to its first value; at and right of the last
    grid point it equals its present value.

    When `present` is given and differs from the last grid value, the path
    has a jump at its right end: ``values`` hold the past, including the
    left limit at the right end, and `present` holds the value at the right
    end itself.

    .. rubric:: Constructor

    Parameters
    ----------
    grid: Grid
        The sampling grid.
    values: array_like
        Values at the grid points, shape ``(grid.n_points,)``.
    present: Optional[float] = None
        Value at the right end, if different from ``values[-1]``.
    """

    def __init__(
        self,
        grid: Grid,
        values: Union[np.ndarray, list[float]],
        present: Optional[float] = None,
    ):
        values = np.array(values, dtype=float)
        if values.shape != (grid.n_points,):
            raise ValueError(
                f"Error in SampledPath: values.shape={values.shape} does not "
                f"match grid.n_points={grid.n_points}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("Error in SampledPath: values must be finite")
        if present is not None:
            present = float(present)
            if not np.isfinite(present):
                raise ValueError("Error in SampledPath: present must be finite")
        values.flags.writeable = False

        self.grid = grid
        """Grid: The sampling grid"""

        self.values = values
        """numpy.ndarray: Read-only values at the grid points"""

        self.present = present
        """Optional[float]: Value at the right end, if stored separately"""

    @property
    def present_value(self) -> float:
        """float: The value at the right end (`present`, or ``values[-1]``)"""
        if self.present is None:
            return float(self.values[-1])
        return self.present

    @property
    def has_jump(self) -> bool:
        """bool: True if the present value differs from the left limit"""
        return self.present is not None and self.present != self.values[-1]

    def past_at(self, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """Interpolated past values, constant outside the grid

        Unlike :func:`value_at`, the right end returns the left limit
        ``values[-1]`` rather than the present value.
        """
        return np.interp(x, self.grid.points, self.values)

    def sup_norm(self) -> float:
        """float: Maximum of ``|values|`` and ``|present_value|``"""
        return float(max(np.max(np.abs(self.values)), abs(self.present_value)))

    def distance(self, other) -> float:
        """Sup-norm distance to another path on the same grid"""
        if other.grid != self.grid:
            raise ValueError("Error in SampledPath.distance: grid mismatch")
        return float(
            max(
                np.max(np.abs(self.values - other.values)),
                abs(self.present_value - other.present_value),
            )
        )

    def with_values(self, values: np.ndarray, present: Optional[float] = None):
        """Return a path on the same grid with new values"""
        return SampledPath(grid=self.grid, values=values, present=present)

    def __eq__(self, other):
        if not isinstance(other, SampledPath):
            return NotImplemented
        return (
            self.grid == other.grid
            and np.array_equal(self.values, other.values)
            and self.present_value == other.present_value
        )

    __hash__ = None

    @staticmethod
    def from_dict(data: dict):
        return SampledPath(
            grid=Grid.from_dict(data["grid"]),
            values=data["values"],
            present=data.get("present"),
        )

    def to_dict(self):
        data = {
            "grid": self.grid.to_dict(),
            "values": self.values.tolist(),
        }
        if self.present is not None:
            data["present"] = self.present
        return data

    def __repr__(self):
        return pretty_json(self.to_dict())
