import numpy as np

from pathreg.report.json_io import pretty_json


class Grid:
    """Uniform grid on an interval

    .. rubric:: Constructor

    Parameters
    ----------
    t_min: float
        Left end, for example ``-T`` for paths on ``[-T, 0]``.
    t_max: float
        Right end.
    n_points: int
        Number of grid points, including both ends. Must be at least 2.
    """

    def __init__(self, t_min: float, t_max: float, n_points: int):
        t_min = float(t_min)
        t_max = float(t_max)
        if not (np.isfinite(t_min) and np.isfinite(t_max)):
            raise ValueError("Error in Grid: interval ends must be finite")
        if not t_min < t_max:
            raise ValueError(f"Error in Grid: t_min={t_min} >= t_max={t_max}")
        if int(n_points) != n_points or n_points < 2:
            raise ValueError(f"Error in Grid: n_points={n_points} < 2")

        self.t_min = t_min
        """float: Left end of the interval"""

        self.t_max = t_max
        """float: Right end of the interval"""

        self.n_points = int(n_points)
        """int: Number of grid points"""

        self._points = np.linspace(t_min, t_max, self.n_points)
        self._points.flags.writeable = False

    @staticmethod
    def window(T: float, n_points: int):
        """Grid on ``[-T, 0]``"""
        return Grid(t_min=-T, t_max=0.0, n_points=n_points)

    @property
    def spacing(self) -> float:
        """float: Grid spacing ``(t_max - t_min) / (n_points - 1)``"""
        return (self.t_max - self.t_min) / (self.n_points - 1)

    @property
    def length(self) -> float:
        """float: Interval length"""
        return self.t_max - self.t_min

    @property
    def points(self) -> np.ndarray:
        """numpy.ndarray: Read-only grid points, shape ``(n_points,)``"""
        return self._points

    def refined(self, factor: int):
        """Return the grid with each cell split into `factor` cells"""
        if int(factor) != factor or factor < 1:
            raise ValueError(f"Error in Grid.refined: factor={factor} < 1")
        return Grid(self.t_min, self.t_max, (self.n_points - 1) * int(factor) + 1)

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return (
            self.t_min == other.t_min
            and self.t_max == other.t_max
            and self.n_points == other.n_points
        )

    def __hash__(self):
        return hash((self.t_min, self.t_max, self.n_points))

    @staticmethod
    def from_dict(data: dict):
        return Grid(
            t_min=data["t_min"], t_max=data["t_max"], n_points=data["n_points"]
        )

    def to_dict(self):
        return {
            "t_min": self.t_min,
            "t_max": self.t_max,
            "n_points": self.n_points,
        }

    def __repr__(self):
        return pretty_json(self.to_dict())
