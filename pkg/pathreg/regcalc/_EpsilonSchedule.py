from typing import Optional, Union

import numpy as np

from pathreg.report.json_io import pretty_json


class EpsilonSchedule:
    """Decreasing sequence of regularization parameters

    .. rubric:: Constructor

    Parameters
    ----------
    eps_values: Optional[array_like] = None
        Strictly decreasing positive values. If None, the default geometric
        schedule ``2**-2, 2**-3, ..., 2**-9`` is used.
    grid_refine: bool = False
        If False, the smallest value must be at least twice the spacing of
        the sampling grid it is used with (see :func:`validate`). If True,
        values below the grid spacing are allowed: the approximants are
        computed on the piecewise-linear interpolant, which is the refined
        path.
    """

    def __init__(
        self,
        eps_values: Optional[Union[np.ndarray, list[float]]] = None,
        grid_refine: bool = False,
    ):
        if eps_values is None:
            eps_values = 2.0 ** -np.arange(2, 10)
        eps_values = np.array(eps_values, dtype=float)
        if eps_values.ndim != 1 or eps_values.size == 0:
            raise ValueError("Error in EpsilonSchedule: empty schedule")
        if not np.all(eps_values > 0.0):
            raise ValueError("Error in EpsilonSchedule: values must be positive")
        if not np.all(np.diff(eps_values) < 0.0):
            raise ValueError(
                "Error in EpsilonSchedule: values must be strictly decreasing"
            )
        eps_values.flags.writeable = False

        self.eps_values = eps_values
        """numpy.ndarray: Strictly decreasing positive values"""

        self.grid_refine = bool(grid_refine)
        """bool: Allow values below twice the grid spacing"""

    @staticmethod
    def geometric(
        eps_max: float = 0.25,
        n_levels: int = 8,
        ratio: float = 0.5,
        grid_refine: bool = False,
    ):
        """Geometric schedule ``eps_max * ratio**k``, ``k = 0, ..., n_levels-1``"""
        if not 0.0 < ratio < 1.0:
            raise ValueError(f"Error in EpsilonSchedule.geometric: ratio={ratio}")
        return EpsilonSchedule(
            eps_values=eps_max * ratio ** np.arange(n_levels),
            grid_refine=grid_refine,
        )

    @property
    def eps_min(self) -> float:
        return float(self.eps_values[-1])

    def validate(self, spacing: float, caller: str = "EpsilonSchedule.validate"):
        """Check the smallest value against a grid spacing"""
        if not self.grid_refine and self.eps_min < 2.0 * spacing * (1.0 - 1e-9):
            raise ValueError(
                f"Error in {caller}: smallest eps={self.eps_min:g} is below "
                f"twice the grid spacing {spacing:g}; refine the grid or set "
                f"grid_refine=True"
            )

    def __len__(self):
        return self.eps_values.size

    @staticmethod
    def from_dict(data: dict):
        if "eps_values" in data:
            return EpsilonSchedule(
                eps_values=data["eps_values"],
                grid_refine=data.get("grid_refine", False),
            )
        return EpsilonSchedule.geometric(
            eps_max=data.get("eps_max", 0.25),
            n_levels=data.get("n_levels", 8),
            ratio=data.get("ratio", 0.5),
            grid_refine=data.get("grid_refine", False),
        )

    def to_dict(self):
        return {
            "eps_values": self.eps_values.tolist(),
            "grid_refine": self.grid_refine,
        }

    def __repr__(self):
        return pretty_json(self.to_dict())
