from typing import Union

import numpy as np


class Trajectory:
    """A sampled process on a time interval, linearly interpolated

    Before its first time the trajectory equals its first value, after its
    last time it equals its last value.

    .. rubric:: Constructor

    Parameters
    ----------
    times: array_like
        Strictly increasing times, shape ``(n,)``.
    values: array_like
        Values at `times`, shape ``(n,)``.
    """

    def __init__(
        self,
        times: Union[np.ndarray, list[float]],
        values: Union[np.ndarray, list[float]],
    ):
        times = np.array(times, dtype=float)
        values = np.array(values, dtype=float)
        if times.ndim != 1 or times.size == 0:
            raise ValueError("Error in Trajectory: empty trajectory")
        if values.shape != times.shape:
            raise ValueError(
                "Error in Trajectory: times and values have different lengths"
            )
        if times.size > 1 and not np.all(np.diff(times) > 0.0):
            raise ValueError("Error in Trajectory: times must be strictly increasing")
        times.flags.writeable = False
        values.flags.writeable = False

        self.times = times
        """numpy.ndarray: Strictly increasing sample times"""

        self.values = values
        """numpy.ndarray: Values at `times`"""

    @property
    def t_start(self) -> float:
        return float(self.times[0])

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def __call__(self, s: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """Interpolated value(s), constant outside ``[times[0], times[-1]]``"""
        return np.interp(s, self.times, self.values)

    def __len__(self):
        return self.times.size
