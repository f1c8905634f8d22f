import numpy as np

from pathreg.report.json_io import pretty_json


class LimitEstimate:
    """Extrapolated limit of a sequence of approximants

    .. rubric:: Constructor

    Parameters
    ----------
    value: float
        Extrapolated limit.
    raw: list[tuple[float, float]]
        The ``(eps, approximant)`` pairs, in schedule order.
    convergence_rate: float
        Observed order from the three finest levels (NaN if unavailable).
    converged: bool
        True if the two finest approximants differ by at most `tolerance`.
    tolerance: float
        Convergence tolerance.
    """

    def __init__(
        self,
        value: float,
        raw: list[tuple[float, float]],
        convergence_rate: float,
        converged: bool,
        tolerance: float,
    ):
        if len(raw) == 0:
            raise ValueError("Error in LimitEstimate: raw is empty")
        self.value = float(value)
        """float: Extrapolated limit"""

        self.raw = [(float(e), float(a)) for e, a in raw]
        """list[tuple[float, float]]: The ``(eps, approximant)`` pairs"""

        self.convergence_rate = float(convergence_rate)
        """float: Observed order of convergence, or NaN"""

        self.converged = bool(converged)
        """bool: True if the two finest approximants agree within `tolerance`"""

        self.tolerance = float(tolerance)
        """float: Convergence tolerance"""

    @property
    def eps(self) -> np.ndarray:
        return np.array([e for e, _ in self.raw])

    @property
    def approximants(self) -> np.ndarray:
        return np.array([a for _, a in self.raw])

    @property
    def finest(self) -> float:
        """float: The approximant at the smallest eps"""
        return self.raw[-1][1]

    def __float__(self):
        return self.value

    def to_dict(self):
        return {
            "value": self.value,
            "raw": [list(x) for x in self.raw],
            "convergence_rate": self.convergence_rate,
            "converged": self.converged,
            "tolerance": self.tolerance,
        }

    def __repr__(self):
        return pretty_json(self.to_dict())


