import numpy as np

from pathreg.report.json_io import pretty_json


class FourierCoefficients:
    """Coordinates of a path for the Fejer operator, computed twice

    .. rubric:: Constructor

    Parameters
    ----------
    stieltjes: numpy.ndarray
        ``x_i = eta_i - (Lambda eta)_i``, ``i = 0, ..., n``, with ``eta_i``
        from the forward-integral form
        ``int_[-T,0] (e~_i(0) - e~_i(x)) d-eta(x)``.
    l2: numpy.ndarray
        The same, with ``eta_i = int eta e_i dx`` by direct quadrature.
    x_minus1: float
        Slope ``(eta(0) - eta(-T)) / T`` of the linear correction.
    left_value: float
        The value used for ``eta(-T)``: the left grid value, or the
        mollified endpoint.
    """

    def __init__(
        self,
        stieltjes: np.ndarray,
        l2: np.ndarray,
        x_minus1: float,
        left_value: float,
    ):
        self.stieltjes = np.asarray(stieltjes, dtype=float)
        """numpy.ndarray: Coefficients from the forward-integral form"""

        self.l2 = np.asarray(l2, dtype=float)
        """numpy.ndarray: Coefficients from direct quadrature"""

        self.x_minus1 = float(x_minus1)
        """float: Slope of the linear correction"""

        self.left_value = float(left_value)
        """float: Value used for ``eta(-T)``"""

    @property
    def n(self) -> int:
        return self.stieltjes.size - 1

    @property
    def coordinates(self) -> np.ndarray:
        """``(x_{-1}, x_0, ..., x_n)``, with the forward-integral form"""
        return np.concatenate([[self.x_minus1], self.stieltjes])

    @property
    def mismatch(self) -> float:
        """``max |stieltjes - l2|``"""
        return float(np.max(np.abs(self.stieltjes - self.l2)))

    def to_dict(self):
        return {
            "stieltjes": self.stieltjes.tolist(),
            "l2": self.l2.tolist(),
            "x_minus1": self.x_minus1,
            "left_value": self.left_value,
        }

    def __repr__(self):
        return pretty_json(self.to_dict())
