import numpy as np

from pathreg.paths import Grid
from pathreg.report.json_io import pretty_json

from ._TrigBasis import TrigBasis


class FejerOperator:
    """The Fejer operator ``T_n`` on paths over ``[-T, 0]``

    .. code-block:: text

        T_n eta = sum_{i=0}^n (n + 1 - i) / (n + 1) x_i e_i + x_{-1} x

    where ``x_i = eta_i - (Lambda eta)_i`` are the trigonometric coefficients
    of ``eta - Lambda eta`` and ``x_{-1} = (eta(0) - eta(-T)) / T`` is the
    slope of the linear correction ``Lambda eta``.

    .. rubric:: Constructor

    Parameters
    ----------
    n: int
        Order, ``n >= 0``.
    T: float = 1.0
        Horizon.
    """

    def __init__(self, n: int, T: float = 1.0):
        if int(n) != n or n < 0:
            raise ValueError(f"Error in FejerOperator: n={n} < 0")
        self.n = int(n)
        """int: Order"""

        self.basis = TrigBasis(T)
        """TrigBasis: The functions ``e_0, ..., e_n``"""

        self._matrix_cache = {}

    @property
    def T(self) -> float:
        return self.basis.T

    @property
    def n_coordinates(self) -> int:
        """Number of coordinates ``x_{-1}, x_0, ..., x_n``"""
        return self.n + 2

    @property
    def weights(self) -> np.ndarray:
        """Cesaro weights ``(n + 1 - i) / (n + 1)``, ``i = 0, ..., n``"""
        i = np.arange(self.n + 1)
        return (self.n + 1 - i) / (self.n + 1)

    def matrix(self, grid: Grid) -> np.ndarray:
        """Linear map from ``(x_{-1}, x_0, ..., x_n)`` to the values of
        ``T_n eta`` on `grid`, shape ``(n + 2, grid.n_points)``, cached"""
        if grid not in self._matrix_cache:
            x = grid.points
            R = np.empty((self.n_coordinates, grid.n_points))
            R[0] = x
            R[1:] = self.weights[:, None] * self.basis.values(self.n, x)
            R.flags.writeable = False
            self._matrix_cache[grid] = R
        return self._matrix_cache[grid]

    def reconstruct(self, coordinates: np.ndarray, grid: Grid) -> np.ndarray:
        """Values of ``T_n eta`` on `grid` from coordinates of shape
        ``(..., n + 2)``"""
        return np.asarray(coordinates, dtype=float) @ self.matrix(grid)

    @staticmethod
    def from_dict(data: dict):
        return FejerOperator(n=data["n"], T=data.get("T", 1.0))

    def to_dict(self):
        return {"n": self.n, "T": self.T}

    def __repr__(self):
        return pretty_json(self.to_dict())
