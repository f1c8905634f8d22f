import math
from typing import Union

import numpy as np

from pathreg.report.json_io import pretty_json


class TrigBasis:
    """Orthonormal trigonometric basis of ``L^2([-T, 0])``

    With ``u = x + T``:

    .. code-block:: text

        e_0(x)      = 1 / sqrt(T)
        e_{2j-1}(x) = sqrt(2 / T) sin(2 pi j u / T)
        e_{2j}(x)   = sqrt(2 / T) cos(2 pi j u / T),   j >= 1

    All functions are periodic with period ``T``.

    .. rubric:: Constructor

    Parameters
    ----------
    T: float = 1.0
        Horizon.
    """

    def __init__(self, T: float = 1.0):
        if not T > 0.0:
            raise ValueError(f"Error in TrigBasis: T={T} <= 0")
        self.T = float(T)
        """float: Horizon"""

    @staticmethod
    def frequency(i: int) -> int:
        """Frequency ``j`` of basis function `i`"""
        if i < 0:
            raise ValueError(f"Error in TrigBasis.frequency: i={i} < 0")
        return (i + 1) // 2

    def _angle(self, i: int, x):
        u = np.asarray(x, dtype=float) + self.T
        return 2.0 * math.pi * self.frequency(i) * u / self.T

    def value(self, i: int, x: Union[float, np.ndarray]) -> np.ndarray:
        """``e_i(x)``"""
        x = np.asarray(x, dtype=float)
        if i == 0:
            return np.full(x.shape, 1.0 / math.sqrt(self.T))
        amp = math.sqrt(2.0 / self.T)
        if i % 2 == 1:
            return amp * np.sin(self._angle(i, x))
        return amp * np.cos(self._angle(i, x))

    def derivative(self, i: int, x: Union[float, np.ndarray]) -> np.ndarray:
        """``e_i'(x)``"""
        x = np.asarray(x, dtype=float)
        if i == 0:
            return np.zeros(x.shape)
        w = 2.0 * math.pi * self.frequency(i) / self.T
        amp = math.sqrt(2.0 / self.T) * w
        if i % 2 == 1:
            return amp * np.cos(self._angle(i, x))
        return -amp * np.sin(self._angle(i, x))

    def antiderivative(self, i: int, x: Union[float, np.ndarray]) -> np.ndarray:
        """``int_{-T}^x e_i(y) dy``"""
        x = np.asarray(x, dtype=float)
        if i == 0:
            return (x + self.T) / math.sqrt(self.T)
        w = 2.0 * math.pi * self.frequency(i) / self.T
        amp = math.sqrt(2.0 / self.T) / w
        if i % 2 == 1:
            return amp * (1.0 - np.cos(self._angle(i, x)))
        return amp * np.sin(self._angle(i, x))

    def moment(self, i: int) -> float:
        """``int_{-T}^0 x e_i(x) dx``"""
        T = self.T
        if i == 0:
            return -0.5 * T * math.sqrt(T)
        if i % 2 == 1:
            return -math.sqrt(2.0 / T) * T * T / (2.0 * math.pi * self.frequency(i))
        return 0.0

    def values(self, n: int, x: np.ndarray) -> np.ndarray:
        """Values of ``e_0, ..., e_n`` at `x`, shape ``(n + 1, len(x))``"""
        x = np.asarray(x, dtype=float)
        return np.array([self.value(i, x) for i in range(n + 1)])

    def gram(self, n: int, order: int = 64) -> np.ndarray:
        """Gram matrix of ``e_0, ..., e_n`` by Gauss-Legendre quadrature"""
        xg, wg = np.polynomial.legendre.leggauss(max(order, 5 * n + 32))
        x = 0.5 * self.T * (xg - 1.0)
        E = self.values(n, x)
        return (E * (0.5 * self.T * wg)[None, :]) @ E.T

    def orthonormality_error(self, n: int) -> float:
        """``max |gram - I|`` for ``e_0, ..., e_n``"""
        return float(np.max(np.abs(self.gram(n) - np.eye(n + 1))))

    @staticmethod
    def from_dict(data: dict):
        return TrigBasis(T=data.get("T", 1.0))

    def to_dict(self):
        return {"T": self.T}

    def __repr__(self):
        return pretty_json(self.to_dict())
