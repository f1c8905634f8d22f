from typing import Union

import numpy as np
from scipy.integrate import quad

from pathreg.report.json_io import pretty_json

#: Composite Gauss-Legendre rule on the support: panels and order per panel
MOLLIFIER_PANELS = 16
MOLLIFIER_GL_ORDER = 16


def _bump(y: np.ndarray) -> np.ndarray:
    """``exp(1 / (y**2 - 1))`` on ``[0, 1)``, 0 elsewhere"""
    y = np.asarray(y, dtype=float)
    inside = (y >= 0.0) & (y < 1.0)
    safe = np.where(inside, y, 0.0)
    return np.where(inside, np.exp(1.0 / (safe * safe - 1.0)), 0.0)


def _bump_derivative(y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    inside = (y >= 0.0) & (y < 1.0)
    safe = np.where(inside, y, 0.0)
    d = safe * safe - 1.0
    return np.where(inside, _bump(safe) * (-2.0 * safe / (d * d)), 0.0)


_BUMP_MASS, _ = quad(lambda y: float(_bump(y)), 0.0, 1.0, epsabs=1e-15, epsrel=1e-13)


class Mollifier:
    """One-sided smooth bump of unit mass at the left end of ``[-T, 0]``

    With ``y = (x + T) / eps``:

    .. code-block:: text

        phi_eps(x) = c exp(1 / (y**2 - 1)) / eps,   0 <= y < 1

    and 0 elsewhere, where ``c`` makes ``int_{-T}^0 phi_eps = 1``. The
    support is ``[-T, -T + eps)``, so ``int eta phi_eps -> eta(-T)``.

    .. rubric:: Constructor

    Parameters
    ----------
    eps: float
        Width, ``0 < eps <= T``.
    T: float = 1.0
        Horizon.
    """

    def __init__(self, eps: float, T: float = 1.0):
        if not T > 0.0:
            raise ValueError(f"Error in Mollifier: T={T} <= 0")
        if not (0.0 < eps <= T):
            raise ValueError(f"Error in Mollifier: eps={eps} outside (0, T={T}]")
        self.eps = float(eps)
        """float: Width of the support"""

        self.T = float(T)
        """float: Horizon"""

        self.c = 1.0 / _BUMP_MASS
        """float: Normalization constant"""

    def _y(self, x):
        return (np.asarray(x, dtype=float) + self.T) / self.eps

    def value(self, x: Union[float, np.ndarray]) -> np.ndarray:
        """``phi_eps(x)``"""
        return self.c * _bump(self._y(x)) / self.eps

    def derivative(self, x: Union[float, np.ndarray]) -> np.ndarray:
        """``phi_eps'(x)``"""
        return self.c * _bump_derivative(self._y(x)) / self.eps**2

    def antiderivative(self, x: Union[float, np.ndarray]) -> np.ndarray:
        """``int_{-T}^x phi_eps(y) dy``"""
        u = np.asarray(np.clip(self._y(x), 0.0, 1.0))
        xg, wg = np.polynomial.legendre.leggauss(MOLLIFIER_GL_ORDER)
        k = np.arange(MOLLIFIER_PANELS)
        # panel k covers [k u / P, (k + 1) u / P]
        s = (k[:, None] + 0.5 * (xg[None, :] + 1.0)).ravel() / MOLLIFIER_PANELS
        w = np.tile(wg, MOLLIFIER_PANELS) / (2.0 * MOLLIFIER_PANELS)
        y = u[..., None] * s
        return self.c * u * np.sum(_bump(y) * w, axis=-1)

    def center(self) -> float:
        """``int (x + T) phi_eps(x) dx``, the endpoint bias per unit slope"""
        value, _ = quad(
            lambda y: y * float(_bump(y)), 0.0, 1.0, epsabs=1e-15, epsrel=1e-13
        )
        return self.c * self.eps * value

    def mass(self) -> float:
        """``int_{-T}^0 phi_eps``, by adaptive quadrature"""
        value, _ = quad(
            lambda x: float(self.value(x)),
            -self.T,
            -self.T + self.eps,
            epsabs=1e-14,
            epsrel=1e-12,
        )
        return value

    @staticmethod
    def from_dict(data: dict):
        return Mollifier(eps=data["eps"], T=data.get("T", 1.0))

    def to_dict(self):
        return {"eps": self.eps, "T": self.T}

    def __repr__(self):
        return pretty_json(self.to_dict())

