import copy
from typing import Callable, Optional, Union

import numpy as np

from pathreg.report.json_io import pretty_json

from ._SDECoeffs import SDECoeffs

BSDE_FLAVORS = ["exact", "super", "sub"]


class BSDEProblem:
    """Forward-backward problem

    .. code-block:: text

        Y_s = g(X_T) + int_s^T f(r, X_r, Y_r, Z_r) dr
              +/- (K_T - K_s) - int_s^T Z_r dW_r

    with ``X`` the solution of the SDE with coefficients `coeffs`, started at
    ``(t0, x0)``. The ``+`` sign (nondecreasing ``K``) is the ``"super"``
    flavor, ``-`` the ``"sub"`` flavor, and ``K = 0`` the ``"exact"`` flavor.

    .. rubric:: Constructor

    Parameters
    ----------
    coeffs: SDECoeffs
        Forward coefficients.
    generator: Callable
        ``f(t, x, y, z)`` with ``x`` of shape ``(n, d)``, ``y`` of shape
        ``(n,)``, ``z`` of shape ``(n, d)``; returns shape ``(n,)``.
    terminal: Callable
        ``g(x)``, shape ``(n, d)`` to ``(n,)``.
    generator_lipschitz: float
        Certificate: Lipschitz constant of `generator` in ``(y, z)``.
    growth_bound: tuple[float, float]
        Certificate ``(C, m)``: ``|g(x)| <= C (1 + |x|**m)``.
    k_rate: Optional[Callable] = None
        Scenario-supplied rate of ``K``: ``dK = k_rate(t, x) dt`` with
        ``k_rate >= 0``. None means ``K = 0`` for every flavor.
    t0: float = 0.0
        Start time.
    x0: Union[float, list[float], None] = None
        Start state. Defaults to the origin.
    label: str = "bsde"
        Name used in reports.
    data: Optional[dict] = None
        Parameters describing the problem, for :func:`to_dict`.
    """

    def __init__(
        self,
        coeffs: SDECoeffs,
        generator: Callable,
        terminal: Callable,
        generator_lipschitz: float,
        growth_bound: tuple[float, float],
        k_rate: Optional[Callable] = None,
        t0: float = 0.0,
        x0: Union[float, list[float], None] = None,
        label: str = "bsde",
        data: Optional[dict] = None,
    ):
        if not (np.isfinite(generator_lipschitz) and generator_lipschitz >= 0.0):
            raise ValueError(
                f"Error in BSDEProblem: generator_lipschitz={generator_lipschitz}"
            )
        if len(growth_bound) != 2 or not np.all(np.isfinite(growth_bound)):
            raise ValueError(f"Error in BSDEProblem: growth_bound={growth_bound}")
        self.coeffs = coeffs
        """SDECoeffs: Forward coefficients"""

        self.generator = generator
        """Callable: ``f(t, x, y, z)``"""

        self.terminal = terminal
        """Callable: ``g(x)``"""

        self.generator_lipschitz = float(generator_lipschitz)
        """float: Lipschitz certificate of the generator in ``(y, z)``"""

        self.growth_bound = (float(growth_bound[0]), float(growth_bound[1]))
        """tuple[float, float]: Polynomial growth certificate of the terminal"""

        self.k_rate = k_rate
        """Optional[Callable]: Rate of the scenario-supplied ``K``"""

        self.t0 = float(t0)
        """float: Start time"""

        if x0 is None:
            x0 = np.zeros(coeffs.d)
        self.x0 = np.atleast_1d(np.asarray(x0, dtype=float))
        """numpy.ndarray: Start state, shape ``(d,)``"""
        if self.x0.shape != (coeffs.d,):
            raise ValueError(
                f"Error in BSDEProblem: x0 has shape {self.x0.shape}, "
                f"expected ({coeffs.d},)"
            )

        self.label = label
        """str: Name used in reports"""

        self.data = data if data is not None else {"label": label}
        """dict: Parameters for :func:`to_dict`"""

    @property
    def d(self) -> int:
        return self.coeffs.d

    def replace(self, **kwargs):
        """Copy with attributes replaced, e.g. ``p.replace(x0=[0.5])``"""
        other = copy.copy(self)
        for key, value in kwargs.items():
            if not hasattr(other, key):
                raise ValueError(f"Error in BSDEProblem.replace: unknown '{key}'")
            setattr(other, key, value)
        other.x0 = np.atleast_1d(np.asarray(other.x0, dtype=float))
        other.t0 = float(other.t0)
        return other

    def to_dict(self):
        return {
            "label": self.label,
            "coeffs": self.coeffs.to_dict(),
            "generator_lipschitz": self.generator_lipschitz,
            "growth_bound": list(self.growth_bound),
            "t0": self.t0,
            "x0": self.x0.tolist(),
            "data": self.data,
        }

    def __repr__(self):
        return pretty_json(self.to_dict())
