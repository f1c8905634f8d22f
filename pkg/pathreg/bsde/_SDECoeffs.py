from typing import Callable, Optional

import numpy as np

from pathreg.report.json_io import pretty_json


class SDECoeffs:
    """Coefficients of ``dX_s = b(s, X_s) ds + sigma(s, X_s) dW_s`` in
    ``R^d``

    .. rubric:: Constructor

    Parameters
    ----------
    b: Callable[[float, numpy.ndarray], numpy.ndarray]
        Drift, mapping ``(t, x)`` with ``x`` of shape ``(n, d)`` to shape
        ``(n, d)``.
    sigma: Callable[[float, numpy.ndarray], numpy.ndarray]
        Diffusion matrix, mapping ``(t, x)`` to shape ``(n, d, d)``.
    d: int
        State dimension.
    lipschitz_C: float
        Certificate: ``|b(t,x) - b(t,x')| + |sigma(t,x) - sigma(t,x')| <=
        C |x - x'|`` and ``|b(t,0)| + |sigma(t,0)| <= C``.
    label: str = "sde"
        Name used in reports.
    data: Optional[dict] = None
        Parameters describing the coefficients, for :func:`to_dict`.
    check_certificate: bool = True
        If True, spot-check the certificate on random pairs.
    """

    def __init__(
        self,
        b: Callable[[float, np.ndarray], np.ndarray],
        sigma: Callable[[float, np.ndarray], np.ndarray],
        d: int,
        lipschitz_C: float,
        label: str = "sde",
        data: Optional[dict] = None,
        check_certificate: bool = True,
    ):
        if d < 1 or d > 3:
            raise ValueError(f"Error in SDECoeffs: d={d} outside 1..3")
        if not (np.isfinite(lipschitz_C) and lipschitz_C >= 0.0):
            raise ValueError(f"Error in SDECoeffs: lipschitz_C={lipschitz_C}")
        self.b = b
        """Callable: Drift"""

        self.sigma = sigma
        """Callable: Diffusion matrix"""

        self.d = int(d)
        """int: State dimension"""

        self.lipschitz_C = float(lipschitz_C)
        """float: Lipschitz and growth certificate"""

        self.label = label
        """str: Name used in reports"""

        self.data = data if data is not None else {"label": label}
        """dict: Parameters for :func:`to_dict`"""

        if check_certificate:
            measured = self.measured_lipschitz()
            at_zero = self.size_at_zero()
            slack = 1e-9 * max(1.0, self.lipschitz_C)
            if max(measured, at_zero) > self.lipschitz_C + slack:
                raise ValueError(
                    f"Error in SDECoeffs: certificate C={self.lipschitz_C} violated "
                    f"(measured Lipschitz {measured:.6g}, size at 0 {at_zero:.6g})"
                )

    def size_at_zero(self, t: float = 0.0) -> float:
        """``|b(t, 0)| + |sigma(t, 0)|``"""
        x = np.zeros((1, self.d))
        return float(
            np.linalg.norm(self.b(t, x)[0]) + np.linalg.norm(self.sigma(t, x)[0])
        )

    def measured_lipschitz(
        self,
        n_pairs: int = 256,
        seed: int = 0,
        radius: float = 3.0,
        t: float = 0.0,
    ) -> float:
        """Largest ``(|b(x) - b(x')| + |sigma(x) - sigma(x')|) / |x - x'|``
        over random pairs in ``[-radius, radius]^d``"""
        rng = np.random.default_rng(seed)
        x = rng.uniform(-radius, radius, (n_pairs, self.d))
        y = rng.uniform(-radius, radius, (n_pairs, self.d))
        db = np.linalg.norm(self.b(t, x) - self.b(t, y), axis=1)
        ds = np.linalg.norm(self.sigma(t, x) - self.sigma(t, y), axis=(1, 2))
        dist = np.linalg.norm(x - y, axis=1)
        keep = dist > 0.0
        return float(np.max((db + ds)[keep] / dist[keep], initial=0.0))

    def to_dict(self):
        return {
            "label": self.label,
            "d": self.d,
            "lipschitz_C": self.lipschitz_C,
            "data": self.data,
        }

    def __repr__(self):
        return pretty_json(self.to_dict())
