from typing import Callable, Optional

import numpy as np

from pathreg.report.json_io import pretty_json

BASIS_TYPES = ["polynomial", "sine", "cosine"]


class BasisFunction:
    """A twice differentiable function on ``[0, T]``

    Basis functions are only evaluated on ``[0, T]``; outside of it they are
    taken to be 0 by the operations that use them.

    .. rubric:: Constructor

    Parameters
    ----------
    value: Callable[[numpy.ndarray], numpy.ndarray]
        The function, vectorized.
    derivative: Callable[[numpy.ndarray], numpy.ndarray]
        First derivative, vectorized.
    second: Callable[[numpy.ndarray], numpy.ndarray]
        Second derivative, vectorized.
    label: str = "basis"
        Description used in reports.
    data: Optional[dict] = None
        Parameters that :func:`from_dict` can rebuild the function from.
    """

    def __init__(
        self,
        value: Callable[[np.ndarray], np.ndarray],
        derivative: Callable[[np.ndarray], np.ndarray],
        second: Callable[[np.ndarray], np.ndarray],
        label: str = "basis",
        data: Optional[dict] = None,
    ):
        self.value = value
        """Callable: The function"""

        self.derivative = derivative
        """Callable: First derivative"""

        self.second = second
        """Callable: Second derivative"""

        self.label = label
        """str: Description used in reports"""

        self.data = data if data is not None else {"type": "custom", "label": label}
        """dict: Parameters for :func:`to_dict`"""

    def __call__(self, s):
        return self.value(np.asarray(s, dtype=float))

    @staticmethod
    def polynomial(coeffs: list[float]):
        """``sum_k coeffs[k] * s**k``"""
        p = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))
        d1 = p.deriv(1)
        d2 = p.deriv(2)
        return BasisFunction(
            value=lambda s: p(s),
            derivative=lambda s: d1(s),
            second=lambda s: d2(s),
            label=f"polynomial{list(coeffs)}",
            data={"type": "polynomial", "coeffs": list(coeffs)},
        )

    @staticmethod
    def constant(value: float = 1.0):
        return BasisFunction.polynomial([value])

    @staticmethod
    def sine(frequency: float = 1.0, amplitude: float = 1.0, phase: float = 0.0):
        """``amplitude * sin(2 pi frequency s + phase)``"""
        w = 2.0 * np.pi * frequency
        return BasisFunction(
            value=lambda s: amplitude * np.sin(w * s + phase),
            derivative=lambda s: amplitude * w * np.cos(w * s + phase),
            second=lambda s: -amplitude * w * w * np.sin(w * s + phase),
            label=f"sine({frequency:g})",
            data={
                "type": "sine",
                "frequency": frequency,
                "amplitude": amplitude,
                "phase": phase,
            },
        )

    @staticmethod
    def cosine(frequency: float = 1.0, amplitude: float = 1.0):
        """``amplitude * cos(2 pi frequency s)``"""
        basis = BasisFunction.sine(
            frequency=frequency, amplitude=amplitude, phase=0.5 * np.pi
        )
        basis.label = f"cosine({frequency:g})"
        basis.data = {"type": "cosine", "frequency": frequency, "amplitude": amplitude}
        return basis

    @staticmethod
    def from_dict(data: dict):
        _type = data.get("type")
        if _type == "polynomial":
            return BasisFunction.polynomial(data["coeffs"])
        elif _type == "sine":
            return BasisFunction.sine(
                frequency=data.get("frequency", 1.0),
                amplitude=data.get("amplitude", 1.0),
                phase=data.get("phase", 0.0),
            )
        elif _type == "cosine":
            return BasisFunction.cosine(
                frequency=data.get("frequency", 1.0),
                amplitude=data.get("amplitude", 1.0),
            )
        raise ValueError(
            f"Error in BasisFunction.from_dict: unknown type '{_type}'; "
            f"expected one of {BASIS_TYPES}"
        )

    def to_dict(self):
        return dict(self.data)

    def __repr__(self):
        return pretty_json(self.to_dict())
