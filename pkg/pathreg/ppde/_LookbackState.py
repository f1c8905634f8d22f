import math

from pathreg.report.json_io import pretty_json


class LookbackState:
    """State ``(t, m, x)`` of the lookback value function

    .. rubric:: Constructor

    Parameters
    ----------
    t: float
        Time.
    m: float
        Running maximum.
    x: float
        Current value. The closed form treats ``x <= m`` and ``x > m``
        separately.
    """

    def __init__(self, t: float, m: float, x: float):
        for name, value in [("t", t), ("m", m), ("x", x)]:
            if not math.isfinite(value):
                raise ValueError(
                    f"Error in LookbackState: {name}={value} is not finite"
                )

        self.t = float(t)
        """float: Time"""

        self.m = float(m)
        """float: Running maximum"""

        self.x = float(x)
        """float: Current value"""

    @property
    def in_domain(self) -> bool:
        """bool: True if ``x <= m``"""
        return self.x <= self.m

    @staticmethod
    def from_dict(data: dict):
        return LookbackState(t=data["t"], m=data["m"], x=data["x"])

    def to_dict(self):
        return {"t": self.t, "m": self.m, "x": self.x}

    def __repr__(self):
        return pretty_json(self.to_dict())
