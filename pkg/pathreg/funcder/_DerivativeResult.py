import math
from typing import Optional

from pathreg.regcalc import LimitEstimate
from pathreg.report.json_io import pretty_json


def exact_estimate(value: float) -> LimitEstimate:
    """A closed-form value wrapped as a converged :class:`LimitEstimate`"""
    return LimitEstimate(
        value=value,
        raw=[(0.0, value)],
        convergence_rate=math.nan,
        converged=True,
        tolerance=0.0,
    )


class DerivativeResult:
    """Horizontal and vertical derivatives of a path functional at one point

    .. rubric:: Constructor

    Parameters
    ----------
    dh: LimitEstimate
        Horizontal derivative.
    dv: LimitEstimate
        First vertical derivative.
    dvv: LimitEstimate
        Second vertical derivative.
    dt: Optional[LimitEstimate] = None
        Time derivative, if computed.
    """

    def __init__(
        self,
        dh: LimitEstimate,
        dv: LimitEstimate,
        dvv: LimitEstimate,
        dt: Optional[LimitEstimate] = None,
    ):
        self.dh = dh
        """LimitEstimate: Horizontal derivative"""

        self.dv = dv
        """LimitEstimate: First vertical derivative"""

        self.dvv = dvv
        """LimitEstimate: Second vertical derivative"""

        self.dt = dt
        """Optional[LimitEstimate]: Time derivative"""

    @property
    def converged(self) -> bool:
        parts = [self.dh, self.dv, self.dvv] + ([self.dt] if self.dt else [])
        return all(x.converged for x in parts)

    def to_dict(self):
        data = {
            "dh": self.dh.to_dict(),
            "dv": self.dv.to_dict(),
            "dvv": self.dvv.to_dict(),
        }
        if self.dt is not None:
            data["dt"] = self.dt.to_dict()
        return data

    def __repr__(self):
        return pretty_json(self.to_dict())
