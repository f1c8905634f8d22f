import math
from typing import Optional

from .json_io import from_builtin, pretty_json


def _as_float(value) -> float:
    # non-finite floats are stored as strings
    return float(value)


class ReportEntry:
    """One named verification result

    .. rubric:: Constructor

    Parameters
    ----------
    name: str
        Entry name, unique within a report, for example
        ``"lookback.value_mc"``.
    value: float
        The measured quantity.
    reference: float
        The value it is compared against.
    tolerance: float
        Pass threshold for `gap`.
    gap: Optional[float] = None
        Distance between `value` and `reference`. If None,
        ``abs(value - reference)``.
    provenance: str = "derived"
        Where the reference comes from, for example ``"closed-form"``,
        ``"monte-carlo"``, ``"brute-force"`` or ``"trend"``.
    seed: Optional[int] = None
        Random seed used, if any.
    details: Optional[dict] = None
        Extra data kept alongside the entry (tables, fitted constants).
    """

    def __init__(
        self,
        name: str,
        value: float,
        reference: float,
        tolerance: float,
        gap: Optional[float] = None,
        provenance: str = "derived",
        seed: Optional[int] = None,
        details: Optional[dict] = None,
    ):
        self.name = name
        """str: Entry name"""

        self.value = float(value)
        """float: The measured quantity"""

        self.reference = float(reference)
        """float: The value `value` is compared against"""

        if gap is None:
            gap = abs(self.value - self.reference)
        self.gap = float(gap)
        """float: Distance between `value` and `reference`"""

        if tolerance < 0.0:
            raise ValueError(f"Error in ReportEntry: tolerance < 0 for {name}")
        self.tolerance = float(tolerance)
        """float: Pass threshold for `gap`"""

        self.provenance = provenance
        """str: Origin of the reference value"""

        self.seed = seed
        """Optional[int]: Random seed used, if any"""

        self.details = details if details is not None else {}
        """dict: Extra data kept alongside the entry"""

    @property
    def passed(self) -> bool:
        """bool: True if ``gap <= tolerance``; NaN gaps never pass"""
        if math.isnan(self.gap):
            return False
        return self.gap <= self.tolerance

    def scaled(self, tol_scale: float):
        """Return a copy with the tolerance multiplied by `tol_scale`"""
        return ReportEntry(
            name=self.name,
            value=self.value,
            reference=self.reference,
            tolerance=self.tolerance * tol_scale,
            gap=self.gap,
            provenance=self.provenance,
            seed=self.seed,
            details=self.details,
        )

    @staticmethod
    def from_dict(data: dict):
        return ReportEntry(
            name=data["name"],
            value=_as_float(data["value"]),
            reference=_as_float(data["reference"]),
            tolerance=_as_float(data["tolerance"]),
            gap=_as_float(data["gap"]),
            provenance=data.get("provenance", "derived"),
            seed=data.get("seed"),
            details=from_builtin(data.get("details", {})),
        )

    def to_dict(self):
        return {
            "name": self.name,
            "value": self.value,
            "reference": self.reference,
            "gap": self.gap,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "provenance": self.provenance,
            "seed": self.seed,
            "details": self.details,
        }

    def __repr__(self):
        return pretty_json(self.to_dict())
