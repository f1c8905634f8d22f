import datetime
import pathlib
import sys
from typing import Optional, TextIO

from ._misc import print_table
from ._ReportEntry import ReportEntry
from .json_io import (
    pretty_json,
    read_required,
    safe_dump,
    sha256_hash,
)

REPORT_VERSION = "1.0"


class VerificationReport:
    """Named residuals and estimates, with tolerances and pass flags

    .. rubric:: Constructor

    Parameters
    ----------
    config_hash: str = ""
        SHA-256 hash of the resolved run configuration.
    entries: Optional[list[ReportEntry]] = None
        Initial entries.
    timestamp: Optional[str] = None
        ISO timestamp. If None, the current UTC time is used.
    version: str = REPORT_VERSION
        Report format version.
    """

    def __init__(
        self,
        config_hash: str = "",
        entries: Optional[list[ReportEntry]] = None,
        timestamp: Optional[str] = None,
        version: str = REPORT_VERSION,
    ):
        self.config_hash = config_hash
        """str: SHA-256 hash of the resolved run configuration"""

        self.entries = list(entries) if entries is not None else []
        """list[ReportEntry]: Report entries, in insertion order"""

        if timestamp is None:
            timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
        self.timestamp = timestamp
        """str: Creation time; excluded from :func:`content_hash`"""

        self.version = version
        """str: Report format version"""

    def append(self, entry: ReportEntry):
        """Add an entry; names must be unique"""
        if entry.name in self.names():
            raise ValueError(
                f"Error in VerificationReport.append: duplicate entry '{entry.name}'"
            )
        self.entries.append(entry)

    def extend(self, entries: list[ReportEntry]):
        for entry in entries:
            self.append(entry)

    def add(
        self,
        name: str,
        value: float,
        reference: float,
        tolerance: float,
        gap: Optional[float] = None,
        provenance: str = "derived",
        seed: Optional[int] = None,
        details: Optional[dict] = None,
    ) -> ReportEntry:
        """Construct a :class:`ReportEntry`, append it, and return it"""
        entry = ReportEntry(
            name=name,
            value=value,
            reference=reference,
            tolerance=tolerance,
            gap=gap,
            provenance=provenance,
            seed=seed,
            details=details,
        )
        self.append(entry)
        return entry

    def names(self) -> list[str]:
        return [entry.name for entry in self.entries]

    def get(self, name: str) -> ReportEntry:
        for entry in self.entries:
            if entry.name == name:
                return entry
        raise KeyError(f"Error in VerificationReport.get: no entry '{name}'")

    @property
    def passed(self) -> bool:
        """bool: True if every entry passed (an empty report passes)"""
        return all(entry.passed for entry in self.entries)

    def failures(self) -> list[ReportEntry]:
        return [entry for entry in self.entries if not entry.passed]

    def content_hash(self) -> str:
        """SHA-256 of the configuration hash and entries, excluding the
        timestamp"""
        return sha256_hash(
            {
                "config_hash": self.config_hash,
                "entries": [entry.to_dict() for entry in self.entries],
                "version": self.version,
            }
        )

    @staticmethod
    def from_dict(data: dict):
        return VerificationReport(
            config_hash=data.get("config_hash", ""),
            entries=[ReportEntry.from_dict(x) for x in data.get("entries", [])],
            timestamp=data.get("timestamp"),
            version=data.get("version", REPORT_VERSION),
        )

    def to_dict(self):
        return {
            "version": self.version,
            "timestamp": self.timestamp,
            "config_hash": self.config_hash,
            "content_hash": self.content_hash(),
            "passed": self.passed,
            "entries": [entry.to_dict() for entry in self.entries],
        }

    @staticmethod
    def load(path: pathlib.Path):
        return VerificationReport.from_dict(read_required(path))

    def commit(self, path: pathlib.Path, quiet: bool = False):
        """Write the report as JSON, replacing an existing file"""
        safe_dump(self.to_dict(), path=path, force=True, quiet=quiet)

    def print_summary(self, out: Optional[TextIO] = None):
        """Print a table of entries"""
        if out is None:
            out = sys.stdout
        data = []
        for entry in self.entries:
            data.append(
                {
                    "name": entry.name,
                    "value": f"{entry.value:.6g}",
                    "reference": f"{entry.reference:.6g}",
                    "gap": f"{entry.gap:.3g}",
                    "tolerance": f"{entry.tolerance:.3g}",
                    "status": "pass" if entry.passed else "FAIL",
                }
            )
        columns = ["name", "value", "reference", "gap", "tolerance", "status"]
        print_table(data=data, columns=columns, headers=columns, out=out)
        n_fail = len(self.failures())
        out.write(f"{len(self.entries) - n_fail} passed, {n_fail} failed\n")

    def __repr__(self):
        return pretty_json(self.to_dict())
