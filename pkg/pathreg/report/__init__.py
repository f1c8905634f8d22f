from ._misc import print_table, print_trend
from ._ReportEntry import ReportEntry
from ._VerificationReport import REPORT_VERSION, VerificationReport
from .json_io import (
    canonical_json,
    from_builtin,
    pretty_json,
    read_csv,
    read_optional,
    read_required,
    safe_dump,
    sha256_hash,
    write_csv,
)
