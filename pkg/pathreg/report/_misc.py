import sys
from typing import Optional, TextIO

from tabulate import tabulate


def print_table(
    data: list[dict],
    columns: list[str],
    headers: Optional[list[str]] = None,
    out: Optional[TextIO] = None,
    floatfmt: str = ".6g",
):
    """Print a table of records

    Parameters
    ----------
    data: list[dict]
        Records to print. Missing keys print as empty cells.
    columns: list[str]
        Keys of the records to print, in order.
    headers: Optional[list[str]] = None
        Header strings. Defaults to `columns`.
    out: Optional[stream] = None
        Output stream. Defaults to `sys.stdout`.
    floatfmt: str = ".6g"
        Format applied by `tabulate` to float cells.
    """
    if out is None:
        out = sys.stdout
    if headers is None:
        headers = columns
    rows = [[record.get(col, "") for col in columns] for record in data]
    out.write(tabulate(rows, headers=headers, floatfmt=floatfmt))
    out.write("\n")


def print_trend(
    label: str,
    abscissa: list,
    values: list[float],
    out: Optional[TextIO] = None,
):
    """Print a two-column convergence table, such as error versus order"""
    data = [{label: a, "value": v} for a, v in zip(abscissa, values)]
    print_table(data=data, columns=[label, "value"], out=out)
