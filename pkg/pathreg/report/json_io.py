import hashlib
import json
import pathlib
from typing import Any, Optional, Union

import numpy as np

#: Strings that stand for the non-finite floats in written JSON
NON_FINITE = {"nan": float("nan"), "inf": float("inf"), "-inf": float("-inf")}


def _to_builtin(obj: Any):
    if isinstance(obj, dict):
        return {str(k): _to_builtin(v) for k, v in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [_to_builtin(v) for v in obj]
    elif isinstance(obj, np.ndarray):
        return _to_builtin(obj.tolist())
    elif isinstance(obj, np.bool_):
        return bool(obj)
    elif isinstance(obj, np.integer):
        return int(obj)
    elif isinstance(obj, (float, np.floating)):
        value = float(obj)
        if np.isfinite(value):
            return value
        return str(value)
    return obj


def from_builtin(obj: Any):
    """Inverse of the JSON conversion: strings in :data:`NON_FINITE` become
    floats again, recursively"""
    if isinstance(obj, dict):
        return {k: from_builtin(v) for k, v in obj.items()}
    elif isinstance(obj, list):
        return [from_builtin(v) for v in obj]
    elif isinstance(obj, str) and obj in NON_FINITE:
        return NON_FINITE[obj]
    return obj


def pretty_json(
    data: Any,
) -> str:
    """Pretty-print Python data as a JSON string, with sorted keys"""
    return json.dumps(_to_builtin(data), indent=2, sort_keys=True) + "\n"


def canonical_json(data: Any) -> str:
    """Compact JSON with sorted keys, used for hashing"""
    return json.dumps(_to_builtin(data), sort_keys=True, separators=(",", ":"))


def sha256_hash(data: Any) -> str:
    """SHA-256 hex digest of the canonical JSON of `data`"""
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()


def printpathstr(path):
    abspath = pathlib.Path(path).resolve()
    try:
        return str(abspath.relative_to(pathlib.Path.cwd()))
    except ValueError:
        return str(abspath)


def read_required(path: pathlib.Path):
    path = pathlib.Path(path)
    if path.exists():
        with open(path, "r") as f:
            try:
                return from_builtin(json.load(f))
            except json.JSONDecodeError as e:
                raise ValueError(
                    "Error in json_io.read_required: '"
                    + printpathstr(path)
                    + "' is not valid JSON ("
                    + str(e)
                    + ")"
                )
    else:
        raise FileNotFoundError(
            "Required file: '" + printpathstr(path) + "' does not exist"
        )


def read_optional(path: Optional[pathlib.Path], default: Any = None):
    if path is None:
        return default
    path = pathlib.Path(path)
    if path.exists():
        return read_required(path)
    return default


def safe_dump(
    data,
    path: pathlib.Path,
    force: bool = False,
    quiet: bool = False,
):
    """Json dump with overwrite/skipping/write output messaging

    Writes to the temporary file `path + ".tmp"`, then removes `path`
    and renames the temporary file, to avoid losing the original file
    without writing the new file. This method does not avoid race
    conditions.

    If the temporary file already exists an exception is raised.
    """
    path = pathlib.Path(path)

    def _safe_write(data, path):
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp_path = pathlib.Path(str(path) + ".tmp")
        if tmp_path.exists():
            raise Exception("Error: " + str(tmp_path) + " already exists")

        with open(tmp_path, "w") as f:
            f.write(pretty_json(data))

        if path.exists():
            path.unlink()
        tmp_path.rename(path)

    if path.exists():
        if force:
            if not quiet:
                print("overwrite:", printpathstr(path))
            _safe_write(data, path)
        elif not quiet:
            print("skipping:", printpathstr(path))
    else:
        if not quiet:
            print("write:", printpathstr(path))
        _safe_write(data, path)


def write_csv(
    path: pathlib.Path,
    columns: list[str],
    rows: Union[np.ndarray, list[list[float]]],
    quiet: bool = False,
):
    """Write a comma separated table with a header row

    Parameters
    ----------
    path: pathlib.Path
        Output file. Parent directories are created.
    columns: list[str]
        Column names.
    rows: Union[numpy.ndarray, list[list[float]]]
        Table rows, shape ``(n_rows, len(columns))``.
    quiet: bool = False
        If True, do not print the ``write:`` message.
    """
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = np.asarray(rows, dtype=float).reshape(-1, len(columns))
    if not quiet:
        print("write:", printpathstr(path))
    np.savetxt(path, data, delimiter=",", header=",".join(columns), comments="")


def read_csv(path: pathlib.Path) -> tuple[list[str], np.ndarray]:
    """Read a table written by :func:`write_csv`"""
    path = pathlib.Path(path)
    if not path.exists():
        raise FileNotFoundError(
            "Required file: '" + printpathstr(path) + "' does not exist"
        )
    with open(path, "r") as f:
        header = f.readline().strip()
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return (header.split(","), data)
