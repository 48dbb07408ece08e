"""Utils Module.

File output helpers. Every writer goes through a temporary file in the
target directory followed by ``os.replace``, so a reader never sees a
partially written file.
"""
import json
import os
import tempfile

import numpy as np

CSV_FORMAT = "%.17g"


def _atomic_write(path, write):
    directory = os.path.dirname(os.path.abspath(path))
    handle, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(handle, "w", newline="\n") as f:
            write(f)
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def write_csv(path, columns, comments=()):
    """Write named columns to a CSV file.

    Parameters
    ----------
    path : string

    columns : dict of str -> array-like
        Column name to values; all columns have the same length.

    comments : sequence of str
        Lines written before the header, each prefixed with ``# ``.

    Notes
    -----
    Numbers are written with 17 significant digits, enough for an exact
    round trip of a float64.
    """
    names = list(columns)
    table = np.column_stack([np.asarray(columns[name], dtype=float) for name in names])
    header = "\n".join(["# " + line for line in comments] + [",".join(names)])

    def write(f):
        f.write(header + "\n")
        np.savetxt(f, table, fmt=CSV_FORMAT, delimiter=",")
    _atomic_write(path, write)


def read_csv(path):
    """Read a CSV file written by ``write_csv``.

    Returns
    -------
    dict of str -> array
    """
    with open(path) as f:
        names = None
        for line in f:
            if not line.startswith("#"):
                names = line.strip().split(",")
                break
        table = np.loadtxt(f, delimiter=",", ndmin=2)
    if names is None:
        raise ValueError("Error when reading {}: no header line".format(path))
    return {name: table[:, i] for i, name in enumerate(names)}


def _to_builtin(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError("Object of type {} is not JSON serializable".format(type(value).__name__))


def write_json(path, data):
    """Serialize ``data`` to JSON (sorted keys, indented)."""
    def write(f):
        json.dump(data, f, indent=2, sort_keys=True, default=_to_builtin)
        f.write("\n")
    _atomic_write(path, write)


def load_json(path):
    with open(path) as f:
        return json.load(f)
