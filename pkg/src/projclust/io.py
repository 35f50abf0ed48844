"""Plain-text file formats.

Matrix files start with a line ``n m`` followed by ``n`` lines of ``m``
space-separated values. Integral matrices are written as integers, others
with 17 significant digits so values round-trip exactly. Label files hold
one integer per line. Params files are ``key value...`` lines, with one
``center`` line per component.

All writers go through a temporary file in the target directory followed
by :func:`os.replace`.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .model import Family, MixtureParams

__all__ = [
    "atomic_write",
    "format_float",
    "write_matrix",
    "read_matrix",
    "write_labels",
    "read_labels",
    "write_params",
    "read_params",
    "write_json",
]


def atomic_write(path, text: str):
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_float(x) -> str:
    return format(float(x), ".17g")


def write_matrix(path, A):
    A = np.asarray(A, dtype=float)
    n, m = A.shape
    if np.all(A == np.round(A)) and np.all(np.abs(A) < 2 ** 53):
        rows = (" ".join(str(int(v)) for v in row) for row in A)
    else:
        rows = (" ".join(format_float(v) for v in row) for row in A)
    atomic_write(path, f"{n} {m}\n" + "".join(line + "\n" for line in rows))


def read_matrix(path) -> np.ndarray:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: first line must be 'n m'")
        n, m = (int(v) for v in header)
        A = np.loadtxt(fh, dtype=float, ndmin=2)
    if A.size == 0:
        A = A.reshape(0, m)
    if A.shape != (n, m):
        raise ValueError(f"{path}: header says {n}x{m}, body is {A.shape[0]}x{A.shape[1]}")
    return A


def write_labels(path, labels):
    atomic_write(path, "".join(f"{int(v)}\n" for v in labels))


def read_labels(path) -> np.ndarray:
    with open(path) as fh:
        return np.array([int(line) for line in fh if line.strip()], dtype=np.int64)


def write_params(path, params: MixtureParams):
    lines = [
        f"k {params.k}",
        f"n {params.n}",
        f"sigma_sq {format_float(params.sigma_sq)}",
        f"family {params.family.value}",
        "weights " + " ".join(format_float(w) for w in params.weights),
    ]
    lines += ["center " + " ".join(format_float(v) for v in row) for row in params.centers]
    atomic_write(path, "\n".join(lines) + "\n")


def read_params(path) -> MixtureParams:
    fields = {}
    centers = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            key, values = parts[0], parts[1:]
            if key == "center":
                centers.append([float(v) for v in values])
            elif key in ("k", "n", "sigma_sq", "family", "weights"):
                fields[key] = values
            else:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    missing = {"sigma_sq", "weights"} - fields.keys()
    if missing:
        raise ValueError(f"{path}: missing {sorted(missing)}")
    params = MixtureParams(
        centers=np.array(centers, dtype=float),
        weights=np.array([float(v) for v in fields["weights"]]),
        sigma_sq=float(fields["sigma_sq"][0]),
        family=Family(fields.get("family", ["bernoulli"])[0]),
    )
    if "k" in fields and int(fields["k"][0]) != params.k:
        raise ValueError(f"{path}: k does not match the number of centers")
    if "n" in fields and int(fields["n"][0]) != params.n:
        raise ValueError(f"{path}: n does not match the center dimension")
    return params


def write_json(path, obj):
    atomic_write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")
