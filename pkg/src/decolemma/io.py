"""Text formats read and written by the command-line tool.

Value files hold one sample per line, either ``re`` or ``re,im``.  Model
files are sectioned::

    # comment
    hbar: 1.0
    [energies]
    0.0
    1.0
    [rho]
    0.5,0,0.5,0
    0.5,0,0.5,0
    [observable]
    0,0,1,0
    1,0,0,0

Matrix rows list ``re,im`` pairs.  Blank lines and ``#`` comments are
ignored everywhere.
"""
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .model import DiscreteModel


class InputError(ValidationError):
    """Malformed input file, with the offending line number."""

    def __init__(self, path, line, message):
        self.path = path
        self.line = line
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")


def _lines(path):
    text = Path(path).read_text()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _floats(path, number, line):
    try:
        vals = [float(tok) for tok in line.split(",")]
    except ValueError:
        raise InputError(path, number, f"cannot parse numbers from {line!r}") from None
    if not all(np.isfinite(vals)):
        raise InputError(path, number, "non-finite value")
    return vals


def read_values(path):
    """Complex samples from a one-value-per-line file."""
    out = []
    for number, line in _lines(path):
        vals = _floats(path, number, line)
        if len(vals) == 1:
            out.append(complex(vals[0], 0.0))
        elif len(vals) == 2:
            out.append(complex(vals[0], vals[1]))
        else:
            raise InputError(path, number, "expected 're' or 're,im'")
    if not out:
        raise InputError(path, None, "no values found")
    return np.array(out)


def read_model(path):
    """Parse a sectioned model file into a :class:`DiscreteModel`."""
    hbar = 1.0
    sections = {"energies": [], "rho": [], "observable": []}
    current = None
    first_line = {}
    for number, line in _lines(path):
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().lower()
            if current not in sections:
                raise InputError(path, number, f"unknown section [{current}]")
            first_line[current] = number
            continue
        if current is None:
            key, sep, value = line.partition(":")
            if not sep or key.strip().lower() != "hbar":
                raise InputError(path, number, f"unexpected line {line!r} before sections")
            hbar = _floats(path, number, value.strip())[0]
            continue
        vals = _floats(path, number, line)
        if current == "energies":
            if len(vals) != 1:
                raise InputError(path, number, "one energy per line")
            sections[current].append(vals[0])
        else:
            if len(vals) % 2:
                raise InputError(path, number, "matrix rows need re,im pairs")
            sections[current].append((number, vals))
    for name, rows in sections.items():
        if not rows:
            raise InputError(path, None, f"missing section [{name}]")
    n = len(sections["energies"])
    mats = {}
    for name in ("rho", "observable"):
        rows = sections[name]
        if len(rows) != n:
            raise InputError(path, first_line[name], f"[{name}] has {len(rows)} rows, expected {n}")
        mat = np.empty((n, n), dtype=complex)
        for i, (number, vals) in enumerate(rows):
            if len(vals) != 2 * n:
                raise InputError(path, number, f"expected {n} re,im pairs, got {len(vals) // 2}")
            mat[i] = np.array(vals[0::2]) + 1j * np.array(vals[1::2])
        mats[name] = mat
    try:
        return DiscreteModel(np.array(sections["energies"]), mats["rho"], mats["observable"], hbar)
    except ValidationError as exc:
        raise InputError(path, None, str(exc)) from None


def write_model(model, stream):
    """Serialise ``model`` in the format read by :func:`read_model`."""
    stream.write(f"hbar: {model.hbar:.17g}\n[energies]\n")
    for w in model.energies:
        stream.write(f"{w:.17g}\n")
    for name, mat in (("rho", model.rho), ("observable", model.observable)):
        stream.write(f"[{name}]\n")
        for row in mat:
            stream.write(",".join(f"{z.real:.17g},{z.imag:.17g}" for z in row) + "\n")
