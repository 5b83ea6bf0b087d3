"""Tabular sweep results and their CSV representation.

CSV layout: ``#``-prefixed ``key: value`` provenance lines, one header row of
``name [unit]`` cells, then data rows, CRLF-terminated and quoted per RFC 4180.
Floats are written with ``repr`` so a re-read reproduces them exactly;
``-inf`` marks the dB value of an exact zero.
"""

import csv
import io
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ValidationError

_HEADER = re.compile(r"^(?P<name>.*?)\s*\[(?P<unit>[^\]]*)\]$")


@dataclass
class Column:
    name: str
    unit: str
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.dtype.kind in "iuf":
            values = values.astype(float)
        elif values.dtype.kind != "O":
            values = values.astype(object)
        self.values = values

    @property
    def numeric(self):
        return self.values.dtype.kind == "f"


@dataclass
class SweepResult:
    """Ordered columns; the first one is the abscissa.

    ``provenance`` holds ``key -> str`` metadata written as CSV comments.
    """

    scenario: str
    kind: str
    columns: list
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        lengths = {len(c.values) for c in self.columns}
        if len(lengths) > 1:
            raise ValidationError(f"column lengths differ: {sorted(lengths)}")
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate column names in {names}")

    @property
    def abscissa(self):
        return self.columns[0]

    @property
    def names(self):
        return [c.name for c in self.columns]

    def column(self, name):
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)

    def __getitem__(self, name):
        return self.column(name).values

    def with_columns(self, extra, **provenance):
        prov = dict(self.provenance)
        prov.update({k: str(v) for k, v in provenance.items()})
        return SweepResult(self.scenario, self.kind, list(self.columns) + list(extra), prov)


def _cell(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def to_csv(result):
    """Serialise to a CSV string (CRLF line endings)."""
    buf = io.StringIO(newline="")
    meta = {"scenario": result.scenario, "kind": result.kind}
    meta.update(result.provenance)
    for key, value in meta.items():
        buf.write(f"# {key}: {value}\r\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow([f"{c.name} [{c.unit}]" for c in result.columns])
    for row in zip(*(c.values for c in result.columns)):
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def write_csv(result, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(to_csv(result))


def _parse_column(raw):
    try:
        return np.array([float(v) for v in raw], dtype=float)
    except ValueError:
        return np.array(raw, dtype=object)


def from_csv(text, path=None):
    """Parse text written by ``to_csv``."""
    lines = text.splitlines()
    meta = {}
    body_start = None
    for i, line in enumerate(lines):
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition(":")
            if sep:
                meta[key.strip()] = value.strip()
            continue
        body_start = i
        break
    if body_start is None:
        raise ParseError("no header row", len(lines) or None, path)
    rows = list(csv.reader(lines[body_start:]))
    header, data = rows[0], rows[1:]
    names, units = [], []
    for cell in header:
        m = _HEADER.match(cell)
        if not m:
            raise ParseError(f"header cell {cell!r} lacks a [unit]", body_start + 1, path)
        names.append(m["name"])
        units.append(m["unit"])
    for offset, row in enumerate(data):
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", body_start + 2 + offset, path)
    columns = [Column(n, u, _parse_column([r[j] for r in data])) for j, (n, u) in enumerate(zip(names, units))]
    scenario = meta.pop("scenario", "")
    kind = meta.pop("kind", "")
    return SweepResult(scenario, kind, columns, meta)


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return from_csv(fh.read(), path)


def read_reference(path):
    """Two-column reference series: optional ``x [unit],y [unit]`` header.

    Returns ``(x, y, x_unit, y_unit)``; units are ``None`` without a header.
    """
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    xs, ys = [], []
    x_unit = y_unit = None
    seen_header = False
    for lineno, row in enumerate(csv.reader(text.splitlines()), start=1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        if len(row) != 2:
            raise ParseError(f"expected 2 fields, got {len(row)}", lineno, path)
        try:
            x, y = float(row[0]), float(row[1])
        except ValueError:
            if seen_header or xs:
                raise ParseError(f"non-numeric row {row!r}", lineno, path) from None
            mx, my = _HEADER.match(row[0].strip()), _HEADER.match(row[1].strip())
            x_unit = mx["unit"] if mx else None
            y_unit = my["unit"] if my else None
            seen_header = True
            continue
        xs.append(x)
        ys.append(y)
    if len(xs) < 2:
        raise ParseError("reference needs at least two data rows", None, path)
    x, y = np.array(xs), np.array(ys)
    order = np.argsort(x, kind="stable")
    return x[order], y[order], x_unit, y_unit
