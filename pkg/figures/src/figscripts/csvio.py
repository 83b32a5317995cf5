"""Reader for the schema-v1 CSV artifacts written by the simulation CLI.

A file carries leading ``# key: value`` comment lines (at least the
schema tag and the embedded run config), the fixed column header, one
data row per sample, and usually a trailing ``# analysis: {...}`` line
with fitted rates and verdicts.  Momentum-profile files reuse the same
row shape with the abscissa in the ``t`` column and a ``# kind:``
comment naming the profile.
"""

import json
from dataclasses import dataclass, field

import numpy as np

SCHEMA = "noclick-csv-v1"
COLUMNS = ("t", "S_n", "dS_n", "Z_residual", "oracle_S_n", "oracle_dS_n")


class TableError(ValueError):
    """Raised when a CSV artifact cannot be used."""


@dataclass(frozen=True)
class Table:
    path: str
    schema: str
    config: dict = field(default_factory=dict)
    kind: str = ""
    columns: tuple = COLUMNS
    values: np.ndarray = None
    analysis: dict = field(default_factory=dict)

    def __len__(self):
        return self.values.shape[0]


def _parse_comment(line, meta):
    body = line[1:].strip()
    key, sep, rest = body.partition(":")
    if not sep:
        return
    key = key.strip()
    rest = rest.strip()
    if key in ("config", "analysis"):
        try:
            meta[key] = json.loads(rest) if rest else {}
        except json.JSONDecodeError as exc:
            raise TableError("bad %s JSON in comment: %s" % (key, exc)) from exc
    else:
        meta[key] = rest


def read_table(path) -> Table:
    """Parse one schema-v1 file; refuse anything else, loudly."""
    path = str(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise TableError("cannot read %s: %s" % (path, exc)) from exc

    meta = {}
    header = None
    rows = []
    for line in lines:
        if not line.strip():
            continue
        if line.startswith("#"):
            _parse_comment(line, meta)
            continue
        if header is None:
            header = tuple(cell.strip() for cell in line.split(","))
            continue
        cells = line.split(",")
        if len(cells) != len(header):
            raise TableError(
                "%s: row has %d cells, header has %d" % (path, len(cells), len(header))
            )
        rows.append([float(c) if c.strip() else np.nan for c in cells])

    schema = meta.get("schema")
    if schema is None:
        raise TableError("%s: missing schema tag" % path)
    if schema != SCHEMA:
        raise TableError(
            "%s: unsupported schema %r (this renderer reads %r)" % (path, schema, SCHEMA)
        )
    if header is None:
        raise TableError("%s: missing column header" % path)
    if header != COLUMNS:
        raise TableError(
            "%s: column header %s does not match schema v1 %s"
            % (path, ",".join(header), ",".join(COLUMNS))
        )
    values = np.array(rows, dtype=float) if rows else np.empty((0, len(COLUMNS)))
    return Table(
        path=path,
        schema=schema,
        config=meta.get("config", {}),
        kind=meta.get("kind", ""),
        columns=COLUMNS,
        values=values,
        analysis=meta.get("analysis", {}),
    )


def column(table: Table, name: str) -> np.ndarray:
    if name not in table.columns:
        raise TableError(
            "%s: no column %r (have %s)" % (table.path, name, ",".join(table.columns))
        )
    return table.values[:, table.columns.index(name)]
