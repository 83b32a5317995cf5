"""Figure specs: which CSV files to draw and how.

A spec is a small JSON document.  Common fields:

    kind      "timeseries" (default) or "panel"
    name      output stem, default "figure"
    inputs    list of CSV paths, one curve per file
    labels    optional legend/title strings, same length as inputs
    column    value column to plot, default "dS_n"
    logy      log-scale value axis, default false
    title     optional figure title

timeseries only:

    guides    [{"rate": r, "curve": i, "label": s}, ...] dashed decay
              guides anchored on curve i (default 0)
    inset     {"path": csv, "column": name, "label": s} momentum
              profile drawn in a corner inset

panel only:

    layout    [rows, cols], default [2, 2]

Relative input paths resolve against the directory of the spec file.
"""

import json
import os
from dataclasses import dataclass, field


class SpecError(ValueError):
    """Raised when a figure spec cannot be used."""


@dataclass(frozen=True)
class GuideLine:
    rate: float
    curve: int = 0
    label: str = ""


@dataclass(frozen=True)
class InsetSpec:
    path: str
    column: str = "dS_n"
    label: str = ""


@dataclass(frozen=True)
class FigureSpec:
    kind: str = "timeseries"
    name: str = "figure"
    inputs: tuple = ()
    labels: tuple = ()
    column: str = "dS_n"
    logy: bool = False
    title: str = ""
    guides: tuple = ()
    inset: InsetSpec = None
    layout: tuple = (2, 2)


def _string_list(doc, key, n_required=None):
    raw = doc.get(key, [])
    if not isinstance(raw, list) or not all(isinstance(x, str) for x in raw):
        raise SpecError("%r must be a list of strings" % key)
    if n_required is not None and raw and len(raw) != n_required:
        raise SpecError(
            "%r has %d entries for %d inputs" % (key, len(raw), n_required)
        )
    return tuple(raw)


def parse_spec(doc: dict, base: str = ".") -> FigureSpec:
    if not isinstance(doc, dict):
        raise SpecError("spec must be a JSON object")
    kind = doc.get("kind", "timeseries")
    if kind not in ("timeseries", "panel"):
        raise SpecError("kind must be 'timeseries' or 'panel', got %r" % kind)
    inputs = _string_list(doc, "inputs")
    if not inputs:
        raise SpecError("spec needs at least one input CSV")
    inputs = tuple(os.path.normpath(os.path.join(base, p)) for p in inputs)
    labels = _string_list(doc, "labels", n_required=len(inputs))

    guides = []
    for g in doc.get("guides", []):
        if not isinstance(g, dict) or "rate" not in g:
            raise SpecError("each guide needs a 'rate'")
        curve = int(g.get("curve", 0))
        if not 0 <= curve < len(inputs):
            raise SpecError("guide curve %d out of range" % curve)
        guides.append(
            GuideLine(rate=float(g["rate"]), curve=curve, label=str(g.get("label", "")))
        )

    inset = None
    if "inset" in doc:
        block = doc["inset"]
        if not isinstance(block, dict) or "path" not in block:
            raise SpecError("inset needs a 'path'")
        inset = InsetSpec(
            path=os.path.normpath(os.path.join(base, block["path"])),
            column=str(block.get("column", "dS_n")),
            label=str(block.get("label", "")),
        )

    layout = doc.get("layout", [2, 2])
    if (
        not isinstance(layout, list)
        or len(layout) != 2
        or not all(isinstance(x, int) and x > 0 for x in layout)
    ):
        raise SpecError("layout must be [rows, cols] with positive integers")
    if kind == "panel" and len(inputs) > layout[0] * layout[1]:
        raise SpecError(
            "%d inputs do not fit a %dx%d panel" % (len(inputs), layout[0], layout[1])
        )

    name = str(doc.get("name", "figure"))
    if not name or os.sep in name or name != os.path.basename(name):
        raise SpecError("name must be a bare file stem, got %r" % name)

    return FigureSpec(
        kind=kind,
        name=name,
        inputs=inputs,
        labels=labels,
        column=str(doc.get("column", "dS_n")),
        logy=bool(doc.get("logy", False)),
        title=str(doc.get("title", "")),
        guides=tuple(guides),
        inset=inset,
        layout=(layout[0], layout[1]),
    )


def load_spec(path) -> FigureSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SpecError("cannot read spec %s: %s" % (path, exc)) from exc
    except json.JSONDecodeError as exc:
        raise SpecError("spec %s is not valid JSON: %s" % (path, exc)) from exc
    return parse_spec(doc, base=os.path.dirname(os.path.abspath(path)))
