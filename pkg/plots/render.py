#!/usr/bin/env python3
"""Line-plot renderer for experiment summary CSVs.

Reads a plot spec from JSON and a summary CSV (the frozen schema written
by the experiment harness: scenario, n, p1, param_name, param_value,
stat_name, value, stderr, sample_count, bound_value), draws one solid
line per series value with x ascending, and optionally overlays the
bound_value column as a dashed line per series.  Output format follows
the output_image extension (png or svg).  Rendering is deterministic for
identical inputs under a pinned toolchain.

Usage: render.py --spec <json-path>

Spec fields: input_csv, x_column, y_column, series_column, output_image
(required); overlay_bound (default false); title, x_label, y_label
(default empty).

Exit codes: 0 success; 1 spec or data errors ("error: <field>: <reason>"
on stderr, e.g. a referenced column missing from the CSV header); 2 file
I/O or JSON format errors.
"""

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

SPEC_DEFAULTS = {"overlay_bound": False, "title": "", "x_label": "", "y_label": ""}
SPEC_REQUIRED = ("input_csv", "x_column", "y_column", "series_column", "output_image")
FORMATS = ("png", "svg")
SVG_HASHSALT = "summary-plots"


class RenderError(Exception):
    """Validation failure; field and reason feed the error line."""

    def __init__(self, field, reason, exit_code=1):
        super().__init__(f"{field}: {reason}")
        self.field = field
        self.reason = reason
        self.exit_code = exit_code


@dataclass(frozen=True)
class PlotSpec:
    input_csv: str
    x_column: str
    y_column: str
    series_column: str
    output_image: str
    overlay_bound: bool = False
    title: str = ""
    x_label: str = ""
    y_label: str = ""


def load_spec(path):
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise RenderError("io", str(exc), exit_code=2)
    except json.JSONDecodeError as exc:
        raise RenderError("format", f"bad spec JSON: {exc}", exit_code=2)
    if not isinstance(raw, dict):
        raise RenderError("spec", "top level must be a JSON object")
    unknown = sorted(set(raw) - set(SPEC_REQUIRED) - set(SPEC_DEFAULTS))
    if unknown:
        raise RenderError("spec", f"unknown field {unknown[0]}")
    missing = [f for f in SPEC_REQUIRED if f not in raw]
    if missing:
        raise RenderError("spec", f"missing field {missing[0]}")
    for field in SPEC_REQUIRED + ("title", "x_label", "y_label"):
        if field in raw and not isinstance(raw[field], str):
            raise RenderError(field, "must be a string")
    if not isinstance(raw.get("overlay_bound", False), bool):
        raise RenderError("overlay_bound", "must be true or false")
    spec = PlotSpec(**{**SPEC_DEFAULTS, **raw})
    ext = os.path.splitext(spec.output_image)[1].lstrip(".").lower()
    if ext not in FORMATS:
        raise RenderError("output_image", f"extension must be one of {FORMATS}")
    return spec


def _parse_float(text, field):
    try:
        return float(text)
    except ValueError:
        raise RenderError("data", f"column {field}: not a number: {text!r}")


def read_series(spec):
    """Rows grouped by series value: {series: [(x, y, bound-or-None), ...]}."""
    try:
        with open(spec.input_csv, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            for column in (spec.x_column, spec.y_column, spec.series_column):
                if column not in header:
                    raise RenderError("column", column)
            want_bound = spec.overlay_bound
            if want_bound and "bound_value" not in header:
                raise RenderError("column", "bound_value")
            rows = list(reader)
    except OSError as exc:
        raise RenderError("io", str(exc), exit_code=2)
    if not rows:
        raise RenderError("data", "no rows")
    groups = {}
    for row in rows:
        x = _parse_float(row[spec.x_column], spec.x_column)
        y = _parse_float(row[spec.y_column], spec.y_column)
        bound = None
        if want_bound and row["bound_value"] != "":
            bound = _parse_float(row["bound_value"], "bound_value")
        groups.setdefault(row[spec.series_column], []).append((x, y, bound))
    for points in groups.values():
        points.sort(key=lambda p: p[0])
    return groups


def _series_order(key):
    # Numeric-looking series labels sort by value, the rest by text.
    try:
        return (0, float(key), key)
    except ValueError:
        return (1, 0.0, key)


def render(spec):
    groups = read_series(spec)
    plt.rcParams["svg.hashsalt"] = SVG_HASHSALT
    fig, ax = plt.subplots(figsize=(6.4, 4.8), dpi=150)
    try:
        for key in sorted(groups, key=_series_order):
            points = groups[key]
            xs = [p[0] for p in points]
            ax.plot(xs, [p[1] for p in points], marker="o", label=key)
            if spec.overlay_bound:
                bounded = [(x, b) for x, _, b in points if b is not None]
                if bounded:
                    ax.plot(
                        [x for x, _ in bounded],
                        [b for _, b in bounded],
                        linestyle="--",
                        color=ax.get_lines()[-1].get_color(),
                    )
        ax.set_title(spec.title)
        ax.set_xlabel(spec.x_label)
        ax.set_ylabel(spec.y_label)
        ax.legend(title=spec.series_column)
        # Dropping the date keeps SVG output byte-stable across runs.
        metadata = {"Date": None} if spec.output_image.endswith(".svg") else None
        fig.savefig(spec.output_image, metadata=metadata)
    finally:
        plt.close(fig)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="render.py", description="Render a summary CSV to a line plot."
    )
    parser.add_argument("--spec", required=True, help="path to the plot-spec JSON")
    try:
        args = parser.parse_args(argv)
    except SystemExit:
        return 1
    try:
        render(load_spec(args.spec))
    except RenderError as exc:
        print(f"error: {exc.field}: {exc.reason}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
