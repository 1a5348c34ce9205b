"""Deterministic CSV/JSON writers shared by the command-line tools."""

from __future__ import annotations

import csv
import io
import json
import math

from . import __version__

SIG_DIGITS = 12


def fmt_float(x) -> str:
    """Shortest representation that round-trips, capped at 12 significant digits."""
    x = float(x)
    if not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    for p in range(1, SIG_DIGITS + 1):
        s = f"{x:.{p}g}"
        if float(s) == x:
            return s
    return f"{x:.{SIG_DIGITS}g}"


def fmt_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def _json_value(v):
    if isinstance(v, float):
        return float(fmt_float(v)) if math.isfinite(v) else None
    return v


def make_meta(command: str, config: dict, extra: dict | None = None) -> dict:
    meta = {"tool": "lowlying", "version": __version__, "command": command, "config": config}
    if extra:
        meta.update(extra)
    return meta


def render(rows: list[dict], fields, meta: dict, fmt: str = "csv") -> str:
    """CSV with a '#'-prefixed metadata block, or JSON {meta, rows}."""
    if fmt == "json":
        doc = {"meta": meta, "rows": [{k: _json_value(r[k]) for k in fields} for r in rows]}
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    for key, val in meta.items():
        if isinstance(val, dict):
            val = json.dumps(val, sort_keys=True)
        buf.write(f"# {key}: {val}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([fmt_value(r[k]) for k in fields])
    return buf.getvalue()
