"""CSV table + JSON metadata sidecar, written atomically and byte-stably."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

__all__ = ["format_value", "render_csv", "parse_csv", "render_metadata", "emit_report", "summary_lines"]


def format_value(v) -> str:
    """Decimal text: floats with 17 significant digits (exact round trip)."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(v)


def render_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    w.writerow(header)
    for row in rows:
        w.writerow([format_value(v) for v in row])
    return buf.getvalue()


def _parse_cell(s: str):
    if s in ("true", "false"):
        return s == "true"
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def parse_csv(text: str):
    """(header, rows) with numbers converted back to int/float."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    return header, [[_parse_cell(c) for c in row] for row in reader]


def _jsonable(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else format_value(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def render_metadata(meta: dict) -> str:
    return json.dumps(_jsonable(meta), sort_keys=True, indent=2) + "\n"


def emit_report(out_dir, stem: str, header, rows, meta: dict):
    """Write ``<stem>.csv`` and ``<stem>.json`` into ``out_dir``.

    Both files are staged as temporaries in the same directory and renamed
    only once both are complete, so a failure leaves no partial output.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("refusing to emit an empty table")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    payloads = {out / f"{stem}.csv": render_csv(header, rows),
                out / f"{stem}.json": render_metadata(meta)}
    staged = []
    try:
        for final, text in payloads.items():
            fd, tmp = tempfile.mkstemp(dir=out, prefix=f".{stem}.", suffix=".tmp")
            staged.append((tmp, final))
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        for tmp, final in staged:
            os.replace(tmp, final)
    except BaseException:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)
        raise
    return [final for _, final in staged]


def summary_lines(header, rows, max_rows: int = 10):
    lines = ["  ".join(f"{h:>14s}" for h in header)]
    for row in rows[:max_rows]:
        cells = []
        for v in row:
            cells.append(f"{v:>14.6g}" if isinstance(v, float) else f"{format_value(v):>14s}")
        lines.append("  ".join(cells))
    if len(rows) > max_rows:
        lines.append(f"... ({len(rows) - max_rows} more rows)")
    return lines
