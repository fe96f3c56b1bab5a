"""Per-iteration telemetry records with round-trip-exact CSV/JSON export."""

import csv
import dataclasses
import io
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class TraceRecord:
    """One accelerated-iteration row.

    Counters are cumulative over the run; ls_passes/skipped_9b describe this
    step's line search so per-pass oracle charges reconcile exactly against
    the counter columns.  elapsed_s is 0.0 unless timing was enabled (keeps
    exports byte-identical across reruns).
    """

    outer_t: int
    sigma_index_j: int
    inner_k: int
    sigma: float
    A: float
    M: float
    g_map_norm: float
    phi_val: float
    f_evals: int
    grad_evals: int
    prox_evals: int
    ls_passes: int
    skipped_9b: int
    elapsed_s: float


FIELDS = [f.name for f in dataclasses.fields(TraceRecord)]
_TYPES = {f.name: f.type for f in dataclasses.fields(TraceRecord)}
_INT_FIELDS = {name for name, t in _TYPES.items() if t in (int, "int")}


def _fmt(name, value):
    if name in _INT_FIELDS:
        return str(int(value))
    v = float(value)
    if not math.isfinite(v):
        raise ValueError(f"non-finite value in trace column {name}: {value!r}")
    return format(v, ".17g")


def _parse(name, text):
    return int(text) if name in _INT_FIELDS else float(text)


def dumps_csv(records):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELDS)
    for rec in records:
        writer.writerow([_fmt(n, getattr(rec, n)) for n in FIELDS])
    return buf.getvalue()


def dumps_json(records):
    # Hand-rolled so floats carry 17 significant digits (round-trip exact);
    # the stdlib encoder does not expose float formatting.
    rows = []
    for rec in records:
        cells = ", ".join(f'"{n}": {_fmt(n, getattr(rec, n))}' for n in FIELDS)
        rows.append("  {" + cells + "}")
    if not rows:
        return "[]\n"
    return "[\n" + ",\n".join(rows) + "\n]\n"


def export_trace(records, path, fmt="csv"):
    """Write records to path as CSV (header + rows) or a JSON array."""
    if fmt == "csv":
        text = dumps_csv(records)
    elif fmt == "json":
        text = dumps_json(records)
    else:
        raise ValueError(f"unknown trace format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def load_trace(path, fmt=None):
    """Read a trace back into TraceRecord objects (format from extension)."""
    if fmt is None:
        fmt = "json" if str(path).endswith(".json") else "csv"
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    if fmt == "json":
        import json

        rows = json.loads(text)
        return [TraceRecord(**{n: _parse(n, str(row[n])) for n in FIELDS}) for row in rows]
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != FIELDS:
        raise ValueError(f"unexpected trace header: {header}")
    out = []
    for row in reader:
        out.append(TraceRecord(**{n: _parse(n, cell) for n, cell in zip(FIELDS, row)}))
    return out
