"""Deterministic serialisation: 17-significant-digit JSON, grid CSV, run records.

CSV layout (one row per grid node)::

    node_re,node_im,weight,value_re,value_im

The JSON envelope next to it records ``domain``, ``law``, ``N`` (node count),
``checksum`` and the grid parameters, plus whatever metadata the producer adds.
Report files omit wall-clock time so identical runs give identical bytes.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from dataclasses import dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .grids import Grid, SampledFunction

SCHEMA_VERSION = "1"

try:
    TOOL_VERSION = metadata.version("artifact")
except metadata.PackageNotFoundError:  # running from a source tree
    TOOL_VERSION = "0.1.0"


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    if x == 0:
        return "0.0"
    return format(x, ".17g")


def _plain(obj: Any) -> Any:
    """Convert numpy and complex values to JSON-ready Python objects."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if hasattr(obj, "to_dict"):
        return _plain(obj.to_dict())
    if hasattr(obj, "to_json"):
        return _plain(obj.to_json())
    return obj


def _emit(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_emit(v, indent, level + 1)}" for k, v in sorted(obj.items())]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_emit(v, indent, level) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _emit(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, int):
        return str(obj)
    return json.dumps(str(obj))


def dumps(obj: Any, indent: int = 2) -> str:
    """JSON text with sorted keys and every float at 17 significant digits."""
    return _emit(_plain(obj), indent, 0) + "\n"


def envelope(grid: Grid, **meta) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "domain": grid.domain,
        "law": grid.law,
        "N": len(grid),
        "checksum": grid.checksum,
        "params": dict(grid.params),
        **meta,
    }


def grid_csv(f: SampledFunction) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["node_re", "node_im", "weight", "value_re", "value_im"])
    for z, wt, v in zip(f.grid.nodes, f.grid.weights, f.values):
        w.writerow([format(float(z.real), ".17g"), format(float(z.imag), ".17g"), format(float(wt), ".17g"),
                    format(float(v.real), ".17g"), format(float(v.imag), ".17g")])
    return buf.getvalue()


def read_grid_csv(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    col = lambda k: np.array([float(r[k]) for r in rows])  # noqa: E731
    return {
        "nodes": col("node_re") + 1j * col("node_im"),
        "weights": col("weight"),
        "values": col("value_re") + 1j * col("value_im"),
    }


def sampled_json(f: SampledFunction, **meta) -> dict:
    return {
        **envelope(f.grid, **meta),
        "data": {
            "node_re": f.grid.nodes.real, "node_im": f.grid.nodes.imag, "weight": f.grid.weights,
            "value_re": f.values.real, "value_im": f.values.imag,
        },
    }


def write_sampled(f: SampledFunction, out: Path, fmt: str = "csv", **meta) -> list[Path]:
    """Write ``out`` (CSV or JSON); CSV output gets an ``.json`` envelope beside it."""
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        out.write_text(grid_csv(f))
        env = out.with_suffix(out.suffix + ".json") if out.suffix != ".json" else out.with_suffix(".envelope.json")
        env.write_text(dumps(envelope(f.grid, **meta)))
        return [out, env]
    if fmt == "json":
        out.write_text(dumps(sampled_json(f, **meta)))
        return [out]
    raise ValueError(f"unknown format {fmt!r}")


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    ok: Optional[bool] = None
    detail: Any = None

    def __post_init__(self):
        if self.ok is None:
            self.ok = bool(np.isfinite(self.value) and self.value <= self.tolerance)
        self.value = float(self.value)

    def to_dict(self) -> dict:
        d = {"name": self.name, "value": self.value, "tolerance": self.tolerance, "ok": self.ok}
        if self.detail is not None:
            d["detail"] = self.detail
        return d


@dataclass
class RunRecord:
    command: str
    parameters: dict
    grid_checksums: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    residuals: list = field(default_factory=list)
    wall_time: float = 0.0  # kept in memory only; files stay byte-stable
    version: str = TOOL_VERSION

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.residuals)

    def first_failure(self) -> Optional[Check]:
        return next((c for c in self.residuals if not c.ok), None)

    def to_dict(self) -> dict:
        d = {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "parameters": self.parameters,
            "grid_checksums": self.grid_checksums,
            "outputs": self.outputs,
            "residuals": [c.to_dict() for c in self.residuals],
            "ok": self.ok,
            "version": self.version,
        }
        bad = self.first_failure()
        if bad is not None:
            d["counterexample"] = bad.to_dict()
        return d
