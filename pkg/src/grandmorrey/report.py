"""Check results, experiment reports and their serialization.

Reports are emitted deterministically: keys keep insertion order, floats are
printed with 17 significant digits, and wall time is left out unless asked
for, so two runs of the same configuration produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import UnsupportedFormat

TOL = 1e-12
CSV_HEADER = ("name", "lhs", "rhs", "kappa", "pass")


@dataclass
class CheckResult:
    """One inequality ``lhs <= kappa * rhs`` (up to a 1e-12 relative slack)."""

    name: str
    lhs: float
    rhs: float
    kappa: float = 1.0
    passed: bool = None
    witness: dict = field(default_factory=dict)

    def __post_init__(self):
        self.lhs, self.rhs, self.kappa = float(self.lhs), float(self.rhs), float(self.kappa)
        if self.passed is None:
            bound = self.kappa * self.rhs
            self.passed = bool(self.lhs <= bound + TOL * max(1.0, abs(bound)))

    @property
    def kappa_needed(self):
        """Smallest slack that would make the check pass."""
        if self.rhs == 0:
            return 0.0 if self.lhs <= 0 else math.inf
        return self.lhs / self.rhs

    def as_dict(self):
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs,
                "kappa": self.kappa, "pass": self.passed,
                "witness": dict(self.witness)}


@dataclass
class Report:
    config: dict
    version: str
    scalars: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def check(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_dict(self, include_timing=False):
        out = {"config": self.config, "version": self.version,
               "scalars": self.scalars,
               "checks": [c.as_dict() for c in self.checks],
               "passed": self.passed}
        if include_timing:
            out["wall_time"] = self.wall_time
        return out


def _num(v):
    v = float(v)
    if math.isnan(v):
        return "NaN"
    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"
    return f"{v:.17g}"


def _json(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_json(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + _json(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit_report(report, fmt="json", include_timing=False):
    """Serialize ``report`` as ``json`` or ``csv`` bytes."""
    if fmt == "json":
        return (_json(report.as_dict(include_timing), 2, 0) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for c in report.checks:
            writer.writerow([c.name, _num(c.lhs), _num(c.rhs), _num(c.kappa),
                             "true" if c.passed else "false"])
        return buf.getvalue().encode()
    raise UnsupportedFormat(f"unsupported report format {fmt!r} (use json or csv)")


def parse_report(data):
    """Inverse of ``emit_report(..., "json")``."""
    obj = json.loads(data)
    checks = [CheckResult(c["name"], c["lhs"], c["rhs"], c["kappa"], c["pass"],
                          c.get("witness", {}))
              for c in obj["checks"]]
    return Report(obj["config"], obj["version"], obj["scalars"], checks,
                  obj.get("wall_time", 0.0))
