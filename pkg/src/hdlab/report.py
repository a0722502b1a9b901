"""Experiment reports: per-replicate values, summary stats, CSV/JSON emission.

File formats are frozen so that reruns are byte-comparable:

* ``report.json``   -- name, tool_version, seed, params, derived,
                       per_replicate, summary (keys sorted, repr floats)
* ``replicates.csv``-- header ``replicate,value``
* ``hist.csv``      -- header ``bin_left,bin_right,count``

Quantiles use linear interpolation between order statistics (numpy's
default "linear" / Hyndman-Fan type 7); the standard deviation uses the
n-1 denominator and is defined as 0.0 for fewer than two values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__


@dataclass(frozen=True)
class Summary:
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float
    sd: float

    @classmethod
    def from_values(cls, values) -> "Summary":
        v = np.asarray(values, dtype=float)
        if v.size == 0:
            raise ValueError("cannot summarize an empty value sequence")
        qs = np.quantile(v, [0.0, 0.25, 0.5, 0.75, 1.0], method="linear")
        sd = float(np.std(v, ddof=1)) if v.size > 1 else 0.0
        return cls(float(qs[0]), float(qs[1]), float(qs[2]), float(qs[3]),
                   float(qs[4]), float(np.mean(v)), sd)

    @property
    def iqr(self) -> float:
        return self.q3 - self.q1

    def as_dict(self) -> dict[str, float]:
        return {"min": self.min, "q1": self.q1, "median": self.median,
                "q3": self.q3, "max": self.max, "mean": self.mean, "sd": self.sd}


@dataclass
class ExperimentReport:
    """Parameters, seed, and per-replicate results of one Monte Carlo run."""

    name: str
    params: dict[str, Any]
    seed: int
    per_replicate: list[float]
    summary: Summary = field(init=False)
    derived: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.summary = Summary.from_values(self.per_replicate)

    def histogram(self, bins: int = 20) -> list[tuple[float, float, int]]:
        counts, edges = np.histogram(np.asarray(self.per_replicate, dtype=float), bins=bins)
        return [(float(edges[i]), float(edges[i + 1]), int(counts[i]))
                for i in range(len(counts))]

    def to_json(self) -> str:
        doc = {
            "name": self.name,
            "tool_version": __version__,
            "seed": self.seed,
            "params": self.params,
            "derived": self.derived,
            "per_replicate": list(map(float, self.per_replicate)),
            "summary": self.summary.as_dict(),
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    def write_json(self, path) -> None:
        Path(path).write_text(self.to_json())

    def write_replicates_csv(self, path) -> None:
        lines = ["replicate,value"]
        lines += [f"{i},{v!r}" for i, v in enumerate(self.per_replicate)]
        Path(path).write_text("\n".join(lines) + "\n")

    def write_hist_csv(self, path, bins: int = 20) -> None:
        lines = ["bin_left,bin_right,count"]
        lines += [f"{lo!r},{hi!r},{c}" for lo, hi, c in self.histogram(bins)]
        Path(path).write_text("\n".join(lines) + "\n")


def json_diff(a: Any, b: Any, path: str = "") -> str | None:
    """First differing field between two parsed JSON documents, or None."""
    if type(a) is not type(b):
        return path or "<root>"
    if isinstance(a, dict):
        for key in sorted(set(a) | set(b)):
            if key not in a or key not in b:
                return f"{path}.{key}" if path else key
            sub = json_diff(a[key], b[key], f"{path}.{key}" if path else key)
            if sub is not None:
                return sub
        return None
    if isinstance(a, list):
        if len(a) != len(b):
            return f"{path}.length" if path else "length"
        for i, (x, y) in enumerate(zip(a, b)):
            sub = json_diff(x, y, f"{path}[{i}]")
            if sub is not None:
                return sub
        return None
    return None if a == b else (path or "<root>")


def compare_report_files(baseline: Path, candidate: Path,
                         ignore: tuple[str, ...] = ("tool_version",)) -> str | None:
    """Compare two JSON reports modulo the ignored top-level fields.

    Returns the first differing field path, or None when identical.
    """
    docs = []
    for p in (baseline, candidate):
        doc = json.loads(Path(p).read_text())
        if isinstance(doc, dict):
            for key in ignore:
                doc.pop(key, None)
        docs.append(doc)
    return json_diff(docs[0], docs[1])
