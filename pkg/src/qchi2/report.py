"""Structured results of property scans."""

import json
import math
from dataclasses import dataclass, field


@dataclass
class ScanReport:
    """Result of a randomized or grid-based property scan.

    ``margins`` holds one (normalized) worst margin per trial or sample;
    a scan passes iff the smallest of them is at least ``-tolerance``.
    ``elapsed`` is wall-clock seconds and is deliberately left out of the
    JSON form so that re-runs serialize to identical bytes.
    """

    name: str
    params: dict
    margins: list
    tolerance: float
    seed: int | None = None
    errors: int = 0
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)
    per_sample: dict = field(default_factory=dict)

    @property
    def min_margin(self):
        if not self.margins:
            return math.inf
        return min(self.margins)

    @property
    def passed(self):
        return self.errors == 0 and self.min_margin >= -self.tolerance

    def __bool__(self):
        return self.passed

    def to_dict(self, verbose=False):
        out = {
            "scan": self.name,
            "params": self.params,
            "seed": self.seed,
            "trials": len(self.margins),
            "tolerance": self.tolerance,
            "min_margin": None if not self.margins else self.min_margin,
            "errors": self.errors,
            "pass": self.passed,
        }
        if self.details:
            out["details"] = self.details
        if verbose:
            out["margins"] = list(self.margins)
            out.update(self.per_sample)
        return out

    def to_json(self, verbose=False):
        return json.dumps(self.to_dict(verbose=verbose), sort_keys=True)
