"""Named verification results with a stable, machine-readable schema."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

SCHEMA_VERSION = 1


@dataclass
class CheckReport:
    """Result of one verification run.

    pass rule: min_margin > tolerance (when a margin applies) and
    max_residual <= residual_tolerance (when a residual applies).
    ``note`` records the identity or condition the check certifies, so a
    report is interpretable on its own.  ``rows`` holds per-grid-point
    results (used for polynomial sweeps and endpoint comparisons).
    """

    name: str
    n_samples: int
    min_margin: float | None
    max_residual: float | None
    tolerance: float
    passed: bool
    seed: int
    wall_time_ms: float
    note: str = ""
    residual_tolerance: float | None = None
    rows: list = field(default_factory=list)
    details: list = field(default_factory=list)

    def to_dict(self):
        d = {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "n_samples": self.n_samples,
            "min_margin": self.min_margin,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "residual_tolerance": self.residual_tolerance,
            "passed": bool(self.passed),
            "seed": self.seed,
            "wall_time_ms": self.wall_time_ms,
            "note": self.note,
        }
        if self.rows:
            d["rows"] = self.rows
        if self.details:
            d["details"] = [r.to_dict() for r in self.details]
        return d


class ReportTimer:
    """Context helper measuring wall time for a report."""

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = (time.perf_counter() - self.t0) * 1000.0
        return False


def make_report(name, *, n_samples, tolerance, seed, note="",
                min_margin=None, max_residual=None, residual_tolerance=None,
                wall_time_ms=0.0, rows=None, details=None, passed=None):
    """Assemble a report, deriving the pass flag from the margins unless
    explicitly overridden."""
    if passed is None:
        passed = True
        if min_margin is not None:
            passed = passed and (min_margin > tolerance)
        if max_residual is not None:
            rtol = tolerance if residual_tolerance is None else residual_tolerance
            passed = passed and (max_residual <= rtol)
    report = CheckReport(
        name=name,
        n_samples=int(n_samples),
        min_margin=None if min_margin is None else float(min_margin),
        max_residual=None if max_residual is None else float(max_residual),
        tolerance=float(tolerance),
        passed=bool(passed),
        seed=int(seed),
        wall_time_ms=float(wall_time_ms),
        note=note,
        residual_tolerance=(None if residual_tolerance is None
                            else float(residual_tolerance)),
        rows=rows or [],
        details=details or [],
    )
    return report


def merge_reports(name, reports, seed=0, note=""):
    """Reduce sub-reports: margins by min, residuals by max, pass by all."""
    margins = [r.min_margin for r in reports if r.min_margin is not None]
    residuals = [r.max_residual for r in reports if r.max_residual is not None]
    return CheckReport(
        name=name,
        n_samples=sum(r.n_samples for r in reports),
        min_margin=min(margins) if margins else None,
        max_residual=max(residuals) if residuals else None,
        tolerance=min(r.tolerance for r in reports),
        passed=all(r.passed for r in reports),
        seed=seed,
        wall_time_ms=sum(r.wall_time_ms for r in reports),
        note=note,
        details=list(reports),
    )
