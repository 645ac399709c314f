"""Certificate reports: the outcome record of one verification run.

Every inequality or criterion check in the library returns a
:class:`CertificateReport` whose verdict is the conjunction of its rows.
Reports serialize to a diff-stable CSV (12 significant digits, '.'
decimal separator) or, together with a :class:`RunManifest`, to a JSON
manifest of the producing run.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class Check:
    """One measured quantity with its stated comparison against a bound."""

    quantity: str
    value: float
    comparison: str  # "<=", ">=", "==", or "info"
    bound: float | None
    passed: bool


def make_check(quantity, value, comparison, bound=None, tol=0.0):
    value = float(value)
    if comparison == "info":
        return Check(quantity, value, "info", None if bound is None else float(bound), True)
    if bound is None:
        raise InvalidArgumentError(f"check {quantity!r}: comparison {comparison!r} needs a bound")
    bound = float(bound)
    if comparison == "<=":
        ok = value <= bound + tol
    elif comparison == ">=":
        ok = value >= bound - tol
    elif comparison == "==":
        ok = abs(value - bound) <= tol
    else:
        raise InvalidArgumentError(f"unknown comparison {comparison!r}")
    return Check(quantity, value, comparison, bound, bool(ok))


@dataclass
class CertificateReport:
    """Named verification outcome: inputs, measured quantities, verdict."""

    name: str
    inputs: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    runtime: float = 0.0

    @property
    def verdict(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, quantity, value, comparison="info", bound=None, tol=0.0):
        self.checks.append(make_check(quantity, value, comparison, bound, tol))
        return self.checks[-1]

    def quantity(self, name):
        for c in self.checks:
            if c.quantity == name:
                return c.value
        raise KeyError(name)

    def __getitem__(self, name):
        return self.quantity(name)

    def summary(self):
        state = "pass" if self.verdict else "FAIL"
        return f"{self.name}: {state} ({len(self.checks)} checks, {self.runtime:.3f}s)"


class timed_report:
    """Context manager filling in a report's runtime."""

    def __init__(self, name, inputs=None):
        self.report = CertificateReport(name, dict(inputs or {}))

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self.report

    def __exit__(self, exc_type, exc, tb):
        self.report.runtime = time.perf_counter() - self._t0
        return False


@dataclass
class RunManifest:
    """Record of one tool invocation and the files it produced."""

    command_line: str
    parameters: dict
    seed: int | None
    tolerances: dict
    version: str
    wall_time_s: float
    outputs: list

    def to_json(self):
        return json.dumps(
            {
                "command_line": self.command_line,
                "parameters": self.parameters,
                "seed": self.seed,
                "tolerances": self.tolerances,
                "version": self.version,
                "wall_time_s": self.wall_time_s,
                "outputs": list(self.outputs),
            },
            indent=2,
            sort_keys=True,
        )


def _fmt(x):
    return f"{float(x):.12g}"


def write_report(report, path, fmt="csv", manifest=None):
    """Write a report as CSV rows or a run manifest as JSON.

    CSV columns: quantity, value, bound, comparison, verdict.  Identical
    reports produce byte-identical files.
    """
    if fmt == "csv":
        lines = ["quantity,value,bound,comparison,verdict"]
        for c in report.checks:
            bound = "" if c.bound is None else _fmt(c.bound)
            verdict = "pass" if c.passed else "fail"
            lines.append(f"{c.quantity},{_fmt(c.value)},{bound},{c.comparison},{verdict}")
        text = "\n".join(lines) + "\n"
    elif fmt == "manifest":
        if manifest is None:
            raise InvalidArgumentError("manifest format needs a RunManifest")
        text = manifest.to_json() + "\n"
    else:
        raise InvalidArgumentError(f"unknown report format {fmt!r}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)
