"""Report records and byte-stable CSV/JSON serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

SUITE_VERSION = "1"

#: significant digits for every float written to a report
FLOAT_DIGITS = 12


@dataclass
class CountReport:
    """Exact count of one congruence/census experiment against its main term."""

    label: str
    parameters: dict[str, Any]
    exact_count: int
    main_term: float
    paper_error_bound: float
    flags: tuple[str, ...] = ()
    extras: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.exact_count < 0:
            raise ValueError("exact_count must be nonnegative")

    @property
    def relative_deviation(self) -> float:
        return abs(self.exact_count - self.main_term) / max(self.main_term, 1.0)

    @property
    def degenerate(self) -> bool:
        return "degenerate window" in self.flags

    def as_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "parameters": dict(self.parameters),
            "exact_count": self.exact_count,
            "main_term": self.main_term,
            "paper_error_bound": self.paper_error_bound,
            "relative_deviation": self.relative_deviation,
            "flags": list(self.flags),
            "extras": dict(self.extras),
        }


def format_value(x: Any) -> Any:
    """Normalise a value for output: floats to 12 significant digits."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return float(f"{x:.{FLOAT_DIGITS}g}")
    if isinstance(x, complex):
        return [format_value(x.real), format_value(x.imag)]
    if isinstance(x, dict):
        return {str(k): format_value(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [format_value(v) for v in x]
    if hasattr(x, "item"):  # numpy scalar
        return format_value(x.item())
    return x


def _csv_cell(x: Any) -> str:
    x = format_value(x)
    if isinstance(x, float):
        return f"{x:.{FLOAT_DIGITS}g}"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (list, dict)):
        return json.dumps(x, sort_keys=True, separators=(",", ":"))
    return str(x)


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def to_json(config: dict[str, Any], results: list[Any]) -> str:
    doc = {
        "config": format_value(config),
        "results": format_value(results),
        "suite_version": SUITE_VERSION,
    }
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def count_reports_csv(reports: Sequence[CountReport]) -> str:
    header = ("label", "parameters", "exact_count", "main_term", "paper_error_bound", "relative_deviation", "flags")
    rows = [
        (r.label, r.parameters, r.exact_count, r.main_term, r.paper_error_bound, r.relative_deviation, ";".join(r.flags))
        for r in reports
    ]
    return to_csv(header, rows)
