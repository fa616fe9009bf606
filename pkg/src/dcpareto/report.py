"""Machine-readable report tables (CSV, JSON, Markdown)."""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field
from datetime import date


class TableKind(enum.Enum):
    AIC_TABLE = "AicTable"
    LRT_TABLE = "LrtTable"
    ALPHA_TRACE = "AlphaTrace"
    ECDF_OVERLAY = "EcdfOverlay"
    ZERO_PROB = "ZeroProb"
    FIT = "Fit"


class OutFormat(enum.Enum):
    CSV = "csv"
    JSON = "json"
    MARKDOWN = "markdown"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    if isinstance(value, date):
        return value.isoformat()
    return str(value)


def _json_value(value):
    if isinstance(value, date):
        return value.isoformat()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_value(v) for k, v in value.items()}
    return value


@dataclass
class ReportTable:
    kind: TableKind
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)

    def add(self, **row):
        self.rows.append(row)

    def render(self, fmt: OutFormat | str = OutFormat.CSV) -> str:
        fmt = OutFormat(fmt)
        if fmt is OutFormat.CSV:
            buf = io.StringIO()
            for c in self.comments:
                buf.write(f"# {c}\n")
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(self.columns)
            for row in self.rows:
                writer.writerow([_cell(row.get(c)) for c in self.columns])
            return buf.getvalue()
        if fmt is OutFormat.JSON:
            payload = {
                "kind": self.kind.value,
                "comments": self.comments,
                "rows": [{c: _json_value(row.get(c)) for c in self.columns} for row in self.rows],
            }
            return json.dumps(payload, indent=2) + "\n"
        lines = [f"<!-- {c} -->" for c in self.comments]
        lines.append("| " + " | ".join(self.columns) + " |")
        lines.append("|" + "---|" * len(self.columns))
        for row in self.rows:
            lines.append("| " + " | ".join(_cell(row.get(c)) for c in self.columns) + " |")
        return "\n".join(lines) + "\n"
