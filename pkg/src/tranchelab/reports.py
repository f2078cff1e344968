"""Report tables and their CSV / markdown renderings."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Any

FORMATS = ("csv", "markdown")


def format_pct(x: float | None, places: int = 1) -> str:
    """Fraction -> percent string, rounded half away from zero (0.13094 -> '13.1')."""
    if x is None:
        return ""
    q = Decimal(1).scaleb(-places)
    return str(Decimal(repr(float(x) * 100.0)).quantize(q, rounding=ROUND_HALF_UP))


def format_fixed(x: float | None, places: int) -> str:
    if x is None:
        return ""
    q = Decimal(1).scaleb(-places)
    return str(Decimal(repr(float(x))).quantize(q, rounding=ROUND_HALF_UP))


def format_kappa(k: float) -> str:
    return format(Decimal(repr(round(k, 4))).normalize(), "f")


@dataclass(frozen=True)
class Column:
    name: str
    kind: str = "str"  # str | int | pct1 | pct2 | fracN (N decimals) | kappa | money

    def render(self, value: Any) -> str:
        if value is None:
            return ""
        if self.kind == "str":
            return str(value)
        if self.kind == "int":
            return str(int(value))
        if self.kind.startswith("pct"):
            return format_pct(value, int(self.kind[3:]))
        if self.kind.startswith("frac"):
            return format_fixed(value, int(self.kind[4:]))
        if self.kind == "kappa":
            return format_kappa(value)
        if self.kind == "money":
            return str(Decimal(value).quantize(Decimal("0.01")))
        raise ValueError(f"unknown column kind {self.kind!r}")


@dataclass
class Report:
    table: str  # T1 | T3 | T4 | CDS | EL | DEAL | NATIONAL | PANEL
    columns: list[Column]
    rows: list[list[Any]] = field(default_factory=list)
    provenance: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for i, row in enumerate(self.rows):
            if len(row) != len(self.columns):
                raise ValueError(f"row {i} has {len(row)} cells, schema has {len(self.columns)}")

    def rendered_rows(self) -> list[list[str]]:
        return [[col.render(v) for col, v in zip(self.columns, row)] for row in self.rows]


def provenance_lines(report: Report) -> list[str]:
    items = {"table": report.table, **report.provenance}
    return [f"{k}={v}" for k, v in items.items()]


def emit_report(report: Report, fmt: str = "csv") -> str:
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    header = [c.name for c in report.columns]
    body = report.rendered_rows()
    if fmt == "csv":
        buf = io.StringIO()
        for line in provenance_lines(report):
            buf.write(f"# {line}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(body)
        return buf.getvalue()
    lines = [f"<!-- {line} -->" for line in provenance_lines(report)]
    lines.append("| " + " | ".join(header) + " |")
    lines.append("|" + "|".join("---" for _ in header) + "|")
    lines.extend("| " + " | ".join(row) + " |" for row in body)
    return "\n".join(lines) + "\n"


def parse_csv_report(text: str) -> tuple[dict[str, str], list[str], list[list[str]]]:
    """Read back an emitted CSV: (provenance, header, rows)."""
    prov: dict[str, str] = {}
    data_lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            prov[key] = value
        elif line:
            data_lines.append(line)
    rows = list(csv.reader(data_lines))
    if not rows:
        return prov, [], []
    return prov, rows[0], rows[1:]


def render_deal(sheet, provenance: dict[str, str] | None = None) -> str:
    """Two-column text balance sheet of the securitization vehicle."""
    money = Column("amount", "money").render
    assets = [("Anchor sovereign bonds (China)", sheet.china_purchase),
              ("Debtor states' sovereign bonds", sheet.debtor_purchase)]
    liabs = [("Senior bonds", sheet.senior_issued), ("Junior bonds", sheet.junior_issued)]
    left = [f"{name:<32}{money(v):>20}" for name, v in assets]
    right = [f"{name:<14}{money(v):>20}" for name, v in liabs]
    width = len(left[0])
    out = [f"# {k}={v}" for k, v in {"table": "DEAL", **(provenance or {})}.items()]
    out.append(f"Securitization vehicle (subordination {format_kappa(float(sheet.subordination))})")
    out.append(f"{'Assets':<{width}} | Liabilities")
    out.append("-" * width + "-+-" + "-" * len(right[0]))
    for lft, rgt in zip(left, right):
        out.append(f"{lft} | {rgt}")
    out.append("-" * width + "-+-" + "-" * len(right[0]))
    out.append(f"{'Total':<32}{money(sheet.total_assets):>20} | "
               f"{'Total':<14}{money(sheet.total_liabilities):>20}")
    return "\n".join(out) + "\n"


def deal_report(sheet, provenance: dict[str, str] | None = None) -> Report:
    money = Column("amount", "money").render
    rows = [["debtor_purchase", money(sheet.debtor_purchase)],
            ["china_purchase", money(sheet.china_purchase)],
            ["senior_issued", money(sheet.senior_issued)],
            ["junior_issued", money(sheet.junior_issued)],
            ["subordination", format_kappa(float(sheet.subordination))]]
    return Report("DEAL", [Column("item"), Column("amount")], rows, dict(provenance or {}))
