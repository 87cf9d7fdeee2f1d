"""Rendering convergence reports as CSV, Markdown and JSON."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from .analysis import ConvergenceReport

__all__ = [
    "Cell",
    "OutputTable",
    "fmt_sci",
    "report_csv",
    "report_markdown",
    "report_json",
    "REFERENCE_TABLE1",
    "REFERENCE_TABLE2",
    "reference_value",
]


def fmt_sci(value):
    """Three significant digits in scientific notation, e.g. ``6.09e-07``."""
    if value is None:
        return "-"
    return f"{value:.2e}"


def fmt_full(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class Cell:
    value: object
    display: str = "text"  # text | sci | order

    def render(self):
        if self.display == "sci":
            return fmt_sci(self.value)
        if self.display == "order" and isinstance(self.value, float):
            return f"{self.value:.2f}"
        return "" if self.value is None else str(self.value)


@dataclass
class OutputTable:
    caption: str
    headers: list
    rows: list = field(default_factory=list)
    footnotes: list = field(default_factory=list)

    def add_row(self, cells):
        if len(cells) != len(self.headers):
            raise ValueError(f"row has {len(cells)} cells, table has {len(self.headers)} columns")
        self.rows.append(cells)

    def to_markdown(self):
        lines = [f"**{self.caption}**", ""]
        lines.append("| " + " | ".join(self.headers) + " |")
        lines.append("|" + "|".join("---" for _ in self.headers) + "|")
        for row in self.rows:
            lines.append("| " + " | ".join(c.render() for c in row) + " |")
        if self.footnotes:
            lines.append("")
            lines.extend(self.footnotes)
        return "\n".join(lines) + "\n"


# Reference errors of the fourth-order scheme for side-by-side comparison.
# Table 1 keys are (eps label, N); Table 2 keys are (eps, N).
REFERENCE_TABLE1 = {
    ("1/16", 16): 6.09e-7, ("1/16", 32): 0.780e-8, ("1/16", 64): 1.32e-7,
    ("1/16", 128): 9.98e-9, ("1/16", 256): 1.19e-15,
    ("1/32", 16): 1.12e-6, ("1/32", 32): 1.24e-8, ("1/32", 64): 8.87e-8,
    ("1/32", 128): 6.52e-9, ("1/32", 256): 4.62e-15,
    ("1/64", 16): 3.54e-6, ("1/64", 32): 2.78e-7, ("1/64", 64): 7.89e-7,
    ("1/64", 128): 2.54e-8, ("1/64", 256): 9.14e-10,
    ("1/128", 16): 2.27e-5, ("1/128", 32): 1.23e-7, ("1/128", 64): 5.41e-7,
    ("1/128", 128): 5.55e-8, ("1/128", 256): 4.78e-9,
}  # fmt: skip

REFERENCE_TABLE2 = {
    (1e-4, 16): 0.78e-15, (1e-4, 32): 1.28e-15,
    (1e-5, 16): 0.76e-15, (1e-5, 32): 1.36e-15,
    (1e-6, 16): 0.87e-15, (1e-6, 32): 1.36e-15,
    (1e-7, 16): 0.91e-15, (1e-7, 32): 1.49e-15,
    (1e-8, 16): 0.65e-15, (1e-8, 32): 1.65e-15,
    (1e-9, 16): 2.71e-15, (1e-9, 32): 3.71e-15,
}  # fmt: skip


def reference_value(table, record):
    if table == "table1":
        return REFERENCE_TABLE1.get((record.label, record.n))
    if table == "table2":
        for (eps, n), value in REFERENCE_TABLE2.items():
            if n == record.n and math.isclose(eps, record.epsilon, rel_tol=1e-12):
                return value
    return None


def reference_match(ours, ref):
    """Same order of magnitude: within a factor of ten either way."""
    if ours is None or ref is None:
        return None
    if ours == 0.0:
        return ref < 1e-14
    return abs(math.log10(ours / ref)) <= 1.0


CSV_COLUMNS = [
    "problem",
    "scheme",
    "eps_label",
    "epsilon",
    "n",
    "max_abs_error",
    "order",
    "order_status",
    "dominant",
    "lambda_sum",
    "status",
]


def report_csv(report: ConvergenceReport, reference_table=None):
    """One row per (eps, n) cell at full precision.

    ``order`` is the observed order from the previous ``n`` in the row, empty
    for the first column or when the estimate is saturated or failed.
    """
    columns = list(CSV_COLUMNS)
    if reference_table:
        columns += ["reference_value", "reference_match"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    scheme = report.params.describe()
    for rec in report.records:
        o = report.order_into(rec.epsilon, rec.n)
        row = [
            report.problem,
            scheme,
            rec.label,
            fmt_full(rec.epsilon),
            rec.n,
            fmt_full(rec.max_abs_error),
            fmt_full(o.order) if o is not None else "",
            o.status if o is not None else "",
            fmt_full(rec.dominant),
            fmt_full(rec.lambda_sum),
            rec.status if not rec.failed else f"failed: {rec.message}",
        ]
        if reference_table:
            pv = reference_value(reference_table, rec)
            match = reference_match(rec.max_abs_error, pv)
            row += [fmt_full(pv), "" if match is None else fmt_full(match)]
        writer.writerow(row)
    return buf.getvalue()


def convergence_table(report: ConvergenceReport, caption, reference_table=None):
    headers = ["ε"] + [f"N={n}" for n in report.n_list]
    pairs = list(zip(report.n_list, report.n_list[1:]))
    headers += [f"order {a}→{b}" for a, b in pairs]
    table = OutputTable(caption, headers)
    mismatched = False
    for eps, label in zip(report.eps_list, report.eps_labels):
        cells = [Cell(label)]
        for n in report.n_list:
            rec = report.cell(eps, n)
            if rec.failed:
                cells.append(Cell("failed"))
                continue
            cell = Cell(rec.max_abs_error, "sci")
            if reference_table:
                match = reference_match(rec.max_abs_error, reference_value(reference_table, rec))
                if match is False:
                    cell = Cell(fmt_sci(rec.max_abs_error) + " †")
                    mismatched = True
            cells.append(cell)
        for _, b in pairs:
            o = report.order_into(eps, b)
            if o is None or o.status == "failed":
                cells.append(Cell("-"))
            elif o.status == "saturated":
                cells.append(Cell("sat."))
            else:
                cells.append(Cell(o.order, "order"))
        table.add_row(cells)
    if reference_table and mismatched:
        table.footnotes.append(
            "† differs by more than a factor of 10 from the reference value."
        )
    if any(o.status == "saturated" for o in report.orders):
        table.footnotes.append("sat. = errors at roundoff level, no order estimate.")
    return table


def report_markdown(report: ConvergenceReport, caption=None, reference_table=None):
    if caption is None:
        caption = (
            f"Maximum absolute errors, {report.problem}, scheme {report.params.describe()} "
            f"(λ1={report.params.lambda1!r}, λ2={report.params.lambda2!r})"
        )
    return convergence_table(report, caption, reference_table).to_markdown()


def report_json(report: ConvergenceReport, reference_table=None):
    data = report.as_dict()
    if reference_table:
        for rec, out in zip(report.records, data["records"]):
            out["reference_value"] = reference_value(reference_table, rec)
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
