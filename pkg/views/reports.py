"""
Plain-text rendering of check results

Everything here is deterministic: no timestamps, no timings, rows in input order.
"""

from typing import Any, Dict, List, Optional, Sequence
import pandas as pd
from models.categories import FinCat
from models.covers import Cone
from models.modules import FgMod
from models.reports import Report
from models.systems import Verification


def status(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def table(rows: Sequence[Dict[str, Any]], columns: Optional[List[str]] = None) -> str:
    """
    Render rows as a fixed-width table
    :param rows: one dict per row
    :param columns: column order; defaults to the keys of the first row
    :return: the table text, or "(none)" when there are no rows
    """
    if not rows:
        return "(none)"
    cells = [{key: "" if value is None else str(value) for key, value in row.items()} for row in rows]
    df = pd.DataFrame(cells, columns=columns)
    return df.to_string(index=False)


def violations(report: Report) -> str:
    rows = [{"kind": v.kind, "message": v.message, "witness": v.witness} for v in report.violations]
    return table(rows, ["kind", "message", "witness"])


def render_report(report: Report, title: str) -> str:
    """
    A title line with the verdict, the notes, then the violations if any
    """
    lines = [f"{title}: {status(report.ok)}"]
    if report.subject:
        lines.append(f"subject: {report.subject}")
    lines.extend(f"note: {note}" for note in report.notes)
    if not report.ok:
        lines.append("")
        lines.append(violations(report))
    return "\n".join(lines) + "\n"


def render_verification(verification: Verification, title: str) -> str:
    """
    One PASS or FAIL line per degree followed by the cohomology table
    """
    lines = [f"{title}: {status(verification.ok)}"]
    for row in verification.degrees:
        if row.identity is not None:
            line = f"degree {row.degree}: d∘h + h∘d = id {status(row.identity)}"
            lines.append(line + (f" ({row.witness})" if row.witness else ""))
    if verification.degrees:
        lines.append("")
        rows = [
            {
                "n": row.degree,
                "H^n": row.cohomology,
                "vanishes": "yes" if row.vanishes else "no",
                "asserted": "yes" if row.degree > 0 else "no",
            }
            for row in verification.degrees
        ]
        lines.append(table(rows))
    if not verification.ok:
        lines.append("")
        lines.append(violations(verification.report))
    return "\n".join(lines) + "\n"


def render_cohomology(name: str, groups: Dict[int, FgMod]) -> str:
    rows = [{"n": n, "H^n": module.describe()} for n, module in sorted(groups.items())]
    return f"cohomology of {name}\n\n{table(rows)}\n"


def render_cone(cat: FinCat, cone: Cone, title: str) -> str:
    """
    The apex terms with both legs named by their labels
    """
    rows = [
        {"term": i, "apex": obj, "left leg": cat.label(left), "right leg": cat.label(right)}
        for i, (obj, left, right) in enumerate(zip(cone.apex.terms, cone.left.components, cone.right.components))
    ]
    return f"{title}: {len(rows)} terms\n\n{table(rows)}\n"


def render_partition(cat: FinCat, rows: List[Dict[str, Any]]) -> str:
    """
    Summary of the cover and disjointness check, one line per (Q, R, T, α)
    """
    shown = [
        {
            "Q": row["Q"],
            "R": row["R"],
            "T": row["T"],
            "alpha": cat.label(row["alpha"]),
            "classes": row["classes"],
            "sizes": " ".join(str(s) for s in row["sizes"]),
            "ok": "yes" if not row["uncovered"] and not row["overlaps"] else "no",
        }
        for row in rows
    ]
    return table(shown)
