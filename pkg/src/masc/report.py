"""Baseline differencing, kill-matrix computation and report emission.

A mutant is killed only by a *new* finding: anything with a baseline
counterpart (same rule, same file, lines within the slack) is subtracted
first.  Three match modes trade attribution strictness for recall:
strict-span intersects finding and mutant spans, file-level only needs
the same file, any-new-finding accepts any new finding (legal only in
per-mutant-copy seeding, where the whole app differs by one mutant).

Survived mutants are flaw *candidates*; confirming a detector flaw
remains a human call.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .errors import ModeMisuse
from .sarif import Finding
from .seeding import (
    STATUS_ERROR,
    STATUS_KILLED,
    STATUS_PENDING,
    STATUS_SKIPPED,
    STATUS_SURVIVED,
    MutantRecord,
)

MODE_STRICT = "strict-span"
MODE_FILE = "file-level"
MODE_ANY = "any-new-finding"

CSV_COLUMNS = ("id", "operator", "scope", "file", "start", "end", "status", "findings")


@dataclass
class KillMatrix:
    records: list[MutantRecord]
    detector: str = ""
    config_hash: str = ""
    started: str = ""
    finished: str = ""
    stop_reason: str = "completed"

    def operator_totals(self) -> list[dict]:
        order: list[str] = []
        buckets: dict[str, dict] = {}
        for record in self.records:
            if record.operator not in buckets:
                order.append(record.operator)
                buckets[record.operator] = {
                    "id": record.operator,
                    "total": 0,
                    "killed": 0,
                    "survived": 0,
                    "error": 0,
                    "skipped": 0,
                }
            agg = buckets[record.operator]
            agg["total"] += 1
            if record.status == STATUS_KILLED:
                agg["killed"] += 1
            elif record.status == STATUS_SURVIVED:
                agg["survived"] += 1
            elif record.status == STATUS_ERROR:
                agg["error"] += 1
            else:
                agg["skipped"] += 1
        return [buckets[op] for op in order]

    def survivors(self) -> list[MutantRecord]:
        return [r for r in self.records if r.status == STATUS_SURVIVED]


def _finding_dict(finding: Finding) -> dict:
    return {
        "ruleId": finding.rule_id,
        "message": finding.message,
        "file": finding.file_uri,
        "startLine": finding.start_line,
        "endLine": finding.end_line,
        "level": finding.level,
    }


def diff_baseline(
    baseline: list[Finding], mutated: list[Finding], slack: int = 2
) -> list[Finding]:
    """Mutated-run findings with no baseline counterpart.

    Counterpart: same ruleId and file, start lines within `slack`
    (tolerates code shifted by the injection).
    """
    new: list[Finding] = []
    for finding in mutated:
        matched = any(
            base.rule_id == finding.rule_id
            and base.file_uri == finding.file_uri
            and abs(base.start_line - finding.start_line) <= slack
            for base in baseline
        )
        if not matched:
            new.append(finding)
    return new


def _spans_intersect(f: Finding, record: MutantRecord, slack: int) -> bool:
    lo = record.start_line - slack
    hi = record.end_line + slack
    return f.start_line <= hi and f.end_line >= lo


def match_findings(
    new_findings: list[Finding],
    records: list[MutantRecord],
    mode: str = MODE_STRICT,
    slack: int = 2,
    seeding_mode: str = "per-mutant-copy",
) -> list[MutantRecord]:
    """Assign killed/survived to each pending record in place.

    `new_findings` must already be baseline-diffed and rule-filtered.
    Error records pass through untouched.
    """
    if mode == MODE_ANY and seeding_mode != "per-mutant-copy":
        raise ModeMisuse(mode, "only legal in per-mutant-copy seeding")
    for record in records:
        if record.status == STATUS_ERROR:
            continue
        if mode == MODE_ANY:
            matched = list(new_findings)
        elif mode == MODE_FILE:
            matched = [f for f in new_findings if f.file_uri == record.file]
        elif mode == MODE_STRICT:
            matched = [
                f
                for f in new_findings
                if f.file_uri == record.file and _spans_intersect(f, record, slack)
            ]
        else:
            raise ModeMisuse(mode, "unknown match mode")
        if matched:
            record.status = STATUS_KILLED
            record.findings = [_finding_dict(f) for f in matched]
        else:
            record.status = STATUS_SURVIVED
            record.findings = []
    return records


def mark_skipped(records: list[MutantRecord]) -> None:
    for record in records:
        if record.status == STATUS_PENDING:
            record.status = STATUS_SKIPPED


# --- emission -----------------------------------------------------------------


def report_dict(matrix: KillMatrix, reason: str = "") -> dict:
    doc = {
        "campaign": {
            "config_hash": matrix.config_hash,
            "detector": matrix.detector,
            "started": matrix.started,
            "finished": matrix.finished,
            "stop_reason": matrix.stop_reason,
            # findings are matched on each result's first physical location
            "location_policy": "first-physical-location",
        },
        "mutants": [
            {
                "id": r.id,
                "operator": r.operator,
                "scope": r.scope,
                "file": r.file,
                "start": r.start_line,
                "end": r.end_line,
                "status": r.status,
                "excerpt": r.excerpt,
                "findings": r.findings,
            }
            for r in matrix.records
        ],
        "operators": matrix.operator_totals(),
    }
    if reason:
        doc["campaign"]["reason"] = reason
    return doc


def _findings_cell(findings: list) -> str:
    return ";".join(f"{f['ruleId']}@{f['file']}:{f['startLine']}" for f in findings)


def emit_csv(matrix: KillMatrix) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in matrix.records:
        writer.writerow(
            [r.id, r.operator, r.scope, r.file, r.start_line, r.end_line,
             r.status, _findings_cell(r.findings)]
        )
    return buf.getvalue()


def csv_to_mutants(text: str) -> list[dict]:
    """Parse an emitted CSV back into the report's mutants[] shape
    (findings reduced to their cell encoding)."""
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows or tuple(rows[0]) != CSV_COLUMNS:
        raise ValueError("unrecognized CSV header")
    mutants = []
    for row in rows[1:]:
        findings = []
        if row[7]:
            for cell in row[7].split(";"):
                rule, _, rest = cell.partition("@")
                file_uri, _, line = rest.rpartition(":")
                findings.append(
                    {"ruleId": rule, "file": file_uri, "startLine": int(line or 0)}
                )
        mutants.append(
            {
                "id": row[0],
                "operator": row[1],
                "scope": row[2],
                "file": row[3],
                "start": int(row[4]),
                "end": int(row[5]),
                "status": row[6],
                "findings": findings,
            }
        )
    return mutants


def emit_text(matrix: KillMatrix, reason: str = "") -> str:
    lines: list[str] = []
    lines.append(f"detector: {matrix.detector or '(none)'}")
    lines.append(f"stop reason: {matrix.stop_reason}")
    if reason:
        lines.append(f"note: {reason}")
    totals = matrix.operator_totals()
    killed = sum(t["killed"] for t in totals)
    survived = sum(t["survived"] for t in totals)
    lines.append(f"mutants: {len(matrix.records)}  killed {killed} / survived {survived}")
    lines.append("")
    lines.append(f"{'operator':<12}{'total':>6}{'killed':>8}{'survived':>10}{'error':>7}{'skipped':>9}")
    for t in totals:
        lines.append(
            f"{t['id']:<12}{t['total']:>6}{t['killed']:>8}{t['survived']:>10}"
            f"{t['error']:>7}{t['skipped']:>9}"
        )
    survivors = matrix.survivors()
    if survivors:
        lines.append("")
        lines.append("flaw candidates (survived):")
        for r in survivors:
            lines.append(f"  {r.id}  {r.file}:{r.start_line}  {r.excerpt}")
    return "\n".join(lines) + "\n"


def emit_report(matrix: KillMatrix, format: str = "json", reason: str = "") -> str:
    """Serialize the matrix as json, csv or text."""
    if format == "json":
        return json.dumps(report_dict(matrix, reason), indent=2) + "\n"
    if format == "csv":
        return emit_csv(matrix)
    if format == "text":
        return emit_text(matrix, reason)
    raise ValueError(f"unknown report format {format!r}")


def matrix_from_report_dict(doc: dict) -> KillMatrix:
    """Rebuild a KillMatrix from an emitted JSON report (for format
    conversion and re-rendering figures)."""
    campaign = doc.get("campaign", {})
    records = [
        MutantRecord(
            id=m["id"],
            operator=m["operator"],
            scope=m["scope"],
            file=m["file"],
            start_line=int(m["start"]),
            end_line=int(m["end"]),
            status=m["status"],
            excerpt=m.get("excerpt", ""),
            findings=m.get("findings", []),
        )
        for m in doc.get("mutants", [])
    ]
    return KillMatrix(
        records=records,
        detector=campaign.get("detector", ""),
        config_hash=campaign.get("config_hash", ""),
        started=campaign.get("started", ""),
        finished=campaign.get("finished", ""),
        stop_reason=campaign.get("stop_reason", "completed"),
    )


# --- figures --------------------------------------------------------------------


def render_figures(matrix: KillMatrix, out_dir) -> list[str]:
    """Render the per-operator outcome chart next to the delimited
    output.  Returns the written paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from pathlib import Path

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    totals = matrix.operator_totals()
    if not totals:
        return []

    ops = [t["id"] for t in totals]
    killed = [t["killed"] for t in totals]
    survived = [t["survived"] for t in totals]
    error = [t["error"] for t in totals]
    skipped = [t["skipped"] for t in totals]

    fig, ax = plt.subplots(figsize=(max(6, len(ops) * 0.9), 4))
    bottom = [0] * len(ops)
    for label, values, color in (
        ("killed", killed, "#2a9d8f"),
        ("survived", survived, "#e76f51"),
        ("error", error, "#8d99ae"),
        ("skipped", skipped, "#e9c46a"),
    ):
        ax.bar(ops, values, bottom=bottom, label=label, color=color)
        bottom = [b + v for b, v in zip(bottom, values)]
    ax.set_ylabel("mutants")
    ax.set_title(f"mutant outcomes per operator ({matrix.detector or 'no detector'})")
    ax.legend()
    fig.tight_layout()
    path = out_dir / "report_operators.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return [str(path)]
