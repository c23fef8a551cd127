"""SARIF 2.1.0 ingestion: the subset detectors in CI actually emit.

Per run and result we keep ruleId, message.text, the first physical
location (URI-decoded, made app-relative when a base dir is known) and
its region lines.  Results without a physical location are kept with an
empty file and line 0 so any-new-finding matching can still see them.
Richer SARIF (code flows, fingerprints) is ignored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import unquote, urlparse

from .errors import SarifParseError, UnsupportedVersion

SARIF_VERSION = "2.1.0"
SARIF_SCHEMA = "https://json.schemastore.org/sarif-2.1.0.json"


@dataclass(frozen=True)
class Finding:
    rule_id: str
    message: str
    file_uri: str  # normalized app-relative path, '/' separators ('' if unknown)
    start_line: int
    end_line: int
    level: str = "warning"
    detector: str = ""

    def location_key(self) -> tuple[str, str]:
        return (self.rule_id, self.file_uri)


def _normalize_uri(uri: str, app_dir: str | None) -> str:
    if not uri:
        return ""
    parsed = urlparse(uri)
    path = unquote(parsed.path) if parsed.scheme == "file" else unquote(uri)
    path = path.replace("\\", "/")
    if app_dir and Path(path).is_absolute():
        try:
            path = Path(path).resolve().relative_to(Path(app_dir).resolve()).as_posix()
        except ValueError:
            pass  # outside the app dir: keep the absolute path
    if path.startswith("./"):
        path = path[2:]
    return path


def parse_sarif(text: str, app_dir: str | None = None) -> list[Finding]:
    """Extract Findings from a SARIF 2.1.0 document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SarifParseError(f"not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise SarifParseError("top level is not an object")
    version = doc.get("version", "")
    if version != SARIF_VERSION:
        raise UnsupportedVersion(str(version))

    findings: list[Finding] = []
    for run in doc.get("runs", []):
        tool = run.get("tool", {}).get("driver", {}).get("name", "")
        for result in run.get("results", []):
            rule_id = result.get("ruleId", "")
            message = result.get("message", {}).get("text", "")
            level = result.get("level", "warning")
            file_uri = ""
            start = 0
            end = 0
            locations = result.get("locations", [])
            if locations:
                physical = locations[0].get("physicalLocation", {})
                artifact = physical.get("artifactLocation", {})
                file_uri = _normalize_uri(artifact.get("uri", ""), app_dir)
                region = physical.get("region", {})
                start = int(region.get("startLine", 0) or 0)
                end = int(region.get("endLine", start) or start)
            findings.append(
                Finding(
                    rule_id=rule_id,
                    message=message,
                    file_uri=file_uri,
                    start_line=start,
                    end_line=max(end, start),
                    level=level,
                    detector=tool,
                )
            )
    return findings


def load_sarif(path: str | Path, app_dir: str | None = None) -> list[Finding]:
    return parse_sarif(Path(path).read_text(encoding="utf-8"), app_dir=app_dir)


def make_sarif(tool_name: str, results: list[dict], rules: list[str] | None = None) -> dict:
    """Assemble a minimal SARIF 2.1.0 document (used by the reference
    detectors and by tests)."""
    driver: dict = {"name": tool_name}
    if rules:
        driver["rules"] = [{"id": rid} for rid in sorted(set(rules))]
    return {
        "$schema": SARIF_SCHEMA,
        "version": SARIF_VERSION,
        "runs": [{"tool": {"driver": driver}, "results": results}],
    }


def make_result(rule_id: str, message: str, file_uri: str, line: int, level: str = "warning") -> dict:
    return {
        "ruleId": rule_id,
        "level": level,
        "message": {"text": message},
        "locations": [
            {
                "physicalLocation": {
                    "artifactLocation": {"uri": file_uri},
                    "region": {"startLine": line, "endLine": line},
                }
            }
        ],
    }
