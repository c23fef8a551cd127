"""End-to-end campaign orchestration shared by the CLI and the HTTP API.

load config -> load plugins -> seed mutants -> run detector -> write
reports (json, csv, text plus the operator figure) into the campaign
output directory.  Path-valued config keys are resolved relative to the
config file's directory.
"""

from __future__ import annotations

import datetime as _dt
import logging
import threading
from dataclasses import dataclass
from pathlib import Path

from .catalog import ApiCatalog, load_catalog
from .codegen import render_main_template
from .config import CampaignConfig, RawConfig, load_properties, validate_config
from .errors import NoSitesFound
from .harness import load_profile, run_campaign
from .operators import OperatorRegistry, build_misuse_case
from .plugins import load_plugins
from .report import KillMatrix, emit_report, mark_skipped, render_figures
from .seeding import seed_campaign

log = logging.getLogger(__name__)

_PATHY_KEYS = ("appSrc", "outputDir", "detectorProfile", "pluginDir")


@dataclass
class CampaignOutcome:
    config: CampaignConfig
    matrix: KillMatrix
    report_paths: dict[str, str]
    stop_reason: str
    survivors: int
    empty_reason: str = ""


def _resolve_paths(raw: RawConfig, base_dir: Path) -> RawConfig:
    """Make path-valued entries absolute against the config location."""
    entries = []
    for key, value in raw.entries:
        if key in _PATHY_KEYS and not value.startswith("builtin:"):
            parts = [p.strip() for p in value.split(",")] if key == "pluginDir" else [value]
            resolved = [
                str((base_dir / p).resolve()) if not Path(p).is_absolute() else p
                for p in parts
            ]
            value = ",".join(resolved)
        entries.append((key, value))
    return RawConfig(entries=tuple(entries), source_path=raw.source_path)


def load_campaign(
    config_path: str | Path,
) -> tuple[RawConfig, CampaignConfig, OperatorRegistry]:
    """Parse, resolve and validate a campaign config file, loading any
    plugins it references."""
    config_path = Path(config_path)
    raw = load_properties(config_path)
    raw = _resolve_paths(raw, config_path.parent.resolve())
    plugin_dirs = [p.strip() for p in (raw.get("pluginDir") or "").split(",") if p.strip()]
    registry = load_plugins(plugin_dirs)
    config = validate_config(raw, registry)
    return raw, config, registry


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def write_reports(matrix: KillMatrix, out_dir: str | Path, reason: str = "") -> dict[str, str]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths: dict[str, str] = {}
    for fmt, name in (("json", "report.json"), ("csv", "report.csv"), ("text", "report.txt")):
        target = out_dir / name
        target.write_text(emit_report(matrix, fmt, reason=reason), encoding="utf-8")
        paths[fmt] = str(target)
    for i, figure in enumerate(render_figures(matrix, out_dir)):
        paths[f"figure{i}"] = figure
    return paths


def run_validated(
    config: CampaignConfig,
    registry: OperatorRegistry,
    catalog: ApiCatalog | None = None,
    jobs: int = 1,
    cancel_event: threading.Event | None = None,
    on_seeded=None,
    progress_cb=None,
) -> CampaignOutcome:
    """Seed and evaluate one campaign, writing reports either way."""
    catalog = catalog or load_catalog()

    try:
        seed = seed_campaign(config, registry, catalog)
    except NoSitesFound as exc:
        matrix = KillMatrix(
            records=[],
            detector=config.detector or "",
            config_hash=config.config_hash,
            started=_now(),
            finished=_now(),
            stop_reason="no-sites-found",
        )
        paths = write_reports(matrix, config.output_dir, reason=str(exc))
        return CampaignOutcome(
            config=config,
            matrix=matrix,
            report_paths=paths,
            stop_reason="no-sites-found",
            survivors=0,
            empty_reason=str(exc),
        )

    if on_seeded:
        on_seeded(len(seed.records))

    if config.detector:
        api = catalog.lookup(config.api_name)
        insecure = config.insecure_param or (
            api.insecure_values[0] if api.insecure_values else ""
        )
        profile = load_profile(
            config.detector, extra_literals=(insecure,) if insecure else ()
        )
        result = run_campaign(
            config, seed, profile,
            jobs=jobs, cancel_event=cancel_event, progress_cb=progress_cb,
        )
        matrix = result.matrix
        stop_reason = result.stop_reason
        reason = ""
    else:
        mark_skipped(seed.records)
        matrix = KillMatrix(
            records=seed.records,
            detector="",
            config_hash=config.config_hash,
            started=_now(),
            finished=_now(),
            stop_reason="no-detector",
        )
        stop_reason = "no-detector"
        reason = "no detectorProfile configured; mutants generated but not evaluated"

    paths = write_reports(matrix, config.output_dir, reason=reason)
    survivors = len(matrix.survivors())
    return CampaignOutcome(
        config=config,
        matrix=matrix,
        report_paths=paths,
        stop_reason=stop_reason,
        survivors=survivors,
    )


def run_from_config_path(
    config_path: str | Path,
    catalog_path: str | None = None,
    jobs: int = 1,
) -> CampaignOutcome:
    _, config, registry = load_campaign(config_path)
    catalog = load_catalog(catalog_path)
    return run_validated(config, registry, catalog, jobs=jobs)


def generate_mutant_files(
    catalog: ApiCatalog,
    registry: OperatorRegistry,
    api_name: str,
    operator_id: str,
    params: dict | None = None,
    insecure_param: str | None = None,
    secure_param: str | None = None,
    config_values: dict[str, str] | None = None,
) -> dict:
    """Render one mutant as template-app files.

    This single code path backs both the `mutate` subcommand and the
    POST /mutate endpoint, so their outputs are byte-identical.
    """
    api = catalog.lookup(api_name)
    case = build_misuse_case(
        api, catalog, insecure_param=insecure_param, secure_param=secure_param
    )
    mutant = registry.instantiate(
        operator_id, case, params=params, config_values=config_values or {}
    )
    template = render_main_template(mutant)
    files = [{"name": unit.file_name, "text": unit.text} for unit in template.units]
    spans = []
    if template.main_span != (0, 0):
        spans.append(
            {
                "name": template.units[0].file_name,
                "startLine": template.main_span[0],
                "endLine": template.main_span[1],
            }
        )
    if template.mutant_file and len(template.units) > 1:
        spans.append(
            {
                "name": template.units[1].file_name,
                "startLine": template.mutant_span[0],
                "endLine": template.mutant_span[1],
            }
        )
    return {"operator": operator_id, "api": api.name, "files": files, "spans": spans}
