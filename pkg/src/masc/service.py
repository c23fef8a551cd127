"""Local HTTP API: a thin adapter over the library for the web UI.

No pipeline logic lives here; every endpoint delegates to the same
functions the CLI uses, so CLI and HTTP outputs stay byte-identical.
Campaigns execute on worker threads inside a sandbox directory; uploads
are size-capped and checked against zip path traversal.
"""

from __future__ import annotations

import io
import json
import logging
import tempfile
import threading
import uuid
import zipfile
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from fastapi import FastAPI, File, HTTPException, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .catalog import load_catalog
from .config import RawConfig, parse_properties, validate_config
from .errors import CatalogError, ConfigError, MascError
from .pipeline import generate_mutant_files, run_validated
from .plugins import DESCRIPTOR_NAME, load_plugins

log = logging.getLogger(__name__)

ZIP_SIZE_CAP = 64 * 1024 * 1024  # uncompressed bytes
ZIP_MEMBER_CAP = 10_000

STATES = ("queued", "seeding", "running", "done", "failed", "stopped")


class MutateRequest(BaseModel):
    api: str
    operator: str
    params: dict[str, str] = {}
    insecureParam: str | None = None
    secureParam: str | None = None


@dataclass
class Campaign:
    id: str
    state: str = "queued"
    mutants_total: int = 0
    runs_done: int = 0
    survivors_so_far: int = 0
    report_paths: dict[str, str] = dc_field(default_factory=dict)
    error: str = ""
    cancel_event: threading.Event = dc_field(default_factory=threading.Event)
    lock: threading.Lock = dc_field(default_factory=threading.Lock)

    def handle(self) -> dict:
        return {
            "id": self.id,
            "state": self.state,
            "progress": {
                "mutants_total": self.mutants_total,
                "runs_done": self.runs_done,
                "survivors_so_far": self.survivors_so_far,
            },
            "report_path": self.report_paths.get("json", ""),
            "error": self.error,
        }


def _error(status: int, code: str, message: str) -> HTTPException:
    return HTTPException(status_code=status, detail={"code": code, "message": message})


def _safe_extract(data: bytes, target: Path) -> None:
    try:
        archive = zipfile.ZipFile(io.BytesIO(data))
    except zipfile.BadZipFile:
        raise _error(400, "bad-zip", "upload is not a valid zip archive")
    members = archive.infolist()
    if len(members) > ZIP_MEMBER_CAP:
        raise _error(413, "zip-too-large", f"more than {ZIP_MEMBER_CAP} entries")
    total = sum(m.file_size for m in members)
    if total > ZIP_SIZE_CAP:
        raise _error(413, "zip-too-large", f"uncompressed size {total} exceeds cap")
    target.mkdir(parents=True, exist_ok=True)
    base = target.resolve()
    for member in members:
        name = member.filename
        if name.startswith("/") or name.startswith("\\"):
            raise _error(400, "zip-traversal", f"absolute path entry {name!r}")
        dest = (target / name).resolve()
        if base != dest and base not in dest.parents:
            raise _error(400, "zip-traversal", f"path escapes sandbox: {name!r}")
        if member.is_dir():
            dest.mkdir(parents=True, exist_ok=True)
        else:
            dest.parent.mkdir(parents=True, exist_ok=True)
            dest.write_bytes(archive.read(member))


def _override_entries(raw: RawConfig, overrides: dict[str, str | None]) -> RawConfig:
    """Replace or append entries; None removes a key."""
    entries = [(k, v) for k, v in raw.entries if k not in overrides]
    for key, value in overrides.items():
        if value is not None:
            entries.append((key, value))
    return RawConfig(entries=tuple(entries), source_path=raw.source_path)


def create_app(
    catalog_path: str | None = None,
    output_dir: str | None = None,
    jobs: int = 1,
    ui_dir: str | None = None,
) -> FastAPI:
    catalog = load_catalog(catalog_path)
    sandbox_root = Path(output_dir) if output_dir else Path(tempfile.mkdtemp(prefix="masc-serve-"))
    sandbox_root.mkdir(parents=True, exist_ok=True)
    campaigns: dict[str, Campaign] = {}
    campaigns_lock = threading.Lock()

    app = FastAPI(title="masc", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(HTTPException)
    async def structured_errors(request, exc: HTTPException):
        detail = exc.detail
        if isinstance(detail, dict) and "code" in detail:
            body = detail
        else:
            body = {"code": "error", "message": str(detail)}
        return JSONResponse(status_code=exc.status_code, content=body)

    @app.get("/operators")
    def operators():
        registry = load_plugins([])
        return [
            {
                "id": info.id,
                "name": info.name,
                "pattern": info.pattern,
                "threatTags": list(info.threat_tags),
                "params": info.params,
                "origin": info.origin,
                "description": info.description,
            }
            for info in registry.list()
        ]

    @app.post("/mutate")
    def mutate(request: MutateRequest):
        registry = load_plugins([])
        try:
            return generate_mutant_files(
                catalog,
                registry,
                api_name=request.api,
                operator_id=request.operator,
                params=dict(request.params),
                insecure_param=request.insecureParam,
                secure_param=request.secureParam,
                config_values=dict(request.params),
            )
        except (ConfigError, CatalogError, MascError) as exc:
            raise _error(400, "invalid-input", str(exc))

    @app.post("/campaigns", status_code=201)
    async def create_campaign(
        config: UploadFile = File(...),
        app_zip: UploadFile | None = File(default=None, alias="app"),
        plugins_zip: UploadFile | None = File(default=None, alias="plugins"),
    ):
        campaign_id = uuid.uuid4().hex[:12]
        sandbox = sandbox_root / "uploads" / campaign_id
        sandbox.mkdir(parents=True, exist_ok=True)

        config_text = (await config.read()).decode("utf-8", errors="replace")
        try:
            raw = parse_properties(config_text, source_path=f"<upload:{config.filename}>")
        except ConfigError as exc:
            raise _error(400, "invalid-config", str(exc))

        overrides: dict[str, str | None] = {
            "outputDir": str(sandbox_root / "campaigns" / campaign_id),
        }
        if app_zip is not None:
            app_dir = sandbox / "app"
            _safe_extract(await app_zip.read(), app_dir)
            overrides["appSrc"] = str(app_dir)
        plugin_dirs: list[str] = []
        if plugins_zip is not None:
            plug_root = sandbox / "plugins"
            _safe_extract(await plugins_zip.read(), plug_root)
            if (plug_root / DESCRIPTOR_NAME).is_file():
                plugin_dirs.append(str(plug_root))
            plugin_dirs.extend(
                str(p.parent) for p in sorted(plug_root.glob(f"*/{DESCRIPTOR_NAME}"))
            )
            overrides["pluginDir"] = ",".join(plugin_dirs) if plugin_dirs else None
        raw = _override_entries(raw, overrides)

        registry = load_plugins(plugin_dirs)
        try:
            cfg = validate_config(raw, registry)
        except ConfigError as exc:
            raise _error(400, "invalid-config", str(exc))

        campaign = Campaign(id=campaign_id)
        with campaigns_lock:
            campaigns[campaign_id] = campaign

        def on_seeded(total: int) -> None:
            with campaign.lock:
                campaign.mutants_total = total
                if campaign.state == "seeding":
                    campaign.state = "running"

        def on_progress(runs_done: int, survivors: int) -> None:
            with campaign.lock:
                campaign.runs_done = runs_done
                campaign.survivors_so_far = survivors

        def worker() -> None:
            with campaign.lock:
                campaign.state = "seeding"
            try:
                outcome = run_validated(
                    cfg,
                    registry,
                    catalog,
                    jobs=jobs,
                    cancel_event=campaign.cancel_event,
                    on_seeded=on_seeded,
                    progress_cb=on_progress,
                )
                with campaign.lock:
                    campaign.report_paths = outcome.report_paths
                    campaign.survivors_so_far = outcome.survivors
                    if campaign.state != "stopped":
                        campaign.state = "done"
            except Exception as exc:
                log.exception("campaign %s failed", campaign_id)
                with campaign.lock:
                    campaign.error = str(exc)
                    if campaign.state != "stopped":
                        campaign.state = "failed"

        threading.Thread(target=worker, name=f"campaign-{campaign_id}", daemon=True).start()
        return campaign.handle()

    def _get_campaign(campaign_id: str) -> Campaign:
        with campaigns_lock:
            campaign = campaigns.get(campaign_id)
        if campaign is None:
            raise _error(404, "unknown-campaign", f"no campaign {campaign_id!r}")
        return campaign

    @app.get("/campaigns/{campaign_id}")
    def get_campaign(campaign_id: str):
        return _get_campaign(campaign_id).handle()

    @app.get("/campaigns/{campaign_id}/report")
    def get_report(campaign_id: str, format: str = "json"):
        campaign = _get_campaign(campaign_id)
        if format not in ("json", "csv"):
            raise _error(400, "bad-format", "format must be json or csv")
        path = campaign.report_paths.get(format)
        if not path or not Path(path).is_file():
            raise _error(404, "report-not-ready", "campaign has not produced a report yet")
        text = Path(path).read_text(encoding="utf-8")
        if format == "json":
            return JSONResponse(content=json.loads(text))
        return PlainTextResponse(text, media_type="text/csv")

    @app.delete("/campaigns/{campaign_id}")
    def cancel_campaign(campaign_id: str):
        campaign = _get_campaign(campaign_id)
        with campaign.lock:
            if campaign.state in ("done", "failed", "stopped"):
                raise _error(409, "already-finished", f"campaign is {campaign.state}")
            campaign.cancel_event.set()
            campaign.state = "stopped"
            return campaign.handle()

    resolved_ui = ui_dir or str(Path("frontend") / "dist")
    if Path(resolved_ui).is_dir():
        app.mount("/ui", StaticFiles(directory=resolved_ui, html=True), name="ui")

    return app
