"""Detector orchestration: profiles, runs, stop conditions.

A DetectorProfile says how to build and run one detector and where its
SARIF lands.  Commands run through the argument-vector process API (no
shell); `%{APP_DIR}%` and `%{OUT_FILE}%` placeholders are substituted
literally per argument.  The `builtin:` scheme short-circuits to the
in-process reference detectors so demo campaigns need no external
tools.

The campaign loop runs the baseline exactly once, then one run per
mutated app, matching findings after each run and honoring the stop
condition at run boundaries.  Detector problems surface as run verdicts;
only a failing baseline aborts the campaign (no attribution without it).
"""

from __future__ import annotations

import datetime as _dt
import json
import logging
import shlex
import subprocess
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .config import CampaignConfig
from .errors import BaselineFailed, InvalidValue, SarifParseError
from .refdetect import DEFAULT_LITERALS, MODES, reference_detector
from .report import KillMatrix, match_findings, mark_skipped
from .sarif import Finding, load_sarif
from .seeding import STATUS_ERROR, STATUS_SURVIVED, CampaignSeed

log = logging.getLogger(__name__)

VERDICT_OK = "ok"
VERDICT_BUILD_FAILED = "build-failed"
VERDICT_DETECTOR_FAILED = "detector-failed"
VERDICT_TIMEOUT = "timeout"
VERDICT_NO_OUTPUT = "no-output"

DEFAULT_TIMEOUT_S = 600


@dataclass(frozen=True)
class DetectorProfile:
    name: str
    run_cmd: str
    build_cmd: str = ""
    output_path: str = ""  # template; empty means harness-managed
    timeout_s: int = DEFAULT_TIMEOUT_S
    rule_filter: tuple[str, ...] = ()
    match_mode: str | None = None
    literals: tuple[str, ...] = DEFAULT_LITERALS  # builtin literal modes
    script_path: str = ""  # builtin scripted mode

    def validate(self) -> None:
        if "%{APP_DIR}%" not in self.run_cmd:
            raise InvalidValue("runCmd", self.run_cmd, "must contain %{APP_DIR}%")
        if self.timeout_s <= 0:
            raise InvalidValue("timeoutS", str(self.timeout_s), "must be > 0")


@dataclass
class RunResult:
    app_dir: str
    exit_code: int
    duration_ms: int
    sarif_path: str | None
    stdout_log: str
    stderr_log: str
    verdict: str


@dataclass
class CampaignResult:
    matrix: KillMatrix
    baseline: RunResult
    runs: list[RunResult] = field(default_factory=list)
    stop_reason: str = "completed"


def builtin_profile(
    mode: str,
    literals: tuple[str, ...] = DEFAULT_LITERALS,
    script_path: str = "",
) -> DetectorProfile:
    if mode not in MODES:
        raise InvalidValue("detectorProfile", mode, f"expected one of {MODES}")
    return DetectorProfile(
        name=mode,
        run_cmd=f"builtin:{mode} %{{APP_DIR}}% %{{OUT_FILE}}%",
        timeout_s=DEFAULT_TIMEOUT_S,
        literals=literals,
        script_path=script_path,
    )


def load_profile(
    spec: str, extra_literals: tuple[str, ...] = ()
) -> DetectorProfile:
    """A profile reference is either `builtin:<mode>` or a path to a
    key-value profile file."""
    if spec.startswith("builtin:"):
        mode = spec.split(":", 1)[1]
        literals = tuple(dict.fromkeys((*DEFAULT_LITERALS, *extra_literals)))
        profile = builtin_profile(mode, literals=literals)
    else:
        from .config import load_properties

        props = dict(load_properties(spec).entries)
        if "runCmd" not in props:
            raise InvalidValue("runCmd", "", f"profile {spec} lacks runCmd")
        profile = DetectorProfile(
            name=props.get("name", Path(spec).stem),
            run_cmd=props["runCmd"],
            build_cmd=props.get("buildCmd", ""),
            output_path=props.get("outputPath", ""),
            timeout_s=int(props.get("timeoutS", str(DEFAULT_TIMEOUT_S))),
            rule_filter=tuple(
                p.strip() for p in props.get("ruleFilter", "").split(",") if p.strip()
            ),
            match_mode=props.get("matchMode"),
            script_path=props.get("scriptFile", ""),
        )
    profile.validate()
    return profile


def _substitute(template: str, app_dir: str, out_file: str) -> list[str]:
    args = shlex.split(template)
    return [
        arg.replace("%{APP_DIR}%", app_dir).replace("%{OUT_FILE}%", out_file)
        for arg in args
    ]


def _write_log(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)


def run_detector(
    profile: DetectorProfile,
    app_dir: str | Path,
    logs_dir: str | Path,
    run_id: str = "run",
) -> RunResult:
    """Execute build_cmd then run_cmd against one app tree."""
    app_dir = str(Path(app_dir))
    logs_dir = Path(logs_dir)
    logs_dir.mkdir(parents=True, exist_ok=True)
    stdout_log = logs_dir / f"{run_id}.out"
    stderr_log = logs_dir / f"{run_id}.err"

    if profile.output_path:
        out_file = profile.output_path.replace("%{APP_DIR}%", app_dir)
    else:
        out_file = str(logs_dir / f"{run_id}.sarif")

    started = time.monotonic()

    def result(verdict: str, exit_code: int, sarif_ok: bool = False) -> RunResult:
        return RunResult(
            app_dir=app_dir,
            exit_code=exit_code,
            duration_ms=int((time.monotonic() - started) * 1000),
            sarif_path=out_file if sarif_ok else None,
            stdout_log=str(stdout_log),
            stderr_log=str(stderr_log),
            verdict=verdict,
        )

    if profile.run_cmd.startswith("builtin:"):
        mode = profile.run_cmd.split()[0].split(":", 1)[1]
        try:
            doc = reference_detector(
                app_dir,
                mode,
                literals=profile.literals,
                script_path=profile.script_path or None,
            )
            Path(out_file).parent.mkdir(parents=True, exist_ok=True)
            Path(out_file).write_text(json.dumps(doc, indent=2), encoding="utf-8")
            _write_log(stdout_log, b"")
            _write_log(stderr_log, b"")
            return result(VERDICT_OK, 0, sarif_ok=True)
        except Exception as exc:  # never crash the campaign
            log.error("builtin detector %s failed on %s: %s", mode, app_dir, exc)
            _write_log(stdout_log, b"")
            _write_log(stderr_log, str(exc).encode())
            return result(VERDICT_DETECTOR_FAILED, 1)

    if profile.build_cmd:
        argv = _substitute(profile.build_cmd, app_dir, out_file)
        try:
            proc = subprocess.run(
                argv, cwd=app_dir, capture_output=True, timeout=profile.timeout_s
            )
        except (subprocess.TimeoutExpired, OSError) as exc:
            _write_log(stderr_log, str(exc).encode())
            _write_log(stdout_log, b"")
            return result(VERDICT_BUILD_FAILED, -1)
        _write_log(stdout_log, proc.stdout)
        _write_log(stderr_log, proc.stderr)
        if proc.returncode != 0:
            return result(VERDICT_BUILD_FAILED, proc.returncode)

    argv = _substitute(profile.run_cmd, app_dir, out_file)
    try:
        proc = subprocess.run(
            argv, cwd=app_dir, capture_output=True, timeout=profile.timeout_s
        )
    except subprocess.TimeoutExpired as exc:
        _write_log(stdout_log, exc.stdout or b"")
        _write_log(stderr_log, exc.stderr or b"")
        return result(VERDICT_TIMEOUT, -1)
    except OSError as exc:
        _write_log(stdout_log, b"")
        _write_log(stderr_log, str(exc).encode())
        return result(VERDICT_DETECTOR_FAILED, -1)
    _write_log(stdout_log, proc.stdout)
    _write_log(stderr_log, proc.stderr)
    if proc.returncode != 0:
        return result(VERDICT_DETECTOR_FAILED, proc.returncode)
    out_path = Path(out_file)
    if not out_path.is_file():
        return result(VERDICT_NO_OUTPUT, proc.returncode)
    try:
        load_sarif(out_path)
    except SarifParseError:
        return result(VERDICT_NO_OUTPUT, proc.returncode)
    return result(VERDICT_OK, proc.returncode, sarif_ok=True)


def _filtered_findings(
    sarif_path: str, app_dir: str, rule_filter: tuple[str, ...]
) -> list[Finding]:
    findings = load_sarif(sarif_path, app_dir=app_dir)
    if rule_filter:
        findings = [
            f for f in findings if any(f.rule_id.startswith(p) for p in rule_filter)
        ]
    return findings


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def run_campaign(
    config: CampaignConfig,
    seeded: CampaignSeed,
    profile: DetectorProfile,
    jobs: int = 1,
    cancel_event: threading.Event | None = None,
    progress_cb=None,
) -> CampaignResult:
    """Baseline once, then one detector run per mutated app.

    first-survivor / survivor-count:N stop dispatching new runs as soon
    as the threshold is reached (exact at jobs=1; with jobs>1 runs
    already in flight still complete and are reported).
    """
    logs_dir = Path(seeded.output_dir) / "logs"
    match_mode = profile.match_mode or config.match_mode
    slack = config.span_slack_lines
    started = _now()

    baseline = run_detector(profile, seeded.baseline_dir, logs_dir, "baseline")
    if baseline.verdict != VERDICT_OK:
        raise BaselineFailed(baseline.verdict, f"logs: {baseline.stderr_log}")
    baseline_findings = _filtered_findings(
        baseline.sarif_path, seeded.baseline_dir, profile.rule_filter
    )

    from .report import diff_baseline  # local import to keep module load light

    runs: list[RunResult] = []
    stop_reason = "completed"
    survivors = 0
    threshold = (
        config.stop_condition.count if config.stop_condition.kind != "none" else 0
    )

    def process_app(i_app):
        i, app = i_app
        return i, app, run_detector(profile, app.root_dir, logs_dir, f"mutant-{i:04d}")

    apps = list(enumerate(seeded.apps))

    def handle(app, run: RunResult) -> None:
        nonlocal survivors
        runs.append(run)
        if run.verdict != VERDICT_OK:
            for record in app.records:
                record.status = STATUS_ERROR
            return
        findings = _filtered_findings(run.sarif_path, app.root_dir, profile.rule_filter)
        new = diff_baseline(baseline_findings, findings, slack=slack)
        match_findings(
            new, app.records, mode=match_mode, slack=slack,
            seeding_mode=config.seeding_mode,
        )
        survivors += sum(1 for r in app.records if r.status == STATUS_SURVIVED)

    if jobs <= 1:
        for i, app in apps:
            if cancel_event is not None and cancel_event.is_set():
                stop_reason = "cancelled"
                break
            _, _, run = process_app((i, app))
            handle(app, run)
            if progress_cb:
                progress_cb(len(runs), survivors)
            if threshold and survivors >= threshold:
                stop_reason = str(config.stop_condition)
                break
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            pending = []
            it = iter(apps)
            try:
                while True:
                    while len(pending) < jobs:
                        try:
                            pending.append(pool.submit(process_app, next(it)))
                        except StopIteration:
                            break
                    if not pending:
                        break
                    i, app, run = pending.pop(0).result()
                    handle(app, run)
                    if progress_cb:
                        progress_cb(len(runs), survivors)
                    if cancel_event is not None and cancel_event.is_set():
                        stop_reason = "cancelled"
                        break
                    if threshold and survivors >= threshold:
                        stop_reason = str(config.stop_condition)
                        break
            finally:
                for future in pending:
                    future.cancel()

    # anything still pending (early stop, error apps) counts as skipped
    mark_skipped(seeded.records)

    matrix = KillMatrix(
        records=seeded.records,
        detector=profile.name,
        config_hash=config.config_hash,
        started=started,
        finished=_now(),
        stop_reason=stop_reason,
    )
    return CampaignResult(matrix=matrix, baseline=baseline, runs=runs, stop_reason=stop_reason)
