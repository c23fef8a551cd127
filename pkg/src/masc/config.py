"""Campaign configuration: key-value properties parsing and validation.

A campaign is driven by a single properties-style text file.  Dialect:
one `key = value` entry per line, `#` starts a comment line, blank lines
are skipped, UTF-8, no escape processing.  Keys are unique; order is
preserved so a parsed config can be re-serialized byte-compatibly.
"""

from __future__ import annotations

import hashlib
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING

from .errors import (
    DuplicateKey,
    InvalidValue,
    MalformedLine,
    MissingAppSrc,
    MissingKey,
    UnknownOperator,
    UnknownScope,
)

if TYPE_CHECKING:
    from .operators import OperatorRegistry

log = logging.getLogger(__name__)

SCOPES = ("main", "similarity", "exhaustive")
SEEDING_MODES = ("per-mutant-copy", "batched")
MATCH_MODES = ("strict-span", "file-level", "any-new-finding")

#: Keys understood by the core pipeline.  Plugins may declare more.
KNOWN_KEYS = frozenset(
    {
        "apiName",
        "invocation",
        "secureParam",
        "insecureParam",
        "operators",
        "scope",
        "appSrc",
        "outputDir",
        "detectorProfile",
        "pluginDir",
        "seedingMode",
        "stopCondition",
        "matchMode",
        "spanSlack",
        "similarityMethodMatch",
    }
)

OUTPUT_DIR_ENV = "MASC_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "masc-out"


@dataclass(frozen=True)
class RawConfig:
    """Parsed but untyped key-value entries, in file order."""

    entries: tuple[tuple[str, str], ...]
    source_path: str = "<string>"

    def get(self, key: str, default: str | None = None) -> str | None:
        for k, v in self.entries:
            if k == key:
                return v
        return default

    def serialize(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in self.entries)

    def content_hash(self) -> str:
        digest = hashlib.sha256()
        for k, v in self.entries:
            digest.update(f"{k}={v}\n".encode("utf-8"))
        return digest.hexdigest()[:16]


@dataclass(frozen=True)
class StopCondition:
    """Campaign stop policy: run everything, stop at the first surviving
    mutant, or stop after N survivors."""

    kind: str  # "none" | "first-survivor" | "survivor-count"
    count: int = 0

    @classmethod
    def parse(cls, text: str) -> "StopCondition":
        text = text.strip()
        if text == "none":
            return cls("none")
        if text == "first-survivor":
            return cls("first-survivor", 1)
        if text.startswith("survivor-count:"):
            raw_n = text.split(":", 1)[1]
            try:
                n = int(raw_n)
            except ValueError:
                raise InvalidValue("stopCondition", text, "count must be an integer")
            if n < 1:
                raise InvalidValue("stopCondition", text, "count must be >= 1")
            return cls("survivor-count", n)
        raise InvalidValue("stopCondition", text, "expected none, first-survivor or survivor-count:N")

    def __str__(self) -> str:
        if self.kind == "survivor-count":
            return f"survivor-count:{self.count}"
        return self.kind


@dataclass(frozen=True)
class CampaignConfig:
    """Typed, validated campaign settings with defaults applied."""

    api_name: str
    invocation: str | None
    secure_param: str | None
    insecure_param: str | None
    operators: tuple[str, ...]
    scope: str
    app_src: str | None
    output_dir: str
    detector: str | None
    plugin_dirs: tuple[str, ...]
    seeding_mode: str
    stop_condition: StopCondition
    match_mode: str
    span_slack_lines: int
    similarity_method_match: str
    custom: dict[str, str] = field(default_factory=dict)
    config_hash: str = ""
    warnings: tuple[str, ...] = ()


def parse_properties(text: str, source_path: str = "<string>") -> RawConfig:
    """Parse properties-dialect text into a RawConfig.

    Raises DuplicateKey or MalformedLine; blank lines and `#` comments
    are skipped.
    """
    entries: list[tuple[str, str]] = []
    seen: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise MalformedLine(lineno, stripped)
        key, value = stripped.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise MalformedLine(lineno, stripped)
        if key in seen:
            raise DuplicateKey(key, lineno)
        seen.add(key)
        entries.append((key, value))
    return RawConfig(entries=tuple(entries), source_path=source_path)


def load_properties(path: str | Path) -> RawConfig:
    path = Path(path)
    return parse_properties(path.read_text(encoding="utf-8"), source_path=str(path))


def _split_list(value: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in value.split(",") if part.strip())


def _check_creatable(path_text: str) -> None:
    """A path is creatable when no existing ancestor is a non-directory.

    Deliberately write-free so validation stays pure.
    """
    p = Path(path_text)
    for ancestor in (p, *p.parents):
        if ancestor.exists():
            if not ancestor.is_dir():
                raise InvalidValue("outputDir", path_text, f"{ancestor} is not a directory")
            return


def validate_config(raw: RawConfig, registry: "OperatorRegistry") -> CampaignConfig:
    """Resolve a RawConfig against an operator registry into a CampaignConfig.

    Unknown keys that no loaded plugin declares produce warnings, never
    errors; plugin-declared keys land in `custom`.
    """
    entries = dict(raw.entries)
    warnings: list[str] = []

    api_name = entries.get("apiName")
    if not api_name:
        raise MissingKey("apiName")

    scope = entries.get("scope", "main")
    if scope not in SCOPES:
        raise UnknownScope(scope)

    app_src = entries.get("appSrc")
    if scope != "main" and not app_src:
        raise MissingAppSrc(scope)
    if scope == "main" and app_src:
        warnings.append("appSrc is ignored in main scope")
        app_src = None

    ops_value = entries.get("operators", "ALL")
    if ops_value.strip().upper() == "ALL":
        operators = tuple(info.id for info in registry.list())
    else:
        operators = _split_list(ops_value)
        for op_id in operators:
            if not registry.has(op_id):
                raise UnknownOperator(op_id)

    output_dir = entries.get("outputDir") or os.environ.get(OUTPUT_DIR_ENV) or DEFAULT_OUTPUT_DIR
    _check_creatable(output_dir)

    seeding_mode = entries.get("seedingMode", "per-mutant-copy")
    if seeding_mode not in SEEDING_MODES:
        raise InvalidValue("seedingMode", seeding_mode, f"expected one of {SEEDING_MODES}")

    match_mode = entries.get("matchMode", "strict-span")
    if match_mode not in MATCH_MODES:
        raise InvalidValue("matchMode", match_mode, f"expected one of {MATCH_MODES}")

    slack_text = entries.get("spanSlack", "2")
    try:
        span_slack = int(slack_text)
    except ValueError:
        raise InvalidValue("spanSlack", slack_text, "must be an integer")
    if span_slack < 0:
        raise InvalidValue("spanSlack", slack_text, "must be >= 0")

    similarity_match = entries.get("similarityMethodMatch", "strict")
    if similarity_match not in ("strict", "loose"):
        raise InvalidValue("similarityMethodMatch", similarity_match, "expected strict or loose")

    stop_condition = StopCondition.parse(entries.get("stopCondition", "none"))

    declared = registry.declared_config_keys()
    custom: dict[str, str] = {}
    for key, value in raw.entries:
        if key in KNOWN_KEYS:
            continue
        if key in declared:
            custom[key] = value
        else:
            warnings.append(f"unknown key {key!r} (not declared by any plugin)")

    for message in warnings:
        log.warning("%s: %s", raw.source_path, message)

    return CampaignConfig(
        api_name=api_name,
        invocation=entries.get("invocation"),
        secure_param=entries.get("secureParam"),
        insecure_param=entries.get("insecureParam"),
        operators=operators,
        scope=scope,
        app_src=app_src,
        output_dir=output_dir,
        detector=entries.get("detectorProfile"),
        plugin_dirs=_split_list(entries.get("pluginDir", "")),
        seeding_mode=seeding_mode,
        stop_condition=stop_condition,
        match_mode=match_mode,
        span_slack_lines=span_slack,
        similarity_method_match=similarity_match,
        custom=custom,
        config_hash=raw.content_hash(),
        warnings=tuple(warnings),
    )
