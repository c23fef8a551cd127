"""Declarative operator plugins.

A plugin is a directory with an `operator.properties` descriptor and one
template file of Java code.  Templates are instantiated by literal
placeholder substitution, never by loading host-language code:

    %{INSECURE_PARAM}%   the campaign's insecure parameter
    %{SECURE_PARAM}%     the campaign's secure parameter
    %{API_SIMPLE_NAME}%  e.g. Cipher
    %{FACTORY_METHOD}%   e.g. getInstance
    %{FRESH_ID}%         one fresh identifier per instantiation (all
                         occurrences expand to the same name; append
                         suffixes for distinct locals)
    %{CFG:key}%          value of a plugin-declared config key

Descriptor keys: id, name, pattern, threatTags, template, and optionally
kind (statement-sequence|type-declaration), declaresKeys (comma list),
default.<key> entries, imports (comma list of extra imports).

Invalid plugin directories are reported and skipped; loading never
fails the campaign.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path

from .codegen import _primary_type_name
from .config import load_properties
from .errors import ConfigError, MissingKey, RenderError
from .operators import (
    MisuseCase,
    MutantSource,
    OperatorInfo,
    OperatorRegistry,
    STATEMENT_SEQUENCE,
    TYPE_DECLARATION,
)
from .strexpr import quote_java_string
from .structural import check_snippet

log = logging.getLogger(__name__)

_CFG_PATTERN = re.compile(r"%\{CFG:([A-Za-z0-9_]+)\}%")
_PLACEHOLDER_PATTERN = re.compile(r"%\{[^}]*\}%")

DESCRIPTOR_NAME = "operator.properties"


@dataclass(frozen=True)
class PluginLoadWarning:
    plugin_dir: str
    reason: str

    def __str__(self) -> str:
        return f"{self.plugin_dir}: {self.reason}"


@dataclass(frozen=True)
class PluginOperator:
    info: OperatorInfo
    template: str
    kind: str
    declared_keys: tuple[str, ...]
    key_defaults: dict[str, str]
    extra_imports: tuple[str, ...]

    def _substitute(self, case: MisuseCase, values: dict[str, str], fresh: str) -> str:
        text = self.template
        text = text.replace("%{INSECURE_PARAM}%", case.insecure_param)
        text = text.replace("%{SECURE_PARAM}%", case.secure_param)
        text = text.replace("%{API_SIMPLE_NAME}%", case.api.simple_name)
        text = text.replace("%{FACTORY_METHOD}%", case.api.factory_method)
        text = text.replace("%{FRESH_ID}%", fresh)

        def cfg(match: re.Match) -> str:
            key = match.group(1)
            if key in values:
                return values[key]
            if key in self.key_defaults:
                return self.key_defaults[key]
            raise MissingKey(key)

        return _CFG_PATTERN.sub(cfg, text)

    def instantiate(
        self, case: MisuseCase, config_values: dict[str, str], name_seed: int = 0
    ) -> MutantSource:
        fresh = f"plug{self.info.id.capitalize()}{name_seed}"
        snippet = self._substitute(case, config_values, fresh)
        leftover = _PLACEHOLDER_PATTERN.search(snippet)
        if leftover:
            raise RenderError(f"unresolved placeholder {leftover.group(0)}")
        reason = check_snippet(snippet)
        if reason:
            raise RenderError(f"plugin {self.info.id} template invalid: {reason}")
        imports = tuple(dict.fromkeys((*case.api.required_imports, *self.extra_imports)))
        if self.kind == TYPE_DECLARATION:
            type_name = _primary_type_name(snippet)
            use_stmt = f"{type_name} {fresh}Use = new {type_name}();"
            return MutantSource(
                operator_id=self.info.id,
                snippet=snippet,
                required_imports=imports,
                declared_names=(type_name, f"{fresh}Use"),
                arg_expression=None,
                kind=TYPE_DECLARATION,
                type_name=type_name,
                use_stmt=use_stmt,
                api_name=case.api.name,
            )
        return MutantSource(
            operator_id=self.info.id,
            snippet=snippet,
            required_imports=imports,
            declared_names=(fresh,),
            arg_expression=None,
            kind=STATEMENT_SEQUENCE,
            api_name=case.api.name,
        )


def _load_plugin_dir(plugin_dir: Path, existing_ids: set[str]) -> PluginOperator:
    descriptor_path = plugin_dir / DESCRIPTOR_NAME
    if not descriptor_path.is_file():
        raise RenderError(f"missing {DESCRIPTOR_NAME}")
    try:
        props = dict(load_properties(descriptor_path).entries)
    except ConfigError as exc:
        raise RenderError(f"bad descriptor: {exc}")

    for key in ("id", "name", "pattern", "threatTags", "template"):
        if key not in props:
            raise RenderError(f"descriptor lacks {key!r}")
    op_id = props["id"]
    if op_id in existing_ids:
        raise RenderError(f"operator id {op_id!r} already registered")
    if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", op_id):
        raise RenderError(f"operator id {op_id!r} is not an identifier")
    pattern = props["pattern"]
    if pattern not in ("restrictive", "flexible"):
        raise RenderError(f"bad pattern {pattern!r}")
    tags = tuple(t.strip() for t in props["threatTags"].split(",") if t.strip())
    if not tags or not set(tags) <= {"T1", "T2", "T3"}:
        raise RenderError(f"bad threatTags {props['threatTags']!r}")
    kind = props.get("kind", STATEMENT_SEQUENCE)
    if kind not in (STATEMENT_SEQUENCE, TYPE_DECLARATION):
        raise RenderError(f"bad kind {kind!r}")

    template_path = plugin_dir / props["template"]
    if not template_path.is_file():
        raise RenderError(f"missing template file {props['template']!r}")
    template = template_path.read_text(encoding="utf-8")

    declared = tuple(k.strip() for k in props.get("declaresKeys", "").split(",") if k.strip())
    defaults = {
        key[len("default."):]: value
        for key, value in props.items()
        if key.startswith("default.")
    }
    for dkey in defaults:
        if dkey not in declared:
            raise RenderError(f"default for undeclared key {dkey!r}")

    extra_imports = tuple(
        i.strip() for i in props.get("imports", "").split(",") if i.strip()
    )

    plugin = PluginOperator(
        info=OperatorInfo(
            id=op_id,
            name=props["name"],
            pattern=pattern,
            threat_tags=tags,
            params={},
            origin="plugin",
            description=props.get("description", ""),
        ),
        template=template,
        kind=kind,
        declared_keys=declared,
        key_defaults=defaults,
        extra_imports=extra_imports,
    )

    # dry-run the template so broken plugins surface at load time
    probe_values = {k: defaults.get(k, "0") for k in declared}
    dummy_case = _probe_case()
    plugin.instantiate(dummy_case, probe_values, name_seed=0)
    return plugin


def _probe_case() -> MisuseCase:
    from .catalog import ApiDescriptor

    api = ApiDescriptor(
        name="javax.crypto.Cipher",
        pattern="restrictive",
        factory_method="getInstance",
        param_position=0,
        secure_values=("AES/GCM/NoPadding",),
        insecure_values=("DES",),
        required_imports=("javax.crypto.Cipher",),
    )
    return MisuseCase(
        api=api,
        insecure_param="DES",
        secure_param="AES/GCM/NoPadding",
        baseline_snippet=f"Cipher.getInstance({quote_java_string('DES')});",
    )


def load_plugins(dirs: list[str] | tuple[str, ...]) -> OperatorRegistry:
    """Build a registry of builtins plus every valid plugin directory.

    Load problems are collected on registry.load_warnings, one entry per
    rejected plugin; they never abort the campaign.
    """
    registry = OperatorRegistry()
    warnings: list[PluginLoadWarning] = []
    for dir_text in dirs:
        plugin_dir = Path(dir_text)
        try:
            existing = {info.id for info in registry.list()}
            plugin = _load_plugin_dir(plugin_dir, existing)
        except (RenderError, ConfigError, OSError) as exc:
            warning = PluginLoadWarning(str(plugin_dir), str(exc))
            log.warning("plugin skipped: %s", warning)
            warnings.append(warning)
            continue
        registry.register_plugin(plugin)
    registry.load_warnings = warnings
    return registry
