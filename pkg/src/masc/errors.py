"""Exception hierarchy shared across the pipeline.

Config errors map to CLI exit code 1, campaign failures to 2, anything
else to 3 (see cli.main).
"""

from __future__ import annotations


class MascError(Exception):
    """Base class for all errors raised by this package."""


# --- configuration -----------------------------------------------------


class ConfigError(MascError):
    pass


class DuplicateKey(ConfigError):
    def __init__(self, key: str, line: int):
        super().__init__(f"duplicate key {key!r} on line {line}")
        self.key = key
        self.line = line


class MalformedLine(ConfigError):
    def __init__(self, line: int, text: str = ""):
        super().__init__(f"malformed line {line}: {text!r}")
        self.line = line
        self.text = text


class MissingKey(ConfigError):
    def __init__(self, key: str):
        super().__init__(f"missing required key {key!r}")
        self.key = key


class UnknownOperator(ConfigError):
    def __init__(self, op_id: str):
        super().__init__(f"unknown operator {op_id!r}")
        self.op_id = op_id


class UnknownScope(ConfigError):
    def __init__(self, value: str):
        super().__init__(f"unknown scope {value!r}")
        self.value = value


class MissingAppSrc(ConfigError):
    def __init__(self, scope: str):
        super().__init__(f"scope {scope!r} requires appSrc")
        self.scope = scope


class InvalidValue(ConfigError):
    def __init__(self, key: str, value: str, reason: str):
        super().__init__(f"invalid value for {key!r}: {value!r} ({reason})")
        self.key = key
        self.value = value
        self.reason = reason


# --- API catalog --------------------------------------------------------


class CatalogError(MascError):
    pass


class CatalogParseError(CatalogError):
    def __init__(self, location: str, reason: str):
        super().__init__(f"catalog parse error at {location}: {reason}")
        self.location = location
        self.reason = reason


class InvalidDescriptor(CatalogError):
    def __init__(self, name: str, reason: str):
        super().__init__(f"invalid descriptor {name!r}: {reason}")
        self.name = name
        self.reason = reason


class NotFound(CatalogError):
    def __init__(self, name: str):
        super().__init__(f"no API named {name!r} in catalog")
        self.name = name


class AmbiguousSimpleName(CatalogError):
    def __init__(self, name: str, candidates: list[str]):
        super().__init__(f"simple name {name!r} is ambiguous: {candidates}")
        self.name = name
        self.candidates = candidates


# --- mutation engine ----------------------------------------------------


class EngineError(MascError):
    pass


class PatternMismatch(EngineError):
    def __init__(self, op_id: str, api_name: str, expected: str, actual: str):
        super().__init__(
            f"operator {op_id} applies to {expected} APIs; {api_name} is {actual}"
        )
        self.op_id = op_id
        self.api_name = api_name


class UnevaluableExpression(EngineError):
    """Internal bug guard: a builtin mutant produced an expression the
    string oracle cannot reduce."""


class UnsupportedConstruct(EngineError):
    def __init__(self, node: str):
        super().__init__(f"unsupported construct in string expression: {node}")
        self.node = node


# --- codegen / seeding ----------------------------------------------------


class RenderError(MascError):
    def __init__(self, reason: str):
        super().__init__(f"render failed: {reason}")
        self.reason = reason


class InjectionInvalid(MascError):
    def __init__(self, reason: str):
        super().__init__(f"injection produced invalid source: {reason}")
        self.reason = reason


class NoSitesFound(MascError):
    def __init__(self, scope: str):
        super().__init__(f"no seeding sites found for scope {scope!r}")
        self.scope = scope


# --- detector harness / reporting ----------------------------------------


class BaselineFailed(MascError):
    def __init__(self, verdict: str, detail: str = ""):
        msg = f"baseline detector run failed ({verdict})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.verdict = verdict


class SarifParseError(MascError):
    pass


class UnsupportedVersion(SarifParseError):
    def __init__(self, version: str):
        super().__init__(f"unsupported SARIF version {version!r} (need 2.1.0)")
        self.version = version


class ModeMisuse(MascError):
    def __init__(self, mode: str, reason: str):
        super().__init__(f"match mode {mode!r}: {reason}")
        self.mode = mode
