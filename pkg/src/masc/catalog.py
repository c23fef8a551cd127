"""Declarative catalog of crypto APIs and their invocation patterns.

Operators never hardcode an API: everything they need (factory method,
parameter slot, members to override, imports) comes from an
ApiDescriptor.  New APIs are new catalog entries, not code changes.

Two patterns are distinguished: `restrictive` APIs are driven by a
string parameter passed to a factory method; `flexible` APIs are
interfaces or abstract classes whose security behavior the developer
implements.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import AmbiguousSimpleName, CatalogParseError, InvalidDescriptor, NotFound

RESTRICTIVE = "restrictive"
FLEXIBLE = "flexible"

_IDENT_OK = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_$")


def _is_java_identifier(name: str) -> bool:
    return bool(name) and not name[0].isdigit() and all(c in _IDENT_OK for c in name)


@dataclass(frozen=True)
class MethodSignature:
    name: str
    params: tuple[tuple[str, str], ...]  # (type name, param name)
    return_type: str
    throws: tuple[str, ...] = ()

    def validate(self) -> None:
        if not _is_java_identifier(self.name):
            raise InvalidDescriptor(self.name, "method name is not a valid identifier")
        names = [p for _, p in self.params]
        if len(names) != len(set(names)):
            raise InvalidDescriptor(self.name, "duplicate parameter names")
        for _, pname in self.params:
            if not _is_java_identifier(pname):
                raise InvalidDescriptor(self.name, f"bad parameter name {pname!r}")
        if not self.return_type:
            raise InvalidDescriptor(self.name, "missing return type")


@dataclass(frozen=True)
class ApiDescriptor:
    name: str
    pattern: str  # RESTRICTIVE or FLEXIBLE
    factory_method: str = ""
    param_position: int = -1
    secure_values: tuple[str, ...] = ()
    insecure_values: tuple[str, ...] = ()
    members: tuple[MethodSignature, ...] = ()
    kind: str = ""  # "interface" | "abstract-class" (flexible only)
    required_imports: tuple[str, ...] = ()
    extended_by: str = ""  # FQN of the abstract-class sibling, if any

    @property
    def simple_name(self) -> str:
        return self.name.rsplit(".", 1)[-1]

    def validate(self) -> None:
        if self.pattern not in (RESTRICTIVE, FLEXIBLE):
            raise InvalidDescriptor(self.name, f"unknown pattern {self.pattern!r}")
        if self.pattern == RESTRICTIVE:
            if not self.factory_method:
                raise InvalidDescriptor(self.name, "restrictive API needs factory_method")
            if self.param_position < 0:
                raise InvalidDescriptor(self.name, "restrictive API needs param_position >= 0")
            if not self.insecure_values:
                raise InvalidDescriptor(self.name, "restrictive API needs insecure_values")
        else:
            if not self.members:
                raise InvalidDescriptor(self.name, "flexible API needs members")
            if self.kind not in ("interface", "abstract-class"):
                raise InvalidDescriptor(self.name, f"bad kind {self.kind!r}")
            for member in self.members:
                member.validate()


def classify_pattern(descriptor: ApiDescriptor) -> str:
    """Which operator family applies to this API."""
    return descriptor.pattern


@dataclass(frozen=True)
class ApiCatalog:
    apis: tuple[ApiDescriptor, ...]

    def lookup(self, name: str) -> ApiDescriptor:
        for api in self.apis:
            if api.name == name:
                return api
        matches = [api for api in self.apis if api.simple_name == name]
        if len(matches) == 1:
            return matches[0]
        if len(matches) > 1:
            raise AmbiguousSimpleName(name, [api.name for api in matches])
        raise NotFound(name)

    def names(self) -> list[str]:
        return [api.name for api in self.apis]


def lookup_api(catalog: ApiCatalog, name: str) -> ApiDescriptor:
    return catalog.lookup(name)


# --- (de)serialization ----------------------------------------------------


def _signature_from_dict(raw: dict, where: str) -> MethodSignature:
    try:
        return MethodSignature(
            name=raw["name"],
            params=tuple((p["type"], p["name"]) for p in raw.get("params", [])),
            return_type=raw["return"],
            throws=tuple(raw.get("throws", [])),
        )
    except (KeyError, TypeError) as exc:
        raise CatalogParseError(where, f"bad method signature: {exc}")


def _signature_to_dict(sig: MethodSignature) -> dict:
    out: dict = {
        "name": sig.name,
        "params": [{"type": t, "name": n} for t, n in sig.params],
        "return": sig.return_type,
    }
    if sig.throws:
        out["throws"] = list(sig.throws)
    return out


def _descriptor_from_dict(raw: dict, where: str) -> ApiDescriptor:
    if "name" not in raw or "pattern" not in raw:
        raise CatalogParseError(where, "descriptor needs name and pattern")
    desc = ApiDescriptor(
        name=raw["name"],
        pattern=raw["pattern"],
        factory_method=raw.get("factoryMethod", ""),
        param_position=raw.get("paramPosition", -1),
        secure_values=tuple(raw.get("secureValues", [])),
        insecure_values=tuple(raw.get("insecureValues", [])),
        members=tuple(
            _signature_from_dict(m, f"{where}.members") for m in raw.get("members", [])
        ),
        kind=raw.get("kind", ""),
        required_imports=tuple(raw.get("requiredImports", [])),
        extended_by=raw.get("extendedBy", ""),
    )
    desc.validate()
    return desc


def _descriptor_to_dict(desc: ApiDescriptor) -> dict:
    out: dict = {"name": desc.name, "pattern": desc.pattern}
    if desc.pattern == RESTRICTIVE:
        out["factoryMethod"] = desc.factory_method
        out["paramPosition"] = desc.param_position
        out["secureValues"] = list(desc.secure_values)
        out["insecureValues"] = list(desc.insecure_values)
    else:
        out["kind"] = desc.kind
        out["members"] = [_signature_to_dict(m) for m in desc.members]
    if desc.required_imports:
        out["requiredImports"] = list(desc.required_imports)
    if desc.extended_by:
        out["extendedBy"] = desc.extended_by
    return out


def parse_catalog(text: str, where: str = "<string>") -> ApiCatalog:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogParseError(where, str(exc))
    if not isinstance(doc, dict) or "apis" not in doc:
        raise CatalogParseError(where, "expected an object with an 'apis' array")
    apis = tuple(
        _descriptor_from_dict(raw, f"{where}#apis[{i}]") for i, raw in enumerate(doc["apis"])
    )
    return ApiCatalog(apis=apis)


def serialize_catalog(catalog: ApiCatalog) -> str:
    doc = {"version": 1, "apis": [_descriptor_to_dict(api) for api in catalog.apis]}
    return json.dumps(doc, indent=2) + "\n"


def load_catalog(path: str | Path | None = None) -> ApiCatalog:
    """Load a catalog document; None loads the bundled copy."""
    if path is None:
        text = resources.files("masc").joinpath("data/catalog.json").read_text("utf-8")
        return parse_catalog(text, where="<bundled>")
    path = Path(path)
    return parse_catalog(path.read_text(encoding="utf-8"), where=str(path))
