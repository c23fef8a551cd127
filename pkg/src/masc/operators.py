"""Builtin mutation operators and the operator registry.

Twelve builtins: R1-R6 disguise the insecure string parameter of a
restrictive API's factory call, F1-F6 build insecure implementations of
a flexible API.  Every restrictive mutant records the argument
expression it passes, and the engine proves that expression evaluable by
the independent oracle in strexpr before releasing the mutant.

Instantiation is pure: the same (operator, case, params, name_seed)
yields a byte-identical mutant.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Callable

from .catalog import FLEXIBLE, RESTRICTIVE, ApiCatalog, ApiDescriptor, MethodSignature
from .errors import PatternMismatch, UnevaluableExpression, UnknownOperator, UnsupportedConstruct
from .strexpr import evaluate_string_expression, java_trim, quote_java_string

log = logging.getLogger(__name__)

STATEMENT_SEQUENCE = "statement-sequence"
TYPE_DECLARATION = "type-declaration"

THREAT_ACCIDENTAL = "T1"
THREAT_HARMFUL_FIX = "T2"
THREAT_EVASIVE = "T3"


@dataclass(frozen=True)
class OperatorInfo:
    id: str
    name: str
    pattern: str  # RESTRICTIVE or FLEXIBLE
    threat_tags: tuple[str, ...]
    params: dict[str, object] = field(default_factory=dict)
    origin: str = "builtin"  # "builtin" | "plugin"
    description: str = ""


@dataclass(frozen=True)
class MisuseCase:
    """The base insecure usage a campaign mutates."""

    api: ApiDescriptor
    insecure_param: str
    secure_param: str
    baseline_snippet: str
    extension_api: ApiDescriptor | None = None


@dataclass(frozen=True)
class MutantSource:
    """One generated misuse-case variant, not yet seeded anywhere."""

    operator_id: str
    snippet: str
    required_imports: tuple[str, ...]
    declared_names: tuple[str, ...]
    arg_expression: str | None
    kind: str  # STATEMENT_SEQUENCE or TYPE_DECLARATION
    decl_statements: tuple[str, ...] = ()
    type_name: str = ""  # primary generated type (type-declaration mutants)
    use_stmt: str = ""  # instantiation statement accompanying a type declaration
    api_name: str = ""


class _NameAllocator:
    """Deterministic fresh-name source: base + counter, counters start at
    the per-mutant seed so batched seeding never collides."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._counters: dict[str, int] = {}

    def fresh(self, base: str) -> str:
        n = self._counters.get(base, self.seed)
        self._counters[base] = n + 1
        return f"{base}{n}"


def build_misuse_case(
    api: ApiDescriptor,
    catalog: ApiCatalog | None = None,
    insecure_param: str | None = None,
    secure_param: str | None = None,
    invocation: str | None = None,
) -> MisuseCase:
    """Assemble the base misuse case for an API, applying config overrides."""
    if invocation and api.pattern == RESTRICTIVE and invocation != api.factory_method:
        api = replace(api, factory_method=invocation)
    insecure = insecure_param or (api.insecure_values[0] if api.insecure_values else "DES")
    secure = secure_param or (api.secure_values[0] if api.secure_values else "")
    extension = None
    if api.pattern == FLEXIBLE:
        if api.kind == "abstract-class":
            extension = api
        elif api.extended_by and catalog is not None:
            try:
                extension = catalog.lookup(api.extended_by)
            except Exception:
                extension = None
    if api.pattern == RESTRICTIVE:
        baseline = f"{api.simple_name}.{api.factory_method}({quote_java_string(insecure)});"
    else:
        baseline = _flexible_class_text(
            api, "BaselineImpl", _body_empty, _NameAllocator(0)
        )
    return MisuseCase(
        api=api,
        insecure_param=insecure,
        secure_param=secure,
        baseline_snippet=baseline,
        extension_api=extension,
    )


# --- restrictive operators -------------------------------------------------


def _sentinel_for(value: str) -> str:
    for candidate in "XZQWKJYVUHGNMB":
        if candidate not in value:
            return candidate
    for a in "XZQWKJ":
        for b in "XZQWKJ":
            if a + b not in value:
                return a + b
    raise UnevaluableExpression(f"no sentinel available for {value!r}")


def _r1_case_transform(case: MisuseCase, params: dict, names: _NameAllocator):
    flipped = case.insecure_param.swapcase()
    expr = quote_java_string(flipped)
    return [], expr


def _r2_concatenation(case: MisuseCase, params: dict, names: _NameAllocator):
    value = case.insecure_param
    split = int(params.get("split_index", 1))
    split = max(0, min(split, len(value)))
    expr = f"{quote_java_string(value[:split])} + {quote_java_string(value[split:])}"
    return [], expr


# Inline-transform steps. Each entry: (applicable?, backward-construct)
# where backward-construct maps the value *after* the call to the value
# *before* it plus the rendered call text.
def _step_replace(value: str):
    sentinel = _sentinel_for(value)
    pos = min(1, len(value))
    before = value[:pos] + sentinel + value[pos:]
    call = f".replace({quote_java_string(sentinel)}, \"\")"
    return before, call


def _step_substring(value: str):
    before = "xx" + value
    return before, ".substring(2)"


def _step_concat(value: str):
    before, tail = value[:-1], value[-1:]
    return before, f".concat({quote_java_string(tail)})"


def _step_upper(value: str):
    return value.lower(), ".toUpperCase()"


def _step_lower(value: str):
    return value.upper(), ".toLowerCase()"


def _step_trim(value: str):
    return " " + value + " ", ".trim()"


_CHAIN_STEPS = [
    ("replace", lambda v: True, _step_replace),
    ("substring", lambda v: True, _step_substring),
    ("concat", lambda v: len(v) >= 2, _step_concat),
    ("toUpperCase", lambda v: v == v.upper() and v != v.lower(), _step_upper),
    ("toLowerCase", lambda v: v == v.lower() and v != v.upper(), _step_lower),
    ("trim", lambda v: v == java_trim(v) and len(v) > 0, _step_trim),
]


def _r3_inline_transform(case: MisuseCase, params: dict, names: _NameAllocator):
    chain_len = max(1, int(params.get("chain_len", 1)))
    value = case.insecure_param
    calls: list[str] = []
    # Build backwards: each step rewrites the literal so the appended
    # call restores the previous value exactly.
    for i in range(chain_len):
        for offset in range(len(_CHAIN_STEPS)):
            _, applicable, construct = _CHAIN_STEPS[(i + offset) % len(_CHAIN_STEPS)]
            if applicable(value):
                value, call = construct(value)
                calls.append(call)
                break
    expr = quote_java_string(value) + "".join(reversed(calls))
    return [], expr


def _r4_variable_alias(case: MisuseCase, params: dict, names: _NameAllocator):
    depth = max(1, int(params.get("alias_depth", 2)))
    decls: list[str] = []
    prev = quote_java_string(case.insecure_param)
    var = ""
    for _ in range(depth):
        var = names.fresh("maskVar")
        decls.append(f"String {var} = {prev};")
        prev = var
    return decls, var


def _r5_helper_method(case: MisuseCase, params: dict, names: _NameAllocator):
    helper = names.fresh("MaskHelper")
    var = names.fresh("maskVar")
    literal = quote_java_string(case.insecure_param)
    decls = [
        f"class {helper} {{\n"
        f"    String algorithmName() {{\n"
        f"        return {literal};\n"
        f"    }}\n"
        f"}}",
        f"String {var} = new {helper}().algorithmName();",
    ]
    return decls, var


def _r6_secure_replacement(case: MisuseCase, params: dict, names: _NameAllocator):
    # The harmful-fix shape: the call looks exactly like the baseline
    # with the secure parameter swapped back out for the insecure one.
    return [], quote_java_string(case.insecure_param)


_RESTRICTIVE_BUILDERS: dict[str, Callable] = {
    "R1": _r1_case_transform,
    "R2": _r2_concatenation,
    "R3": _r3_inline_transform,
    "R4": _r4_variable_alias,
    "R5": _r5_helper_method,
    "R6": _r6_secure_replacement,
}


def instantiate_restrictive(
    op_id: str,
    case: MisuseCase,
    params: dict | None = None,
    name_seed: int = 0,
) -> MutantSource:
    if op_id not in _RESTRICTIVE_BUILDERS:
        raise UnknownOperator(op_id)
    if case.api.pattern != RESTRICTIVE:
        raise PatternMismatch(op_id, case.api.name, RESTRICTIVE, case.api.pattern)
    names = _NameAllocator(name_seed)
    decls, arg_expr = _RESTRICTIVE_BUILDERS[op_id](case, params or {}, names)
    call = f"{case.api.simple_name}.{case.api.factory_method}({arg_expr});"
    snippet = "\n".join([*decls, call])
    try:
        evaluate_string_expression(decls, arg_expr)
    except UnsupportedConstruct as exc:
        raise UnevaluableExpression(f"{op_id}: {exc}") from exc
    declared = tuple(
        name for name in _collect_declared(decls)
    )
    return MutantSource(
        operator_id=op_id,
        snippet=snippet,
        required_imports=case.api.required_imports,
        declared_names=declared,
        arg_expression=arg_expr,
        kind=STATEMENT_SEQUENCE,
        decl_statements=tuple(decls),
        api_name=case.api.name,
    )


def _collect_declared(decls: list[str]) -> list[str]:
    names = []
    for decl in decls:
        head = decl.split("{", 1)[0].strip()
        parts = head.replace("=", " ").split()
        if parts[:1] == ["class"] and len(parts) > 1:
            names.append(parts[1])
        elif parts[:1] == ["String"] and len(parts) > 1:
            names.append(parts[1])
    return names


# --- flexible operators ------------------------------------------------------


def _default_return(sig: MethodSignature, null_arrays: bool) -> str:
    rt = sig.return_type
    if rt == "void":
        return ""
    if rt.endswith("[]"):
        if null_arrays:
            return "return null;"
        return f"return new {rt[:-2]}[0];"
    if rt == "boolean":
        return "return false;"
    if rt in ("int", "long", "short", "byte", "char", "float", "double"):
        return "return 0;"
    return "return null;"


def _body_empty(sig: MethodSignature, names: _NameAllocator) -> list[str]:
    if sig.return_type == "void":
        return []
    return [_default_return(sig, null_arrays=True)]


def _body_dead_throw(sig: MethodSignature, names: _NameAllocator) -> list[str]:
    lines: list[str] = []
    if sig.throws:
        lines += [
            'if ("x".equals("")) {',
            f"    throw new {sig.throws[0]}();",
            "}",
        ]
    ret = _default_return(sig, null_arrays=False)
    if ret:
        lines.append(ret)
    return lines


def _body_idle_loop(sig: MethodSignature, names: _NameAllocator) -> list[str]:
    idx = names.fresh("maskIdx")
    lines = [f"for (int {idx} = 0; {idx} < 0; {idx}++) {{", "}"]
    ret = _default_return(sig, null_arrays=False)
    if ret:
        lines.append(ret)
    return lines


def _body_blunt_return(sig: MethodSignature, names: _NameAllocator) -> list[str]:
    if sig.return_type == "void":
        return ["return;"]
    return [_default_return(sig, null_arrays=True)]


def _render_method(sig: MethodSignature, body_lines: list[str], indent: str) -> str:
    params = ", ".join(f"{t} {n}" for t, n in sig.params)
    throws = f" throws {', '.join(sig.throws)}" if sig.throws else ""
    header = f"{indent}@Override\n{indent}public {sig.return_type} {sig.name}({params}){throws} {{"
    lines = [header]
    for line in body_lines:
        lines.append(f"{indent}    {line}" if line else "")
    lines.append(f"{indent}}}")
    return "\n".join(lines)


def _flexible_class_text(
    api: ApiDescriptor,
    class_name: str,
    body_builder: Callable[[MethodSignature, _NameAllocator], list[str]],
    names: _NameAllocator,
) -> str:
    relation = "extends" if api.kind == "abstract-class" else "implements"
    methods = [
        _render_method(sig, body_builder(sig, names), "    ") for sig in api.members
    ]
    body = "\n\n".join(methods)
    return f"class {class_name} {relation} {api.simple_name} {{\n\n{body}\n}}"


def _anon_object_text(
    api: ApiDescriptor,
    var_name: str,
    body_builder: Callable[[MethodSignature, _NameAllocator], list[str]],
    names: _NameAllocator,
) -> str:
    methods = [
        _render_method(sig, body_builder(sig, names), "    ") for sig in api.members
    ]
    body = "\n\n".join(methods)
    return f"{api.simple_name} {var_name} = new {api.simple_name}() {{\n\n{body}\n}};"


_FLEXIBLE_BODIES: dict[str, Callable] = {
    "F1": _body_dead_throw,
    "F2": _body_idle_loop,
    "F3": _body_blunt_return,
    "F4": _body_empty,
    "F5": _body_empty,
    "F6": _body_empty,
}


def instantiate_flexible(
    op_id: str,
    case: MisuseCase,
    params: dict | None = None,
    name_seed: int = 0,
) -> MutantSource:
    if op_id not in _FLEXIBLE_BODIES:
        raise UnknownOperator(op_id)
    if case.api.pattern != FLEXIBLE:
        raise PatternMismatch(op_id, case.api.name, FLEXIBLE, case.api.pattern)

    api = case.api
    if op_id == "F5":
        if case.extension_api is None:
            raise PatternMismatch(op_id, api.name, "abstract-class", api.kind or api.pattern)
        api = case.extension_api

    names = _NameAllocator(name_seed)
    body_builder = _FLEXIBLE_BODIES[op_id]

    if op_id == "F6":
        var = names.fresh("maskVar")
        snippet = _anon_object_text(case.api, var, body_builder, names)
        return MutantSource(
            operator_id=op_id,
            snippet=snippet,
            required_imports=case.api.required_imports,
            declared_names=(var,),
            arg_expression=None,
            kind=STATEMENT_SEQUENCE,
            api_name=case.api.name,
        )

    class_name = names.fresh("MaskClass")
    var = names.fresh("maskVar")
    snippet = _flexible_class_text(api, class_name, body_builder, names)
    use_stmt = f"{api.simple_name} {var} = new {class_name}();"
    return MutantSource(
        operator_id=op_id,
        snippet=snippet,
        required_imports=api.required_imports,
        declared_names=(class_name, var),
        arg_expression=None,
        kind=TYPE_DECLARATION,
        type_name=class_name,
        use_stmt=use_stmt,
        api_name=api.name,
    )


# --- registry ---------------------------------------------------------------

_BUILTIN_INFOS: tuple[OperatorInfo, ...] = (
    OperatorInfo(
        "R1", "StringCaseTransform", RESTRICTIVE, (THREAT_ACCIDENTAL, THREAT_EVASIVE),
        description="factory parameter literal with flipped letter case",
    ),
    OperatorInfo(
        "R2", "StringConcatenation", RESTRICTIVE, (THREAT_EVASIVE,),
        params={"split_index": 1},
        description="parameter literal split into a + concatenation",
    ),
    OperatorInfo(
        "R3", "StringInlineTransform", RESTRICTIVE, (THREAT_EVASIVE,),
        params={"chain_len": 1},
        description="parameter rebuilt through a chain of string method calls",
    ),
    OperatorInfo(
        "R4", "VariableAlias", RESTRICTIVE, (THREAT_ACCIDENTAL, THREAT_EVASIVE),
        params={"alias_depth": 2},
        description="parameter routed through successive local variables",
    ),
    OperatorInfo(
        "R5", "HelperMethodIndirection", RESTRICTIVE, (THREAT_ACCIDENTAL, THREAT_EVASIVE),
        description="parameter returned by a generated helper method",
    ),
    OperatorInfo(
        "R6", "SecureParameterReplacement", RESTRICTIVE, (THREAT_HARMFUL_FIX,),
        description="baseline-shaped call with the insecure parameter put back",
    ),
    OperatorInfo(
        "F1", "IneffectiveExceptionOverride", FLEXIBLE, (THREAT_HARMFUL_FIX, THREAT_EVASIVE),
        description="security callbacks throw only under a never-true guard",
    ),
    OperatorInfo(
        "F2", "IrrelevantLoopOverride", FLEXIBLE, (THREAT_EVASIVE,),
        description="security callbacks busy themselves with an empty-range loop",
    ),
    OperatorInfo(
        "F3", "IneffectiveReturnOverride", FLEXIBLE, (THREAT_HARMFUL_FIX, THREAT_EVASIVE),
        description="security-sensitive returns replaced by constant ineffective values",
    ),
    OperatorInfo(
        "F4", "InterfaceImplementation", FLEXIBLE, (THREAT_ACCIDENTAL,),
        description="named class implementing the API with no-op overrides",
    ),
    OperatorInfo(
        "F5", "AbstractClassExtension", FLEXIBLE, (THREAT_ACCIDENTAL,),
        description="named class extending the abstract API with no-op overrides",
    ),
    OperatorInfo(
        "F6", "AnonymousInnerObject", FLEXIBLE, (THREAT_ACCIDENTAL,),
        description="anonymous inner object of the API with no-op overrides",
    ),
)

BUILTIN_IDS = tuple(info.id for info in _BUILTIN_INFOS)


class OperatorRegistry:
    """Builtin operators plus any loaded plugins."""

    def __init__(self):
        self._builtin = {info.id: info for info in _BUILTIN_INFOS}
        self._plugins: dict[str, object] = {}  # id -> plugins.PluginOperator
        self.load_warnings: list = []

    def has(self, op_id: str) -> bool:
        return op_id in self._builtin or op_id in self._plugins

    def info(self, op_id: str) -> OperatorInfo:
        if op_id in self._builtin:
            return self._builtin[op_id]
        if op_id in self._plugins:
            return self._plugins[op_id].info  # type: ignore[union-attr]
        raise UnknownOperator(op_id)

    def list(self) -> list[OperatorInfo]:
        ordered = [self._builtin[op_id] for op_id in BUILTIN_IDS]
        ordered += [self._plugins[pid].info for pid in sorted(self._plugins)]  # type: ignore[union-attr]
        return ordered

    def register_plugin(self, plugin) -> None:
        self._plugins[plugin.info.id] = plugin

    def declared_config_keys(self) -> frozenset[str]:
        keys: set[str] = set()
        for plugin in self._plugins.values():
            keys.update(plugin.declared_keys)  # type: ignore[union-attr]
        return frozenset(keys)

    def plugin_defaults(self) -> dict[str, str]:
        defaults: dict[str, str] = {}
        for pid in sorted(self._plugins):
            defaults.update(self._plugins[pid].key_defaults)  # type: ignore[union-attr]
        return defaults

    def instantiate(
        self,
        op_id: str,
        case: MisuseCase,
        params: dict | None = None,
        name_seed: int = 0,
        config_values: dict[str, str] | None = None,
    ) -> MutantSource:
        if op_id in self._plugins:
            return self._plugins[op_id].instantiate(  # type: ignore[union-attr]
                case, config_values or {}, name_seed=name_seed
            )
        info = self.info(op_id)
        merged = dict(info.params)
        if params:
            merged.update(params)
        if info.pattern == RESTRICTIVE:
            return instantiate_restrictive(op_id, case, merged, name_seed=name_seed)
        return instantiate_flexible(op_id, case, merged, name_seed=name_seed)

    def applicable(self, op_id: str, api: ApiDescriptor) -> bool:
        return self.info(op_id).pattern == api.pattern


def list_operators(registry: OperatorRegistry) -> list[OperatorInfo]:
    return registry.list()
