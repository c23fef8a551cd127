"""Seeding mutants into source trees under the three scopes.

Main scope renders the template app with the mutant at the top of main.
Similarity scope appends a mutant after every statement that already
uses a similar API.  Exhaustive scope seeds at the start of every
statement-bearing block plus once per class body (wrapped in a fresh
method there).

Injection is insert-only: existing text is never modified, so the
original token stream is always a subsequence of the mutated one.  The
input app directory itself is never touched; everything happens in
copies under the campaign output directory.
"""

from __future__ import annotations

import json
import logging
import shutil
from dataclasses import dataclass, field
from pathlib import Path

from .catalog import ApiCatalog, ApiDescriptor, RESTRICTIVE
from .codegen import render_main_template
from .config import CampaignConfig
from .errors import InjectionInvalid, InvalidValue, NoSitesFound, RenderError
from .operators import (
    MisuseCase,
    MutantSource,
    OperatorRegistry,
    TYPE_DECLARATION,
    build_misuse_case,
)
from .structural import (
    ANON_CLASS_BODY,
    CLASS_BODY,
    STATEMENT_KINDS,
    FileSkipped,
    SyntaxIndex,
    parse_structural,
    tokenize,
)

log = logging.getLogger(__name__)

STATUS_PENDING = "pending"
STATUS_KILLED = "killed"
STATUS_SURVIVED = "survived"
STATUS_ERROR = "error"
STATUS_SKIPPED = "skipped"

REGISTRY_FILE = "mutants.registry"


@dataclass
class MutantRecord:
    id: str
    operator: str
    scope: str
    file: str  # app-relative, '/' separators
    start_line: int
    end_line: int
    status: str = STATUS_PENDING
    excerpt: str = ""
    findings: list = field(default_factory=list)

    def registry_line(self) -> str:
        return "\t".join(
            [self.id, self.operator, self.scope, self.file,
             str(self.start_line), str(self.end_line), self.status]
        )

    @classmethod
    def from_registry_line(cls, line: str) -> "MutantRecord":
        parts = line.rstrip("\n").split("\t")
        return cls(
            id=parts[0], operator=parts[1], scope=parts[2], file=parts[3],
            start_line=int(parts[4]), end_line=int(parts[5]), status=parts[6],
        )

    def meta_dict(self) -> dict:
        return {
            "id": self.id,
            "operator": self.operator,
            "scope": self.scope,
            "file": self.file,
            "start": self.start_line,
            "end": self.end_line,
            "status": self.status,
            "excerpt": self.excerpt,
        }


@dataclass(frozen=True)
class SeedLocation:
    file: str
    line: int  # 1-based line before which the snippet text lands
    offset: int  # char offset of the boundary in the original file text
    block_kind: str
    rationale: str  # "main-entry" | "similar-api" | "exhaustive-site"


@dataclass
class MutatedApp:
    root_dir: str
    records: list[MutantRecord]
    registry_file: str = ""


@dataclass
class CampaignSeed:
    """Everything the detector harness needs: a clean baseline tree and
    the mutated app copies."""

    scope: str
    seeding_mode: str
    baseline_dir: str
    apps: list[MutatedApp]
    records: list[MutantRecord]
    registry_file: str
    output_dir: str


# --- site discovery ---------------------------------------------------------


def _first_boundary_after(index: SyntaxIndex, block: int | None, offset: int):
    candidates = [b for b in index.boundaries if b.block == block and b.offset > offset]
    return min(candidates, key=lambda b: b.offset) if candidates else None


def find_similar_sites(
    index: SyntaxIndex, api: ApiDescriptor, method_match: str = "strict"
) -> list[SeedLocation]:
    """Locations immediately after statements already using the API.

    Restrictive APIs match call sites on the simple name (and, unless
    `loose`, the factory method); flexible APIs match any statement
    mentioning the simple name.
    """
    spots: set[tuple[int | None, int]] = set()
    if api.pattern == RESTRICTIVE:
        for site in index.call_sites:
            if site.receiver_simple_name != api.simple_name:
                continue
            if method_match != "loose" and site.method_name != api.factory_method:
                continue
            spots.add((site.enclosing_block, site.offset))
    else:
        for tok in tokenize(index.text, index.path):
            if tok.kind == "ident" and tok.value == api.simple_name:
                spots.add((index.innermost_block_at(tok.offset), tok.offset))

    locations: dict[int, SeedLocation] = {}
    for block, offset in spots:
        if block is None:
            continue  # top-level references (imports) are not statement positions
        boundary = _first_boundary_after(index, block, offset)
        if boundary is None:
            continue
        kind = index.blocks[block].kind
        locations[boundary.offset] = SeedLocation(
            file=index.path,
            line=boundary.line + 1,
            offset=boundary.offset,
            block_kind=kind,
            rationale="similar-api",
        )
    return [locations[off] for off in sorted(locations)]


def enumerate_exhaustive_sites(index: SyntaxIndex) -> list[SeedLocation]:
    """One site at the start of every statement-bearing block plus one
    per class body."""
    sites: list[SeedLocation] = []
    for block in index.blocks:
        if block.kind in STATEMENT_KINDS or block.kind == CLASS_BODY:
            sites.append(
                SeedLocation(
                    file=index.path,
                    line=block.open_line + 1,
                    offset=block.open_offset,
                    block_kind=block.kind,
                    rationale="exhaustive-site",
                )
            )
    sites.sort(key=lambda s: s.offset)
    return sites


# --- text-level injection -----------------------------------------------------


def _line_indent(text: str, offset: int) -> str:
    line_start = text.rfind("\n", 0, offset) + 1
    indent = []
    for ch in text[line_start:]:
        if ch in (" ", "\t"):
            indent.append(ch)
        else:
            break
    return "".join(indent)


def _indent_block(code: str, indent: str) -> str:
    return "\n".join(indent + line if line.strip() else "" for line in code.splitlines())


def _payload_text(mutant: MutantSource, block_kind: str, name_seed: int) -> str:
    """The code to insert at a site, before indentation.

    Class and anonymous-class bodies are member contexts, so the mutant
    is wrapped in a fresh method there; everywhere else it is inserted
    as plain statements (type declarations double as local classes).
    """
    if block_kind in (CLASS_BODY, ANON_CLASS_BODY):
        probe = f"maskProbe{name_seed}"
        if mutant.kind == TYPE_DECLARATION:
            body = _indent_block(mutant.use_stmt, "    ")
            return (
                f"{mutant.snippet}\n\n"
                f"private void {probe}() throws Exception {{\n{body}\n}}"
            )
        body = _indent_block(mutant.snippet, "    ")
        return f"private void {probe}() throws Exception {{\n{body}\n}}"
    if mutant.kind == TYPE_DECLARATION:
        return f"{mutant.snippet}\n{mutant.use_stmt}"
    return mutant.snippet


def _missing_imports(text: str, imports: tuple[str, ...]) -> list[str]:
    needed = []
    for imp in imports:
        if f"import {imp};" in text:
            continue
        package = imp.rsplit(".", 1)[0]
        if f"import {package}.*;" in text:
            continue
        needed.append(imp)
    return sorted(set(needed))


def _import_insertion_offset(text: str) -> int:
    last_import = -1
    package_end = -1
    pos = 0
    for line in text.splitlines(keepends=True):
        stripped = line.strip()
        if stripped.startswith("import ") and stripped.endswith(";"):
            last_import = pos + len(line)
        elif stripped.startswith("package ") and stripped.endswith(";") and package_end < 0:
            package_end = pos + len(line)
        pos += len(line)
    if last_import >= 0:
        return last_import
    if package_end >= 0:
        return package_end
    return 0


def inject_into_text(
    text: str,
    offset: int,
    mutant: MutantSource,
    block_kind: str,
    name_seed: int = 0,
) -> tuple[str, int, int]:
    """Insert the mutant payload at a boundary offset.

    Returns (new_text, start_line, end_line) with 1-based inclusive
    lines of the payload in the new text.  Import insertion happens
    first, so it never lands inside the recorded span.
    """
    imports = _missing_imports(text, mutant.required_imports)
    if imports:
        imp_offset = _import_insertion_offset(text)
        if imp_offset > offset:
            raise InjectionInvalid("import header located after the seeding site")
        imp_text = "".join(f"import {imp};\n" for imp in imports)
        text = text[:imp_offset] + imp_text + text[imp_offset:]
        offset += len(imp_text)

    indent = _line_indent(text, offset)
    if offset > 0 and text[offset - 1] == "{":
        indent += "    "
    payload = _indent_block(_payload_text(mutant, block_kind, name_seed), indent)
    inserted = "\n" + payload
    new_text = text[:offset] + inserted + text[offset:]
    start_line = text.count("\n", 0, offset) + 2  # payload starts on the next line
    end_line = start_line + payload.count("\n")
    return new_text, start_line, end_line


def inject(
    app_root: str | Path,
    location: SeedLocation,
    mutant: MutantSource,
    mutant_id: str,
    scope: str,
    name_seed: int = 0,
) -> MutantRecord:
    """Inject into one file of an app copy and return the record.

    The modified file must still pass structural parsing; otherwise the
    file is restored and InjectionInvalid raised.
    """
    app_root = Path(app_root)
    target = app_root / location.file
    original = target.read_text(encoding="utf-8")
    new_text, start, end = inject_into_text(
        original, location.offset, mutant, location.block_kind, name_seed
    )
    try:
        parse_structural(new_text, str(target))
    except FileSkipped as exc:
        raise InjectionInvalid(f"post-injection parse failed: {exc.reason}")
    target.write_text(new_text, encoding="utf-8")
    excerpt = next((l.strip() for l in mutant.snippet.splitlines() if l.strip()), "")
    return MutantRecord(
        id=mutant_id,
        operator=mutant.operator_id,
        scope=scope,
        file=location.file,
        start_line=start,
        end_line=end,
        status=STATUS_PENDING,
        excerpt=excerpt,
    )


# --- campaign seeding ----------------------------------------------------------


def _write_registry(records: list[MutantRecord], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        "".join(record.registry_line() + "\n" for record in records), encoding="utf-8"
    )
    # structured copy in the report's mutants[] shape
    structured = path.with_name("mutants.json")
    structured.write_text(
        json.dumps([r.meta_dict() for r in records], indent=2) + "\n",
        encoding="utf-8",
    )


def _write_meta(record: MutantRecord, app_dir: Path) -> None:
    (app_dir / "mutant.meta").write_text(
        json.dumps(record.meta_dict(), indent=2) + "\n", encoding="utf-8"
    )


def _copy_app(src: Path, dst: Path) -> None:
    shutil.copytree(
        src,
        dst,
        ignore=shutil.ignore_patterns(".git", "__pycache__", "*.class"),
    )


def _parse_app(app_src: Path) -> list[SyntaxIndex]:
    indexes = []
    for java_file in sorted(app_src.rglob("*.java")):
        rel = java_file.relative_to(app_src).as_posix()
        try:
            index = parse_structural(java_file.read_text(encoding="utf-8"), rel)
        except (FileSkipped, UnicodeDecodeError) as exc:
            log.warning("skipping %s: %s", rel, exc)
            continue
        indexes.append(index)
    return indexes


def _applicable_operators(
    config: CampaignConfig, registry: OperatorRegistry, case: MisuseCase
) -> list[str]:
    return [op for op in config.operators if registry.applicable(op, case.api)]


def seed_campaign(
    config: CampaignConfig,
    registry: OperatorRegistry,
    catalog: ApiCatalog,
) -> CampaignSeed:
    """Generate mutants and seed them per the configured scope."""
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    api = catalog.lookup(config.api_name)
    case = build_misuse_case(
        api,
        catalog,
        insecure_param=config.insecure_param,
        secure_param=config.secure_param,
        invocation=config.invocation,
    )
    operators = _applicable_operators(config, registry, case)

    if config.scope == "main":
        seed = _seed_main(config, registry, case, operators, out)
    else:
        seed = _seed_app_scope(config, registry, case, operators, out)

    _write_registry(seed.records, Path(seed.registry_file))
    return seed


def _seed_main(
    config: CampaignConfig,
    registry: OperatorRegistry,
    case: MisuseCase,
    operators: list[str],
    out: Path,
) -> CampaignSeed:
    baseline_dir = out / "baseline"
    if baseline_dir.exists():
        shutil.rmtree(baseline_dir)
    render_main_template(None).write_to(baseline_dir)

    apps: list[MutatedApp] = []
    records: list[MutantRecord] = []
    for i, op_id in enumerate(operators):
        mutant_id = f"m{i:04d}-{op_id}"
        app_dir = out / "mutants" / mutant_id
        if app_dir.exists():
            shutil.rmtree(app_dir)
        try:
            mutant = registry.instantiate(op_id, case, config_values=config.custom)
            template = render_main_template(mutant)
            template.write_to(app_dir)
            excerpt = next(
                (l.strip() for l in mutant.snippet.splitlines() if l.strip()), ""
            )
            record = MutantRecord(
                id=mutant_id,
                operator=op_id,
                scope="main",
                file=template.mutant_file,
                start_line=template.mutant_span[0],
                end_line=template.mutant_span[1],
                status=STATUS_PENDING,
                excerpt=excerpt,
            )
        except (RenderError, InjectionInvalid) as exc:
            log.error("operator %s failed to render: %s", op_id, exc)
            record = MutantRecord(
                id=mutant_id, operator=op_id, scope="main",
                file="", start_line=0, end_line=0, status=STATUS_ERROR,
            )
        records.append(record)
        if record.status != STATUS_ERROR:
            _write_meta(record, app_dir)
            apps.append(MutatedApp(root_dir=str(app_dir), records=[record]))

    return CampaignSeed(
        scope="main",
        seeding_mode=config.seeding_mode,
        baseline_dir=str(baseline_dir),
        apps=apps,
        records=records,
        registry_file=str(out / REGISTRY_FILE),
        output_dir=str(out),
    )


def _sites_for_scope(
    config: CampaignConfig, case: MisuseCase, indexes: list[SyntaxIndex]
) -> list[SeedLocation]:
    sites: list[SeedLocation] = []
    for index in indexes:
        if config.scope == "similarity":
            sites.extend(
                find_similar_sites(index, case.api, config.similarity_method_match)
            )
        else:
            sites.extend(enumerate_exhaustive_sites(index))
    sites.sort(key=lambda s: (s.file, s.offset))
    return sites


def _seed_app_scope(
    config: CampaignConfig,
    registry: OperatorRegistry,
    case: MisuseCase,
    operators: list[str],
    out: Path,
) -> CampaignSeed:
    app_src = Path(config.app_src)  # validated earlier
    if out.resolve().is_relative_to(app_src.resolve()):
        raise InvalidValue("outputDir", str(out), "must not live inside appSrc")

    baseline_dir = out / "baseline"
    if baseline_dir.exists():
        shutil.rmtree(baseline_dir)
    _copy_app(app_src, baseline_dir)

    indexes = _parse_app(app_src)
    sites = _sites_for_scope(config, case, indexes)
    if config.scope == "similarity" and not sites:
        raise NoSitesFound("similarity")

    records: list[MutantRecord] = []
    apps: list[MutatedApp] = []
    seq = 0

    if config.seeding_mode == "per-mutant-copy":
        for op_id in operators:
            for site in sites:
                mutant_id = f"m{seq:04d}-{op_id}"
                app_dir = out / "mutants" / mutant_id
                if app_dir.exists():
                    shutil.rmtree(app_dir)
                _copy_app(app_src, app_dir)
                try:
                    mutant = registry.instantiate(
                        op_id, case, config_values=config.custom
                    )
                    record = inject(app_dir, site, mutant, mutant_id, config.scope)
                except InjectionInvalid as exc:
                    log.error("mutant %s not shipped: %s", mutant_id, exc)
                    record = MutantRecord(
                        id=mutant_id, operator=op_id, scope=config.scope,
                        file=site.file, start_line=site.line, end_line=site.line,
                        status=STATUS_ERROR,
                    )
                records.append(record)
                if record.status != STATUS_ERROR:
                    _write_meta(record, app_dir)
                    apps.append(MutatedApp(root_dir=str(app_dir), records=[record]))
                else:
                    shutil.rmtree(app_dir, ignore_errors=True)
                seq += 1
    else:  # batched: one copy, offsets adjusted per file as text grows.
        # Sites are visited in ascending offset order so the per-file
        # char delta correctly maps original offsets into the grown text.
        batch_dir = out / "batch"
        if batch_dir.exists():
            shutil.rmtree(batch_dir)
        _copy_app(app_src, batch_dir)
        texts: dict[str, str] = {}
        deltas: dict[str, int] = {}
        batch_records: list[MutantRecord] = []
        for site in sites:
            for op_id in operators:
                mutant_id = f"m{seq:04d}-{op_id}"
                file_key = site.file
                text = texts.get(file_key)
                if text is None:
                    text = (batch_dir / file_key).read_text(encoding="utf-8")
                    texts[file_key] = text
                    deltas[file_key] = 0
                try:
                    mutant = registry.instantiate(
                        op_id, case, name_seed=seq, config_values=config.custom
                    )
                    before = len(text)
                    new_text, start, end = inject_into_text(
                        text, site.offset + deltas[file_key], mutant,
                        site.block_kind, name_seed=seq,
                    )
                    parse_structural(new_text, file_key)
                    texts[file_key] = new_text
                    deltas[file_key] += len(new_text) - before
                    excerpt = next(
                        (l.strip() for l in mutant.snippet.splitlines() if l.strip()),
                        "",
                    )
                    record = MutantRecord(
                        id=mutant_id, operator=op_id, scope=config.scope,
                        file=file_key, start_line=start, end_line=end,
                        status=STATUS_PENDING, excerpt=excerpt,
                    )
                except (InjectionInvalid, FileSkipped) as exc:
                    log.error("mutant %s not shipped: %s", mutant_id, exc)
                    record = MutantRecord(
                        id=mutant_id, operator=op_id, scope=config.scope,
                        file=file_key, start_line=site.line, end_line=site.line,
                        status=STATUS_ERROR,
                    )
                batch_records.append(record)
                seq += 1
        for file_key, text in texts.items():
            (batch_dir / file_key).write_text(text, encoding="utf-8")
        records = batch_records
        live = [r for r in batch_records if r.status != STATUS_ERROR]
        apps = [MutatedApp(root_dir=str(batch_dir), records=live)] if live else []

    return CampaignSeed(
        scope=config.scope,
        seeding_mode=config.seeding_mode,
        baseline_dir=str(baseline_dir),
        apps=apps,
        records=records,
        registry_file=str(out / REGISTRY_FILE),
        output_dir=str(out),
    )
