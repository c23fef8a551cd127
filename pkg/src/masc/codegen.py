"""Assembly of mutants into compilable Java compilation units.

Output is byte-deterministic: sorted deduplicated imports, fixed section
layout, LF line endings.  The Main-scope template is a minimal one-class
app whose `main` body is wrapped in a single try/catch so factory calls
with checked exceptions stay compilable without per-call ceremony.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import RenderError
from .operators import MutantSource, STATEMENT_SEQUENCE, TYPE_DECLARATION
from .structural import check_snippet

TEMPLATE_PACKAGE = "app.mutated"
MAIN_CLASS = "Main"
_INDENT = "    "


def fresh_identifier(base: str, used: set[str]) -> str:
    """Return `base` if unused, else base + smallest free counter.
    The result is added to `used`."""
    name = base
    if name in used:
        n = 0
        while f"{base}{n}" in used:
            n += 1
        name = f"{base}{n}"
    used.add(name)
    return name


def _primary_type_name(type_decl: str) -> str:
    tokens = type_decl.replace("{", " { ").split()
    for i, tok in enumerate(tokens):
        if tok in ("class", "interface", "enum", "record") and i + 1 < len(tokens):
            return tokens[i + 1].split("<", 1)[0]
    raise RenderError("type declaration has no recognizable type name")


@dataclass(frozen=True)
class CompilationUnit:
    package_name: str
    imports: tuple[str, ...]
    type_decls: tuple[str, ...]

    @property
    def file_name(self) -> str:
        return _primary_type_name(self.type_decls[0]) + ".java"

    @property
    def text(self) -> str:
        return assemble_compilation_unit(self.package_name, self.imports, self.type_decls)


def assemble_compilation_unit(
    package: str, imports: tuple[str, ...] | list[str], type_decls: tuple[str, ...] | list[str]
) -> str:
    if not type_decls:
        raise RenderError("compilation unit needs at least one type declaration")
    sections: list[str] = []
    if package:
        sections.append(f"package {package};")
    unique_imports = sorted(set(imports))
    if unique_imports:
        sections.append("\n".join(f"import {imp};" for imp in unique_imports))
    sections.extend(decl.rstrip() for decl in type_decls)
    return "\n\n".join(sections) + "\n"


@dataclass(frozen=True)
class TemplateApp:
    """A single-source-dir Java app: src/<package dirs>/*.java plus a
    minimal build descriptor."""

    units: tuple[CompilationUnit, ...]
    main_span: tuple[int, int] = (0, 0)  # inserted lines in Main.java (1-based, inclusive)
    mutant_file: str = ""  # unit file carrying the mutant substance
    mutant_span: tuple[int, int] = (0, 0)

    def source_root(self) -> str:
        return "src"

    def relative_path(self, unit: CompilationUnit) -> str:
        pkg_path = unit.package_name.replace(".", "/")
        return f"src/{pkg_path}/{unit.file_name}"

    def write_to(self, root: str | Path) -> None:
        root = Path(root)
        for unit in self.units:
            target = root / self.relative_path(unit)
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(unit.text, encoding="utf-8")
        descriptor = root / "build.properties"
        descriptor.write_text(
            f"sourceDir = src\nmainClass = {TEMPLATE_PACKAGE}.{MAIN_CLASS}\n",
            encoding="utf-8",
        )


def _indent_lines(code: str, indent: str) -> list[str]:
    return [indent + line if line.strip() else "" for line in code.splitlines()]


def _main_class_text(body_statements: list[str]) -> tuple[str, tuple[int, int]]:
    """Build the Main type declaration; returns (text, span) where span is
    the 1-based inclusive line range of the injected statements within
    the final compilation unit."""
    lines = [
        f"public class {MAIN_CLASS} {{",
        "",
        "    public static void main(String[] args) {",
        "        try {",
    ]
    start = len(lines) + 1  # next appended line, 1-based within the decl
    for stmt in body_statements:
        lines.extend(_indent_lines(stmt, _INDENT * 3))
    end = len(lines)
    lines += [
        "        } catch (Exception e) {",
        "            e.printStackTrace();",
        "        }",
        "    }",
        "}",
    ]
    return "\n".join(lines), (start, end)


def _unit_header_lines(unit: CompilationUnit) -> int:
    # package line + blank + imports + blank, mirroring assemble layout
    count = 0
    if unit.package_name:
        count += 2
    if unit.imports:
        count += len(set(unit.imports)) + 1
    return count


def render_main_template(mutant: MutantSource | None, config=None) -> TemplateApp:
    """Render the template app with `mutant` seeded at the start of main.

    None renders the clean baseline template.  Statement-sequence
    mutants become the first statements of main; type-declaration
    mutants become a sibling unit plus an instantiation statement.
    """
    if mutant is None:
        main_text, _ = _main_class_text([])
        unit = CompilationUnit(TEMPLATE_PACKAGE, (), (main_text,))
        return TemplateApp(units=(unit,))

    if not mutant.snippet.strip():
        raise RenderError("empty mutant snippet")
    reason = check_snippet(mutant.snippet)
    if reason:
        raise RenderError(f"mutant snippet invalid: {reason}")

    if mutant.kind == STATEMENT_SEQUENCE:
        main_text, span = _main_class_text([mutant.snippet])
        unit = CompilationUnit(TEMPLATE_PACKAGE, tuple(mutant.required_imports), (main_text,))
        offset = _unit_header_lines(unit)
        final_span = (span[0] + offset, span[1] + offset)
        return TemplateApp(
            units=(unit,),
            main_span=final_span,
            mutant_file=f"src/{TEMPLATE_PACKAGE.replace('.', '/')}/{MAIN_CLASS}.java",
            mutant_span=final_span,
        )

    if mutant.kind == TYPE_DECLARATION:
        if not mutant.use_stmt:
            raise RenderError("type-declaration mutant lacks an instantiation statement")
        main_text, span = _main_class_text([mutant.use_stmt])
        main_unit = CompilationUnit(
            TEMPLATE_PACKAGE, tuple(mutant.required_imports), (main_text,)
        )
        sibling = CompilationUnit(
            TEMPLATE_PACKAGE, tuple(mutant.required_imports), (mutant.snippet,)
        )
        offset = _unit_header_lines(main_unit)
        sib_offset = _unit_header_lines(sibling)
        sib_lines = mutant.snippet.count("\n") + 1
        return TemplateApp(
            units=(main_unit, sibling),
            main_span=(span[0] + offset, span[1] + offset),
            mutant_file=f"src/{TEMPLATE_PACKAGE.replace('.', '/')}/{sibling.file_name}",
            mutant_span=(sib_offset + 1, sib_offset + sib_lines),
        )

    raise RenderError(f"unknown mutant kind {mutant.kind!r}")
