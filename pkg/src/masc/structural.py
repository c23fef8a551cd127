"""Token/brace-level structural scanner for Java source.

Injection needs exactly three things from a file: block nesting with a
kind per block, statement boundaries usable as insertion points, and
call sites.  A full Java grammar buys nothing extra, so this scanner
works at the lexical level: strings, chars, text blocks and comments
are handled; generics and annotation values are passed through without
affecting nesting.

Unparseable input (unbalanced braces, unterminated literals) raises
FileSkipped; callers treat that as a per-file diagnostic, never a crash.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MascError

CLASS_BODY = "class-body"
METHOD_BODY = "method-body"
CONDITIONAL_BLOCK = "conditional-block"
LOOP_BODY = "loop-body"
TRY_BLOCK = "try-block"
ANON_CLASS_BODY = "anon-class-body"
OTHER_BLOCK = "other"

#: Block kinds that admit statement injection at their boundaries.
STATEMENT_KINDS = frozenset(
    {METHOD_BODY, CONDITIONAL_BLOCK, LOOP_BODY, TRY_BLOCK, ANON_CLASS_BODY}
)

_JAVA_KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while record yield sealed
    permits var""".split()
)


class FileSkipped(MascError):
    def __init__(self, path: str, reason: str):
        super().__init__(f"skipped {path}: {reason}")
        self.path = path
        self.reason = reason


@dataclass
class Token:
    kind: str  # "ident" | "number" | "string" | "char" | punct text | "()"
    value: str
    offset: int
    line: int


@dataclass
class Block:
    kind: str
    open_line: int
    open_offset: int  # offset just past the '{'
    close_line: int = -1
    close_offset: int = -1  # offset of the '}'
    parent: int | None = None


@dataclass
class CallSite:
    receiver_simple_name: str
    method_name: str
    line: int
    offset: int
    enclosing_block: int | None


@dataclass
class Boundary:
    """A position where a statement may be inserted: right after '{',
    ';' or a statement-ending '}'."""

    offset: int
    line: int  # line containing the boundary character
    block: int | None


@dataclass
class SyntaxIndex:
    path: str
    text: str
    blocks: list[Block] = field(default_factory=list)
    call_sites: list[CallSite] = field(default_factory=list)
    boundaries: list[Boundary] = field(default_factory=list)

    def boundaries_of(self, block_index: int | None) -> list[Boundary]:
        return [b for b in self.boundaries if b.block == block_index]

    def innermost_block_at(self, offset: int) -> int | None:
        best: int | None = None
        for i, blk in enumerate(self.blocks):
            if blk.open_offset <= offset <= blk.close_offset:
                if best is None or self.blocks[best].open_offset <= blk.open_offset:
                    best = i
        return best


def tokenize(text: str, path: str = "<memory>") -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(text)
    line = 1
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            continue
        if ch == "/" and i + 1 < n and text[i + 1] == "/":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "/" and i + 1 < n and text[i + 1] == "*":
            end = text.find("*/", i + 2)
            if end < 0:
                raise FileSkipped(path, "unterminated block comment")
            line += text.count("\n", i, end)
            i = end + 2
            continue
        if ch == '"':
            if text.startswith('"""', i):
                end = text.find('"""', i + 3)
                if end < 0:
                    raise FileSkipped(path, "unterminated text block")
                value = text[i : end + 3]
                tokens.append(Token("string", value, i, line))
                line += value.count("\n")
                i = end + 3
                continue
            j = i + 1
            while j < n:
                if text[j] == "\\":
                    j += 2
                    continue
                if text[j] == '"' or text[j] == "\n":
                    break
                j += 1
            if j >= n or text[j] != '"':
                raise FileSkipped(path, f"unterminated string literal at line {line}")
            tokens.append(Token("string", text[i : j + 1], i, line))
            i = j + 1
            continue
        if ch == "'":
            j = i + 1
            while j < n:
                if text[j] == "\\":
                    j += 2
                    continue
                if text[j] == "'" or text[j] == "\n":
                    break
                j += 1
            if j >= n or text[j] != "'":
                raise FileSkipped(path, f"unterminated char literal at line {line}")
            tokens.append(Token("char", text[i : j + 1], i, line))
            i = j + 1
            continue
        if ch.isdigit():
            j = i
            while j < n and (text[j].isalnum() or text[j] in "._"):
                j += 1
            tokens.append(Token("number", text[i:j], i, line))
            i = j
            continue
        if ch.isalpha() or ch in "_$":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_$"):
                j += 1
            tokens.append(Token("ident", text[i:j], i, line))
            i = j
            continue
        if ch == "-" and i + 1 < n and text[i + 1] == ">":
            tokens.append(Token("->", "->", i, line))
            i += 2
            continue
        tokens.append(Token(ch, ch, i, line))
        i += 1
    return tokens


def _classify(header: list[Token], parent_kind: str | None) -> str:
    """Decide a block's kind from the depth-0 tokens of its header.

    Paren groups in the header are collapsed to a single '()' marker, so
    `if (new X().ok()) {` classifies on ['if', '()'] and cannot be
    mistaken for an anonymous class.
    """
    values = [t.value for t in header]
    idents = set(values)

    has_eq = "=" in values
    ends_with_group = bool(header) and header[-1].kind == "()"

    if "new" in idents and ends_with_group:
        return ANON_CLASS_BODY
    for i, tok in enumerate(header):
        if tok.kind != "ident":
            continue
        if tok.value in ("class", "interface", "enum"):
            if i > 0 and header[i - 1].value == ".":  # Foo.class literal
                continue
            return CLASS_BODY
        if tok.value == "record" and i + 1 < len(header) and header[i + 1].kind == "ident":
            return CLASS_BODY
    if "switch" in idents:
        # switch bodies hold case groups, not statements; never a site
        return OTHER_BLOCK
    if idents & {"if", "else", "case", "default"}:
        return CONDITIONAL_BLOCK
    if idents & {"for", "while", "do"}:
        return LOOP_BODY
    if idents & {"try", "catch", "finally"}:
        return TRY_BLOCK
    if "synchronized" in idents:
        return OTHER_BLOCK
    if "->" in values:
        return METHOD_BODY
    if has_eq:
        return OTHER_BLOCK  # array initializer
    # method or constructor: a non-keyword identifier directly followed
    # by a parenthesized group
    for i in range(len(header) - 1):
        if (
            header[i].kind == "ident"
            and header[i].value not in _JAVA_KEYWORDS
            and header[i + 1].kind == "()"
        ):
            return METHOD_BODY
    # static/instance initializer inside a class body
    if parent_kind == CLASS_BODY and idents <= {"static"}:
        return METHOD_BODY
    return OTHER_BLOCK


def parse_structural(text: str, path: str = "<memory>") -> SyntaxIndex:
    """Build the SyntaxIndex for one file.  Raises FileSkipped."""
    tokens = tokenize(text, path)
    index = SyntaxIndex(path=path, text=text)

    stack: list[int] = []  # indices into index.blocks
    header: list[Token] = []
    paren_depth = 0
    bracket_depth = 0
    group_start: Token | None = None

    def current_block() -> int | None:
        return stack[-1] if stack else None

    def current_kind() -> str | None:
        return index.blocks[stack[-1]].kind if stack else None

    for pos, tok in enumerate(tokens):
        # call sites are recorded at any paren depth: ident '.' ident '('
        if (
            tok.kind == "ident"
            and pos + 1 < len(tokens)
            and tokens[pos + 1].kind == "("
            and pos >= 2
            and tokens[pos - 1].kind == "."
            and tokens[pos - 2].kind == "ident"
        ):
            index.call_sites.append(
                CallSite(
                    receiver_simple_name=tokens[pos - 2].value,
                    method_name=tok.value,
                    line=tok.line,
                    offset=tok.offset,
                    enclosing_block=current_block(),
                )
            )

        if tok.kind == "(":
            if paren_depth == 0:
                group_start = tok
            paren_depth += 1
            continue
        if tok.kind == ")":
            paren_depth -= 1
            if paren_depth < 0:
                raise FileSkipped(path, f"unbalanced ')' at line {tok.line}")
            if paren_depth == 0 and group_start is not None:
                header.append(Token("()", "()", group_start.offset, group_start.line))
                group_start = None
            continue
        if paren_depth > 0:
            continue
        if tok.kind == "[":
            bracket_depth += 1
            header.append(tok)
            continue
        if tok.kind == "]":
            bracket_depth = max(0, bracket_depth - 1)
            header.append(tok)
            continue

        if tok.kind == "{":
            kind = (
                OTHER_BLOCK
                if bracket_depth > 0
                else _classify(header, current_kind())
            )
            block = Block(
                kind=kind,
                open_line=tok.line,
                open_offset=tok.offset + 1,
                parent=current_block(),
            )
            index.blocks.append(block)
            stack.append(len(index.blocks) - 1)
            index.boundaries.append(
                Boundary(offset=tok.offset + 1, line=tok.line, block=stack[-1])
            )
            header = []
            continue
        if tok.kind == "}":
            if not stack:
                raise FileSkipped(path, f"unbalanced '}}' at line {tok.line}")
            closed = stack.pop()
            index.blocks[closed].close_line = tok.line
            index.blocks[closed].close_offset = tok.offset
            header = []
            nxt = tokens[pos + 1] if pos + 1 < len(tokens) else None
            # a '}' ends a statement unless the construct continues
            # (else/catch/finally/do-while) or it closes an expression
            if nxt is None or nxt.value not in (
                "else",
                "catch",
                "finally",
                "while",
                ";",
                ")",
                ",",
                ".",
            ):
                index.boundaries.append(
                    Boundary(offset=tok.offset + 1, line=tok.line, block=current_block())
                )
            continue
        if tok.kind == ";":
            index.boundaries.append(
                Boundary(offset=tok.offset + 1, line=tok.line, block=current_block())
            )
            header = []
            continue

        header.append(tok)

    if stack:
        raise FileSkipped(path, "unbalanced '{' (unclosed block)")
    if paren_depth != 0:
        raise FileSkipped(path, "unbalanced parentheses")
    return index


def check_snippet(text: str) -> str | None:
    """Validate a code fragment lexically: balanced braces/parens, sound
    literals, some content.  Returns a reason string or None when ok."""
    if not text.strip():
        return "empty snippet"
    try:
        tokens = tokenize(text, "<snippet>")
    except FileSkipped as exc:
        return exc.reason
    depth = 0
    paren = 0
    for tok in tokens:
        if tok.kind == "{":
            depth += 1
        elif tok.kind == "}":
            depth -= 1
            if depth < 0:
                return "unbalanced '}'"
        elif tok.kind == "(":
            paren += 1
        elif tok.kind == ")":
            paren -= 1
            if paren < 0:
                return "unbalanced ')'"
    if depth != 0:
        return "unbalanced '{'"
    if paren != 0:
        return "unbalanced '('"
    return None


def token_values(text: str, path: str = "<memory>") -> list[str]:
    """Lexeme stream with comments and whitespace dropped; the basis of
    the append-only (insert-only) oracle used in tests."""
    return [t.value for t in tokenize(text, path)]


def is_token_subsequence(original: list[str], mutated: list[str]) -> bool:
    it = iter(mutated)
    return all(any(tok == cand for cand in it) for tok in original)
