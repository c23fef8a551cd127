"""Evaluator for the string expressions restrictive mutants feed into a
factory call.

This is the oracle side of a dual route: operators *assemble* Java text,
and this module independently *parses and executes* the argument
expression to confirm the value that reaches the security-sensitive
parameter.  It supports exactly the constructs the builtin operators can
emit: string literals, `+`, local variable references, helper objects
declared as local classes with a single string-returning method, and
chained calls to replace / substring / toUpperCase / toLowerCase /
trim / concat with literal arguments.  Anything else raises
UnsupportedConstruct.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import UnsupportedConstruct

CHAIN_METHODS = ("replace", "substring", "toUpperCase", "toLowerCase", "trim", "concat")

_ESCAPES = {
    "b": "\b",
    "t": "\t",
    "n": "\n",
    "f": "\f",
    "r": "\r",
    '"': '"',
    "'": "'",
    "\\": "\\",
    "0": "\0",
}

_PUNCT = {".", "(", ")", ",", "+", "=", ";", "{", "}"}


def quote_java_string(value: str) -> str:
    """Render a Python string as a Java string literal."""
    out = ['"']
    for ch in value:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\r":
            out.append("\\r")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def java_trim(value: str) -> str:
    # Java String.trim strips chars <= U+0020 only (not unicode whitespace).
    start = 0
    end = len(value)
    while start < end and value[start] <= " ":
        start += 1
    while end > start and value[end - 1] <= " ":
        end -= 1
    return value[start:end]


class _Token:
    __slots__ = ("kind", "value")

    def __init__(self, kind: str, value: str):
        self.kind = kind  # "str" | "int" | "ident" | punct literal
        self.value = value

    def __repr__(self):
        return f"{self.kind}:{self.value!r}"


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
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
                raise UnsupportedConstruct("unterminated comment")
            i = end + 2
            continue
        if ch == '"':
            i += 1
            buf = []
            while i < n and text[i] != '"':
                c = text[i]
                if c == "\\":
                    i += 1
                    if i >= n:
                        raise UnsupportedConstruct("dangling escape")
                    esc = text[i]
                    if esc == "u":
                        if i + 4 >= n:
                            raise UnsupportedConstruct("bad unicode escape")
                        buf.append(chr(int(text[i + 1 : i + 5], 16)))
                        i += 4
                    elif esc in _ESCAPES:
                        buf.append(_ESCAPES[esc])
                    else:
                        raise UnsupportedConstruct(f"escape \\{esc}")
                else:
                    buf.append(c)
                i += 1
            if i >= n:
                raise UnsupportedConstruct("unterminated string literal")
            i += 1
            tokens.append(_Token("str", "".join(buf)))
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", text[i:j]))
            i = j
            continue
        if ch.isalpha() or ch in "_$":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_$"):
                j += 1
            tokens.append(_Token("ident", text[i:j]))
            i = j
            continue
        if ch in _PUNCT:
            tokens.append(_Token(ch, ch))
            i += 1
            continue
        raise UnsupportedConstruct(f"character {ch!r}")
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise UnsupportedConstruct("unexpected end of expression")
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise UnsupportedConstruct(f"expected {kind!r}, got {tok!r}")
        return tok

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)


class _Env:
    """Variables and helper methods visible to an expression."""

    def __init__(self):
        self.variables: dict[str, str] = {}
        # helper key: "ClassName.method" and bare "method"
        self.helpers: dict[str, str] = {}


def _eval_expr(p: _Parser, env: _Env) -> str:
    value = _eval_term(p, env)
    while True:
        tok = p.peek()
        if tok is not None and tok.kind == "+":
            p.next()
            value = value + _eval_term(p, env)
        else:
            return value


def _eval_term(p: _Parser, env: _Env) -> str:
    value = _eval_primary(p, env)
    while True:
        tok = p.peek()
        if tok is None or tok.kind != ".":
            return value
        p.next()
        method = p.expect("ident").value
        if method not in CHAIN_METHODS:
            raise UnsupportedConstruct(f"method .{method}()")
        args = _parse_literal_args(p)
        value = _apply_chain(method, value, args)


def _eval_primary(p: _Parser, env: _Env) -> str:
    tok = p.next()
    if tok.kind == "str":
        return tok.value
    if tok.kind == "(":
        value = _eval_expr(p, env)
        p.expect(")")
        return value
    if tok.kind == "ident":
        if tok.value == "new":
            cls = p.expect("ident").value
            p.expect("(")
            p.expect(")")
            p.expect(".")
            method = p.expect("ident").value
            p.expect("(")
            p.expect(")")
            key = f"{cls}.{method}"
            if key not in env.helpers:
                raise UnsupportedConstruct(f"helper {key}")
            return env.helpers[key]
        nxt = p.peek()
        if nxt is not None and nxt.kind == "(":
            p.next()
            p.expect(")")
            if tok.value not in env.helpers:
                raise UnsupportedConstruct(f"helper {tok.value}()")
            return env.helpers[tok.value]
        if tok.value in env.variables:
            return env.variables[tok.value]
        raise UnsupportedConstruct(f"unbound variable {tok.value}")
    raise UnsupportedConstruct(repr(tok))


def _parse_literal_args(p: _Parser) -> list[object]:
    p.expect("(")
    args: list[object] = []
    tok = p.peek()
    if tok is not None and tok.kind == ")":
        p.next()
        return args
    while True:
        tok = p.next()
        if tok.kind == "str":
            args.append(tok.value)
        elif tok.kind == "int":
            args.append(int(tok.value))
        else:
            raise UnsupportedConstruct(f"non-literal chain argument {tok!r}")
        sep = p.next()
        if sep.kind == ")":
            return args
        if sep.kind != ",":
            raise UnsupportedConstruct(f"expected ',' in arguments, got {sep!r}")


def _apply_chain(method: str, value: str, args: list[object]) -> str:
    if method == "replace":
        if len(args) != 2 or not all(isinstance(a, str) for a in args):
            raise UnsupportedConstruct("replace expects two string literals")
        return value.replace(args[0], args[1])  # type: ignore[arg-type]
    if method == "substring":
        if not args or len(args) > 2 or not all(isinstance(a, int) for a in args):
            raise UnsupportedConstruct("substring expects one or two int literals")
        begin = args[0]
        end = args[1] if len(args) == 2 else len(value)
        if not (0 <= begin <= end <= len(value)):  # Java would throw here too
            raise UnsupportedConstruct("substring index out of range")
        return value[begin:end]
    if method == "toUpperCase":
        if args:
            raise UnsupportedConstruct("toUpperCase takes no arguments")
        return value.upper()
    if method == "toLowerCase":
        if args:
            raise UnsupportedConstruct("toLowerCase takes no arguments")
        return value.lower()
    if method == "trim":
        if args:
            raise UnsupportedConstruct("trim takes no arguments")
        return java_trim(value)
    if method == "concat":
        if len(args) != 1 or not isinstance(args[0], str):
            raise UnsupportedConstruct("concat expects one string literal")
        return value + args[0]  # type: ignore[return-value]
    raise UnsupportedConstruct(method)


_DECL_MODIFIERS = {"final", "private", "static", "public"}


def _parse_declarations(decl_text: str, env: _Env) -> None:
    p = _Parser(_tokenize(decl_text))
    while not p.at_end():
        tok = p.next()
        if tok.kind != "ident":
            raise UnsupportedConstruct(f"declaration starting with {tok!r}")
        while tok.value in _DECL_MODIFIERS:
            tok = p.expect("ident")
        if tok.value == "String":
            name = p.expect("ident").value
            p.expect("=")
            start = p.pos
            depth = 0
            while True:
                t = p.peek()
                if t is None:
                    raise UnsupportedConstruct("unterminated variable declaration")
                if t.kind == "(":
                    depth += 1
                elif t.kind == ")":
                    depth -= 1
                elif t.kind == ";" and depth == 0:
                    break
                p.next()
            sub = _Parser(p.tokens[start : p.pos])
            env.variables[name] = _eval_expr(sub, env)
            if not sub.at_end():
                raise UnsupportedConstruct("trailing tokens in declaration")
            p.expect(";")
        elif tok.value == "class":
            _parse_helper_class(p, env)
        else:
            raise UnsupportedConstruct(f"declaration {tok.value!r}")


def _parse_helper_class(p: _Parser, env: _Env) -> None:
    cls = p.expect("ident").value
    p.expect("{")
    tok = p.expect("ident")
    while tok.value in _DECL_MODIFIERS:
        tok = p.expect("ident")
    if tok.value != "String":
        raise UnsupportedConstruct("helper method must return String")
    method = p.expect("ident").value
    p.expect("(")
    p.expect(")")
    p.expect("{")
    ret = p.expect("ident")
    if ret.value != "return":
        raise UnsupportedConstruct("helper body must be a single return")
    start = p.pos
    while True:
        t = p.peek()
        if t is None:
            raise UnsupportedConstruct("unterminated helper body")
        if t.kind == ";":
            break
        p.next()
    sub = _Parser(p.tokens[start : p.pos])
    value = _eval_expr(sub, env)
    if not sub.at_end():
        raise UnsupportedConstruct("trailing tokens in helper return")
    p.expect(";")
    p.expect("}")
    p.expect("}")
    env.helpers[f"{cls}.{method}"] = value
    env.helpers[method] = value


def evaluate_string_expression(
    declarations: str | Sequence[str] | Iterable[str], expression: str
) -> str:
    """Evaluate `expression` after executing `declarations`.

    Returns the exact string a Java program would pass at that position.
    """
    if not isinstance(declarations, str):
        declarations = "\n".join(declarations)
    env = _Env()
    if declarations.strip():
        _parse_declarations(declarations, env)
    p = _Parser(_tokenize(expression))
    value = _eval_expr(p, env)
    if not p.at_end():
        raise UnsupportedConstruct(f"trailing tokens after expression: {p.peek()!r}")
    return value
