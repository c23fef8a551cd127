"""Built-in reference detectors.

Deliberately naive stand-ins for external crypto-detectors, used for
desk-scale end-to-end verification.  Their documented blind spots are
the point: naive-literal misses any disguise of the literal, ci-literal
only adds case folding, noop-trustmanager only recognizes a completely
empty checkServerTrusted override.  A fourth mode, `scripted`, replays
findings from a JSON script keyed by app directory name (used to test
stop conditions).

All modes emit SARIF 2.1.0.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from .sarif import make_result, make_sarif
from .structural import FileSkipped, tokenize

MODE_NAIVE = "naive-literal"
MODE_CI = "ci-literal"
MODE_NOOP_TM = "noop-trustmanager"
MODE_SCRIPTED = "scripted"

MODES = (MODE_NAIVE, MODE_CI, MODE_NOOP_TM, MODE_SCRIPTED)

RULE_INSECURE_LITERAL = "crypto/insecure-literal"
RULE_NOOP_TM = "crypto/noop-trustmanager"

DEFAULT_LITERALS = ("DES", "MD5")

_CALL_LITERAL = re.compile(r"\bgetInstance\s*\(\s*\"([^\"]*)\"")


def _java_files(app_dir: Path):
    return sorted(app_dir.rglob("*.java"))


def _literal_results(app_dir: Path, literals: tuple[str, ...], case_sensitive: bool) -> list[dict]:
    results = []
    wanted = set(literals) if case_sensitive else {l.casefold() for l in literals}
    for java_file in _java_files(app_dir):
        rel = java_file.relative_to(app_dir).as_posix()
        try:
            text = java_file.read_text(encoding="utf-8")
        except UnicodeDecodeError:
            continue
        for lineno, line in enumerate(text.splitlines(), start=1):
            for match in _CALL_LITERAL.finditer(line):
                value = match.group(1)
                probe = value if case_sensitive else value.casefold()
                if probe in wanted:
                    results.append(
                        make_result(
                            RULE_INSECURE_LITERAL,
                            f"insecure algorithm literal {value!r} passed to getInstance",
                            rel,
                            lineno,
                            level="error",
                        )
                    )
    return results


def _noop_tm_results(app_dir: Path) -> list[dict]:
    results = []
    for java_file in _java_files(app_dir):
        rel = java_file.relative_to(app_dir).as_posix()
        try:
            text = java_file.read_text(encoding="utf-8")
            tokens = tokenize(text, rel)
        except (UnicodeDecodeError, FileSkipped):
            continue
        i = 0
        while i < len(tokens):
            tok = tokens[i]
            if tok.kind == "ident" and tok.value == "checkServerTrusted":
                line = tok.line
                j = i + 1
                if j < len(tokens) and tokens[j].kind == "(":
                    depth = 0
                    while j < len(tokens):
                        if tokens[j].kind == "(":
                            depth += 1
                        elif tokens[j].kind == ")":
                            depth -= 1
                            if depth == 0:
                                break
                        j += 1
                    j += 1
                    # optional throws clause before the body
                    while j < len(tokens) and tokens[j].kind in ("ident", ",", "."):
                        j += 1
                    if (
                        j + 1 < len(tokens)
                        and tokens[j].kind == "{"
                        and tokens[j + 1].kind == "}"
                    ):
                        results.append(
                            make_result(
                                RULE_NOOP_TM,
                                "checkServerTrusted override has an empty body",
                                rel,
                                line,
                                level="error",
                            )
                        )
            i += 1
    return results


def _scripted_results(app_dir: Path, script_path: str) -> list[dict]:
    script = json.loads(Path(script_path).read_text(encoding="utf-8"))
    entries = script.get(app_dir.name, [])
    return [
        make_result(
            entry.get("ruleId", "scripted/finding"),
            entry.get("message", "scripted finding"),
            entry.get("file", ""),
            int(entry.get("line", 1)),
        )
        for entry in entries
    ]


def reference_detector(
    app_dir: str | Path,
    mode: str,
    literals: tuple[str, ...] = DEFAULT_LITERALS,
    script_path: str | None = None,
) -> dict:
    """Run one built-in detector over an app tree; returns a SARIF dict."""
    app_dir = Path(app_dir)
    if mode == MODE_NAIVE:
        results = _literal_results(app_dir, literals, case_sensitive=True)
        rules = [RULE_INSECURE_LITERAL]
    elif mode == MODE_CI:
        results = _literal_results(app_dir, literals, case_sensitive=False)
        rules = [RULE_INSECURE_LITERAL]
    elif mode == MODE_NOOP_TM:
        results = _noop_tm_results(app_dir)
        rules = [RULE_NOOP_TM]
    elif mode == MODE_SCRIPTED:
        if not script_path:
            raise ValueError("scripted mode needs a script path")
        results = _scripted_results(app_dir, script_path)
        rules = [r["ruleId"] for r in results]
    else:
        raise ValueError(f"unknown reference detector mode {mode!r}")
    return make_sarif(f"masc-ref-{mode}", results, rules)
