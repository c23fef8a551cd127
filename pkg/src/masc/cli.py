"""Command-line entry points.

    masc run <config.properties>     full campaign (also the default when
                                     the sole argument is a properties file)
    masc mutate --api ... --operator ...   generate a mutant, print or write
    masc list-operators              inventory of builtin + plugin operators
    masc validate <config>           parse and validate a config
    masc serve [--port N]            local HTTP API (+ web UI if built)
    masc refdetect ...               run a built-in reference detector
    masc report <report.json> ...    convert a report / re-render figures

Exit codes: 0 success, 1 config error, 2 campaign failed, 3 internal
error.  Surviving mutants do not fail the run unless --fail-on-survivor
is given.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .catalog import load_catalog
from .errors import BaselineFailed, CatalogError, ConfigError, MascError
from .harness import run_detector  # noqa: F401  (re-exported for scripting)
from .pipeline import (
    generate_mutant_files,
    load_campaign,
    run_validated,
    write_reports,
)
from .plugins import load_plugins
from .refdetect import DEFAULT_LITERALS, reference_detector
from .report import emit_report, matrix_from_report_dict, render_figures

log = logging.getLogger("masc")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_CAMPAIGN = 2
EXIT_INTERNAL = 3


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="masc",
        description="mutation-based evaluation of static crypto-API misuse detectors",
    )
    parser.add_argument("--version", action="version", version=f"masc {__version__}")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command")

    run = sub.add_parser("run", help="run a full campaign from a config file")
    run.add_argument("config", help="campaign .properties file")
    run.add_argument("--catalog", help="override the bundled API catalog")
    run.add_argument("--jobs", type=int, default=1, help="parallel detector runs")
    run.add_argument(
        "--fail-on-survivor",
        action="store_true",
        help="exit non-zero when any mutant survives",
    )

    mutate = sub.add_parser("mutate", help="generate a mutant without seeding")
    mutate.add_argument("--api", required=True, help="API name (simple or qualified)")
    mutate.add_argument("--operator", required=True, help="operator id, e.g. R2")
    mutate.add_argument("--insecure-param", default=None)
    mutate.add_argument("--secure-param", default=None)
    mutate.add_argument(
        "--param", action="append", default=[], metavar="K=V",
        help="operator tunable (repeatable)",
    )
    mutate.add_argument(
        "--plugin-dir", action="append", default=[], help="plugin directory (repeatable)"
    )
    mutate.add_argument("--catalog", help="override the bundled API catalog")
    mutate.add_argument("--out", help="write files into this directory instead of stdout")

    ops = sub.add_parser("list-operators", help="list builtin and plugin operators")
    ops.add_argument("--plugin-dir", action="append", default=[])

    val = sub.add_parser("validate", help="validate a campaign config")
    val.add_argument("config")

    serve = sub.add_parser("serve", help="serve the local HTTP API")
    serve.add_argument("--port", type=int, default=8723)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--catalog", help="override the bundled API catalog")
    serve.add_argument("--jobs", type=int, default=1)
    serve.add_argument("--output-dir", default=None, help="service sandbox root")
    serve.add_argument("--ui-dir", default=None, help="static assets served under /ui")

    ref = sub.add_parser("refdetect", help="run a built-in reference detector")
    ref.add_argument("--mode", required=True)
    ref.add_argument("--app", required=True)
    ref.add_argument("--out", required=True)
    ref.add_argument("--literal", action="append", default=[])
    ref.add_argument("--script", default=None, help="script file for scripted mode")

    rep = sub.add_parser("report", help="convert a JSON report or re-render figures")
    rep.add_argument("report", help="path to report.json")
    rep.add_argument("--format", choices=("json", "csv", "text"), default="text")
    rep.add_argument("--figures", action="store_true", help="also render figures")
    rep.add_argument("--out-dir", default=None)

    return parser


def _parse_params(pairs: list[str]) -> dict:
    params = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"bad --param {pair!r}, expected K=V")
        key, value = pair.split("=", 1)
        params[key.strip()] = value.strip()
    return params


def _cmd_run(args) -> int:
    _, config, registry = load_campaign(args.config)
    catalog = load_catalog(args.catalog)
    outcome = run_validated(config, registry, catalog, jobs=args.jobs)
    text_path = outcome.report_paths.get("text")
    if text_path:
        sys.stdout.write(Path(text_path).read_text(encoding="utf-8"))
    print(f"reports written to {config.output_dir}")
    if args.fail_on_survivor and outcome.survivors:
        print(f"{outcome.survivors} mutant(s) survived", file=sys.stderr)
        return EXIT_CAMPAIGN
    return EXIT_OK


def _cmd_mutate(args) -> int:
    catalog = load_catalog(args.catalog)
    registry = load_plugins(args.plugin_dir)
    doc = generate_mutant_files(
        catalog,
        registry,
        api_name=args.api,
        operator_id=args.operator,
        params=_parse_params(args.param),
        insecure_param=args.insecure_param,
        secure_param=args.secure_param,
        config_values=_parse_params(args.param),
    )
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for entry in doc["files"]:
            (out / entry["name"]).write_text(entry["text"], encoding="utf-8")
            print(f"wrote {out / entry['name']}")
        return EXIT_OK
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def _cmd_list_operators(args) -> int:
    registry = load_plugins(args.plugin_dir)
    for info in registry.list():
        tags = ",".join(info.threat_tags)
        print(f"{info.id}\t{info.pattern}\t{info.name}\t{tags}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    _, config, registry = load_campaign(args.config)
    print(f"config ok: {args.config}")
    print(f"  api: {config.api_name}")
    print(f"  scope: {config.scope}")
    print(f"  operators: {','.join(config.operators)}")
    print(f"  outputDir: {config.output_dir}")
    if registry.load_warnings:
        for warning in registry.load_warnings:
            print(f"  plugin warning: {warning}")
    for warning in config.warnings:
        print(f"  warning: {warning}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        catalog_path=args.catalog,
        output_dir=args.output_dir,
        jobs=args.jobs,
        ui_dir=args.ui_dir,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def _cmd_refdetect(args) -> int:
    literals = tuple(args.literal) if args.literal else DEFAULT_LITERALS
    doc = reference_detector(
        args.app, args.mode, literals=literals, script_path=args.script
    )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(doc, indent=2), encoding="utf-8")
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_report(args) -> int:
    doc = json.loads(Path(args.report).read_text(encoding="utf-8"))
    matrix = matrix_from_report_dict(doc)
    out_dir = Path(args.out_dir) if args.out_dir else Path(args.report).parent
    sys.stdout.write(emit_report(matrix, args.format))
    if args.figures:
        for path in render_figures(matrix, out_dir):
            print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


_HANDLERS = {
    "run": _cmd_run,
    "mutate": _cmd_mutate,
    "list-operators": _cmd_list_operators,
    "validate": _cmd_validate,
    "serve": _cmd_serve,
    "refdetect": _cmd_refdetect,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    # the paper-style default invocation: `masc Cipher.properties`
    if argv and argv[0] not in _HANDLERS and not argv[0].startswith("-"):
        if argv[0].endswith(".properties") or Path(argv[0]).is_file():
            argv = ["run", *argv]
    parser = _parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if not args.command:
        parser.print_help()
        return EXIT_CONFIG
    try:
        return _HANDLERS[args.command](args)
    except (ConfigError, CatalogError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BaselineFailed as exc:
        print(f"campaign failed: {exc}", file=sys.stderr)
        return EXIT_CAMPAIGN
    except MascError as exc:
        print(f"campaign failed: {exc}", file=sys.stderr)
        return EXIT_CAMPAIGN
    except Exception as exc:  # pragma: no cover - safety net
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
