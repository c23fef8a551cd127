"""masc: mutation-based evaluation of static crypto-API misuse detectors.

The library instantiates disguised crypto-API misuse cases with twelve
builtin operators (plus template plugins), seeds them into Java source
trees under three scopes, runs a target detector over baseline and
mutated code, ingests its SARIF output, and reports which mutants
survived undetected.
"""

__version__ = "0.1.0"

from .catalog import ApiCatalog, ApiDescriptor, classify_pattern, load_catalog, lookup_api
from .config import CampaignConfig, RawConfig, parse_properties, validate_config
from .errors import MascError
from .harness import DetectorProfile, RunResult, run_campaign, run_detector
from .operators import (
    MisuseCase,
    MutantSource,
    OperatorInfo,
    OperatorRegistry,
    build_misuse_case,
    instantiate_flexible,
    instantiate_restrictive,
    list_operators,
)
from .plugins import load_plugins
from .refdetect import reference_detector
from .report import KillMatrix, diff_baseline, emit_report, match_findings
from .sarif import Finding, parse_sarif
from .seeding import (
    MutantRecord,
    MutatedApp,
    SeedLocation,
    enumerate_exhaustive_sites,
    find_similar_sites,
    inject,
    seed_campaign,
)
from .strexpr import evaluate_string_expression
from .structural import SyntaxIndex, parse_structural

__all__ = [
    "ApiCatalog",
    "ApiDescriptor",
    "CampaignConfig",
    "DetectorProfile",
    "Finding",
    "KillMatrix",
    "MascError",
    "MisuseCase",
    "MutantRecord",
    "MutantSource",
    "MutatedApp",
    "OperatorInfo",
    "OperatorRegistry",
    "RawConfig",
    "RunResult",
    "SeedLocation",
    "SyntaxIndex",
    "build_misuse_case",
    "classify_pattern",
    "diff_baseline",
    "emit_report",
    "enumerate_exhaustive_sites",
    "evaluate_string_expression",
    "find_similar_sites",
    "inject",
    "instantiate_flexible",
    "instantiate_restrictive",
    "list_operators",
    "load_catalog",
    "load_plugins",
    "lookup_api",
    "match_findings",
    "parse_properties",
    "parse_sarif",
    "parse_structural",
    "reference_detector",
    "run_campaign",
    "run_detector",
    "seed_campaign",
    "validate_config",
]
