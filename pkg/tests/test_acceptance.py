"""Acceptance suite: one test per release criterion, each with its
stated tolerance and time budget, reported as one line per criterion in
the terminal summary.

Run with `pytest tests/test_acceptance.py -v`.
"""

import json
import random
import shutil
import subprocess
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

import conftest as _conftest
from conftest import HEXENCODE_PLUGIN, FIXTURES, algorithm_corpus
from golden_support import golden_path, dump_normalized, run_golden_campaign
from masc.catalog import load_catalog
from masc.cli import main as cli_main
from masc.codegen import render_main_template
from masc.config import parse_properties, validate_config
from masc.harness import builtin_profile, run_campaign
from masc.operators import build_misuse_case, instantiate_flexible, instantiate_restrictive
from masc.plugins import load_plugins
from masc.report import diff_baseline, match_findings
from masc.sarif import Finding
from masc.seeding import (
    CampaignSeed,
    MutantRecord,
    MutatedApp,
    enumerate_exhaustive_sites,
    find_similar_sites,
    inject_into_text,
)
from masc.strexpr import evaluate_string_expression
from masc.structural import is_token_subsequence, parse_structural, token_values
from test_seeding import fuzz_java_file

RESTRICTIVE_IDS = ("R1", "R2", "R3", "R4", "R5", "R6")
ALL_IDS = RESTRICTIVE_IDS + ("F1", "F2", "F3", "F4", "F5", "F6")


@contextmanager
def criterion(number: int, description: str, budget_s: float):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        _conftest.ACCEPTANCE_LINES.append(f"FAIL  criterion {number}: {description}")
        raise
    elapsed = time.monotonic() - start
    if elapsed > budget_s:
        _conftest.ACCEPTANCE_LINES.append(
            f"FAIL  criterion {number}: {description} (took {elapsed:.1f}s > {budget_s}s)"
        )
        pytest.fail(f"criterion {number} exceeded time budget: {elapsed:.1f}s")
    _conftest.ACCEPTANCE_LINES.append(
        f"PASS  criterion {number}: {description} ({elapsed:.2f}s)"
    )


def test_criterion_1_operator_inventory(capsys):
    """Exactly 12 builtins, 6 restrictive + 6 flexible, via list-operators."""
    with criterion(1, "operator inventory 6+6", budget_s=1.0):
        assert cli_main(["list-operators"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 12
        ids = [line.split("\t")[0] for line in lines]
        assert ids == list(ALL_IDS)
        assert sum(1 for l in lines if "\trestrictive\t" in l) == 6
        assert sum(1 for l in lines if "\tflexible\t" in l) == 6


def test_criterion_2_semantic_preservation():
    """200 fuzzed algorithm strings x R1-R6: oracle equals the insecure
    parameter (case-insensitively for R1, exactly otherwise)."""
    with criterion(2, "semantic preservation over 200-string corpus", budget_s=10.0):
        catalog = load_catalog()
        cipher = catalog.lookup("javax.crypto.Cipher")
        corpus = algorithm_corpus(200)
        for op_id in RESTRICTIVE_IDS:
            for value in corpus:
                case = build_misuse_case(cipher, catalog, insecure_param=value)
                mutant = instantiate_restrictive(op_id, case)
                got = evaluate_string_expression(
                    mutant.decl_statements, mutant.arg_expression
                )
                if op_id == "R1":
                    assert got.casefold() == value.casefold(), (op_id, value)
                else:
                    assert got == value, (op_id, value)


def test_criterion_3_compilable_variants(tmp_path):
    """All 12 main-scope mutants pass structural validation; with a JDK
    present they must also compile cleanly."""
    with criterion(3, "compilable main-scope variants for all 12 operators", budget_s=60.0):
        catalog = load_catalog()
        cipher_case = build_misuse_case(catalog.lookup("Cipher"), catalog)
        tm_case = build_misuse_case(catalog.lookup("X509TrustManager"), catalog)
        javac = shutil.which("javac")
        for op_id in ALL_IDS:
            mutant = (
                instantiate_restrictive(op_id, cipher_case)
                if op_id.startswith("R")
                else instantiate_flexible(op_id, tm_case)
            )
            template = render_main_template(mutant)
            for unit in template.units:
                parse_structural(unit.text, unit.file_name)  # structural validation
            if javac:
                app_dir = tmp_path / op_id
                template.write_to(app_dir)
                sources = [str(p) for p in app_dir.rglob("*.java")]
                proc = subprocess.run(
                    [javac, "-d", str(app_dir / "classes"), *sources],
                    capture_output=True, text=True,
                )
                assert proc.returncode == 0, (op_id, proc.stderr)


@pytest.mark.parametrize("name", ["naive-literal", "ci-literal", "noop-trustmanager"])
def test_criterion_4_golden_kill_matrices(name, tmp_path):
    """The three reference campaigns reproduce their committed golden
    reports byte-for-byte modulo timestamps."""
    expected_kills = {
        "naive-literal": {"R6"},
        "ci-literal": {"R1", "R6"},
        "noop-trustmanager": {"F4", "F5", "F6"},
    }[name]
    with criterion(4, f"golden E2E matrix ({name})", budget_s=30.0):
        doc = run_golden_campaign(name, tmp_path / name)
        killed = {m["operator"] for m in doc["mutants"] if m["status"] == "killed"}
        survived = {m["operator"] for m in doc["mutants"] if m["status"] == "survived"}
        assert killed == expected_kills
        assert killed | survived == set(m["operator"] for m in doc["mutants"])
        golden = golden_path(name).read_text(encoding="utf-8")
        assert dump_normalized(doc) == golden


def test_criterion_5_exhaustive_site_counts():
    """Site counts on the five committed fixtures equal the recorded
    hand enumerations exactly."""
    with criterion(5, "exhaustive site counts on 5 fixtures", budget_s=5.0):
        fixtures = sorted((FIXTURES / "exhaustive").glob("*.java"))
        assert len(fixtures) == 5
        for fixture in fixtures:
            oracle = json.loads((fixture.parent / f"{fixture.name}.sites").read_text())
            index = parse_structural(fixture.read_text(), fixture.name)
            sites = enumerate_exhaustive_sites(index)
            assert len(sites) == oracle["total"], fixture.name
            by_kind: dict[str, int] = {}
            for site in sites:
                by_kind[site.block_kind] = by_kind.get(site.block_kind, 0) + 1
            assert by_kind == oracle["by_kind"], fixture.name


def test_criterion_6_similarity_append_only():
    """100 fuzzed files: the original token stream is a subsequence of
    every similarity-mutated file, and the result reparses."""
    with criterion(6, "similarity append-only over 100 fuzzed files", budget_s=30.0):
        catalog = load_catalog()
        cipher = catalog.lookup("Cipher")
        case = build_misuse_case(cipher, catalog)
        rng = random.Random(606)
        files_checked = 0
        for i in range(100):
            code = fuzz_java_file(rng)
            index = parse_structural(code, f"F{i}.java")
            sites = find_similar_sites(index, cipher)
            assert sites, f"fuzz file {i} must contain a similar call"
            original_tokens = token_values(code)
            for j, site in enumerate(sites):
                op = RESTRICTIVE_IDS[(i + j) % 6]
                mutant = instantiate_restrictive(op, case, name_seed=j)
                new_text, _, _ = inject_into_text(
                    code, site.offset, mutant, site.block_kind, name_seed=j
                )
                parse_structural(new_text, f"F{i}.java")  # reparse must succeed
                assert is_token_subsequence(original_tokens, token_values(new_text))
            files_checked += 1
        assert files_checked == 100


def test_criterion_7_baseline_subtraction_safety():
    """500 randomized synthetic SARIF pairs: never killed by a finding
    with a baseline counterpart; killed(strict) within killed(file)
    within killed(any)."""
    with criterion(7, "baseline-subtraction safety over 500 pairs", budget_s=10.0):
        rng = random.Random(707)
        files = ["A.java", "B.java"]
        rules = ["r1", "r2", "r3"]

        def fake(rule, file, line):
            return Finding(
                rule_id=rule, message="", file_uri=file, start_line=line, end_line=line
            )

        for _ in range(500):
            slack = rng.randint(0, 3)
            baseline = [
                fake(rng.choice(rules), rng.choice(files), rng.randint(1, 40))
                for _ in range(rng.randint(0, 6))
            ]
            extra = [
                fake(rng.choice(rules), rng.choice(files), rng.randint(1, 40))
                for _ in range(rng.randint(0, 6))
            ]
            mutated = list(baseline) + extra
            new = diff_baseline(baseline, mutated, slack=slack)
            for finding in new:
                assert not any(
                    b.rule_id == finding.rule_id
                    and b.file_uri == finding.file_uri
                    and abs(b.start_line - finding.start_line) <= slack
                    for b in baseline
                )
            start = rng.randint(1, 35)
            proto = dict(
                id="m", operator="R1", scope="main", file=rng.choice(files),
                start_line=start, end_line=start + rng.randint(0, 4),
            )
            status = {}
            for mode in ("strict-span", "file-level", "any-new-finding"):
                record = MutantRecord(**proto)
                match_findings(new, [record], mode, slack=slack)
                status[mode] = record.status
            if status["strict-span"] == "killed":
                assert status["file-level"] == "killed"
            if status["file-level"] == "killed":
                assert status["any-new-finding"] == "killed"


def test_criterion_8_plugin_round_trip(capsys, tmp_path):
    """The shipped example plugin loads with no core changes, appears in
    list-operators (13 total), yields a structurally valid mutant, and
    its declared config key validates."""
    with criterion(8, "shipped plugin round trip", budget_s=5.0):
        assert cli_main(["list-operators", "--plugin-dir", str(HEXENCODE_PLUGIN)]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 13
        assert any(line.startswith("hexencode\t") for line in lines)

        registry = load_plugins([str(HEXENCODE_PLUGIN)])
        catalog = load_catalog()
        case = build_misuse_case(catalog.lookup("Cipher"), catalog)
        mutant = registry.instantiate("hexencode", case, config_values={"hexWidth": "2"})
        template = render_main_template(mutant)
        for unit in template.units:
            parse_structural(unit.text, unit.file_name)

        raw = parse_properties(
            "apiName = javax.crypto.Cipher\noperators = hexencode\nhexWidth = 2\n"
            f"outputDir = {tmp_path / 'out'}\n"
        )
        cfg = validate_config(raw, registry)
        assert cfg.custom == {"hexWidth": "2"}
        assert not cfg.warnings


def test_criterion_9_stop_conditions(tmp_path):
    """first-survivor and survivor-count:N halt after exactly the
    predicted number of runs across 50 randomized schedules."""
    with criterion(9, "stop conditions over 50 randomized schedules", budget_s=10.0):
        registry = load_plugins([])
        rng = random.Random(909)
        for trial in range(50):
            n = rng.randint(1, 8)
            killed_flags = [rng.random() < 0.5 for _ in range(n)]
            count = rng.randint(1, 3)
            kind = rng.choice(["none", "first-survivor", "survivor-count"])
            stop_text = {
                "none": "none",
                "first-survivor": "first-survivor",
                "survivor-count": f"survivor-count:{count}",
            }[kind]
            threshold = {"none": 0, "first-survivor": 1, "survivor-count": count}[kind]

            trial_dir = tmp_path / f"t{trial}"
            baseline = trial_dir / "baseline"
            baseline.mkdir(parents=True)
            script: dict = {}
            apps, records = [], []
            for i, killed in enumerate(killed_flags):
                app_dir = trial_dir / f"mutant-{i:03d}"
                app_dir.mkdir()
                record = MutantRecord(
                    id=f"m{i}", operator="R1", scope="main",
                    file="Main.java", start_line=5, end_line=6,
                )
                records.append(record)
                apps.append(MutatedApp(root_dir=str(app_dir), records=[record]))
                if killed:
                    script[app_dir.name] = [
                        {"ruleId": "r", "file": "Main.java", "line": 5}
                    ]
            script_path = trial_dir / "script.json"
            script_path.write_text(json.dumps(script))

            raw = parse_properties(
                "apiName = javax.crypto.Cipher\nscope = main\n"
                f"stopCondition = {stop_text}\noutputDir = {trial_dir / 'out'}\n"
            )
            cfg = validate_config(raw, registry)
            seed = CampaignSeed(
                scope="main", seeding_mode="per-mutant-copy",
                baseline_dir=str(baseline), apps=apps, records=records,
                registry_file=str(trial_dir / "out" / "mutants.registry"),
                output_dir=str(trial_dir / "out"),
            )
            profile = builtin_profile("scripted", script_path=str(script_path))
            result = run_campaign(cfg, seed, profile)

            expected = n
            if threshold:
                survivors = 0
                for i, killed in enumerate(killed_flags):
                    if not killed:
                        survivors += 1
                        if survivors >= threshold:
                            expected = i + 1
                            break
            assert len(result.runs) == expected, (trial, killed_flags, stop_text)
