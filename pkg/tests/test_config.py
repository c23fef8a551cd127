import pytest
from hypothesis import given, strategies as st

from masc.config import (
    CampaignConfig,
    StopCondition,
    parse_properties,
    validate_config,
)
from masc.errors import (
    DuplicateKey,
    InvalidValue,
    MalformedLine,
    MissingAppSrc,
    MissingKey,
    UnknownOperator,
    UnknownScope,
)
from masc.plugins import load_plugins


@pytest.fixture()
def registry():
    return load_plugins([])


class TestParseProperties:
    def test_basic_entries(self):
        raw = parse_properties("apiName=javax.crypto.Cipher\ninvocation=getInstance")
        assert raw.entries == (
            ("apiName", "javax.crypto.Cipher"),
            ("invocation", "getInstance"),
        )

    def test_comments_and_blanks_skipped(self):
        raw = parse_properties("# comment\n\nscope = main\n")
        assert raw.entries == (("scope", "main"),)

    def test_duplicate_key(self):
        with pytest.raises(DuplicateKey) as exc:
            parse_properties("scope=main\nscope=exhaustive")
        assert exc.value.key == "scope"
        assert exc.value.line == 2

    def test_malformed_line(self):
        with pytest.raises(MalformedLine):
            parse_properties("this has no equals sign")

    def test_empty_key_or_value(self):
        with pytest.raises(MalformedLine):
            parse_properties("= value")
        with pytest.raises(MalformedLine):
            parse_properties("key =")

    def test_spaces_around_equals_optional(self):
        a = parse_properties("k=v")
        b = parse_properties("k = v")
        assert a.entries == b.entries

    def test_serialize_round_trip(self):
        text = "apiName = javax.crypto.Cipher\nscope = main\noperators = R1,R2\n"
        raw = parse_properties(text)
        assert parse_properties(raw.serialize()).entries == raw.entries


class TestStopCondition:
    def test_parse_variants(self):
        assert StopCondition.parse("none").kind == "none"
        first = StopCondition.parse("first-survivor")
        assert (first.kind, first.count) == ("first-survivor", 1)
        counted = StopCondition.parse("survivor-count:3")
        assert (counted.kind, counted.count) == ("survivor-count", 3)

    def test_bad_counts(self):
        with pytest.raises(InvalidValue):
            StopCondition.parse("survivor-count:0")
        with pytest.raises(InvalidValue):
            StopCondition.parse("survivor-count:x")
        with pytest.raises(InvalidValue):
            StopCondition.parse("sometimes")


class TestValidateConfig:
    def test_defaults(self, registry):
        raw = parse_properties("apiName=javax.crypto.Cipher")
        cfg = validate_config(raw, registry)
        assert cfg.scope == "main"
        assert cfg.seeding_mode == "per-mutant-copy"
        assert cfg.match_mode == "strict-span"
        assert cfg.span_slack_lines == 2
        assert cfg.stop_condition.kind == "none"
        assert len(cfg.operators) == 12

    def test_explicit_operators(self, registry):
        raw = parse_properties("apiName=javax.crypto.Cipher\noperators=R1,F4")
        cfg = validate_config(raw, registry)
        assert cfg.operators == ("R1", "F4")

    def test_operators_all_lists_builtins(self, registry):
        raw = parse_properties("apiName=javax.crypto.Cipher\noperators=ALL")
        cfg = validate_config(raw, registry)
        assert cfg.operators == tuple(f"R{i}" for i in range(1, 7)) + tuple(
            f"F{i}" for i in range(1, 7)
        )

    def test_missing_api_name(self, registry):
        with pytest.raises(MissingKey):
            validate_config(parse_properties("scope=main"), registry)

    def test_unknown_operator(self, registry):
        raw = parse_properties("apiName=x\noperators=R99")
        with pytest.raises(UnknownOperator):
            validate_config(raw, registry)

    def test_unknown_scope(self, registry):
        raw = parse_properties("apiName=x\nscope=galactic")
        with pytest.raises(UnknownScope):
            validate_config(raw, registry)

    def test_similarity_requires_app_src(self, registry):
        raw = parse_properties("apiName=x\nscope=similarity")
        with pytest.raises(MissingAppSrc):
            validate_config(raw, registry)

    def test_main_scope_drops_app_src(self, registry):
        raw = parse_properties("apiName=x\nscope=main\nappSrc=/tmp/app")
        cfg = validate_config(raw, registry)
        assert cfg.app_src is None
        assert any("appSrc" in w for w in cfg.warnings)

    def test_unknown_key_warns_not_errors(self, registry):
        raw = parse_properties("apiName=x\nmysteryKey=1")
        cfg = validate_config(raw, registry)
        assert any("mysteryKey" in w for w in cfg.warnings)

    def test_env_fallback_for_output_dir(self, registry, monkeypatch, tmp_path):
        monkeypatch.setenv("MASC_OUTPUT_DIR", str(tmp_path / "from-env"))
        raw = parse_properties("apiName=x")
        cfg = validate_config(raw, registry)
        assert cfg.output_dir == str(tmp_path / "from-env")

    def test_output_dir_must_be_creatable(self, registry, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("not a dir")
        raw = parse_properties(f"apiName=x\noutputDir={blocker}/sub")
        with pytest.raises(InvalidValue):
            validate_config(raw, registry)

    def test_deterministic(self, registry):
        raw = parse_properties("apiName=x\noperators=R1\nscope=main\noutputDir=out")
        assert validate_config(raw, registry) == validate_config(raw, registry)


_KEY_VALUES = {
    "apiName": st.just("javax.crypto.Cipher"),
    "scope": st.sampled_from(["main", "similarity", "exhaustive"]),
    "appSrc": st.just("some/app"),
    "operators": st.sampled_from(["ALL", "R1", "R1,R2,F4", "F6"]),
    "seedingMode": st.sampled_from(["per-mutant-copy", "batched"]),
    "matchMode": st.sampled_from(["strict-span", "file-level", "any-new-finding"]),
    "spanSlack": st.integers(min_value=0, max_value=9).map(str),
    "stopCondition": st.sampled_from(["none", "first-survivor", "survivor-count:2"]),
    "insecureParam": st.just("DES"),
}


@given(
    st.fixed_dictionaries(
        {"apiName": _KEY_VALUES["apiName"]},
        optional={k: v for k, v in _KEY_VALUES.items() if k != "apiName"},
    )
)
def test_validated_configs_satisfy_invariants(entries):
    registry = load_plugins([])
    raw = parse_properties("".join(f"{k}={v}\n" for k, v in entries.items()))
    try:
        cfg = validate_config(raw, registry)
    except MissingAppSrc:
        assert entries.get("scope") in ("similarity", "exhaustive")
        assert "appSrc" not in entries
        return
    assert isinstance(cfg, CampaignConfig)
    assert cfg.scope in ("main", "similarity", "exhaustive")
    assert (cfg.app_src is not None) == (cfg.scope != "main")
    assert cfg.span_slack_lines >= 0
    if cfg.stop_condition.kind == "survivor-count":
        assert cfg.stop_condition.count >= 1
    for op in cfg.operators:
        assert registry.has(op)
