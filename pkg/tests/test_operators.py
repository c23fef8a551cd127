import pytest

from conftest import algorithm_corpus
from masc.catalog import FLEXIBLE, RESTRICTIVE
from masc.errors import PatternMismatch, UnknownOperator
from masc.operators import (
    BUILTIN_IDS,
    MisuseCase,
    build_misuse_case,
    instantiate_flexible,
    instantiate_restrictive,
    list_operators,
)
from masc.strexpr import evaluate_string_expression
from masc.structural import check_snippet

RESTRICTIVE_IDS = ("R1", "R2", "R3", "R4", "R5", "R6")
FLEXIBLE_IDS = ("F1", "F2", "F3", "F4", "F5", "F6")


class TestInventory:
    def test_exactly_twelve_builtins(self, registry):
        infos = list_operators(registry)
        assert len(infos) == 12
        assert tuple(i.id for i in infos) == BUILTIN_IDS

    def test_six_restrictive_six_flexible(self, registry):
        infos = list_operators(registry)
        assert sum(1 for i in infos if i.pattern == RESTRICTIVE) == 6
        assert sum(1 for i in infos if i.pattern == FLEXIBLE) == 6

    def test_threat_tags_non_empty_and_known(self, registry):
        for info in list_operators(registry):
            assert info.threat_tags
            assert set(info.threat_tags) <= {"T1", "T2", "T3"}


class TestRestrictive:
    def test_r1_flips_case(self, cipher_case):
        mutant = instantiate_restrictive("R1", cipher_case)
        assert 'Cipher.getInstance("des");' in mutant.snippet

    def test_r2_split(self, cipher_case):
        mutant = instantiate_restrictive("R2", cipher_case, {"split_index": 1})
        assert mutant.arg_expression == '"D" + "ES"'

    def test_r3_default_is_single_replace(self, cipher_case):
        mutant = instantiate_restrictive("R3", cipher_case)
        assert mutant.arg_expression == '"DXES".replace("X", "")'

    def test_r4_alias_chain(self, cipher_case):
        mutant = instantiate_restrictive("R4", cipher_case, {"alias_depth": 2})
        assert "String maskVar0 = \"DES\";" in mutant.snippet
        assert "String maskVar1 = maskVar0;" in mutant.snippet
        assert mutant.snippet.endswith("Cipher.getInstance(maskVar1);")
        value = evaluate_string_expression(mutant.decl_statements, mutant.arg_expression)
        assert value == "DES"

    def test_r5_goes_through_helper(self, cipher_case):
        mutant = instantiate_restrictive("R5", cipher_case)
        assert "class MaskHelper0" in mutant.snippet
        value = evaluate_string_expression(mutant.decl_statements, mutant.arg_expression)
        assert value == "DES"

    def test_r6_is_plain_insecure_call(self, cipher_case):
        mutant = instantiate_restrictive("R6", cipher_case)
        assert mutant.snippet == 'Cipher.getInstance("DES");'

    def test_pattern_mismatch(self, tm_case):
        with pytest.raises(PatternMismatch):
            instantiate_restrictive("R1", tm_case)

    def test_unknown_operator(self, cipher_case):
        with pytest.raises(UnknownOperator):
            instantiate_restrictive("R9", cipher_case)

    def test_respects_invocation_override(self, catalog):
        case = build_misuse_case(
            catalog.lookup("Cipher"), catalog, invocation="getInstanceStrong"
        )
        mutant = instantiate_restrictive("R1", case)
        assert "Cipher.getInstanceStrong(" in mutant.snippet


class TestSemanticPreservation:
    """For every builtin restrictive operator the oracle value equals the
    insecure parameter: exactly for R2-R6, up to case for R1."""

    @pytest.mark.parametrize("op_id", RESTRICTIVE_IDS)
    def test_fuzzed_parameters(self, catalog, op_id):
        for value in algorithm_corpus(200):
            case = build_misuse_case(
                catalog.lookup("Cipher"), catalog, insecure_param=value
            )
            mutant = instantiate_restrictive(op_id, case)
            got = evaluate_string_expression(
                mutant.decl_statements, mutant.arg_expression
            )
            if op_id == "R1":
                assert got.casefold() == value.casefold(), (op_id, value, got)
            else:
                assert got == value, (op_id, value, got)

    @pytest.mark.parametrize("op_id", RESTRICTIVE_IDS)
    @pytest.mark.parametrize("params", [{}, {"split_index": 3}, {"alias_depth": 5}, {"chain_len": 4}])
    def test_parameterized_variants_preserve_value(self, catalog, op_id, params):
        for value in algorithm_corpus(25, seed=13):
            case = build_misuse_case(
                catalog.lookup("Cipher"), catalog, insecure_param=value
            )
            mutant = instantiate_restrictive(op_id, case, params)
            got = evaluate_string_expression(
                mutant.decl_statements, mutant.arg_expression
            )
            if op_id == "R1":
                assert got.casefold() == value.casefold()
            else:
                assert got == value


class TestFlexible:
    def test_f4_implements_with_empty_overrides(self, tm_case):
        mutant = instantiate_flexible("F4", tm_case)
        assert mutant.kind == "type-declaration"
        assert "implements X509TrustManager" in mutant.snippet
        assert mutant.snippet.count("@Override") == 3
        assert mutant.use_stmt == "X509TrustManager maskVar0 = new MaskClass0();"

    def test_f1_never_true_guard(self, tm_case):
        mutant = instantiate_flexible("F1", tm_case)
        assert 'if ("x".equals(""))' in mutant.snippet
        assert "throw new CertificateException();" in mutant.snippet

    def test_f2_empty_range_loop(self, tm_case):
        mutant = instantiate_flexible("F2", tm_case)
        assert "for (int maskIdx0 = 0; maskIdx0 < 0; maskIdx0++)" in mutant.snippet

    def test_f3_null_return(self, tm_case):
        mutant = instantiate_flexible("F3", tm_case)
        assert "return null;" in mutant.snippet
        assert "return;" in mutant.snippet

    def test_f5_extends_abstract_class(self, tm_case):
        mutant = instantiate_flexible("F5", tm_case)
        assert "extends X509ExtendedTrustManager" in mutant.snippet
        assert mutant.snippet.count("@Override") == 7

    def test_f6_anonymous_object(self, tm_case):
        mutant = instantiate_flexible("F6", tm_case)
        assert mutant.kind == "statement-sequence"
        assert "new X509TrustManager() {" in mutant.snippet
        assert mutant.snippet.rstrip().endswith("};")

    def test_every_member_overridden(self, tm_case, catalog):
        for op_id in ("F1", "F2", "F3", "F4", "F6"):
            mutant = instantiate_flexible(op_id, tm_case)
            for member in tm_case.api.members:
                assert member.name in mutant.snippet, (op_id, member.name)

    def test_pattern_mismatch(self, cipher_case):
        with pytest.raises(PatternMismatch):
            instantiate_flexible("F1", cipher_case)

    def test_f5_without_extension_target(self, tm_case):
        bare = MisuseCase(
            api=tm_case.api,
            insecure_param=tm_case.insecure_param,
            secure_param=tm_case.secure_param,
            baseline_snippet=tm_case.baseline_snippet,
            extension_api=None,
        )
        with pytest.raises(PatternMismatch):
            instantiate_flexible("F5", bare)


class TestMutantHygiene:
    @pytest.mark.parametrize("op_id", RESTRICTIVE_IDS + FLEXIBLE_IDS)
    def test_snippets_pass_structural_validation(self, cipher_case, tm_case, op_id):
        case = cipher_case if op_id.startswith("R") else tm_case
        mutant = (
            instantiate_restrictive(op_id, case)
            if op_id.startswith("R")
            else instantiate_flexible(op_id, case)
        )
        assert check_snippet(mutant.snippet) is None
        if mutant.use_stmt:
            assert check_snippet(mutant.use_stmt) is None

    def test_structural_validity_fuzzed_over_descriptors_and_params(self, catalog):
        """Every builtin, over every applicable bundled descriptor, with
        fuzzed parameter values, yields a lexically sound snippet."""
        import random

        rng = random.Random(31)
        for api in catalog.apis:
            case = build_misuse_case(api, catalog)
            ops = RESTRICTIVE_IDS if api.pattern == RESTRICTIVE else FLEXIBLE_IDS
            for op_id in ops:
                for _ in range(5):
                    params = {
                        "split_index": rng.randint(0, 30),
                        "alias_depth": rng.randint(1, 6),
                        "chain_len": rng.randint(1, 5),
                    }
                    seed = rng.randint(0, 99)
                    mutant = (
                        instantiate_restrictive(op_id, case, params, name_seed=seed)
                        if api.pattern == RESTRICTIVE
                        else instantiate_flexible(op_id, case, params, name_seed=seed)
                    )
                    assert check_snippet(mutant.snippet) is None, (api.name, op_id)
                    if mutant.use_stmt:
                        assert check_snippet(mutant.use_stmt) is None

    @pytest.mark.parametrize("op_id", RESTRICTIVE_IDS + FLEXIBLE_IDS)
    def test_byte_determinism(self, cipher_case, tm_case, op_id):
        case = cipher_case if op_id.startswith("R") else tm_case
        make = instantiate_restrictive if op_id.startswith("R") else instantiate_flexible
        assert make(op_id, case, name_seed=3) == make(op_id, case, name_seed=3)

    def test_name_seed_shifts_names(self, tm_case):
        a = instantiate_flexible("F4", tm_case, name_seed=0)
        b = instantiate_flexible("F4", tm_case, name_seed=7)
        assert a.type_name == "MaskClass0"
        assert b.type_name == "MaskClass7"

    @pytest.mark.parametrize("op_id", RESTRICTIVE_IDS)
    def test_applicability_partition_restrictive(self, tm_case, op_id):
        with pytest.raises(PatternMismatch):
            instantiate_restrictive(op_id, tm_case)

    @pytest.mark.parametrize("op_id", FLEXIBLE_IDS)
    def test_applicability_partition_flexible(self, cipher_case, op_id):
        with pytest.raises(PatternMismatch):
            instantiate_flexible(op_id, cipher_case)
