import pytest
from hypothesis import given, strategies as st

import bruteforce
from maskbench.corpus import abstract_records, build_record
from maskbench.masking import (
    BLOCK_STATEMENT_CAP,
    CONSTRUCT_SPAN_CAP,
    LEVELS,
    MASK_SENTINEL,
    TOKEN_SPAN_CAP,
    draw_span_length,
    mask_record,
    read_dataset,
    render_input,
    write_dataset,
)

SEED = 13


def record_for(rec):
    r = build_record(rec["id"], rec["domain"], rec["code"])
    abstract_records([r])
    return r


def by_iid(instances):
    out = {}
    for inst in instances:
        assert inst.instance_id not in out
        out[inst.instance_id] = inst
    return out


class TestInventoryAgainstBruteForce:
    @pytest.mark.parametrize("level", LEVELS)
    def test_fixture_inventory_matches(self, fixture_corpus, level):
        for rec in fixture_corpus:
            r = record_for(rec)
            texts = r.raw_texts
            lines = [t.line for t in r.raw_tokens]
            expected = bruteforce.expected_instances(r.method_id, texts, lines, level, SEED)
            got = mask_record(r, level, SEED, "raw")
            assert [i.instance_id for i in got] == [e["iid"] for e in expected], rec["id"]
            for inst, exp in zip(got, expected):
                assert inst.prefix == exp["prefix"]
                assert inst.masked == exp["masked"]
                assert inst.suffix == exp["suffix"]
                assert inst.site == exp["site"]

    @pytest.mark.parametrize("level", LEVELS)
    def test_raw_abstract_parallelism(self, fixture_corpus, level):
        for rec in fixture_corpus:
            r = record_for(rec)
            raw = mask_record(r, level, SEED, "raw")
            abs_ = mask_record(r, level, SEED, "abstract")
            assert [i.instance_id for i in raw] == [i.instance_id for i in abs_], rec["id"]
            for a, b in zip(raw, abs_):
                assert a.site == b.site
                assert len(a.prefix) == len(b.prefix)
                assert len(a.masked) == len(b.masked)
                assert len(a.suffix) == len(b.suffix)

    def test_every_cap_respected_per_instance(self, fixture_corpus):
        for rec in fixture_corpus:
            r = record_for(rec)
            for inst in mask_record(r, "token", SEED, "raw"):
                assert 1 <= len(inst.masked) <= TOKEN_SPAN_CAP
            for inst in mask_record(r, "construct", SEED, "raw"):
                assert 1 <= len(inst.masked) <= CONSTRUCT_SPAN_CAP
            for inst in mask_record(r, "block", SEED, "raw"):
                assert inst.site["statements"] <= BLOCK_STATEMENT_CAP
            for level in LEVELS:
                for inst in mask_record(r, level, SEED, "raw"):
                    assert len(inst.masked) <= len(inst.prefix) + len(inst.suffix)
                    assert inst.prefix + inst.masked + inst.suffix == r.raw_texts


class TestPinnedSites:
    def test_long_construct_dropped(self):
        # Classic for header of 13 tokens exceeds the 10-token cap.
        r = record_for({"id": "m", "domain": "java",
                        "code": "void f(int[] xs) {\nfor (int i = 0; i < xs.length; i++) {\nuse(xs);\n}\n}"})
        kinds = [i.site["kind"] for i in mask_record(r, "construct", SEED, "raw")]
        assert "for-control" not in kinds
        assert "call-arguments" in kinds

    def test_condition_at_cap_kept(self):
        code = "boolean f(int a, int b) {\nif (a >= 0 && b != 0 || !strict) {\nreturn true;\n}\nreturn false;\n}"
        r = record_for({"id": "m", "domain": "java", "code": code})
        spans = [i for i in mask_record(r, "construct", SEED, "raw")
                 if i.site["kind"] == "if-condition"]
        assert len(spans) == 1
        assert len(spans[0].masked) == CONSTRUCT_SPAN_CAP
        assert spans[0].masked == ["a", ">=", "0", "&&", "b", "!=", "0", "||", "!", "strict"]

    def test_block_of_three_statements_dropped(self):
        code = "void f() {\nx();\ny();\nz();\n}"
        r = record_for({"id": "m", "domain": "java", "code": code})
        assert mask_record(r, "block", SEED, "raw") == []

    def test_block_includes_braces(self):
        code = "void f() {\nif (a) {\nx();\n}\n}"
        r = record_for({"id": "m", "domain": "java", "code": code})
        inner = by_iid(mask_record(r, "block", SEED, "raw"))["m|block|B9"]
        assert inner.masked[0] == "{" and inner.masked[-1] == "}"
        assert inner.site["statements"] == 1

    def test_ratio_rule_drops_outer_block(self):
        # The whole method body may never be masked: context would be
        # shorter than the span.
        code = "void f() {\nx();\ny();\n}"
        r = record_for({"id": "m", "domain": "java", "code": code})
        got = mask_record(r, "block", SEED, "raw")
        assert got == []  # body block has 2 statements but fails the ratio

    def test_empty_block_maskable(self):
        code = "void f() {\nif (a) {\n}\nx();\ny();\nz();\n}"
        r = record_for({"id": "m", "domain": "java", "code": code})
        got = by_iid(mask_record(r, "block", SEED, "raw"))
        assert "m|block|B9" in got
        assert got["m|block|B9"].masked == ["{", "}"]
        assert got["m|block|B9"].site["statements"] == 0

    def test_single_token_lines_skipped(self):
        code = "void f() {\nx();\n}"
        r = record_for({"id": "m", "domain": "java", "code": code})
        lines = {i.site["line"] for i in mask_record(r, "token", SEED, "raw")}
        assert 3 not in lines  # closing brace line has one token


class TestDrawSpanLength:
    def test_matches_independent_derivation(self):
        for mid in ("a", "b", "m|x"):
            for line in (1, 2, 9):
                for n in (2, 3, 11, 40):
                    assert draw_span_length(SEED, mid, line, n) == \
                        bruteforce.draw_span_length(SEED, mid, line, n)

    @given(st.integers(0, 2**32), st.text(max_size=20), st.integers(1, 500),
           st.integers(2, 400))
    def test_bounds_property(self, seed, mid, line, n):
        x = draw_span_length(seed, mid, line, n)
        assert 1 <= x <= min(TOKEN_SPAN_CAP, n - 1)

    def test_pure_function(self):
        assert draw_span_length(1, "m", 2, 7) == draw_span_length(1, "m", 2, 7)
        assert draw_span_length(1, "m", 2, 7) != draw_span_length(2, "m", 2, 7) or \
            draw_span_length(1, "m", 3, 7) != draw_span_length(2, "m", 3, 7)

    def test_rejects_single_token_line(self):
        with pytest.raises(ValueError):
            draw_span_length(SEED, "m", 1, 1)

    def test_distribution_covers_range(self):
        seen = {draw_span_length(SEED, f"m{k}", 1, 5) for k in range(200)}
        assert seen == {1, 2, 3, 4}


class TestDatasetIO:
    def test_round_trip(self, tmp_path, fixture_corpus):
        r = record_for(fixture_corpus[0])
        instances = []
        for level in LEVELS:
            instances.extend(mask_record(r, level, SEED, "raw"))
            instances.extend(mask_record(r, level, SEED, "abstract"))
        p = tmp_path / "ds.jsonl"
        write_dataset(p, instances)
        back = read_dataset(p)
        assert back == instances

    def test_render_input_uses_sentinel(self, fixture_corpus):
        r = record_for(fixture_corpus[0])
        inst = mask_record(r, "token", SEED, "raw")[0]
        rendered = render_input(inst)
        assert rendered.count(MASK_SENTINEL) == 1
        assert rendered == inst.prefix + [MASK_SENTINEL] + inst.suffix

    def test_unknown_level_rejected(self, fixture_corpus):
        r = record_for(fixture_corpus[0])
        with pytest.raises(ValueError):
            mask_record(r, "sentence", SEED, "raw")
