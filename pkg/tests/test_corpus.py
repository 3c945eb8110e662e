from __future__ import annotations

import json
import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jaxport.corpus import (
    EvalPair,
    FixStep,
    FixedBugEntry,
    append_fix_step,
    count_fix_steps,
    dataset_stats,
    leave_one_out_context,
    load_corpus,
    load_dataset,
    parse_dataset,
    save_dataset,
    serialize_dataset,
    validate_entry,
    validate_pair,
)
from jaxport.errors import (
    DatasetParseError,
    DatasetValidationError,
    EmptyDatasetError,
    EntryNotFoundError,
)


def entry_obj(eid: str, steps: int = 1, **extra) -> dict:
    errors = [
        {
            "Error_Code": f"E{k}",
            "Error": f"trace {k}",
            "Fix_info": f"change {k}",
            "Fixed_Code": f"x = {k}",
        }
        for k in range(steps)
    ]
    obj = {
        "Example_id": eid,
        "Input_Code": "import torch\nx = torch.ones(3)",
        "LLM_weak_output": "x = ones(3)",
        "LLM_fix_output": "import jax.numpy as jnp\nx = jnp.ones(3)",
        "Errors": errors,
    }
    if steps == 0:
        obj["LLM_weak_output"] = obj["LLM_fix_output"]
    obj.update(extra)
    return obj


def write_dataset(tmp_path, objs, name="ds.json"):
    path = tmp_path / name
    path.write_text(json.dumps(objs, indent=2), encoding="utf-8")
    return path


class TestParsing:
    def test_packaged_fixture_loads(self, fixed_bug_dataset):
        assert len(fixed_bug_dataset) == 20
        ids = [e.example_id for e in fixed_bug_dataset]
        assert len(set(ids)) == 20
        assert "h10" in ids and "e1" in ids

    def test_roundtrip_is_identity(self, fixed_bug_dataset):
        assert parse_dataset(serialize_dataset(fixed_bug_dataset)) == fixed_bug_dataset

    def test_serialization_is_deterministic(self, fixed_bug_dataset):
        assert serialize_dataset(fixed_bug_dataset) == serialize_dataset(
            fixed_bug_dataset
        )

    def test_duplicate_id_rejected(self):
        text = json.dumps([entry_obj("a"), entry_obj("a")])
        with pytest.raises(DatasetValidationError, match="duplicate"):
            parse_dataset(text)

    def test_missing_required_field_named_in_error(self):
        obj = entry_obj("a")
        del obj["Input_Code"]
        with pytest.raises(DatasetValidationError, match="Input_Code"):
            parse_dataset(json.dumps([obj]))

    def test_unknown_field_rejected(self):
        with pytest.raises(DatasetValidationError, match="Bogus"):
            parse_dataset(json.dumps([entry_obj("a", Bogus=1)]))

    def test_optional_category_accepted(self):
        entries = parse_dataset(
            json.dumps([entry_obj("a", Category="API", Subcategory="dtype")])
        )
        assert entries[0].category == "API"
        assert entries[0].subcategory == "dtype"

    def test_step_missing_field_rejected(self):
        obj = entry_obj("a")
        del obj["Errors"][0]["Fix_info"]
        with pytest.raises(DatasetValidationError, match="Fix_info"):
            parse_dataset(json.dumps([obj]))

    def test_non_array_rejected(self):
        with pytest.raises(DatasetValidationError, match="array"):
            parse_dataset(json.dumps({"Example_id": "a"}))

    def test_parse_error_reports_utf8_byte_offset(self):
        # The bad token sits at character 6 but byte 7: the multibyte
        # e-acute before it occupies two bytes.
        text = '["é", oops]'
        with pytest.raises(DatasetParseError) as exc_info:
            parse_dataset(text)
        assert exc_info.value.byte_offset == 7

    def test_missing_file_is_validation_error(self, tmp_path):
        with pytest.raises(DatasetValidationError, match="cannot read"):
            load_dataset(tmp_path / "absent.json")

    def test_zero_step_entry_requires_identical_outputs(self):
        obj = entry_obj("a", steps=0)
        obj["LLM_weak_output"] = "something else"
        with pytest.raises(DatasetValidationError, match="no fix steps"):
            parse_dataset(json.dumps([obj]))

    def test_zero_step_entry_with_identical_outputs_is_valid(self):
        entries = parse_dataset(json.dumps([entry_obj("a", steps=0)]))
        assert count_fix_steps(entries[0]) == 0


class TestValidation:
    def test_validate_entry_empty_input_code(self):
        entry = FixedBugEntry(
            example_id="a",
            input_code="   ",
            llm_weak_output="w",
            llm_fix_output="w",
        )
        assert any("input_code" in v for v in validate_entry(entry))

    def test_validate_entry_clean(self, fixed_bug_dataset):
        for entry in fixed_bug_dataset:
            assert validate_entry(entry) == []

    def test_validate_pair_flags_empty_sides(self):
        pair = EvalPair(pair_id="p", source_code="", candidate_code=" ")
        violations = validate_pair(pair)
        assert len(violations) == 2

    def test_validate_pair_clean(self):
        assert validate_pair(EvalPair("p", "a = 1", "b = 2")) == []


class TestStats:
    def test_fixture_stats(self, fixed_bug_dataset):
        stats = dataset_stats(fixed_bug_dataset)
        assert stats.total == 163
        assert stats.minimum == 1
        assert stats.maximum == 32
        assert stats.median == 5.0
        assert abs(stats.mean - 8.15) < 0.005

    def test_empty_dataset_has_no_stats(self):
        with pytest.raises(EmptyDatasetError):
            dataset_stats([])

    def test_single_entry(self):
        entries = parse_dataset(json.dumps([entry_obj("a", steps=3)]))
        stats = dataset_stats(entries)
        assert (stats.minimum, stats.maximum, stats.total) == (3, 3, 3)
        assert stats.mean == 3.0 and stats.median == 3.0


class TestLeaveOneOut:
    def test_excludes_exactly_the_target(self, fixed_bug_dataset):
        context = leave_one_out_context(fixed_bug_dataset, "m4")
        assert '"Example_id": "m4",' not in context
        assert context.count('"Example_id": ') == 19

    def test_prefix_ids_do_not_collide(self, fixed_bug_dataset):
        # h1 is a prefix of h10; excluding h1 must keep h10.
        context = leave_one_out_context(fixed_bug_dataset, "h1")
        assert '"Example_id": "h1",' not in context
        assert '"Example_id": "h10",' in context

    def test_preserves_order(self, fixed_bug_dataset):
        context = leave_one_out_context(fixed_bug_dataset, "e1")
        remaining = [e for e in fixed_bug_dataset if e.example_id != "e1"]
        assert context == serialize_dataset(remaining)

    def test_unknown_id(self, fixed_bug_dataset):
        with pytest.raises(EntryNotFoundError):
            leave_one_out_context(fixed_bug_dataset, "nope")


class TestRecording:
    def make_file(self, tmp_path):
        return write_dataset(tmp_path, [entry_obj("a", steps=1), entry_obj("b")])

    def step(self, tag="T0"):
        return FixStep(
            error_code=tag,
            error_message="TypeError: boom",
            fix_info="swap the call",
            fixed_code="y = 2",
        )

    def test_append_persists(self, tmp_path):
        path = self.make_file(tmp_path)
        updated = append_fix_step(path, "a", self.step())
        assert len(updated.errors) == 2
        reloaded = load_dataset(path)
        assert count_fix_steps(reloaded[0]) == 2
        assert reloaded[0].errors[-1].error_code == "T0"

    def test_append_is_append_only(self, tmp_path):
        path = self.make_file(tmp_path)
        before = load_dataset(path)[0].errors
        updated = append_fix_step(path, "a", self.step())
        assert updated.errors[: len(before)] == before

    def test_append_unknown_id(self, tmp_path):
        path = self.make_file(tmp_path)
        with pytest.raises(EntryNotFoundError):
            append_fix_step(path, "zz", self.step())

    def test_append_rejects_empty_error_code(self, tmp_path):
        path = self.make_file(tmp_path)
        bad = FixStep(error_code="", error_message="m", fix_info="i", fixed_code="c")
        with pytest.raises(DatasetValidationError):
            append_fix_step(path, "a", bad)

    def test_concurrent_appends_all_land(self, tmp_path):
        path = self.make_file(tmp_path)
        errors = []

        def work(k):
            try:
                append_fix_step(path, "a", self.step(tag=f"T{k}"))
            except Exception as exc:  # noqa: BLE001 - surfaced below
                errors.append(exc)

        threads = [threading.Thread(target=work, args=(k,)) for k in range(6)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert errors == []
        assert count_fix_steps(load_dataset(path)[0]) == 7

    def test_save_dataset_atomic_leaves_no_temp_files(self, tmp_path):
        path = tmp_path / "ds.json"
        entries = parse_dataset(json.dumps([entry_obj("a")]))
        save_dataset(entries, path)
        save_dataset(entries, path)
        assert [p.name for p in tmp_path.iterdir()] == ["ds.json"]
        assert load_dataset(path) == entries


class TestCorpusFile:
    def test_fixture_corpus(self, corpus_path):
        pairs = load_corpus(corpus_path)
        assert len(pairs) == 5
        assert all(p.source_code.strip() for p in pairs)

    def test_reference_optional(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(
            json.dumps(
                [
                    {"id": "x", "code": "a = 1"},
                    {"id": "y", "code": "b = 2", "reference": "c = 3"},
                ]
            ),
            encoding="utf-8",
        )
        pairs = load_corpus(path)
        assert pairs[0].reference_code is None
        assert pairs[1].reference_code == "c = 3"

    def test_duplicate_ids_rejected(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(
            json.dumps([{"id": "x", "code": "a"}, {"id": "x", "code": "b"}]),
            encoding="utf-8",
        )
        with pytest.raises(DatasetValidationError):
            load_corpus(path)

    def test_missing_file_is_validation_error(self, tmp_path):
        with pytest.raises(DatasetValidationError, match="cannot read"):
            load_corpus(tmp_path / "absent.json")


code_text = st.text(min_size=1, max_size=40).filter(lambda s: s.strip())


@st.composite
def entry_strategy(draw, eid):
    steps = tuple(
        FixStep(
            error_code=draw(code_text),
            error_message=draw(st.text(max_size=40)),
            fix_info=draw(st.text(max_size=40)),
            fixed_code=draw(code_text),
        )
        for _ in range(draw(st.integers(min_value=0, max_value=3)))
    )
    weak = draw(st.text(max_size=40))
    fix = draw(st.text(max_size=40)) if steps else weak
    return FixedBugEntry(
        example_id=eid,
        input_code=draw(code_text),
        llm_weak_output=weak,
        llm_fix_output=fix,
        errors=steps,
        category=draw(st.one_of(st.none(), code_text)),
        subcategory=draw(st.one_of(st.none(), code_text)),
    )


@st.composite
def dataset_strategy(draw):
    n = draw(st.integers(min_value=1, max_value=4))
    return [draw(entry_strategy(f"id{i}")) for i in range(n)]


class TestRoundTripProperty:
    @settings(max_examples=50, deadline=None)
    @given(dataset_strategy())
    def test_serialize_parse_roundtrip(self, entries):
        assert parse_dataset(serialize_dataset(entries)) == entries
