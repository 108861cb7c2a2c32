from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DALLAS_TEMPLATE_TEXT, DALLAS_DATADRIVEN_TEXT, TED_TEMPLATE_TEXT
from kg2t.faithfulness import (
    CAT_HALL_DROP, CAT_HALL_NO_DROP, CAT_NO_HALL_DROP, CAT_NO_HALL_NO_DROP,
    DEFAULT_IGNORE, RealizationTrace, RealizedSlot, categorize_slot_errors,
    count_slot_errors, read_faithfulness_csv, trace_realization,
)
from kg2t.records import EntityRecord, SlotOccurrence
from kg2t.templates import generate_template_text


class TestTraceRealization:
    def test_template_text_realizes_everything_countable(self, dallas):
        trace = trace_realization(dallas, DALLAS_TEMPLATE_TEXT)
        report = count_slot_errors(trace, dallas, ignore=DEFAULT_IGNORE)
        assert report.dropped == 0

    def test_datadriven_text_drop_hallucination_repetition(self, dallas):
        trace = trace_realization(dallas, DALLAS_DATADRIVEN_TEXT)
        report = count_slot_errors(trace, dallas, ignore=DEFAULT_IGNORE)
        assert report.dropped >= 1      # no place of death
        assert report.hallucinated >= 1  # "American football position ..."
        assert report.repeated >= 1      # Newport, Delaware twice
        flagged = " ".join(DALLAS_DATADRIVEN_TEXT[s:e] for (s, e), _ in trace.hallucinated_spans)
        assert "football position" in flagged

    def test_empty_text_drops_all(self, ted):
        trace = trace_realization(ted, "")
        report = count_slot_errors(trace, ted, ignore=DEFAULT_IGNORE)
        countable = sum(1 for p, values in ted.properties.items()
                        if p not in DEFAULT_IGNORE for _ in values)
        assert report.dropped == countable

    def test_internal_trace_returned_as_is(self, dallas, library):
        generated = generate_template_text(dallas, library)
        trace = trace_realization(dallas, generated.text, internal=generated.trace)
        assert trace is generated.trace

    def test_internal_trace_span_validated(self, dallas):
        bogus = RealizationTrace(realized=[
            RealizedSlot(SlotOccurrence("place of death", 0, "Philadelphia"), (5, 99999))])
        with pytest.raises(ValueError):
            trace_realization(dallas, "tiny", internal=bogus)

    def test_reconstruction_marks_candidates_not_name(self, dallas):
        text = "Dallas Green (baseball) coached the Chicago Cubs."
        trace = trace_realization(dallas, text)
        assert all(slot.occurrence.property != "Name_ID" for slot in trace.realized)
        flagged = [text[s:e] for (s, e), _ in trace.hallucinated_spans]
        assert any("Chicago Cubs" in span for span in flagged)


class TestCountSlotErrors:
    def test_tt7_all_realized(self, ted, library):
        generated = generate_template_text(ted, library)
        report = count_slot_errors(generated.trace, ted, ignore=DEFAULT_IGNORE)
        # hand count against the record: 7 countable occurrences, all realized
        assert report.dropped == 0
        assert report.hallucinated == 0
        assert report.category == CAT_NO_HALL_NO_DROP

    def test_ignore_everything_means_no_drops(self, dallas):
        trace = trace_realization(dallas, "")
        report = count_slot_errors(trace, dallas, ignore=set(dallas.properties))
        assert report.dropped == 0

    def test_repeated_counts_beyond_first(self, dallas):
        occ = SlotOccurrence("place of death", 0, "Philadelphia")
        trace = RealizationTrace(realized=[RealizedSlot(occ), RealizedSlot(occ), RealizedSlot(occ)])
        report = count_slot_errors(trace, dallas, ignore=DEFAULT_IGNORE)
        assert report.repeated == 2

    def test_distinct_realized_plus_dropped_is_countable(self, ted, library):
        generated = generate_template_text(ted, library)
        report = count_slot_errors(generated.trace, ted, ignore=DEFAULT_IGNORE)
        countable = sum(1 for p, values in ted.properties.items()
                        if p not in DEFAULT_IGNORE for _ in values)
        distinct = len({(s.occurrence.property, s.occurrence.index)
                        for s in generated.trace.realized
                        if s.occurrence.property not in DEFAULT_IGNORE})
        assert distinct + report.dropped == countable


class TestCategorize:
    def test_category_mapping(self):
        assert categorize_slot_errors(0, 0) == CAT_NO_HALL_NO_DROP
        assert categorize_slot_errors(2, 1) == CAT_HALL_DROP
        assert categorize_slot_errors(0, 3) == CAT_NO_HALL_DROP
        assert categorize_slot_errors(4, 0) == CAT_HALL_NO_DROP

    @given(h=st.integers(0, 50), d=st.integers(0, 50))
    @settings(max_examples=200, deadline=None)
    def test_total_exhaustive_exclusive(self, h, d):
        category = categorize_slot_errors(h, d)
        assert category in (1, 2, 3, 4)
        assert (category in (2, 4)) == (h > 0)
        assert (category in (2, 3)) == (d > 0)


class TestMlFixture:
    def test_labeled_distribution_recovered(self, fixtures_dir):
        rows = read_faithfulness_csv(fixtures_dir / "ml_slot_fixture.csv")
        assert len(rows) == 68
        recomputed = Counter(categorize_slot_errors(r["hallucinated"], r["dropped"])
                             for r in rows)
        assert recomputed[CAT_NO_HALL_DROP] == 47
        assert recomputed[CAT_HALL_DROP] == 14
        assert recomputed[CAT_NO_HALL_NO_DROP] == 7
        for row in rows:
            assert row["category"] == categorize_slot_errors(row["hallucinated"], row["dropped"])
