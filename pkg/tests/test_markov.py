import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kg2t.markov import (
    END_TOKEN, OOV_TOKEN, START_TOKEN, MarkovPlanner, SlotTransducer,
    generate_datadriven_text, load_model, plan_sentences, planner_sequences,
    postprocess, reference_sentences, save_model, train_planner,
    train_transducer, transduce,
)
from kg2t.records import EntityRecord


@pytest.fixture()
def training_pairs(ted, dallas):
    return [
        (ted, "Ted Kleinhans (April 8 1899 -- July 24 1985) was a pitcher who "
              "played for the Philadelphia Phillies Cincinnati Reds and New York "
              "Yankees. He was born in Deer Park, Wisconsin."),
        (dallas, "Dallas Green (baseball) (August 4 1934 -- March 22 2017) was a "
                 "pitcher who played for the New York Mets. He was born in "
                 "Newport, Delaware."),
    ]


class TestTrainPlanner:
    def test_hand_counted_bigram(self):
        planner = train_planner([["A", "B", "C"], ["A", "B", "D"]], n=2)
        state = dict(planner.transitions[("A", "B")])
        assert state == {"C": 0.5, "D": 0.5}

    def test_single_sequence_degenerate(self):
        planner = train_planner([["A", "B"]], n=1)
        for transitions in planner.transitions.values():
            assert [p for _, p in transitions] == [1.0]

    def test_order_larger_than_sequences(self):
        planner = train_planner([["A"]], n=4)
        assert (START_TOKEN,) * 4 in planner.counts
        for transitions in planner.transitions.values():
            assert sum(p for _, p in transitions) == pytest.approx(1.0, abs=1e-9)

    def test_bad_order(self):
        with pytest.raises(ValueError):
            train_planner([["A"]], n=0)

    @given(st.lists(st.lists(st.sampled_from("abcde"), min_size=1, max_size=6),
                    min_size=1, max_size=8),
           st.integers(1, 3))
    @settings(max_examples=100, deadline=None)
    def test_states_normalize(self, sequences, n):
        planner = train_planner(sequences, n)
        for state, transitions in planner.transitions.items():
            assert len(state) == n
            total = sum(p for _, p in transitions)
            assert total == pytest.approx(1.0, abs=1e-9)
            assert all(p > 0 for _, p in transitions)


class TestPlanSentences:
    def test_forced_walk(self):
        planner = train_planner([["Name_ID", "dob"]], n=2)
        record = EntityRecord("X", {"dob": ["1950"]})
        plan = plan_sentences(planner, record)
        assert plan.groups == [["Name_ID", "dob"]]

    def test_unseen_type_lands_in_fallback_group(self):
        planner = train_planner([["Name_ID", "dob"]], n=2)
        record = EntityRecord("X", {"dob": ["1950"], "exotic": ["?"]})
        plan = plan_sentences(planner, record)
        assert plan.groups[-1][-1] == "exotic"
        flat = [t for g in plan.groups for t in g]
        assert sorted(flat) == sorted(["Name_ID", "dob", "exotic"])

    def test_equal_probability_tie_lexicographic(self):
        planner = train_planner([["a", "b"], ["a", "c"]], n=1)
        record = EntityRecord("X", {"a": ["1"], "b": ["2"], "c": ["3"]})
        plan = plan_sentences(planner, record)
        after_a = [t for g in plan.groups for t in g]
        assert after_a.index("b") < after_a.index("c")

    def test_groups_split_at_end_token(self, training_pairs):
        planner = train_planner(planner_sequences(training_pairs), n=2)
        record = training_pairs[0][0]
        plan = plan_sentences(planner, record)
        assert len(plan.groups) >= 2
        assert all(group for group in plan.groups)

    def test_empty_record_rejected(self):
        planner = train_planner([["x"]], n=1)
        with pytest.raises(ValueError):
            plan_sentences(planner, EntityRecord(""))


class TestTransducer:
    def test_single_pair_counts(self):
        record = EntityRecord("John Smith", {"place of birth": ["Leeds"]})
        pairs = [(record, "John Smith was born in Leeds.")]
        transducer = train_transducer(pairs)
        key = ("Name_ID", "place of birth")
        assert transducer.table[key] == {"[Name_ID:0] was born in [place of birth:0].": 1}

    def test_competing_templates_both_stored(self):
        r1 = EntityRecord("A B", {"p": ["x"]})
        r2 = EntityRecord("C D", {"p": ["y"]})
        pairs = [(r1, "A B from x."), (r2, "C D from y."), (r2, "C D of y.")]
        transducer = train_transducer(pairs)
        counts = transducer.table[("Name_ID", "p")]
        assert counts["[Name_ID:0] from [p:0]."] == 2
        assert counts["[Name_ID:0] of [p:0]."] == 1

    def test_no_placeholder_sentence_feeds_fillers_only(self):
        record = EntityRecord("A B", {"p": ["zzz"]})
        transducer = train_transducer([(record, "Nothing matches here.")])
        assert transducer.table == {}
        assert transducer.fillers == {"Nothing matches here.": 1}

    def test_exact_key_hit(self):
        transducer = SlotTransducer(table={("dob",): {"born [dob:0].": 1}})
        assert transduce(transducer, ["dob"]) == "born [dob:0]."

    def test_argmax_by_count(self):
        transducer = SlotTransducer(table={("dob",): {"a [dob:0].": 3, "b [dob:0].": 1}})
        assert transduce(transducer, ["dob"]) == "a [dob:0]."

    def test_count_tie_lexicographic(self):
        transducer = SlotTransducer(table={("dob",): {"b [dob:0].": 2, "a [dob:0].": 2}})
        assert transduce(transducer, ["dob"]) == "a [dob:0]."

    def test_prefix_backoff_plus_fallback(self):
        transducer = SlotTransducer(table={
            ("dob",): {"born on [dob:0].": 2},
            ("pob",): {"in [pob:0].": 1},
        })
        assert transduce(transducer, ["dob", "pob"]) == "born on [dob:0]. in [pob:0]."

    def test_fallback_synthesized_for_unknown_type(self):
        transducer = SlotTransducer()
        assert transduce(transducer, ["pet"]) == "the pet is [pet:0]."

    def test_sentence_splitting(self):
        record = EntityRecord("A B", {"p": ["x"], "q": ["y"]})
        items = reference_sentences(record, "A B liked x. Then q was y.")
        assert [types for types, _ in items] == [["Name_ID", "p"], ["q"]]
        assert items[0][1].endswith(".")


class TestPostprocess:
    def test_spacing_and_capital(self):
        assert postprocess("john smith ( born 1950 ) was a pitcher .") == \
            "John smith (born 1950) was a pitcher."

    def test_special_tokens_removed(self):
        assert postprocess(f"he went to {OOV_TOKEN} in 1950") == "He went to in 1950"
        assert postprocess(f"{START_TOKEN} fine text {END_TOKEN}") == "Fine text"

    def test_idempotent_on_clean_text(self):
        clean = "Already clean (fine) text, here."
        assert postprocess(clean) == clean

    @given(st.text(alphabet="ab(),. <unk></s>ß", max_size=40))
    @settings(max_examples=300, deadline=None)
    def test_idempotent(self, text):
        once = postprocess(text)
        assert postprocess(once) == once


class TestGenerateDatadriven:
    def test_single_slot_exact_key(self):
        planner = train_planner([["p"]], n=1)
        transducer = SlotTransducer(table={
            ("Name_ID",): {"[Name_ID:0] lived.": 1},
            ("p",): {"the place was [p:0].": 1},
        })
        record = EntityRecord("A B", {"p": ["x"]})
        result = generate_datadriven_text(planner, transducer, record)
        assert "x" in result.text
        assert result.text == generate_datadriven_text(planner, transducer, record).text

    def test_empty_transducer_all_fallback(self):
        planner = train_planner([["p", "q"]], n=1)
        record = EntityRecord("A B", {"p": ["x"], "q": ["y"]})
        result = generate_datadriven_text(planner, SlotTransducer(), record)
        assert "x" in result.text and "y" in result.text
        assert result.text[0].isupper()

    def test_no_placeholder_reaches_output(self, training_pairs, dallas):
        planner = train_planner(planner_sequences(training_pairs), n=2)
        transducer = train_transducer(training_pairs)
        result = generate_datadriven_text(planner, transducer, dallas)
        assert "[" not in result.text and "]" not in result.text.replace("(baseball)", "")

    def test_trace_spans_match_text(self, training_pairs, dallas):
        planner = train_planner(planner_sequences(training_pairs), n=2)
        transducer = train_transducer(training_pairs)
        result = generate_datadriven_text(planner, transducer, dallas)
        for slot in result.trace.realized:
            start, end = slot.span
            assert result.text[start:end] == slot.occurrence.value
        for (start, end), reason in result.trace.hallucinated_spans:
            assert 0 <= start < end <= len(result.text)
            assert reason == "template-literal"

    def test_repetition_recorded_in_trace(self):
        # template learned from value-repeating text repeats the new value too
        trained_on = EntityRecord("A B", {"pob": ["X"]})
        pairs = [(trained_on, "A B was born in X in X.")]
        planner = train_planner(planner_sequences(pairs), n=2)
        transducer = train_transducer(pairs)
        record = EntityRecord("C D", {"pob": ["Newport", "Elsewhere"]})
        result = generate_datadriven_text(planner, transducer, record)
        assert result.text.count("Newport") == 2
        occurrences = [s.occurrence for s in result.trace.realized]
        assert len(occurrences) > len(set(occurrences))

    def test_literal_content_exposed_as_hallucination_candidate(self, training_pairs):
        planner = train_planner(planner_sequences(training_pairs), n=2)
        transducer = train_transducer(training_pairs)
        record = EntityRecord("New Person", {
            "date of birth": ["May 1 1900"], "date of death": ["May 2 1980"],
            "member of sports team": ["Some Club"], "place of birth": ["Somewhere"],
        })
        result = generate_datadriven_text(planner, transducer, record)
        literals = [result.text[s:e] for (s, e), _ in result.trace.hallucinated_spans]
        assert any("pitcher" in lit for lit in literals)


class TestModelIO:
    def test_round_trip(self, tmp_path, training_pairs):
        planner = train_planner(planner_sequences(training_pairs), n=2)
        transducer = train_transducer(training_pairs)
        save_model(tmp_path, planner, transducer)
        planner2, transducer2 = load_model(tmp_path)
        assert planner2.order == planner.order
        assert planner2.counts == planner.counts
        assert transducer2.table == transducer.table
        assert transducer2.fillers == transducer.fillers

    def test_counts_stored_as_integers(self, tmp_path, training_pairs):
        planner = train_planner(planner_sequences(training_pairs), n=2)
        save_model(tmp_path, planner, train_transducer(training_pairs))
        lines = (tmp_path / "transitions.tsv").read_text().splitlines()
        assert lines[0] == "order\t2"
        for line in lines[1:]:
            assert line.split("\t")[-1].isdigit()
