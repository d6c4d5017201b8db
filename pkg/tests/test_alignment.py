from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lineaudit.alignment import Metrics, OpKind, edit_alignment, edit_distance, evaluate, line_metrics
from lineaudit.corpus import Corpus
from lineaudit.errors import MissingPredictionError, UnknownLineError

from conftest import make_page, make_record
from oracles import oracle_distance, replay

short_text = st.text(alphabet="abc", max_size=12)


class TestEditAlignment:
    def test_identity(self):
        result = edit_alignment("abc", "abc")
        assert result.distance == 0
        assert [op.kind for op in result.ops] == [OpKind.MATCH] * 3

    def test_empty_source(self):
        result = edit_alignment("", "abc")
        assert result.distance == 3
        assert [op.kind for op in result.ops] == [OpKind.INSERT] * 3

    def test_empty_both(self):
        result = edit_alignment("", "")
        assert result.distance == 0
        assert result.ops == ()

    def test_kitten_sitting(self):
        # Frozen from the recursive oracle.
        assert oracle_distance("kitten", "sitting") == 3
        assert edit_alignment("kitten", "sitting").distance == 3

    def test_counts_sum_to_distance(self):
        result = edit_alignment("kitten", "sitting")
        assert result.distance == result.substitutions + result.insertions + result.deletions

    def test_added_prefix_yields_leading_insert_run(self):
        # Frozen from the oracle: distance 7, and the added prefix must
        # surface as a pure run at the head of the op sequence.
        result = edit_alignment("Ago", "morti. Ago")
        assert result.distance == 7 == oracle_distance("Ago", "morti. Ago")
        kinds = [op.kind for op in result.ops]
        assert kinds == [OpKind.INSERT] * 7 + [OpKind.MATCH] * 3

    def test_removed_suffix_yields_trailing_delete_run(self):
        # The deleted tail fragment must stay anchored at the end even
        # though "en" could also re-match inside "genommen".
        result = edit_alignment("hand genommen", "hand gen")
        assert result.distance == 5 == oracle_distance("hand genommen", "hand gen")
        kinds = [op.kind for op in result.ops]
        assert kinds == [OpKind.MATCH] * 8 + [OpKind.DELETE] * 5

    def test_substitution_not_turned_into_indels(self):
        result = edit_alignment("abc", "xbc")
        assert [op.kind for op in result.ops] == [OpKind.SUBSTITUTE, OpKind.MATCH, OpKind.MATCH]

    def test_word_sequences(self):
        result = edit_alignment(["hand", "genommen"], ["hand", "genen"])
        assert result.distance == 1
        assert result.substitutions == 1

    @given(short_text, short_text)
    def test_matches_oracle(self, a, b):
        assert edit_alignment(a, b).distance == oracle_distance(a, b)

    @given(short_text, short_text)
    def test_replay_reconstructs_target(self, a, b):
        replay(a, b, edit_alignment(a, b))

    @given(short_text, short_text)
    def test_distance_is_symmetric(self, a, b):
        assert edit_alignment(a, b).distance == edit_alignment(b, a).distance

    @given(short_text, short_text, short_text)
    def test_triangle_inequality(self, a, b, c):
        ab = edit_alignment(a, b).distance
        bc = edit_alignment(b, c).distance
        ac = edit_alignment(a, c).distance
        assert ac <= ab + bc

    def test_small_exhaustive_against_oracle(self):
        import itertools

        strings = [""]
        for length in range(1, 4):
            strings += ["".join(p) for p in itertools.product("ab", repeat=length)]
        for a in strings:
            for b in strings:
                result = edit_alignment(a, b)
                assert result.distance == oracle_distance(a, b), (a, b)
                replay(a, b, result)


class TestEditDistance:
    @given(short_text, short_text)
    def test_agrees_with_alignment(self, a, b):
        assert edit_distance(a, b) == edit_alignment(a, b).distance

    def test_token_sequences(self):
        assert edit_distance(["a", "bb"], ["a", "bb", "c"]) == 1


class TestLineMetrics:
    def test_identity_is_zero(self):
        m = line_metrics("x", "x")
        assert m.cer == 0 and m.wer == 0

    def test_cer_can_exceed_one(self):
        m = line_metrics("Ago", "morti. Ago")
        assert m.char_errors == 7
        assert m.char_total == 3
        assert m.cer == 7 / 3

    def test_word_error_rate(self):
        m = line_metrics("hand genommen", "hand genen")
        assert m.word_errors == 1
        assert m.word_total == 2
        assert m.wer == 1 / 2

    def test_empty_ground_truth_empty_prediction(self):
        m = line_metrics("", "")
        assert m.cer == 0.0 and m.wer == 0.0

    def test_empty_ground_truth_nonempty_prediction_is_undefined(self):
        m = line_metrics("", "abc")
        assert m.cer is None
        assert m.wer is None
        assert m.char_errors == 3


class TestEvaluate:
    def test_micro_average(self):
        records = [
            make_record("L0", "Ago", "morti. Ago", index=0),
            make_record("L1", "aaaaaaaaaa", "aaaaaaaaaa", index=1),
        ]
        corpus = Corpus(records)
        metrics = evaluate(corpus, "m1", "train")
        assert metrics.char_errors == 7
        assert metrics.char_total == 13
        assert metrics.cer == 7 / 13

    def test_all_correct(self):
        corpus = Corpus(make_page("p1", [("L1", "abc", "abc"), ("L2", "de f", "de f")]))
        metrics = evaluate(corpus, "m1", "train")
        assert metrics.cer == 0 and metrics.wer == 0

    def test_empty_subset_is_undefined(self):
        corpus = Corpus([make_record("L1", "abc", "abc", split="train")])
        metrics = evaluate(corpus, "m1", "test")
        assert metrics.lines == 0
        assert metrics.cer is None and metrics.wer is None

    def test_missing_prediction_lists_ids(self):
        corpus = Corpus([make_record("L1", "abc"), make_record("L2", "def", "def")])
        with pytest.raises(MissingPredictionError) as err:
            evaluate(corpus, "m1", "train")
        assert err.value.line_ids == ["L1"]

    def test_id_subset(self):
        corpus = Corpus(make_page("p1", [("L1", "abc", "abd"), ("L2", "xyz", "xyz")]))
        metrics = evaluate(corpus, "m1", ["L1"])
        assert metrics.char_errors == 1 and metrics.char_total == 3

    def test_unknown_id_in_subset(self):
        corpus = Corpus([make_record("L1", "abc", "abc")])
        with pytest.raises(UnknownLineError):
            evaluate(corpus, "m1", ["L1", "nope"])

    @settings(max_examples=30)
    @given(st.lists(st.tuples(short_text, short_text), min_size=1, max_size=8))
    def test_micro_average_equals_summed_line_counts(self, pairs):
        records = [
            make_record(f"L{i}", gt, pred, index=i) for i, (gt, pred) in enumerate(pairs)
        ]
        corpus = Corpus(records)
        metrics = evaluate(corpus, "m1", "train")
        per_line = [line_metrics(gt, pred) for gt, pred in pairs]
        assert metrics.char_errors == sum(m.char_errors for m in per_line)
        assert metrics.char_total == sum(m.char_total for m in per_line)
        assert metrics.word_errors == sum(m.word_errors for m in per_line)
        assert metrics.word_total == sum(m.word_total for m in per_line)
