"""Feature extraction: tf-idf, POS n-grams, politeness, lexicon, conversational."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from argmine.corpus import segment_thread
from argmine.errors import ConfigurationError, FitError
from argmine.features import (
    CONV_SLOTS,
    FEATURE_SET_ORDER,
    NGRAM_JOIN,
    ConversationalContext,
    PreparedQuote,
    assemble_features,
    features_from_dict,
    features_to_dict,
    fit_features,
    fit_pos_ngrams,
    fit_tfidf,
    lexicon_category_features,
    load_lexicon,
    normalize_feature_sets,
    politeness_score,
    pos_ngram_features,
    pos_tag,
    transform_tfidf,
)
from conftest import build_thread, disjoint_vocab_dataset


class TestTfidf:
    def test_hand_example(self):
        model = fit_tfidf([["a", "b"], ["c", "b"]], ngram_range=(1, 1))
        assert model.vocabulary == {"a": 0, "b": 1, "c": 2}
        assert model.document_count == 2
        np.testing.assert_allclose(
            model.idf, [1.4054651081081644, 1.0, 1.4054651081081644], rtol=0, atol=1e-15
        )
        vec = transform_tfidf(model, ["a", "b"])
        dense = vec.to_dense()
        np.testing.assert_allclose(
            dense, [0.81480247, 0.57973867, 0.0], rtol=0, atol=1e-8
        )
        assert abs(vec.norm() - 1.0) < 1e-12

    def test_repeated_term_counts(self):
        model = fit_tfidf([["a", "b"], ["c", "b"]], ngram_range=(1, 1))
        vec = transform_tfidf(model, ["a", "a", "b"]).to_dense()
        idf_a = math.log(3 / 2) + 1.0
        raw = np.array([2 * idf_a, 1.0, 0.0])
        np.testing.assert_allclose(vec, raw / np.linalg.norm(raw), atol=1e-12)

    def test_ngram_vocabulary_sorted(self):
        model = fit_tfidf([["x", "y"]], ngram_range=(1, 2))
        terms = sorted(model.vocabulary, key=model.vocabulary.__getitem__)
        assert terms == ["x", f"x{NGRAM_JOIN}y", "y"]
        assert terms == sorted(terms)

    def test_out_of_vocabulary_doc_is_zero(self):
        model = fit_tfidf([["a"]], ngram_range=(1, 1))
        vec = transform_tfidf(model, ["zzz"])
        assert vec.entries == ()
        assert vec.norm() == 0.0

    def test_bad_range(self):
        with pytest.raises(ConfigurationError):
            fit_tfidf([["a"]], ngram_range=(2, 1))
        with pytest.raises(ConfigurationError):
            fit_tfidf([["a"]], ngram_range=(0, 1))

    def test_term_in_every_doc_has_idf_one(self):
        model = fit_tfidf([["a", "b"], ["a"], ["a", "c"]], ngram_range=(1, 1))
        assert model.idf[model.vocabulary["a"]] == 1.0

    @given(st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=25, deadline=None)
    def test_nonzero_rows_have_unit_norm(self, seed):
        rng = np.random.default_rng(seed)
        vocab = [f"w{i}" for i in range(40)]
        docs = [list(rng.choice(vocab, size=rng.integers(1, 12))) for _ in range(50)]
        model = fit_tfidf(docs, ngram_range=(1, 2))
        for doc in docs:
            vec = transform_tfidf(model, doc)
            assert abs(vec.norm() - 1.0) < 1e-9

    def test_idf_formula_on_random_corpus(self):
        rng = np.random.default_rng(3)
        vocab = [f"w{i}" for i in range(15)]
        docs = [list(rng.choice(vocab, size=6)) for _ in range(30)]
        model = fit_tfidf(docs, ngram_range=(1, 1))
        n = len(docs)
        for term, col in model.vocabulary.items():
            df = sum(term in set(d) for d in docs)
            expected = math.log((1 + n) / (1 + df)) + 1.0
            assert abs(model.idf[col] - expected) < 1e-12


class TestPosTag:
    def test_lexicon_lookup(self):
        assert pos_tag(["the", "cat", "runs"]) == ["DET", "NOUN", "VERB"]

    def test_suffix_rules(self):
        assert pos_tag(["quickly"]) == ["ADV"]
        assert pos_tag(["debugging"]) == ["VERB"]
        assert pos_tag(["crashed"]) == ["VERB"]
        assert pos_tag(["cats"]) == ["NOUN"]

    def test_numbers_and_punctuation(self):
        assert pos_tag(["42", "3.14", "!", "..."]) == ["NUM", "NUM", "PUNCT", "PUNCT"]

    def test_unknown_is_x(self):
        assert pos_tag(["zzzqx"]) == ["X"]

    def test_empty(self):
        assert pos_tag([]) == []

    def test_case_insensitive(self):
        assert pos_tag(["The", "THE"]) == ["DET", "DET"]


class TestPosNgrams:
    def test_counts_normalized(self):
        model = fit_pos_ngrams([["DET", "NOUN"]], ngram_range=(1, 2))
        assert model.dimension == 3
        vec = pos_ngram_features(model, ["DET", "NOUN"]).to_dense()
        np.testing.assert_allclose(vec, np.full(3, 1 / math.sqrt(3)), atol=1e-12)

    def test_unseen_grams_dropped(self):
        model = fit_pos_ngrams([["DET"]], ngram_range=(1, 1))
        vec = pos_ngram_features(model, ["VERB", "VERB"])
        assert vec.entries == ()


class TestPoliteness:
    def test_neutral_is_half(self):
        assert politeness_score(["the", "tabs", "freeze"]) == 0.5

    def test_empty_is_half(self):
        assert politeness_score([]) == 0.5

    def test_gratitude_plus_hedge(self):
        assert politeness_score(["thanks", ",", "could", "you"]) == pytest.approx(
            0.8807970779778823, abs=1e-15
        )

    def test_initial_imperative(self):
        assert politeness_score(["Fix", "the", "bug"]) == pytest.approx(
            0.2689414213699951, abs=1e-15
        )

    def test_skip_words_before_imperative(self):
        assert politeness_score(["just", "fix", "it"]) == politeness_score(["fix", "it"])

    def test_non_initial_verb_is_not_imperative(self):
        # "we" shields the verb from the sentence-initial check
        assert politeness_score(["we", "fix", "it"]) == 0.5

    def test_please_weight(self):
        assert politeness_score(["please"]) == pytest.approx(1 / (1 + math.exp(-1.0)))

    def test_dismissive(self):
        assert politeness_score(["useless"]) == pytest.approx(1 / (1 + math.exp(1.5)))

    def test_markers_count_per_occurrence(self):
        one = politeness_score(["please"])
        two = politeness_score(["please", "please"])
        assert two == pytest.approx(1 / (1 + math.exp(-2.0)))
        assert two > one

    @given(st.lists(st.text(alphabet="abcdefghijklmnopqrstuvwxyz!?.", min_size=1, max_size=10), max_size=25))
    @settings(max_examples=300)
    def test_bounded_open_interval(self, tokens):
        score = politeness_score(tokens)
        assert 0.0 < score < 1.0


LEXICON_TEXT = "i\tself\nwe\tself,social\nagree*\tassent\n"


class TestLexicon:
    def test_category_frequencies(self):
        model = load_lexicon(LEXICON_TEXT)
        assert model.categories == ("assent", "self", "social")
        vec = lexicon_category_features(model, ["i", "we", "go"]).to_dense()
        np.testing.assert_allclose(vec, [0.0, 2 / 3, 1 / 3], atol=1e-12)

    def test_prefix_match(self):
        model = load_lexicon(LEXICON_TEXT)
        assert model.categories_of("agreed") == ("assent",)
        assert model.categories_of("agree") == ("assent",)
        assert model.categories_of("disagree") == ()

    def test_exact_beats_prefix(self):
        model = load_lexicon("agree*\tassent\nagreed\tpast\n")
        assert model.categories_of("agreed") == ("past",)

    def test_empty_tokens_zero_vector(self):
        model = load_lexicon(LEXICON_TEXT)
        vec = lexicon_category_features(model, [])
        assert vec.entries == ()
        assert vec.dimension == 3

    def test_malformed_line(self):
        with pytest.raises(ConfigurationError, match="line 2"):
            load_lexicon("i\tself\nbroken line\n")


class TestConversational:
    def make_context(self):
        thread = build_thread(
            [
                "Alpha beta gamma.",
                "Delta",
                "Epsilon zeta.",
                "Eta theta iota kappa.",
            ],
            authors=["alice", "bob", "alice", "carol"],
            associations=["OWNER", "MEMBER", "NONE", "NONE"],
            times=[
                "2020-01-01T00:00:00Z",
                "2020-01-01T00:01:00Z",
                "2020-01-01T00:03:00Z",
                "2020-01-01T00:03:00Z",
            ],
        )
        quotes = segment_thread(thread)
        assert len(quotes) == 4
        return thread, quotes, ConversationalContext(thread, quotes)

    def test_slot_names(self):
        assert len(CONV_SLOTS) == 13
        assert CONV_SLOTS[0] == "is_owner_or_collaborator"
        assert CONV_SLOTS[-1] == "has_code"

    def test_roles_and_authorship(self):
        _, quotes, ctx = self.make_context()
        v0 = ctx.vector(quotes[0])
        assert list(v0[:4]) == [1.0, 0.0, 0.0, 1.0]  # owner wrote the issue
        v1 = ctx.vector(quotes[1])
        assert list(v1[:4]) == [0.0, 1.0, 0.0, 0.0]
        v2 = ctx.vector(quotes[2])
        assert list(v2[:4]) == [0.0, 0.0, 1.0, 1.0]  # alice again, role NONE
        v3 = ctx.vector(quotes[3])
        assert list(v3[:4]) == [0.0, 0.0, 1.0, 0.0]

    def test_token_counts_and_ratios(self):
        _, quotes, ctx = self.make_context()
        # surface token counts include sentence punctuation: 4, 1, 3, 5
        v1 = ctx.vector(quotes[1])
        assert v1[4] == 1.0
        assert v1[5] == 1.0  # whole comment
        assert v1[6] == pytest.approx(1 / 3.25)

    def test_positions(self):
        _, quotes, ctx = self.make_context()
        v1 = ctx.vector(quotes[1])
        assert v1[7] == pytest.approx(1 / 3)
        assert v1[8] == 1.0  # sole quote of its comment

    def test_timing_slots(self):
        _, quotes, ctx = self.make_context()
        v1 = ctx.vector(quotes[1])
        assert v1[9] == 60.0
        assert v1[10] == 120.0
        assert v1[11] == pytest.approx(1 / 3)
        v0 = ctx.vector(quotes[0])
        assert v0[9] == 0.0 and v0[11] == 0.0
        v3 = ctx.vector(quotes[3])
        assert v3[9] == 0.0  # same timestamp as previous comment
        assert v3[10] == 0.0 and v3[11] == 1.0

    def test_has_code(self):
        thread = build_thread(["Look at `this` inline.", "No code here."])
        quotes = segment_thread(thread)
        ctx = ConversationalContext(thread, quotes)
        assert ctx.vector(quotes[0])[12] == 1.0
        assert ctx.vector(quotes[1])[12] == 0.0

    def test_multi_quote_comment(self):
        thread = build_thread(["One two. Three four five."])
        quotes = segment_thread(thread)
        assert len(quotes) == 2
        ctx = ConversationalContext(thread, quotes)
        va, vb = ctx.vector(quotes[0]), ctx.vector(quotes[1])
        assert va[4] == 3.0 and vb[4] == 4.0
        assert va[5] == pytest.approx(3 / 7)
        assert va[8] == pytest.approx(1 / 2)
        assert vb[8] == pytest.approx(2 / 2)

    def test_single_comment_boundaries(self):
        thread = build_thread(["Lone comment."])
        quotes = segment_thread(thread)
        v = ConversationalContext(thread, quotes).vector(quotes[0])
        assert v[7] == 0.0 and v[9] == 0.0 and v[10] == 0.0 and v[11] == 0.0


class TestNormalizeFeatureSets:
    def test_all_without_lexicon(self):
        assert normalize_feature_sets(["all"], lexicon_available=False) == (
            "tfidf",
            "politeness",
            "pos",
            "conv",
        )

    def test_all_with_lexicon(self):
        assert normalize_feature_sets(["all"], lexicon_available=True) == FEATURE_SET_ORDER

    def test_canonical_order_regardless_of_input(self):
        assert normalize_feature_sets(["conv", "tfidf"], lexicon_available=False) == (
            "tfidf",
            "conv",
        )

    def test_explicit_lexicon_without_file(self):
        with pytest.raises(ConfigurationError, match="lexicon"):
            normalize_feature_sets(["lexicon"], lexicon_available=False)

    def test_unknown_set(self):
        with pytest.raises(ConfigurationError, match="embeddings"):
            normalize_feature_sets(["tfidf", "embeddings"], lexicon_available=False)

    def test_empty(self):
        with pytest.raises(ConfigurationError):
            normalize_feature_sets([], lexicon_available=True)


class TestAssembly:
    def test_block_offsets_and_widths(self):
        prepared, _ = disjoint_vocab_dataset(n=20)
        fitted = fit_features(prepared, ["all"], tfidf_range=(1, 1), pos_range=(1, 1))
        assert list(fitted.offsets) == ["tfidf", "politeness", "pos", "conv"]
        start = 0
        for name, (off, width) in fitted.offsets.items():
            assert off == start
            start += width
        assert fitted.offsets["politeness"][1] == 1
        assert fitted.offsets["conv"][1] == 13
        assert fitted.dimension == start

    def test_subset_only_selected_columns(self):
        prepared, _ = disjoint_vocab_dataset(n=20)
        fitted = fit_features(prepared, ["politeness", "conv"])
        assert fitted.dimension == 14
        mat = assemble_features(prepared, ["conv", "politeness"], fitted)
        arr = mat.to_array()
        assert arr.shape == (20, 14)
        np.testing.assert_allclose(arr[:, 0], 0.5)  # politeness column
        np.testing.assert_allclose(arr[:, 1:], 0.0)  # conv slots all zero in fixture

    def test_mismatched_sets_rejected(self):
        prepared, _ = disjoint_vocab_dataset(n=10)
        fitted = fit_features(prepared, ["politeness"])
        with pytest.raises(ConfigurationError):
            assemble_features(prepared, ["conv"], fitted)

    def test_empty_fit_rejected(self):
        with pytest.raises(FitError):
            fit_features([], ["politeness"])

    def test_fingerprint_stable_and_data_sensitive(self):
        prepared, _ = disjoint_vocab_dataset(n=30)
        f1 = fit_features(prepared, ["tfidf"], tfidf_range=(1, 2))
        f2 = fit_features(prepared, ["tfidf"], tfidf_range=(1, 2))
        f3 = fit_features(prepared[:15], ["tfidf"], tfidf_range=(1, 2))
        assert f1.fingerprint() == f2.fingerprint()
        assert f1.fingerprint() != f3.fingerprint()

    def test_fingerprint_ignores_transform_input(self):
        prepared, _ = disjoint_vocab_dataset(n=30)
        fitted = fit_features(prepared[:20], ["tfidf", "politeness"])
        before = fitted.fingerprint()
        fitted.transform(prepared[20:])
        assert fitted.fingerprint() == before

    def test_json_round_trip(self):
        prepared, _ = disjoint_vocab_dataset(n=25)
        lexicon = load_lexicon(LEXICON_TEXT)
        fitted = fit_features(
            prepared, ["all"], tfidf_range=(1, 2), pos_range=(1, 2), lexicon=lexicon
        )
        restored = features_from_dict(features_to_dict(fitted))
        assert restored.sets == fitted.sets
        assert restored.fingerprint() == fitted.fingerprint()
        a = fitted.transform(prepared[:5]).to_array()
        b = restored.transform(prepared[:5]).to_array()
        np.testing.assert_array_equal(a, b)

    def test_transform_column_content(self):
        prepared, _ = disjoint_vocab_dataset(n=12)
        fitted = fit_features(prepared, ["tfidf", "politeness"], tfidf_range=(1, 1))
        arr = assemble_features(prepared, ["tfidf", "politeness"], fitted).to_array()
        start, width = fitted.offsets["tfidf"]
        norms = np.linalg.norm(arr[:, start : start + width], axis=1)
        np.testing.assert_allclose(norms, 1.0, atol=1e-9)
        pol_col = fitted.offsets["politeness"][0]
        np.testing.assert_allclose(arr[:, pol_col], 0.5)
