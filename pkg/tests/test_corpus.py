from __future__ import annotations

import itertools

import pytest

from clinperturb import corpus as cp


class TestTokenize:
    def test_simple_sentence(self):
        seq = cp.tokenize("The patient has pain.")
        assert seq.texts() == ["The", "patient", "has", "pain", "."]

    def test_roundtrip_identity(self):
        texts = [
            "The patient has pain.",
            "  leading and trailing  ",
            "dose: 500 mg (PO), q.d.",
            "x-ray of the patient's chest",
            "pain/swelling noted -- severe!",
            "",
            "   ",
            "word",
            "a\tb\nc",
        ]
        for t in texts:
            assert cp.detokenize(cp.tokenize(t)) == t

    def test_interior_hyphen_and_apostrophe_stay(self):
        seq = cp.tokenize("patient's x-ray")
        assert seq.texts() == ["patient's", "x-ray"]

    def test_slash_splits(self):
        seq = cp.tokenize("pain/swelling")
        assert seq.texts() == ["pain", "/", "swelling"]

    def test_punctuation_peeled(self):
        seq = cp.tokenize("(Senokot).")
        assert seq.texts() == ["(", "Senokot", ")", "."]

    def test_number_led_word(self):
        seq = cp.tokenize("in the 70s today")
        tok = seq.tokens[2]
        assert tok.kind == cp.KIND_WORD and tok.number_led
        assert not tok.is_word() or tok.number_led  # excluded from char edits

    def test_kinds(self):
        seq = cp.tokenize("BP 120 , stable")
        assert [t.kind for t in seq.tokens] == [
            cp.KIND_WORD, cp.KIND_NUMBER, cp.KIND_PUNCT, cp.KIND_WORD,
        ]

    def test_uids_stable_and_unique(self):
        seq = cp.tokenize("one two three")
        assert [t.uid for t in seq.tokens] == [0, 1, 2]

    def test_offsets(self):
        text = "He  has  pain."
        seq = cp.tokenize(text)
        for tok in seq.tokens:
            assert text[tok.start:tok.end] == tok.text


class TestTokenSeqEdits:
    def test_delete_merges_gap(self):
        seq = cp.tokenize("a b c")
        seq.delete(1)
        assert cp.detokenize(seq) == "a c"

    def test_delete_keeps_double_space(self):
        seq = cp.tokenize("a  b c")
        seq.delete(1)
        assert cp.detokenize(seq) == "a  c"

    def test_insert(self):
        seq = cp.tokenize("a c")
        tok = seq.tokens[0]
        seq.insert(1, cp.Token("b", 0, 1, cp.KIND_WORD, False, -1), gap=" ")
        assert cp.detokenize(seq) == "a b c"
        assert seq.tokens[0] is tok

    def test_replace_text(self):
        seq = cp.tokenize("a b c")
        seq.replace_text(1, "B")
        assert cp.detokenize(seq) == "a B c"

    def test_gap_invariant_enforced(self):
        with pytest.raises(cp.CorpusError):
            cp.TokenSeq([cp.Token("a", 0, 1, cp.KIND_WORD)], [])


class TestSeqFromTokens:
    def test_single_space_gaps(self):
        seq = cp.seq_from_tokens(["The", "patient", "."])
        # Pre-tokenized input joins with single spaces; the detokenized form
        # is only used for display, token identity is what matters.
        assert cp.detokenize(seq) == "The patient ."
        assert seq.texts() == ["The", "patient", "."]


class TestBio:
    def test_check_bio_accepts_valid(self):
        cp.check_bio(["O", "B-x", "I-x", "B-y", "O"])

    def test_check_bio_rejects_orphan_i(self):
        with pytest.raises(cp.BioError):
            cp.check_bio(["O", "I-x"])

    def test_check_bio_rejects_type_switch(self):
        with pytest.raises(cp.BioError):
            cp.check_bio(["B-x", "I-y"])

    def test_check_bio_rejects_malformed(self):
        with pytest.raises(cp.BioError):
            cp.check_bio(["B"])

    def test_delete_promotes_orphan(self):
        assert cp.bio_delete(["B-x", "I-x", "O"], 0) == ["B-x", "O"]

    def test_delete_middle_of_entity(self):
        assert cp.bio_delete(["B-x", "I-x", "I-x"], 1) == ["B-x", "I-x"]

    def test_repeat_b_becomes_i(self):
        assert cp.bio_repeat(["B-x", "O"], 0) == ["B-x", "I-x", "O"]

    def test_repeat_i_stays_i(self):
        assert cp.bio_repeat(["B-x", "I-x"], 1) == ["B-x", "I-x", "I-x"]

    def test_repeat_o_stays_o(self):
        assert cp.bio_repeat(["O"], 0) == ["O", "O"]

    def test_shuffle_swap_example(self):
        out = cp.bio_shuffle(["I-p", "B-p"], [0, 1], [1, 0])
        # The original example is not well-formed input on its own; the
        # repair yields a contiguous entity.
        assert out == ["B-p", "I-p"]

    def test_shuffle_repairs_all_permutations(self):
        labels = ["O", "B-p", "I-p", "B-t", "O"]
        positions = [1, 2, 3]
        for perm in itertools.permutations(range(3)):
            out = cp.bio_shuffle(labels, positions, list(perm))
            cp.check_bio(out)

    def test_shuffle_window_at_start(self):
        for perm in itertools.permutations(range(2)):
            out = cp.bio_shuffle(["I-x", "B-x", "I-x"], [0, 1], list(perm))
            cp.check_bio(out)

    def test_contract_uniform_type(self):
        assert cp.bio_contract(["O", "B-p", "I-p", "O"], 1, 2) == ["O", "B-p", "O"]

    def test_contract_mixed_becomes_o(self):
        out = cp.bio_contract(["B-p", "O", "I-p"], 0, 2)
        cp.check_bio(out)
        assert out[0] == "O"

    def test_expand_b(self):
        assert cp.bio_expand(["B-p", "O"], 0, 3) == ["B-p", "I-p", "I-p", "O"]

    def test_expand_i(self):
        assert cp.bio_expand(["B-p", "I-p"], 1, 2) == ["B-p", "I-p", "I-p"]

    def test_expand_o(self):
        assert cp.bio_expand(["O"], 0, 2) == ["O", "O"]


class TestSampleIO:
    def test_roundtrip_preserves_unknown_keys(self):
        rec = {"id": "x", "task": "ti", "premise": "a", "hypothesis": "b",
               "label": "neutral", "source": "note-7"}
        sample = cp.sample_from_record(rec)
        assert sample.extra == {"source": "note-7"}
        assert cp.sample_to_record(sample) == rec

    def test_label_property(self):
        s = cp.sample_from_record(
            {"id": "1", "task": "ss", "sentence1": "a", "sentence2": "b",
             "score": 0.0})
        assert s.label == 0.0

    def test_ner_length_mismatch(self):
        with pytest.raises(cp.CorpusError, match="mismatch"):
            cp.sample_from_record(
                {"id": "1", "task": "ner", "tokens": ["a"], "labels": []})

    def test_re_span_out_of_bounds(self):
        with pytest.raises(cp.CorpusError, match="bounds"):
            cp.sample_from_record(
                {"id": "1", "task": "re", "text": "ab",
                 "entities": [[0, 9, "problem"]], "label": "x"})

    def test_invalid_ti_label(self):
        with pytest.raises(cp.CorpusError, match="invalid TI label"):
            cp.sample_from_record(
                {"id": "1", "task": "ti", "premise": "a", "hypothesis": "b",
                 "label": "yes"})

    def test_score_range(self):
        with pytest.raises(cp.CorpusError, match="range"):
            cp.sample_from_record(
                {"id": "1", "task": "ss", "sentence1": "a", "sentence2": "b",
                 "score": 7.0})

    def test_read_reports_line_numbers(self, tmp_path):
        p = tmp_path / "bad.jsonl"
        p.write_text('{"id": "1", "task": "ti", "premise": "a", '
                     '"hypothesis": "b", "label": "neutral"}\n{"id": "2"}\n')
        with pytest.raises(cp.CorpusError, match="line 2"):
            cp.read_samples(p)

    def test_read_rejects_duplicate_ids(self, tmp_path):
        p = tmp_path / "dup.jsonl"
        line = ('{"id": "1", "task": "ti", "premise": "a", '
                '"hypothesis": "b", "label": "neutral"}\n')
        p.write_text(line + line)
        with pytest.raises(cp.CorpusError, match="duplicate"):
            cp.read_samples(p)

    def test_write_read_roundtrip(self, tmp_path, corpus):
        p = tmp_path / "out.jsonl"
        cp.write_samples(corpus, p)
        again = cp.read_samples(p)
        assert again == corpus
