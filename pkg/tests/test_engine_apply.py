"""Golden tests for the individual perturbation operations, pinned to the
documented example outputs, plus unit tests for the op-level rules."""

from __future__ import annotations

import pytest

from clinperturb import engine
from clinperturb.corpus import detokenize, tokenize
from clinperturb.corpus import Sample
from clinperturb.rng import SplitMix64


class FakeRng:
    """Stand-in returning scripted draws; used to force specific choices."""

    def __init__(self, perm=None, choices=None):
        self._perm = perm
        self._choices = list(choices or [])

    def nonidentity_permutation(self, n):
        assert len(self._perm) == n
        return list(self._perm)

    def choice(self, items):
        if self._choices:
            want = self._choices.pop(0)
            return next(x for x in items if x == want)
        return items[0]

    def randbelow(self, n):
        return 0

    def coin(self):
        return True


def re_sample(text: str) -> Sample:
    return Sample(id="g", task="re",
                  payload={"text": text, "entities": [], "label": "none"})


def run_method(text: str, method: str, seed: int = 0) -> str:
    sample = re_sample(text)
    spec = engine.PerturbationSpec(method=method, pps=1, global_seed=seed)
    p = engine.perturb_sample(sample, spec, engine_bundle)
    return p.noisy_payload["text"]


engine_bundle = None


@pytest.fixture(autouse=True)
def _bind_bundle(bundle):
    global engine_bundle
    engine_bundle = bundle


def word_edit(text: str, method: str, cand, rng=None, bundle=None) -> str:
    state = engine._field_state(re_sample(text), "text")
    engine._apply_word_edit(state, method, cand, rng or SplitMix64(0),
                            bundle or engine_bundle, set())
    return detokenize(state.seq)


class TestCharGoldens:
    def test_delete(self):
        assert engine.char_delete("speaking", 5) == "speakng"

    def test_insert(self):
        assert engine.char_insert("patient", 3, "a") == "pataient"

    def test_lcc_all(self):
        assert engine.letter_case_change("nasal", "all") == "NASAL"

    def test_cmw(self, bundle):
        assert engine.misspell("pacemaker", "pacemkaer", bundle.misspellings) \
            == "pacemkaer"

    def test_repeat(self):
        # Rule-derived: the printed example contains PDF spacing artifacts.
        assert engine.char_repeat("pain", 1) == "paain"
        assert engine.char_repeat("abdominal", 5) == "abdomiinal"

    def test_replace(self, bundle):
        # Rule-derived, same reason as repetition.
        assert engine.char_replace("metastasis", 8, "o", bundle.keyboard) \
            == "metastasos"

    def test_swap(self):
        assert engine.char_swap("found", 1) == "fuond"


class TestWordGoldens:
    def test_rwa(self):
        out = run_method(
            "He denies any shortness of breath or difficulty breathing.",
            "rwa")
        assert out == "He denies any SOB or difficulty breathing."

    def test_ae(self):
        out = run_method("The patient has symptoms of a GI condition.", "ae")
        assert out == "The patient has symptoms of a gastrointestinal condition."

    def test_word_delete(self):
        text = ("That day, he was found to be acutely short of breath with a "
                "respiratory rate of 40.")
        seq = tokenize(text)
        idx = seq.texts().index("acutely")
        out = word_edit(text, "word-delete", idx)
        assert out == ("That day, he was found to be short of breath with a "
                       "respiratory rate of 40.")

    def test_negation(self):
        out = run_method(
            "She subsequently developed hypotension with SBP in the 70s.",
            "negation")
        assert out == ("She subsequently did not develop hypotension with "
                       "SBP in the 70s.")

    def test_word_order(self):
        text = ("This therapist fit the patient with the orthosis listed in "
                "the Treatment Plan.")
        seq = tokenize(text)
        words = seq.word_indices()
        start = words.index(seq.texts().index("listed"))
        out = word_edit(text, "word-order", (5, start),
                        rng=FakeRng(perm=[1, 2, 4, 3, 0]))
        assert "in the Plan Treatment listed" in out

    def test_word_repeat(self):
        text = "Subsequently EEG was noted to have no seizure activity."
        seq = tokenize(text)
        idx = seq.texts().index("seizure")
        out = word_edit(text, "word-repeat", idx)
        assert out == ("Subsequently EEG was noted to have no seizure "
                       "seizure activity.")

    def test_rws(self, bundle):
        assert engine.replace_with_synonym_word(
            "procedure", "therapy", bundle.synonyms) == "therapy"
        text = "Patient had some discomfort but was able to tolerate procedure."
        seq = tokenize(text)
        idx = seq.texts().index("procedure")
        out = word_edit(text, "rws", idx)
        assert out == ("Patient had some discomfort but was able to tolerate "
                       "therapy.")

    def test_spv(self):
        out = run_method("The patient has been given a stool softener "
                         "(Senokot).", "spv")
        assert out == "The patient have been given a stool softener (Senokot)."

    def test_verb_tense(self):
        out = run_method("Initial evaluation revealed corticate posturing was "
                         "noted by the trauma team.", "verb-tense")
        assert out == ("Initial evaluation reveals corticate posturing was "
                       "noted by the trauma team.")


class TestCharOpRules:
    def test_delete_bounds(self):
        with pytest.raises(engine.PerturbationError):
            engine.char_delete("abc", 0)
        with pytest.raises(engine.PerturbationError):
            engine.char_delete("abc", 2)

    def test_insert_bounds(self):
        with pytest.raises(engine.PerturbationError):
            engine.char_insert("ab", 0, "x")
        assert engine.char_insert("ab", 1, "x") == "axb"

    def test_lcc_first(self):
        assert engine.letter_case_change("Nasal", "first") == "nasal"
        assert engine.letter_case_change("nasal", "first") == "Nasal"

    def test_lcc_involution(self):
        for word in ("nasal", "NASAL", "Nasal", "x-Ray"):
            for mode in ("all", "first"):
                once = engine.letter_case_change(word, mode)
                assert engine.letter_case_change(once, mode) == word

    def test_misspell_unknown_word(self, bundle):
        with pytest.raises(engine.PerturbationError):
            engine.misspell("zzz", "zz", bundle.misspellings)

    def test_repeat_any_position(self):
        assert engine.char_repeat("ab", 0) == "aab"
        assert engine.char_repeat("ab", 1) == "abb"

    def test_replace_requires_adjacent_key(self, bundle):
        with pytest.raises(engine.PerturbationError):
            engine.char_replace("pain", 0, "z", bundle.keyboard)

    def test_swap_interior_only(self):
        with pytest.raises(engine.PerturbationError):
            engine.char_swap("found", 0)
        with pytest.raises(engine.PerturbationError):
            engine.char_swap("found", 3)

    def test_swap_equal_chars_rejected(self):
        with pytest.raises(engine.PerturbationError):
            engine.char_swap("ball", 2)


class TestCharTargets:
    def test_number_led_excluded(self, bundle):
        seq = tokenize("in the 70s speaking")
        idx = engine.char_target_indices(seq, "char-delete", bundle)
        assert [seq.tokens[i].text for i in idx] == ["the", "speaking"]

    def test_short_words_excluded_for_delete(self, bundle):
        seq = tokenize("he is speaking")
        idx = engine.char_target_indices(seq, "char-delete", bundle)
        assert [seq.tokens[i].text for i in idx] == ["speaking"]

    def test_cmw_requires_table_entry(self, bundle):
        seq = tokenize("the pacemaker beeped")
        idx = engine.char_target_indices(seq, "cmw", bundle)
        assert [seq.tokens[i].text for i in idx] == ["pacemaker"]

    def test_swap_requires_unequal_interior_pair(self, bundle):
        seq = tokenize("moo ball food")
        idx = engine.char_target_indices(seq, "char-swap", bundle)
        assert [seq.tokens[i].text for i in idx] == ["ball"]
