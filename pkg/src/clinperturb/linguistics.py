"""Rule-based linguistic analysis: POS tagging over a closed lexicon plus
suffix rules, first-clause subject/verb identification, number and tense
inflection, and negation toggling.

Only the first clause of a sentence is analyzed; multi-clause inputs
inflect or toggle only the first finite verb.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .corpus import KIND_NUMBER, KIND_PUNCT, Token, TokenSeq
from .resources import VerbLexicon

# POS tagset
NOUN_SG = "NOUN-SG"
NOUN_PL = "NOUN-PL"
PRON_SG = "PRONOUN-SG"
PRON_PL = "PRONOUN-PL"
V_BASE = "VERB-BASE"
V_3SG = "VERB-3SG"
V_PAST = "VERB-PAST"
V_GER = "VERB-GERUND"
V_PART = "VERB-PART"
AUX = "AUX"
DET = "DET"
ADJ = "ADJ"
ADV = "ADV"
PREP = "PREP"
CONJ = "CONJ"
NUM = "NUM"
PUNCT = "PUNCT"
OTHER = "OTHER"

_DET = {
    "the", "a", "an", "this", "that", "these", "those", "his", "her", "its",
    "their", "our", "my", "your", "each", "every", "some", "any", "no",
    "all", "both", "another",
}
_PRON_SG = {"he", "she", "it", "i", "someone", "anyone", "everyone"}
_PRON_PL = {"they", "we", "you"}
_PREP = {
    "of", "in", "to", "for", "with", "on", "at", "by", "from", "as", "into",
    "onto", "after", "before", "during", "without", "over", "under",
    "between", "through", "per", "via", "within", "upon", "about", "across",
}
_CONJ = {"and", "or", "but", "nor", "so", "yet", "because", "although",
         "while", "whereas", "if", "when", "since", "unless"}
_MODAL = {"will", "would", "can", "could", "may", "might", "must", "shall",
          "should"}
_ADV = {
    "not", "subsequently", "once", "daily", "again", "still", "also", "very",
    "then", "now", "here", "there", "never", "often", "currently",
    "recently", "previously", "today", "yesterday", "twice", "well",
    "already", "only", "just",
}
_ADJ = {
    "severe", "acute", "chronic", "initial", "normal", "abnormal", "mild",
    "moderate", "left", "right", "upper", "lower", "bilateral", "stable",
    "unstable", "positive", "negative", "significant", "elevated", "old",
    "new", "intact", "clear", "able", "unable", "agreeable", "short",
    "preoperative", "postoperative", "corticate", "social", "several",
    "further", "prior",
}

_BE_FORMS = {"be", "is", "are", "was", "were", "am", "been", "being"}
_HAVE_FORMS = {"have", "has", "had"}
_DO_FORMS = {"do", "does", "did"}


class NoFiniteVerb(ValueError):
    """The sequence has no analyzable clause."""


@dataclass(frozen=True)
class ClauseAnalysis:
    subject_index: int
    subject_number: str        # "singular" | "plural"
    verb_index: int            # first finite verb (aux head when grouped)
    verb_form: Optional[str]   # "present-3sg" | "present-base" | "past" | None (modal)
    aux_index: Optional[int]   # set when the finite verb heads an aux group
    main_index: int            # main verb of the group (== verb_index if lone)
    negated: bool
    neg_index: Optional[int]   # index of "not"/"no"/contracted token


def _tag_one(tok: Token, lex: VerbLexicon) -> str:
    if tok.kind == KIND_PUNCT:
        return PUNCT
    if tok.kind == KIND_NUMBER or tok.number_led:
        return NUM
    word = tok.text.lower()
    if word in _DET:
        return DET
    if word in _PRON_SG:
        return PRON_SG
    if word in _PRON_PL:
        return PRON_PL
    if word in _MODAL:
        return AUX
    if word in _PREP:
        return PREP
    if word in _CONJ:
        return CONJ
    if word in _ADV:
        return ADV
    if word in _ADJ:
        return ADJ
    if word == "been":
        return V_PART
    if word == "being":
        return V_GER
    if word == "were":
        return V_PAST
    if word == "am":
        return V_BASE
    entry = lex.lookup(word)
    if entry is not None:
        if word == entry.third_sg.lower():
            return V_3SG
        if word == entry.past.lower():
            return V_PAST
        return V_BASE
    if word.endswith("ly") and len(word) > 4:
        return ADV
    if word.endswith("ing") and len(word) > 4:
        return V_GER
    if word.endswith("ed") and len(word) > 3:
        return V_PAST
    if word.endswith("s") and not word.endswith("ss") and len(word) > 3:
        return NOUN_PL
    return NOUN_SG


def pos_tag(seq: TokenSeq, lex: VerbLexicon) -> list[str]:
    return [_tag_one(t, lex) for t in seq.tokens]


def _is_negator(text: str) -> bool:
    return text.lower() in {"not", "n't"}


def _has_contracted_neg(text: str) -> bool:
    return text.lower().endswith("n't") and len(text) > 3


def find_subject_verb(seq: TokenSeq, tags: Optional[list[str]] = None,
                      lex: Optional[VerbLexicon] = None) -> ClauseAnalysis:
    if tags is None:
        if lex is None:
            raise ValueError("need tags or a lexicon")
        tags = pos_tag(seq, lex)
    texts = [t.text for t in seq.tokens]
    lowers = [t.lower() for t in texts]

    finite = None
    for i, tag in enumerate(tags):
        word = lowers[i]
        prev = None
        for j in range(i - 1, -1, -1):
            if tags[j] not in (ADV,):
                prev = lowers[j]
                break
        if tag == AUX:
            finite = i
            break
        if tag == V_3SG:
            finite = i
            break
        if tag == V_PAST and word != "been":
            # Participle after have/be is not finite on its own.
            if prev in _HAVE_FORMS or prev in _BE_FORMS:
                continue
            finite = i
            break
        if tag == V_BASE:
            if prev == "to" or prev in _MODAL or prev in _DO_FORMS:
                continue
            finite = i
            break
        if _has_contracted_neg(texts[i]):
            stem = lowers[i][:-3]
            if stem in _BE_FORMS | _HAVE_FORMS | _DO_FORMS | _MODAL or (
                lex is not None and lex.lookup(stem)
            ):
                finite = i
                break
    if finite is None:
        raise NoFiniteVerb("no finite verb found")

    subject = None
    for j in range(finite - 1, -1, -1):
        if tags[j] in (NOUN_SG, NOUN_PL, PRON_SG, PRON_PL):
            subject = j
            break
    if subject is None:
        raise NoFiniteVerb("no subject found before the finite verb")
    subject_number = "plural" if tags[subject] in (NOUN_PL, PRON_PL) else "singular"

    fin_word = lowers[finite]
    contracted = _has_contracted_neg(texts[finite])
    fin_stem = fin_word[:-3] if contracted else fin_word

    if tags[finite] == AUX or fin_stem in _MODAL:
        verb_form = None
    elif tags[finite] == V_3SG or fin_stem in {"is", "has", "does"}:
        verb_form = "present-3sg"
    elif tags[finite] == V_PAST or fin_stem in {"was", "were", "had", "did"}:
        verb_form = "past"
    else:
        verb_form = "present-base"

    # Verb group: does the finite verb head an auxiliary chain?
    aux_index: Optional[int] = None
    main_index = finite
    negated = contracted
    neg_index: Optional[int] = finite if contracted else None

    k = finite + 1
    seen_verbal = None
    while k < len(seq.tokens):
        tag, word = tags[k], lowers[k]
        if _is_negator(word):
            negated = True
            neg_index = k
            k += 1
            continue
        if tag == ADV:
            k += 1
            continue
        if tag in (V_PART, V_GER) or word == "been":
            seen_verbal = k
            k += 1
            continue
        if tag == V_PAST and (fin_stem in _HAVE_FORMS or fin_stem in _BE_FORMS
                              or seen_verbal is not None):
            seen_verbal = k
            k += 1
            continue
        if tag == V_BASE and (fin_stem in _DO_FORMS or fin_stem in _MODAL
                              or tags[finite] == AUX):
            seen_verbal = k
            k += 1
            continue
        break
    if seen_verbal is not None:
        aux_index = finite
        main_index = seen_verbal
    elif fin_stem in _BE_FORMS:
        # Copula: behaves like an auxiliary for negation placement.
        aux_index = finite

    if not negated and main_index + 1 < len(seq.tokens) and lowers[main_index + 1] == "no":
        negated = True
        neg_index = main_index + 1

    return ClauseAnalysis(
        subject_index=subject,
        subject_number=subject_number,
        verb_index=finite,
        verb_form=verb_form,
        aux_index=aux_index,
        main_index=main_index,
        negated=negated,
        neg_index=neg_index,
    )


# ---------------------------------------------------------------------------
# Inflection

class InflectionError(ValueError):
    pass


def _match_case(model: str, word: str) -> str:
    if model[:1].isupper():
        return word[:1].upper() + word[1:]
    return word


def _be_past(number: str) -> str:
    return "was" if number == "singular" else "were"


def _strip_3sg(word: str) -> str:
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    for suf in ("ses", "xes", "zes", "ches", "shes", "oes"):
        if word.endswith(suf):
            return word[:-2]
    if word.endswith("s"):
        return word[:-1]
    raise InflectionError(f"cannot derive plural form of {word!r}")


def _add_3sg(word: str) -> str:
    if word.endswith(("s", "x", "z", "ch", "sh", "o")):
        return word + "es"
    if word.endswith("y") and len(word) > 1 and word[-2] not in "aeiou":
        return word[:-1] + "ies"
    return word + "s"


def inflect_number(verb: str, target: str, lex: VerbLexicon) -> str:
    """Swap present-tense agreement (has <-> have); past-tense input errors."""
    low = verb.lower()
    if low == "were":
        return _match_case(verb, "was") if target == "singular" else verb
    entry = lex.lookup(low)
    if entry is not None:
        if low == entry.past.lower() and low not in (
            entry.base.lower(), entry.third_sg.lower(), entry.plural.lower()
        ):
            raise InflectionError(f"{verb!r} is past tense")
        form = entry.third_sg if target == "singular" else entry.plural
        return _match_case(verb, form)
    if low.endswith("s"):
        if target == "plural":
            return _match_case(verb, _strip_3sg(low))
        return verb
    if target == "singular":
        return _match_case(verb, _add_3sg(low))
    return verb


def inflect_tense(verb: str, target: str, subject_number: str,
                  lex: VerbLexicon) -> str:
    """Flip tense, preserving agreement for the present-tense direction."""
    low = verb.lower()
    if low == "were":
        return _match_case(verb, "are") if target == "present" else verb
    entry = lex.lookup(low)
    if entry is not None:
        if target == "past":
            if entry.base == "be":
                return _match_case(verb, _be_past(subject_number))
            return _match_case(verb, entry.past)
        form = entry.third_sg if subject_number == "singular" else entry.plural
        return _match_case(verb, form)
    if target == "past":
        if low.endswith("e"):
            return _match_case(verb, low + "d")
        if low.endswith("y") and low[-2] not in "aeiou":
            return _match_case(verb, low[:-1] + "ied")
        if low.endswith("s"):
            low = _strip_3sg(low)
        return _match_case(verb, low + "ed")
    # past -> present without lexicon support
    if low.endswith("ied"):
        base = low[:-3] + "y"
    elif low.endswith("ed"):
        base = low[:-2]
        if base.endswith(("at", "iv", "os", "ur", "in")) and lex.lookup(base + "e"):
            base = base + "e"
    else:
        raise InflectionError(f"cannot derive present tense of {verb!r}")
    form = _add_3sg(base) if subject_number == "singular" else base
    return _match_case(verb, form)


def base_form(verb: str, lex: VerbLexicon) -> str:
    low = verb.lower()
    entry = lex.lookup(low)
    if entry is not None:
        return entry.base
    if low.endswith("ies"):
        return low[:-3] + "y"
    if low.endswith("ied"):
        return low[:-3] + "y"
    if low.endswith("ed"):
        return low[:-2]
    if low.endswith("s") and not low.endswith("ss"):
        return low[:-1]
    return low


# ---------------------------------------------------------------------------
# Negation

def _finite_from_do(do_word: str, verb: str, number: str, lex: VerbLexicon) -> str:
    """Restore the finite form of `verb` from a stranded do-auxiliary."""
    stem = do_word.lower()
    base = base_form(verb, lex)
    entry = lex.lookup(base)
    if stem == "did":
        if entry is not None:
            return entry.past
        return inflect_tense(base, "past", number, lex)
    if stem == "does" or (stem == "do" and number == "singular"):
        return entry.third_sg if entry is not None else _add_3sg(base)
    return entry.plural if entry is not None else base


def _copy_seq(seq: TokenSeq) -> TokenSeq:
    return TokenSeq(list(seq.tokens), list(seq.gaps))


def toggle_negation(seq: TokenSeq, analysis: ClauseAnalysis,
                    lex: VerbLexicon) -> TokenSeq:
    out = _copy_seq(seq)
    tokens = out.tokens
    v = analysis.verb_index

    def _mk(text: str, model: Token) -> Token:
        return replace(model, text=text, uid=-1)

    if not analysis.negated:
        if analysis.aux_index is not None:
            out.insert(v + 1, _mk("not", tokens[v]), gap=" ")
            return out
        verb_tok = tokens[v]
        base = base_form(verb_tok.text, lex)
        if analysis.verb_form == "past":
            aux_word = "did"
        elif analysis.verb_form == "present-3sg":
            aux_word = "does"
        else:
            aux_word = "do"
        out.replace_text(v, _match_case(verb_tok.text, aux_word))
        out.insert(v + 1, _mk("not", verb_tok), gap=" ")
        out.insert(v + 2, _mk(base, verb_tok), gap=" ")
        return out

    # Remove negation.
    if analysis.neg_index == v and _has_contracted_neg(tokens[v].text):
        stem = tokens[v].text[:-3]
        if stem.lower() in _DO_FORMS and analysis.main_index != v:
            restored = _finite_from_do(
                stem, tokens[analysis.main_index].text, analysis.subject_number, lex
            )
            out.replace_text(
                analysis.main_index, _match_case(tokens[v].text, restored)
            )
            out.delete(v)
        elif stem.lower() == "can":
            out.replace_text(v, _match_case(tokens[v].text, "can"))
        else:
            out.replace_text(v, stem)
        return out

    neg = analysis.neg_index
    if neg is None:
        raise NoFiniteVerb("clause marked negated but no negator located")
    if tokens[neg].text.lower() == "no":
        out.delete(neg)
        return out
    if tokens[v].text.lower() in _DO_FORMS and analysis.main_index != v:
        main = analysis.main_index
        restored = _finite_from_do(
            tokens[v].text, tokens[main].text, analysis.subject_number, lex
        )
        out.replace_text(main, _match_case(tokens[v].text, restored))
        # Delete "not" first, then the auxiliary, so indices stay valid.
        out.delete(neg)
        out.delete(v)
        return out
    out.delete(neg)
    return out
