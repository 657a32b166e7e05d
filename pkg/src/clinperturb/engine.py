"""The 16 perturbation methods: deterministic apply-level operations (every
random choice is an explicit argument) plus a seeded orchestrator that draws
the choices, enforces eligibility and the per-sample budget, and records
provenance for every edit.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field as dc_field, replace
from typing import Optional

from . import corpus as cp
from . import linguistics as lg
from .corpus import Sample, Token, TokenSeq
from .resources import (
    AbbreviationTable,
    KeyboardMap,
    MisspellingTable,
    ResourceBundle,
    SynonymTable,
)
from .rng import SplitMix64, derive_seed

CHAR_METHODS = (
    "char-delete", "char-insert", "lcc", "cmw", "char-repeat",
    "char-replace", "char-swap",
)
WORD_METHODS = (
    "rwa", "ae", "word-delete", "negation", "word-order", "word-repeat",
    "rws", "spv", "verb-tense",
)
ALL_METHODS = CHAR_METHODS + WORD_METHODS
MEANING_RISK_METHODS = frozenset({"word-delete", "negation", "word-order", "rws"})
CLAUSE_METHODS = frozenset({"negation", "spv", "verb-tense"})

TASK_FIELDS = {
    "ner": ("tokens",),
    "re": ("text",),
    "ti": ("premise", "hypothesis"),
    "ss": ("sentence1", "sentence2"),
}


class PerturbationError(ValueError):
    pass


class NotApplicable(PerturbationError):
    """The sample offers no eligible target for the requested method."""


@dataclass(frozen=True)
class PerturbationSpec:
    method: str
    pps: int = 1
    global_seed: int = 0

    def __post_init__(self):
        if self.method not in ALL_METHODS:
            raise PerturbationError(f"unknown method {self.method!r}")
        if self.pps < 1:
            raise PerturbationError("pps must be >= 1")


@dataclass(frozen=True)
class Edit:
    level: str                 # "char" | "word"
    method: str
    field: str
    token_index: int
    before: str
    after: str
    char_index: Optional[int] = None

    def to_dict(self) -> dict:
        d = {
            "level": self.level,
            "method": self.method,
            "field": self.field,
            "token_index": self.token_index,
            "before": self.before,
            "after": self.after,
        }
        if self.char_index is not None:
            d["char_index"] = self.char_index
        return d


@dataclass
class PerturbedSample:
    original_id: str
    task: str
    method: str
    pps_requested: int
    pps_applied: int
    edits: list[Edit]
    noisy_payload: dict
    meaning_risk: bool
    review_status: str         # not-required | pending | accepted | relabeled | excluded
    revised_label: Optional[object] = None
    extra: dict = dc_field(default_factory=dict)


# ---------------------------------------------------------------------------
# Character-level apply operations

def char_delete(word: str, idx: int) -> str:
    if len(word) < 3:
        raise PerturbationError(f"word {word!r} too short for char deletion")
    if not (1 <= idx <= len(word) - 2):
        raise PerturbationError("char deletion never touches the first or last character")
    return word[:idx] + word[idx + 1:]


def char_insert(word: str, idx: int, ch: str) -> str:
    if len(word) < 2:
        raise PerturbationError(f"word {word!r} too short for char insertion")
    if not (1 <= idx <= len(word) - 1):
        raise PerturbationError("char insertion position must be interior")
    if len(ch) != 1 or not ch.isalpha():
        raise PerturbationError(f"inserted character must be a letter, got {ch!r}")
    return word[:idx] + ch + word[idx:]


def letter_case_change(word: str, mode: str) -> str:
    if not any(c.isalpha() for c in word):
        raise PerturbationError(f"no letters to toggle in {word!r}")
    if mode == "all":
        return "".join(c.lower() if c.isupper() else c.upper() for c in word)
    if mode == "first":
        first = word[0]
        toggled = first.lower() if first.isupper() else first.upper()
        return toggled + word[1:]
    raise PerturbationError(f"unknown case mode {mode!r}")


def misspell(word: str, variant: str, table: MisspellingTable) -> str:
    if variant not in table.lookup(word):
        raise PerturbationError(f"{variant!r} is not a listed misspelling of {word!r}")
    if word[:1].isupper():
        return variant[:1].upper() + variant[1:]
    return variant


def char_repeat(word: str, idx: int) -> str:
    if len(word) < 2:
        raise PerturbationError(f"word {word!r} too short for char repetition")
    if not (0 <= idx < len(word)):
        raise PerturbationError("char repetition index out of range")
    return word[:idx + 1] + word[idx] + word[idx + 1:]


def char_replace(word: str, idx: int, neighbor: str, kbd: KeyboardMap) -> str:
    if not (0 <= idx < len(word)) or not word[idx].isalpha():
        raise PerturbationError("char replacement target must be a letter")
    if neighbor not in kbd.neighbors(word[idx]):
        raise PerturbationError(
            f"{neighbor!r} is not keyboard-adjacent to {word[idx]!r}"
        )
    return word[:idx] + neighbor + word[idx + 1:]


def char_swap(word: str, idx: int) -> str:
    """Swap the interior characters at idx and idx+1 (endpoints never move)."""
    if len(word) < 4:
        raise PerturbationError(f"word {word!r} too short for interior swap")
    if not (1 <= idx <= len(word) - 3):
        raise PerturbationError("swap must stay within interior positions")
    if word[idx] == word[idx + 1]:
        raise PerturbationError("degenerate swap of equal characters")
    return word[:idx] + word[idx + 1] + word[idx] + word[idx + 2:]


def replace_with_synonym_word(word: str, synonym: str, table: SynonymTable) -> str:
    if synonym not in table.lookup(word):
        raise PerturbationError(f"{synonym!r} is not a listed synonym of {word!r}")
    if word[:1].isupper():
        return synonym[:1].upper() + synonym[1:]
    return synonym


# ---------------------------------------------------------------------------
# Field state carried through the orchestrator

@dataclass
class FieldState:
    name: str
    seq: TokenSeq
    labels: Optional[list[str]] = None        # NER only
    entities: Optional[list[tuple[list[int], str]]] = None  # RE: (token uids, type)
    clause_used: bool = False


def _field_state(sample: Sample, field: str) -> FieldState:
    if sample.task == "ner":
        seq = cp.seq_from_tokens(sample.payload["tokens"])
        return FieldState(field, seq, labels=list(sample.payload["labels"]))
    text = sample.payload[field]
    seq = cp.tokenize(text)
    state = FieldState(field, seq)
    if sample.task == "re":
        ents = []
        for start, end, etype in sample.payload["entities"]:
            uids = [t.uid for t in seq.tokens if t.start < end and t.end > start]
            ents.append((uids, etype))
        state.entities = ents
    return state


def _detok_with_offsets(seq: TokenSeq) -> tuple[str, dict[int, tuple[int, int]]]:
    parts: list[str] = []
    offsets: dict[int, tuple[int, int]] = {}
    pos = 0
    for gap, tok in zip(seq.gaps, seq.tokens):
        parts.append(gap)
        pos += len(gap)
        if tok.uid >= 0:
            offsets[tok.uid] = (pos, pos + len(tok.text))
        parts.append(tok.text)
        pos += len(tok.text)
    parts.append(seq.gaps[-1])
    return "".join(parts), offsets


def char_target_indices(seq: TokenSeq, method: str,
                        bundle: ResourceBundle) -> list[int]:
    """Token positions eligible for a character-level method."""
    out = []
    for i, tok in enumerate(seq.tokens):
        if not tok.is_word() or tok.number_led:
            continue
        text = tok.text
        if method == "char-delete" and len(text) < 3:
            continue
        if method in ("char-insert", "char-repeat") and len(text) < 2:
            continue
        if method == "cmw" and text not in bundle.misspellings:
            continue
        if method == "char-replace" and not any(
            c in string.ascii_letters for c in text
        ):
            continue
        if method == "char-swap":
            if len(text) < 4 or not any(
                text[j] != text[j + 1] for j in range(1, len(text) - 2)
            ):
                continue
        out.append(i)
    return out


def _apply_char_edit(state: FieldState, pos: int, method: str,
                     rng: SplitMix64, bundle: ResourceBundle) -> Edit:
    tok = state.seq.tokens[pos]
    text = tok.text
    char_index: Optional[int] = None
    if method == "char-delete":
        char_index = 1 + rng.randbelow(len(text) - 2)
        new = char_delete(text, char_index)
    elif method == "char-insert":
        char_index = 1 + rng.randbelow(len(text) - 1)
        ch = string.ascii_lowercase[rng.randbelow(26)]
        if text[char_index - 1].isupper() and text[char_index].isupper():
            ch = ch.upper()
        new = char_insert(text, char_index, ch)
    elif method == "lcc":
        mode = "all" if rng.coin() else "first"
        new = letter_case_change(text, mode)
    elif method == "cmw":
        variant = rng.choice(bundle.misspellings.lookup(text))
        new = misspell(text, variant, bundle.misspellings)
    elif method == "char-repeat":
        char_index = rng.randbelow(len(text))
        new = char_repeat(text, char_index)
    elif method == "char-replace":
        positions = [i for i, c in enumerate(text) if c in string.ascii_letters]
        char_index = rng.choice(positions)
        neighbor = rng.choice(bundle.keyboard.neighbors(text[char_index]))
        new = char_replace(text, char_index, neighbor, bundle.keyboard)
    elif method == "char-swap":
        candidates = [
            j for j in range(1, len(text) - 2) if text[j] != text[j + 1]
        ]
        char_index = rng.choice(candidates)
        new = char_swap(text, char_index)
    else:
        raise PerturbationError(f"not a char method: {method}")
    state.seq.replace_text(pos, new)
    return Edit("char", method, state.name, pos, text, new, char_index)


# ---------------------------------------------------------------------------
# Word-level candidate enumeration and application

def _phrase_matches(seq: TokenSeq, table: AbbreviationTable) -> list[tuple[int, int]]:
    """Longest abbreviation-table phrase match at each start position."""
    max_len = table.max_phrase_len()
    texts = [t.text.lower() for t in seq.tokens]
    words = [t.is_word() for t in seq.tokens]
    matches = []
    for start in range(len(texts)):
        if not words[start]:
            continue
        for length in range(min(max_len, len(texts) - start), 0, -1):
            window = tuple(texts[start:start + length])
            if table.by_phrase.get(window):
                matches.append((start, length))
                break
    return matches


def _word_candidates(state: FieldState, method: str, bundle: ResourceBundle,
                     used: set[int]) -> list:
    seq = state.seq
    words = seq.word_indices()
    free = [i for i in words if seq.tokens[i].uid not in used or seq.tokens[i].uid < 0]
    free = [i for i in free if seq.tokens[i].uid >= 0]

    if method == "rwa":
        out = []
        for start, length in _phrase_matches(seq, bundle.abbreviations):
            uids = [seq.tokens[start + k].uid for k in range(length)]
            if any(u in used for u in uids):
                continue
            out.append((start, length))
        return out
    if method == "ae":
        return [
            i for i in free
            if bundle.abbreviations.expansions_for(seq.tokens[i].text)
        ]
    if method == "word-delete":
        if len(words) < 2:
            return []
        return free
    if method == "word-repeat":
        return free
    if method == "rws":
        return [i for i in free if seq.tokens[i].text.lower() in bundle.synonyms.synonyms]
    if method == "word-order":
        if state.clause_used:  # unused for this method; kept for symmetry
            return []
        n = len(words)
        if n < 3:
            return []
        out = []
        for m in range(2, n):
            for start in range(0, n - m + 1):
                uids = [seq.tokens[words[start + k]].uid for k in range(m)]
                if any(u in used for u in uids):
                    continue
                out.append((m, start))
        return out
    if method in CLAUSE_METHODS:
        if state.clause_used:
            return []
        try:
            analysis = lg.find_subject_verb(seq, lex=bundle.verbs)
        except lg.NoFiniteVerb:
            return []
        if method == "negation":
            return [analysis]
        verb = seq.tokens[analysis.verb_index].text
        if method == "spv":
            if analysis.verb_form not in ("present-3sg", "present-base"):
                return []
            target = ("plural" if analysis.subject_number == "singular"
                      else "singular")
            try:
                new = lg.inflect_number(verb, target, bundle.verbs)
            except lg.InflectionError:
                return []
            return [analysis] if new != verb else []
        if method == "verb-tense":
            if analysis.verb_form is None:
                return []
            target = "present" if analysis.verb_form == "past" else "past"
            try:
                new = lg.inflect_tense(verb, target, analysis.subject_number,
                                       bundle.verbs)
            except lg.InflectionError:
                return []
            return [analysis] if new != verb else []
    raise PerturbationError(f"not a word method: {method}")


def _labels_by_uid(state: FieldState) -> dict[int, str]:
    assert state.labels is not None
    return {
        tok.uid: lab for tok, lab in zip(state.seq.tokens, state.labels)
        if tok.uid >= 0
    }


def _apply_word_edit(state: FieldState, method: str, cand, rng: SplitMix64,
                     bundle: ResourceBundle, used: set[int]) -> Edit:
    seq = state.seq

    if method == "rwa":
        start, length = cand
        phrase_tokens = [seq.tokens[start + k] for k in range(length)]
        phrase_text = " ".join(t.text for t in phrase_tokens)
        key = tuple(t.text.lower() for t in phrase_tokens)
        abbrev = rng.choice(bundle.abbreviations.by_phrase[key])
        for t in phrase_tokens:
            used.add(t.uid)
        if state.labels is not None:
            state.labels = cp.bio_contract(state.labels, start, length)
        seq.replace_text(start, abbrev)
        for _ in range(length - 1):
            seq.delete(start + 1)
        return Edit("word", method, state.name, start, phrase_text, abbrev)

    if method == "ae":
        idx = cand
        tok = seq.tokens[idx]
        expansion = rng.choice(bundle.abbreviations.expansions_for(tok.text))
        used.add(tok.uid)
        if state.labels is not None:
            state.labels = cp.bio_expand(state.labels, idx, len(expansion))
        seq.replace_text(idx, expansion[0])
        for k, word in enumerate(expansion[1:], start=1):
            seq.insert(idx + k, replace(tok, text=word, uid=-1), gap=" ")
        return Edit("word", method, state.name, idx, tok.text, " ".join(expansion))

    if method == "word-delete":
        idx = cand
        tok = seq.tokens[idx]
        used.add(tok.uid)
        if state.labels is not None:
            state.labels = cp.bio_delete(state.labels, idx)
        seq.delete(idx)
        return Edit("word", method, state.name, idx, tok.text, "")

    if method == "word-repeat":
        idx = cand
        tok = seq.tokens[idx]
        used.add(tok.uid)
        if state.labels is not None:
            state.labels = cp.bio_repeat(state.labels, idx)
        seq.insert(idx + 1, replace(tok, uid=-1), gap=" ")
        return Edit("word", method, state.name, idx, tok.text, tok.text + " " + tok.text)

    if method == "rws":
        idx = cand
        tok = seq.tokens[idx]
        synonym = rng.choice(bundle.synonyms.lookup(tok.text))
        new = replace_with_synonym_word(tok.text, synonym, bundle.synonyms)
        used.add(tok.uid)
        seq.replace_text(idx, new)
        return Edit("word", method, state.name, idx, tok.text, new)

    if method == "word-order":
        m, start = cand
        words = seq.word_indices()
        positions = [words[start + k] for k in range(m)]
        perm = rng.nonidentity_permutation(m)
        before = " ".join(seq.tokens[p].text for p in positions)
        originals = [seq.tokens[p] for p in positions]
        for slot, src in zip(positions, perm):
            seq.tokens[slot] = replace(originals[src],
                                       text=originals[src].text,
                                       uid=originals[src].uid)
        if state.labels is not None:
            state.labels = cp.bio_shuffle(state.labels, positions, perm)
        for t in originals:
            used.add(t.uid)
        after = " ".join(seq.tokens[p].text for p in positions)
        return Edit("word", method, state.name, positions[0], before, after)

    if method in CLAUSE_METHODS:
        analysis: lg.ClauseAnalysis = cand
        state.clause_used = True
        if method == "negation":
            before_uids = {t.uid for t in seq.tokens}
            old_labels = _labels_by_uid(state) if state.labels is not None else None
            before_text = cp.detokenize(seq)
            new_seq = lg.toggle_negation(seq, analysis, bundle.verbs)
            state.seq = new_seq
            if old_labels is not None:
                new_labels = [
                    old_labels.get(t.uid, "O") if t.uid >= 0 else "O"
                    for t in new_seq.tokens
                ]
                state.labels = cp._promote_orphans(new_labels)
            after_text = cp.detokenize(new_seq)
            for t in new_seq.tokens:
                if t.uid >= 0:
                    used.add(t.uid)
            del before_uids
            return Edit("word", method, state.name, analysis.verb_index,
                        before_text, after_text)
        verb_tok = seq.tokens[analysis.verb_index]
        if method == "spv":
            target = ("plural" if analysis.subject_number == "singular"
                      else "singular")
            new = lg.inflect_number(verb_tok.text, target, bundle.verbs)
        else:
            target = "present" if analysis.verb_form == "past" else "past"
            new = lg.inflect_tense(verb_tok.text, target,
                                   analysis.subject_number, bundle.verbs)
        used.add(verb_tok.uid)
        seq.replace_text(analysis.verb_index, new)
        return Edit("word", method, state.name, analysis.verb_index,
                    verb_tok.text, new)

    raise PerturbationError(f"not a word method: {method}")


# ---------------------------------------------------------------------------
# Orchestrator

def perturb_sample(sample: Sample, spec: PerturbationSpec,
                   bundle: ResourceBundle) -> PerturbedSample:
    rng = SplitMix64(derive_seed(spec.global_seed, sample.id, spec.method))
    fields = TASK_FIELDS[sample.task]
    states = {f: _field_state(sample, f) for f in fields}
    used: dict[str, set[int]] = {f: set() for f in fields}
    is_char = spec.method in CHAR_METHODS
    edits: list[Edit] = []

    for _ in range(spec.pps):
        candidates: dict[str, list] = {}
        for f in fields:
            if is_char:
                pool = char_target_indices(states[f].seq, spec.method, bundle)
                pool = [
                    i for i in pool
                    if states[f].seq.tokens[i].uid not in used[f]
                ]
                candidates[f] = pool
            else:
                candidates[f] = _word_candidates(states[f], spec.method,
                                                 bundle, used[f])
        avail = [f for f in fields if candidates[f]]
        if not avail:
            break
        if len(fields) > 1:
            field = avail[rng.randbelow(len(avail))]
        else:
            field = avail[0]
        cand = candidates[field][rng.randbelow(len(candidates[field]))]
        state = states[field]
        if is_char:
            used[field].add(state.seq.tokens[cand].uid)
            edits.append(_apply_char_edit(state, cand, spec.method, rng, bundle))
        else:
            edits.append(_apply_word_edit(state, spec.method, cand, rng,
                                          bundle, used[field]))

    if not edits:
        raise NotApplicable(
            f"sample {sample.id!r} has no eligible target for {spec.method}"
        )

    noisy_payload = _build_payload(sample, states)
    meaning_risk = spec.method in MEANING_RISK_METHODS
    return PerturbedSample(
        original_id=sample.id,
        task=sample.task,
        method=spec.method,
        pps_requested=spec.pps,
        pps_applied=len(edits),
        edits=edits,
        noisy_payload=noisy_payload,
        meaning_risk=meaning_risk,
        review_status="pending" if meaning_risk else "not-required",
        extra=dict(sample.extra),
    )


def _build_payload(sample: Sample, states: dict[str, FieldState]) -> dict:
    if sample.task == "ner":
        state = states["tokens"]
        labels = state.labels or []
        cp.check_bio(labels)
        return {"tokens": state.seq.texts(), "labels": list(labels)}
    payload = dict(sample.payload)
    if sample.task == "re":
        state = states["text"]
        text, offsets = _detok_with_offsets(state.seq)
        entities = []
        for uids, etype in state.entities or []:
            spans = [offsets[u] for u in uids if u in offsets]
            if not spans:
                continue
            entities.append([min(s for s, _ in spans), max(e for _, e in spans), etype])
        payload["text"] = text
        payload["entities"] = entities
        return payload
    for f in TASK_FIELDS[sample.task]:
        if f in states:
            payload[f] = cp.detokenize(states[f].seq)
    return payload


# ---------------------------------------------------------------------------
# Serialization and corpus-level perturbation

def perturbed_to_record(p: PerturbedSample) -> dict:
    record = {"id": p.original_id, "task": p.task}
    record.update(p.noisy_payload)
    record.update(p.extra)
    record["perturbation"] = {
        "original_id": p.original_id,
        "method": p.method,
        "pps_requested": p.pps_requested,
        "pps_applied": p.pps_applied,
        "meaning_risk": p.meaning_risk,
        "edits": [e.to_dict() for e in p.edits],
    }
    record["review"] = {"status": p.review_status, "revised_label": p.revised_label}
    return record


def perturbed_from_record(record: dict) -> PerturbedSample:
    meta = record["perturbation"]
    review = record.get("review", {})
    payload_keys = cp._PAYLOAD_KEYS[record["task"].lower()]
    payload = {k: record[k] for k in payload_keys}
    known = {"id", "task", "perturbation", "review", *payload_keys}
    return PerturbedSample(
        original_id=meta.get("original_id", record["id"]),
        task=record["task"].lower(),
        method=meta["method"],
        pps_requested=meta["pps_requested"],
        pps_applied=meta["pps_applied"],
        edits=[
            Edit(
                level=e["level"], method=e["method"], field=e["field"],
                token_index=e["token_index"], before=e["before"],
                after=e["after"], char_index=e.get("char_index"),
            )
            for e in meta["edits"]
        ],
        noisy_payload=payload,
        meaning_risk=meta["meaning_risk"],
        review_status=review.get("status", "not-required"),
        revised_label=review.get("revised_label"),
        extra={k: v for k, v in record.items() if k not in known},
    )


def perturb_corpus(samples, spec: PerturbationSpec, bundle: ResourceBundle,
                   jobs: int = 1):
    """Perturb a corpus; returns (perturbed list, not-applicable ids).

    Results are identical for any job count because every sample draws from
    its own derived seed.
    """
    def one(sample):
        try:
            return perturb_sample(sample, spec, bundle)
        except NotApplicable:
            return sample.id

    if jobs <= 1:
        results = [one(s) for s in samples]
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, samples))
    perturbed = [r for r in results if isinstance(r, PerturbedSample)]
    skipped = [r for r in results if isinstance(r, str)]
    return perturbed, skipped
