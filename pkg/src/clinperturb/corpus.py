"""Data model for the four task types, offset-preserving tokenization, and
dataset I/O in the canonical line-delimited JSON format.

Tokenization keeps inter-token whitespace verbatim so that edits stay local
and detokenize(tokenize(t)) == t holds for every input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

TASKS = ("ner", "re", "ti", "ss")
TI_LABELS = ("entailment", "contradiction", "neutral")

KIND_WORD = "word"
KIND_NUMBER = "number"
KIND_PUNCT = "punctuation"

# Characters that stay inside a word when flanked by alphanumerics.
_INTERIOR_OK = {"-", "'", "’"}


class CorpusError(ValueError):
    pass


class BioError(CorpusError):
    pass


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int
    kind: str
    number_led: bool = False
    # Stable identity across edits; assigned at tokenization time.
    uid: int = -1

    def is_word(self) -> bool:
        return self.kind == KIND_WORD and any(c.isalpha() for c in self.text)


@dataclass
class TokenSeq:
    """Tokens plus the whitespace gaps around them.

    gaps has length len(tokens) + 1: gaps[i] precedes tokens[i]; the final
    entry is trailing whitespace.
    """

    tokens: list[Token]
    gaps: list[str]

    def __post_init__(self):
        if len(self.gaps) != len(self.tokens) + 1:
            raise CorpusError("gaps must have len(tokens) + 1 entries")

    def __len__(self) -> int:
        return len(self.tokens)

    def texts(self) -> list[str]:
        return [t.text for t in self.tokens]

    def word_indices(self) -> list[int]:
        return [i for i, t in enumerate(self.tokens) if t.is_word()]

    def replace_text(self, idx: int, new_text: str) -> None:
        self.tokens[idx] = replace(self.tokens[idx], text=new_text)

    def delete(self, idx: int) -> Token:
        removed = self.tokens.pop(idx)
        before, after = self.gaps[idx], self.gaps[idx + 1]
        del self.gaps[idx]
        self.gaps[idx] = before if after == "" else after if before == "" else before
        return removed

    def insert(self, idx: int, tok: Token, gap: str = " ") -> None:
        self.tokens.insert(idx, tok)
        self.gaps.insert(idx, gap)


def _classify(chunk: str) -> tuple[str, bool]:
    has_alpha = any(c.isalpha() for c in chunk)
    if has_alpha:
        return KIND_WORD, chunk[0].isdigit()
    if any(c.isdigit() for c in chunk):
        return KIND_NUMBER, False
    return KIND_PUNCT, False


def _split_chunk(chunk: str) -> list[str]:
    """Peel leading/trailing punctuation off a whitespace-free chunk."""
    leading: list[str] = []
    trailing: list[str] = []
    i, j = 0, len(chunk)

    def _keep(pos_char: str, left: str, right: str) -> bool:
        return pos_char in _INTERIOR_OK and left.isalnum() and right.isalnum()

    while i < j and not chunk[i].isalnum():
        leading.append(chunk[i])
        i += 1
    while j > i and not chunk[j - 1].isalnum():
        trailing.append(chunk[j - 1])
        j -= 1
    core = chunk[i:j]
    # Split the core at interior punctuation that is not hyphen/apostrophe
    # between alphanumerics (e.g. "pain/swelling" -> three tokens).
    parts: list[str] = []
    buf_start = 0
    k = 0
    while k < len(core):
        c = core[k]
        if not c.isalnum():
            left = core[k - 1] if k > 0 else ""
            right = core[k + 1] if k + 1 < len(core) else ""
            if not _keep(c, left, right):
                if k > buf_start:
                    parts.append(core[buf_start:k])
                parts.append(c)
                buf_start = k + 1
        k += 1
    if len(core) > buf_start:
        parts.append(core[buf_start:])
    return leading + parts + list(reversed(trailing))


def tokenize(text: str) -> TokenSeq:
    tokens: list[Token] = []
    gaps: list[str] = []
    pos = 0
    pending_gap_start = 0
    uid = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        chunk_start = pos
        while pos < n and not text[pos].isspace():
            pos += 1
        chunk = text[chunk_start:pos]
        offset = chunk_start
        for piece in _split_chunk(chunk):
            start = text.index(piece, offset)
            gaps.append(text[pending_gap_start:start])
            kind, number_led = _classify(piece)
            tokens.append(
                Token(piece, start, start + len(piece), kind, number_led, uid)
            )
            uid += 1
            offset = start + len(piece)
            pending_gap_start = offset
    gaps.append(text[pending_gap_start:])
    return TokenSeq(tokens, gaps)


def detokenize(seq: TokenSeq) -> str:
    out: list[str] = []
    for gap, tok in zip(seq.gaps, seq.tokens):
        out.append(gap)
        out.append(tok.text)
    out.append(seq.gaps[-1])
    return "".join(out)


def seq_from_tokens(token_texts: list[str]) -> TokenSeq:
    """Build a sequence from pre-tokenized input (NER) with single-space gaps."""
    tokens: list[Token] = []
    gaps: list[str] = []
    pos = 0
    for uid, t in enumerate(token_texts):
        gaps.append("" if uid == 0 else " ")
        pos += 0 if uid == 0 else 1
        kind, number_led = _classify(t) if t else (KIND_PUNCT, False)
        tokens.append(Token(t, pos, pos + len(t), kind, number_led, uid))
        pos += len(t)
    gaps.append("")
    return TokenSeq(tokens, gaps)


# ---------------------------------------------------------------------------
# Samples

@dataclass(frozen=True)
class Sample:
    id: str
    task: str
    payload: dict
    extra: dict = field(default_factory=dict)

    @property
    def label(self):
        if self.task == "ner":
            return self.payload["labels"]
        if self.task == "ss":
            return self.payload["score"]
        return self.payload["label"]


def check_bio(labels: Iterable[str]) -> None:
    prev = "O"
    for i, lab in enumerate(labels):
        if lab == "O":
            prev = lab
            continue
        if len(lab) < 3 or lab[1] != "-" or lab[0] not in "BI":
            raise BioError(f"malformed BIO tag {lab!r} at position {i}")
        if lab[0] == "I":
            if prev == "O" or prev[2:] != lab[2:]:
                raise BioError(f"I-{lab[2:]} at position {i} does not continue an entity")
        prev = lab


def _validate_payload(task: str, record: dict, lineno: Optional[int] = None) -> dict:
    where = f" (line {lineno})" if lineno is not None else ""

    def need(key):
        if key not in record:
            raise CorpusError(f"missing field {key!r} for task {task}{where}")
        return record[key]

    if task == "ner":
        tokens, labels = need("tokens"), need("labels")
        if len(tokens) != len(labels):
            raise CorpusError(f"tokens/labels length mismatch{where}")
        try:
            check_bio(labels)
        except BioError as e:
            raise CorpusError(f"{e}{where}") from e
        return {"tokens": list(tokens), "labels": list(labels)}
    if task == "re":
        text, entities, label = need("text"), need("entities"), need("label")
        ents = []
        for ent in entities:
            start, end, etype = ent[0], ent[1], ent[2]
            if not (0 <= start < end <= len(text)):
                raise CorpusError(f"entity span ({start},{end}) out of text bounds{where}")
            ents.append([start, end, etype])
        return {"text": text, "entities": ents, "label": label}
    if task == "ti":
        label = need("label")
        if label not in TI_LABELS:
            raise CorpusError(f"invalid TI label {label!r}{where}")
        return {"premise": need("premise"), "hypothesis": need("hypothesis"), "label": label}
    if task == "ss":
        score = float(need("score"))
        if not (0.0 <= score <= 5.0):
            raise CorpusError(f"score out of range [0,5]: {score}{where}")
        return {"sentence1": need("sentence1"), "sentence2": need("sentence2"), "score": score}
    raise CorpusError(f"unknown task {task!r}{where}")


_PAYLOAD_KEYS = {
    "ner": ("tokens", "labels"),
    "re": ("text", "entities", "label"),
    "ti": ("premise", "hypothesis", "label"),
    "ss": ("sentence1", "sentence2", "score"),
}


def sample_from_record(record: dict, task: Optional[str] = None,
                       lineno: Optional[int] = None) -> Sample:
    where = f" (line {lineno})" if lineno is not None else ""
    if "id" not in record:
        raise CorpusError(f"missing field 'id'{where}")
    rec_task = record.get("task")
    if rec_task is None:
        raise CorpusError(f"missing field 'task'{where}")
    rec_task = rec_task.lower()
    if task is not None and rec_task != task:
        raise CorpusError(f"expected task {task!r}, found {rec_task!r}{where}")
    payload = _validate_payload(rec_task, record, lineno)
    known = {"id", "task", *_PAYLOAD_KEYS[rec_task]}
    extra = {k: v for k, v in record.items() if k not in known}
    return Sample(id=str(record["id"]), task=rec_task, payload=payload, extra=extra)


def sample_to_record(sample: Sample) -> dict:
    record = {"id": sample.id, "task": sample.task}
    record.update(sample.payload)
    record.update(sample.extra)
    return record


def read_samples(path, task: Optional[str] = None) -> list[Sample]:
    samples = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise CorpusError(f"malformed JSON (line {lineno}): {e}") from e
            sample = sample_from_record(record, task, lineno)
            if sample.id in seen:
                raise CorpusError(f"duplicate sample id {sample.id!r} (line {lineno})")
            seen.add(sample.id)
            samples.append(sample)
    return samples


def write_samples(samples: Iterable[Sample], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sample in samples:
            fh.write(json.dumps(sample_to_record(sample), ensure_ascii=False))
            fh.write("\n")


# ---------------------------------------------------------------------------
# NER label realignment

def _promote_orphans(labels: list[str]) -> list[str]:
    out = list(labels)
    prev = "O"
    for i, lab in enumerate(out):
        if lab.startswith("I-") and (prev == "O" or prev[2:] != lab[2:]):
            out[i] = "B-" + lab[2:]
        prev = out[i]
    return out


def bio_delete(labels: list[str], idx: int) -> list[str]:
    if not (0 <= idx < len(labels)):
        raise BioError(f"delete index {idx} out of range")
    out = labels[:idx] + labels[idx + 1:]
    return _promote_orphans(out)


def bio_repeat(labels: list[str], idx: int) -> list[str]:
    if not (0 <= idx < len(labels)):
        raise BioError(f"repeat index {idx} out of range")
    lab = labels[idx]
    dup = "I-" + lab[2:] if lab.startswith("B-") else lab
    return labels[:idx + 1] + [dup] + labels[idx + 1:]


def bio_shuffle(labels: list[str], positions: list[int], perm: list[int]) -> list[str]:
    """Permute the labels at `positions` by perm, then repair BIO in place.

    Inside the permuted region an I tag that no longer continues its entity
    is promoted to B; a B tag directly continuing a same-type entity is
    demoted to I (adjacent same-type fragments merge).
    """
    if sorted(perm) != list(range(len(positions))):
        raise BioError("perm is not a permutation of the window")
    out = list(labels)
    window = [labels[p] for p in positions]
    for slot, src in zip(positions, perm):
        out[slot] = window[src]
    touched = set(positions)
    prev = "O"
    for i, lab in enumerate(out):
        if i in touched or (i - 1) in touched:
            if lab.startswith("I-") and (prev == "O" or prev[2:] != lab[2:]):
                out[i] = "B-" + lab[2:]
            elif lab.startswith("B-") and i in touched and prev != "O" and prev[2:] == lab[2:]:
                out[i] = "I-" + lab[2:]
        prev = out[i]
    return out


def bio_contract(labels: list[str], start: int, length: int) -> list[str]:
    """Collapse a multi-token span to one token (abbreviation contraction)."""
    span = labels[start:start + length]
    if len(span) != length:
        raise BioError("contract span out of range")
    types = {lab[2:] for lab in span if lab != "O"}
    if len(types) == 1 and all(lab != "O" for lab in span):
        merged = "B-" + types.pop()
    else:
        merged = "O"
    out = labels[:start] + [merged] + labels[start + length:]
    return _promote_orphans(out)


def bio_expand(labels: list[str], idx: int, n: int) -> list[str]:
    """Expand one token to n tokens (abbreviation expansion)."""
    lab = labels[idx]
    if lab == "O":
        body = ["O"] * n
    elif lab.startswith("B-"):
        body = [lab] + ["I-" + lab[2:]] * (n - 1)
    else:
        body = [lab] * n
    return labels[:idx] + body + labels[idx + 1:]
