"""Generate the committed test fixtures: the synthetic clinical corpus,
the published-results fixture, and the hand-labeled POS gold file.

Deterministic: re-running reproduces the same bytes.

Usage: python3 scripts/make_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

from clinperturb.resources import load_bundle
from clinperturb.rng import SplitMix64

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "fixtures"

BUNDLE = load_bundle()

# ---------------------------------------------------------------------------
# Sentence assembly
#
# Chunks are lists of (token, pos_tag, bio_label) triples so one grammar
# serves the NER, RE, TI, and SS generators as well as the POS gold file.

SUBJECTS = [
    ([("The", "DET"), ("patient", "NOUN-SG")], "sg"),
    ([("The", "DET"), ("physician", "NOUN-SG")], "sg"),
    ([("The", "DET"), ("nurse", "NOUN-SG")], "sg"),
    ([("The", "DET"), ("resident", "NOUN-SG")], "sg"),
    ([("The", "DET"), ("patients", "NOUN-PL")], "pl"),
    ([("The", "DET"), ("physicians", "NOUN-PL")], "pl"),
    ([("She", "PRONOUN-SG")], "sg"),
    ([("They", "PRONOUN-PL")], "pl"),
]

# Base verbs; realized as 3sg / plural / past through the verb lexicon.
VERBS = ["report", "describe", "develop", "experience", "require", "receive",
         "tolerate", "monitor", "mention", "show"]

# (chunk, entity type); BIO labels cover the content words only.
OBJECTS = [
    ([("severe", "ADJ", "B-problem"), ("chest", "NOUN-SG", "I-problem"),
      ("pain", "NOUN-SG", "I-problem")], "problem"),
    ([("mild", "ADJ", "B-problem"), ("abdominal", "NOUN-SG", "I-problem"),
      ("pain", "NOUN-SG", "I-problem")], "problem"),
    ([("shortness", "NOUN-SG", "B-problem"), ("of", "PREP", "I-problem"),
      ("breath", "NOUN-SG", "I-problem")], "problem"),
    ([("SOB", "NOUN-SG", "B-problem")], "problem"),
    ([("chronic", "ADJ", "B-problem"), ("illness", "NOUN-SG", "I-problem")],
     "problem"),
    ([("a", "DET", "O"), ("seizure", "NOUN-SG", "B-problem")], "problem"),
    ([("an", "DET", "O"), ("infection", "NOUN-SG", "B-problem")], "problem"),
    ([("elevated", "ADJ", "B-problem"), ("blood", "NOUN-SG", "I-problem"),
      ("pressure", "NOUN-SG", "I-problem")], "problem"),
    ([("CP", "NOUN-SG", "B-problem")], "problem"),
    ([("the", "DET", "O"), ("pacemaker", "NOUN-SG", "B-treatment")],
     "treatment"),
    ([("the", "DET", "O"), ("medication", "NOUN-SG", "B-treatment")],
     "treatment"),
    ([("the", "DET", "O"), ("procedure", "NOUN-SG", "B-treatment")],
     "treatment"),
    ([("the", "DET", "O"), ("antibiotic", "NOUN-SG", "B-treatment"),
      ("therapy", "NOUN-SG", "I-treatment")], "treatment"),
    ([("the", "DET", "O"), ("chest", "NOUN-SG", "B-test"),
      ("radiograph", "NOUN-SG", "I-test")], "test"),
    ([("the", "DET", "O"), ("abdominal", "NOUN-SG", "B-test"),
      ("ultrasound", "NOUN-SG", "I-test")], "test"),
]

TAILS = [
    [("after", "PREP"), ("the", "DET"), ("procedure", "NOUN-SG")],
    [("during", "PREP"), ("the", "DET"), ("exam", "NOUN-SG")],
    [("on", "PREP"), ("admission", "NOUN-SG")],
    [("without", "PREP"), ("complication", "NOUN-SG")],
    [("before", "PREP"), ("surgery", "NOUN-SG")],
    [("with", "PREP"), ("500", "NUM"), ("mg", "NOUN-SG"), ("daily", "ADV")],
    [("in", "PREP"), ("the", "DET"), ("morning", "NOUN-SG")],
    [],
]

TENSES = ["present", "present", "past"]


def inflect(base: str, tense: str, number: str) -> str:
    entry = BUNDLE.verbs.lookup(base)
    assert entry is not None and entry.base == base, base
    if tense == "past":
        return entry.past
    return entry.third_sg if number == "sg" else entry.plural


def make_sentence(rng: SplitMix64):
    """Returns (tokens, tags, bio, entity): one clause plus optional tail."""
    subj, number = SUBJECTS[rng.randbelow(len(SUBJECTS))]
    verb = VERBS[rng.randbelow(len(VERBS))]
    tense = TENSES[rng.randbelow(len(TENSES))]
    obj, etype = OBJECTS[rng.randbelow(len(OBJECTS))]
    tail = TAILS[rng.randbelow(len(TAILS))]

    tokens, tags, bio = [], [], []
    for word, tag in subj:
        tokens.append(word); tags.append(tag); bio.append("O")
    vform = inflect(verb, tense, number)
    tokens.append(vform)
    tags.append({"present": "VERB-3SG" if number == "sg" else "VERB-BASE",
                 "past": "VERB-PAST"}[tense])
    bio.append("O")
    start = len(tokens)
    for word, tag, lab in obj:
        tokens.append(word); tags.append(tag); bio.append(lab)
    entity = (start, len(tokens), etype, obj)
    for word, tag in tail:
        tokens.append(word); tags.append(tag); bio.append("O")
    tokens.append("."); tags.append("PUNCT"); bio.append("O")
    return tokens, tags, bio, entity


def detok(tokens):
    out = ""
    for tok in tokens:
        if not out:
            out = tok
        elif tok == ".":
            out += tok
        else:
            out += " " + tok
    return out


def span_of(tokens, start, end):
    """Char span of tokens[start:end] under detok()."""
    text = detok(tokens)
    prefix = detok(tokens[:start])
    begin = len(prefix) + (1 if prefix else 0)
    chunk = " ".join(tokens[start:end])
    assert text[begin:begin + len(chunk)] == chunk, (text, chunk)
    return begin, begin + len(chunk)


# ---------------------------------------------------------------------------
# Per-task sample builders

def gen_ner(rng: SplitMix64, seen: set, n: int):
    out = []
    while len(out) < n:
        tokens, _, bio, _ = make_sentence(rng)
        key = tuple(tokens)
        if key in seen:
            continue
        seen.add(key)
        out.append({"id": f"ner-{len(out):04d}", "task": "ner",
                    "tokens": tokens, "labels": bio})
    return out


RE_VERBS = {"improve": "treats", "cause": "causes", "worsen": "causes",
            "reveal": "reveals", "show": "reveals"}


def gen_re(rng: SplitMix64, seen: set, n: int):
    heads = [o for o in OBJECTS if o[1] in ("treatment", "test")]
    problems = [o for o in OBJECTS if o[1] == "problem"]
    verbs = sorted(RE_VERBS)
    out = []
    while len(out) < n:
        head, htype = heads[rng.randbelow(len(heads))]
        verb = verbs[rng.randbelow(len(verbs))]
        if (verb in ("reveal", "show")) != (htype == "test"):
            continue
        prob, _ = problems[rng.randbelow(len(problems))]
        tail = TAILS[rng.randbelow(len(TAILS))]
        tokens = [w.capitalize() if i == 0 and w[0].islower() else w
                  for i, (w, _, _) in enumerate(head)]
        h_first = next(i for i, (_, _, lab) in enumerate(head) if lab != "O")
        e1 = (h_first, len(head))
        tokens.append(inflect(verb, "past", "sg"))
        p_off = len(tokens)
        tokens.extend(w for w, _, _ in prob)
        p_first = p_off + next(i for i, (_, _, lab) in enumerate(prob)
                               if lab != "O")
        e2 = (p_first, len(tokens))
        tokens.extend(w for w, _ in tail)
        tokens.append(".")
        key = tuple(tokens)
        if key in seen:
            continue
        seen.add(key)
        text = detok(tokens)
        s1 = span_of(tokens, *e1)
        s2 = span_of(tokens, *e2)
        out.append({
            "id": f"re-{len(out):04d}", "task": "re", "text": text,
            "entities": [[s1[0], s1[1], htype], [s2[0], s2[1], "problem"]],
            "label": RE_VERBS[verb],
        })
    return out


TI_CUES = [("confirms", "entailment")] * 9 + [("denies", "contradiction")] * 6 \
    + [("mentions", "neutral")] * 5


def gen_ti(rng: SplitMix64, seen: set, n: int, prefix: str):
    out = []
    while len(out) < n:
        tokens, _, _, entity = make_sentence(rng)
        cue, label = TI_CUES[rng.randbelow(len(TI_CUES))]
        _, _, _, obj = entity
        head = [w for w, _, lab in obj if lab != "O"]
        hyp = ["The", "summary", cue, "the"] + head + ["."]
        premise, hypothesis = detok(tokens), detok(hyp)
        key = (premise, hypothesis)
        if key in seen:
            continue
        seen.add(key)
        out.append({"id": f"{prefix}-{len(out):04d}", "task": "ti",
                    "premise": premise, "hypothesis": hypothesis,
                    "label": label})
    return out


SS_VARIANTS = ["identical", "synonym", "tail", "object", "unrelated"]
SS_SYNONYMS = {"procedure": "therapy", "medication": "drug", "pain": "ache",
               "illness": "disease", "exam": "examination"}


def gen_ss(rng: SplitMix64, seen: set, n: int):
    out = []
    while len(out) < n:
        tokens, _, _, _ = make_sentence(rng)
        variant = SS_VARIANTS[rng.randbelow(len(SS_VARIANTS))]
        if variant == "identical":
            other, score = list(tokens), 5.0
        elif variant == "synonym":
            other = [SS_SYNONYMS.get(t, t) for t in tokens]
            if other == tokens:
                continue
            score = 4.2
        elif variant == "tail":
            base, _, _, _ = make_sentence(rng)
            other, score = tokens[:-1] + ["on", "admission", "."], 3.4
            if other == tokens:
                continue
        elif variant == "object":
            alt, _, _, _ = make_sentence(rng)
            other, score = alt[:2] + tokens[2:], 2.1
            if other == tokens:
                continue
        else:
            other, _, _, _ = make_sentence(rng)
            if other == tokens:
                continue
            score = 0.6
        key = (tuple(tokens), tuple(other))
        if key in seen:
            continue
        seen.add(key)
        out.append({"id": f"ss-{len(out):04d}", "task": "ss",
                    "sentence1": detok(tokens), "sentence2": detok(other),
                    "score": score})
    return out


# ---------------------------------------------------------------------------
# POS gold file

def gen_pos_gold(rng: SplitMix64, n: int = 100):
    out, seen = [], set()
    while len(out) < n:
        tokens, tags, _, _ = make_sentence(rng)
        key = tuple(tokens)
        if key in seen:
            continue
        seen.add(key)
        out.append({"tokens": tokens, "tags": tags})
    return out


# ---------------------------------------------------------------------------
# Published-results fixture (scores on the 0-100 scale)

TABLE3 = {
    "ClinicalBERT": {
        "baseline": {"ner": 73.61, "re": 73.17, "ti": 82.35, "ss": 83.71},
        "char-delete": {"ner": 67.85, "re": 69.38, "ti": 76.79, "ss": 74.94},
        "char-insert": {"ner": 68.08, "re": 69.86, "ti": 76.80, "ss": 75.95},
        "lcc": {"ner": 67.23, "re": 67.97, "ti": 75.17, "ss": 76.83},
        "cmw": {"ner": 66.90, "re": 65.83, "ti": 73.92, "ss": 72.60},
        "char-repeat": {"ner": 68.25, "re": 68.53, "ti": 76.11, "ss": 76.08},
        "char-replace": {"ner": 67.44, "re": 69.18, "ti": 77.05, "ss": 76.49},
        "char-swap": {"ner": 66.72, "re": 69.63, "ti": 76.40, "ss": 76.32},
        "rwa": {"ner": 67.05, "re": 67.58, "ti": 75.19, "ss": 73.85},
        "ae": {"ner": 69.30, "re": 68.28, "ti": 77.62, "ss": 77.57},
        "word-delete": {"ner": 68.06, "re": 69.03, "ti": 78.30, "ss": 75.80},
        "negation": {"ner": 65.91, "re": 64.95, "ti": 70.03, "ss": 71.03},
        "word-order": {"ner": 60.58, "re": 66.34, "ti": 75.54, "ss": 74.11},
        "word-repeat": {"ner": 65.77, "re": 68.80, "ti": 78.96, "ss": 77.81},
        "rws": {"ner": 65.49, "re": 69.32, "ti": 77.82, "ss": 75.26},
        "spv": {"ner": 68.76, "re": 66.63, "ti": 76.47, "ss": 77.15},
        "verb-tense": {"ner": 68.13, "re": 68.95, "ti": 77.25, "ss": 76.23},
    },
    "ClinicalXLNet": {
        "baseline": {"ner": 77.68, "re": 74.06, "ti": 85.12, "ss": 85.88},
        "char-delete": {"ner": 70.57, "re": 69.85, "ti": 79.31, "ss": 76.66},
        "char-insert": {"ner": 72.04, "re": 70.57, "ti": 79.57, "ss": 77.92},
        "lcc": {"ner": 69.31, "re": 68.36, "ti": 77.05, "ss": 77.91},
        "cmw": {"ner": 68.22, "re": 67.63, "ti": 76.04, "ss": 73.92},
        "char-repeat": {"ner": 71.43, "re": 69.89, "ti": 78.06, "ss": 77.23},
        "char-replace": {"ner": 70.07, "re": 69.77, "ti": 79.48, "ss": 77.10},
        "char-swap": {"ner": 70.69, "re": 68.48, "ti": 79.17, "ss": 78.29},
        "rwa": {"ner": 70.61, "re": 68.19, "ti": 77.56, "ss": 75.42},
        "ae": {"ner": 72.90, "re": 69.52, "ti": 79.02, "ss": 78.17},
        "word-delete": {"ner": 72.89, "re": 70.02, "ti": 79.93, "ss": 76.63},
        "negation": {"ner": 68.39, "re": 65.68, "ti": 72.31, "ss": 73.51},
        "word-order": {"ner": 63.58, "re": 71.97, "ti": 80.34, "ss": 78.11},
        "word-repeat": {"ner": 69.02, "re": 70.03, "ti": 81.01, "ss": 79.07},
        "rws": {"ner": 63.61, "re": 66.56, "ti": 75.74, "ss": 72.38},
        "spv": {"ner": 71.38, "re": 67.59, "ti": 78.89, "ss": 78.75},
        "verb-tense": {"ner": 71.02, "re": 68.65, "ti": 79.08, "ss": 77.26},
    },
    "ClinicalELMo": {
        "baseline": {"ner": 69.44, "re": 69.49, "ti": 78.51, "ss": 77.37},
        "char-delete": {"ner": 64.13, "re": 65.46, "ti": 74.84, "ss": 71.49},
        "char-insert": {"ner": 64.11, "re": 66.54, "ti": 74.14, "ss": 71.05},
        "lcc": {"ner": 65.85, "re": 66.77, "ti": 73.02, "ss": 72.67},
        "cmw": {"ner": 63.57, "re": 63.23, "ti": 72.11, "ss": 68.95},
        "char-repeat": {"ner": 65.10, "re": 65.30, "ti": 74.35, "ss": 72.78},
        "char-replace": {"ner": 63.81, "re": 64.87, "ti": 74.40, "ss": 71.23},
        "char-swap": {"ner": 63.75, "re": 65.22, "ti": 73.76, "ss": 70.38},
        "rwa": {"ner": 61.48, "re": 62.64, "ti": 71.72, "ss": 68.70},
        "ae": {"ner": 65.69, "re": 64.21, "ti": 74.59, "ss": 71.37},
        "word-delete": {"ner": 63.26, "re": 64.51, "ti": 74.56, "ss": 69.14},
        "negation": {"ner": 61.43, "re": 59.45, "ti": 63.29, "ss": 65.06},
        "word-order": {"ner": 57.58, "re": 63.24, "ti": 67.97, "ss": 67.51},
        "word-repeat": {"ner": 62.51, "re": 64.70, "ti": 75.46, "ss": 72.57},
        "rws": {"ner": 60.37, "re": 62.11, "ti": 69.22, "ss": 66.02},
        "spv": {"ner": 64.14, "re": 62.62, "ti": 73.97, "ss": 73.08},
        "verb-tense": {"ner": 64.35, "re": 63.67, "ti": 73.61, "ss": 71.24},
    },
}

# Published per-cell decreases (PPS 1-4, char then word level).
TABLE4 = {
    "ClinicalBERT": {
        "ner": {"char": [-6.11, -9.15, -10.79, -12.03],
                "word": [-7.27, -9.20, -10.83, -12.04]},
        "re": {"char": [-4.54, -7.81, -8.92, -10.05],
               "word": [-5.62, -7.32, -9.17, -10.62]},
        "ti": {"char": [-6.31, -8.85, -10.20, -12.19],
               "word": [-6.21, -8.02, -9.75, -11.24]},
        "ss": {"char": [-8.10, -10.25, -11.88, -13.05],
               "word": [-8.50, -11.52, -12.81, -13.40]},
    },
    "ClinicalXLNet": {
        "ner": {"char": [-7.34, -9.40, -11.23, -12.18],
                "word": [-8.30, -10.12, -11.75, -12.47]},
        "re": {"char": [-4.83, -7.03, -9.01, -10.36],
               "word": [-5.14, -8.19, -10.30, -11.43]},
        "ti": {"char": [-6.73, -8.07, -9.31, -10.85],
               "word": [-6.79, -7.80, -9.07, -10.77]},
        "ss": {"char": [-8.87, -9.96, -11.59, -12.87],
               "word": [-9.06, -11.45, -12.70, -13.87]},
    },
    "ClinicalELMo": {
        "ner": {"char": [-5.10, -7.79, -9.25, -10.60],
                "word": [-7.12, -8.78, -10.02, -12.25]},
        "re": {"char": [-4.14, -6.57, -8.03, -9.14],
               "word": [-6.47, -8.37, -9.96, -11.16]},
        "ti": {"char": [-4.70, -6.02, -8.11, -9.70],
               "word": [-6.91, -8.52, -10.68, -13.15]},
        "ss": {"char": [-6.14, -8.22, -9.70, -10.61],
               "word": [-7.96, -10.96, -13.15, -15.33]},
    },
}


def write_jsonl(path: Path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def main() -> None:
    (OUT / "corpus").mkdir(parents=True, exist_ok=True)

    test = []
    test += gen_ner(SplitMix64(1001), set(), 250)
    test += gen_re(SplitMix64(1002), set(), 250)
    ti_seen: set = set()
    test += gen_ti(SplitMix64(1003), ti_seen, 250, "ti")
    test += gen_ss(SplitMix64(1004), set(), 250)
    assert len(test) == 1000
    write_jsonl(OUT / "corpus" / "test.jsonl", test)

    from collections import Counter

    ti_labels = Counter(r["label"] for r in test if r["task"] == "ti")
    ranked = ti_labels.most_common()
    assert ranked[0][1] > ranked[1][1], "TI majority label must be unique"

    train = gen_ti(SplitMix64(1005), ti_seen, 400, "ti-train")
    write_jsonl(OUT / "corpus" / "ti_train.jsonl", train)

    write_jsonl(OUT / "pos_gold.jsonl", gen_pos_gold(SplitMix64(1006)))

    with open(OUT / "table3.json", "w", encoding="utf-8") as fh:
        json.dump({"scores": TABLE3, "decreases": TABLE4}, fh, indent=2)

    print("fixtures written to", OUT)


if __name__ == "__main__":
    main()
