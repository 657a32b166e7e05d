"""Lexical resources backing the perturbation methods.

All resources are TSV files: one mapping per line, '#' comments allowed.
Tables are immutable after load and safe to share across workers.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from importlib import resources as importlib_resources
from pathlib import Path
from typing import Optional

RESOURCE_KINDS = ("misspelling", "abbreviation", "synonym", "keyboard", "verb")

_FILENAMES = {
    "misspelling": "misspellings.tsv",
    "abbreviation": "abbreviations.tsv",
    "synonym": "synonyms.tsv",
    "keyboard": "keyboard.tsv",
    "verb": "verbs.tsv",
}


class ResourceError(ValueError):
    pass


@dataclass(frozen=True)
class MisspellingTable:
    variants: dict[str, tuple[str, ...]]

    def lookup(self, word: str) -> tuple[str, ...]:
        return self.variants.get(word.lower(), ())

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.variants


@dataclass(frozen=True)
class AbbreviationTable:
    pairs: tuple[tuple[tuple[str, ...], str], ...]
    by_phrase: dict[tuple[str, ...], tuple[str, ...]]
    by_abbrev: dict[str, tuple[tuple[str, ...], ...]]

    def abbreviations_for(self, phrase_tokens) -> tuple[str, ...]:
        return self.by_phrase.get(tuple(t.lower() for t in phrase_tokens), ())

    def expansions_for(self, abbrev: str) -> tuple[tuple[str, ...], ...]:
        # Case-sensitive on purpose: "OR" is an abbreviation, "or" is a word.
        return self.by_abbrev.get(abbrev, ())

    def max_phrase_len(self) -> int:
        return max((len(p) for p in self.by_phrase), default=0)


@dataclass(frozen=True)
class SynonymTable:
    synonyms: dict[str, tuple[str, ...]]

    def lookup(self, word: str) -> tuple[str, ...]:
        return self.synonyms.get(word.lower(), ())

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.synonyms


@dataclass(frozen=True)
class KeyboardMap:
    adjacency: dict[str, tuple[str, ...]]

    def neighbors(self, ch: str) -> tuple[str, ...]:
        if len(ch) != 1 or ch not in string.ascii_letters:
            raise ResourceError(f"keyboard neighbors undefined for {ch!r}")
        base = self.adjacency.get(ch.lower(), ())
        if ch.isupper():
            return tuple(c.upper() for c in base)
        return base


@dataclass(frozen=True)
class VerbEntry:
    base: str
    third_sg: str
    plural: str
    past: str
    irregular: bool


@dataclass(frozen=True)
class VerbLexicon:
    by_form: dict[str, VerbEntry]
    entries: tuple[VerbEntry, ...]

    def lookup(self, form: str) -> Optional[VerbEntry]:
        return self.by_form.get(form.lower())


@dataclass(frozen=True)
class ResourceBundle:
    misspellings: MisspellingTable
    abbreviations: AbbreviationTable
    synonyms: SynonymTable
    keyboard: KeyboardMap
    verbs: VerbLexicon


def _read_rows(path, n_cols: int, kind: str) -> list[list[str]]:
    rows = []
    try:
        fh = open(path, encoding="utf-8")
    except FileNotFoundError as e:
        raise ResourceError(f"{kind} resource not found: {path}") from e
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != n_cols:
                raise ResourceError(
                    f"{kind} resource {path}: line {lineno} has {len(cols)} columns, expected {n_cols}"
                )
            rows.append(cols)
    if not rows:
        raise ResourceError(f"{kind} resource {path} is empty")
    return rows


def _load_misspellings(path) -> MisspellingTable:
    table: dict[str, list[str]] = {}
    for correct, variant in _read_rows(path, 2, "misspelling"):
        key = correct.strip().lower()
        variant = variant.strip()
        if variant.lower() == key:
            raise ResourceError(f"misspelling maps {key!r} to itself")
        bucket = table.setdefault(key, [])
        if variant not in bucket:
            bucket.append(variant)
    return MisspellingTable({k: tuple(v) for k, v in table.items()})


def _load_abbreviations(path) -> AbbreviationTable:
    pairs: list[tuple[tuple[str, ...], str]] = []
    by_phrase: dict[tuple[str, ...], list[str]] = {}
    by_abbrev: dict[str, list[tuple[str, ...]]] = {}
    for phrase, abbrev in _read_rows(path, 2, "abbreviation"):
        words = tuple(phrase.strip().split())
        abbrev = abbrev.strip()
        if not words or not abbrev:
            raise ResourceError("abbreviation row with empty side")
        pair = (words, abbrev)
        if pair in pairs:
            continue
        pairs.append(pair)
        key = tuple(w.lower() for w in words)
        bucket = by_phrase.setdefault(key, [])
        if abbrev not in bucket:
            bucket.append(abbrev)
        rbucket = by_abbrev.setdefault(abbrev, [])
        if words not in rbucket:
            rbucket.append(words)
    return AbbreviationTable(
        tuple(pairs),
        {k: tuple(v) for k, v in by_phrase.items()},
        {k: tuple(v) for k, v in by_abbrev.items()},
    )


def _load_synonyms(path) -> SynonymTable:
    table: dict[str, list[str]] = {}
    for word, syn in _read_rows(path, 2, "synonym"):
        key = word.strip().lower()
        syn = syn.strip()
        if syn.lower() == key:
            raise ResourceError(f"synonym maps {key!r} to itself")
        bucket = table.setdefault(key, [])
        if syn not in bucket:
            bucket.append(syn)
    return SynonymTable({k: tuple(v) for k, v in table.items()})


def _load_keyboard(path) -> KeyboardMap:
    adjacency: dict[str, tuple[str, ...]] = {}
    for letter, neigh in _read_rows(path, 2, "keyboard"):
        letter = letter.strip().lower()
        neighbors = tuple(n.lower() for n in neigh.split())
        if letter in neighbors:
            raise ResourceError(f"keyboard maps {letter!r} to itself")
        adjacency[letter] = neighbors
    letters = [c for c in string.ascii_lowercase]
    for a in letters:
        neigh = [n for n in adjacency.get(a, ()) if n.isalpha()]
        if len(neigh) < 2:
            raise ResourceError(f"keyboard letter {a!r} has fewer than 2 letter neighbors")
        for b in neigh:
            if a not in adjacency.get(b, ()):
                raise ResourceError(f"keyboard adjacency not symmetric: {a!r}/{b!r}")
    return KeyboardMap(adjacency)


def _load_verbs(path) -> VerbLexicon:
    entries: list[VerbEntry] = []
    by_form: dict[str, VerbEntry] = {}
    for base, third, plural, past, irr in _read_rows(path, 5, "verb"):
        if not (base and third and plural and past):
            raise ResourceError("verb row with empty form")
        entry = VerbEntry(base.strip(), third.strip(), plural.strip(), past.strip(), irr.strip() == "1")
        entries.append(entry)
        for form in (entry.base, entry.third_sg, entry.plural, entry.past):
            by_form.setdefault(form.lower(), entry)
    return VerbLexicon(by_form, tuple(entries))


_LOADERS = {
    "misspelling": _load_misspellings,
    "abbreviation": _load_abbreviations,
    "synonym": _load_synonyms,
    "keyboard": _load_keyboard,
    "verb": _load_verbs,
}


def load_resource(kind: str, path):
    if kind not in _LOADERS:
        raise ResourceError(f"unknown resource kind {kind!r}")
    return _LOADERS[kind](path)


def bundled_data_dir() -> Path:
    return Path(importlib_resources.files("clinperturb")) / "data"


def load_bundle(directory=None) -> ResourceBundle:
    """Load all five resources from a directory (default: bundled data)."""
    base = Path(directory) if directory is not None else bundled_data_dir()
    return ResourceBundle(
        misspellings=load_resource("misspelling", base / _FILENAMES["misspelling"]),
        abbreviations=load_resource("abbreviation", base / _FILENAMES["abbreviation"]),
        synonyms=load_resource("synonym", base / _FILENAMES["synonym"]),
        keyboard=load_resource("keyboard", base / _FILENAMES["keyboard"]),
        verbs=load_resource("verb", base / _FILENAMES["verb"]),
    )


def keyboard_neighbors(ch: str, kbd: KeyboardMap) -> tuple[str, ...]:
    return kbd.neighbors(ch)
