from __future__ import annotations

from pathlib import Path

import pytest

from clinperturb.corpus import read_samples
from clinperturb.resources import load_bundle

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


@pytest.fixture(scope="session")
def bundle():
    return load_bundle()


@pytest.fixture(scope="session")
def corpus():
    return read_samples(FIXTURES / "corpus" / "test.jsonl")


@pytest.fixture(scope="session")
def corpus_by_task(corpus):
    out: dict = {}
    for s in corpus:
        out.setdefault(s.task, []).append(s)
    return out


@pytest.fixture(scope="session")
def ti_train():
    return read_samples(FIXTURES / "corpus" / "ti_train.jsonl")
