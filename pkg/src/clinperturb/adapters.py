"""Black-box system adapters speaking the newline-delimited JSON protocol,
plus the fixture systems used for testing the harness itself.

Protocol (both transports): harness sends {"hello": "clinperturb/1"}; the
system replies {"protocol": "clinperturb/1", "tasks": [...]}. Each request
is {"id", "task", <input fields without labels>}; each response is
{"id", "output"}.
"""

from __future__ import annotations

import json
import subprocess
import sys
import time
from collections import Counter
from typing import Optional, Protocol

PROTOCOL = "clinperturb/1"

INPUT_FIELDS = {
    "ner": ("tokens",),
    "re": ("text", "entities"),
    "ti": ("premise", "hypothesis"),
    "ss": ("sentence1", "sentence2"),
}


class AdapterError(RuntimeError):
    pass


class ProtocolError(AdapterError):
    pass


def request_for(sample_id: str, task: str, payload: dict) -> dict:
    req = {"id": sample_id, "task": task}
    for key in INPUT_FIELDS[task]:
        req[key] = payload[key]
    return req


class Adapter(Protocol):
    tasks: tuple[str, ...]

    def handshake(self) -> None: ...
    def send(self, requests: list[dict]) -> list[dict]: ...
    def close(self) -> None: ...


class SubprocessAdapter:
    """Line-oriented stdin/stdout transport to a spawned system process."""

    def __init__(self, command: str, timeout: float = 30.0):
        self.command = command
        self.timeout = timeout
        self.tasks: tuple[str, ...] = ()
        self._proc: Optional[subprocess.Popen] = None

    def handshake(self) -> None:
        self._proc = subprocess.Popen(
            self.command, shell=True, stdin=subprocess.PIPE,
            stdout=subprocess.PIPE, text=True, bufsize=1,
        )
        reply = self._roundtrip({"hello": PROTOCOL})
        if reply.get("protocol") != PROTOCOL:
            raise ProtocolError(f"bad handshake reply: {reply!r}")
        self.tasks = tuple(reply.get("tasks", ()))

    def _roundtrip(self, obj: dict) -> dict:
        assert self._proc is not None and self._proc.stdin and self._proc.stdout
        self._proc.stdin.write(json.dumps(obj) + "\n")
        self._proc.stdin.flush()
        line = self._proc.stdout.readline()
        if not line:
            raise AdapterError("system process closed its output")
        try:
            return json.loads(line)
        except json.JSONDecodeError as e:
            raise ProtocolError(f"malformed response line: {line!r}") from e

    def send(self, requests: list[dict]) -> list[dict]:
        return [self._roundtrip(req) for req in requests]

    def close(self) -> None:
        if self._proc is not None:
            if self._proc.stdin:
                self._proc.stdin.close()
            self._proc.wait(timeout=10)
            self._proc = None


class HttpAdapter:
    """POSTs one request per call to a configured URL; 2 retries with backoff."""

    def __init__(self, url: str, timeout: float = 30.0, retries: int = 2):
        self.url = url.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        self.tasks: tuple[str, ...] = ()
        self._client = None

    def _post(self, path: str, obj: dict) -> dict:
        import httpx

        if self._client is None:
            self._client = httpx.Client(timeout=self.timeout)
        delay = 0.25
        last_exc: Optional[Exception] = None
        for attempt in range(self.retries + 1):
            try:
                resp = self._client.post(self.url + path, json=obj)
                resp.raise_for_status()
                return resp.json()
            except Exception as e:  # noqa: BLE001 - transport failure surface
                last_exc = e
                if attempt < self.retries:
                    time.sleep(delay)
                    delay *= 2
        raise AdapterError(f"request failed after retries: {last_exc}")

    def handshake(self) -> None:
        reply = self._post("/handshake", {"hello": PROTOCOL})
        if reply.get("protocol") != PROTOCOL:
            raise ProtocolError(f"bad handshake reply: {reply!r}")
        self.tasks = tuple(reply.get("tasks", ()))

    def send(self, requests: list[dict]) -> list[dict]:
        return [self._post("/predict", req) for req in requests]

    def close(self) -> None:
        if self._client is not None:
            self._client.close()
            self._client = None


class InProcessAdapter:
    """Wraps a fixture system object directly; used by tests and `sweep`."""

    def __init__(self, system):
        self.system = system
        self.tasks: tuple[str, ...] = ()

    def handshake(self) -> None:
        self.tasks = tuple(self.system.tasks)

    def send(self, requests: list[dict]) -> list[dict]:
        return [{"id": r["id"], "output": self.system.predict(r)} for r in requests]

    def close(self) -> None:
        pass


# ---------------------------------------------------------------------------
# Fixture systems

class OracleSystem:
    """Answers from the gold labels, keyed by sample id."""

    def __init__(self, samples):
        self.tasks = sorted({s.task for s in samples})
        self._gold = {s.id: s.label for s in samples}

    def predict(self, request: dict):
        sid = request["id"]
        if sid not in self._gold:
            raise AdapterError(f"unknown sample id {sid!r}")
        return self._gold[sid]


class MemorizerSystem:
    """Returns gold iff the exact clean input text is presented; otherwise
    the per-task majority answer (mean score for SS)."""

    def __init__(self, samples):
        self.tasks = sorted({s.task for s in samples})
        self._by_key = {}
        fallback_labels: dict[str, Counter] = {}
        ss_scores: list[float] = []
        for s in samples:
            self._by_key[self._key(s.task, s.payload)] = s.label
            if s.task == "ss":
                ss_scores.append(s.payload["score"])
            else:
                fallback_labels.setdefault(s.task, Counter())[
                    json.dumps(s.label)
                ] += 1
        self._fallback = {
            task: json.loads(counts.most_common(1)[0][0])
            for task, counts in fallback_labels.items()
        }
        if ss_scores:
            self._fallback["ss"] = sum(ss_scores) / len(ss_scores)

    @staticmethod
    def _key(task: str, payload: dict) -> str:
        fields = INPUT_FIELDS[task]
        return json.dumps([task] + [payload[f] for f in fields])

    def predict(self, request: dict):
        task = request["task"]
        key = self._key(task, request)
        if key in self._by_key:
            return self._by_key[key]
        fallback = self._fallback[task]
        if task == "ner":
            return ["O"] * len(request["tokens"])
        return fallback

    def majority_answer(self, task: str):
        return self._fallback[task]


class PerceptronSystem:
    """Hashed-feature averaged perceptron over word unigrams and character
    trigrams; deterministic training, no ML framework."""

    DIM = 1 << 18
    EPOCHS = 5

    def __init__(self, train_samples, task: str, seed: int = 7):
        import numpy as np

        self.tasks = [task]
        self.task = task
        labels = sorted({json.dumps(s.label) for s in train_samples})
        self._labels = labels
        self._index = {lab: i for i, lab in enumerate(labels)}
        self._w = np.zeros((len(labels), self.DIM))
        self._train(train_samples, seed)

    @staticmethod
    def _text_of(task: str, payload: dict) -> str:
        fields = INPUT_FIELDS[task]
        parts = []
        for f in fields:
            value = payload[f]
            parts.append(" ".join(value) if isinstance(value, list) else str(value))
        return " ".join(parts)

    def _features(self, text: str) -> list[int]:
        from .rng import fnv1a64

        feats = []
        lowered = text.lower()
        for word in lowered.split():
            feats.append(fnv1a64(b"w:" + word.encode()) % self.DIM)
        padded = f"  {lowered}  "
        for i in range(len(padded) - 2):
            feats.append(fnv1a64(b"c:" + padded[i:i + 3].encode()) % self.DIM)
        return feats

    def _train(self, samples, seed: int) -> None:
        import numpy as np

        from .rng import SplitMix64

        rng = SplitMix64(seed)
        data = [
            (self._features(self._text_of(self.task, s.payload)),
             self._index[json.dumps(s.label)])
            for s in samples
        ]
        w = np.zeros_like(self._w)
        totals = np.zeros_like(self._w)
        for _ in range(self.EPOCHS):
            order = rng.shuffled(list(range(len(data))))
            for i in order:
                feats, gold = data[i]
                scores = w[:, feats].sum(axis=1)
                pred = int(scores.argmax())
                if pred != gold:
                    w[gold, feats] += 1.0
                    w[pred, feats] -= 1.0
                totals += w
        self._w = totals

    def predict(self, request: dict):
        text = self._text_of(self.task, request)
        feats = self._features(text)
        scores = self._w[:, feats].sum(axis=1)
        return json.loads(self._labels[int(scores.argmax())])


# ---------------------------------------------------------------------------
# Subprocess entry point for the fixture systems

def serve_stdio(system) -> None:
    """Speak the wire protocol on stdin/stdout for a fixture system."""
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        msg = json.loads(line)
        if "hello" in msg:
            reply = {"protocol": PROTOCOL, "tasks": list(system.tasks)}
        else:
            reply = {"id": msg["id"], "output": system.predict(msg)}
        sys.stdout.write(json.dumps(reply) + "\n")
        sys.stdout.flush()
