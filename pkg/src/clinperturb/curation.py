"""Human review workflow: queues for meaning-risk perturbed samples, per
method quotas, questionnaire ratings, and agreement statistics.

State is a pure fold over a single append-only JSONL log, so replaying the
log always reproduces the current snapshot.
"""

from __future__ import annotations

import difflib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import metrics
from .corpus import TI_LABELS, check_bio

DEFAULT_QUOTA = 200
DECISION_STATUSES = ("accepted", "relabeled", "excluded")
RATING_CATEGORIES = ("same-meaning", "changed-meaning", "not-understandable")
QUESTIONNAIRE_PARTS = ("low-risk", "high-risk")


class CurationError(ValueError):
    pass


class Conflict(CurationError):
    pass


class NotFound(CurationError):
    pass


@dataclass
class QueuedSample:
    key: str
    dataset: str
    method: str
    record: dict                   # perturbed JSONL record (noisy payload)
    original: Optional[dict]       # clean payload, when provided
    status: str                    # not-required | pending | accepted | relabeled | excluded
    revision: int = 0
    revised_label: Optional[object] = None
    reviewer: Optional[str] = None


def _validate_label(task: str, label, record: dict) -> None:
    if task == "ti":
        if label not in TI_LABELS:
            raise CurationError(f"invalid TI label {label!r}")
    elif task == "ss":
        score = float(label)
        if not (0.0 <= score <= 5.0):
            raise CurationError(f"score out of range: {score}")
    elif task == "ner":
        if not isinstance(label, list) or len(label) != len(record["tokens"]):
            raise CurationError("NER relabel must match the token count")
        check_bio(label)
    elif task == "re":
        if not isinstance(label, str) or not label:
            raise CurationError("RE relabel must be a non-empty class name")
    else:
        raise CurationError(f"unknown task {task!r}")


def _field_texts(task: str, payload: dict) -> dict[str, str]:
    if task == "ner":
        return {"tokens": " ".join(payload["tokens"])}
    if task == "re":
        return {"text": payload["text"]}
    if task == "ti":
        return {"premise": payload["premise"], "hypothesis": payload["hypothesis"]}
    return {"sentence1": payload["sentence1"], "sentence2": payload["sentence2"]}


def diff_spans(original: str, noisy: str) -> list[dict]:
    """Character spans that changed between the clean and noisy text."""
    spans = []
    matcher = difflib.SequenceMatcher(a=original, b=noisy, autojunk=False)
    for op, a0, a1, b0, b1 in matcher.get_opcodes():
        if op == "equal":
            continue
        spans.append({
            "op": op,
            "original_start": a0, "original_end": a1,
            "noisy_start": b0, "noisy_end": b1,
        })
    return spans


class Store:
    """Append-only log plus an in-memory snapshot."""

    def __init__(self, directory: Path, quota_target: int = DEFAULT_QUOTA):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.log_path = self.directory / "log.jsonl"
        self.quota_target = quota_target
        self.samples: dict[str, QueuedSample] = {}
        self.ratings: dict[tuple[str, str], dict] = {}
        if self.log_path.exists():
            self._replay()

    # -- log machinery

    def _append(self, event: dict) -> None:
        with open(self.log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, ensure_ascii=False) + "\n")

    def _replay(self) -> None:
        with open(self.log_path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    self._fold(json.loads(line))

    def _fold(self, event: dict) -> None:
        kind = event["event"]
        if kind == "enqueue":
            self._fold_enqueue(event)
        elif kind == "decision":
            self._fold_decision(event)
        elif kind == "rating":
            self._fold_rating(event)

    # -- enqueue

    @staticmethod
    def make_key(dataset: str, method: str, sample_id: str) -> str:
        return f"{dataset}:{method}:{sample_id}"

    def enqueue(self, records: list[dict], dataset: str) -> dict:
        added = 0
        for record in records:
            meta = record.get("perturbation")
            if meta is None:
                raise CurationError("record lacks perturbation metadata")
            key = self.make_key(dataset, meta["method"], record["id"])
            if key in self.samples:
                continue
            event = {"event": "enqueue", "dataset": dataset, "record": record,
                     "ts": time.time()}
            self._append(event)
            self._fold_enqueue(event)
            added += 1
        return self.queue_state(dataset=dataset)

    def _fold_enqueue(self, event: dict) -> None:
        record = event["record"]
        meta = record["perturbation"]
        dataset = event["dataset"]
        key = self.make_key(dataset, meta["method"], record["id"])
        if key in self.samples:
            return
        status = "pending" if meta.get("meaning_risk") else "not-required"
        review = record.get("review") or {}
        if review.get("status") in DECISION_STATUSES:
            status = review["status"]
        self.samples[key] = QueuedSample(
            key=key, dataset=dataset, method=meta["method"],
            record=record, original=record.get("original"), status=status,
            revised_label=review.get("revised_label"),
        )

    # -- review decisions

    def decide(self, key: str, reviewer: str, status: str,
               revised_label=None, note: Optional[str] = None,
               revision: Optional[int] = None) -> QueuedSample:
        sample = self.samples.get(key)
        if sample is None:
            raise NotFound(f"unknown sample {key!r}")
        if status not in DECISION_STATUSES:
            raise CurationError(f"invalid decision status {status!r}")
        if revision is not None and revision != sample.revision:
            raise Conflict(
                f"sample {key!r} is at revision {sample.revision}, not {revision}"
            )
        if status == "relabeled":
            if revised_label is None:
                raise CurationError("relabeled decision requires revised_label")
            _validate_label(sample.record["task"].lower(), revised_label,
                            sample.record)
        event = {
            "event": "decision", "key": key, "reviewer": reviewer,
            "status": status, "revised_label": revised_label, "note": note,
            "ts": time.time(),
        }
        self._append(event)
        self._fold_decision(event)
        return self.samples[key]

    def _fold_decision(self, event: dict) -> None:
        sample = self.samples.get(event["key"])
        if sample is None:
            return
        sample.status = event["status"]
        sample.revised_label = event.get("revised_label")
        sample.reviewer = event.get("reviewer")
        sample.revision += 1

    # -- queue / progress / export views

    def queue_state(self, method: Optional[str] = None,
                    dataset: Optional[str] = None,
                    status: Optional[str] = None) -> dict:
        items = [
            {"key": s.key, "id": s.record["id"], "method": s.method,
             "dataset": s.dataset, "status": s.status, "revision": s.revision}
            for s in self.samples.values()
            if (method is None or s.method == method)
            and (dataset is None or s.dataset == dataset)
            and (status is None or s.status == status)
        ]
        items.sort(key=lambda d: d["key"])
        return {"count": len(items), "items": items}

    def sample_view(self, key: str) -> dict:
        sample = self.samples.get(key)
        if sample is None:
            raise NotFound(f"unknown sample {key!r}")
        task = sample.record["task"].lower()
        noisy = _field_texts(task, sample.record)
        diffs = {}
        original = {}
        if sample.original:
            original = _field_texts(task, sample.original)
            for f, noisy_text in noisy.items():
                if f in original:
                    diffs[f] = diff_spans(original[f], noisy_text)
        label_key = {"ner": "labels", "ss": "score"}.get(task, "label")
        gold = sample.record.get(label_key)
        return {
            "key": sample.key, "id": sample.record["id"], "task": task,
            "dataset": sample.dataset, "method": sample.method,
            "status": sample.status, "revision": sample.revision,
            "revised_label": sample.revised_label,
            "noisy": noisy, "original": original, "diff": diffs,
            "gold_label": gold, "record": sample.record,
        }

    def progress(self, method: str, dataset: str) -> dict:
        relevant = [
            s for s in self.samples.values()
            if s.method == method and s.dataset == dataset
        ]
        if not relevant:
            raise NotFound(f"no samples for method={method!r} dataset={dataset!r}")
        count = sum(1 for s in relevant if s.status in ("accepted", "relabeled"))
        target = self.quota_target
        return {
            "method": method, "dataset": dataset, "target": target,
            "count": count, "remaining": max(0, target - count),
            "paused": count >= target,
        }

    def progress_all(self) -> list[dict]:
        pairs = sorted({(s.method, s.dataset) for s in self.samples.values()})
        return [self.progress(m, d) for m, d in pairs]

    def export(self, method: Optional[str] = None,
               dataset: Optional[str] = None) -> list[dict]:
        out = []
        for s in sorted(self.samples.values(), key=lambda s: s.key):
            if method is not None and s.method != method:
                continue
            if dataset is not None and s.dataset != dataset:
                continue
            if s.status not in ("accepted", "relabeled"):
                continue
            record = json.loads(json.dumps(s.record))
            record["review"] = {"status": s.status,
                                "revised_label": s.revised_label}
            if s.status == "relabeled":
                task = record["task"].lower()
                label_key = {"ner": "labels", "ss": "score"}.get(task, "label")
                record[label_key] = s.revised_label
            record.pop("original", None)
            out.append(record)
        return out

    # -- questionnaire ratings

    def record_rating(self, rater: str, key: str, category: str,
                      part: str) -> None:
        if category not in RATING_CATEGORIES:
            raise CurationError(f"invalid rating category {category!r}")
        if part not in QUESTIONNAIRE_PARTS:
            raise CurationError(f"invalid questionnaire part {part!r}")
        if key not in self.samples:
            raise NotFound(f"unknown sample {key!r}")
        if (rater, key) in self.ratings:
            raise Conflict(f"rater {rater!r} already rated {key!r}")
        event = {"event": "rating", "rater": rater, "key": key,
                 "category": category, "part": part, "ts": time.time()}
        self._append(event)
        self._fold_rating(event)

    def _fold_rating(self, event: dict) -> None:
        self.ratings[(event["rater"], event["key"])] = {
            "category": event["category"], "part": event["part"],
        }

    def questionnaire(self, part: str, size: Optional[int] = None) -> list[str]:
        """Method-stratified sample keys for one questionnaire part."""
        from .engine import MEANING_RISK_METHODS

        if part not in QUESTIONNAIRE_PARTS:
            raise CurationError(f"invalid questionnaire part {part!r}")
        if size is None:
            size = 20 if part == "high-risk" else 30
        want_risk = part == "high-risk"
        by_method: dict[str, list[str]] = {}
        for s in sorted(self.samples.values(), key=lambda s: s.key):
            if (s.method in MEANING_RISK_METHODS) == want_risk:
                by_method.setdefault(s.method, []).append(s.key)
        keys: list[str] = []
        round_i = 0
        while len(keys) < size:
            added = False
            for method in sorted(by_method):
                bucket = by_method[method]
                if round_i < len(bucket) and len(keys) < size:
                    keys.append(bucket[round_i])
                    added = True
            if not added:
                break
            round_i += 1
        return keys

    def rating_stats(self, part: str) -> dict:
        entries = [
            (rater, key, info["category"])
            for (rater, key), info in self.ratings.items()
            if info["part"] == part
        ]
        if not entries:
            raise NotFound(f"no ratings for part {part!r}")
        raters = sorted({r for r, _, _ in entries})
        keys = sorted({k for _, k, _ in entries})
        rated = {(r, k): c for r, k, c in entries}
        missing = [(r, k) for r in raters for k in keys if (r, k) not in rated]
        if missing:
            raise CurationError(
                f"incomplete rating matrix: {len(missing)} missing ratings"
            )
        matrix = []
        verdicts: dict[str, int] = {c: 0 for c in RATING_CATEGORIES}
        ties = 0
        for k in keys:
            row = [0] * len(RATING_CATEGORIES)
            counts: dict[str, int] = {}
            for r in raters:
                cat = rated[(r, k)]
                row[RATING_CATEGORIES.index(cat)] += 1
                counts[cat] = counts.get(cat, 0) + 1
            matrix.append(row)
            verdict, tie = metrics.majority_vote(counts)
            if tie:
                ties += 1
            else:
                verdicts[verdict] += 1
        n = len(keys)
        try:
            kappa = metrics.fleiss_kappa(matrix)
            band = metrics.landis_koch_band(kappa)
        except metrics.UndefinedMetric as e:
            kappa, band = None, f"undefined ({e})"
        return {
            "part": part,
            "n_samples": n,
            "n_raters": len(raters),
            "percent": {c: 100.0 * verdicts[c] / n for c in RATING_CATEGORIES},
            "tie_percent": 100.0 * ties / n,
            "matrix": matrix,
            "kappa": kappa,
            "band": band,
        }


# ---------------------------------------------------------------------------
# HTTP API

def create_app(store: Store, static_dir: Optional[Path] = None):
    from fastapi import FastAPI, Request
    from fastapi.responses import JSONResponse, PlainTextResponse

    app = FastAPI(title="clinperturb curation API")

    @app.exception_handler(CurationError)
    async def _curation_error(request: Request, exc: CurationError):
        code, name = 400, "bad-request"
        if isinstance(exc, NotFound):
            code, name = 404, "not-found"
        elif isinstance(exc, Conflict):
            code, name = 409, "conflict"
        return JSONResponse(status_code=code,
                            content={"error": name, "detail": str(exc)})

    @app.post("/api/enqueue")
    async def enqueue(body: dict):
        records = body.get("records")
        dataset = body.get("dataset")
        if not isinstance(records, list) or not dataset:
            raise CurationError("enqueue body needs 'records' and 'dataset'")
        return store.enqueue(records, dataset)

    @app.get("/api/queue")
    async def queue(method: Optional[str] = None, dataset: Optional[str] = None,
                    status: Optional[str] = None):
        return store.queue_state(method, dataset, status)

    @app.get("/api/samples/{key:path}")
    async def sample(key: str):
        return store.sample_view(key)

    @app.post("/api/samples/{key:path}/decision")
    async def decide(key: str, body: dict):
        reviewer = body.get("reviewer")
        status = body.get("status")
        if not reviewer or not status:
            raise CurationError("decision needs 'reviewer' and 'status'")
        sample = store.decide(
            key, reviewer, status, body.get("revised_label"),
            body.get("note"), body.get("revision"),
        )
        return {"key": sample.key, "status": sample.status,
                "revision": sample.revision,
                "revised_label": sample.revised_label}

    @app.get("/api/progress")
    async def progress(method: Optional[str] = None,
                       dataset: Optional[str] = None):
        if method and dataset:
            return store.progress(method, dataset)
        return store.progress_all()

    @app.post("/api/ratings")
    async def ratings(body: dict):
        store.record_rating(body.get("rater", ""), body.get("sample", ""),
                            body.get("category", ""), body.get("part", ""))
        return {"ok": True}

    @app.get("/api/questionnaire")
    async def questionnaire(part: str, size: Optional[int] = None):
        return {"part": part, "samples": store.questionnaire(part, size)}

    @app.get("/api/stats")
    async def stats(part: str):
        return store.rating_stats(part)

    @app.get("/api/export")
    async def export(method: Optional[str] = None,
                     dataset: Optional[str] = None):
        lines = [json.dumps(r, ensure_ascii=False)
                 for r in store.export(method, dataset)]
        return PlainTextResponse("\n".join(lines) + ("\n" if lines else ""),
                                 media_type="application/x-ndjson")

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True),
                  name="ui")

    return app
