"""Drive a black-box system over clean and perturbed datasets, score it, and
aggregate robustness reports with the PPS sweep."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import metrics
from .adapters import Adapter, AdapterError, request_for
from .corpus import Sample
from .engine import (
    ALL_METHODS,
    CHAR_METHODS,
    MEANING_RISK_METHODS,
    PerturbationSpec,
    PerturbedSample,
    perturb_corpus,
    perturbed_to_record,
)
from .resources import ResourceBundle


class HarnessError(RuntimeError):
    pass


class ReviewGateError(HarnessError):
    """Meaning-risk samples are unreviewed; pass allow_unreviewed to override."""


@dataclass(frozen=True)
class EvalRun:
    dataset: str
    task: str
    method: str          # "clean" for the baseline
    pps: int             # 0 for the baseline
    score: float         # internal scale [0,1] / [-1,1]
    n_scored: int
    n_not_applicable: int = 0
    n_excluded_by_review: int = 0

    @property
    def level(self) -> Optional[str]:
        if self.method == "clean":
            return None
        return "char" if self.method in CHAR_METHODS else "word"


@dataclass
class RobustnessReport:
    dataset: str
    task: str
    baseline: float
    cells: dict[tuple[str, int], float] = field(default_factory=dict)
    methods_per_cell: dict[tuple[str, int], int] = field(default_factory=dict)

    def decrease(self, level: str, pps: int) -> float:
        return self.cells[(level, pps)]

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "task": self.task,
            "baseline": metrics.display_score(self.baseline),
            "cells": {
                f"{level}/pps={pps}": {
                    "decrease": f"{-metrics.round_half_up(v * 100):.2f}",
                    "methods": self.methods_per_cell[(level, pps)],
                }
                for (level, pps), v in sorted(self.cells.items())
            },
        }


def run_system(adapter: Adapter, samples: Sequence, max_inflight: int = 1) -> dict:
    """Send every sample to the adapter; returns {id: output}.

    Samples may be Sample or PerturbedSample. Aggregation is keyed by id, so
    results do not depend on in-flight batching.
    """
    requests = []
    for s in samples:
        payload = s.noisy_payload if isinstance(s, PerturbedSample) else s.payload
        sid = s.original_id if isinstance(s, PerturbedSample) else s.id
        requests.append(request_for(sid, s.task, payload))
    wanted = {r["id"] for r in requests}
    predictions: dict = {}
    batch = max(1, max_inflight)
    for i in range(0, len(requests), batch):
        for resp in adapter.send(requests[i:i + batch]):
            rid = resp.get("id")
            if rid not in wanted:
                raise AdapterError(f"response for unknown id {rid!r}")
            predictions[rid] = resp["output"]
    missing = wanted - set(predictions)
    if missing:
        raise AdapterError(f"missing predictions for {len(missing)} samples")
    return predictions


def _gold_of(sample) -> object:
    if isinstance(sample, PerturbedSample):
        if sample.review_status == "relabeled" and sample.revised_label is not None:
            return sample.revised_label
        if sample.task == "ner":
            return sample.noisy_payload["labels"]
        if sample.task == "ss":
            return sample.noisy_payload["score"]
        return sample.noisy_payload["label"]
    return sample.label


def evaluate(predictions: dict, samples: Sequence, task: str) -> float:
    ids = [
        s.original_id if isinstance(s, PerturbedSample) else s.id for s in samples
    ]
    missing = [i for i in ids if i not in predictions]
    if missing:
        raise HarnessError(f"missing predictions for ids {missing[:3]}...")
    pred = [predictions[i] for i in ids]
    gold = [_gold_of(s) for s in samples]
    if task == "ner":
        return metrics.entity_f1(pred, gold)
    if task == "re":
        return metrics.micro_f1(pred, gold)
    if task == "ti":
        return metrics.accuracy(pred, gold)
    if task == "ss":
        return metrics.pearson([float(p) for p in pred], [float(g) for g in gold])
    raise HarnessError(f"unknown task {task!r}")


def apply_review_gate(perturbed: Sequence[PerturbedSample],
                      allow_unreviewed: bool = False) -> tuple[list, int]:
    """Drop excluded samples; refuse pending meaning-risk ones unless overridden."""
    pending = [p for p in perturbed if p.review_status == "pending"]
    if pending and not allow_unreviewed:
        raise ReviewGateError(
            f"{len(pending)} meaning-risk samples are pending review; "
            "re-run with allow_unreviewed to score them anyway"
        )
    kept = [p for p in perturbed if p.review_status != "excluded"]
    return kept, len(perturbed) - len(kept)


def score_perturbed(adapter: Adapter, dataset: str,
                    perturbed: Sequence[PerturbedSample], task: str,
                    method: str, pps: int, n_not_applicable: int = 0,
                    allow_unreviewed: bool = False,
                    max_inflight: int = 1) -> EvalRun:
    kept, n_excluded = apply_review_gate(perturbed, allow_unreviewed)
    if not kept:
        raise HarnessError(f"no scoreable samples for {method} pps={pps}")
    predictions = run_system(adapter, kept, max_inflight)
    score = evaluate(predictions, kept, task)
    return EvalRun(dataset, task, method, pps, score, len(kept),
                   n_not_applicable, n_excluded)


def score_clean(adapter: Adapter, dataset: str, samples: Sequence[Sample],
                task: str, max_inflight: int = 1) -> EvalRun:
    predictions = run_system(adapter, samples, max_inflight)
    score = evaluate(predictions, samples, task)
    return EvalRun(dataset, task, "clean", 0, score, len(samples))


def robustness_report(baseline: EvalRun, runs: Sequence[EvalRun]) -> RobustnessReport:
    if baseline.method != "clean":
        raise HarnessError("baseline must be the clean run")
    report = RobustnessReport(baseline.dataset, baseline.task, baseline.score)
    groups: dict[tuple[str, int], list[float]] = {}
    for run in runs:
        if run.method == "clean":
            continue
        if (run.dataset, run.task) != (baseline.dataset, baseline.task):
            raise HarnessError("all runs must share dataset and task")
        groups.setdefault((run.level, run.pps), []).append(run.score)
    for key, scores in groups.items():
        report.cells[key] = baseline.score - sum(scores) / len(scores)
        report.methods_per_cell[key] = len(scores)
    return report


def compare_runs_ttest(scores_a: Sequence[float],
                       scores_b: Sequence[float]) -> metrics.TTestResult:
    return metrics.paired_ttest(list(scores_a), list(scores_b))


# ---------------------------------------------------------------------------
# Full matrix

def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()[:16]


def run_matrix(adapter: Adapter, dataset: str, samples: Sequence[Sample],
               bundle: ResourceBundle, methods: Sequence[str] = ALL_METHODS,
               pps_range: Sequence[int] = (1, 2, 3, 4), seed: int = 0,
               allow_unreviewed: bool = False, max_inflight: int = 1,
               run_dir: Optional[Path] = None, jobs: int = 1):
    """Clean run plus one run per (method, pps); returns (runs, report)."""
    task = samples[0].task
    if any(s.task != task for s in samples):
        raise HarnessError("run_matrix expects a single-task dataset")
    adapter.handshake()
    if task not in adapter.tasks:
        raise HarnessError(f"adapter does not declare task {task!r}")
    if run_dir is not None:
        Path(run_dir).mkdir(parents=True, exist_ok=True)

    baseline = score_clean(adapter, dataset, samples, task, max_inflight)
    runs = [baseline]
    manifest = {
        "dataset": dataset,
        "task": task,
        "seed": seed,
        "methods": list(methods),
        "pps_range": list(pps_range),
        "n_samples": len(samples),
        "counts": {},
    }
    for method in methods:
        for pps in pps_range:
            spec = PerturbationSpec(method=method, pps=pps, global_seed=seed)
            perturbed, skipped = perturb_corpus(samples, spec, bundle, jobs=jobs)
            run = score_perturbed(
                adapter, dataset, perturbed, task, method, pps,
                n_not_applicable=len(skipped),
                allow_unreviewed=allow_unreviewed, max_inflight=max_inflight,
            )
            runs.append(run)
            manifest["counts"][f"{method}/pps={pps}"] = {
                "scored": run.n_scored,
                "not_applicable": run.n_not_applicable,
                "excluded": run.n_excluded_by_review,
            }
            if run_dir is not None:
                out = Path(run_dir) / f"perturbed_{method}_pps{pps}.jsonl"
                with open(out, "w", encoding="utf-8") as fh:
                    for p in perturbed:
                        fh.write(json.dumps(perturbed_to_record(p),
                                            ensure_ascii=False) + "\n")
    report = robustness_report(baseline, runs)
    if run_dir is not None:
        persist_runs(Path(run_dir), runs, manifest, report)
    return runs, report


def persist_runs(run_dir: Path, runs: Sequence[EvalRun], manifest: dict,
                 report: Optional[RobustnessReport] = None) -> None:
    run_dir.mkdir(parents=True, exist_ok=True)
    with open(run_dir / "evalruns.jsonl", "w", encoding="utf-8") as fh:
        for run in runs:
            fh.write(json.dumps(asdict(run)) + "\n")
    (run_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2), encoding="utf-8"
    )
    if report is not None:
        (run_dir / "report.json").write_text(
            json.dumps(report.to_dict(), indent=2), encoding="utf-8"
        )


def load_runs(run_dir: Path) -> list[EvalRun]:
    runs = []
    with open(Path(run_dir) / "evalruns.jsonl", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                runs.append(EvalRun(**json.loads(line)))
    return runs


def format_report_table(report: RobustnessReport,
                        pps_range: Sequence[int] = (1, 2, 3, 4)) -> str:
    """Aligned-text table: one row, char-level then word-level decreases."""
    header = ["Task", "Baseline"]
    for level in ("char", "word"):
        for pps in pps_range:
            header.append(f"{level[0].upper()}{level[1:]} PPS={pps}")
    row = [report.task.upper(), metrics.display_score(report.baseline)]
    for level in ("char", "word"):
        for pps in pps_range:
            if (level, pps) in report.cells:
                row.append(f"{-metrics.round_half_up(report.cells[(level, pps)] * 100):.2f}")
            else:
                row.append("-")
    widths = [max(len(h), len(r)) for h, r in zip(header, row)]
    fmt = "  ".join(f"{{:>{w}}}" for w in widths)
    return fmt.format(*header) + "\n" + fmt.format(*row)
