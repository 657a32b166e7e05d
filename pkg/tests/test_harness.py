from __future__ import annotations

import dataclasses
import sys

import pytest

from clinperturb import harness
from clinperturb.adapters import (
    InProcessAdapter,
    MemorizerSystem,
    OracleSystem,
    PerceptronSystem,
    SubprocessAdapter,
)
from clinperturb.engine import PerturbationSpec, perturb_corpus
from clinperturb.harness import (
    EvalRun,
    HarnessError,
    ReviewGateError,
    apply_review_gate,
    robustness_report,
    run_matrix,
    score_clean,
    score_perturbed,
)

from conftest import FIXTURES


def oracle_adapter(samples):
    adapter = InProcessAdapter(OracleSystem(samples))
    adapter.handshake()
    return adapter


class TestScoreClean:
    def test_oracle_is_perfect(self, corpus_by_task):
        for task, samples in corpus_by_task.items():
            subset = samples[:40]
            run = score_clean(oracle_adapter(subset), "fix", subset, task)
            assert run.score == pytest.approx(1.0)
            assert run.method == "clean" and run.pps == 0

    def test_memorizer_is_perfect_on_clean(self, corpus_by_task):
        subset = corpus_by_task["ti"][:60]
        adapter = InProcessAdapter(MemorizerSystem(subset))
        adapter.handshake()
        run = score_clean(adapter, "fix", subset, "ti")
        assert run.score == pytest.approx(1.0)


class TestReviewGate:
    def test_pending_meaning_risk_refused(self, corpus_by_task, bundle):
        subset = corpus_by_task["ti"][:20]
        spec = PerturbationSpec(method="rws", pps=1, global_seed=0)
        perturbed, _ = perturb_corpus(subset, spec, bundle)
        with pytest.raises(ReviewGateError):
            apply_review_gate(perturbed)

    def test_allow_unreviewed_overrides(self, corpus_by_task, bundle):
        subset = corpus_by_task["ti"][:20]
        spec = PerturbationSpec(method="rws", pps=1, global_seed=0)
        perturbed, _ = perturb_corpus(subset, spec, bundle)
        kept, n_excluded = apply_review_gate(perturbed, allow_unreviewed=True)
        assert len(kept) == len(perturbed) and n_excluded == 0

    def test_excluded_are_dropped(self, corpus_by_task, bundle):
        subset = corpus_by_task["ti"][:20]
        spec = PerturbationSpec(method="rws", pps=1, global_seed=0)
        perturbed, _ = perturb_corpus(subset, spec, bundle)
        perturbed = [dataclasses.replace(p, review_status="excluded")
                     if i < 5 else dataclasses.replace(p, review_status="accepted")
                     for i, p in enumerate(perturbed)]
        kept, n_excluded = apply_review_gate(perturbed)
        assert n_excluded == 5 and len(kept) == len(perturbed) - 5

    def test_relabeled_gold_is_honored(self, corpus_by_task, bundle):
        subset = corpus_by_task["ti"][:10]
        spec = PerturbationSpec(method="rws", pps=1, global_seed=0)
        perturbed, _ = perturb_corpus(subset, spec, bundle)
        flipped = []
        for p in perturbed:
            new_label = ("neutral" if p.noisy_payload["label"] != "neutral"
                         else "entailment")
            flipped.append(dataclasses.replace(
                p, review_status="relabeled", revised_label=new_label))
        adapter = oracle_adapter(subset)  # answers the original gold
        run = score_perturbed(adapter, "fix", flipped, "ti", "rws", 1)
        assert run.score == 0.0  # every gold was revised away from original


class TestNonMeaningRisk:
    def test_oracle_no_decrease(self, corpus_by_task, bundle):
        subset = corpus_by_task["ti"][:30]
        adapter = oracle_adapter(subset)
        spec = PerturbationSpec(method="char-swap", pps=2, global_seed=1)
        perturbed, _ = perturb_corpus(subset, spec, bundle)
        run = score_perturbed(adapter, "fix", perturbed, "ti", "char-swap", 2)
        assert run.score == pytest.approx(1.0)


class TestRobustnessReport:
    def base(self):
        return EvalRun("d", "ner", "clean", 0, 0.7361, 100)

    def test_cell_is_baseline_minus_mean(self):
        runs = [
            self.base(),
            EvalRun("d", "ner", "char-delete", 1, 0.70, 100),
            EvalRun("d", "ner", "char-swap", 1, 0.60, 100),
        ]
        report = robustness_report(self.base(), runs)
        assert report.decrease("char", 1) == pytest.approx(0.7361 - 0.65)
        assert report.methods_per_cell[("char", 1)] == 2

    def test_levels_grouped_separately(self):
        runs = [
            self.base(),
            EvalRun("d", "ner", "char-delete", 1, 0.70, 100),
            EvalRun("d", "ner", "rws", 1, 0.60, 100),
        ]
        report = robustness_report(self.base(), runs)
        assert ("char", 1) in report.cells and ("word", 1) in report.cells

    def test_baseline_must_be_clean(self):
        with pytest.raises(HarnessError):
            robustness_report(
                EvalRun("d", "ner", "lcc", 1, 0.7, 10), [self.base()])

    def test_mixed_dataset_rejected(self):
        other = EvalRun("other", "ner", "lcc", 1, 0.7, 10)
        with pytest.raises(HarnessError):
            robustness_report(self.base(), [self.base(), other])

    def test_to_dict_formats_display_scale(self):
        runs = [self.base(), EvalRun("d", "ner", "lcc", 1, 0.70, 100)]
        d = robustness_report(self.base(), runs).to_dict()
        assert d["baseline"] == "73.61"
        assert d["cells"]["char/pps=1"]["decrease"] == "-3.61"


class TestRunMatrix:
    def test_matrix_and_persistence(self, corpus_by_task, bundle, tmp_path):
        subset = corpus_by_task["ti"][:25]
        adapter = InProcessAdapter(OracleSystem(subset))
        runs, report = run_matrix(
            adapter, "fix", subset, bundle,
            methods=["char-delete", "rws"], pps_range=[1, 2], seed=0,
            allow_unreviewed=True, run_dir=tmp_path,
        )
        assert len(runs) == 5  # clean + 2 methods x 2 pps
        loaded = harness.load_runs(tmp_path)
        assert loaded == runs
        assert (tmp_path / "manifest.json").exists()
        assert (tmp_path / "report.json").exists()
        assert (tmp_path / "perturbed_char-delete_pps1.jsonl").exists()
        table = harness.format_report_table(report, [1, 2])
        assert "100.00" in table

    def test_task_not_declared(self, corpus_by_task, bundle):
        ti = corpus_by_task["ti"][:5]
        ner = corpus_by_task["ner"][:5]
        adapter = InProcessAdapter(OracleSystem(ti))
        with pytest.raises(HarnessError):
            run_matrix(adapter, "fix", ner, bundle, methods=["lcc"],
                       pps_range=[1])


class TestSubprocessTransport:
    def test_oracle_over_stdio(self, corpus_by_task):
        data = FIXTURES / "corpus" / "test.jsonl"
        cmd = (f"{sys.executable} -m clinperturb.fixture_system "
               f"--mode oracle --data {data}")
        adapter = SubprocessAdapter(cmd, timeout=30)
        adapter.handshake()
        try:
            assert set(adapter.tasks) == {"ner", "re", "ss", "ti"}
            subset = corpus_by_task["re"][:10]
            run = score_clean(adapter, "fix", subset, "re")
            assert run.score == pytest.approx(1.0)
        finally:
            adapter.close()


class TestPerceptron:
    def test_learns_cue_based_labels(self, ti_train, corpus_by_task):
        system = PerceptronSystem(ti_train, "ti")
        adapter = InProcessAdapter(system)
        adapter.handshake()
        subset = corpus_by_task["ti"]
        run = score_clean(adapter, "fix", subset, "ti")
        assert run.score > 0.95

    def test_training_is_deterministic(self, ti_train):
        a = PerceptronSystem(ti_train[:100], "ti")
        b = PerceptronSystem(ti_train[:100], "ti")
        req = {"id": "q", "task": "ti", "premise": "The patient has pain.",
               "hypothesis": "The summary denies the pain."}
        assert a.predict(req) == b.predict(req)


class TestTTestBridge:
    def test_compare_runs(self):
        result = harness.compare_runs_ttest(
            [0.7, 0.72, 0.68, 0.71], [0.69, 0.70, 0.66, 0.71])
        assert result.n == 4 and 0 < result.p_two_tailed < 1
