"""Command-line entry point: perturb, evaluate, report, sweep, serve, stats,
validate-resources."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import curation, harness, metrics
from .adapters import HttpAdapter, SubprocessAdapter
from .corpus import CorpusError, read_samples
from .engine import (
    ALL_METHODS,
    PerturbationSpec,
    perturb_corpus,
    perturbed_from_record,
    perturbed_to_record,
)
from .resources import RESOURCE_KINDS, ResourceError, load_bundle

# Exit codes: 0 success, 1 usage error, 2 runtime error.
click.exceptions.UsageError.exit_code = 1


def _load_config(path):
    if path is None:
        return {}
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _with_defaults(ctx, config, key, value, default=None):
    if value is not None:
        return value
    if key in config:
        return config[key]
    return default


def _make_adapter(spec: str, timeout: float):
    if spec.startswith("subprocess:"):
        return SubprocessAdapter(spec[len("subprocess:"):], timeout=timeout)
    if spec.startswith("http:"):
        url = spec[len("http:"):]
        if not url.startswith("//") and not url.startswith("http"):
            url = "http://" + url
        return HttpAdapter(url.lstrip("/") if url.startswith("//") else url,
                           timeout=timeout)
    raise click.UsageError(
        "--adapter must be subprocess:CMD or http:URL, got " + spec
    )


@click.group()
@click.option("--config", type=click.Path(exists=True), default=None,
              help="optional JSON file supplying flag defaults")
@click.pass_context
def cli(ctx, config):
    """Clinical-text perturbation and robustness evaluation toolkit."""
    ctx.obj = _load_config(config)


@cli.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--method", required=True, type=click.Choice(ALL_METHODS))
@click.option("--pps", default=1, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--task", default=None, type=click.Choice(["ner", "re", "ti", "ss"]))
@click.option("--resources", "resources_dir", default=None, type=click.Path(exists=True))
@click.option("--jobs", default=1, show_default=True, type=int)
def perturb(in_path, out_path, method, pps, seed, task, resources_dir, jobs):
    """Generate a perturbed copy of a dataset."""
    bundle = load_bundle(resources_dir)
    samples = read_samples(in_path, task)
    spec = PerturbationSpec(method=method, pps=pps, global_seed=seed)
    perturbed, skipped = perturb_corpus(samples, spec, bundle, jobs=jobs)
    with open(out_path, "w", encoding="utf-8") as fh:
        for p in perturbed:
            fh.write(json.dumps(perturbed_to_record(p), ensure_ascii=False) + "\n")
    click.echo(
        f"{method} pps={pps}: wrote {len(perturbed)} samples to {out_path}"
        f" ({len(skipped)} not applicable)"
    )


@cli.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True),
              help="clean or perturbed JSONL dataset")
@click.option("--adapter", "adapter_spec", required=True)
@click.option("--task", default=None, type=click.Choice(["ner", "re", "ti", "ss"]))
@click.option("--timeout", default=30.0, show_default=True, type=float)
@click.option("--jobs", default=1, show_default=True, type=int,
              help="max in-flight requests")
@click.option("--allow-unreviewed", is_flag=True, default=False)
@click.option("--runs", "runs_dir", default=None, type=click.Path())
@click.option("--dataset", default=None, help="dataset id used in reports")
def evaluate(in_path, adapter_spec, task, timeout, jobs, allow_unreviewed,
             runs_dir, dataset):
    """Score a black-box system on one dataset (clean or perturbed)."""
    dataset = dataset or Path(in_path).stem
    records = []
    with open(in_path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(json.loads(line))
    adapter = _make_adapter(adapter_spec, timeout)
    adapter.handshake()
    try:
        if records and "perturbation" in records[0]:
            perturbed = [perturbed_from_record(r) for r in records]
            task = task or perturbed[0].task
            meta = perturbed[0]
            run = harness.score_perturbed(
                adapter, dataset, perturbed, task, meta.method,
                meta.pps_requested, allow_unreviewed=allow_unreviewed,
                max_inflight=jobs,
            )
        else:
            samples = read_samples(in_path, task)
            task = task or samples[0].task
            run = harness.score_clean(adapter, dataset, samples, task,
                                      max_inflight=jobs)
    finally:
        adapter.close()
    click.echo(f"{run.method} pps={run.pps}: score {metrics.display_score(run.score)}"
               f" over {run.n_scored} samples")
    if runs_dir:
        out = Path(runs_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "evalruns.jsonl", "a", encoding="utf-8") as fh:
            from dataclasses import asdict

            fh.write(json.dumps(asdict(run)) + "\n")


@cli.command()
@click.option("--runs", "runs_dir", required=True, type=click.Path(exists=True))
def report(runs_dir):
    """Assemble a robustness report from persisted EvalRuns."""
    runs = harness.load_runs(Path(runs_dir))
    baseline = next((r for r in runs if r.method == "clean"), None)
    if baseline is None:
        raise click.ClickException("no clean baseline run in " + str(runs_dir))
    rep = harness.robustness_report(baseline, runs)
    click.echo(harness.format_report_table(rep))
    click.echo(json.dumps(rep.to_dict(), indent=2))


@cli.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--adapter", "adapter_spec", required=True)
@click.option("--task", default=None, type=click.Choice(["ner", "re", "ti", "ss"]))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--resources", "resources_dir", default=None, type=click.Path(exists=True))
@click.option("--timeout", default=30.0, show_default=True, type=float)
@click.option("--jobs", default=1, show_default=True, type=int)
@click.option("--allow-unreviewed", is_flag=True, default=False)
@click.option("--runs", "runs_dir", default=None, type=click.Path())
@click.option("--methods", default=None,
              help="comma-separated subset of methods (default: all 16)")
@click.option("--pps-max", default=4, show_default=True, type=int)
@click.option("--dataset", default=None)
def sweep(in_path, adapter_spec, task, seed, resources_dir, timeout, jobs,
          allow_unreviewed, runs_dir, methods, pps_max, dataset):
    """Full matrix: clean baseline plus every (method, PPS) combination."""
    bundle = load_bundle(resources_dir)
    samples = read_samples(in_path, task)
    dataset = dataset or Path(in_path).stem
    method_list = methods.split(",") if methods else list(ALL_METHODS)
    adapter = _make_adapter(adapter_spec, timeout)
    try:
        runs, rep = harness.run_matrix(
            adapter, dataset, samples, bundle, methods=method_list,
            pps_range=range(1, pps_max + 1), seed=seed,
            allow_unreviewed=allow_unreviewed, max_inflight=jobs,
            run_dir=Path(runs_dir) if runs_dir else None, jobs=jobs,
        )
    finally:
        adapter.close()
    click.echo(harness.format_report_table(rep, range(1, pps_max + 1)))


@cli.command()
@click.option("--runs", "store_dir", required=True, type=click.Path(),
              help="curation store directory")
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--bind", default="127.0.0.1", show_default=True)
@click.option("--ui", "ui_dir", default=None, type=click.Path(exists=True),
              help="static review-UI assets to serve at /")
def serve(store_dir, port, bind, ui_dir):
    """Run the curation API (and optionally the review UI)."""
    import uvicorn

    store = curation.Store(Path(store_dir))
    app = curation.create_app(store, Path(ui_dir) if ui_dir else None)
    uvicorn.run(app, host=bind, port=port, log_level="warning")


@cli.command()
@click.option("--runs", "store_dir", required=True, type=click.Path(exists=True))
@click.option("--part", default="low-risk", show_default=True,
              type=click.Choice(list(curation.QUESTIONNAIRE_PARTS)))
def stats(store_dir, part):
    """Questionnaire statistics: category percentages, ties, kappa, band."""
    store = curation.Store(Path(store_dir))
    result = store.rating_stats(part)
    click.echo(json.dumps(result, indent=2))


@cli.command("validate-resources")
@click.option("--resources", "resources_dir", default=None,
              type=click.Path(exists=True))
def validate_resources(resources_dir):
    """Load and check every resource table."""
    bundle = load_bundle(resources_dir)
    click.echo(f"misspellings: {len(bundle.misspellings.variants)} keys")
    click.echo(f"abbreviations: {len(bundle.abbreviations.pairs)} pairs")
    click.echo(f"synonyms: {len(bundle.synonyms.synonyms)} keys")
    click.echo(f"keyboard: {len(bundle.keyboard.adjacency)} letters")
    click.echo(f"verbs: {len(bundle.verbs.entries)} entries")
    click.echo("all resources valid")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False, obj={})
        return 0
    except click.exceptions.UsageError as e:
        click.echo(f"usage error: {e.format_message()}", err=True)
        return 1
    except click.exceptions.Abort:
        return 1
    except click.ClickException as e:
        e.show()
        return 2
    except (CorpusError, ResourceError, harness.HarnessError, OSError) as e:
        click.echo(f"error: {e}", err=True)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
