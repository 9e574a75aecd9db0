"""Command line pipeline: clean -> sentencize -> dataset ops -> train/eval.

Every subcommand is a thin adapter over one module operation, reading and
writing the JSONL schemas those modules define.  Option values resolve as
flags > MATHDEF_* environment variables > --config file > defaults, and
each resolved configuration is echoed (one JSON line, stderr) before the
command runs so a pipeline can be replayed from its log alone.

Exit codes: 0 success, 1 usage error, 2 data/schema error, 3 internal
invariant violation.
"""

from __future__ import annotations

import json
import sys

import click

from . import baseline, cleaning, evaluate, ingest
from . import dataset as ds
from . import sentencize as sz
from .errors import InvariantError, MathdefError
from .jsonl import read_records, write_jsonl, write_text

CONTEXT_SETTINGS = {"auto_envvar_prefix": "MATHDEF"}


@click.group(context_settings=CONTEXT_SETTINGS)
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="JSON config file (documented in the README) providing option "
    "defaults plus cleaning/sentencizing rule overrides.",
)
@click.option(
    "--run-log",
    type=click.Path(dir_okay=False),
    default=None,
    help="Append each resolved command configuration to this JSONL file.",
)
@click.pass_context
def cli(ctx, config_path, run_log):
    """Definition-extraction preprocessing and evaluation toolkit."""
    data = {}
    if config_path:
        with open(config_path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        ctx.default_map = data.get("defaults", {})
    ctx.obj = {"config": data, "run_log": run_log}


def _echo_config(ctx, **params):
    entry = {"cmd": ctx.command.name, "params": params}
    line = json.dumps(entry, ensure_ascii=False, sort_keys=True)
    click.echo(line, err=True)
    run_log = (ctx.obj or {}).get("run_log")
    if run_log:
        with open(run_log, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")


def _clean_config(ctx) -> cleaning.CleanConfig:
    section = (ctx.obj or {}).get("config", {}).get("clean", {})
    return cleaning.CleanConfig.from_dict(section) if section else cleaning.DEFAULT_CLEAN_CONFIG


@cli.command("clean")
@click.option("--in", "in_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--tag", type=click.Choice([t.value for t in ingest.CorpusTag]), default="plain",
              show_default=True, help="Corpus style; selects idiosyncrasy rules.")
@click.option("--glob", "pattern", default="**/*", show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--manifest", "manifest_path", type=click.Path(dir_okay=False), default=None,
              help="Also write an ingestion manifest JSONL.")
@click.pass_context
def clean_cmd(ctx, in_dir, tag, pattern, out_path, manifest_path):
    """Ingest a corpus directory and write cleaned-document JSONL."""
    _echo_config(ctx, in_dir=in_dir, tag=tag, glob=pattern, out=out_path, manifest=manifest_path)
    config = _clean_config(ctx)
    docs = ingest.ingest_dir(in_dir, tag, pattern)
    if manifest_path:
        ingest.write_manifest(docs, manifest_path)
    records = []
    for doc in docs:
        cleaned = cleaning.clean(doc, config)
        records.append(
            {
                "id": cleaned.id,
                "text": cleaned.cleaned_text,
                "math_spans": [list(span) for span in cleaned.math_spans],
                "placeholders": list(cleaned.placeholder_positions),
            }
        )
    n = write_jsonl(out_path, records)
    click.echo(f"cleaned {n} documents -> {out_path}", err=True)


def _load_cleaned(path) -> list[cleaning.CleanDocument]:
    docs = []
    for rec in read_records(path, required=("id", "text")):
        docs.append(
            cleaning.CleanDocument(
                id=str(rec["id"]),
                cleaned_text=str(rec["text"]),
                math_spans=tuple(tuple(span) for span in rec.get("math_spans", [])),
                placeholder_positions=tuple(rec.get("placeholders", [])),
            )
        )
    return docs


@cli.command("sentencize")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--abbrev", "abbrev_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Abbreviation list, one entry per line.")
@click.option("--overrides", "overrides_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help='Manual boundary overrides JSONL: {"doc_id":..., "ends": [...]}.')
@click.pass_context
def sentencize_cmd(ctx, in_path, out_path, abbrev_path, overrides_path):
    """Split cleaned documents into sentence JSONL."""
    _echo_config(ctx, in_path=in_path, out=out_path, abbrev=abbrev_path, overrides=overrides_path)
    if abbrev_path:
        abbreviations = sz.load_abbreviations(abbrev_path)
    else:
        section = (ctx.obj or {}).get("config", {}).get("sentencize", {})
        abbreviations = tuple(section.get("abbreviations", sz.DEFAULT_ABBREVIATIONS))
    overrides = {}
    if overrides_path:
        for rec in read_records(overrides_path, required=("doc_id", "ends")):
            overrides[str(rec["doc_id"])] = [int(e) for e in rec["ends"]]
    records = []
    for doc in _load_cleaned(in_path):
        sentences = sz.sentencize(doc, abbreviations, overrides.get(doc.id))
        records.extend(sz.sentence_records(sentences))
    n = write_jsonl(out_path, records)
    click.echo(f"wrote {n} sentences -> {out_path}", err=True)


@cli.group("dataset")
def dataset_group():
    """Build, inspect, and resample labeled datasets."""


@dataset_group.command("build")
@click.option("--sentences", "sentences_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--annotations", "annotations_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--corpus", default="plain", show_default=True)
@click.option("--name", default="dataset", show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.pass_context
def dataset_build(ctx, sentences_path, annotations_path, corpus, name, out_path):
    """Join sentences with annotations into a labeled dataset."""
    _echo_config(ctx, sentences=sentences_path, annotations=annotations_path,
                 corpus=corpus, name=name, out=out_path)
    sentences = read_records(sentences_path, required=("id", "text"))
    annotations = ds.load_annotations(annotations_path)
    built = ds.attach_labels(sentences, annotations, corpus_tag=corpus, name=name)
    ds.save_dataset(built, out_path)
    click.echo(f"built dataset of {len(built)} examples -> {out_path}", err=True)


@dataset_group.command("stats")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def dataset_stats(ctx, in_path):
    """Print example counts and definition density."""
    _echo_config(ctx, in_path=in_path)
    d = ds.load_dataset(in_path)
    click.echo(f"examples: {len(d)}")
    click.echo(f"positives: {d.positives}")
    click.echo(f"density: {ds.density(d):.4f}")
    if not len(d):
        click.echo("warning: empty dataset", err=True)


@dataset_group.command("split")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--val", type=float, default=0.2, show_default=True,
              help="Fraction of examples saved for validation.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--stratified/--no-stratified", default=False, show_default=True)
@click.option("--train-out", required=True, type=click.Path(dir_okay=False))
@click.option("--val-out", required=True, type=click.Path(dir_okay=False))
@click.pass_context
def dataset_split(ctx, in_path, val, seed, stratified, train_out, val_out):
    """Split into train/validation datasets."""
    _echo_config(ctx, in_path=in_path, val=val, seed=seed,
                 stratified=stratified, train_out=train_out, val_out=val_out)
    d = ds.load_dataset(in_path)
    train, val = ds.split(d, val, seed=seed, stratified=stratified)
    ds.save_dataset(train, train_out)
    ds.save_dataset(val, val_out)
    click.echo(f"split {len(d)} -> {len(train)} train / {len(val)} val", err=True)


@dataset_group.command("combine")
@click.option("--in", "in_paths", required=True, multiple=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--name", default="combined", show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.pass_context
def dataset_combine(ctx, in_paths, name, out_path):
    """Pool several datasets into one."""
    _echo_config(ctx, in_paths=list(in_paths), name=name, out=out_path)
    combined = ds.combine([ds.load_dataset(p) for p in in_paths], name=name)
    ds.save_dataset(combined, out_path)
    click.echo(f"combined {len(in_paths)} datasets into {len(combined)} examples", err=True)


@dataset_group.command("oversample")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice(["minority", "target"]), default="minority", show_default=True)
@click.option("--target", "target_density", type=float, default=None,
              help="Definition density to reach (target mode).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.pass_context
def dataset_oversample(ctx, in_path, mode, target_density, seed, out_path):
    """Duplicate positives up to a target definition density."""
    _echo_config(ctx, in_path=in_path, mode=mode, target=target_density, seed=seed, out=out_path)
    d = ds.load_dataset(in_path)
    boosted = ds.oversample(d, mode=mode, seed=seed, target_density=target_density)
    ds.save_dataset(boosted, out_path)
    click.echo(
        f"oversampled {len(d)} -> {len(boosted)} examples "
        f"(density {ds.density(boosted):.4f})",
        err=True,
    )


@dataset_group.command("audit")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--max-len", type=int, default=512, show_default=True)
@click.pass_context
def dataset_audit(ctx, in_path, max_len):
    """List examples longer than the length limit (never mutates)."""
    _echo_config(ctx, in_path=in_path, max_len=max_len)
    d = ds.load_dataset(in_path)
    entries = ds.length_audit(d, max_len=max_len)
    for sid, length in entries:
        click.echo(f"{sid}\t{length}")
    click.echo(f"{len(entries)} of {len(d)} examples exceed {max_len} chars", err=True)


@cli.command("train-baseline")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--dim", type=int, default=2**18, show_default=True)
@click.option("--ngram-min", type=int, default=1, show_default=True)
@click.option("--ngram-max", type=int, default=2, show_default=True)
@click.option("--lr", type=float, default=0.1, show_default=True)
@click.option("--l2", type=float, default=1e-4, show_default=True)
@click.option("--epochs", type=int, default=3, show_default=True)
@click.option("--batch", "batch_size", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def train_baseline(ctx, in_path, out_path, dim, ngram_min, ngram_max, lr, l2, epochs, batch_size, seed):
    """Train the hashed-feature logistic regression baseline."""
    _echo_config(ctx, in_path=in_path, out=out_path, dim=dim, ngram_min=ngram_min,
                 ngram_max=ngram_max, lr=lr, l2=l2, epochs=epochs, batch=batch_size, seed=seed)
    config = baseline.BaselineConfig(
        dim=dim, ngram_min=ngram_min, ngram_max=ngram_max, lr=lr, l2=l2,
        epochs=epochs, batch_size=batch_size, seed=seed,
    )
    train_set = ds.load_dataset(in_path)
    model, trace = baseline.train(train_set, config)
    baseline.save_model(model, out_path)
    click.echo("epoch losses: " + ", ".join(f"{x:.4f}" for x in trace), err=True)


@cli.command("predict")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--threshold", type=float, default=0.5, show_default=True)
@click.pass_context
def predict_cmd(ctx, model_path, in_path, out_path, threshold):
    """Score a dataset or sentence file with a trained baseline model."""
    _echo_config(ctx, model=model_path, in_path=in_path, out=out_path, threshold=threshold)
    model = baseline.load_model(model_path)
    records = read_records(in_path, required=("id", "text"))
    preds = baseline.predict(model, records, threshold=threshold)
    n = write_jsonl(out_path, baseline.prediction_records(preds))
    click.echo(f"wrote {n} predictions -> {out_path}", err=True)


@cli.command("eval")
@click.option("--gold", "gold_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--pred", "pred_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--slices", "slices_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["text_table", "json", "csv"]),
              default="text_table", show_default=True)
@click.option("--decimals", type=int, default=3, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Write the rendering here instead of stdout.")
@click.pass_context
def eval_cmd(ctx, gold_path, pred_path, slices_path, fmt, decimals, out_path):
    """Score predictions against gold labels."""
    _echo_config(ctx, gold=gold_path, pred=pred_path, slices=slices_path,
                 format=fmt, decimals=decimals, out=out_path)
    gold = evaluate.load_gold(gold_path)
    preds = evaluate.load_predictions(pred_path)
    if slices_path:
        result = evaluate.slice_report(gold, preds, evaluate.load_slices(slices_path))
    else:
        result = evaluate.metrics(evaluate.confusion(gold, preds))
    rendered = evaluate.render(result, format=fmt, decimals=decimals)
    if out_path:
        write_text(out_path, rendered + "\n")
    else:
        click.echo(rendered)


@cli.command("report")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["text_table", "json", "csv"]),
              default="text_table", show_default=True)
@click.option("--decimals", type=int, default=3, show_default=True)
@click.pass_context
def report_cmd(ctx, in_path, fmt, decimals):
    """Re-render a JSON eval report as a table or CSV."""
    _echo_config(ctx, in_path=in_path, format=fmt, decimals=decimals)
    with open(in_path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, list):
        parsed = [evaluate.report_from_dict(obj) for obj in data]
    else:
        parsed = evaluate.report_from_dict(data)
    click.echo(evaluate.render(parsed, format=fmt, decimals=decimals))


def run(argv=None) -> int:
    """Run the CLI, mapping errors onto documented exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 1
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except InvariantError as exc:
        click.echo(f"internal error: {exc}", err=True)
        return 3
    except MathdefError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
