"""CLI for the fine-tuning adapter: train and predict subcommands."""

from __future__ import annotations

import sys

import click

from .adapter import AdapterError, FinetuneConfig, finetune, predict


@click.group()
def cli():
    """Fine-tune transformer encoders on dataset JSONL; emit predictions JSONL."""


@cli.command("train")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--model-name", required=True,
              help="Checkpoint identifier: hub name or local path.")
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--epochs", type=int, default=3, show_default=True)
@click.option("--batch", "batch_size", type=int, default=10, show_default=True)
@click.option("--max-length", type=int, default=512, show_default=True,
              help="Tokenizer max length; inputs are padded then truncated to it.")
@click.option("--lr", "learning_rate", type=float, default=2e-5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def train_cmd(in_path, model_name, out_dir, epochs, batch_size, max_length, learning_rate, seed):
    """Fine-tune a checkpoint on a labeled dataset JSONL."""
    config = FinetuneConfig(
        model_name=model_name, epochs=epochs, batch_size=batch_size,
        max_length=max_length, seed=seed, learning_rate=learning_rate,
    )
    run_log = finetune(in_path, config, out_dir)
    click.echo(
        f"fine-tuned {model_name} for {epochs} epochs "
        f"({run_log['num_optimizer_steps']} steps); artifact in {run_log['model_dir']}",
        err=True,
    )


@cli.command("predict")
@click.option("--model", "model_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--batch", "batch_size", type=int, default=None)
@click.option("--threshold", type=float, default=0.5, show_default=True)
def predict_cmd(model_dir, in_path, out_path, batch_size, threshold):
    """Score a dataset/sentence JSONL with a fine-tuned model."""
    n = predict(model_dir, in_path, out_path, batch_size=batch_size, threshold=threshold)
    click.echo(f"wrote {n} predictions -> {out_path}", err=True)


def run(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 1
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except AdapterError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
