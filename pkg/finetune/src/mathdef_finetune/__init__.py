"""Transformer fine-tuning adapter for the mathdef pipeline.

Consumes the dataset JSONL the preprocessing toolkit produces, fine-tunes
any sequence-classification checkpoint on it, and writes predictions JSONL
in the exact schema the toolkit's evaluator scores.  The coupling is
files-only: nothing here imports the preprocessing package.
"""

__version__ = "0.1.0"
