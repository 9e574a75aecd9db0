"""Exception types shared across the pipeline.

The CLI maps these onto exit codes: data/schema problems exit 2, internal
invariant violations exit 3 (usage errors exit 1 and are click's business).
"""


class MathdefError(Exception):
    """Base class for all errors raised by this package."""


class IngestError(MathdefError):
    """A corpus file could not be read or decoded."""


class CleanError(MathdefError):
    """Malformed LaTeX/Markdown input: unbalanced delimiters, open groups.

    ``offset`` is the byte offset (into the text being processed at the
    failing stage) of the dangling opener or offending character.
    """

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class SentencizeError(MathdefError):
    """Tokenizer/splitter misuse, e.g. unbalanced '$' in supposedly clean text."""


class DatasetError(MathdefError):
    """Contract violation in dataset operations (bad labels, id collisions...)."""


class SchemaError(MathdefError):
    """A JSONL file does not match its documented schema."""


class InvariantError(MathdefError):
    """An internal invariant was violated; indicates a bug, not bad input."""
