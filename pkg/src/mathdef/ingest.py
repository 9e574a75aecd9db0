"""Read raw corpus files into a uniform document model.

Each source file (one Markdown concept note or one LaTeX abstract per file)
becomes a :class:`RawDocument` tagged with its corpus style so the cleaner
knows which idiosyncrasy rules apply.  Ids are relative paths, not hashes,
so downstream reports stay human-legible.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from pathlib import Path

from .errors import IngestError
from .jsonl import write_jsonl

log = logging.getLogger(__name__)


class CorpusTag(enum.Enum):
    MARKDOWN_CONCEPTS = "markdown_concepts"
    LATEX_ABSTRACTS = "latex_abstracts"
    PLAIN = "plain"

    @classmethod
    def parse(cls, value: "CorpusTag | str") -> "CorpusTag":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            choices = ", ".join(t.value for t in cls)
            raise IngestError(f"unknown corpus tag {value!r} (choose from: {choices})") from None


@dataclass(frozen=True)
class RawDocument:
    id: str
    source_path: Path
    corpus_tag: CorpusTag
    raw_text: str


def ingest_dir(root: str | Path, tag: CorpusTag | str, glob: str = "**/*") -> list[RawDocument]:
    """Read every file under ``root`` matching ``glob`` into RawDocuments.

    The returned list is sorted by relative path, so two runs over the same
    tree are identical regardless of filesystem enumeration order.  Empty
    files are kept (with a warning); undecodable ones fail loudly.
    """
    root = Path(root)
    tag = CorpusTag.parse(tag)
    if not root.is_dir():
        raise IngestError(f"corpus root {root} is not a readable directory")

    paths = sorted(p for p in root.glob(glob) if p.is_file())
    docs = []
    seen: set[str] = set()
    for path in paths:
        doc_id = path.relative_to(root).as_posix()
        if doc_id in seen:
            raise IngestError(f"duplicate document id {doc_id!r}")
        seen.add(doc_id)
        try:
            data = path.read_bytes()
        except OSError as exc:
            raise IngestError(f"cannot read {path}: {exc}") from exc
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise IngestError(
                f"{path} is not valid UTF-8 at byte offset {exc.start}"
            ) from exc
        if not text:
            log.warning("ingested empty file %s", path)
        docs.append(RawDocument(id=doc_id, source_path=path, corpus_tag=tag, raw_text=text))
    return docs


def write_manifest(docs: list[RawDocument], path: str | Path) -> int:
    """Emit one manifest line per document: id, path, tag, char count."""
    return write_jsonl(
        path,
        (
            {
                "id": d.id,
                "path": str(d.source_path),
                "tag": d.corpus_tag.value,
                "chars": len(d.raw_text),
            }
            for d in docs
        ),
    )
