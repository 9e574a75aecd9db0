"""Math-aware tokenization and sentence splitting.

Everything between dollar-sign delimiters is one atomic token, so a period
inside ``$f(x). g(y)$`` can never end a sentence.  Plain text splits on
whitespace, with terminal sentence punctuation peeled off into its own
tokens (decimal numbers like ``3.14`` stay whole).  Boundaries fall after
'.', '?' and restored '!' unless an abbreviation or a lowercase
continuation says otherwise; the ``clik`` placeholders the cleaner inserted
are mapped back to '!' in the final sentence text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .cleaning import CleanDocument, PLACEHOLDER, math_spans
from .errors import CleanError, SentencizeError

WORD = "word"
MATH = "math"
NUMBER = "number"
PUNCT = "punct"
PLACEHOLDER_KIND = "placeholder"

SENTENCE_PUNCT = ".,;:?!"
_TERMINATORS = {".", "?", "!"}

DEFAULT_ABBREVIATIONS = (
    "i.e.", "e.g.", "cf.", "etc.", "resp.", "Dr.", "Prof.", "vs.",
    "Thm.", "Def.", "Prop.", "Lem.", "Cor.", "Fig.", "Eq.",
)

_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?")
_CLIK_RE = re.compile(rf" ?\b{PLACEHOLDER}\b")


@dataclass(frozen=True)
class Token:
    text: str
    kind: str
    start: int  # char offsets into the cleaned text
    end: int


@dataclass(frozen=True)
class Sentence:
    doc_id: str
    index: int
    text: str
    tokens: tuple[Token, ...]
    char_span: tuple[int, int]

    @property
    def id(self) -> str:
        return f"{self.doc_id}#{self.index}"


def restore_exclamations(text: str) -> str:
    """Undo the cleaner's placeholder substitution (`` clik`` -> ``!``)."""
    return _CLIK_RE.sub("!", text)


def load_abbreviations(path: str | Path) -> tuple[str, ...]:
    """One abbreviation per line; blank lines and '#' comments are skipped."""
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                entries.append(line)
    return tuple(entries)


def tokenize(source: CleanDocument | str) -> list[Token]:
    """Tokenize cleaned text with math spans as single atomic tokens."""
    if isinstance(source, CleanDocument):
        text = source.cleaned_text
        spans = list(source.math_spans)
    else:
        text = source
        try:
            spans = math_spans(text)
        except CleanError as exc:
            raise SentencizeError(f"cannot tokenize: {exc}") from exc

    tokens: list[Token] = []
    pos = 0
    for start, end in spans + [(len(text), len(text))]:
        _tokenize_plain(text, pos, start, tokens)
        if start < len(text):
            tokens.append(Token(text[start:end], MATH, start, end))
        pos = end
    return tokens


def _tokenize_plain(text: str, lo: int, hi: int, tokens: list[Token]) -> None:
    i = lo
    while i < hi:
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < hi and not text[j].isspace():
            j += 1
        chunk = text[i:j]
        k = len(chunk)
        while k > 0 and chunk[k - 1] in SENTENCE_PUNCT:
            k -= 1
        core = chunk[:k]
        if core:
            if _NUMBER_RE.fullmatch(core):
                kind = NUMBER
            elif core == PLACEHOLDER:
                kind = PLACEHOLDER_KIND
            else:
                kind = WORD
            tokens.append(Token(core, kind, i, i + k))
        for offset, ch in enumerate(chunk[k:]):
            tokens.append(Token(ch, PUNCT, i + k + offset, i + k + offset + 1))
        i = j


def split_sentences(
    tokens: Sequence[Token],
    doc: CleanDocument,
    abbreviations: Iterable[str] = DEFAULT_ABBREVIATIONS,
    boundary_overrides: Sequence[int] | None = None,
) -> list[Sentence]:
    """Group tokens into sentences and restore exclamation marks.

    Boundaries fall after '.'/'?'/placeholder tokens, except that a '.'
    does not split when the previous word plus the dot is a known
    abbreviation or the next word starts lowercase.  Fragments shorter
    than two tokens merge into the following sentence.  When a manual
    ``boundary_overrides`` list is given (char offsets where sentences
    end), it replaces the rule-based pass entirely for this document.
    """
    tokens = list(tokens)
    if not tokens:
        return []
    if boundary_overrides is not None:
        groups = _group_by_overrides(tokens, boundary_overrides)
    else:
        abbrev = {a.lower() for a in abbreviations}
        groups = _merge_short(_group_by_rules(tokens, abbrev))

    sentences = []
    for index, group in enumerate(groups):
        span = (group[0].start, group[-1].end)
        raw = doc.cleaned_text[span[0] : span[1]]
        sentences.append(
            Sentence(
                doc_id=doc.id,
                index=index,
                text=restore_exclamations(raw),
                tokens=tuple(group),
                char_span=span,
            )
        )
    return sentences


def sentencize(
    doc: CleanDocument,
    abbreviations: Iterable[str] = DEFAULT_ABBREVIATIONS,
    boundary_overrides: Sequence[int] | None = None,
) -> list[Sentence]:
    """tokenize + split_sentences in one call."""
    return split_sentences(tokenize(doc), doc, abbreviations, boundary_overrides)


def sentence_records(sentences: Iterable[Sentence]) -> list[dict]:
    """JSONL form: {"id", "doc_id", "text", "n_tokens"}."""
    return [
        {"id": s.id, "doc_id": s.doc_id, "text": s.text, "n_tokens": len(s.tokens)}
        for s in sentences
    ]


def _is_boundary(tokens: list[Token], pos: int, abbrev: set[str]) -> bool:
    tok = tokens[pos]
    if tok.kind == PLACEHOLDER_KIND:
        return True
    if tok.kind != PUNCT or tok.text not in _TERMINATORS:
        return False
    if tok.text == ".":
        nxt = tokens[pos + 1] if pos + 1 < len(tokens) else None
        if nxt is not None and nxt.kind == WORD and nxt.text[:1].islower():
            return False
        prev = tokens[pos - 1] if pos > 0 else None
        if (
            prev is not None
            and prev.kind in (WORD, NUMBER)
            and (prev.text + ".").lower() in abbrev
        ):
            return False
    return True


def _group_by_rules(tokens: list[Token], abbrev: set[str]) -> list[list[Token]]:
    groups: list[list[Token]] = []
    current: list[Token] = []
    for pos, tok in enumerate(tokens):
        current.append(tok)
        if _is_boundary(tokens, pos, abbrev):
            groups.append(current)
            current = []
    if current:
        groups.append(current)
    return groups


def _merge_short(groups: list[list[Token]]) -> list[list[Token]]:
    i = 0
    while len(groups) > 1 and i < len(groups):
        if len(groups[i]) >= 2:
            i += 1
        elif i + 1 < len(groups):
            groups[i + 1] = groups[i] + groups[i + 1]
            del groups[i]
        else:
            groups[i - 1] = groups[i - 1] + groups[i]
            del groups[i]
            i -= 1
    return groups


def _group_by_overrides(tokens: list[Token], ends: Sequence[int]) -> list[list[Token]]:
    boundaries = sorted(set(int(e) for e in ends))
    token_ends = {t.end for t in tokens}
    for e in boundaries:
        if e not in token_ends:
            raise SentencizeError(
                f"override boundary {e} does not align with any token end"
            )
    groups: list[list[Token]] = []
    current: list[Token] = []
    it = iter(boundaries)
    nxt = next(it, None)
    for tok in tokens:
        current.append(tok)
        if nxt is not None and tok.end == nxt:
            groups.append(current)
            current = []
            nxt = next(it, None)
    if current:
        groups.append(current)
    return groups
