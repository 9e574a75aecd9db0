"""Cleaning transformations for mathematical LaTeX/Markdown text.

The goal is text whose only math markup is single-dollar delimiters and
whose punctuation placement will not confuse a sentence splitter:

* math delimiters ``\\(..\\)``, ``\\[..\\]`` and ``$$..$$`` all become ``$..$``;
* sentence punctuation that an author left inside the closing delimiter
  (``$x+y.$``) is moved outside it (``$x+y$.``);
* exclamation marks outside math become the placeholder token ``clik``
  (restored to ``!`` after sentence splitting); factorials stay intact;
* hyphens outside math are padded with spaces so ``$G$-space`` tokenizes;
* formatting commands are unwrapped or deleted, display math environments
  are rewritten as inline math, and Markdown wiki links are resolved.

Everything *inside* a math region is left alone: formulas carry meaning and
must survive byte-for-byte (punctuation extraction at the very end of a
region is the one sanctioned exception).

The full pipeline is :func:`clean`; the individual rules are exposed as
functions so each can be tested and configured on its own.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import CleanError, InvariantError
from .ingest import CorpusTag, RawDocument

DEFAULT_MOVED_PUNCTUATION = ".,;:?"
PLACEHOLDER = "clik"

# Commands whose brace-group argument is plain text even inside math mode;
# a '$' inside them must not terminate the span.
_LITERAL_TEXT_COMMANDS = frozenset(
    {"text", "textbf", "textit", "textrm", "textsf", "texttt", "mbox"}
)

# Substrings that must never survive cleaning outside a math span.
_RESIDUE = ("\\(", "\\[", "$$", "\\textbf", "\\emph", "\\cite", "\\section")

_MAX_STRIP_PASSES = 100


@dataclass(frozen=True)
class CleanConfig:
    """Pinned-but-overridable rule sets for :func:`strip_formatting`.

    The defaults cover the formatting constructs seen in concept notes and
    journal abstracts; a config file can extend them without code changes.
    """

    unwrap_commands: frozenset[str] = frozenset({"textbf", "textit", "emph", "underline"})
    delete_commands: frozenset[str] = frozenset({"label", "section", "subsection", "chapter"})
    delete_command_prefixes: tuple[str, ...] = ("cite",)
    # matched with an optional trailing '*' (align and align* both convert)
    math_environments: frozenset[str] = frozenset({"align", "equation", "gather"})
    # '!' is deliberately absent: pulling it out of '$n!$' would destroy
    # factorials and later force a bogus sentence break at the restored mark
    moved_punctuation: str = DEFAULT_MOVED_PUNCTUATION

    @classmethod
    def from_dict(cls, data: dict) -> "CleanConfig":
        kwargs = {}
        for key in ("unwrap_commands", "delete_commands", "math_environments"):
            if key in data:
                kwargs[key] = frozenset(data[key])
        if "delete_command_prefixes" in data:
            kwargs["delete_command_prefixes"] = tuple(data["delete_command_prefixes"])
        if "moved_punctuation" in data:
            kwargs["moved_punctuation"] = str(data["moved_punctuation"])
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: str | Path) -> "CleanConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


DEFAULT_CLEAN_CONFIG = CleanConfig()


@dataclass(frozen=True)
class CleanDocument:
    id: str
    cleaned_text: str
    math_spans: tuple[tuple[int, int], ...]
    placeholder_positions: tuple[int, ...]


# ---------------------------------------------------------------------------
# low-level scanners

def _command_name(text: str, i: int) -> str:
    """Letters following the backslash at ``i`` (empty for symbol escapes)."""
    j = i + 1
    n = len(text)
    while j < n and text[j].isalpha():
        j += 1
    return text[i + 1 : j]


def _brace_group_end(text: str, i: int) -> int:
    """Index just past the '}' matching the '{' at ``i``."""
    depth = 0
    j = i
    n = len(text)
    while j < n:
        c = text[j]
        if c == "\\" and j + 1 < n:
            j += 2
            continue
        if c == "{":
            depth += 1
        elif c == "}":
            depth -= 1
            if depth == 0:
                return j + 1
        j += 1
    raise CleanError("unterminated '{' group", offset=i)


def _find_single_dollar(text: str, j: int) -> int:
    """Index of the '$' closing a span whose content starts at ``j``, or -1.

    Skips escaped characters and the argument of \\text-like commands, so a
    literal '$' inside ``\\text{...}`` does not end the span.
    """
    n = len(text)
    while j < n:
        c = text[j]
        if c == "\\" and j + 1 < n:
            name = _command_name(text, j)
            if name in _LITERAL_TEXT_COMMANDS:
                k = j + 1 + len(name)
                while k < n and text[k] in " \t":
                    k += 1
                if k < n and text[k] == "{":
                    j = _brace_group_end(text, k)
                    continue
                j = k
                continue
            j += 2
            continue
        if c == "$":
            return j
        j += 1
    return -1


def _find_double_dollar(text: str, j: int) -> int:
    n = len(text)
    while j < n:
        c = text[j]
        if c == "\\" and j + 1 < n:
            j += 2
            continue
        if c == "$" and j + 1 < n and text[j + 1] == "$":
            return j
        j += 1
    return -1


def math_spans(text: str) -> list[tuple[int, int]]:
    """Spans of ``$...$`` regions in delimiter-normalized text.

    Spans are end-exclusive, sorted, non-overlapping; each starts and ends
    with '$'.  Raises :class:`CleanError` naming the offset of a dangling
    '$'.  Escaped dollars (``\\$``) are not delimiters.
    """
    spans: list[tuple[int, int]] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\\" and i + 1 < n:
            i += 2
            continue
        if c != "$":
            i += 1
            continue
        end = _find_single_dollar(text, i + 1)
        if end < 0:
            raise CleanError("unbalanced '$'", offset=i)
        spans.append((i, end + 1))
        i = end + 1
    return spans


def _raw_math_regions(text: str) -> list[tuple[int, int, int, int]]:
    """Math regions in raw text, any of the four delimiter styles.

    Returns (start, end, content_start, content_end) tuples.  Raises for a
    dangling opener or a closer with no opener, naming its byte offset.
    """
    regions: list[tuple[int, int, int, int]] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\\" and i + 1 < n:
            nxt = text[i + 1]
            if nxt == "(":
                end = text.find("\\)", i + 2)
                if end < 0:
                    raise CleanError("unclosed '\\('", offset=i)
                regions.append((i, end + 2, i + 2, end))
                i = end + 2
                continue
            if nxt == "[":
                end = text.find("\\]", i + 2)
                if end < 0:
                    raise CleanError("unclosed '\\['", offset=i)
                regions.append((i, end + 2, i + 2, end))
                i = end + 2
                continue
            if nxt in ")]":
                raise CleanError(f"dangling '\\{nxt}' with no opener", offset=i)
            i += 2
            continue
        if c == "$":
            if i + 1 < n and text[i + 1] == "$":
                end = _find_double_dollar(text, i + 2)
                if end < 0:
                    raise CleanError("unclosed '$$'", offset=i)
                regions.append((i, end + 2, i + 2, end))
                i = end + 2
                continue
            end = _find_single_dollar(text, i + 1)
            if end < 0:
                raise CleanError("unbalanced '$'", offset=i)
            regions.append((i, end + 1, i + 1, end))
            i = end + 1
            continue
        i += 1
    return regions


class _Emitter:
    """String builder that remembers the last emitted character."""

    def __init__(self):
        self.parts: list[str] = []
        self.last = ""
        self.length = 0

    def emit(self, s: str) -> None:
        if s:
            self.parts.append(s)
            self.last = s[-1]
            self.length += len(s)

    def text(self) -> str:
        return "".join(self.parts)


# ---------------------------------------------------------------------------
# the five cleaning rules

def normalize_delimiters(text: str) -> str:
    """Rewrite all four math delimiter styles to single dollar signs.

    Content between delimiters is preserved byte-for-byte.  Adjacent spans
    are separated by a space so the output never contains a literal '$$';
    a degenerate empty region becomes ``$ $`` for the same reason.
    """
    out = _Emitter()
    pos = 0
    for start, end, cs, ce in _raw_math_regions(text):
        out.emit(text[pos:start])
        if out.last == "$":
            out.emit(" ")
        content = text[cs:ce] or " "
        out.emit("$" + content + "$")
        pos = end
    out.emit(text[pos:])
    return out.text()


def relocate_punctuation(text: str, marks: str = DEFAULT_MOVED_PUNCTUATION) -> str:
    """Move sentence punctuation from just inside a closing '$' to after it.

    ``so $x+y.$`` becomes ``so $x+y$.``; whitespace between the mark and the
    delimiter is ignored; everything else in the span stays untouched.
    """
    out = _Emitter()
    pos = 0
    for start, end in math_spans(text):
        cs, ce = start + 1, end - 1
        j = ce - 1
        pulled: list[int] = []
        while j >= cs:
            ch = text[j]
            if ch.isspace():
                j -= 1
            elif ch in marks:
                pulled.append(j)
                j -= 1
            else:
                break
        out.emit(text[pos:start])
        if pulled:
            keep = set(pulled)
            content = "".join(text[k] for k in range(cs, ce) if k not in keep)
            moved = "".join(text[k] for k in sorted(pulled))
            out.emit("$" + (content or " ") + "$" + moved)
        else:
            out.emit(text[start:end])
        pos = end
    out.emit(text[pos:])
    return out.text()


def pad_hyphens(text: str) -> str:
    """Surround every hyphen outside math with single spaces.

    ``$G$-space`` becomes ``$G$ - space``; hyphens that already have space
    on a side do not get a second one; math-interior hyphens are untouched.
    """
    spans = math_spans(text)
    out = _Emitter()
    pos = 0
    for start, end in spans + [(len(text), len(text))]:
        seg = text[pos:start]
        for k, ch in enumerate(seg):
            if ch != "-":
                out.emit(ch)
                continue
            if out.last and not out.last.isspace():
                out.emit(" ")
            out.emit("-")
            if k + 1 < len(seg):
                nxt = seg[k + 1]
            elif start < len(text):
                nxt = text[start]
            else:
                nxt = ""
            if nxt and not nxt.isspace():
                out.emit(" ")
        if start < len(text):
            out.emit(text[start:end])
        pos = end
    return out.text()


def placeholder_exclamations(text: str) -> tuple[str, list[int]]:
    """Replace '!' outside math with the ``clik`` placeholder token.

    Returns the new text plus the offsets (into it) of each inserted
    placeholder, so the substitution can be undone after sentencization.
    Factorial '!' inside math spans is preserved.
    """
    spans = math_spans(text)
    out = _Emitter()
    positions: list[int] = []
    pos = 0
    for start, end in spans + [(len(text), len(text))]:
        seg = text[pos:start]
        for k, ch in enumerate(seg):
            if ch != "!":
                out.emit(ch)
                continue
            out.emit(" ")
            positions.append(out.length)
            out.emit(PLACEHOLDER)
            if k + 1 < len(seg):
                nxt = seg[k + 1]
            elif start < len(text):
                nxt = text[start]
            else:
                nxt = ""
            if nxt and not nxt.isspace():
                out.emit(" ")
        if start < len(text):
            out.emit(text[start:end])
        pos = end
    return out.text(), positions


# ---------------------------------------------------------------------------
# formatting strip

_WIKI_PIPE_RE = re.compile(r"\[\[([^\[\]|]*)\|([^\[\]|]*)\]\]")
_WIKI_PLAIN_RE = re.compile(r"\[\[([^\[\]|]*)\]\]")
_BEGIN_RE = re.compile(r"\\begin\{([A-Za-z]+\*?)\}")
_LABEL_RE = re.compile(r"\\label\s*\{[^{}]*\}")

_MD_EMPHASIS_RES = (
    re.compile(r"\*\*([^*]+)\*\*"),
    re.compile(r"__([^_]+)__"),
    re.compile(r"(?<!\*)\*([^\s*][^*]*?)\*(?!\*)"),
    re.compile(r"(?<!\w)_([^\s_][^_]*?)_(?!\w)"),
)


def _resolve_wiki_links(seg: str, base: int) -> str:
    seg = _WIKI_PIPE_RE.sub(lambda m: m.group(2), seg)
    return _WIKI_PLAIN_RE.sub(lambda m: m.group(1), seg)


def _strip_markdown_emphasis(seg: str, base: int) -> str:
    for pattern in _MD_EMPHASIS_RES:
        seg = pattern.sub(lambda m: m.group(1), seg)
    return seg


def _convert_environments(seg: str, base: int, config: CleanConfig) -> str:
    """Rewrite whitelisted display environments as inline math.

    Rows (``\\\\``-separated) are joined with '; '; ``\\label`` markers in
    the body are dropped; all other body bytes are preserved.
    """
    out = []
    pos = 0
    while True:
        m = _BEGIN_RE.search(seg, pos)
        if m is None:
            break
        name = m.group(1)
        if name.rstrip("*") not in config.math_environments:
            out.append(seg[pos : m.end()])
            pos = m.end()
            continue
        closer = f"\\end{{{name}}}"
        end = seg.find(closer, m.end())
        if end < 0:
            raise CleanError(f"unterminated environment {name!r}", offset=base + m.start())
        content = _LABEL_RE.sub("", seg[m.end() : end])
        rows = [row.strip() for row in content.split("\\\\")]
        joined = "; ".join(row for row in rows if row)
        out.append(seg[pos : m.start()])
        out.append("$" + (joined or " ") + "$")
        pos = end + len(closer)
    out.append(seg[pos:])
    return "".join(out)


def _strip_commands(seg: str, base: int, config: CleanConfig) -> str:
    """One left-to-right pass of command unwrapping/deletion.

    Nested wrappers are exposed one layer per pass; :func:`strip_formatting`
    loops until a pass changes nothing.
    """
    out = []
    i, n = 0, len(seg)
    while i < n:
        c = seg[i]
        if c != "\\":
            out.append(c)
            i += 1
            continue
        name = _command_name(seg, i)
        if not name:  # symbol escape such as \$ or \{
            out.append(seg[i : i + 2])
            i += 2
            continue
        j = i + 1 + len(name)
        if j < n and seg[j] == "*":
            j += 1
        deletable = name in config.delete_commands or any(
            name.startswith(p) for p in config.delete_command_prefixes
        )
        unwrap = name in config.unwrap_commands
        if not (deletable or unwrap):
            out.append(seg[i:j])
            i = j
            continue
        k = j
        while deletable and k < n and seg[k] == "[":
            close = seg.find("]", k + 1)
            if close < 0:
                raise CleanError("unterminated '[' argument", offset=base + k)
            k = close + 1
        g = k
        while g < n and seg[g] in " \t":
            g += 1
        if g < n and seg[g] == "{":
            try:
                gend = _brace_group_end(seg, g)
            except CleanError:
                raise CleanError("unterminated '{' group", offset=base + g) from None
            if unwrap:
                out.append(seg[g + 1 : gend - 1])
            i = gend
        else:
            # bare command without an argument: drop it either way, so no
            # stripped command can linger outside math
            i = k
    return "".join(out)


def strip_formatting(
    text: str,
    tag: CorpusTag | str,
    config: CleanConfig = DEFAULT_CLEAN_CONFIG,
) -> str:
    """Remove formatting markup, leaving math-mode content untouched.

    Applies, outside math regions only: wiki-link resolution and Markdown
    emphasis removal (markdown corpora), display-environment conversion,
    and command unwrapping/deletion, iterating until a fixed point so that
    nested wrappers like ``\\textbf{\\emph{x}}`` fully unwrap.
    """
    tag = CorpusTag.parse(tag)
    for _ in range(_MAX_STRIP_PASSES):
        new = _strip_pass(text, tag, config)
        if new == text:
            return text
        text = new
    raise InvariantError("strip_formatting did not reach a fixed point")


def _strip_pass(text: str, tag: CorpusTag, config: CleanConfig) -> str:
    regions = _raw_math_regions(text)
    segments: list[tuple[bool, str, int]] = []  # (is_math, text, base offset)
    pos = 0
    for start, end, _, _ in regions:
        segments.append((False, text[pos:start], pos))
        segments.append((True, text[start:end], start))
        pos = end
    segments.append((False, text[pos:], pos))

    transforms = []
    if tag is CorpusTag.MARKDOWN_CONCEPTS:
        transforms.append(_resolve_wiki_links)
    transforms.append(lambda s, b: _convert_environments(s, b, config))
    transforms.append(lambda s, b: _strip_commands(s, b, config))
    if tag is CorpusTag.MARKDOWN_CONCEPTS:
        transforms.append(_strip_markdown_emphasis)

    # apply the first transform that changes anything, then rescan math:
    # a conversion may have created new '$' regions that later transforms
    # must not reach into
    for fn in transforms:
        changed = False
        rebuilt = []
        for is_math, seg, b in segments:
            if is_math:
                rebuilt.append(seg)
                continue
            new_seg = fn(seg, b)
            changed = changed or new_seg != seg
            rebuilt.append(new_seg)
        if changed:
            return "".join(rebuilt)
    return text


# ---------------------------------------------------------------------------
# the composed pipeline

def clean_text(
    raw_text: str,
    tag: CorpusTag | str,
    config: CleanConfig = DEFAULT_CLEAN_CONFIG,
) -> tuple[str, list[tuple[int, int]], list[int]]:
    """Apply the full cleaning pipeline to one string.

    Returns (cleaned_text, math_spans, placeholder_positions).
    """
    text = strip_formatting(raw_text, tag, config)
    text = normalize_delimiters(text)
    text = relocate_punctuation(text, config.moved_punctuation)
    text = pad_hyphens(text)
    text, positions = placeholder_exclamations(text)
    spans = math_spans(text)
    _check_invariants(text, spans)
    return text, spans, positions


def clean(doc: RawDocument, config: CleanConfig = DEFAULT_CLEAN_CONFIG) -> CleanDocument:
    """Clean one document; errors carry the document id."""
    try:
        text, spans, positions = clean_text(doc.raw_text, doc.corpus_tag, config)
    except CleanError as exc:
        err = CleanError(f"{doc.id}: {exc}")
        err.offset = exc.offset
        raise err from exc
    return CleanDocument(
        id=doc.id,
        cleaned_text=text,
        math_spans=tuple(spans),
        placeholder_positions=tuple(positions),
    )


def _check_invariants(text: str, spans: list[tuple[int, int]]) -> None:
    """Fail loudly if cleaning produced structurally bad output."""
    pos = 0
    outside = []
    for start, end in spans:
        outside.append(text[pos:start])
        pos = end
    outside.append(text[pos:])
    for seg in outside:
        for needle in _RESIDUE:
            if needle in seg:
                raise InvariantError(f"residue {needle!r} outside math spans")
        i = 0
        while True:
            i = seg.find("$", i)
            if i < 0:
                break
            if i == 0 or seg[i - 1] != "\\":
                raise InvariantError("stray '$' outside computed math spans")
            i += 1
