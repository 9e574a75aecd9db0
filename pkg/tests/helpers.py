"""Shared test helpers: random document generators and toy corpora."""

from __future__ import annotations

import random

from mathdef import dataset as ds

WORDS = (
    "the", "a", "every", "group", "ring", "field", "module", "functor",
    "object", "structure", "element", "operation", "map", "set", "space",
    "is", "has", "admits", "preserves", "acts", "on", "with", "under",
    "unique", "finite", "abelian", "normal", "closed", "dense", "compact",
)

MATH_CONTENTS = (
    "x+y", "n!", "f(x). g(y)", "a_i", "x \\in Y", "G/H", "\\sum_i x_i",
    "x = 1.", "p,", "T", "\\{x : x > 0\\}", "\\text{for all $x$}", "e",
)

FORMATTING = (
    "\\textbf{%s}", "\\textit{%s}", "\\emph{%s}", "\\underline{%s}",
)

DELETIONS = (
    "\\cite{key%d}", "\\cite[p. %d]{key}", "\\label{l%d}",
    "\\section{Part %d}", "\\section*{Part %d}", "\\chapter{Ch %d}",
)

ENVIRONMENTS = (
    "\\begin{align} a &= %d \\\\ b &= %d \\end{align}",
    "\\begin{equation}x_{%d} = y\\end{equation}",
    "\\begin{gather}p_%d \\\\ q\\end{gather}",
    "\\begin{equation*}z^%d\\end{equation*}",
)

MARKDOWN = ("[[concept %d]]", "[[concept %d|plural %d]]", "**bold%d**", "*ital%d*")

_DELIMITERS = (("$", "$"), ("$$", "$$"), ("\\(", "\\)"), ("\\[", "\\]"))


def random_raw_document(
    rng: random.Random, markdown: bool = False, environments: bool = True
) -> tuple[str, str]:
    """A random LaTeX/Markdown-ish document with balanced math regions.

    Returns (corpus_tag, raw_text).  Math interiors never contain stray
    delimiters or strip-list commands, matching sane source documents.
    """
    pieces = []
    for _ in range(rng.randint(5, 25)):
        roll = rng.random()
        if roll < 0.30:
            pieces.append(rng.choice(WORDS))
        elif roll < 0.45:
            opener, closer = rng.choice(_DELIMITERS)
            pieces.append(opener + rng.choice(MATH_CONTENTS) + closer)
        elif roll < 0.55:
            pieces.append(rng.choice(FORMATTING) % rng.choice(WORDS))
        elif roll < 0.63:
            pieces.append(rng.choice(DELETIONS) % rng.randint(1, 99))
        elif roll < 0.70 and environments:
            tpl = rng.choice(ENVIRONMENTS)
            pieces.append(tpl % tuple(rng.randint(1, 9) for _ in range(tpl.count("%d"))))
        elif roll < 0.78 and markdown:
            tpl = rng.choice(MARKDOWN)
            pieces.append(tpl % tuple(rng.randint(1, 99) for _ in range(tpl.count("%d"))))
        elif roll < 0.84:
            pieces.append(rng.choice(WORDS) + "-" + rng.choice(WORDS))
        elif roll < 0.92:
            pieces.append(rng.choice(WORDS) + rng.choice(".?!,;:"))
        else:
            pieces.append("%d.%d" % (rng.randint(0, 9), rng.randint(0, 99)))
    tag = "markdown_concepts" if markdown else rng.choice(("latex_abstracts", "plain"))
    return tag, " ".join(pieces)


POSITIVE_TEMPLATES = (
    "A {n} is called a {a} {n2} if every element commutes .",
    "We say that a {n} is {a} if $x^2 = x$ holds for all $x$ .",
    "A {a} {n} is defined as a {n2} with a distinguished element .",
    "An element $g$ of a {n} is {a} if and only if $g^2 = e$ .",
    "We call a {n} {a} when it admits a unique {n2} structure .",
)

NEGATIVE_TEMPLATES = (
    "We prove that every {a} {n} embeds into a {n2} .",
    "It follows from the lemma that the {n} is {a} .",
    "The proof of the theorem uses induction on the order of the {n} .",
    "In Section 3 we study {a} {n}s and their morphisms .",
    "This result extends earlier work on {a} {n}s .",
)

_NOUNS = ("monoid", "group", "ring", "field", "graph", "lattice", "functor", "sheaf")
_ADJS = ("abelian", "commutative", "finite", "simple", "free", "normal", "cyclic")


def synthetic_corpus(n_pos: int, n_neg: int, seed: int = 42) -> ds.Dataset:
    """Template-generated separable corpus of definitional vs other sentences."""
    rng = random.Random(seed)

    def fill(template):
        return template.format(
            n=rng.choice(_NOUNS), n2=rng.choice(_NOUNS), a=rng.choice(_ADJS)
        )

    examples = []
    for i in range(n_pos):
        examples.append(ds.LabeledExample(f"p{i}", fill(rng.choice(POSITIVE_TEMPLATES)), 1))
    for i in range(n_neg):
        examples.append(ds.LabeledExample(f"n{i}", fill(rng.choice(NEGATIVE_TEMPLATES)), 0))
    return ds.make_dataset(examples, name="synthetic")


def toy_dataset(n_pos: int, n_neg: int, prefix: str = "", name: str = "toy") -> ds.Dataset:
    """Counting-only dataset: n_pos positive and n_neg negative examples."""
    examples = [
        ds.LabeledExample(f"{prefix}p{i}", f"positive sentence {i}", 1)
        for i in range(n_pos)
    ]
    examples += [
        ds.LabeledExample(f"{prefix}n{i}", f"negative sentence {i}", 0)
        for i in range(n_neg)
    ]
    return ds.make_dataset(examples, name=name)
