"""Crafted paragraphs with hand-verified segmentations: (tag, raw, sentences).

The expected sentences are the post-cleaning, exclamation-restored texts.
Coverage: periods inside math tokens, decimal numbers, abbreviations, and
restored exclamation marks.
"""

GOLDEN_PARAGRAPHS = [
    ("plain",
     "A group is a set with an operation. The operation must be associative.",
     ["A group is a set with an operation.", "The operation must be associative."]),
    ("plain",
     "Consider $f(x). g(y)$ as one token. Next sentence here.",
     ["Consider $f(x). g(y)$ as one token.", "Next sentence here."]),
    ("plain",
     "Pi is approximately 3.14 in many texts. Euler knew more.",
     ["Pi is approximately 3.14 in many texts.", "Euler knew more."]),
    ("plain",
     "Some maps, e.g. homomorphisms, preserve structure. They matter.",
     ["Some maps, e.g. homomorphisms, preserve structure.", "They matter."]),
    ("plain",
     "See Thm. 4 for details. The proof is hard.",
     ["See Thm. 4 for details.", "The proof is hard."]),
    ("plain",
     "This result is stunning! It took years.",
     ["This result is stunning!", "It took years."]),
    ("plain",
     "Compute $n!$ quickly. Done fast.",
     ["Compute $n!$ quickly.", "Done fast."]),
    ("plain",
     "Is every field a ring? Yes, trivially.",
     ["Is every field a ring?", "Yes, trivially."]),
    ("plain",
     "The set is denoted by X. and sometimes by Y. Final thought follows.",
     ["The set is denoted by X. and sometimes by Y.", "Final thought follows."]),
    ("plain",
     "The identity is $e$. Inverses exist too.",
     ["The identity is $e$.", "Inverses exist too."]),
    ("plain",
     r"We write \(x+y.\) Then we stop.",
     ["We write $x+y$.", "Then we stop."]),
    ("latex_abstracts",
     r"\begin{equation}a = b\end{equation} This equals that. More text follows.",
     ["$a = b$ This equals that.", "More text follows."]),
    ("plain",
     r"Define $S = \{x : x > 0\}$. Every element is positive.",
     [r"Define $S = \{x : x > 0\}$.", "Every element is positive."]),
    ("plain",
     "Cf. the classic result above. We omit details.",
     ["Cf. the classic result above.", "We omit details."]),
    ("plain",
     "A $G$-space is a space with $G$-action. It generalizes groups.",
     ["A $G$ - space is a space with $G$ - action.", "It generalizes groups."]),
    ("plain",
     "Wow! Really! Amazing work.",
     ["Wow!", "Really!", "Amazing work."]),
    ("plain",
     "One. Two words here. Three follows.",
     ["One.", "Two words here.", "Three follows."]),
    ("plain",
     "Napoleon visited Prof. Hardy yesterday. Nobody believed it.",
     ["Napoleon visited Prof. Hardy yesterday.", "Nobody believed it."]),
    ("plain",
     "The ratio was 2.71 exactly. Everyone checked.",
     ["The ratio was 2.71 exactly.", "Everyone checked."]),
    ("plain",
     r"Take $x \in A$. Then $x \notin B$.",
     [r"Take $x \in A$.", r"Then $x \notin B$."]),
    ("plain",
     "He asked: is it true? Nobody answered.",
     ["He asked: is it true?", "Nobody answered."]),
    ("plain",
     "Therefore $a<b$, i.e. strictly less. QED.",
     ["Therefore $a<b$, i.e. strictly less.", "QED."]),
    ("plain",
     "Resp. the dual statement holds. See above.",
     ["Resp. the dual statement holds.", "See above."]),
    ("plain",
     "So $x=1.$ Also $y=2.$ Both hold.",
     ["So $x=1$.", "Also $y=2$.", "Both hold."]),
    ("markdown_concepts",
     "A [[group]] has **structure**. It is basic.",
     ["A group has structure.", "It is basic."]),
    ("plain",
     "Surprisingly, $5! = 120$. Factorials grow fast.",
     ["Surprisingly, $5! = 120$.", "Factorials grow fast."]),
    ("plain",
     "Vs. the alternative, ours wins. Clearly so.",
     ["Vs. the alternative, ours wins.", "Clearly so."]),
    ("plain",
     "Def. 2.1 states the rule. We apply it.",
     ["Def. 2.1 states the rule.", "We apply it."]),
    ("plain",
     r"Let $f\colon A \to B$. Assume $f$ injective. Conclude.",
     [r"Let $f\colon A \to B$.", "Assume $f$ injective.", "Conclude."]),
    ("plain",
     "It holds (see Fig. 3). Next claim.",
     ["It holds (see Fig. 3).", "Next claim."]),
    ("plain",
     "Equality $a=b$ holds; moreover $b=c$. Final.",
     ["Equality $a=b$ holds; moreover $b=c$.", "Final."]),
    ("plain",
     "Note $x. y$ and also $z! w$ stay atomic. Good.",
     ["Note $x. y$ and also $z! w$ stay atomic.", "Good."]),
    ("latex_abstracts",
     r"We show \textbf{main}: $T$ holds! The proof is new.",
     ["We show main: $T$ holds!", "The proof is new."]),
    ("plain",
     "E.g. consider cyclic groups. They suffice.",
     ["E.g. consider cyclic groups.", "They suffice."]),
]
