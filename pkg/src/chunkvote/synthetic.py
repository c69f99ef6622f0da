"""Deterministic toy corpora with base and nested noun phrases.

The generator draws from a small English-like grammar so that the
chunking regularities are learnable from POS context, while a large
numbered vocabulary keeps token windows unique.
"""

from __future__ import annotations

import random

from .chunkrepr import ChunkSpan
from .corpus import Dataset, Sentence, Token

DETERMINERS = ["the", "a", "this", "every", "some"]
ADJECTIVES = ["early", "big", "small", "red", "old", "new", "quiet", "final"]
VERBS = [("was", "VBD"), ("said", "VBD"), ("sells", "VBZ"), ("bought", "VBD"), ("likes", "VBZ")]
PREPOSITIONS = ["in", "at", "of", "on", "for"]
TIME_WORDS = ["Monday", "Tuesday", "Friday", "yesterday"]


class _Builder:
    def __init__(self, rng: random.Random, vocab_size: int):
        self.rng = rng
        self.vocab_size = vocab_size
        self.tokens = []
        self.spans = []

    def noun(self):
        return f"{self.rng.choice(['stock', 'trader', 'market', 'city', 'ounce', 'bank'])}" \
               f"{self.rng.randrange(self.vocab_size)}"

    def base_np(self):
        rng = self.rng
        begin = len(self.tokens)
        kind = rng.random()
        if kind < 0.15:
            self.tokens.append(Token("$", "$"))
            self.tokens.append(Token(f"{rng.randrange(1000)}.{rng.randrange(100):02d}", "CD"))
        elif kind < 0.3:
            self.tokens.append(Token(f"Name{rng.randrange(self.vocab_size)}", "NNP"))
            if rng.random() < 0.5:
                self.tokens.append(Token(f"Place{rng.randrange(self.vocab_size)}", "NNP"))
        else:
            if rng.random() < 0.8:
                self.tokens.append(Token(rng.choice(DETERMINERS), "DT"))
            for _ in range(rng.choice([0, 0, 1, 1, 2])):
                self.tokens.append(Token(rng.choice(ADJECTIVES), "JJ"))
            for _ in range(rng.choice([1, 1, 1, 2])):
                self.tokens.append(Token(self.noun(), "NN"))
        span = ChunkSpan(begin, len(self.tokens) - 1)
        self.spans.append(span)
        return span

    def time_np(self):
        begin = len(self.tokens)
        self.tokens.append(Token(self.rng.choice(TIME_WORDS), "NNP"))
        span = ChunkSpan(begin, begin)
        self.spans.append(span)
        return span

    def word(self, word, pos):
        self.tokens.append(Token(word, pos))

    def nested_np(self, depth):
        """An arbitrary NP: a base NP, NP + PP, or NP + measure NP."""
        rng = self.rng
        begin = len(self.tokens)
        if depth <= 0 or rng.random() < 0.35:
            return self.base_np()
        if rng.random() < 0.6:
            self.nested_np(depth - 1)
            self.word(rng.choice(PREPOSITIONS), "IN")
            self.nested_np(depth - 1)
        else:
            self.base_np()
            # measure phrase: "$ 366.50 an ounce"
            start = len(self.tokens)
            self.word(rng.choice(["an", "a"]), "DT")
            self.word(self.noun(), "NN")
            self.spans.append(ChunkSpan(start, len(self.tokens) - 1))
        span = ChunkSpan(begin, len(self.tokens) - 1)
        self.spans.append(span)
        return span


def base_sentence(rng: random.Random, vocab_size=1000) -> Sentence:
    b = _Builder(rng, vocab_size)
    if rng.random() < 0.5:
        b.word(rng.choice(PREPOSITIONS).capitalize(), "IN")
    b.base_np()
    if rng.random() < 0.4:
        b.word(rng.choice(PREPOSITIONS), "IN")
        b.base_np()
    if rng.random() < 0.4:
        b.time_np()  # adjacent NP: B/E tags needed
        b.word(",", ",")
    if rng.random() < 0.5:
        b.base_np()
    b.word(*rng.choice(VERBS))
    b.base_np()
    if rng.random() < 0.5:
        b.base_np()  # another adjacent NP
    b.word(".", ".")
    return Sentence(b.tokens, b.spans)


def nested_sentence(rng: random.Random, vocab_size=1000, max_depth=2) -> Sentence:
    b = _Builder(rng, vocab_size)
    b.nested_np(max_depth)
    b.word(*rng.choice(VERBS))
    b.nested_np(max_depth)
    b.word(".", ".")
    return Sentence(b.tokens, b.spans)


def base_corpus(n_sentences=50, seed=0, vocab_size=1000) -> Dataset:
    """Sentences annotated with non-overlapping base NPs."""
    rng = random.Random(seed)
    return Dataset(base_sentence(rng, vocab_size) for _ in range(n_sentences))


def nested_corpus(n_sentences=30, seed=0, vocab_size=1000, max_depth=2) -> Dataset:
    """Sentences annotated with properly nested NPs of several heights."""
    rng = random.Random(seed)
    return Dataset(nested_sentence(rng, vocab_size, max_depth) for _ in range(n_sentences))


def example_sentence() -> Sentence:
    """The gold-trading example sentence with its six base NPs."""
    text = ("In/IN early/JJ trading/NN in/IN Hong/NNP Kong/NNP Monday/NNP ,/, gold/NN "
            "was/VBD quoted/VBN at/IN $/$ 366.50/CD an/DT ounce/NN ./.")
    tokens = [Token(*item.rsplit("/", 1)) for item in text.split()]
    spans = [ChunkSpan(b, e) for b, e in ((1, 2), (4, 5), (6, 6), (8, 8), (12, 13), (14, 15))]
    return Sentence(tokens, spans)
