"""Sentence/token/span data model and the column file formats.

Two on-disk formats are supported.

Column format (base chunks)::

    word POS TAG          # IOB1/IOB2/IOE1/IOE2
    word POS O-TAG C-TAG  # O+C, open tag in {O-OPEN, O-NONE}, close in {C-CLOSE, C-NONE}

one token per line, a single blank line between sentences.

Nested format (arbitrary NPs)::

    word POS TREE

where TREE is ``(NP`` once per chunk opening at the token, a ``*``, then
one ``)`` per chunk closing at the token, e.g. ``(NP(NP*``, ``*``, ``*))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from . import chunkrepr
from .chunkrepr import ChunkSpan, TagScheme

__all__ = [
    "ChunkSpan",
    "CorpusFormatError",
    "Dataset",
    "Sentence",
    "Token",
    "parse_column_file",
    "parse_nested_file",
    "parse_token_file",
    "read_column_file",
    "read_nested_file",
    "split_folds",
    "write_column_file",
    "write_nested_file",
]

_WHITESPACE = re.compile(r"\s")


class CorpusFormatError(ValueError):
    """Malformed corpus input; carries the 1-based line number."""

    def __init__(self, message, lineno=None, tag=None):
        self.lineno = lineno
        self.tag = tag
        prefix = f"line {lineno}: " if lineno is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class Token:
    word: str
    pos: str

    def __post_init__(self):
        for name in ("word", "pos"):
            value = getattr(self, name)
            if not value or _WHITESPACE.search(value):
                raise ValueError(f"token {name} must be non-empty without whitespace: {value!r}")


@dataclass(frozen=True)
class Sentence:
    tokens: tuple
    spans: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        spans = tuple(sorted(set(self.spans)))
        for span in spans:
            if span.end >= len(self.tokens):
                raise ValueError(f"span {span} outside sentence of length {len(self.tokens)}")
        object.__setattr__(self, "spans", spans)

    def __len__(self):
        return len(self.tokens)

    @property
    def words(self):
        return [tok.word for tok in self.tokens]

    @property
    def pos(self):
        return [tok.pos for tok in self.tokens]

    def with_spans(self, spans) -> "Sentence":
        return Sentence(self.tokens, tuple(spans))


@dataclass(frozen=True)
class Dataset:
    sentences: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))

    def __len__(self):
        return len(self.sentences)

    def __iter__(self) -> Iterator[Sentence]:
        return iter(self.sentences)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return Dataset(self.sentences[index])
        return self.sentences[index]

    @property
    def n_tokens(self) -> int:
        return sum(len(s) for s in self.sentences)

    def __add__(self, other: "Dataset") -> "Dataset":
        return Dataset(self.sentences + other.sentences)


def _blocks(lines: Iterable[str]):
    """Yield lists of (lineno, fields) per sentence."""
    block = []
    for lineno, line in enumerate(lines, start=1):
        fields = line.split()
        if not fields:
            if block:
                yield block
                block = []
            continue
        block.append((lineno, fields))
    if block:
        yield block


def parse_column_file(text: str, scheme="IOB1") -> Dataset:
    """Parse column-format text into a Dataset, decoding spans from the tag column(s)."""
    scheme = TagScheme.parse(scheme)
    n_fields = 4 if scheme.is_bracket else 3
    sentences = []
    for block in _blocks(text.splitlines()):
        tokens, tags = [], []
        for lineno, fields in block:
            if len(fields) != n_fields:
                raise CorpusFormatError(
                    f"expected {n_fields} fields, found {len(fields)}", lineno
                )
            tokens.append(Token(fields[0], fields[1]))
            if scheme.is_bracket:
                opening, closing = fields[2], fields[3]
                for tag, allowed in ((opening, (chunkrepr.OPEN, chunkrepr.NO_OPEN)),
                                     (closing, (chunkrepr.CLOSE, chunkrepr.NO_CLOSE))):
                    if tag not in allowed:
                        raise CorpusFormatError(
                            f"unknown {scheme.value} tag {tag!r}", lineno, tag
                        )
                tags.append((opening, closing))
            else:
                tag = fields[2]
                if tag not in scheme.alphabet:
                    raise CorpusFormatError(f"unknown {scheme.value} tag {tag!r}", lineno, tag)
                tags.append(tag)
        if scheme.is_bracket:
            opens = [o for o, _ in tags]
            closes = [c for _, c in tags]
            spans = chunkrepr.decode((opens, closes), scheme)
        else:
            spans = chunkrepr.decode(tags, scheme)
        sentences.append(Sentence(tokens, spans))
    return Dataset(sentences)


def parse_token_file(text: str) -> Dataset:
    """Unlabeled input: the first two fields (word, POS) of every line; extra columns ignored."""
    sentences = []
    for block in _blocks(text.splitlines()):
        tokens = []
        for lineno, fields in block:
            if len(fields) < 2:
                raise CorpusFormatError(f"expected at least 2 fields, found {len(fields)}", lineno)
            tokens.append(Token(fields[0], fields[1]))
        sentences.append(Sentence(tokens))
    return Dataset(sentences)


def write_column_file(data: Dataset, scheme="IOB1") -> str:
    scheme = TagScheme.parse(scheme)
    out = []
    for sentence in data:
        encoded = chunkrepr.encode(sentence.spans, len(sentence), scheme)
        if scheme.is_bracket:
            columns = list(zip(chunkrepr.marks_to_tags(encoded[0], "open"),
                               chunkrepr.marks_to_tags(encoded[1], "close")))
        else:
            columns = [(tag,) for tag in encoded]
        for tok, tags in zip(sentence.tokens, columns):
            out.append(" ".join((tok.word, tok.pos) + tuple(tags)) + "\n")
        out.append("\n")
    return "".join(out)


_TREE_FIELD = re.compile(r"^((?:\([^()*\s]+)*)\*(\)*)$")
_TREE_OPEN = re.compile(r"\(([^()*\s]+)")


def parse_nested_file(text: str) -> Dataset:
    """Parse the nested bracket format; spans of all depths are kept."""
    sentences = []
    for block in _blocks(text.splitlines()):
        tokens, spans, stack = [], [], []
        for index, (lineno, fields) in enumerate(block):
            if len(fields) != 3:
                raise CorpusFormatError(f"expected 3 fields, found {len(fields)}", lineno)
            word, pos, tree = fields
            match = _TREE_FIELD.match(tree)
            if not match:
                raise CorpusFormatError(f"malformed bracket field {tree!r}", lineno, tree)
            tokens.append(Token(word, pos))
            for label in _TREE_OPEN.findall(match.group(1)):
                stack.append((index, label))
            for _ in match.group(2):
                if not stack:
                    raise CorpusFormatError("unbalanced ')'", lineno, tree)
                begin, label = stack.pop()
                spans.append(ChunkSpan(begin, index, label))
        if stack:
            raise CorpusFormatError("unclosed '(' at end of sentence", block[-1][0])
        sentences.append(Sentence(tokens, spans))
    return Dataset(sentences)


def write_nested_file(data: Dataset) -> str:
    """Write properly nested spans in the nested bracket format."""
    out = []
    for sentence in data:
        n = len(sentence)
        opens = [[] for _ in range(n)]
        closes = [0] * n
        # outer spans open first: sort by begin, then longer first
        for span in sorted(sentence.spans, key=lambda s: (s.begin, -s.end)):
            opens[span.begin].append(span.label)
            closes[span.end] += 1
        for t, tok in enumerate(sentence.tokens):
            tree = "".join("(" + label for label in opens[t]) + "*" + ")" * closes[t]
            out.append(f"{tok.word} {tok.pos} {tree}\n")
        out.append("\n")
    return "".join(out)


def read_column_file(path, scheme="IOB1") -> Dataset:
    with open(path, encoding="utf-8") as handle:
        return parse_column_file(handle.read(), scheme)


def read_nested_file(path) -> Dataset:
    with open(path, encoding="utf-8") as handle:
        return parse_nested_file(handle.read())


def split_folds(data: Dataset, k: int) -> list:
    """Split into ``k`` consecutive blocks of sentences for cross-validation.

    The first ``len(data) % k`` blocks get one extra sentence. Returns a
    list of ``(train, test)`` pairs where fold ``i`` tests on block ``i``.
    """
    n = len(data)
    if k < 2:
        raise ValueError(f"need at least 2 folds, got {k}")
    if k > n:
        raise ValueError(f"cannot split {n} sentences into {k} folds")
    size, extra = divmod(n, k)
    bounds = []
    start = 0
    for i in range(k):
        stop = start + size + (1 if i < extra else 0)
        bounds.append((start, stop))
        start = stop
    sents = data.sentences
    return [
        (Dataset(sents[:a] + sents[b:]), Dataset(sents[a:b]))
        for a, b in bounds
    ]


def flatten(per_sentence: Sequence[Sequence]) -> list:
    return [item for seq in per_sentence for item in seq]
