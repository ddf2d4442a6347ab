"""Corpus streaming, dictionary construction, and sampling distributions."""

from __future__ import annotations

import io
from collections import Counter
from typing import Iterable, Iterator

import numpy as np

# Sentence boundary marker yielded by tokenize(). A token is a maximal run of
# non-whitespace characters, so "\n" can never collide with a real token.
EOS = "\n"

NEG_TABLE_SIZE = 10_000_000


def tokenize(source) -> Iterator[str]:
    """Yield whitespace-delimited tokens; each newline additionally yields EOS.

    `source` may be a text or binary file object, a str, or bytes. Invalid
    UTF-8 byte sequences are replaced, never fatal.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    elif isinstance(source, (bytes, bytearray)):
        source = io.StringIO(source.decode("utf-8", errors="replace"))
    elif isinstance(source, io.RawIOBase) or isinstance(source, io.BufferedIOBase) or (
        hasattr(source, "read") and "b" in getattr(source, "mode", "")
    ):
        source = io.TextIOWrapper(source, encoding="utf-8", errors="replace")
    for line in source:
        yield from line.split()
        if line.endswith("\n"):
            yield EOS


def tokenize_file(path) -> Iterator[str]:
    """Stream tokens (and EOS markers) from a UTF-8 text file."""
    with open(path, encoding="utf-8", errors="replace") as f:
        yield from tokenize(f)


def _build_neg_table(counts: np.ndarray, table_size: int) -> np.ndarray:
    """Fill a sampling table with word ids proportionally to sqrt(count).

    Every word receives at least one slot so that rejection re-draws always
    terminate for vocabularies of two or more words.
    """
    n_words = len(counts)
    if n_words > table_size:
        raise ValueError(f"negative-sampling table size {table_size} is smaller "
                         f"than the vocabulary ({n_words} words)")
    weights = np.sqrt(counts.astype(np.float64))
    bounds = np.rint(np.cumsum(weights / weights.sum()) * table_size).astype(np.int64)
    sizes = np.diff(bounds, prepend=0)
    missing = sizes == 0
    if missing.any():
        sizes[missing] = 1
        surplus = int(missing.sum())
        for i in np.argsort(-sizes)[:surplus]:
            sizes[i] -= 1
    return np.repeat(np.arange(n_words, dtype=np.int32), sizes)


class Dictionary:
    """Immutable word<->id mapping with subsampling and negative-sampling tables.

    Word ids are dense (0..W-1) in the order given; every retained word has
    count >= the chosen cutoff. discard_prob[w] = max(0, 1 - sqrt(t/f(w)))
    where f(w) = count(w)/total_tokens. neg_table samples ids with
    probability proportional to sqrt(count). Safe to share read-only across
    training workers; random state always comes from the caller.
    """

    __slots__ = ("words", "counts", "word2id", "total_tokens", "subsample_t",
                 "discard_prob", "neg_table")

    def __init__(self, words, counts, *, subsample_t: float = 1e-4,
                 neg_table_size: int = NEG_TABLE_SIZE):
        self.words: list[str] = list(words)
        self.counts = np.asarray(counts, dtype=np.int64)
        if len(self.words) == 0:
            raise ValueError("dictionary must contain at least one word")
        if len(self.words) != len(self.counts):
            raise ValueError("words and counts must have equal length")
        if (self.counts < 1).any():
            raise ValueError("all word counts must be positive")
        self.word2id = {w: i for i, w in enumerate(self.words)}
        if len(self.word2id) != len(self.words):
            raise ValueError("duplicate surface forms in dictionary")
        self.total_tokens = int(self.counts.sum())
        self.subsample_t = float(subsample_t)
        freq = self.counts / self.total_tokens
        self.discard_prob = np.maximum(0.0, 1.0 - np.sqrt(self.subsample_t / freq))
        self.neg_table = _build_neg_table(self.counts, neg_table_size)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.word2id

    def id(self, word: str) -> int | None:
        return self.word2id.get(word)

    def keep_token(self, word_id: int, rng: np.random.Generator) -> bool:
        """Subsampling decision for one token occurrence.

        Consumes one draw from `rng` only when the word can be discarded
        (discard probability > 0).
        """
        p = self.discard_prob[word_id]
        if p <= 0.0:
            return True
        return bool(rng.random() >= p)

    def sample_negative(self, rng: np.random.Generator,
                        forbidden: int | None = None) -> int:
        """Draw a word id from the sqrt-frequency table, re-drawing on `forbidden`."""
        if forbidden is not None and len(self.words) < 2:
            raise ValueError("need at least two words to exclude one from sampling")
        table = self.neg_table
        n = len(table)
        while True:
            wid = int(table[rng.integers(0, n)])
            if wid != forbidden:
                return wid

    @classmethod
    def from_counts(cls, counts: dict[str, int], min_count: int = 1,
                    **kwargs) -> "Dictionary":
        """Build from a word->count mapping, most frequent first (stable ties)."""
        items = [(w, c) for w, c in counts.items() if c >= min_count]
        if not items:
            raise ValueError(f"vocabulary is empty after min_count={min_count} cutoff")
        items.sort(key=lambda wc: -wc[1])
        return cls([w for w, _ in items], [c for _, c in items], **kwargs)


def build_dictionary(tokens: Iterable[str], min_count: int, *,
                     subsample_t: float = 1e-4,
                     neg_table_size: int = NEG_TABLE_SIZE) -> Dictionary:
    """Count a finite token stream and keep words occurring >= min_count times.

    EOS markers are boundaries, not words, and are never counted.
    Deterministic: identical streams produce identical dictionaries.
    """
    counts = Counter(tok for tok in tokens if tok != EOS)
    return Dictionary.from_counts(counts, min_count, subsample_t=subsample_t,
                                  neg_table_size=neg_table_size)
