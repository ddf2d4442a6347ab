"""Character n-gram extraction and FNV-1a bucket hashing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import TrainConfig
from .corpus import Dictionary

BOW = "<"
EOW = ">"

_FNV_OFFSET = 0x811C9DC5
_FNV_PRIME = 0x01000193
_U32 = 0xFFFFFFFF


def extract_ngrams(word: str, n_min: int, n_max: int) -> list[str]:
    """All distinct character n-grams of the boundary-marked word.

    The word is wrapped as "<word>" and every substring of length n_min..n_max
    is taken over Unicode scalar values, in positional order (left-to-right,
    then by length), except the full wrapped token: that one is represented by
    the word's own embedding row, never as an n-gram. Repeated substrings
    contribute once.
    """
    if not word:
        raise ValueError("word must be non-empty")
    if BOW in word or EOW in word:
        raise ValueError(f"word must not contain {BOW!r} or {EOW!r}: {word!r}")
    if any(ch.isspace() for ch in word):
        raise ValueError(f"word must not contain whitespace: {word!r}")
    padded = BOW + word + EOW
    total = len(padded)
    seen: set[str] = set()
    out: list[str] = []
    for start in range(total):
        for n in range(n_min, n_max + 1):
            end = start + n
            if end > total:
                break
            if n == total:  # full wrapped token, handled by the word row
                continue
            gram = padded[start:end]
            if gram not in seen:
                seen.add(gram)
                out.append(gram)
    return out


def fnv1a(data) -> int:
    """32-bit FNV-1a hash of a byte sequence (str input is UTF-8 encoded)."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & _U32
    return h


@dataclass(frozen=True)
class SubwordIndex:
    """Embedding rows representing one word.

    For an in-vocabulary word the rows are its dictionary row plus one hashed
    row per distinct n-gram; for an out-of-vocabulary word only the n-gram
    rows exist. Distinct n-grams may share a row (bucket collision).
    """

    word: str
    word_id: int | None
    ngrams: tuple[str, ...]
    ngram_rows: tuple[int, ...]

    @property
    def rows(self) -> np.ndarray:
        """All input-matrix rows, word row first when present."""
        head = [] if self.word_id is None else [self.word_id]
        return np.asarray(head + list(self.ngram_rows), dtype=np.int32)


def ngram_row(gram: str, vocab_size: int, bucket: int) -> int:
    return vocab_size + fnv1a(gram.encode("utf-8")) % bucket


def subword_index(word: str, dictionary: Dictionary,
                  cfg: TrainConfig) -> SubwordIndex:
    """Map a word to its embedding rows under the model's n-gram range.

    Raises ValueError for malformed words (boundary characters, whitespace)
    and for out-of-vocabulary words that yield no n-grams at all, since those
    have no representation.
    """
    word_id = dictionary.id(word)
    ngrams = extract_ngrams(word, cfg.n_min, cfg.n_max)
    if word_id is None and not ngrams:
        raise ValueError(f"out-of-vocabulary word {word!r} yields no n-grams "
                         f"in range [{cfg.n_min}, {cfg.n_max}]")
    vocab_size = len(dictionary)
    rows = tuple(ngram_row(g, vocab_size, cfg.bucket) for g in ngrams)
    return SubwordIndex(word=word, word_id=word_id, ngrams=tuple(ngrams),
                        ngram_rows=rows)


def build_row_table(dictionary: Dictionary,
                    cfg: TrainConfig) -> tuple[np.ndarray, np.ndarray]:
    """Precompute every dictionary word's rows as a CSR-style table.

    Returns (indptr, indices): word w owns indices[indptr[w]:indptr[w+1]],
    word row first. Words that cannot carry n-grams (boundary characters in
    the surface form) fall back to their word row alone.
    """
    indptr = np.zeros(len(dictionary) + 1, dtype=np.int64)
    chunks: list[np.ndarray] = []
    for wid, word in enumerate(dictionary.words):
        try:
            rows = subword_index(word, dictionary, cfg).rows
        except ValueError:
            rows = np.asarray([wid], dtype=np.int32)
        chunks.append(rows)
        indptr[wid + 1] = indptr[wid] + len(rows)
    return indptr, np.concatenate(chunks)
