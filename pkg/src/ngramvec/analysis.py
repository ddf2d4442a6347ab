"""Qualitative tools: leave-one-out n-gram importance and match matrices."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .evaluate import cosine
from .subword import extract_ngrams, ngram_row, subword_index
from .trainer import EmbeddingModel


@dataclass(frozen=True)
class ImportanceEntry:
    ngram: str
    cosine: float
    degenerate: bool  # leave-one-out vector had zero norm; cosine is 0 by convention


@dataclass(frozen=True)
class ImportanceReport:
    """Per-n-gram importance, most important (lowest cosine) first."""

    word: str
    entries: tuple[ImportanceEntry, ...]


def ngram_importance(word: str, model: EmbeddingModel) -> ImportanceReport:
    """Rank a word's n-grams by how much removing each changes its vector.

    The word vector is the sum over all its rows; for each n-gram g the
    restricted vector omits g's row and the report lists cosine(full,
    restricted) in ascending order (ties by n-gram string). The word's own
    dictionary row is never an omission candidate. The word is lowercased
    to mirror the normalized corpus.
    """
    word = word.lower()
    idx = subword_index(word, model.dictionary, model.cfg)
    if not idx.ngrams:
        raise ValueError(f"{word!r} has no n-grams to omit")
    full = model.input[idx.rows].astype(np.float64).sum(axis=0)
    full_norm = float(np.linalg.norm(full))
    entries = []
    for gram, row in zip(idx.ngrams, idx.ngram_rows):
        rest = full - model.input[row]
        degenerate = full_norm == 0.0 or float(np.linalg.norm(rest)) == 0.0
        entries.append(ImportanceEntry(gram, cosine(full, rest), degenerate))
    entries.sort(key=lambda e: (e.cosine, e.ngram))
    return ImportanceReport(word=word, entries=tuple(entries))


@dataclass(frozen=True)
class MatchMatrix:
    """Pairwise n-gram cosines for two words, axes in positional order."""

    word_a: str
    word_b: str
    row_ngrams: tuple[str, ...]
    col_ngrams: tuple[str, ...]
    values: np.ndarray  # shape (len(row_ngrams), len(col_ngrams)), in [-1, 1]


def match_matrix(word_a: str, word_b: str,
                 model: EmbeddingModel) -> MatchMatrix:
    """Cosine between every n-gram of word_a and every n-gram of word_b.

    Either word may be out of vocabulary; only n-gram rows participate.
    """
    cfg = model.cfg
    vocab_size = model.vocab_size
    word_a, word_b = word_a.lower(), word_b.lower()

    def gram_vectors(word: str) -> tuple[tuple[str, ...], np.ndarray]:
        grams = extract_ngrams(word, cfg.n_min, cfg.n_max)
        rows = [ngram_row(g, vocab_size, cfg.bucket) for g in grams]
        return tuple(grams), model.input[rows].astype(np.float64)

    grams_a, vecs_a = gram_vectors(word_a)
    grams_b, vecs_b = gram_vectors(word_b)

    def unit(m: np.ndarray) -> np.ndarray:
        norms = np.linalg.norm(m, axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        return m / norms

    values = unit(vecs_a) @ unit(vecs_b).T
    return MatchMatrix(word_a=word_a, word_b=word_b, row_ngrams=grams_a,
                       col_ngrams=grams_b, values=values)


def write_csv(matrix: MatchMatrix, path) -> None:
    """Header row/column of n-gram strings, cells with 4 decimal places."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow([""] + list(matrix.col_ngrams))
        for gram, row in zip(matrix.row_ngrams, matrix.values):
            writer.writerow([gram] + [f"{v:.4f}" for v in row])


def write_ppm(matrix: MatchMatrix, path, cell: int = 12) -> None:
    """Binary PPM heat map: red for positive cosine, blue for negative.

    Each matrix entry becomes a cell x cell pixel block; white is 0.
    """
    values = np.clip(matrix.values, -1.0, 1.0)
    n_rows, n_cols = values.shape
    pos = np.maximum(values, 0.0)
    neg = np.maximum(-values, 0.0)
    pixels = np.empty((n_rows, n_cols, 3), dtype=np.float64)
    pixels[..., 0] = 1.0 - neg          # red channel fades for negatives
    pixels[..., 1] = 1.0 - pos - neg    # green fades for both signs
    pixels[..., 2] = 1.0 - pos          # blue channel fades for positives
    img = np.rint(pixels * 255).astype(np.uint8)
    img = np.repeat(np.repeat(img, cell, axis=0), cell, axis=1)
    with open(path, "wb") as f:
        f.write(f"P6\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii"))
        f.write(img.tobytes())
