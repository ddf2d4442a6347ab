"""Shared fixtures-in-spirit: hand-built models and synthetic corpora."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ngramvec.config import TrainConfig
from ngramvec.corpus import Dictionary
from ngramvec.trainer import EmbeddingModel

SMALL_CFG = TrainConfig(dim=4, n_min=3, n_max=3, bucket=64, min_count=1,
                        negatives=2, max_window=2, subsample_t=1.0,
                        lr0=0.05, epochs=1, threads=1, seed=0)


def make_model(counts: dict[str, int], cfg: TrainConfig = SMALL_CFG,
               fill: float = 0.0) -> EmbeddingModel:
    """Model with hand-settable matrices (constant-filled, default zero)."""
    dictionary = Dictionary.from_counts(counts, cfg.min_count,
                                        subsample_t=cfg.subsample_t,
                                        neg_table_size=1000)
    shape_in = (len(dictionary) + cfg.bucket, cfg.dim)
    model = EmbeddingModel(
        input=np.full(shape_in, fill, dtype=np.float32),
        output=np.full((len(dictionary), cfg.dim), fill, dtype=np.float32),
        dictionary=dictionary,
        cfg=cfg,
    )
    return model


STEM_CFG = TrainConfig(dim=30, n_min=3, n_max=6, bucket=50_000, min_count=5,
                       negatives=5, max_window=5, subsample_t=1.0,
                       lr0=0.05, epochs=5, threads=1, seed=0)

_CONSONANTS = "bcdfglmnprstvz"
_VOWELS = "aeiou"
TRAIN_SUFFIXES = ("ing", "ed", "er", "est", "ly")
HELD_OUT_SUFFIX = "ness"


@dataclass
class StemCorpus:
    """A corpus of 20 stem families, each family co-occurring only with itself."""

    path: str
    stems: list[str]
    words_by_stem: dict[str, list[str]] = field(default_factory=dict)
    held_out_by_stem: dict[str, str] = field(default_factory=dict)

    @property
    def all_words(self) -> list[str]:
        return [w for stem in self.stems for w in self.words_by_stem[stem]]


def _make_stems(rng: np.random.Generator, n: int) -> list[str]:
    stems: list[str] = []
    seen = set()
    while len(stems) < n:
        stem = "".join(
            rng.choice(list(_CONSONANTS)) if i % 2 == 0
            else rng.choice(list(_VOWELS))
            for i in range(5))
        if stem not in seen:
            seen.add(stem)
            stems.append(stem)
    return stems


def make_stem_corpus(path, seed: int = 0, n_stems: int = 20,
                     n_sentences: int = 10_000,
                     sentence_len: int = 10) -> StemCorpus:
    """Write a synthetic corpus with stem-conditioned co-occurrence.

    Every sentence draws all its words from one stem family (stem + one of
    five suffixes), so words sharing a stem co-occur while words from
    different stems never do. One inflection per stem is held out entirely.
    """
    rng = np.random.default_rng(seed)
    stems = _make_stems(rng, n_stems)
    corpus = StemCorpus(path=str(path), stems=stems)
    for stem in stems:
        corpus.words_by_stem[stem] = [stem + s for s in TRAIN_SUFFIXES]
        corpus.held_out_by_stem[stem] = stem + HELD_OUT_SUFFIX
    with open(path, "w", encoding="utf-8") as f:
        for _ in range(n_sentences):
            family = corpus.words_by_stem[stems[rng.integers(n_stems)]]
            picks = rng.integers(0, len(family), size=sentence_len)
            f.write(" ".join(family[i] for i in picks) + "\n")
    return corpus


def similarity_pairs(corpus: StemCorpus, with_held_out: bool,
                     seed: int = 1) -> list[tuple[str, str, float]]:
    """Build (word1, word2, human score) triples from the stem families.

    Same-stem pairs get high scores, cross-stem pairs low ones, with tiny
    deterministic jitter so human ranks are unambiguous. With held-out
    words, every stem contributes one OOV/same-stem and one OOV/cross-stem
    pair on top of the in-vocabulary pairs.
    """
    rng = np.random.default_rng(seed)
    stems = corpus.stems
    pairs: list[tuple[str, str, float]] = []
    jitter = 0.0

    def add(w1: str, w2: str, base: float) -> None:
        nonlocal jitter
        pairs.append((w1, w2, base - jitter))
        jitter += 1e-3

    for i, stem in enumerate(stems):
        family = corpus.words_by_stem[stem]
        add(family[0], family[1], 9.0)
        add(family[2], family[3], 9.0)
        other = stems[(i + 1 + int(rng.integers(len(stems) - 1))) % len(stems)]
        if other == stem:
            other = stems[(i + 1) % len(stems)]
        add(family[0], corpus.words_by_stem[other][int(rng.integers(5))], 1.0)
        add(family[4], corpus.words_by_stem[other][int(rng.integers(5))], 1.0)
    if with_held_out:
        for i, stem in enumerate(stems):
            oov = corpus.held_out_by_stem[stem]
            add(oov, corpus.words_by_stem[stem][0], 9.5)
            other = stems[(i + 7) % len(stems)]
            add(oov, corpus.words_by_stem[other][1], 0.5)
    return pairs


def write_similarity_file(path, pairs: list[tuple[str, str, float]]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write("# word1 word2 human_score\n")
        for w1, w2, score in pairs:
            f.write(f"{w1} {w2} {score}\n")
