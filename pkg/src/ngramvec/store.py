"""Model persistence: binary round-trip files and word2vec-style text export."""

from __future__ import annotations

import struct

import numpy as np

from .config import TrainConfig
from .corpus import Dictionary
from .evaluate import composed_vectors
from .trainer import EmbeddingModel

MAGIC = b"NGRAMVEC"
VERSION = 1

# magic, version, then the full config: dim, n_min, n_max, bucket, min_count,
# negatives, max_window, subsample_t, lr0, epochs, threads, seed, then W.
_HEADER = struct.Struct("<8sI IIIQII I dd I I Q Q")
_WORD_PREFIX = struct.Struct("<IQ")  # utf-8 byte length, count


class ModelFormatError(ValueError):
    """Raised for unreadable, truncated, or mismatched model files."""


def save(model: EmbeddingModel, path) -> None:
    """Write the dictionary, config, and both matrices (little-endian f32)."""
    cfg = model.cfg
    dictionary = model.dictionary
    try:
        with open(path, "wb") as f:
            f.write(_HEADER.pack(
                MAGIC, VERSION, cfg.dim, cfg.n_min, cfg.n_max, cfg.bucket,
                cfg.min_count, cfg.negatives, cfg.max_window, cfg.subsample_t,
                cfg.lr0, cfg.epochs, cfg.threads, cfg.seed, len(dictionary)))
            for word, count in zip(dictionary.words, dictionary.counts):
                raw = word.encode("utf-8")
                f.write(_WORD_PREFIX.pack(len(raw), int(count)))
                f.write(raw)
            f.write(np.ascontiguousarray(model.input, dtype="<f4").tobytes())
            f.write(np.ascontiguousarray(model.output, dtype="<f4").tobytes())
    except OSError as e:
        raise OSError(f"cannot save model to {path}: {e}") from e


def _read_exact(f, n: int, path, what: str) -> bytes:
    data = f.read(n)
    if len(data) != n:
        raise ModelFormatError(f"{path}: truncated model file while reading {what}")
    return data


def load(path) -> EmbeddingModel:
    """Reload a saved model; matrices and vocabulary order are bit-exact."""
    try:
        f = open(path, "rb")
    except OSError as e:
        raise OSError(f"cannot load model from {path}: {e}") from e
    with f:
        header = _read_exact(f, _HEADER.size, path, "header")
        (magic, version, dim, n_min, n_max, bucket, min_count, negatives,
         max_window, subsample_t, lr0, epochs, threads, seed,
         vocab_size) = _HEADER.unpack(header)
        if magic != MAGIC:
            raise ModelFormatError(f"{path}: not a model file (bad magic)")
        if version != VERSION:
            raise ModelFormatError(f"{path}: unsupported model version "
                                   f"{version}, expected {VERSION}")
        cfg = TrainConfig(dim=dim, n_min=n_min, n_max=n_max, bucket=bucket,
                          min_count=min_count, negatives=negatives,
                          max_window=max_window, subsample_t=subsample_t,
                          lr0=lr0, epochs=epochs, threads=threads,
                          seed=seed).validate()
        words: list[str] = []
        counts: list[int] = []
        for _ in range(vocab_size):
            length, count = _WORD_PREFIX.unpack(
                _read_exact(f, _WORD_PREFIX.size, path, "vocabulary"))
            words.append(_read_exact(f, length, path, "vocabulary")
                         .decode("utf-8"))
            counts.append(count)
        dictionary = Dictionary(words, counts, subsample_t=cfg.subsample_t)
        n_input = (vocab_size + cfg.bucket) * cfg.dim
        n_output = vocab_size * cfg.dim
        inp = np.frombuffer(_read_exact(f, 4 * n_input, path, "input matrix"),
                            dtype="<f4").reshape(vocab_size + cfg.bucket, cfg.dim)
        out = np.frombuffer(_read_exact(f, 4 * n_output, path, "output matrix"),
                            dtype="<f4").reshape(vocab_size, cfg.dim)
        if f.read(1):
            raise ModelFormatError(f"{path}: trailing bytes after matrices")
    return EmbeddingModel(input=inp.copy(), output=out.copy(),
                          dictionary=dictionary, cfg=cfg)


def export_text(model: EmbeddingModel, path) -> None:
    """Write "W d" then one "word v1 .. vd" line per composed word vector."""
    vectors = composed_vectors(model)
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(f"{model.vocab_size} {model.dim}\n")
            for word, vec in zip(model.dictionary.words, vectors):
                f.write(word + " " + " ".join(f"{v:.6f}" for v in vec) + "\n")
    except OSError as e:
        raise OSError(f"cannot export vectors to {path}: {e}") from e
