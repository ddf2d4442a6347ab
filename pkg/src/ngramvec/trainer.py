"""Skipgram training with negative sampling over subword row sums."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np

from . import _hogwild
from .config import TrainConfig
from .corpus import Dictionary, EOS, build_dictionary, tokenize_file
from .subword import SubwordIndex, build_row_table

LR_FLOOR_FRACTION = _hogwild.LR_FLOOR_FRACTION


@dataclass
class TrainProgress:
    """Counters exposed after (or during) training."""

    tokens_processed: int = 0
    current_lr: float = 0.0
    running_loss: float = 0.0
    epoch_losses: list[float] = field(default_factory=list)


@dataclass
class EmbeddingModel:
    """Input rows (words then n-gram buckets) and per-word output rows.

    input has W + bucket rows of dimension d; rows 0..W-1 belong to the
    dictionary words, the rest to hashed n-grams. output has one row per
    dictionary word. Both are float32 and immutable once training returns.
    """

    input: np.ndarray
    output: np.ndarray
    dictionary: Dictionary
    cfg: TrainConfig
    progress: TrainProgress | None = None

    @property
    def vocab_size(self) -> int:
        return len(self.dictionary)

    @property
    def dim(self) -> int:
        return int(self.input.shape[1])


def logistic_loss(x):
    """log(1 + e^-x), elementwise, stable for |x| well past 1e3."""
    x = np.asarray(x, dtype=np.float64)
    out = np.maximum(-x, 0.0) + np.log1p(np.exp(-np.abs(x)))
    return out if out.ndim else float(out)


def lr_schedule(tokens_processed: int, total_tokens: int, epochs: int,
                lr0: float) -> float:
    """Linear decay lr0 * (1 - t / (T * P)) with a small floor."""
    lr = lr0 * (1.0 - tokens_processed / (total_tokens * epochs))
    return max(lr, lr0 * LR_FLOOR_FRACTION)


def _as_rows(target) -> np.ndarray:
    if isinstance(target, SubwordIndex):
        return target.rows
    return np.ascontiguousarray(np.asarray(target, dtype=np.int32))


def score(target, context: int, model: EmbeddingModel) -> float:
    """Dot product of the summed target rows with the context output row."""
    rows = _as_rows(target)
    if not 0 <= context < model.vocab_size:
        raise ValueError(f"context id {context} outside vocabulary")
    hidden = model.input[rows].astype(np.float64).sum(axis=0)
    return float(hidden @ model.output[context].astype(np.float64))


def step(target, context: int, negatives, lr: float,
         model: EmbeddingModel) -> float:
    """Apply one SGD update in place and return the example loss before it.

    `target` is a SubwordIndex or a raw sequence of input rows; `negatives`
    must not contain the context word.
    """
    rows = _as_rows(target)
    negs = np.ascontiguousarray(np.asarray(negatives, dtype=np.int32))
    if lr <= 0.0:
        raise ValueError(f"lr must be positive, got {lr}")
    if not 0 <= context < model.vocab_size:
        raise ValueError(f"context id {context} outside vocabulary")
    if (negs == context).any():
        raise ValueError("negatives must exclude the context word")
    dim = model.dim
    hidden = np.empty(dim, dtype=np.float64)
    grad = np.empty(dim, dtype=np.float64)
    coefs = np.empty(max(len(negs), 1), dtype=np.float64)
    return float(_hogwild.step_kernel(model.input, model.output, rows,
                                      np.int64(context), negs, float(lr),
                                      hidden, grad, coefs))


def encode_corpus(path, dictionary: Dictionary) -> np.ndarray:
    """Map a corpus file to dictionary ids; -1 marks sentence boundaries.

    Out-of-vocabulary tokens are dropped, so the number of non-negative
    entries equals dictionary.total_tokens when the same file built the
    dictionary.
    """
    word2id = dictionary.word2id
    ids = [word2id[tok] if tok != EOS else -1
           for tok in tokenize_file(path) if tok == EOS or tok in word2id]
    return np.asarray(ids, dtype=np.int32)


def _init_matrices(cfg: TrainConfig, vocab_size: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(cfg.seed)
    inp = rng.random((vocab_size + cfg.bucket, cfg.dim), dtype=np.float32)
    inp *= np.float32(2.0 / cfg.dim)
    inp -= np.float32(1.0 / cfg.dim)
    out = np.zeros((vocab_size, cfg.dim), dtype=np.float32)
    return inp, out


def train(corpus_path, cfg: TrainConfig) -> EmbeddingModel:
    """Train a model on a whitespace-tokenized UTF-8 text file.

    Workers process distinct contiguous slices of the encoded corpus and
    update the shared matrices without locks. With threads=1 and a fixed
    seed the result is bit-reproducible.
    """
    cfg = cfg.validate()
    dictionary = build_dictionary(tokenize_file(corpus_path), cfg.min_count,
                                  subsample_t=cfg.subsample_t)
    if len(dictionary) < 2:
        raise ValueError("training needs a vocabulary of at least two words "
                         "for negative sampling")
    tokens = encode_corpus(corpus_path, dictionary)
    indptr, indices = build_row_table(dictionary, cfg)
    inp, out = _init_matrices(cfg, len(dictionary))

    n_workers = cfg.threads
    bounds = np.linspace(0, len(tokens), n_workers + 1).astype(np.int64)
    token_counter = np.zeros(1, dtype=np.int64)
    epoch_loss_sum = np.zeros((n_workers, cfg.epochs), dtype=np.float64)
    epoch_loss_count = np.zeros((n_workers, cfg.epochs), dtype=np.float64)
    ema_out = np.full(n_workers, -1.0, dtype=np.float64)
    schedule_total = float(dictionary.total_tokens) * cfg.epochs

    def run(worker_id: int) -> None:
        _hogwild.train_worker(
            inp, out, indptr, indices, tokens,
            int(bounds[worker_id]), int(bounds[worker_id + 1]),
            dictionary.discard_prob, dictionary.neg_table,
            cfg.negatives, cfg.max_window, cfg.lr0, schedule_total,
            cfg.epochs, token_counter, epoch_loss_sum, epoch_loss_count,
            ema_out, worker_id, np.uint64(cfg.seed))

    if n_workers == 1:
        run(0)
    else:
        threads = [threading.Thread(target=run, args=(w,), daemon=True)
                   for w in range(n_workers)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()

    sums = epoch_loss_sum.sum(axis=0)
    counts = epoch_loss_count.sum(axis=0)
    epoch_losses = [float(s / c) if c > 0 else float("nan")
                    for s, c in zip(sums, counts)]
    active = ema_out[ema_out >= 0.0]
    progress = TrainProgress(
        tokens_processed=int(token_counter[0]),
        current_lr=lr_schedule(int(token_counter[0]),
                               dictionary.total_tokens, cfg.epochs, cfg.lr0),
        running_loss=float(active.mean()) if len(active) else 0.0,
        epoch_losses=epoch_losses,
    )
    return EmbeddingModel(input=inp, output=out, dictionary=dictionary,
                          cfg=cfg, progress=progress)
