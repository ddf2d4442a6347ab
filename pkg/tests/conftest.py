"""Session fixtures: JIT warmup and shared trained models."""

from __future__ import annotations

import pytest

import helpers
from ngramvec.config import TrainConfig
from ngramvec.trainer import train


@pytest.fixture(scope="session")
def kernel_warm(tmp_path_factory):
    """Compile the training kernels once so timed tests measure steady state."""
    path = tmp_path_factory.mktemp("warm") / "warm.txt"
    path.write_text("aa bb aa bb aa bb aa bb\n" * 40)
    cfg = TrainConfig(dim=4, bucket=64, min_count=1, subsample_t=1.0,
                      epochs=1, threads=1, seed=0)
    return train(path, cfg)


@pytest.fixture(scope="session")
def stem_corpus(tmp_path_factory):
    """The 20-stem x 5-suffix synthetic corpus (~1e5 tokens)."""
    path = tmp_path_factory.mktemp("stem") / "corpus.txt"
    return helpers.make_stem_corpus(path, seed=0)
