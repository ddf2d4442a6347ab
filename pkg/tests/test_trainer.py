"""Training core: loss, score, SGD step, schedule, and full runs."""

import math

import numpy as np
import pytest

from helpers import SMALL_CFG, make_model
from ngramvec.config import TrainConfig
from ngramvec.trainer import (encode_corpus, logistic_loss, lr_schedule,
                              score, step, train)


def example_loss_oracle(inp, out, rows, context, negatives):
    """The per-example objective, written independently of the kernel."""
    hidden = inp[rows].sum(axis=0)
    loss = np.logaddexp(0.0, -(hidden @ out[context]))
    for n in negatives:
        loss += np.logaddexp(0.0, hidden @ out[n])
    return float(loss)


def finite_difference_grads(inp, out, rows, context, negatives, h=1e-5):
    """Central differences of the oracle loss for every touched row."""
    inp = inp.astype(np.float64).copy()
    out = out.astype(np.float64).copy()
    grads_in, grads_out = {}, {}
    for r in sorted(set(int(r) for r in rows)):
        g = np.zeros(inp.shape[1])
        for k in range(inp.shape[1]):
            orig = inp[r, k]
            inp[r, k] = orig + h
            up = example_loss_oracle(inp, out, rows, context, negatives)
            inp[r, k] = orig - h
            down = example_loss_oracle(inp, out, rows, context, negatives)
            inp[r, k] = orig
            g[k] = (up - down) / (2 * h)
        grads_in[r] = g
    for c in sorted({int(context)} | set(int(n) for n in negatives)):
        g = np.zeros(out.shape[1])
        for k in range(out.shape[1]):
            orig = out[c, k]
            out[c, k] = orig + h
            up = example_loss_oracle(inp, out, rows, context, negatives)
            out[c, k] = orig - h
            down = example_loss_oracle(inp, out, rows, context, negatives)
            out[c, k] = orig
            g[k] = (up - down) / (2 * h)
        grads_out[c] = g
    return grads_in, grads_out


def relative_error(a, b):
    denom = max(np.linalg.norm(a), np.linalg.norm(b), 1e-12)
    return np.linalg.norm(a - b) / denom


def random_instance(rng, dim=10, n_negatives=5, vocab=6, bucket=20):
    cfg = TrainConfig(dim=dim, n_min=3, n_max=4, bucket=bucket, min_count=1,
                      negatives=n_negatives, max_window=2, subsample_t=1.0,
                      lr0=0.05, epochs=1, threads=1, seed=0)
    model = make_model({f"w{i}": 2 for i in range(vocab)}, cfg)
    model.input[:] = rng.normal(0, 0.5, model.input.shape).astype(np.float32)
    model.output[:] = rng.normal(0, 0.5, model.output.shape).astype(np.float32)
    n_rows = int(rng.integers(1, 5))
    rows = rng.integers(0, model.input.shape[0], size=n_rows).astype(np.int32)
    context = int(rng.integers(0, vocab))
    negatives = []
    while len(negatives) < n_negatives:
        n = int(rng.integers(0, vocab))
        if n != context:
            negatives.append(n)
    return model, rows, context, np.asarray(negatives, dtype=np.int32)


class TestLogisticLoss:
    def test_value_at_zero(self):
        assert logistic_loss(0.0) == pytest.approx(math.log(2), abs=1e-12)

    def test_reflection_identity_at_three(self):
        # l(-x) = x + l(x)
        assert logistic_loss(-3.0) == pytest.approx(3.0 + logistic_loss(3.0),
                                                    abs=1e-12)

    def test_extreme_arguments_stay_finite(self):
        v = logistic_loss(700.0)
        assert 0.0 <= v < 1e-300
        assert logistic_loss(-700.0) == pytest.approx(700.0, rel=1e-12)
        assert np.isfinite(logistic_loss(np.array([-1e3, 0.0, 1e3]))).all()

    def test_vectorized(self):
        xs = np.linspace(-5, 5, 11)
        assert logistic_loss(xs) == pytest.approx(np.log1p(np.exp(-xs)))


class TestScore:
    def test_zero_output_row_scores_zero(self):
        model = make_model({"aa": 1, "bb": 1})
        model.input[:] = 0.3
        assert score([0, 5], 1, model) == 0.0

    def test_unit_basis(self):
        model = make_model({"aa": 1, "bb": 1})
        model.input[3, 0] = 1.0
        model.output[0, 0] = 1.0
        assert score([3], 0, model) == pytest.approx(1.0)

    def test_linearity_of_row_sum(self):
        model = make_model({"aa": 1, "bb": 1})
        model.input[3, 0] = 1.0
        model.input[4, 1] = 1.0
        model.output[1, :2] = 1.0
        assert score([3, 4], 1, model) == pytest.approx(2.0)


class TestStep:
    def test_loss_at_zero_output(self, kernel_warm):
        # all scores are exactly 0, so each of the 1 + #neg terms is ln 2
        model = make_model({"aa": 2, "bb": 2, "cc": 2})
        rng = np.random.default_rng(0)
        model.input[:] = rng.normal(0, 0.1, model.input.shape)
        loss = step([0, 4, 5], context=1, negatives=[2, 2, 0], lr=0.01,
                    model=model)
        assert loss == pytest.approx(4 * math.log(2), abs=1e-6)

    def test_rejects_context_in_negatives(self, kernel_warm):
        model = make_model({"aa": 1, "bb": 1})
        with pytest.raises(ValueError, match="exclude the context"):
            step([0], context=1, negatives=[1], lr=0.1, model=model)

    def test_rejects_nonpositive_lr(self, kernel_warm):
        model = make_model({"aa": 1, "bb": 1})
        with pytest.raises(ValueError, match="lr"):
            step([0], context=1, negatives=[0], lr=0.0, model=model)

    def test_gradients_match_finite_differences(self, kernel_warm):
        rng = np.random.default_rng(123)
        for _ in range(25):
            model, rows, context, negatives = random_instance(rng)
            before_in = model.input.copy()
            before_out = model.output.copy()
            loss = step(rows, context, negatives, lr=1.0, model=model)
            assert loss == pytest.approx(
                example_loss_oracle(before_in.astype(np.float64),
                                    before_out.astype(np.float64),
                                    rows, context, negatives), rel=1e-6)
            applied_in = (before_in - model.input).astype(np.float64)
            applied_out = (before_out - model.output).astype(np.float64)
            fd_in, fd_out = finite_difference_grads(
                before_in, before_out, rows, context, negatives)
            for r, g in fd_in.items():
                assert relative_error(applied_in[r], g) < 1e-4
            for c, g in fd_out.items():
                assert relative_error(applied_out[c], g) < 1e-4

    def test_positive_pair_score_increases_from_zero(self, kernel_warm):
        model = make_model({"aa": 1, "bb": 1})
        rng = np.random.default_rng(5)
        model.input[:] = rng.normal(0, 0.2, model.input.shape)
        rows = [0, 3, 7]
        assert score(rows, 1, model) == 0.0
        step(rows, context=1, negatives=[0], lr=0.1, model=model)
        assert score(rows, 1, model) > 0.0

    def test_only_named_rows_change(self, kernel_warm):
        rng = np.random.default_rng(9)
        model, rows, context, negatives = random_instance(rng)
        before_in = model.input.copy()
        before_out = model.output.copy()
        step(rows, context, negatives, lr=0.5, model=model)
        touched_in = set(int(r) for r in rows)
        touched_out = {context} | set(int(n) for n in negatives)
        for r in range(model.input.shape[0]):
            if r not in touched_in:
                assert np.array_equal(model.input[r], before_in[r])
        for c in range(model.output.shape[0]):
            if c not in touched_out:
                assert np.array_equal(model.output[c], before_out[c])

    def test_entries_stay_finite_under_many_steps(self, kernel_warm):
        rng = np.random.default_rng(77)
        model, rows, context, negatives = random_instance(rng)
        for _ in range(500):
            step(rows, context, negatives, lr=0.5, model=model)
        assert np.isfinite(model.input).all()
        assert np.isfinite(model.output).all()


class TestLrSchedule:
    def test_boundary_values(self):
        assert lr_schedule(0, 1000, 5, 0.05) == 0.05
        assert lr_schedule(5000, 1000, 5, 0.05) == pytest.approx(0.05 * 1e-5)

    def test_linear_midpoint(self):
        assert lr_schedule(2500, 1000, 5, 0.05) == pytest.approx(0.025)

    def test_non_increasing(self):
        values = [lr_schedule(t, 1000, 5, 0.05) for t in range(0, 5001, 50)]
        assert all(a >= b for a, b in zip(values, values[1:]))


@pytest.fixture(scope="module")
def cyclic_corpus(tmp_path_factory):
    # 1e4 tokens of "a b a b ...", ten per line
    path = tmp_path_factory.mktemp("cyclic") / "ab.txt"
    with open(path, "w", encoding="utf-8") as f:
        for _ in range(1000):
            f.write(("a b " * 5).strip() + "\n")
    return path


# window 1: on an alternating corpus every positive pair is cross-word, so
# the objective is cleanly satisfiable and the loss must fall
CYCLIC_CFG = TrainConfig(dim=16, n_min=3, n_max=3, bucket=64, min_count=1,
                         negatives=2, max_window=1, subsample_t=1.0,
                         lr0=0.05, epochs=5, threads=1, seed=1)


class TestTrain:
    def test_loss_decreases_on_learnable_corpus(self, cyclic_corpus, kernel_warm):
        model = train(cyclic_corpus, CYCLIC_CFG)
        losses = model.progress.epoch_losses
        assert len(losses) == 5
        assert losses[-1] <= 0.8 * losses[0]

    def test_single_thread_runs_are_bit_identical(self, cyclic_corpus, kernel_warm):
        m1 = train(cyclic_corpus, CYCLIC_CFG)
        m2 = train(cyclic_corpus, CYCLIC_CFG)
        assert np.array_equal(m1.input, m2.input)
        assert np.array_equal(m1.output, m2.output)
        assert m1.dictionary.words == m2.dictionary.words

    def test_progress_invariants(self, cyclic_corpus, kernel_warm):
        model = train(cyclic_corpus, CYCLIC_CFG)
        progress = model.progress
        total = model.dictionary.total_tokens
        assert progress.tokens_processed == total * CYCLIC_CFG.epochs
        assert progress.current_lr == lr_schedule(
            progress.tokens_processed, total, CYCLIC_CFG.epochs, CYCLIC_CFG.lr0)
        assert progress.running_loss >= 0.0

    def test_invalid_epochs_rejected_before_training(self, cyclic_corpus):
        with pytest.raises(ValueError, match="epochs"):
            train(cyclic_corpus, TrainConfig(epochs=0))

    def test_single_word_vocabulary_rejected(self, tmp_path, kernel_warm):
        path = tmp_path / "one.txt"
        path.write_text("x x x x x\n")
        with pytest.raises(ValueError, match="two words"):
            train(path, CYCLIC_CFG)

    def test_matrices_finite_with_multiple_threads(self, cyclic_corpus, kernel_warm):
        model = train(cyclic_corpus, CYCLIC_CFG.with_options(threads=2))
        assert np.isfinite(model.input).all()
        assert np.isfinite(model.output).all()

    def test_encode_corpus_matches_dictionary(self, cyclic_corpus):
        from ngramvec.corpus import build_dictionary, tokenize_file
        d = build_dictionary(tokenize_file(cyclic_corpus), 1, subsample_t=1.0)
        ids = encode_corpus(cyclic_corpus, d)
        assert (ids >= -1).all()
        assert (ids >= 0).sum() == d.total_tokens
        assert (ids == -1).sum() == 1000  # one boundary per line
