"""Numba kernels for the lock-free training loop.

All workers mutate the shared matrices without locks; lost or torn updates
are tolerated by design. Each worker owns its own splitmix64 stream, so a
single worker with a fixed seed is bit-reproducible.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

MAX_LINE = 1024           # survivor tokens per sentence before a forced flush
LR_FLOOR_FRACTION = 1e-5  # step size never drops below lr0 * this
EMA_ALPHA = 1e-3          # smoothing factor for the running per-example loss

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0  # 2^-53


@njit(inline="always")
def _next_u64(state):
    """splitmix64 step: returns (advanced state, 64 random bits)."""
    state = state + _GAMMA
    z = state
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    z = z ^ (z >> _S31)
    return state, z


@njit(inline="always")
def _sigmoid(x):
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


@njit(inline="always")
def _logloss(x):
    """log(1 + e^-x), stable for |x| well past 1e3."""
    if x >= 0.0:
        return math.log1p(math.exp(-x))
    return -x + math.log1p(math.exp(x))


@njit(nogil=True, cache=True)
def step_kernel(inp, out, rows, context, negatives, lr, hidden, grad, coefs):
    """One SGD update for a (target rows, context, negatives) example.

    All scores and gradient coefficients are computed from the pre-update
    matrices, then applied: the context/negative output rows move by
    -lr * coef * hidden, and every row in `rows` receives the same
    accumulated -lr * grad (the score is linear in their sum). Returns the
    example loss before the update.
    """
    dim = inp.shape[1]
    for k in range(dim):
        hidden[k] = 0.0
        grad[k] = 0.0
    for i in range(rows.shape[0]):
        r = rows[i]
        for k in range(dim):
            hidden[k] += inp[r, k]

    s = 0.0
    for k in range(dim):
        s += hidden[k] * out[context, k]
    g_pos = _sigmoid(s) - 1.0
    loss = _logloss(s)
    for k in range(dim):
        grad[k] += g_pos * out[context, k]

    for j in range(negatives.shape[0]):
        n = negatives[j]
        sn = 0.0
        for k in range(dim):
            sn += hidden[k] * out[n, k]
        g_neg = _sigmoid(sn)
        coefs[j] = g_neg
        loss += _logloss(-sn)
        for k in range(dim):
            grad[k] += g_neg * out[n, k]

    for k in range(dim):
        out[context, k] -= lr * g_pos * hidden[k]
    for j in range(negatives.shape[0]):
        n = negatives[j]
        for k in range(dim):
            out[n, k] -= lr * coefs[j] * hidden[k]
    for i in range(rows.shape[0]):
        r = rows[i]
        for k in range(dim):
            inp[r, k] -= lr * grad[k]
    return loss


@njit(nogil=True, cache=True)
def _train_line(inp, out, indptr, indices, line, nline, neg_table, lr, state,
                hidden, grad, coefs, negs, max_window, ema):
    """Train every (position, in-window context) pair of one survivor line."""
    table_size = np.uint64(neg_table.shape[0])
    n_neg = negs.shape[0]
    loss_sum = 0.0
    n_examples = 0
    for pos in range(nline):
        state, z = _next_u64(state)
        window = 1 + np.int64(z % np.uint64(max_window))
        target = line[pos]
        rows = indices[indptr[target]:indptr[target + 1]]
        lo = pos - window
        if lo < 0:
            lo = 0
        hi = pos + window
        if hi > nline - 1:
            hi = nline - 1
        for cpos in range(lo, hi + 1):
            if cpos == pos:
                continue
            context = np.int64(line[cpos])
            for j in range(n_neg):
                while True:
                    state, z = _next_u64(state)
                    cand = neg_table[np.int64(z % table_size)]
                    if cand != context:
                        break
                negs[j] = cand
            loss = step_kernel(inp, out, rows, context, negs, lr,
                               hidden, grad, coefs)
            if ema < 0.0:
                ema = loss
            else:
                ema += EMA_ALPHA * (loss - ema)
            loss_sum += loss
            n_examples += 1
    return state, ema, loss_sum, n_examples


@njit(nogil=True, cache=True)
def train_worker(inp, out, indptr, indices, tokens, start, end,
                 discard_prob, neg_table, n_negatives, max_window,
                 lr0, schedule_total, epochs,
                 token_counter, epoch_loss_sum, epoch_loss_count,
                 ema_out, worker_id, seed):
    """Run `epochs` passes over tokens[start:end] against the shared matrices.

    tokens holds dictionary ids with -1 as sentence boundary. token_counter
    is shared across workers and updated without synchronization; the step
    size follows lr0 * (1 - t / schedule_total), floored.
    """
    dim = inp.shape[1]
    hidden = np.zeros(dim, dtype=np.float64)
    grad = np.zeros(dim, dtype=np.float64)
    coefs = np.zeros(n_negatives, dtype=np.float64)
    negs = np.zeros(n_negatives, dtype=np.int32)
    line = np.zeros(MAX_LINE, dtype=np.int32)

    state = np.uint64(seed)
    z = np.uint64(0)
    for _ in range(worker_id + 1):
        state, z = _next_u64(state)
    state = z

    lr_floor = lr0 * LR_FLOOR_FRACTION
    lr = lr0
    ema = -1.0
    for ep in range(epochs):
        nline = 0
        for i in range(start, end + 1):
            w = tokens[i] if i < end else -1  # virtual boundary at slice end
            if w < 0:
                if nline > 0:
                    state, ema, ls, ne = _train_line(
                        inp, out, indptr, indices, line, nline, neg_table,
                        lr, state, hidden, grad, coefs, negs, max_window, ema)
                    epoch_loss_sum[worker_id, ep] += ls
                    epoch_loss_count[worker_id, ep] += ne
                    nline = 0
                continue
            token_counter[0] += 1
            lr = lr0 * (1.0 - token_counter[0] / schedule_total)
            if lr < lr_floor:
                lr = lr_floor
            p = discard_prob[w]
            if p > 0.0:
                state, z = _next_u64(state)
                if (z >> _S11) * _INV53 < p:
                    continue
            line[nline] = w
            nline += 1
            if nline == MAX_LINE:
                state, ema, ls, ne = _train_line(
                    inp, out, indptr, indices, line, nline, neg_table,
                    lr, state, hidden, grad, coefs, negs, max_window, ema)
                epoch_loss_sum[worker_id, ep] += ls
                epoch_loss_count[worker_id, ep] += ne
                nline = 0
    ema_out[worker_id] = ema
