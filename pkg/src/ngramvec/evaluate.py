"""Word vectors (with OOV composition), benchmarks, and nearest neighbors."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .subword import subword_index
from .trainer import EmbeddingModel


class OovPolicy(enum.Enum):
    """How to represent words missing from the dictionary.

    NULL assigns the zero vector (reported as "sisg-"); NGRAMS composes the
    word from its n-gram rows (reported as "sisg").
    """

    NULL = "null"
    NGRAMS = "ngrams"


@dataclass(frozen=True)
class SimilarityPair:
    word1: str
    word2: str
    score: float


@dataclass(frozen=True)
class AnalogyQuestion:
    a: str
    b: str
    c: str
    d: str
    category: str  # "semantic" or "syntactic"


@dataclass(frozen=True)
class SimilarityResult:
    rho: float
    n_pairs: int
    oov_pairs: int

    @property
    def display(self) -> int:
        """Correlation scaled by 100 and rounded, the usual reporting form."""
        return round(self.rho * 100)


@dataclass(frozen=True)
class AnalogyResult:
    semantic_acc: float | None
    syntactic_acc: float | None
    skipped: int
    semantic_attempted: int = 0
    syntactic_attempted: int = 0


def word_vector(word: str, model: EmbeddingModel,
                policy: OovPolicy = OovPolicy.NGRAMS) -> np.ndarray:
    """Vector for any word: row sum if in vocabulary, composed if not.

    In-vocabulary words sum their word row and n-gram rows. OOV words take
    the mean of their n-gram rows under NGRAMS (same cosine ranking as the
    sum, comparable magnitude) or the zero vector under NULL. Matching is
    case-sensitive; the corpus is expected pre-lowercased.
    """
    dictionary, cfg = model.dictionary, model.cfg
    wid = dictionary.id(word)
    try:
        idx = subword_index(word, dictionary, cfg)
    except ValueError:
        idx = None
    if wid is not None:
        rows = idx.rows if idx is not None else np.asarray([wid], dtype=np.int32)
        return model.input[rows].sum(axis=0)
    if policy is OovPolicy.NULL or idx is None or not idx.ngram_rows:
        return np.zeros(model.dim, dtype=model.input.dtype)
    return model.input[np.asarray(idx.ngram_rows, dtype=np.int32)].mean(axis=0)


def composed_vectors(model: EmbeddingModel) -> np.ndarray:
    """Stack of composed vectors for every dictionary word, id order."""
    return np.stack([word_vector(w, model) for w in model.dictionary.words])


def _unit_rows(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return matrix / norms


def cosine(u, v) -> float:
    """Cosine similarity, 0 by convention when either norm is 0."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(u @ v / (nu * nv))


def _ranks(values: np.ndarray) -> np.ndarray:
    """Fractional ranks starting at 1; ties share their average rank."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.float64)
    sorted_vals = values[order]
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(xs, ys) -> float:
    """Rank correlation: Pearson correlation of fractional ranks."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError("spearman expects two equal-length 1-d sequences")
    if len(xs) < 2:
        raise ValueError("spearman needs at least two observations")
    rx = _ranks(xs) - _ranks(xs).mean()
    ry = _ranks(ys) - _ranks(ys).mean()
    sx = np.sqrt((rx * rx).sum())
    sy = np.sqrt((ry * ry).sum())
    if sx == 0.0 or sy == 0.0:
        raise ValueError("rank correlation is undefined for a constant sequence")
    return float((rx @ ry) / (sx * sy))


class DatasetError(ValueError):
    """Malformed evaluation dataset; the message carries file and line."""


def load_similarity(path) -> list[SimilarityPair]:
    """Parse "word1 word2 score" lines; '#' comments ignored; lowercased."""
    pairs: list[SimilarityPair] = []
    with open(path, encoding="utf-8", errors="replace") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise DatasetError(f"{path}:{lineno}: expected 'word1 word2 "
                                   f"score', got {line!r}")
            try:
                score = float(parts[2])
            except ValueError:
                raise DatasetError(f"{path}:{lineno}: score {parts[2]!r} "
                                   f"is not a number") from None
            pairs.append(SimilarityPair(parts[0].lower(), parts[1].lower(), score))
    if len(pairs) < 2:
        raise DatasetError(f"{path}: need at least two pairs, found {len(pairs)}")
    return pairs


def load_analogy(path) -> list[AnalogyQuestion]:
    """Parse "a b c d" lines under ": section" headers; lowercased.

    Sections whose name contains "gram" are syntactic, the rest semantic.
    """
    questions: list[AnalogyQuestion] = []
    category = "semantic"
    with open(path, encoding="utf-8", errors="replace") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith(":"):
                category = "syntactic" if "gram" in line.lower() else "semantic"
                continue
            parts = line.split()
            if len(parts) != 4:
                raise DatasetError(f"{path}:{lineno}: expected four words, "
                                   f"got {line!r}")
            a, b, c, d = (p.lower() for p in parts)
            questions.append(AnalogyQuestion(a, b, c, d, category))
    if not questions:
        raise DatasetError(f"{path}: no analogy questions found")
    return questions


def eval_similarity(dataset: list[SimilarityPair], model: EmbeddingModel,
                    policy: OovPolicy = OovPolicy.NGRAMS) -> SimilarityResult:
    """Spearman correlation between model cosines and human scores.

    Every pair is retained; OOV words are represented per `policy`, which
    can make both cosines of a pair 0.
    """
    dictionary = model.dictionary
    model_scores = np.empty(len(dataset))
    human_scores = np.empty(len(dataset))
    oov_pairs = 0
    for i, pair in enumerate(dataset):
        if pair.word1 not in dictionary or pair.word2 not in dictionary:
            oov_pairs += 1
        u = word_vector(pair.word1, model, policy)
        v = word_vector(pair.word2, model, policy)
        model_scores[i] = cosine(u, v)
        human_scores[i] = pair.score
    rho = spearman(model_scores, human_scores)
    return SimilarityResult(rho=rho, n_pairs=len(dataset), oov_pairs=oov_pairs)


def eval_analogy(dataset: list[AnalogyQuestion],
                 model: EmbeddingModel) -> AnalogyResult:
    """3CosAdd accuracy split by category; OOV questions are skipped.

    All candidate and query vectors are length-normalized; the predicted
    word maximizes cosine(w, b - a + c) over the vocabulary minus {a, b, c}.
    """
    dictionary = model.dictionary
    unit = _unit_rows(composed_vectors(model).astype(np.float64))
    correct = {"semantic": 0, "syntactic": 0}
    attempted = {"semantic": 0, "syntactic": 0}
    skipped = 0
    for q in dataset:
        ids = [dictionary.id(w) for w in (q.a, q.b, q.c, q.d)]
        if any(i is None for i in ids):
            skipped += 1
            continue
        ia, ib, ic, id_ = ids
        query = unit[ib] - unit[ia] + unit[ic]
        scores = unit @ query
        scores[[ia, ib, ic]] = -np.inf
        predicted = int(np.argmax(scores))  # ties resolve to the lowest id
        attempted[q.category] += 1
        if predicted == id_:
            correct[q.category] += 1

    def acc(cat: str) -> float | None:
        return correct[cat] / attempted[cat] if attempted[cat] else None

    return AnalogyResult(semantic_acc=acc("semantic"),
                         syntactic_acc=acc("syntactic"),
                         skipped=skipped,
                         semantic_attempted=attempted["semantic"],
                         syntactic_attempted=attempted["syntactic"])


def nearest_neighbors(query: str, k: int, model: EmbeddingModel
                      ) -> list[tuple[str, float]]:
    """Top-k vocabulary words by cosine to the (possibly OOV) query.

    The query itself is excluded; ties break toward the lower word id.
    The query is lowercased to mirror the normalized corpus.
    """
    if k <= 0:
        return []
    query = query.lower()
    dictionary = model.dictionary
    q = np.asarray(word_vector(query, model, OovPolicy.NGRAMS), dtype=np.float64)
    unit = _unit_rows(composed_vectors(model).astype(np.float64))
    qn = np.linalg.norm(q)
    scores = unit @ (q / qn) if qn > 0 else np.zeros(len(dictionary))
    qid = dictionary.id(query)
    if qid is not None:
        scores[qid] = -np.inf
    order = np.lexsort((np.arange(len(scores)), -scores))
    limit = min(k, len(scores) - (1 if qid is not None else 0))
    return [(dictionary.words[i], float(scores[i])) for i in order[:limit]]
