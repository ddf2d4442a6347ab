"""Word vectors from character n-grams: training, evaluation, analysis."""

from .analysis import (ImportanceReport, MatchMatrix, match_matrix,
                       ngram_importance)
from .config import TrainConfig
from .corpus import Dictionary, EOS, build_dictionary, tokenize
from .evaluate import (AnalogyResult, OovPolicy, SimilarityResult, cosine,
                       eval_analogy, eval_similarity, load_analogy,
                       load_similarity, nearest_neighbors, spearman,
                       word_vector)
from .store import ModelFormatError, export_text, load, save
from .subword import SubwordIndex, extract_ngrams, fnv1a, subword_index
from .trainer import (EmbeddingModel, TrainProgress, logistic_loss,
                      lr_schedule, score, step, train)

__version__ = "0.1.0"

__all__ = [
    "AnalogyResult", "Dictionary", "EOS", "EmbeddingModel",
    "ImportanceReport", "MatchMatrix", "ModelFormatError", "OovPolicy",
    "SimilarityResult", "SubwordIndex", "TrainConfig", "TrainProgress",
    "build_dictionary", "cosine", "eval_analogy", "eval_similarity",
    "export_text", "extract_ngrams", "fnv1a", "load", "load_analogy",
    "load_similarity", "logistic_loss", "lr_schedule", "match_matrix",
    "nearest_neighbors", "ngram_importance", "save", "score", "spearman",
    "step", "subword_index", "tokenize", "train", "word_vector",
]
