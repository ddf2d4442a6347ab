"""Command-line interface: train, evaluate, inspect, analyze.

Results go to stdout as "metric<TAB>value" lines unless -pretty is given;
diagnostics go to stderr with a nonzero exit code.
"""

from __future__ import annotations

import argparse
import sys

from . import analysis, evaluate, store, trainer
from .config import TrainConfig
from .evaluate import OovPolicy

_POLICY_LABEL = {OovPolicy.NULL: "sisg-", OovPolicy.NGRAMS: "sisg"}


def _emit(key, value) -> None:
    print(f"{key}\t{value}")


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def cmd_train(args) -> int:
    cfg = TrainConfig(dim=args.dim, n_min=args.n_min, n_max=args.n_max,
                      bucket=args.bucket, min_count=args.min_count,
                      negatives=args.negatives, max_window=args.max_window,
                      subsample_t=args.subsample_t, lr0=args.lr0,
                      epochs=args.epochs, threads=args.threads,
                      seed=args.seed).validate()
    model = trainer.train(args.input, cfg)
    store.save(model, args.output)
    progress = model.progress
    _emit("words", model.vocab_size)
    _emit("tokens", model.dictionary.total_tokens)
    _emit("loss", _fmt(progress.running_loss))
    _emit("model", args.output)
    return 0


def cmd_similarity(args) -> int:
    model = store.load(args.model)
    dataset = evaluate.load_similarity(args.data)
    policy = OovPolicy(args.oov)
    result = evaluate.eval_similarity(dataset, model, policy)
    label = _POLICY_LABEL[policy]
    if args.pretty:
        print(f"{label}: rho={result.rho:.4f} ({result.display}) over "
              f"{result.n_pairs} pairs, {result.oov_pairs} with OOV words")
    else:
        _emit("oov_mode", label)
        _emit("rho", _fmt(result.rho))
        _emit("rho_x100", result.display)
        _emit("pairs", result.n_pairs)
        _emit("oov_pairs", result.oov_pairs)
    return 0


def cmd_analogy(args) -> int:
    model = store.load(args.model)
    dataset = evaluate.load_analogy(args.data)
    result = evaluate.eval_analogy(dataset, model)

    def show(acc: float | None) -> str:
        return "undefined" if acc is None else _fmt(acc)

    if args.pretty:
        print(f"semantic:  {show(result.semantic_acc)} "
              f"({result.semantic_attempted} attempted)")
        print(f"syntactic: {show(result.syntactic_acc)} "
              f"({result.syntactic_attempted} attempted)")
        print(f"skipped:   {result.skipped} (OOV words)")
    else:
        _emit("semantic_acc", show(result.semantic_acc))
        _emit("semantic_attempted", result.semantic_attempted)
        _emit("syntactic_acc", show(result.syntactic_acc))
        _emit("syntactic_attempted", result.syntactic_attempted)
        _emit("skipped", result.skipped)
    return 0


def cmd_nn(args) -> int:
    model = store.load(args.model)
    neighbors = evaluate.nearest_neighbors(args.query, args.k, model)
    if args.pretty:
        width = max((len(w) for w, _ in neighbors), default=0)
        for word, cos in neighbors:
            print(f"{word:<{width}}  {cos:+.4f}")
    else:
        for word, cos in neighbors:
            _emit(word, _fmt(cos))
    return 0


def cmd_vectors(args) -> int:
    model = store.load(args.model)
    for line in sys.stdin:
        for word in line.split():
            vec = evaluate.word_vector(word.lower(), model, OovPolicy.NGRAMS)
            print(word + " " + " ".join(_fmt(v) for v in vec))
    return 0


def cmd_importance(args) -> int:
    model = store.load(args.model)
    report = analysis.ngram_importance(args.word, model)
    if args.pretty:
        print(f"n-grams of {report.word!r}, most important first:")
    for entry in report.entries:
        suffix = "\tdegenerate" if entry.degenerate else ""
        print(f"{entry.ngram}\t{_fmt(entry.cosine)}{suffix}")
    return 0


def cmd_match(args) -> int:
    model = store.load(args.model)
    matrix = analysis.match_matrix(args.a, args.b, model)
    analysis.write_csv(matrix, args.csv)
    _emit("rows", len(matrix.row_ngrams))
    _emit("cols", len(matrix.col_ngrams))
    _emit("csv", args.csv)
    if args.ppm:
        analysis.write_ppm(matrix, args.ppm)
        _emit("ppm", args.ppm)
    return 0


def cmd_export(args) -> int:
    model = store.load(args.model)
    store.export_text(model, args.output)
    _emit("words", model.vocab_size)
    _emit("dim", model.dim)
    _emit("output", args.output)
    return 0


def _add_model_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("-model", required=True, help="model file from `train`")


def _add_pretty_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("-pretty", action="store_true",
                   help="human-readable output instead of metric<TAB>value")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ngramvec", allow_abbrev=False,
        description="Train and evaluate word vectors built from character "
                    "n-grams.")
    sub = parser.add_subparsers(dest="command", required=True)
    defaults = TrainConfig()

    p = sub.add_parser("train", allow_abbrev=False,
                       help="train a model on a text corpus")
    p.add_argument("-input", required=True, help="pre-normalized UTF-8 corpus")
    p.add_argument("-output", required=True, help="model file to write")
    p.add_argument("-dim", type=int, default=defaults.dim)
    p.add_argument("-minn", type=int, default=defaults.n_min, dest="n_min")
    p.add_argument("-maxn", type=int, default=defaults.n_max, dest="n_max")
    p.add_argument("-bucket", type=int, default=defaults.bucket)
    p.add_argument("-min-count", type=int, default=defaults.min_count,
                   dest="min_count")
    p.add_argument("-neg", type=int, default=defaults.negatives,
                   dest="negatives")
    p.add_argument("-ws", type=int, default=defaults.max_window,
                   dest="max_window")
    p.add_argument("-t", type=float, default=defaults.subsample_t,
                   dest="subsample_t")
    p.add_argument("-lr", type=float, default=defaults.lr0, dest="lr0")
    p.add_argument("-epoch", type=int, default=defaults.epochs, dest="epochs")
    p.add_argument("-thread", type=int, default=defaults.threads,
                   dest="threads")
    p.add_argument("-seed", type=int, default=defaults.seed)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("similarity", allow_abbrev=False,
                       help="Spearman correlation on a word-pair dataset")
    _add_model_flag(p)
    p.add_argument("-data", required=True, help="lines: word1 word2 score")
    p.add_argument("-oov", choices=["null", "ngrams"], default="ngrams",
                   help="OOV handling: null = sisg-, ngrams = sisg")
    _add_pretty_flag(p)
    p.set_defaults(func=cmd_similarity)

    p = sub.add_parser("analogy", allow_abbrev=False,
                       help="accuracy on a b c d analogy questions")
    _add_model_flag(p)
    p.add_argument("-data", required=True,
                   help="lines: a b c d, with ': section' headers")
    _add_pretty_flag(p)
    p.set_defaults(func=cmd_analogy)

    p = sub.add_parser("nn", allow_abbrev=False,
                       help="nearest neighbors of a (possibly OOV) word")
    _add_model_flag(p)
    p.add_argument("-query", required=True)
    p.add_argument("-k", type=int, default=10)
    _add_pretty_flag(p)
    p.set_defaults(func=cmd_nn)

    p = sub.add_parser("vectors", allow_abbrev=False,
                       help="compose vectors for words read from stdin")
    _add_model_flag(p)
    p.set_defaults(func=cmd_vectors)

    p = sub.add_parser("importance", allow_abbrev=False,
                       help="rank a word's n-grams by leave-one-out change")
    _add_model_flag(p)
    p.add_argument("-word", required=True)
    _add_pretty_flag(p)
    p.set_defaults(func=cmd_importance)

    p = sub.add_parser("match", allow_abbrev=False,
                       help="pairwise n-gram cosine matrix for two words")
    _add_model_flag(p)
    p.add_argument("-a", required=True, dest="a")
    p.add_argument("-b", required=True, dest="b")
    p.add_argument("-csv", required=True, help="CSV output path")
    p.add_argument("-ppm", default=None, help="optional PPM heat map path")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("export", allow_abbrev=False,
                       help="write composed vectors as a text file")
    _add_model_flag(p)
    p.add_argument("-output", required=True)
    p.set_defaults(func=cmd_export)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 1
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
