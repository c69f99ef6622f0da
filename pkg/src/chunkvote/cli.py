"""Command-line driver.

Exit status: 0 on success, 1 on usage errors, 2 on data or model errors.

Config files (``--config``) hold ``key = value`` lines with ``#`` comments;
keys are the long flag names without dashes (``tuning-fraction`` or
``tuning_fraction``). Command-line flags override config values.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import chunkrepr, corpus, learner, pipeline
from .chunkrepr import ALL_SCHEMES, TagScheme
from .combine import METHODS
from .corpus import CorpusFormatError
from .evaluation import chunk_score, format_chunk_report, token_accuracy
from .learner import ModelFormatError

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

DEFAULTS = {
    "scheme": ",".join(s.value for s in ALL_SCHEMES),
    "stages": 2,
    "k": 3,
    "method": "majority",
    "folds": 10,
    "tuning_fraction": 0.1,
    "max_levels": 4,
    "jobs": 1,
    "seed": 0,
    "inner_folds": 5,
    "algorithm": "ib1ig",
    "shuffle_tuning": False,
    "gain_ratio": False,
    "mcnemar": False,
}


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _experiment_flags(p, cascade=False):
    p.add_argument("--config", metavar="PATH", help="key = value config file (default: none)")
    p.add_argument("--scheme", help=f"comma-separated representations (default: {DEFAULTS['scheme']})")
    p.add_argument("--stages", type=int, choices=(1, 2),
                   help=f"processing stages for tagging schemes (default: {DEFAULTS['stages']})")
    p.add_argument("--k", type=int, help=f"nearest distance shells for IB1-IG (default: {DEFAULTS['k']})")
    p.add_argument("--method", choices=METHODS,
                   help=f"combination method (default: {DEFAULTS['method']})")
    p.add_argument("--algorithm", choices=("ib1ig", "igtree"),
                   help=f"component learner (default: {DEFAULTS['algorithm']})")
    p.add_argument("--folds", type=int, help=f"cross-validation folds (default: {DEFAULTS['folds']})")
    p.add_argument("--inner-folds", type=int,
                   help=f"folds for stage-1 context and stacker data (default: {DEFAULTS['inner_folds']})")
    p.add_argument("--tuning-fraction", type=float,
                   help=f"held-out share of training data for vote weights (default: {DEFAULTS['tuning_fraction']})")
    p.add_argument("--shuffle-tuning", action="store_true", default=None,
                   help="draw tuning sentences at random using --seed (default: off, last sentences)")
    p.add_argument("--gain-ratio", action="store_true", default=None,
                   help="normalise feature weights by split information (default: off, plain information gain)")
    p.add_argument("--mcnemar", action="store_true", default=None,
                   help="report McNemar's paired test instead of the unpaired chi-squared (default: off)")
    p.add_argument("--max-levels", type=int,
                   help=f"cascade level cap (default: {DEFAULTS['max_levels']})")
    p.add_argument("--jobs", type=int, help=f"worker processes (default: {DEFAULTS['jobs']})")
    p.add_argument("--seed", type=int, help=f"random seed (default: {DEFAULTS['seed']})")
    p.add_argument("--format", default="IOB1",
                   help="tag scheme of input/output column files (default: IOB1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chunkvote", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress (default: off)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("convert", help="re-encode a column file in another tag scheme")
    p.add_argument("--from", dest="source", default="IOB1", help="input scheme (default: IOB1)")
    p.add_argument("--to", dest="target", required=True, help="output scheme (required)")
    p.add_argument("input")
    p.add_argument("output")

    p = sub.add_parser("train", help="train a combined base NP chunker and save it")
    _experiment_flags(p)
    p.add_argument("input", help="training column file")
    p.add_argument("model", help="model file to write")

    p = sub.add_parser("predict", help="chunk a file with a saved model")
    p.add_argument("--format", default="IOB1", help="output tag scheme (default: IOB1)")
    p.add_argument("model")
    p.add_argument("input", help="column file; only word and POS columns are read")
    p.add_argument("output")

    p = sub.add_parser("evaluate", help="score a prediction file against a gold file")
    p.add_argument("--format", default="IOB1", help="tag scheme of both files (default: IOB1)")
    p.add_argument("gold")
    p.add_argument("pred")

    p = sub.add_parser("crossval", help="cross-validate the combined chunker")
    _experiment_flags(p)
    p.add_argument("--report", metavar="PATH", help="also write a key = value report (default: none)")
    p.add_argument("input")

    p = sub.add_parser("experiment", help="train on one file, test on another, report")
    _experiment_flags(p)
    p.add_argument("--report", metavar="PATH", help="also write a key = value report (default: none)")
    p.add_argument("--output", metavar="PATH", help="write predicted chunks (default: none)")
    p.add_argument("train")
    p.add_argument("test")

    p = sub.add_parser("cascade", help="recognise nested NPs by repeated chunking")
    _experiment_flags(p)
    p.add_argument("train", help="training file in nested bracket format")
    p.add_argument("test", help="test file in nested bracket format")
    p.add_argument("output", help="nested bracket output file")
    return parser


def read_config(path) -> dict:
    values = {}
    text = _read(path)
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in DEFAULTS:
            raise DataError(f"{path}: line {lineno}: unknown or malformed setting {line!r}")
        values[key] = value.strip()
    return values


def _coerce(key, value):
    default = DEFAULTS[key]
    if isinstance(default, bool):
        return str(value).lower() in ("1", "true", "yes", "on")
    return type(default)(value)


def make_config(args) -> pipeline.ExperimentConfig:
    settings = dict(DEFAULTS)
    if args.config:
        settings.update(read_config(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    try:
        settings = {key: _coerce(key, value) for key, value in settings.items()}
        config = pipeline.ExperimentConfig(
            schemes=tuple(s for s in settings["scheme"].split(",") if s),
            stages=settings["stages"],
            k=settings["k"],
            method=settings["method"],
            folds=settings["folds"],
            inner_folds=settings["inner_folds"],
            tuning_fraction=settings["tuning_fraction"],
            shuffle_tuning=settings["shuffle_tuning"],
            cascade_max_levels=settings["max_levels"],
            jobs=settings["jobs"],
            seed=settings["seed"],
            algorithm=settings["algorithm"],
            gain_ratio=settings["gain_ratio"],
            paired_test=settings["mcnemar"],
        )
        return config.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _read(path) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from None


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from None


def _load(path, parse, *args):
    text = _read(path)
    try:
        return parse(text, *args)
    except (CorpusFormatError, ValueError) as exc:
        raise DataError(f"{path}: {exc}") from None


def _scheme(name) -> TagScheme:
    try:
        return TagScheme.parse(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_convert(args, out):
    source, target = _scheme(args.source), _scheme(args.target)
    data = _load(args.input, corpus.parse_column_file, source)
    _write(args.output, corpus.write_column_file(data, target))


def cmd_train(args, out):
    config = make_config(args)
    data = _load(args.input, corpus.parse_column_file, _scheme(args.format))
    system = pipeline.train_basenp(data, config)
    _write(args.model, learner.write_container("basenp", system.to_dict()))


def cmd_predict(args, out):
    fmt = _scheme(args.format)
    try:
        kind, payload = learner.read_container(_read(args.model))
        if kind != "basenp":
            raise ModelFormatError(f"expected a basenp model, found {kind!r}")
        system = pipeline.BaseNPSystem.from_dict(payload)
    except (ModelFormatError, KeyError, TypeError) as exc:
        raise DataError(f"{args.model}: {exc}") from None
    data = _load(args.input, corpus.parse_token_file)
    spans = system.predict(data)[0]
    _write(args.output, corpus.write_column_file(pipeline.predictions_dataset(data, spans), fmt))


def evaluate_files(gold_path, pred_path, scheme) -> str:
    gold = _load(gold_path, corpus.parse_column_file, scheme)
    pred = _load(pred_path, corpus.parse_column_file, scheme)
    if len(gold) != len(pred):
        raise DataError(f"{pred_path}: {len(pred)} sentences, {gold_path} has {len(gold)}")
    gold_tags, pred_tags = [], []
    for i, (g, p) in enumerate(zip(gold, pred), start=1):
        if g.words != p.words:
            raise DataError(f"{pred_path}: sentence {i} does not match the tokens of {gold_path}")
        if scheme.is_bracket:
            continue
        gold_tags += chunkrepr.encode(g.spans, len(g), scheme)
        pred_tags += chunkrepr.encode(p.spans, len(p), scheme)
    score = chunk_score([p.spans for p in pred], [g.spans for g in gold])
    accuracy = token_accuracy(pred_tags, gold_tags) if gold_tags else None
    return format_chunk_report(score, gold.n_tokens, accuracy)


def cmd_evaluate(args, out):
    out.write(evaluate_files(args.gold, args.pred, _scheme(args.format)))


def cmd_crossval(args, out):
    config = make_config(args)
    data = _load(args.input, corpus.parse_column_file, _scheme(args.format))
    if config.folds > len(data):
        raise UsageError(f"{args.input}: {len(data)} sentences cannot fill {config.folds} folds")
    report = pipeline.run_crossval(data, config)
    out.write(report.to_text())
    if args.report:
        _write(args.report, report.to_keyvalue())


def cmd_experiment(args, out):
    config = make_config(args)
    fmt = _scheme(args.format)
    train = _load(args.train, corpus.parse_column_file, fmt)
    test = _load(args.test, corpus.parse_column_file, fmt)
    spans, report = pipeline.run_basenp(train, test, config)
    out.write(report.to_text())
    if args.report:
        _write(args.report, report.to_keyvalue())
    if args.output:
        _write(args.output, corpus.write_column_file(pipeline.predictions_dataset(test, spans), fmt))


def cmd_cascade(args, out):
    config = make_config(args)
    train = _load(args.train, corpus.parse_nested_file)
    test = _load(args.test, corpus.parse_nested_file)
    try:
        spans = pipeline.run_cascade(train, test, config)
    except ValueError as exc:
        raise DataError(f"{args.train}: {exc}") from None
    _write(args.output, corpus.write_nested_file(pipeline.predictions_dataset(test, spans)))
    score = chunk_score(spans, [s.spans for s in test])
    out.write(format_chunk_report(score, test.n_tokens))


COMMANDS = {
    "convert": cmd_convert,
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "crossval": cmd_crossval,
    "experiment": cmd_experiment,
    "cascade": cmd_cascade,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args, sys.stdout)
    except UsageError as exc:
        print(f"chunkvote: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"chunkvote: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
