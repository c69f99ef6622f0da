"""Noun phrase chunking by combining classifiers trained on different chunk representations."""

from .chunkrepr import ChunkSpan, TagScheme, decode, encode, pair_brackets, to_brackets
from .corpus import Dataset, Sentence, Token, parse_column_file, split_folds, write_column_file
from .pipeline import ExperimentConfig, run_basenp, run_cascade, run_crossval

__version__ = "0.1.0"

__all__ = [
    "ChunkSpan",
    "Dataset",
    "ExperimentConfig",
    "Sentence",
    "TagScheme",
    "Token",
    "decode",
    "encode",
    "pair_brackets",
    "parse_column_file",
    "run_basenp",
    "run_cascade",
    "run_crossval",
    "split_folds",
    "to_brackets",
    "write_column_file",
]
