"""Masked Java code completion: dataset construction, baselines, evaluation."""

from .abstraction import (
    DEFAULT_IDIOMS,
    UnresolvedPlaceholderError,
    abstract_tokens,
    deabstract,
)
from .bpe import BpeModel, decode as bpe_decode, encode as bpe_encode, load_model as load_bpe, save_model as save_bpe, train_bpe
from .corpus import (
    IngestResult,
    MethodRecord,
    SplitAssignment,
    cap_training,
    dedup,
    filter_records,
    ingest,
    split_records,
)
from .evaluation import (
    ComparisonResult,
    EvaluationReport,
    PredictionRecord,
    compare_models,
    evaluate,
    sample_non_perfect,
)
from .javalex import LexError, Token, detokenize, lex
from .masking import MASK_SENTINEL, MaskedInstance, mask_record, render_input
from .metrics import MetricValues, bleu_n, compute_metrics, lev_norm, levenshtein, perfect_match
from .ngram import NgramConfig, NgramModel, build_cache, predict_span, prob
from .stats import (
    PairedOutcomeTable,
    UndefinedTestError,
    benjamini_hochberg,
    mcnemar,
    odds_ratio,
    wilcoxon_rank_sum,
    wilcoxon_signed_rank,
)
from .structure import (
    BlockSpan,
    ConstructSpan,
    StructureError,
    check_braces,
    count_statements,
    extract_methods,
    find_blocks,
    find_constructs,
    segment_lines,
)

__version__ = "0.1.0"

__all__ = [
    "BlockSpan",
    "BpeModel",
    "ComparisonResult",
    "ConstructSpan",
    "DEFAULT_IDIOMS",
    "EvaluationReport",
    "IngestResult",
    "LexError",
    "MASK_SENTINEL",
    "MaskedInstance",
    "MethodRecord",
    "MetricValues",
    "NgramConfig",
    "NgramModel",
    "PairedOutcomeTable",
    "PredictionRecord",
    "SplitAssignment",
    "StructureError",
    "Token",
    "UndefinedTestError",
    "UnresolvedPlaceholderError",
    "abstract_tokens",
    "benjamini_hochberg",
    "bleu_n",
    "bpe_decode",
    "bpe_encode",
    "build_cache",
    "cap_training",
    "check_braces",
    "compare_models",
    "compute_metrics",
    "count_statements",
    "deabstract",
    "dedup",
    "detokenize",
    "evaluate",
    "extract_methods",
    "filter_records",
    "find_blocks",
    "find_constructs",
    "ingest",
    "lev_norm",
    "levenshtein",
    "lex",
    "load_bpe",
    "mask_record",
    "mcnemar",
    "odds_ratio",
    "perfect_match",
    "predict_span",
    "prob",
    "render_input",
    "sample_non_perfect",
    "save_bpe",
    "segment_lines",
    "split_records",
    "train_bpe",
    "wilcoxon_rank_sum",
    "wilcoxon_signed_rank",
]
