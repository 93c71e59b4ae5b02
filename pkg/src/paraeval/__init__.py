"""Paraphrase evaluation toolkit.

Lexical and embedding-based metrics, the ParaScore family, and the
meta-evaluation machinery to judge every metric against human scores.
"""

from .core import (
    Benchmark,
    EvalInstance,
    ScoreVector,
    TokenSequence,
    default_scheme,
    ngrams,
    tokenize,
)
from .lexical import (
    BleuConfig,
    PrecisionRecallF1,
    UNSMOOTHED,
    bleu,
    edit_distance,
    ibleu,
    ned,
    rouge,
    self_bleu,
)
from .semantic import (
    IdfTable,
    SimilarityBackendDescriptor,
    TokenEmbeddings,
    build_idf,
    embed,
    greedy_match_score,
    sim,
)
from .parascore import (
    CompositeScore,
    ParaScoreConfig,
    bert_ibleu,
    default_omega_grid,
    ds,
    mix_term,
    parascore,
    parascore_free,
    tune_omega,
)
from .meta import (
    AttributionPair,
    CasePartition,
    CorrelationReport,
    DistanceGroup,
    build_s_div,
    build_s_sim,
    case_partition,
    correlation_report,
    delta_free_vs_based,
    pair_delta_correlation,
    pearson,
    quartile_groups,
    spearman,
    split_s_div,
)
from .benchmark_io import (
    ReportDocument,
    ReportRow,
    SplitConfig,
    emit_report,
    extend_benchmark,
    load_benchmark,
    render_report,
    save_benchmark,
    split_dev_test,
)

__version__ = "0.1.0"

__all__ = [
    "Benchmark",
    "EvalInstance",
    "ScoreVector",
    "TokenSequence",
    "default_scheme",
    "ngrams",
    "tokenize",
    "BleuConfig",
    "PrecisionRecallF1",
    "UNSMOOTHED",
    "bleu",
    "edit_distance",
    "ibleu",
    "ned",
    "rouge",
    "self_bleu",
    "IdfTable",
    "SimilarityBackendDescriptor",
    "TokenEmbeddings",
    "build_idf",
    "embed",
    "greedy_match_score",
    "sim",
    "CompositeScore",
    "ParaScoreConfig",
    "bert_ibleu",
    "default_omega_grid",
    "ds",
    "mix_term",
    "parascore",
    "parascore_free",
    "tune_omega",
    "AttributionPair",
    "CasePartition",
    "CorrelationReport",
    "DistanceGroup",
    "build_s_div",
    "build_s_sim",
    "case_partition",
    "correlation_report",
    "delta_free_vs_based",
    "pair_delta_correlation",
    "pearson",
    "quartile_groups",
    "spearman",
    "split_s_div",
    "ReportDocument",
    "ReportRow",
    "SplitConfig",
    "emit_report",
    "extend_benchmark",
    "load_benchmark",
    "render_report",
    "save_benchmark",
    "split_dev_test",
    "__version__",
]
