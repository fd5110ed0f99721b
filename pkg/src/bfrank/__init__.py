"""Closed-form Bayes factors for differential expression in two-condition count data."""

__version__ = "0.1.0"

from .errors import (
    BFRankError,
    ConvergenceError,
    CountDataWarning,
    DomainError,
    ParseError,
    StructuralError,
    UnsupportedMethodError,
)
from .ingest import CountMatrix, SampleSheet, bind, parse_count_matrix, parse_sample_sheet
from .model import (
    FLAT_PRIOR,
    BetaParams,
    GeneResult,
    PriorHyperparams,
    SampleCounts,
    analyze_gene,
    analyze_genes,
    inferred_log2_fc,
    log10_bayes_factor,
    point_estimate_q,
    posterior_h1,
    posterior_h2,
)
from .oracle import OracleResult, exact_bf, quadrature_bf
from .pipeline import analyze_groups, analyze_matrix
from .replicates import ConditionGroup, ConsistencyReport, pool_condition, replicate_consistency
from .report import CurvePoint, RankedTable, rank_genes, sweep_delta_n, sweep_delta_q
from .simulate import SimulationConfig, TruthRecord, evaluate_ranking, generate_truth, sample_counts
from .special import log_beta, log_binomial_coeff, log_gamma
