"""Projection-based clustering of Bernoulli and Gaussian mixtures."""

from .evaluation import (
    AccuracyReport,
    BoundReport,
    accuracy,
    align_to_truth,
    center_error_report,
    cross_term_check,
    deviation_check,
    frobenius_bound_check,
    spectral_bound_report,
    spectral_constant,
)
from .kmeans import L22Solution, brute_force_l22, solve_l22
from .linalg import ConvergenceError, RankKResult, frobenius_norm_sq, rank_k_approx, spectral_norm
from .model import (
    DataMatrix,
    Family,
    MixtureParams,
    SeparationReport,
    block_centers,
    component_sizes,
    sample_mixture,
    separation_bound,
    separation_report,
)
from .pipeline import (
    CenterSet,
    Clustering,
    ClusterRun,
    SplitPlan,
    centers,
    cluster,
    cluster_run,
    match_clusters,
    project_assign,
    split,
)

__version__ = "0.1.0"
