"""Scalarizing-function study toolkit for bi-objective rho-MNK landscapes."""

from .evolve import EAParams, RunRecord, mutate, run_batch, run_ea
from .indicators import (
    ApproxSet,
    ReferenceData,
    deviation_to_best,
    dominates,
    final_angle,
    hypervolume,
    hypervolume_difference,
    multiplicative_epsilon,
    pareto_filter,
)
from .landscape import Instance, InstanceParams, empirical_correlation, evaluate, generate_instance
from .scalarize import (
    Direction,
    OpeningAngles,
    ScalarizerConfig,
    level_set_residual,
    make_aug,
    make_chebychev,
    make_norm,
    make_ws,
    opening_angles,
    sgen,
)
from .stats import RegressionFit, RankTestResult, linear_regression, mann_whitney_u, outperformance_counts

__version__ = "0.1.0"
