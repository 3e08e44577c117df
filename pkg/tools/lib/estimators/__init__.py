"""
Reward estimators: distributional (DRE), point regression (p2p) and global joint (GRE).
"""

from tools.lib.estimators.beliefs import (
    SIGMA_FLOOR,
    RewardBeliefs,
    nll_loss,
    regularizer,
    sample_or_mean,
)
from tools.lib.estimators.distributional import (
    DistributionalEstimator,
    EstimatorNet,
    estimate,
    estimator_update,
)
from tools.lib.estimators.factory import ESTIMATORS, RewardEstimator, build_estimator
from tools.lib.estimators.global_joint import GlobalEstimator, GlobalNet, gre_estimate, gre_update
from tools.lib.estimators.point import PointEstimator, PointNet, p2p_estimate, p2p_update

__all__ = [
    "SIGMA_FLOOR",
    "RewardBeliefs",
    "nll_loss",
    "regularizer",
    "sample_or_mean",
    "EstimatorNet",
    "estimate",
    "estimator_update",
    "DistributionalEstimator",
    "PointNet",
    "p2p_estimate",
    "p2p_update",
    "PointEstimator",
    "GlobalNet",
    "gre_estimate",
    "gre_update",
    "GlobalEstimator",
    "ESTIMATORS",
    "RewardEstimator",
    "build_estimator",
]
