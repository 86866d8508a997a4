"""Sliced normality penalties for autoencoder latents.

Closed-form one-dimensional distances between a sample and N(0, 1), their
sliced aggregation over random projections, a composite training cost, a
small hand-rolled autoencoder, and normality diagnostics.
"""

from .kernels import (
    KernelResult,
    cvm_closed,
    cw_closed,
    ks_closed,
    silverman_bandwidth,
    sort_with_permutation,
    sw_pairwise,
    w2_closed,
)
from .metrics import (
    CSV_HEADER,
    MetricsRow,
    gaussian_frechet_proxy,
    mardia_kurtosis,
    mardia_skewness,
    sw_monitor,
)
from .net import MlpSpec, OptimizerSpec, TrainState, backward_step, decode, encode, init_state, mse
from .slicer import (
    CostMode,
    DistanceKind,
    composite_cost,
    penalty_derivative,
    sample_directions,
    sliced_distance,
    sliced_pairwise_sw,
)

__version__ = "0.1.0"

__all__ = [
    "CSV_HEADER",
    "CostMode",
    "DistanceKind",
    "KernelResult",
    "MetricsRow",
    "MlpSpec",
    "OptimizerSpec",
    "TrainState",
    "backward_step",
    "composite_cost",
    "cvm_closed",
    "cw_closed",
    "decode",
    "encode",
    "gaussian_frechet_proxy",
    "init_state",
    "ks_closed",
    "mardia_kurtosis",
    "mardia_skewness",
    "mse",
    "penalty_derivative",
    "sample_directions",
    "silverman_bandwidth",
    "sliced_distance",
    "sliced_pairwise_sw",
    "sort_with_permutation",
    "sw_monitor",
    "sw_pairwise",
    "w2_closed",
]
