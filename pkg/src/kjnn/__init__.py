"""Symmetric k-NN, (k,j)-NN, RGG and (k,j)-NN-RGG topologies for sensor networks."""

from .experiment import (
    AggregateResult,
    ExperimentConfig,
    TopologyKind,
    TrialResult,
    degree_distribution,
    link_gain,
    run_experiment,
    run_paired,
    run_trial,
)
from .graph import (
    DegreeStats,
    NeighborRanking,
    PointCloud,
    UndirectedGraph,
    connected_components,
    degree_stats,
    is_connected,
    pairwise_rankings,
    sample_uniform_points,
)
from .topology import (
    RadiusParams,
    TopologyParams,
    build_composite,
    build_rgg,
    build_symmetric_kj,
    build_symmetric_knn,
    critical_radius,
)

__version__ = "0.1.0"
