"""Discriminative spectral community detection for pairs of multiplex networks."""

__version__ = "0.1.0"

from .benchmark import BenchmarkConfig, BenchmarkInstance, generate_instance, generate_partition_pair
from .dcsc import DcscConfig, DcscResult, mx_dcsc_solve
from .dsc import DscConfig, DscResult, mx_dsc_solve
from .errors import ConfigError, DimensionError, ValidationError
from .linalg import kmeans, projection_distance_sq, smallest_eigenpairs
from .metrics import auc_roc, nmi
from .model_selection import DimensionSpec, eigengap_k, select_dimensions
from .multiplex import (
    MultiplexNetwork,
    laplacian_sum,
    normalized_laplacian,
    read_edgelist,
    write_edgelist,
)
from .spectral import consensus_cluster, spectral_cluster
from .subgraph import affinity_degrees, split_discriminative

__all__ = [
    "BenchmarkConfig", "BenchmarkInstance", "generate_instance", "generate_partition_pair",
    "DcscConfig", "DcscResult", "mx_dcsc_solve", "DscConfig", "DscResult", "mx_dsc_solve",
    "ConfigError", "DimensionError", "ValidationError",
    "kmeans", "projection_distance_sq", "smallest_eigenpairs", "auc_roc", "nmi",
    "DimensionSpec", "eigengap_k", "select_dimensions",
    "MultiplexNetwork", "laplacian_sum", "normalized_laplacian", "read_edgelist", "write_edgelist",
    "consensus_cluster", "spectral_cluster", "affinity_degrees", "split_discriminative",
]
