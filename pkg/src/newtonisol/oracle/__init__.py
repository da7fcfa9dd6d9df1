"""Test oracles built from known roots: cluster trees, dense pointsets,
the stopping function, and benchmark generators."""

from .clusters import ClusterNode, ClusterTree, OracleScale, cluster_tree, ssc_threshold
from .roots import (
    Point,
    RootSet,
    chebyshev_like,
    from_roots,
    mignotte,
    nested_clusters,
    random_int,
    random_rootset,
)
from .separation import NotDense, SeparationTree, build_separation_tree, check_properties, is_dense
from .stopping import Unbounded, charge_integral, closed_form_inv_dist, dense_integral, stopping_function
