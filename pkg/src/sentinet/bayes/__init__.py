from sentinet.bayes.graphs import (
    Triangulation,
    UGraph,
    is_chordal,
    is_perfect_elimination_order,
    mcs_order,
    moralize,
    triangulate,
)
from sentinet.bayes.io import parse_network, serialize_network
from sentinet.bayes.junction import JunctionTree, build_junction_tree, propagate, query_posterior
from sentinet.bayes.network import (
    BayesNet,
    Cpt,
    Evidence,
    Posterior,
    Variable,
    joint_probability,
    topological_order,
    validate_network,
)
from sentinet.bayes.oracle import all_posteriors, brute_force_posterior, dense_joint

__all__ = [
    "BayesNet",
    "Cpt",
    "Evidence",
    "JunctionTree",
    "Posterior",
    "Triangulation",
    "UGraph",
    "Variable",
    "all_posteriors",
    "brute_force_posterior",
    "build_junction_tree",
    "dense_joint",
    "is_chordal",
    "is_perfect_elimination_order",
    "joint_probability",
    "mcs_order",
    "moralize",
    "parse_network",
    "propagate",
    "query_posterior",
    "serialize_network",
    "topological_order",
    "triangulate",
    "validate_network",
]
