"""Stacked spheres, their facet transversals, and certificates for the known bounds."""

from .core import (
    FacetHypergraph,
    StackedBall,
    StackedSphere,
    boundary,
    dual_graph,
    is_linear,
    make_ball,
    path_order,
    remove_facets,
    reroot,
    to_hypergraph,
)
from .constructions import (
    general_lower_bound,
    general_lower_bound_2,
    glue,
    linear_lower_bound,
    path_ball,
)
from .solver import brute_force_tau, greedy_transversal, min_transversal, tau
from .linear37 import bound_37, transversal_3n7

__version__ = "0.1.0"
