"""Property-preserving topological summaries of weighted graphs.

Pipeline: a scalar lens on the nodes, an interval cover of its normalized
range, connected components of the cover preimages, and the 1-skeleton of
the nerve of those components as the summary graph.
"""

from .cover import Cover, Interval, assign_nodes, cover_from_json_obj, modify_interval, uniform_cover
from .errors import (
    ConvergenceError,
    DisconnectedGraphError,
    GraphMapperError,
    MultiplicityError,
    ParameterError,
    ParseError,
    ValidationError,
)
from .generators import GeneratorSpec, generate
from .graph import (
    WeightedGraph,
    connected_components,
    induced_subgraph,
    is_connected,
    largest_component,
    parse_graph,
    sssp,
)
from .lenses import (
    LensField,
    LensHistogram,
    compute_agd,
    compute_density,
    compute_laplacian_eigen,
    compute_lens,
    compute_pagerank,
    histogram,
    normalize_lens,
)
from .layout import LayoutResult, layout_fr, repulsion_barnes_hut, repulsion_exact
from .mapper import (
    MapperSummary,
    SummaryEdge,
    SummaryNode,
    compute_mog,
    filter_summary,
    nerve,
    pullback,
    summarize,
    summary_from_json_obj,
)

__version__ = "0.1.0"

__all__ = [
    "Cover",
    "Interval",
    "GeneratorSpec",
    "WeightedGraph",
    "LensField",
    "LensHistogram",
    "LayoutResult",
    "MapperSummary",
    "SummaryNode",
    "SummaryEdge",
    "GraphMapperError",
    "ParseError",
    "ValidationError",
    "ParameterError",
    "DisconnectedGraphError",
    "MultiplicityError",
    "ConvergenceError",
    "assign_nodes",
    "compute_agd",
    "compute_density",
    "compute_laplacian_eigen",
    "compute_lens",
    "compute_mog",
    "compute_pagerank",
    "connected_components",
    "cover_from_json_obj",
    "filter_summary",
    "generate",
    "histogram",
    "induced_subgraph",
    "is_connected",
    "largest_component",
    "layout_fr",
    "modify_interval",
    "nerve",
    "normalize_lens",
    "parse_graph",
    "pullback",
    "repulsion_barnes_hut",
    "repulsion_exact",
    "sssp",
    "summarize",
    "summary_from_json_obj",
    "uniform_cover",
]
