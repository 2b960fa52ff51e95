"""Boolean-width of graphs: cut values, decomposition trees, (sigma, rho) DP."""

from .graph import Graph, gen_gnp, gen_random_regular, parse_graph, write_graph

__all__ = ["Graph", "gen_gnp", "gen_random_regular", "parse_graph", "write_graph"]
