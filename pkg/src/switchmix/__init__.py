"""Counting and sampling perfect matchings with the switch chain."""

from .graph import (BipartiteGraph, PerfectMatching, degree_stats,
                    diagonal_matching_exists, find_perfect_matching,
                    format_matrix_text, induced_subgraph, parse_matrix_text,
                    validate_matching)

__version__ = "0.1.0"
