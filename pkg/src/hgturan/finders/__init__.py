"""Search procedures that return checked embeddings or an exhausted report."""

from ._base import CertificateError, ExpansionThreshold, FinderReport
from .graphs import disjoint_star_target, disjoint_stars_graph, match_or_star
from .partite import Blocks, find_disjoint_4partite, kst_bipartite, kst_hypothesis, kst_rpartite, unavoidable_edge_bound
from .stars3 import CodegreeError, find_disjoint_sf3_bounded_codegree, find_disjoint_st3_wellbehaved, find_st3
from .stars4 import find_disjoint_st4, find_st4, st4_levels, well_behaved_problems
from .sunflowers import find_sunflower, guarantee_edges

__all__ = [
    "Blocks",
    "CertificateError",
    "CodegreeError",
    "ExpansionThreshold",
    "FinderReport",
    "disjoint_star_target",
    "disjoint_stars_graph",
    "find_disjoint_4partite",
    "find_disjoint_sf3_bounded_codegree",
    "find_disjoint_st3_wellbehaved",
    "find_disjoint_st4",
    "find_st3",
    "find_st4",
    "find_sunflower",
    "guarantee_edges",
    "kst_bipartite",
    "kst_hypothesis",
    "kst_rpartite",
    "match_or_star",
    "st4_levels",
    "unavoidable_edge_bound",
    "well_behaved_problems",
]
