"""Anti-Ramsey numbers for rainbow out-directed spanning trees of tournaments."""

from .arborescence import (
    Arborescence,
    ProofDigraph,
    SearchOutcome,
    count_arborescences,
    enumerate_arborescences,
    has_rainbow_arborescence,
    proof_digraph,
)
from .coloring import (
    ArcColoring,
    ColorStats,
    VertexType,
    classify_vertex,
    color_stats,
    enumerate_colorings,
    extremal_coloring,
    merge_colors,
    stirling2,
)
from .errors import DomainError, ResourceError
from .tournament import (
    Tournament,
    Triple,
    canonical_form,
    delta3_minus,
    enumerate_tournaments,
    h_value,
    hamiltonian_path,
    random_tournament,
    reachable_set,
)

__version__ = "0.1.0"
