"""Search for the smallest flag complexes with torsion in first homology."""

from .canon import (
    CanonicalSet,
    are_isomorphic,
    canonical_form,
    count_connected_graphs,
    generate_connected,
    generate_graphs,
)
from .classify import ClassLabel, classify_complex
from .graph import Graph, from_graph6, has_induced_c5, is_tame, to_graph6
from .homology import HomologyGroup, SimplicialComplex, clique_complex, h1_clique, homology
from .pipeline import STAGES, PipelineStats, run_stage, run_stage_table
from .posets import Poset, enumerate_posets, verify_small_posets

__all__ = [
    "CanonicalSet",
    "ClassLabel",
    "Graph",
    "HomologyGroup",
    "Poset",
    "PipelineStats",
    "STAGES",
    "SimplicialComplex",
    "are_isomorphic",
    "canonical_form",
    "classify_complex",
    "clique_complex",
    "count_connected_graphs",
    "enumerate_posets",
    "from_graph6",
    "generate_connected",
    "generate_graphs",
    "h1_clique",
    "has_induced_c5",
    "homology",
    "is_tame",
    "run_stage",
    "run_stage_table",
    "to_graph6",
    "verify_small_posets",
]
