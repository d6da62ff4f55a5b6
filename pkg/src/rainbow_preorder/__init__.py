"""Rainbow forbidden subgraph preorder: search, witnesses, bounded checks, poset."""

from .coloring import EdgeColoring, load_coloring, dump_coloring, normalize_colors
from .enumeration import Budget, Verdict, check_relation, necessary_conditions, iterate_colorings
from .facts import FactLedger, load_ledger
from .graphs import Graph, canonical_form, is_subgraph, make_pattern, pattern_name
from .poset import assemble, build_catalog, export_dot, poset_catalog
from .search import brute_force_find, find_rainbow_embedding, is_rainbow_free
from .witnesses import WitnessId, build_witness, validate_witness

__version__ = "0.1.0"

__all__ = [
    "EdgeColoring",
    "load_coloring",
    "dump_coloring",
    "normalize_colors",
    "Budget",
    "Verdict",
    "check_relation",
    "necessary_conditions",
    "iterate_colorings",
    "FactLedger",
    "load_ledger",
    "Graph",
    "canonical_form",
    "is_subgraph",
    "make_pattern",
    "pattern_name",
    "assemble",
    "build_catalog",
    "export_dot",
    "poset_catalog",
    "brute_force_find",
    "find_rainbow_embedding",
    "is_rainbow_free",
    "WitnessId",
    "build_witness",
    "validate_witness",
]
