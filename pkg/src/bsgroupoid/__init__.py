"""Bass-Serre theory for discrete groupoids."""
from .actions import GraphAction, PartialSection, SetAction, cayley_graph, check_cayley_generation, validate_action
from .desing import (Desingularization, build_desingularization, build_section_family,
                     build_tree_of_representatives, validate_desingularization)
from .forest import BassSerreForest, ForestBallAction
from .gog import GraphOfGroupoids, validate_gog
from .graph import SerreGraph, validate_graph
from .groupoid import Groupoid, check_hom, validate_groupoid
from .io import load, load_fixture, save
from .structure import build_psi, check_structure_theorem
from .words import Pi1, Pi1Element, WordError

__all__ = [
    "BassSerreForest", "Desingularization", "ForestBallAction", "GraphAction", "GraphOfGroupoids", "Groupoid",
    "PartialSection", "Pi1", "Pi1Element", "SerreGraph", "SetAction", "WordError", "build_desingularization",
    "build_psi", "build_section_family", "build_tree_of_representatives", "cayley_graph", "check_cayley_generation",
    "check_hom", "check_structure_theorem", "load", "load_fixture", "save", "validate_action",
    "validate_desingularization", "validate_gog", "validate_graph", "validate_groupoid",
]
