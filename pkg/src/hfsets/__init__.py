"""Hereditarily finite sets as a bisimulation quotient, with a finite model checker."""
from .formula import parse, to_text, is_delta0, instantiate_scheme
from .kernel import ResourceLimitError, SetId, Store, StoreConfig, bisim_naive
from .semantics import Structure, eval_bounded, eval_formula, satisfies, structure_from_seeds, v_fragment

__all__ = [
    "ResourceLimitError",
    "SetId",
    "Store",
    "StoreConfig",
    "Structure",
    "bisim_naive",
    "eval_bounded",
    "eval_formula",
    "instantiate_scheme",
    "is_delta0",
    "parse",
    "satisfies",
    "structure_from_seeds",
    "to_text",
    "v_fragment",
]
