"""Hereditarily finite sets, inductive generation engines, broad numbers,
spections, finite ordinals and Tarski-style universes, at desk scale."""
from .errors import BroadgenError, BudgetExceeded
from .hfset import EMPTY, HfSet, hf, intern, parse, serialize
from .encodings import classify, encode, pair, tup, untup, von_neumann
from .terms import Signature, generate_terms, term
from .genengine import (
    BroadRubric, Budget, Rubric, Rule, eval_derivation, eval_derivation_broad,
    generate_family, generate_set,
)
from .broadnum import BroadSignature, ReducedBroadSignature, generate_broad, generate_reduced
from .ordinal import OrdCNF, hartogs, lindenbaum, v_stage
from .universes import tarski_universe
from .dsl import parse_spec, pretty

__version__ = "0.1.0"

__all__ = [
    "BroadgenError", "BudgetExceeded", "EMPTY", "HfSet", "hf", "intern", "parse", "serialize",
    "classify", "encode", "pair", "tup", "untup", "von_neumann", "Signature", "generate_terms",
    "term", "BroadRubric", "Budget", "Rubric", "Rule", "eval_derivation", "eval_derivation_broad",
    "generate_family", "generate_set", "BroadSignature", "ReducedBroadSignature",
    "generate_broad", "generate_reduced", "OrdCNF", "hartogs", "lindenbaum", "v_stage",
    "tarski_universe", "parse_spec", "pretty",
]
