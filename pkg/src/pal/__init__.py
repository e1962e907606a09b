"""Public announcement logic over finite S5 models."""

from pal.formula import Formula, as_single_term, shape_of, to_nnf
from pal.kripke import KripkeModel, PointedModel, evaluate, restrict
from pal.parser import SourceError, parse, render

__version__ = "0.1.0"

__all__ = [
    "Formula",
    "KripkeModel",
    "PointedModel",
    "SourceError",
    "as_single_term",
    "evaluate",
    "parse",
    "render",
    "restrict",
    "shape_of",
    "to_nnf",
]
