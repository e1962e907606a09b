"""Success, self-refutation and super-success of a formula on one model."""

from __future__ import annotations

import itertools

from pal.formula import Formula
from pal.kripke import KripkeModel, truth_set

MAX_SUPER_WORLDS = 20


class TooLarge(ValueError):
    pass


def is_successful_on(m: KripkeModel, f: Formula) -> bool:
    """Every world satisfying ``f`` still satisfies it after ``f`` is announced."""
    sat = truth_set(m, f)
    return sat <= truth_set(m.submodel(sat), f)


def is_self_refuting_on(m: KripkeModel, f: Formula) -> bool:
    sat = truth_set(m, f)
    return not (sat & truth_set(m.submodel(sat), f))


def is_super_successful_on(m: KripkeModel, f: Formula) -> bool:
    """``f`` survives in every induced submodel between the update and ``m``."""
    if len(m.worlds) > MAX_SUPER_WORLDS:
        raise TooLarge(f"{len(m.worlds)} worlds exceed the cap of {MAX_SUPER_WORLDS}")
    sat = truth_set(m, f)
    optional = [w for w in m.worlds if w not in sat]
    for r in range(len(optional) + 1):
        for extra in itertools.combinations(optional, r):
            keep = sat | frozenset(extra)
            if not sat <= truth_set(m.submodel(keep), f):
                return False
    return True
