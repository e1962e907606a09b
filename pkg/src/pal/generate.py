"""Seeded random formulas and enumerations of single terms."""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Sequence

from pal.formula import (
    BOTTOM,
    TOP,
    And,
    Announce,
    Atom,
    Common,
    Formula,
    Know,
    Not,
    Or,
    Poss,
    SingleTermView,
)

ALL_NODES = ("atom", "top", "bottom", "not", "and", "or", "know", "poss", "common", "announce")
STATIC_NODES = ("atom", "not", "and", "or", "know", "poss")


def random_formula(
    rng: random.Random,
    depth: int,
    agents: Sequence[str] = ("a", "b"),
    props: Sequence[str] = ("p", "q"),
    nodes: Sequence[str] = STATIC_NODES,
) -> Formula:
    """A random tree of height at most ``depth`` built from ``nodes``."""
    leaves = [k for k in nodes if k in ("atom", "top", "bottom")] or ["atom"]
    inner = [k for k in nodes if k not in ("atom", "top", "bottom")]
    if depth <= 0 or not inner or rng.random() < 0.25:
        kind = rng.choice(leaves)
    else:
        kind = rng.choice(inner)
    sub = lambda: random_formula(rng, depth - 1, agents, props, nodes)  # noqa: E731
    if kind == "atom":
        return Atom(rng.choice(props))
    if kind == "top":
        return TOP
    if kind == "bottom":
        return BOTTOM
    if kind == "not":
        return Not(sub())
    if kind == "and":
        return And(sub(), sub())
    if kind == "or":
        return Or(sub(), sub())
    if kind == "know":
        return Know(rng.choice(agents), sub())
    if kind == "poss":
        return Poss(rng.choice(agents), sub())
    if kind == "common":
        return Common(sub())
    if kind == "announce":
        return Announce(sub(), sub())
    raise ValueError(kind)


def random_supermodel_formula(rng: random.Random, depth: int, agents=("a", "b"), props=("p", "q")) -> Formula:
    """Random member of the fragment p | ~p | f & g | f | g | L_a f | ~[f]~g."""
    if depth <= 0 or rng.random() < 0.25:
        a = Atom(rng.choice(props))
        return Not(a) if rng.random() < 0.5 else a
    kind = rng.choice(("and", "or", "poss", "dual-announce"))
    sub = lambda: random_supermodel_formula(rng, depth - 1, agents, props)  # noqa: E731
    if kind == "and":
        return And(sub(), sub())
    if kind == "or":
        return Or(sub(), sub())
    if kind == "poss":
        return Poss(rng.choice(agents), sub())
    return Not(Announce(sub(), Not(sub())))


def single_terms(max_ops: int, agents: Sequence[str], body: Formula, min_ops: int = 1) -> Iterator[SingleTermView]:
    """Every K/L prefix of length ``min_ops..max_ops`` over ``agents``."""
    ops = [(k, a) for k in "KL" for a in agents]
    for n in range(min_ops, max_ops + 1):
        for seq in itertools.product(ops, repeat=n):
            yield SingleTermView(seq, body)
