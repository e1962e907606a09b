"""Vectorized truth-set evaluation over many models at once.

A batch holds, per agent, one array per world giving the bitmask of that
world's block, and per prop an array of valuation masks.  All arrays
broadcast against each other, so a batch of P frames times V valuations is
evaluated as (P, V) arrays without materializing P*V models.  Truth sets are
returned as masks restricted to a universe mask, which is how submodels
(announcements, candidate sub/super-models) are expressed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from pal.formula import (
    And,
    Announce,
    Atom,
    Bottom,
    Common,
    Formula,
    Know,
    Not,
    Or,
    Poss,
    Top,
)


def mask_dtype(n: int):
    if n <= 8:
        return np.uint8
    if n <= 16:
        return np.uint16
    if n <= 32:
        return np.uint32
    raise ValueError(f"batch evaluation supports at most 32 worlds, got {n}")


@dataclass
class Batch:
    n: int
    blocks: Dict[str, List[np.ndarray]]
    atoms: Dict[str, np.ndarray]

    @property
    def dtype(self):
        return mask_dtype(self.n)

    def full(self):
        return self.dtype((1 << self.n) - 1)

    def eval(self, f: Formula, universe=None) -> np.ndarray:
        """Truth-set masks of ``f`` in the submodels induced on ``universe``."""
        u = self.full() if universe is None else universe
        return _eval(self, f, u)


def _zeros_like(b: Batch, u):
    return np.zeros(np.shape(u), dtype=b.dtype)


def _eval(b: Batch, f: Formula, u):
    dt = b.dtype
    if isinstance(f, Atom):
        a = b.atoms.get(f.name)
        return _zeros_like(b, u) if a is None else a & u
    if isinstance(f, Top):
        return u
    if isinstance(f, Bottom):
        return _zeros_like(b, u)
    if isinstance(f, Not):
        return u & ~_eval(b, f.sub, u)
    if isinstance(f, And):
        return _eval(b, f.left, u) & _eval(b, f.right, u)
    if isinstance(f, Or):
        return _eval(b, f.left, u) | _eval(b, f.right, u)
    if isinstance(f, (Know, Poss)):
        x = _eval(b, f.sub, u)
        cls = b.blocks.get(f.agent)
        if cls is None:
            return x
        out = None
        notx = ~x
        for w in range(b.n):
            blk = cls[w] & u
            if isinstance(f, Know):
                hit = (blk & notx) == 0
            else:
                hit = (blk & x) != 0
            term = hit.astype(dt) << dt(w)
            out = term if out is None else out | term
        return out & u
    if isinstance(f, Common):
        x = _eval(b, f.sub, u)
        reach = _reachability(b, u)
        out = None
        notx = ~x
        for w in range(b.n):
            term = ((reach[w] & notx) == 0).astype(dt) << dt(w)
            out = term if out is None else out | term
        return out & u
    if isinstance(f, Announce):
        ann = _eval(b, f.announcement, u)
        after = _eval(b, f.sub, ann)
        return (u & ~ann) | after
    raise TypeError(f"not a formula: {f!r}")


def _reachability(b: Batch, u):
    """Per world, the mask of worlds reachable through any agent within ``u``."""
    dt = b.dtype
    step = []
    for v in range(b.n):
        m = dt(1 << v) & u
        for cls in b.blocks.values():
            m = m | (cls[v] & u)
        step.append(m)
    reach = [dt(1 << w) & u for w in range(b.n)]
    for _ in range(b.n):
        for w in range(b.n):
            r = reach[w]
            for v in range(b.n):
                r = r | np.where((reach[w] >> dt(v)) & dt(1), step[v], dt(0)).astype(dt)
            reach[w] = r
    return reach


def lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1
