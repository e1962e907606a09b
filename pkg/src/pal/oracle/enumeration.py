"""Canonical enumeration of finite S5 models.

Worlds are named ``v1 .. vn``; world ``vi`` is bit ``i-1`` in every mask.
Each agent's partition is a restricted-growth string (RGS) and partitions are
listed in lexicographic RGS order.  Models are ordered by the agents'
partitions (first agent slowest) and then by valuation masks (first prop
slowest, each ascending).
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Dict, Iterator, List, Sequence, Tuple

from pal.kripke import KripkeModel


@lru_cache(maxsize=None)
def restricted_growth_strings(n: int) -> Tuple[Tuple[int, ...], ...]:
    """All RGS of length ``n`` in lexicographic order (Bell(n) of them)."""
    if n <= 0:
        return ((),)
    out = []

    def grow(prefix, top):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for k in range(top + 2):
            prefix.append(k)
            grow(prefix, max(top, k))
            prefix.pop()

    grow([0], 0)
    return tuple(out)


@lru_cache(maxsize=None)
def bell(n: int) -> int:
    # Bell triangle
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def world_names(n: int) -> Tuple[str, ...]:
    return tuple(f"v{i + 1}" for i in range(n))


def rgs_block_masks(rgs: Sequence[int]) -> Tuple[int, ...]:
    """For each world, the bitmask of its block."""
    by_label: Dict[int, int] = {}
    for w, label in enumerate(rgs):
        by_label[label] = by_label.get(label, 0) | (1 << w)
    return tuple(by_label[label] for label in rgs)


@lru_cache(maxsize=None)
def rgs_mask_table(n: int) -> Tuple[Tuple[int, ...], ...]:
    return tuple(rgs_block_masks(r) for r in restricted_growth_strings(n))


def masks_to_worlds(mask: int, names: Sequence[str]) -> List[str]:
    return [w for i, w in enumerate(names) if mask >> i & 1]


def model_from_masks(
    n: int,
    block_masks: Dict[str, Sequence[int]],
    atom_masks: Dict[str, int],
    universe: int | None = None,
) -> KripkeModel:
    """Decode bitmask tables into a :class:`KripkeModel` on ``v1..vn``.

    Worlds outside ``universe`` are dropped (blocks are cut down to it).
    """
    full = (1 << n) - 1
    universe = full if universe is None else universe & full
    names = world_names(n)
    keep = [i for i in range(n) if universe >> i & 1]
    partitions = {}
    for agent, masks in block_masks.items():
        seen = set()
        blocks = []
        for i in keep:
            b = masks[i] & universe
            if b not in seen:
                seen.add(b)
                blocks.append(masks_to_worlds(b, names))
        partitions[agent] = blocks
    valuation = {p: masks_to_worlds(m & universe, names) for p, m in atom_masks.items()}
    return KripkeModel.build([names[i] for i in keep], partitions, valuation)


def valuation_masks(index: int, n: int, props: Sequence[str]) -> Dict[str, int]:
    """Split a combined valuation index into one mask per prop."""
    out = {}
    full = (1 << n) - 1
    for k, p in enumerate(props):
        shift = n * (len(props) - 1 - k)
        out[p] = (index >> shift) & full
    return out


def count_models(n: int, n_agents: int, n_props: int) -> int:
    return bell(n) ** n_agents * 2 ** (n * n_props)


def enumerate_models(n: int, agents: Sequence[str], props: Sequence[str] = ()) -> Iterator[KripkeModel]:
    """Every S5 model on ``v1..vn`` over the given agents and props, once each."""
    if n < 1:
        raise ValueError("need at least one world")
    agents = sorted(set(agents))
    props = sorted(set(props))
    table = rgs_mask_table(n)
    for combo in itertools.product(range(len(table)), repeat=len(agents)):
        blocks = {a: table[i] for a, i in zip(agents, combo)}
        for v in range(2 ** (n * len(props))):
            yield model_from_masks(n, blocks, valuation_masks(v, n, props))
