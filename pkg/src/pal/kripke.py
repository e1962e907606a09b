"""Finite S5 epistemic models, truth evaluation and announcement updates.

Each agent's accessibility relation is stored as a set partition of the
worlds.  Agents missing from ``partitions`` see every world as a singleton
block (the identity relation).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

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


class ModelError(ValueError):
    pass


class InvalidModel(ModelError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class UnknownWorld(ModelError):
    pass


class EmptyModel(ModelError):
    """An announcement left no world standing."""


@dataclass(frozen=True)
class Violation:
    message: str
    agent: Optional[str] = None
    world: Optional[str] = None

    def __str__(self):
        return self.message


Block = FrozenSet[str]


@dataclass(frozen=True, eq=False)
class KripkeModel:
    worlds: Tuple[str, ...]
    partitions: Mapping[str, Tuple[Block, ...]] = field(default_factory=dict)
    valuation: Mapping[str, FrozenSet[str]] = field(default_factory=dict)
    designated: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "worlds", tuple(self.worlds))
        parts = {
            str(a): tuple(frozenset(b) for b in blocks)
            for a, blocks in sorted(self.partitions.items())
        }
        object.__setattr__(self, "partitions", parts)
        val = {str(p): frozenset(ws) for p, ws in sorted(self.valuation.items())}
        object.__setattr__(self, "valuation", val)

    @classmethod
    def build(cls, worlds, partitions=None, valuation=None, designated=None) -> "KripkeModel":
        """Construct and validate; singleton blocks may be omitted from partitions."""
        worlds = tuple(worlds)
        full = {}
        for agent, blocks in (partitions or {}).items():
            blocks = [frozenset(b) for b in blocks]
            seen = frozenset().union(*blocks) if blocks else frozenset()
            blocks += [frozenset([w]) for w in worlds if w not in seen]
            full[agent] = blocks
        m = cls(worlds, full, valuation or {}, designated)
        m.check()
        return m

    # -- structure -----------------------------------------------------------

    @cached_property
    def world_set(self) -> FrozenSet[str]:
        return frozenset(self.worlds)

    @cached_property
    def _block_of(self) -> Dict[str, Dict[str, Block]]:
        return {a: {w: b for b in blocks for w in b} for a, blocks in self.partitions.items()}

    @property
    def agents(self) -> Tuple[str, ...]:
        return tuple(self.partitions)

    def block(self, agent: str, world: str) -> Block:
        """Worlds ``agent`` cannot distinguish from ``world``."""
        table = self._block_of.get(agent)
        if table is None:
            return frozenset([world])
        return table[world]

    def blocks(self, agent: str) -> Tuple[Block, ...]:
        if agent in self.partitions:
            return self.partitions[agent]
        return tuple(frozenset([w]) for w in self.worlds)

    def true_at(self, prop: str) -> FrozenSet[str]:
        return self.valuation.get(prop, frozenset())

    def validate(self) -> List[Violation]:
        out = []
        if len(set(self.worlds)) != len(self.worlds):
            dup = sorted({w for w in self.worlds if self.worlds.count(w) > 1})
            out.extend(Violation(f"duplicate world {w}", world=w) for w in dup)
        ws = set(self.worlds)
        for agent, blocks in self.partitions.items():
            covered = set()
            for b in blocks:
                if not b:
                    out.append(Violation(f"agent {agent}: empty block", agent=agent))
                for w in sorted(b):
                    if w not in ws:
                        out.append(Violation(f"agent {agent}: unknown world {w}", agent, w))
                    elif w in covered:
                        out.append(Violation(f"agent {agent}: world {w} in two blocks", agent, w))
                covered |= b
            for w in self.worlds:
                if w not in covered:
                    out.append(Violation(f"agent {agent}: world {w} uncovered", agent, w))
        for prop, true_ws in self.valuation.items():
            for w in sorted(true_ws - ws):
                out.append(Violation(f"valuation of {prop}: unknown world {w}", world=w))
        if self.designated is not None and self.designated not in ws:
            out.append(Violation(f"designated world {self.designated} unknown", world=self.designated))
        return out

    def check(self) -> "KripkeModel":
        violations = self.validate()
        if violations:
            raise InvalidModel(violations)
        return self

    # -- semantics -----------------------------------------------------------

    def truth_set(self, f: Formula) -> FrozenSet[str]:
        return truth_set(self, f)

    def eval(self, world: str, f: Formula) -> bool:
        return evaluate(self, world, f)

    def restrict(self, f: Formula) -> "KripkeModel":
        return restrict(self, f)

    def submodel(self, keep: Iterable[str]) -> "KripkeModel":
        """Induced submodel on ``keep``; world order is preserved."""
        keep = frozenset(keep)
        worlds = tuple(w for w in self.worlds if w in keep)
        parts = {
            a: tuple(b & keep for b in blocks if b & keep) for a, blocks in self.partitions.items()
        }
        val = {p: ws & keep for p, ws in self.valuation.items()}
        designated = self.designated if self.designated in keep else None
        return KripkeModel(worlds, parts, val, designated)

    # -- comparison / serialization -----------------------------------------

    def _canonical(self, agents=None):
        agents = sorted(set(self.partitions) | set(agents or ()))
        nontrivial = {
            a: frozenset(b for b in self.blocks(a) if len(b) > 1) for a in agents
        }
        props = {p: ws for p, ws in self.valuation.items() if ws}
        return self.world_set, nontrivial, props

    def same_as(self, other: "KripkeModel") -> bool:
        """Equality up to world order, omitted identity agents and empty props."""
        agents = set(self.partitions) | set(other.partitions)
        return self._canonical(agents) == other._canonical(agents)

    def __eq__(self, other):
        if not isinstance(other, KripkeModel):
            return NotImplemented
        return self.worlds == other.worlds and self.designated == other.designated and self.same_as(other)

    def __hash__(self):
        return hash(self.worlds)

    def to_dict(self) -> dict:
        order = {w: i for i, w in enumerate(self.worlds)}

        def sort_ws(ws):
            return sorted(ws, key=order.__getitem__)

        out = {
            "worlds": list(self.worlds),
            "agents": {
                a: sorted((sort_ws(b) for b in blocks), key=lambda b: order[b[0]])
                for a, blocks in self.partitions.items()
            },
            "valuation": {p: sort_ws(ws) for p, ws in self.valuation.items()},
        }
        if self.designated is not None:
            out["designated"] = self.designated
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "KripkeModel":
        """Parse the JSON model format; raises :class:`InvalidModel`."""
        try:
            worlds = [str(w) for w in data["worlds"]]
            agents = {str(a): [[str(w) for w in b] for b in bs] for a, bs in data.get("agents", {}).items()}
            val = {str(p): [str(w) for w in ws] for p, ws in data.get("valuation", {}).items()}
            designated = data.get("designated")
        except (KeyError, TypeError, AttributeError) as exc:
            raise InvalidModel([Violation(f"malformed model data: {exc!r}")]) from None
        return cls.build(worlds, agents, val, None if designated is None else str(designated))

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> "KripkeModel":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidModel([Violation(f"invalid JSON: {exc}")]) from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "KripkeModel":
        with open(path) as fh:
            return cls.from_json(fh.read())

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json(indent=2) + "\n")


@dataclass(frozen=True)
class PointedModel:
    model: KripkeModel
    point: str

    def __post_init__(self):
        if self.point not in self.model.world_set:
            raise UnknownWorld(self.point)

    def eval(self, f: Formula) -> bool:
        return evaluate(self.model, self.point, f)

    def to_dict(self) -> dict:
        d = self.model.to_dict()
        d["designated"] = self.point
        return d


# -- evaluation ---------------------------------------------------------------


def truth_set(m: KripkeModel, f: Formula) -> FrozenSet[str]:
    """All worlds of ``m`` where ``f`` holds."""
    if isinstance(f, Atom):
        return m.true_at(f.name)
    if isinstance(f, Top):
        return m.world_set
    if isinstance(f, Bottom):
        return frozenset()
    if isinstance(f, Not):
        return m.world_set - truth_set(m, f.sub)
    if isinstance(f, And):
        return truth_set(m, f.left) & truth_set(m, f.right)
    if isinstance(f, Or):
        return truth_set(m, f.left) | truth_set(m, f.right)
    if isinstance(f, Know):
        inner = truth_set(m, f.sub)
        return frozenset().union(*(b for b in m.blocks(f.agent) if b <= inner))
    if isinstance(f, Poss):
        inner = truth_set(m, f.sub)
        return frozenset().union(*(b for b in m.blocks(f.agent) if b & inner))
    if isinstance(f, Common):
        inner = truth_set(m, f.sub)
        return frozenset().union(*(c for c in common_components(m) if c <= inner))
    if isinstance(f, Announce):
        ann = truth_set(m, f.announcement)
        if not ann:
            return m.world_set
        after = truth_set(m.submodel(ann), f.sub)
        return (m.world_set - ann) | after
    raise TypeError(f"not a formula: {f!r}")


def common_components(m: KripkeModel) -> List[Block]:
    """Connected components of the union of all agents' relations."""
    parent = {w: w for w in m.worlds}

    def find(w):
        while parent[w] != w:
            parent[w] = parent[parent[w]]
            w = parent[w]
        return w

    for blocks in m.partitions.values():
        for b in blocks:
            ws = list(b)
            for w in ws[1:]:
                parent[find(w)] = find(ws[0])
    comps: Dict[str, set] = {}
    for w in m.worlds:
        comps.setdefault(find(w), set()).add(w)
    return [frozenset(c) for c in comps.values()]


def evaluate(m: KripkeModel, world: str, f: Formula) -> bool:
    if world not in m.world_set:
        raise UnknownWorld(world)
    return world in truth_set(m, f)


def restrict(m: KripkeModel, f: Formula, allow_empty: bool = True) -> KripkeModel:
    """The model after truthfully announcing ``f``.

    With ``allow_empty=False`` an announcement true nowhere raises
    :class:`EmptyModel` instead of returning a world-less model.
    """
    keep = truth_set(m, f)
    if not keep and not allow_empty:
        raise EmptyModel(f"{f} holds at no world")
    return m.submodel(keep)


def is_induced_submodel(small: KripkeModel, big: KripkeModel) -> bool:
    if not small.world_set <= big.world_set:
        return False
    return small.same_as(big.submodel(small.world_set))
