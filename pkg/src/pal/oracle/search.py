"""Bounded counter-model search.

Three model families feed the batch evaluator:

* ``exhaustive`` -- every S5 model up to ``max_worlds`` in canonical order;
* ``chain`` -- worlds on a path, each consecutive pair merged by exactly one
  agent, every other pair unrelated;
* ``random-tree`` -- seeded random trees with agent-labelled edges.

A ``Found`` outcome is always re-checked with the reference evaluator in
:mod:`pal.kripke` before it is returned.  ``NoneUpToBound`` only says the
searched family contains no counter-model.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, Optional, Sequence, Tuple

import numpy as np

from pal.formula import Formula, agents as formula_agents, atoms as formula_atoms, has_announcement
from pal.kripke import KripkeModel, PointedModel, truth_set
from pal.oracle.batch import Batch, lowest_bit, mask_dtype
from pal.oracle.enumeration import (
    bell,
    model_from_masks,
    rgs_mask_table,
    valuation_masks,
    world_names,
)

STRATEGIES = ("exhaustive", "chain", "random-tree")

# elements per evaluated (frames x valuations) array
_CHUNK_ELEMENTS = 1 << 21
RANDOM_BATCH = 4096
MAX_BATCH_WORLDS = 16


class SearchError(ValueError):
    pass


class PreconditionViolated(SearchError):
    pass


class WitnessDefect(RuntimeError):
    """A reported witness failed re-verification; always a bug."""


@dataclass(frozen=True)
class SearchBounds:
    max_worlds: int
    agents: Tuple[str, ...] = ()
    strategy: str = "exhaustive"
    samples: int = 1
    seed: int = 0
    min_worlds: int = 1

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(sorted(set(map(str, self.agents)))))
        if self.max_worlds < 1:
            raise SearchError("max_worlds must be >= 1")
        if not 1 <= self.min_worlds <= self.max_worlds:
            raise SearchError("min_worlds must lie in 1..max_worlds")
        if self.strategy not in STRATEGIES:
            raise SearchError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")
        if self.strategy == "random-tree" and self.samples < 1:
            raise SearchError("random-tree needs samples >= 1")
        if self.max_worlds > MAX_BATCH_WORLDS:
            raise SearchError(f"max_worlds above {MAX_BATCH_WORLDS} is not supported")

    def to_dict(self) -> dict:
        d = {"max_worlds": self.max_worlds, "agents": list(self.agents), "strategy": self.strategy}
        if self.min_worlds != 1:
            d["min_worlds"] = self.min_worlds
        if self.strategy == "random-tree":
            d.update(samples=self.samples, seed=self.seed)
        return d


@dataclass
class SearchReport:
    kind: str
    formula: str
    bounds: SearchBounds
    witness: Optional[PointedModel] = None
    models_examined: int = 0
    elapsed: float = 0.0
    supermodel: Optional[KripkeModel] = None

    @property
    def found(self) -> bool:
        return self.witness is not None

    @property
    def outcome(self) -> str:
        return "Found" if self.found else "NoneUpToBound"

    def to_dict(self, stable: bool = False) -> dict:
        d = {
            "kind": self.kind,
            "formula": self.formula,
            "outcome": self.outcome,
            "bounds": self.bounds.to_dict(),
            "models_examined": self.models_examined,
        }
        if self.found:
            d["witness"] = self.witness.to_dict()
            if self.supermodel is not None:
                d["supermodel"] = self.supermodel.to_dict()
        else:
            d["note"] = "no counter-model in the searched family; evidence, not proof"
        if not stable:
            d["elapsed"] = round(self.elapsed, 6)
        return d


# -- model families -----------------------------------------------------------


@dataclass
class _Chunk:
    """One batch of frames; ``decode(flat_index)`` rebuilds a model."""

    batch: Batch
    shape: Tuple[int, int]
    universe: object
    decode: Callable[[int, int], Tuple[KripkeModel, int]]


def _valuation_arrays(n: int, props: Sequence[str]) -> Dict[str, np.ndarray]:
    dt = mask_dtype(n)
    nv = 2 ** (n * len(props))
    idx = np.arange(nv, dtype=np.int64)
    full = (1 << n) - 1
    out = {}
    for k, p in enumerate(props):
        shift = n * (len(props) - 1 - k)
        out[p] = ((idx >> shift) & full).astype(dt)[None, :]
    return out


def _frame_chunks(n, agents, frame_tables, props):
    """Chunks over the cartesian product of per-agent frame tables.

    ``frame_tables[a]`` is a (F, n) int array of block masks; the product is
    ordered with the first agent slowest.
    """
    dt = mask_dtype(n)
    atoms = _valuation_arrays(n, props)
    nv = 2 ** (n * len(props))
    sizes = [len(frame_tables[a]) for a in agents]
    total = int(np.prod(sizes)) if agents else 1
    per = max(1, _CHUNK_ELEMENTS // nv)
    for start in range(0, total, per):
        stop = min(total, start + per)
        idx = np.arange(start, stop, dtype=np.int64)
        blocks = {}
        rows = {}
        rem = idx.copy()
        for a, size in reversed(list(zip(agents, sizes))):
            rows[a] = rem % size
            rem //= size
        for a in agents:
            tbl = frame_tables[a][rows[a]].astype(dt)
            blocks[a] = [np.ascontiguousarray(tbl[:, w])[:, None] for w in range(n)]

        def decode(p, v, _rows=rows, _start=start):
            bm = {a: [int(x) for x in frame_tables[a][int(_rows[a][p])]] for a in agents}
            model = model_from_masks(n, bm, valuation_masks(v, n, props))
            return model, _start + p

        yield _Chunk(Batch(n, blocks, atoms), (stop - start, nv), dt((1 << n) - 1), decode)


def _exhaustive_chunks(n, agents, props):
    table = np.asarray(rgs_mask_table(n), dtype=np.int64).reshape(bell(n), n)
    return _frame_chunks(n, agents, {a: table for a in agents}, props)


def chain_frames(n: int, agents: Sequence[str]) -> Iterator[Tuple[Tuple[str, ...], Dict[str, Tuple[int, ...]]]]:
    """Path frames: edge ``i`` (between worlds i and i+1) carries one agent.

    Consecutive edges with the same agent merge into a single block.
    """
    for labels in itertools.product(agents, repeat=n - 1):
        masks = {a: [1 << w for w in range(n)] for a in agents}
        for a in agents:
            m = masks[a]
            w = 0
            while w < n:
                end = w
                while end < n - 1 and labels[end] == a:
                    end += 1
                block = sum(1 << k for k in range(w, end + 1))
                for k in range(w, end + 1):
                    m[k] = block
                w = end + 1
        yield labels, {a: tuple(masks[a]) for a in agents}


def _chain_chunks(n, agents, props):
    frames = [fr for _, fr in chain_frames(n, agents)]
    if not agents:
        frames = [{}] if n == 1 else []
    if not frames:
        return iter(())
    # one table per agent indexed by frame number, combined as a single axis
    table = {a: np.asarray([fr[a] for fr in frames], dtype=np.int64) for a in agents}
    return _single_axis_chunks(n, agents, table, len(frames), props)


def _single_axis_chunks(n, agents, table, count, props):
    dt = mask_dtype(n)
    atoms = _valuation_arrays(n, props)
    nv = 2 ** (n * len(props))
    per = max(1, _CHUNK_ELEMENTS // nv)
    for start in range(0, count, per):
        stop = min(count, start + per)
        blocks = {
            a: [np.ascontiguousarray(table[a][start:stop, w].astype(dt))[:, None] for w in range(n)]
            for a in agents
        }

        def decode(p, v, _start=start):
            bm = {a: [int(x) for x in table[a][_start + p]] for a in agents}
            return model_from_masks(n, bm, valuation_masks(v, n, props)), _start + p

        yield _Chunk(Batch(n, blocks, atoms), (stop - start, nv), dt((1 << n) - 1), decode)


def _random_tree_chunks(bounds: SearchBounds, agents, props):
    n = bounds.max_worlds
    dt = mask_dtype(n)
    rng = np.random.default_rng(bounds.seed)
    k = max(1, len(agents))
    remaining = bounds.samples
    offset = 0
    while remaining > 0:
        size = min(RANDOM_BATCH, remaining)
        worlds = rng.integers(bounds.min_worlds, n + 1, size=size)
        parent = np.zeros((size, n), dtype=np.int64)
        for i in range(1, n):
            parent[:, i] = rng.integers(0, i, size=size)
        labels = rng.integers(0, k, size=(size, n))
        vals = rng.integers(0, 1 << n, size=(size, len(props)), dtype=np.int64)
        universe = ((np.int64(1) << worlds) - 1).astype(dt)[:, None]
        blocks = {}
        raw_blocks = {}
        for ai, a in enumerate(agents):
            root = np.zeros((size, n), dtype=np.int64)
            for i in range(1, n):
                own = np.full(size, i, dtype=np.int64)
                root[:, i] = np.where(labels[:, i] == ai, root[np.arange(size), parent[:, i]], own)
            masks = np.zeros((size, n), dtype=np.int64)
            for w in range(n):
                for v in range(n):
                    masks[:, w] |= (root[:, v] == root[:, w]).astype(np.int64) << v
            raw_blocks[a] = masks
            blocks[a] = [masks[:, w].astype(dt)[:, None] for w in range(n)]
        atoms = {p: vals[:, j].astype(dt)[:, None] & universe for j, p in enumerate(props)}

        def decode(p, v, _raw=raw_blocks, _vals=vals, _u=universe, _off=offset):
            bm = {a: [int(x) for x in _raw[a][p]] for a in agents}
            am = {q: int(_vals[p, j]) for j, q in enumerate(props)}
            return model_from_masks(n, bm, am, int(_u[p, 0])), _off + p

        yield _Chunk(Batch(n, blocks, atoms), (size, 1), universe, decode)
        remaining -= size
        offset += size


def _chunks_for(bounds: SearchBounds, n: int, agents, props):
    if bounds.strategy == "exhaustive":
        return _exhaustive_chunks(n, agents, props)
    if bounds.strategy == "chain":
        return _chain_chunks(n, agents, props)
    raise AssertionError(bounds.strategy)


# -- searches -----------------------------------------------------------------


def _prepare(f: Formula, b: SearchBounds, kind: str):
    fa = formula_agents(f)
    missing = sorted(fa - set(b.agents))
    if missing:
        raise PreconditionViolated(f"bounds lack agents {missing} used by the formula")
    if b.strategy != "exhaustive" and has_announcement(f):
        raise PreconditionViolated(f"{b.strategy} search requires an announcement-free formula")
    return sorted(fa), sorted(formula_atoms(f))


def _scan(f, b, kind, bad_fn, verify):
    """Run ``bad_fn(batch, universe) -> masks`` over the family; first hit wins."""
    agents, props = _prepare(f, b, kind)
    t0 = time.perf_counter()
    examined = 0
    report = SearchReport(kind, str(f), b)
    if b.strategy == "random-tree":
        sizes = [None]
    else:
        sizes = range(b.min_worlds, b.max_worlds + 1)
    for n in sizes:
        chunks = (
            _random_tree_chunks(b, agents, props) if n is None else _chunks_for(b, n, agents, props)
        )
        for chunk in chunks:
            bad = bad_fn(chunk.batch, chunk.universe)
            bad = np.broadcast_to(bad, chunk.shape)
            hits = np.flatnonzero(bad)
            if hits.size:
                flat = int(hits[0])
                p, v = divmod(flat, chunk.shape[1])
                examined += flat + 1
                model, _ = chunk.decode(p, v)
                world = world_names(chunk.batch.n)[lowest_bit(int(bad[p, v]))]
                report.witness = PointedModel(model, world)
                report.models_examined = examined
                report.elapsed = time.perf_counter() - t0
                if not verify(model, world):
                    raise WitnessDefect(f"witness for {kind} of {f} failed re-verification")
                return report
            examined += chunk.shape[0] * chunk.shape[1]
    report.models_examined = examined
    report.elapsed = time.perf_counter() - t0
    return report


def find_success_counterexample(f: Formula, bounds: SearchBounds) -> SearchReport:
    """First pointed model where ``f`` holds but fails after its own announcement."""

    def bad(batch, u):
        s = batch.eval(f, u)
        return s & ~batch.eval(f, s)

    def verify(m, w):
        s = truth_set(m, f)
        return w in s and w not in truth_set(m.submodel(s), f)

    return _scan(f, bounds, "success", bad, verify)


def find_selfref_counterexample(f: Formula, bounds: SearchBounds) -> SearchReport:
    """First pointed model where ``f`` holds and still holds after its announcement."""

    def bad(batch, u):
        s = batch.eval(f, u)
        return batch.eval(f, s)

    def verify(m, w):
        s = truth_set(m, f)
        return w in s and w in truth_set(m.submodel(s), f)

    return _scan(f, bounds, "self-refutation", bad, verify)


def find_satisfying_model(f: Formula, bounds: SearchBounds) -> SearchReport:
    """First pointed model satisfying ``f``."""

    def verify(m, w):
        return w in truth_set(m, f)

    return _scan(f, bounds, "satisfiability", lambda batch, u: batch.eval(f, u), verify)


def check_supermodel_preservation(
    f: Formula, bounds: SearchBounds, base_max_worlds: Optional[int] = None
) -> SearchReport:
    """Look for a submodel where ``f`` holds at a world but fails in the bigger model.

    The big model ranges over the search family; the small one over its
    induced submodels with at most ``base_max_worlds`` worlds.
    """
    if bounds.strategy == "random-tree":
        raise PreconditionViolated("supermodel search supports exhaustive and chain families")
    agents, props = _prepare(f, bounds, "supermodel")
    base_max = bounds.max_worlds if base_max_worlds is None else base_max_worlds
    t0 = time.perf_counter()
    examined = 0
    report = SearchReport("supermodel", str(f), bounds)
    for n in range(bounds.min_worlds, bounds.max_worlds + 1):
        subsets = [s for s in range(1, 1 << n) if bin(s).count("1") <= base_max]
        for chunk in _chunks_for(bounds, n, agents, props):
            big = np.broadcast_to(chunk.batch.eval(f), chunk.shape)
            best = None
            for s in subsets:
                dt = chunk.batch.dtype
                small = np.broadcast_to(chunk.batch.eval(f, dt(s)), chunk.shape)
                hits = np.flatnonzero(small & ~big)
                if hits.size and (best is None or int(hits[0]) < best[0]):
                    best = (int(hits[0]), s)
            examined += chunk.shape[0] * chunk.shape[1] * len(subsets)
            if best is not None:
                flat, s = best
                p, v = divmod(flat, chunk.shape[1])
                model, _ = chunk.decode(p, v)
                small_mask = int(np.broadcast_to(chunk.batch.eval(f, chunk.batch.dtype(s)), chunk.shape)[p, v])
                big_mask = int(big[p, v])
                names = world_names(n)
                world = names[lowest_bit(small_mask & ~big_mask)]
                sub = model.submodel(w for i, w in enumerate(names) if s >> i & 1)
                if not (world in truth_set(sub, f) and world not in truth_set(model, f)):
                    raise WitnessDefect(f"supermodel witness for {f} failed re-verification")
                report.witness = PointedModel(sub, world)
                report.supermodel = model
                report.models_examined = examined
                report.elapsed = time.perf_counter() - t0
                return report
    report.models_examined = examined
    report.elapsed = time.perf_counter() - t0
    return report
