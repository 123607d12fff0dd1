"""Berge paths and cycles: validation, exact search, and a brute-force oracle.

The exact search builds vertex sequences depth-first. Every consecutive pair
of the sequence is a *slot* that needs its own edge, so a prefix is feasible
only if its slots admit a system of distinct representatives. That is kept
as a bipartite matching slot -> edge, extended by one augmenting path per new
slot. A prefix whose slots cannot all be matched has no feasible extension,
so the pruning is exact.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import permutations
from typing import Sequence

from .hypergraph import Hypergraph

HAMILTONIAN = "hamiltonian"
NOT_HAMILTONIAN = "not_hamiltonian"
TIMEOUT = "timeout"
INCONCLUSIVE = "inconclusive"

DEFAULT_MAX_NODES = 10**8
_CHECK_EVERY = 1024


@dataclass(frozen=True)
class BergePath:
    vertices: tuple[int, ...]
    edge_ids: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edge_ids", tuple(self.edge_ids))

    def __len__(self) -> int:
        return len(self.edge_ids)

    def reversed(self) -> "BergePath":
        return BergePath(self.vertices[::-1], self.edge_ids[::-1])

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "edge_ids": list(self.edge_ids)}

    @classmethod
    def from_dict(cls, data: dict) -> "BergePath":
        return cls(tuple(data["vertices"]), tuple(data["edge_ids"]))


@dataclass(frozen=True)
class BergeCycle:
    """Cyclic sequence ``v_0 e_0 v_1 ... v_{t-1} e_{t-1} v_0``.

    Edge ``e_i`` joins ``v_i`` and ``v_{i+1}``; positions are taken modulo
    the length, so ``cycle.v(-1)`` is the last vertex.
    """

    vertices: tuple[int, ...]
    edge_ids: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edge_ids", tuple(self.edge_ids))

    def __len__(self) -> int:
        return len(self.vertices)

    def v(self, i: int) -> int:
        return self.vertices[i % len(self.vertices)]

    def e(self, i: int) -> int:
        return self.edge_ids[i % len(self.edge_ids)]

    def position(self, vertex: int) -> int:
        return self.vertices.index(vertex)

    def shift(self, positions, k: int) -> set[int]:
        """Positions ``{i + k}`` for ``i`` in ``positions`` (the A^{+k} shift)."""
        t = len(self.vertices)
        return {(i + k) % t for i in positions}

    def between(self, a: int, b: int, c: int) -> bool:
        """True iff position ``b`` lies strictly inside the clockwise arc a -> c."""
        t = len(self.vertices)
        return 0 < (b - a) % t < (c - a) % t

    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edge_ids)

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "edge_ids": list(self.edge_ids)}

    @classmethod
    def from_dict(cls, data: dict) -> "BergeCycle":
        if "certificate" in data:
            data = data["certificate"]
        elif "cycle" in data:
            data = data["cycle"]
        if data is None:
            raise ValueError("no cycle in input")
        return cls(tuple(data["vertices"]), tuple(data["edge_ids"]))


@dataclass(frozen=True)
class Violation:
    index: int
    reason: str

    def __str__(self) -> str:
        return f"index {self.index}: {self.reason}"


def _validate_walk(h: Hypergraph, vertices, edge_ids, closed: bool) -> Violation | None:
    n, m = h.n, h.num_edges
    seen: set[int] = set()
    for idx, v in enumerate(vertices):
        if not (isinstance(v, int) and 0 <= v < n):
            return Violation(idx, f"vertex {v!r} not in hypergraph")
        if v in seen:
            return Violation(idx, f"repeated vertex {v}")
        seen.add(v)
    used: set[int] = set()
    t = len(vertices)
    for idx, eid in enumerate(edge_ids):
        if not (isinstance(eid, int) and 0 <= eid < m):
            return Violation(idx, f"edge id {eid!r} not in hypergraph")
        if eid in used:
            return Violation(idx, f"duplicate edge {eid}")
        used.add(eid)
        a, b = vertices[idx], vertices[(idx + 1) % t]
        edge = h.edges[eid]
        if a not in edge or b not in edge:
            return Violation(idx, f"edge {eid}={list(edge)} does not contain {{{a}, {b}}}")
    return None


def validate_path(h: Hypergraph, path: BergePath) -> Violation | None:
    """Return ``None`` if ``path`` is a Berge path of ``h``, else the first violation."""
    if len(path.vertices) == 0:
        return Violation(0, "empty path")
    if len(path.edge_ids) != len(path.vertices) - 1:
        return Violation(
            min(len(path.edge_ids), len(path.vertices)),
            "a path needs exactly one edge fewer than vertices",
        )
    return _validate_walk(h, path.vertices, path.edge_ids, closed=False)


def validate_cycle(h: Hypergraph, cycle: BergeCycle) -> Violation | None:
    """Return ``None`` if ``cycle`` is a Berge cycle of ``h``, else the first violation."""
    if len(cycle.vertices) < 3:
        return Violation(len(cycle.vertices), "a Berge cycle needs at least 3 vertices")
    if len(cycle.edge_ids) != len(cycle.vertices):
        return Violation(
            min(len(cycle.edge_ids), len(cycle.vertices)),
            "a cycle needs as many edges as vertices",
        )
    return _validate_walk(h, cycle.vertices, cycle.edge_ids, closed=True)


def is_valid_cycle(h: Hypergraph, cycle: BergeCycle) -> bool:
    return validate_cycle(h, cycle) is None


@dataclass(frozen=True)
class Budget:
    max_nodes: int | None = DEFAULT_MAX_NODES
    max_seconds: float | None = None


@dataclass(frozen=True)
class HamiltonicityVerdict:
    status: str
    certificate: BergeCycle | None = None
    nodes_explored: int = 0
    elapsed: float = field(default=0.0, compare=False)
    heuristic: bool = False

    @property
    def is_hamiltonian(self) -> bool:
        return self.status == HAMILTONIAN

    def to_dict(self) -> dict:
        # elapsed is left out so that serialized verdicts are reproducible
        return {
            "status": self.status,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "nodes_explored": self.nodes_explored,
            "heuristic": self.heuristic,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HamiltonicityVerdict":
        cert = data.get("certificate")
        return cls(
            status=data["status"],
            certificate=BergeCycle.from_dict(cert) if cert else None,
            nodes_explored=data.get("nodes_explored", 0),
            heuristic=data.get("heuristic", False),
        )


class OutOfBudget(Exception):
    pass


class _Counter:
    def __init__(self, budget: Budget | None):
        budget = budget or Budget()
        self.max_nodes = budget.max_nodes
        self.deadline = (
            time.monotonic() + budget.max_seconds if budget.max_seconds is not None else None
        )
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes % _CHECK_EVERY == 0:
            if self.max_nodes is not None and self.nodes >= self.max_nodes:
                raise OutOfBudget
            if self.deadline is not None and time.monotonic() >= self.deadline:
                raise OutOfBudget


class SlotMatcher:
    """Incremental maximum matching between pair-slots and edge ids.

    Slots are pushed and popped in stack order. Popping the last slot leaves
    the remaining slots perfectly matched, so backtracking needs no undo log.
    """

    def __init__(self, num_edges: int):
        self.owner = [-1] * num_edges
        self.cands: list[Sequence[int]] = []
        self.match: list[int] = []

    def __len__(self) -> int:
        return len(self.match)

    def push(self, cands: Sequence[int]) -> bool:
        t = len(self.match)
        self.cands.append(cands)
        self.match.append(-1)
        owner = self.owner
        for e in cands:
            if owner[e] == -1:
                owner[e] = t
                self.match[t] = e
                return True
        if self._augment(t, set()):
            return True
        self.cands.pop()
        self.match.pop()
        return False

    def _augment(self, t: int, seen: set[int]) -> bool:
        owner = self.owner
        for e in self.cands[t]:
            if e in seen:
                continue
            seen.add(e)
            o = owner[e]
            if o == -1 or self._augment(o, seen):
                owner[e] = t
                self.match[t] = e
                return True
        return False

    def pop(self) -> None:
        e = self.match.pop()
        self.cands.pop()
        self.owner[e] = -1

    def free_count(self, eids: Sequence[int]) -> int:
        owner = self.owner
        return sum(1 for e in eids if owner[e] == -1)


def necessary_condition_failure(h: Hypergraph) -> str | None:
    """Cheap certificates of non-Hamiltonicity, or ``None``."""
    if h.num_edges < h.n:
        return f"only {h.num_edges} edges for {h.n} vertices"
    for v in range(h.n):
        if h.shadow.degree(v) < 2:
            return f"vertex {v} has shadow degree {h.shadow.degree(v)}"
        if h.degree(v) < 2:
            return f"vertex {v} lies in {h.degree(v)} edge(s)"
    return None


class _CycleSearch:
    """Depth-first search for a Berge cycle on exactly ``length`` vertices
    whose smallest vertex is ``anchor``."""

    def __init__(self, h: Hypergraph, counter: _Counter):
        self.h = h
        self.counter = counter
        self.masks = h.shadow.masks
        self.pair = [[h.edges_between(a, b) if a != b else () for b in range(h.n)] for a in range(h.n)]

    def run(self, length: int, anchor: int) -> BergeCycle | None:
        h = self.h
        self.length = length
        self.anchor = anchor
        self.spanning = length == h.n
        # vertices allowed besides the anchor
        self.eligible = ((1 << h.n) - 1) & ~((1 << (anchor + 1)) - 1)
        if (self.eligible.bit_count() + 1) < length:
            return None
        self.matcher = SlotMatcher(h.num_edges)
        self.seq = [anchor]
        self.free = self.eligible
        self.found: BergeCycle | None = None
        self._dfs()
        return self.found

    def _order(self, cands: list[int]) -> list[int]:
        m = self.matcher
        inc = self.h.incident_edges
        return sorted(cands, key=lambda w: (m.free_count(inc(w)), w))

    def _spanning_ok(self, last: int) -> bool:
        # each unplaced vertex still needs two usable neighbours
        free = self.free
        masks = self.masks
        if free and not (masks[last] & free and masks[self.anchor] & free):
            return False
        pool = free | (1 << last) | (1 << self.anchor)
        f = free
        while f:
            low = f & -f
            w = low.bit_length() - 1
            if (masks[w] & pool & ~low).bit_count() < 2:
                return False
            f ^= low
        return True

    def _dfs(self) -> bool:
        seq = self.seq
        last = seq[-1]
        depth = len(seq)
        if depth == self.length:
            if depth < 3 or seq[1] > last or not (self.masks[last] >> self.anchor) & 1:
                return False
            self.counter.tick()
            if self.matcher.push(self.pair[last][self.anchor]):
                self.found = BergeCycle(tuple(seq), tuple(self.matcher.match))
                return True
            return False

        cand_mask = self.masks[last] & self.free
        remaining = self.length - depth
        if self.free.bit_count() < remaining:
            return False
        if remaining == 1:
            cand_mask &= self.masks[self.anchor]
            if depth >= 2:
                cand_mask &= ~((1 << (seq[1] + 1)) - 1)
        elif depth >= 2 and self.spanning and (self.free >> (seq[1] + 1)) == 0:
            return False
        cands = []
        while cand_mask:
            low = cand_mask & -cand_mask
            cands.append(low.bit_length() - 1)
            cand_mask ^= low
        for w in self._order(cands):
            self.counter.tick()
            if not self.matcher.push(self.pair[last][w]):
                continue
            seq.append(w)
            self.free &= ~(1 << w)
            ok = not self.spanning or self._spanning_ok(w)
            if ok and self._dfs():
                return True
            self.free |= 1 << w
            seq.pop()
            self.matcher.pop()
        return False


def find_hamiltonian_berge_cycle(h: Hypergraph, budget: Budget | None = None) -> HamiltonicityVerdict:
    """Decide Berge-Hamiltonicity exactly (within ``budget``)."""
    if h.n < 3:
        raise ValueError("Berge-Hamiltonicity needs n >= 3")
    start = time.monotonic()
    if necessary_condition_failure(h) is not None:
        return HamiltonicityVerdict(NOT_HAMILTONIAN, None, 0, time.monotonic() - start)
    counter = _Counter(budget)
    try:
        cycle = _CycleSearch(h, counter).run(h.n, 0)
    except OutOfBudget:
        return HamiltonicityVerdict(TIMEOUT, None, counter.nodes, time.monotonic() - start)
    status = HAMILTONIAN if cycle is not None else NOT_HAMILTONIAN
    return HamiltonicityVerdict(status, cycle, counter.nodes, time.monotonic() - start)


def find_berge_cycle(h: Hypergraph, length: int, budget: Budget | None = None) -> BergeCycle | None:
    """Some Berge cycle on exactly ``length`` vertices, or ``None``.

    Raises ``OutOfBudget`` when the budget runs out first.
    """
    counter = _Counter(budget)
    return _find_cycle_of_length(h, length, counter)


def _find_cycle_of_length(h: Hypergraph, length: int, counter: _Counter) -> BergeCycle | None:
    if length < 3 or length > h.n:
        return None
    if length == h.n and necessary_condition_failure(h) is not None:
        return None
    search = _CycleSearch(h, counter)
    for anchor in range(h.n - length + 1):
        cycle = search.run(length, anchor)
        if cycle is not None:
            return cycle
    return None


@dataclass(frozen=True)
class MaxCycleResult:
    status: str  # "found", "none" or "timeout"
    cycle: BergeCycle | None
    nodes_explored: int = 0

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "cycle": self.cycle.to_dict() if self.cycle else None,
            "length": len(self.cycle) if self.cycle else 0,
            "nodes_explored": self.nodes_explored,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MaxCycleResult":
        cyc = data.get("cycle")
        return cls(data["status"], BergeCycle.from_dict(cyc) if cyc else None, data.get("nodes_explored", 0))


def max_berge_cycle(h: Hypergraph, budget: Budget | None = None) -> MaxCycleResult:
    """A Berge cycle with the largest possible number of vertices."""
    counter = _Counter(budget)
    try:
        for length in range(h.n, 2, -1):
            cycle = _find_cycle_of_length(h, length, counter)
            if cycle is not None:
                return MaxCycleResult("found", cycle, counter.nodes)
    except OutOfBudget:
        return MaxCycleResult("timeout", None, counter.nodes)
    return MaxCycleResult("none", None, counter.nodes)


def find_hamiltonian_berge_path(
    h: Hypergraph,
    start: int,
    end: int | None = None,
    budget: Budget | None = None,
    priority: Sequence[float] | None = None,
) -> BergePath | None:
    """A Berge path through all vertices beginning at ``start`` (and ending
    at ``end`` if given). ``priority`` reorders candidate vertices, which lets
    callers sample different paths.

    Raises ``OutOfBudget`` when the budget runs out first.
    """
    counter = _Counter(budget)
    n = h.n
    pair = [[h.edges_between(a, b) if a != b else () for b in range(n)] for a in range(n)]
    masks = h.shadow.masks
    matcher = SlotMatcher(h.num_edges)
    seq = [start]
    free = ((1 << n) - 1) & ~(1 << start)
    key = (lambda w: (priority[w], w)) if priority is not None else (lambda w: w)

    def dfs(free: int) -> bool:
        last = seq[-1]
        if free == 0:
            return end is None or last == end
        cand_mask = masks[last] & free
        if end is not None and free != (1 << end):
            cand_mask &= ~(1 << end)
        cands = []
        while cand_mask:
            low = cand_mask & -cand_mask
            cands.append(low.bit_length() - 1)
            cand_mask ^= low
        for w in sorted(cands, key=key):
            counter.tick()
            if not matcher.push(pair[last][w]):
                continue
            seq.append(w)
            if dfs(free & ~(1 << w)):
                return True
            seq.pop()
            matcher.pop()
        return False

    if n == 1:
        return BergePath((start,), ())
    if dfs(free):
        return BergePath(tuple(seq), tuple(matcher.match))
    return None


_ORACLE_MAX_N = 8
_ORACLE_MAX_EDGES = 24


def brute_force_oracle(h: Hypergraph) -> HamiltonicityVerdict:
    """Decide Berge-Hamiltonicity by plain enumeration.

    Every cyclic order starting at vertex 0 (one orientation per cycle) is
    tried, and for each order every injective assignment of edges to the
    consecutive pairs. Shares no code with the matching-based search.
    """
    if h.n < 3:
        raise ValueError("Berge-Hamiltonicity needs n >= 3")
    if h.n > _ORACLE_MAX_N or h.num_edges > _ORACLE_MAX_EDGES:
        raise ValueError(
            f"oracle limited to n <= {_ORACLE_MAX_N} and at most {_ORACLE_MAX_EDGES} edges"
        )
    start = time.monotonic()
    edge_sets = [set(e) for e in h.edges]
    explored = 0

    def containing(a: int, b: int) -> list[int]:
        return [eid for eid, e in enumerate(edge_sets) if a in e and b in e]

    for rest in permutations(range(1, h.n)):
        if rest[0] > rest[-1]:
            continue
        order = (0,) + rest
        options = [containing(order[i], order[(i + 1) % h.n]) for i in range(h.n)]
        if any(not opts for opts in options):
            continue
        chosen: list[int] = []

        def assign(i: int) -> bool:
            nonlocal explored
            if i == len(options):
                return True
            for eid in options[i]:
                explored += 1
                if eid in chosen:
                    continue
                chosen.append(eid)
                if assign(i + 1):
                    return True
                chosen.pop()
            return False

        if assign(0):
            cycle = BergeCycle(order, tuple(chosen))
            return HamiltonicityVerdict(HAMILTONIAN, cycle, explored, time.monotonic() - start)
    return HamiltonicityVerdict(NOT_HAMILTONIAN, None, explored, time.monotonic() - start)


def format_walk(cycle: BergeCycle | BergePath) -> str:
    """One-line walk ``v1 -[e1]- v2 -[e2]- ... - v1``."""
    parts = []
    for i, v in enumerate(cycle.vertices):
        parts.append(str(v))
        if i < len(cycle.edge_ids):
            parts.append(f"-[{cycle.edge_ids[i]}]-")
    if isinstance(cycle, BergeCycle):
        parts.append(str(cycle.vertices[0]))
    return " ".join(parts)
