"""Rotation-extension moves that grow a Berge cycle, and a heuristic built on them.

Each move writes down an explicit closed walk through ``V(C) + u`` (possibly
skipping one or two cycle vertices) and keeps it only if it validates as a
Berge cycle. A move therefore never returns an invalid cycle; its only
failure mode is returning nothing.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from .engine import (
    HAMILTONIAN,
    INCONCLUSIVE,
    BergeCycle,
    BergePath,
    Budget,
    HamiltonicityVerdict,
    OutOfBudget,
    SlotMatcher,
    _Counter,
    _find_cycle_of_length,
    validate_cycle,
    validate_path,
)
from .hypergraph import Hypergraph
from .machinery import (
    ThresholdConfig,
    circular_distance,
    classify_vertices,
    close_path,
    usable_set,
    witness_edges,
)

M1 = "M1_usable_pair"
M2 = "M2_double_rotation"
M3 = "M3_skip_one"
M4 = "M4_skip_two"
CROSSING_CLOSE = "CROSSING_CLOSE"
MOVES = (M1, M2, M3, M4, CROSSING_CLOSE)


@dataclass(frozen=True)
class ExtensionResult:
    move: str
    new_cycle: BergeCycle
    gained: tuple[int, ...]
    dropped: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "move": self.move,
            "new_cycle": self.new_cycle.to_dict(),
            "gained": list(self.gained),
            "dropped": list(self.dropped),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExtensionResult":
        return cls(
            data["move"],
            BergeCycle.from_dict(data["new_cycle"]),
            tuple(data["gained"]),
            tuple(data["dropped"]),
        )


class _Walk:
    """Closed-walk builder that moves along ``cycle`` by position."""

    def __init__(self, cycle: BergeCycle, start: int):
        self.c = cycle
        self.t = len(cycle)
        self.pos: int | None = start % self.t
        self.vs = [cycle.v(start)]
        self.es: list[int] = []

    def fwd(self, to: int) -> "_Walk":
        to %= self.t
        while self.pos != to:
            self.es.append(self.c.e(self.pos))
            self.pos = (self.pos + 1) % self.t
            self.vs.append(self.c.v(self.pos))
        return self

    def bwd(self, to: int) -> "_Walk":
        to %= self.t
        while self.pos != to:
            self.pos = (self.pos - 1) % self.t
            self.es.append(self.c.e(self.pos))
            self.vs.append(self.c.v(self.pos))
        return self

    def hop(self, edge: int, pos: int) -> "_Walk":
        self.es.append(edge)
        self.pos = pos % self.t
        self.vs.append(self.c.v(pos))
        return self

    def off(self, edge: int, vertex: int) -> "_Walk":
        self.es.append(edge)
        self.pos = None
        self.vs.append(vertex)
        return self

    def close(self, edge: int) -> BergeCycle:
        return BergeCycle(tuple(self.vs), tuple(self.es) + (edge,))


class _Mover:
    def __init__(self, h: Hypergraph, counter: _Counter):
        self.h = h
        self.counter = counter

    def ok(self, cyc: BergeCycle) -> bool:
        self.counter.tick()
        return validate_cycle(self.h, cyc) is None

    def off_cycle(self, cycle: BergeCycle) -> list[int]:
        on = cycle.vertex_set()
        return [u for u in range(self.h.n) if u not in on and self.h.neighbors(u) & on]

    def usable_positions(self, cycle: BergeCycle, u: int) -> dict[int, tuple[int, ...]]:
        return {
            i: w for i in range(len(cycle)) if (w := witness_edges(self.h, cycle, u, i))
        }

    def usable_pairs(self, cycle, wit) -> Iterator[tuple[int, int]]:
        t = len(cycle)
        for i, j in combinations(sorted(wit), 2):
            if circular_distance(i, j, t) >= 2:
                yield i, j

    # M1: u goes between v_{i-1} and v_{j-1}; a chord f joins v_i and v_j
    def m1(self, cycle: BergeCycle, u: int) -> Iterator[BergeCycle]:
        h = self.h
        wit = self.usable_positions(cycle, u)
        for i, j in self.usable_pairs(cycle, wit):
            skip = {cycle.e(i), cycle.e(j)}
            for f in h.edges_between(cycle.v(i), cycle.v(j)):
                if f in skip:
                    continue
                for wi in wit[i]:
                    for wj in wit[j]:
                        if len({wi, wj, f}) == 3:
                            yield _Walk(cycle, j).fwd(i - 1).off(wi, u).hop(wj, j - 1).bwd(i).close(f)

    # M2: two chords v_i v_k and v_j v_{k+1} rotate the arc between them
    def m2(self, cycle: BergeCycle, u: int) -> Iterator[BergeCycle]:
        h = self.h
        t = len(cycle)
        wit = self.usable_positions(cycle, u)
        for a, b in self.usable_pairs(cycle, wit):
            for i, j in ((a, b), (b, a)):
                vi, vj = cycle.v(i), cycle.v(j)
                for k in range(t):
                    if not cycle.between(j, k, i) or (k + 1) % t == i:
                        continue
                    fis = h.edges_between(vi, cycle.v(k))
                    if not fis:
                        continue
                    fjs = h.edges_between(vj, cycle.v(k + 1)) if vj != cycle.v(k + 1) else ()
                    for wi in wit[i]:
                        for wj in wit[j]:
                            if wi == wj:
                                continue
                            for fj in fjs:
                                if fj == wi:
                                    # the chord doubles as a witness: plain insertion before v_j
                                    yield _Walk(cycle, j).fwd(j - 1).off(wj, u).close(fj)
                                    continue
                                for fi in fis:
                                    if len({fi, fj, wi, wj}) == 4:
                                        yield (
                                            _Walk(cycle, j).fwd(k).hop(fi, i).fwd(j - 1)
                                            .off(wj, u).hop(wi, i - 1).bwd(k + 1).close(fj)
                                        )

    # M3: walks through V(C) + u - v_i
    def m3(self, cycle: BergeCycle, u: int, order: list[int]) -> Iterator[BergeCycle]:
        h = self.h
        for i in order:
            cur, nxt = cycle.v(i), cycle.v(i + 1)
            ws = witness_edges(h, cycle, u, i)
            for f in h.edges_between(u, nxt):
                for w in ws:
                    if f != w:
                        yield _Walk(cycle, i + 1).fwd(i - 1).off(w, u).close(f)
                for g in h.edges_between(u, cur):
                    if g != cycle.e(i - 1):
                        yield _Walk(cycle, i + 1).fwd(i).off(g, u).close(f)
                    else:
                        yield _Walk(cycle, i + 1).fwd(i - 1).off(g, u).close(f)

    # M4: walks through V(C) + u minus two vertices
    def m4(self, cycle: BergeCycle, u: int, order: list[int]) -> Iterator[BergeCycle]:
        h = self.h
        t = len(cycle)
        wit = {i: witness_edges(h, cycle, u, i) for i in range(t)}
        for i in order:
            for g in h.edges_between(u, cycle.v(i + 2)) if t > 4 else ():
                for w in wit[i]:
                    if g != w:
                        yield _Walk(cycle, i + 2).fwd(i - 1).off(w, u).close(g)
        for i, j in combinations(order, 2):
            if circular_distance(i, j, t) < 2 or not wit[i] or not wit[j]:
                continue
            for a, b in ((i, j), (j, i)):
                if cycle.v(a + 1) == cycle.v(b + 1):
                    continue
                for f in h.edges_between(cycle.v(a + 1), cycle.v(b + 1)):
                    for wa in wit[a]:
                        for wb in wit[b]:
                            if wa == wb:
                                continue
                            if f == wb:
                                yield _Walk(cycle, b).fwd(b - 1).off(f, u).close(cycle.e(b - 1))
                            elif f != wa:
                                yield (
                                    _Walk(cycle, b + 1).fwd(a - 1).off(wa, u)
                                    .hop(wb, b - 1).bwd(a + 1).close(f)
                                )

    # CROSSING_CLOSE: attach u to the cycle opened at one edge, then splice
    def crossing(self, cycle: BergeCycle, u: int) -> Iterator[BergeCycle]:
        h = self.h
        t = len(cycle)
        for p in range(t):
            for a in h.edges_between(u, cycle.v(p)):
                for forward in (True, False):
                    w = _Walk(cycle, p)
                    w.fwd(p - 1) if forward else w.bwd(p + 1)
                    path = BergePath((u,) + tuple(w.vs), (a,) + tuple(w.es))
                    self.counter.tick()
                    if validate_path(h, path) is not None:
                        continue
                    cyc = close_path(h, path)
                    if cyc is not None and len(cyc) == t + 1:
                        yield cyc

    def grow(self, cycle: BergeCycle, moves=(M1, M2, CROSSING_CLOSE)) -> tuple[str, BergeCycle] | None:
        for move in moves:
            for u in self.off_cycle(cycle):
                gen = {M1: self.m1, M2: self.m2, CROSSING_CLOSE: self.crossing}[move](cycle, u)
                for cyc in gen:
                    if len(cyc) > len(cycle) and self.ok(cyc):
                        return move, cyc
        return None

    def regain(self, start: BergeCycle, target: int) -> BergeCycle | None:
        """Grow ``start`` with the cheap moves until it has more than ``target`` vertices."""
        cyc = start
        while len(cyc) <= target:
            step = self.grow(cyc, (M1, CROSSING_CLOSE))
            if step is None:
                return None
            cyc = step[1]
        return cyc


def try_extend(
    h: Hypergraph,
    cycle: BergeCycle,
    cfg: ThresholdConfig | None = None,
    budget: Budget | None = None,
) -> ExtensionResult | None:
    """Try the moves M1, M2, M3/M4, CROSSING_CLOSE in that order and return
    the first strictly longer cycle found, or ``None``.

    With ``cfg``, the skip moves visit the positions of ``U_u`` inside the
    big-but-not-super-big class first.
    """
    bad = validate_cycle(h, cycle)
    if bad is not None:
        raise ValueError(f"not a Berge cycle of this hypergraph ({bad})")
    if len(cycle) == h.n:
        return None
    counter = _Counter(budget)
    try:
        return _try_extend(h, cycle, cfg, _Mover(h, counter))
    except OutOfBudget:
        return None


def _result(move: str, old: BergeCycle, new: BergeCycle) -> ExtensionResult:
    gained = tuple(sorted(new.vertex_set() - old.vertex_set()))
    dropped = tuple(sorted(old.vertex_set() - new.vertex_set()))
    return ExtensionResult(move, new, gained, dropped)


def _skip_order(h: Hypergraph, cycle: BergeCycle, u: int, cfg: ThresholdConfig | None) -> list[int]:
    t = len(cycle)
    if cfg is None or not h.is_3graph():
        return list(range(t))
    cls = classify_vertices(h, cycle, cfg)
    preferred = [i for i in usable_set(h, cycle, u).positions if cycle.v(i) in cls.big_not_super]
    return preferred + [i for i in range(t) if i not in preferred]


def _try_extend(h: Hypergraph, cycle: BergeCycle, cfg, mover: _Mover) -> ExtensionResult | None:
    step = mover.grow(cycle, (M1, M2))
    if step is not None:
        return _result(step[0], cycle, step[1])
    t = len(cycle)
    for move in (M3, M4):
        for u in mover.off_cycle(cycle):
            order = _skip_order(h, cycle, u, cfg)
            gen = mover.m3(cycle, u, order) if move == M3 else mover.m4(cycle, u, order)
            for cand in gen:
                if not mover.ok(cand):
                    continue
                if len(cand) > t:
                    return _result(move, cycle, cand)
                regained = mover.regain(cand, t)
                if regained is not None:
                    return _result(move, cycle, regained)
    step = mover.grow(cycle, (CROSSING_CLOSE,))
    if step is not None:
        return _result(step[0], cycle, step[1])
    return None


def _greedy_path(h: Hypergraph, counter: _Counter) -> BergePath:
    n = h.n
    start = min(range(n), key=lambda v: (h.shadow.degree(v), v))
    matcher = SlotMatcher(h.num_edges)
    seq = [start]
    used = {start}
    while True:
        last = seq[-1]
        cands = sorted(
            (w for w in h.neighbors(last) if w not in used),
            key=lambda w: (len(h.neighbors(w) - used), w),
        )
        for w in cands:
            counter.tick()
            if matcher.push(h.edges_between(last, w)):
                seq.append(w)
                used.add(w)
                break
        else:
            break
    return BergePath(tuple(seq), tuple(matcher.match))


def heuristic_hamiltonian(
    h: Hypergraph,
    cfg: ThresholdConfig | None = None,
    budget: Budget | None = None,
) -> HamiltonicityVerdict:
    """Greedy path, close it, then extend until spanning or stuck.

    Returns ``hamiltonian`` with a validated certificate, or ``inconclusive``;
    never a negative verdict.
    """
    if h.n < 3:
        raise ValueError("Berge-Hamiltonicity needs n >= 3")
    begin = time.monotonic()
    counter = _Counter(budget)

    def verdict(cycle: BergeCycle | None) -> HamiltonicityVerdict:
        if cycle is not None and len(cycle) == h.n and validate_cycle(h, cycle) is None:
            return HamiltonicityVerdict(HAMILTONIAN, cycle, counter.nodes, time.monotonic() - begin, True)
        return HamiltonicityVerdict(INCONCLUSIVE, None, counter.nodes, time.monotonic() - begin, True)

    try:
        path = _greedy_path(h, counter)
        cycle = close_path(h, path) if len(path.vertices) >= 3 else None
        if cycle is None:
            cycle = _find_cycle_of_length(h, 3, counter)
        if cycle is None:
            return verdict(None)
        mover = _Mover(h, counter)
        while len(cycle) < h.n:
            res = _try_extend(h, cycle, cfg, mover)
            if res is None:
                break
            cycle = res.new_cycle
    except OutOfBudget:
        return verdict(None)
    return verdict(cycle)
