"""Degree classes, crossings, usable sets and bridges on a Berge cycle.

Positions on a cycle are 0-based and taken modulo its length; edge ``e_i``
joins ``v_i`` and ``v_{i+1}``. All threshold arithmetic uses ``Fraction``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .engine import BergeCycle, BergePath, validate_cycle, validate_path
from .hypergraph import Hypergraph


class PreconditionError(ValueError):
    pass


class NoQualifyingCrossing(RuntimeError):
    """No crossing supports a splice; the input lies outside the degree hypothesis."""


def _require_3graph(h: Hypergraph) -> None:
    if not h.is_3graph():
        raise PreconditionError(f"needs a [3]-graph, found an edge of size {h.max_edge_size}")


def _require_cycle(h: Hypergraph, cycle: BergeCycle) -> None:
    bad = validate_cycle(h, cycle)
    if bad is not None:
        raise PreconditionError(f"not a Berge cycle of this hypergraph ({bad})")


# --- thresholds and degree classes -------------------------------------------


@dataclass(frozen=True)
class ThresholdConfig:
    d0: int
    gamma1: Fraction
    gamma2: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "gamma1", Fraction(self.gamma1))
        object.__setattr__(self, "gamma2", Fraction(self.gamma2))

    def to_dict(self) -> dict:
        return {"d0": self.d0, "gamma1": str(self.gamma1), "gamma2": str(self.gamma2)}

    @classmethod
    def from_dict(cls, data: dict) -> "ThresholdConfig":
        return cls(int(data["d0"]), Fraction(data["gamma1"]), Fraction(data["gamma2"]))


STANDARD_CONFIG = ThresholdConfig(65, Fraction(18), Fraction(13))


@dataclass(frozen=True)
class ConstraintResult:
    name: str
    statement: str
    satisfied: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "statement": self.statement, "satisfied": self.satisfied}

    @classmethod
    def from_dict(cls, data: dict) -> "ConstraintResult":
        return cls(data["name"], data["statement"], data["satisfied"])


def validate_thresholds(cfg: ThresholdConfig, n: int | None = None) -> list[ConstraintResult]:
    d0, g1, g2 = cfg.d0, cfg.gamma1, cfg.gamma2
    results = [
        ConstraintResult("constrain0", "d0 >= 2", d0 >= 2),
        ConstraintResult(
            "constrain00", "4*gamma1 + 8 <= 3*d0 and d0 <= 4*gamma2 + 16",
            4 * g1 + 8 <= 3 * d0 and d0 <= 4 * g2 + 16,
        ),
        ConstraintResult("constrain1", "d0 >= 57 and gamma1 >= 18", d0 >= 57 and g1 >= 18),
        ConstraintResult("constrain2", "gamma2 >= 3/2", g2 >= Fraction(3, 2)),
        ConstraintResult("constrain3", "gamma1 + gamma2 + 4 <= d0", g1 + g2 + 4 <= d0),
        ConstraintResult("constrain4", "d0 >= 65 and gamma2 >= 5/2", d0 >= 65 and g2 >= Fraction(5, 2)),
    ]
    if n is not None:
        results.append(ConstraintResult("n_range", "n >= d0 + 4", n >= d0 + 4))
    return results


def degree_on_cycle(h: Hypergraph, cycle: BergeCycle, v: int) -> int:
    return len(h.neighbors(v) & cycle.vertex_set())


@dataclass(frozen=True)
class VertexClassification:
    n: int
    cfg: ThresholdConfig
    degree_on_cycle: dict[int, int]
    super_small: frozenset[int]
    small: frozenset[int]
    big: frozenset[int]
    super_big: frozenset[int]
    big_not_super: frozenset[int]

    @property
    def super_small_bound(self) -> Fraction:
        return Fraction(self.n, 4) + self.cfg.gamma1

    @property
    def small_bound(self) -> Fraction:
        return Fraction(self.n + self.cfg.d0, 2) - 3

    @property
    def super_big_bound(self) -> Fraction:
        return Fraction(3 * self.n, 4) + self.cfg.gamma2

    def classes_of(self, v: int) -> list[str]:
        out = []
        for name, members in (
            ("S'", self.super_small), ("S", self.small), ("B", self.big),
            ("B'", self.super_big), ("B1", self.big_not_super),
        ):
            if v in members:
                out.append(name)
        return out

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "config": self.cfg.to_dict(),
            "bounds": {
                "super_small": str(self.super_small_bound),
                "small": str(self.small_bound),
                "super_big": str(self.super_big_bound),
            },
            "degree_on_cycle": {str(v): d for v, d in sorted(self.degree_on_cycle.items())},
            "super_small": sorted(self.super_small),
            "small": sorted(self.small),
            "big": sorted(self.big),
            "super_big": sorted(self.super_big),
            "big_not_super": sorted(self.big_not_super),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "VertexClassification":
        return cls(
            n=data["n"],
            cfg=ThresholdConfig.from_dict(data["config"]),
            degree_on_cycle={int(v): d for v, d in data["degree_on_cycle"].items()},
            super_small=frozenset(data["super_small"]),
            small=frozenset(data["small"]),
            big=frozenset(data["big"]),
            super_big=frozenset(data["super_big"]),
            big_not_super=frozenset(data["big_not_super"]),
        )


def classify_from_degrees(n: int, degrees: dict[int, int], cfg: ThresholdConfig) -> VertexClassification:
    s_prime = Fraction(n, 4) + cfg.gamma1
    s = Fraction(n + cfg.d0, 2) - 3
    b_prime = Fraction(3 * n, 4) + cfg.gamma2
    super_small = frozenset(v for v, d in degrees.items() if d < s_prime)
    small = frozenset(v for v, d in degrees.items() if d < s)
    big = frozenset(degrees) - small
    super_big = frozenset(v for v, d in degrees.items() if d >= b_prime)
    return VertexClassification(
        n, cfg, dict(degrees), super_small, small, big, super_big, big - super_big
    )


def classify_vertices(h: Hypergraph, cycle: BergeCycle, cfg: ThresholdConfig) -> VertexClassification:
    _require_cycle(h, cycle)
    degrees = {v: degree_on_cycle(h, cycle, v) for v in range(h.n)}
    return classify_from_degrees(h.n, degrees, cfg)


# --- crossings and closing a path into a cycle -------------------------------


def path_crossings(h: Hypergraph, vertices: Sequence[int]) -> list[int]:
    """Indices ``c`` with ``vertices[c]`` adjacent to the first vertex and
    ``vertices[c-1]`` adjacent to the last one."""
    first, last = vertices[0], vertices[-1]
    nf, nl = h.neighbors(first), h.neighbors(last)
    return [c for c in range(1, len(vertices)) if vertices[c] in nf and vertices[c - 1] in nl]


def crossings(h: Hypergraph, path: BergePath) -> list[int]:
    """Crossing indices of a Hamiltonian Berge path (0-based positions on the path)."""
    if len(path.vertices) != h.n or validate_path(h, path) is not None:
        raise PreconditionError("crossings need a Hamiltonian Berge path")
    return path_crossings(h, path.vertices)


def _closures(h: Hypergraph, path: BergePath) -> Iterator[BergeCycle]:
    """Candidate cycles from the endpoint and crossing splices of ``path``.

    Yields walks that are not necessarily valid; callers validate.
    """
    p, q = path.vertices, path.edge_ids
    m = len(p)
    first, last = p[0], p[-1]
    if h.shadow.adjacent(first, last):
        for e in h.edges_between(first, last):
            yield BergeCycle(p, q + (e,))
            if e == q[0]:
                yield BergeCycle(p[1:], q[1:] + (e,))
            if e == q[-1]:
                yield BergeCycle(p[:-1], q[:-1] + (e,))
        return
    for c in path_crossings(h, p):
        if c < 2:
            continue
        tail_v = p[c:]  # v_i .. v_n
        tail_e = q[c:]  # e_i .. e_{n-1}
        back_v = p[c - 1:0:-1]  # v_{i-1} .. v_2
        back_e = q[c - 2::-1]  # e_{i-2} .. e_1
        for e in h.edges_between(first, p[c]):
            for f in h.edges_between(last, p[c - 1]):
                if e == f:
                    continue
                # both splice edges are free: a cycle through every vertex
                yield BergeCycle((first,) + tail_v + back_v, (e,) + tail_e + (f,) + back_e)
                if e == q[c]:
                    # v_1 reaches v_{i+1} through e_i; v_i is skipped
                    yield BergeCycle((first,) + tail_v[1:] + back_v, tail_e + (f,) + back_e)
                if f == q[c - 2]:
                    # v_n reaches v_{i-2} through e_{i-2}; v_{i-1} is skipped
                    yield BergeCycle((first,) + tail_v + back_v[1:], (e,) + tail_e + back_e)
                if e == q[c] and f == q[c - 2]:
                    yield BergeCycle((first,) + tail_v[1:] + back_v[1:], tail_e + back_e)


def close_path(h: Hypergraph, path: BergePath) -> BergeCycle | None:
    """Longest valid cycle among the splices of ``path``, or ``None``."""
    best = None
    for cyc in _closures(h, path):
        if best is not None and len(cyc) <= len(best):
            continue
        if validate_cycle(h, cyc) is None:
            best = cyc
            if len(best) == len(path.vertices):
                break
    return best


def cycle_from_ham_path(h: Hypergraph, path: BergePath) -> BergeCycle:
    """Turn a Hamiltonian Berge path of a [3]-graph into a Berge cycle on at
    least ``n - 2`` vertices.

    Adjacent endpoints close directly or drop one endpoint. Non-adjacent
    endpoints need shadow-degree sum at least ``n + 2``; the cycle is then
    spliced at a crossing.
    """
    _require_3graph(h)
    if len(path.vertices) != h.n or validate_path(h, path) is not None:
        raise PreconditionError("expected a Hamiltonian Berge path")
    if h.n < 3:
        raise PreconditionError("needs n >= 3")
    first, last = path.vertices[0], path.vertices[-1]
    if not h.shadow.adjacent(first, last):
        total = h.shadow.degree(first) + h.shadow.degree(last)
        if total < h.n + 2:
            raise PreconditionError(
                f"non-adjacent endpoints with degree sum {total} < n + 2 = {h.n + 2}"
            )
    cycle = close_path(h, path)
    if cycle is None or len(cycle) < h.n - 2:
        raise NoQualifyingCrossing("no crossing admits a splice with the required edges")
    return cycle


# --- usable sets -------------------------------------------------------------


def witness_edges(h: Hypergraph, cycle: BergeCycle, u: int, i: int) -> tuple[int, ...]:
    """Edges joining ``u`` to ``v_{i-1}`` other than ``e_{i-2}``."""
    prev = cycle.v(i - 1)
    skip = cycle.e(i - 2)
    return tuple(e for e in h.edges_between(u, prev) if e != skip)


def circular_distance(i: int, j: int, length: int) -> int:
    d = (i - j) % length
    return min(d, length - d)


def _max_nonconsecutive(positions: Iterable[int], length: int) -> list[int]:
    pos = sorted(set(positions))
    if not pos:
        return []
    if len(pos) == length:
        return list(range(0, length - 1 if length % 2 else length, 2))
    members = set(pos)
    # start scanning right after a gap so that no run wraps around
    start = next(p for p in pos if (p - 1) % length not in members)
    chosen = []
    run = 0
    for step in range(length):
        p = (start + step) % length
        if p in members:
            if run % 2 == 0:
                chosen.append(p)
            run += 1
        else:
            run = 0
    return sorted(chosen)


@dataclass(frozen=True)
class UsableSet:
    owner: int
    positions: tuple[int, ...]
    witness: dict[int, tuple[int, ...]]

    def __len__(self) -> int:
        return len(self.positions)

    def to_dict(self) -> dict:
        return {
            "owner": self.owner,
            "positions": list(self.positions),
            "witness": {str(i): list(w) for i, w in sorted(self.witness.items())},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "UsableSet":
        return cls(
            data["owner"],
            tuple(data["positions"]),
            {int(i): tuple(w) for i, w in data["witness"].items()},
        )


def usability_violations(
    h: Hypergraph, cycle: BergeCycle, u: int, positions: Sequence[int]
) -> list[str]:
    """Conditions of usability that ``positions`` break (empty when usable)."""
    out = []
    length = len(cycle)
    wit = {i: witness_edges(h, cycle, u, i) for i in positions}
    for i in positions:
        if not wit[i]:
            out.append(f"condition 1: position {i} has no witness edge")
    for i, j in combinations(positions, 2):
        if circular_distance(i, j, length) < 2:
            out.append(f"condition 2: positions {i} and {j} are consecutive")
        if wit[i] and wit[j] and len(wit[i]) == 1 and wit[i] == wit[j]:
            out.append(f"condition 3: positions {i} and {j} share their only witness edge")
    return out


def usable_set(h: Hypergraph, cycle: BergeCycle, u: int) -> UsableSet:
    """A usable set for the off-cycle vertex ``u`` with at least
    ``d_C(u) / 6`` positions."""
    _require_3graph(h)
    _require_cycle(h, cycle)
    if u in cycle.vertex_set() or not 0 <= u < h.n:
        raise PreconditionError(f"vertex {u} must be a vertex off the cycle")
    length = len(cycle)
    nbrs = h.neighbors(u)
    on_cycle = [r for r in range(length) if cycle.v(r) in nbrs]
    bad = [r for r in on_cycle if h.edges_between(u, cycle.v(r)) == (cycle.e(r - 1),)]
    predecessors = {(r - 1) % length for r in bad}
    blocked = {(r - k) % length for r in bad for k in range(3)}
    spread = _max_nonconsecutive((r for r in on_cycle if r not in blocked), length)
    start = sorted(cycle.shift(predecessors | set(spread), 1))

    witness = {i: witness_edges(h, cycle, u, i) for i in start}
    dropped: set[int] = set()
    for i, j in combinations(start, 2):
        if i in dropped or j in dropped:
            continue
        if len(witness[i]) == 1 and witness[i] == witness[j]:
            dropped.add(j)
    positions = tuple(i for i in start if i not in dropped)
    return UsableSet(u, positions, {i: witness[i] for i in positions})


# --- bridges -----------------------------------------------------------------


@dataclass(frozen=True)
class BridgeRecord:
    i: int
    j: int
    k: int
    edge_id: int
    # 1: i->k->j, e_{k+1}; 2: i->k->j, e_{k-1}; 3: j->k->i, e_{k-1}; 4: j->k->i, e_{k+1}
    case: int

    def to_dict(self) -> dict:
        return {"i": self.i, "j": self.j, "k": self.k, "edge_id": self.edge_id, "case": self.case}

    @classmethod
    def from_dict(cls, data: dict) -> "BridgeRecord":
        return cls(data["i"], data["j"], data["k"], data["edge_id"], data["case"])


def bridge_records(h: Hypergraph, cycle: BergeCycle, i: int, j: int) -> list[BridgeRecord]:
    """Every (i, j; k)-bridge occurrence, one record per (k, case)."""
    length = len(cycle)
    if i % length == j % length:
        raise ValueError("bridge positions must differ")
    i, j = i % length, j % length
    where = {v: p for p, v in enumerate(cycle.vertices)}
    found = []
    # scan cycle edges: a 3-edge e_m = {v_m, v_{m+1}, v_p} can only be e_{k+1}
    # with k = m - 1 or e_{k-1} with k = m + 1
    for m in range(length):
        eid = cycle.e(m)
        edge = h.edges[eid]
        if len(edge) != 3:
            continue
        rest = [w for w in edge if w != cycle.v(m) and w != cycle.v(m + 1)]
        if len(rest) != 1 or rest[0] not in where:
            continue
        p = where[rest[0]]
        k = (m - 1) % length
        if k != i and k != j:
            if p == i and cycle.between(i, k, j):
                found.append(BridgeRecord(i, j, k, eid, 1))
            if p == j and cycle.between(j, k, i):
                found.append(BridgeRecord(i, j, k, eid, 4))
        k = (m + 1) % length
        if k != i and k != j:
            if p == j and cycle.between(i, k, j):
                found.append(BridgeRecord(i, j, k, eid, 2))
            if p == i and cycle.between(j, k, i):
                found.append(BridgeRecord(i, j, k, eid, 3))
    found.sort(key=lambda r: (r.k, r.case))
    return found


def bridges(h: Hypergraph, cycle: BergeCycle, i: int, j: int) -> tuple[BridgeRecord, ...]:
    """R(v_i, v_j): the bridges produced by the pair, one record per edge."""
    seen: set[int] = set()
    out = []
    for rec in bridge_records(h, cycle, i, j):
        if rec.edge_id not in seen:
            seen.add(rec.edge_id)
            out.append(rec)
    return tuple(out)


def bridge_union(h: Hypergraph, cycle: BergeCycle, positions: Iterable[int] | None = None) -> set[int]:
    pos = range(len(cycle)) if positions is None else sorted(set(positions))
    union: set[int] = set()
    for i, j in combinations(pos, 2):
        union.update(r.edge_id for r in bridges(h, cycle, i, j))
    return union


def bridge_multiplicity(h: Hypergraph, cycle: BergeCycle, positions: Iterable[int]) -> dict[int, int]:
    """Number of pairs of ``positions`` producing each bridge edge."""
    pos = sorted({p % len(cycle) for p in positions})
    counts: Counter[int] = Counter()
    for i, j in combinations(pos, 2):
        counts.update(r.edge_id for r in bridges(h, cycle, i, j))
    if counts and max(counts.values()) > len(pos) - 1:
        raise AssertionError("a bridge is produced by more than |X| - 1 pairs")
    return dict(sorted(counts.items()))


# --- diagnostics -------------------------------------------------------------


def diagnostics(h: Hypergraph, cycle: BergeCycle, cfg: ThresholdConfig) -> dict:
    """Bridge counts next to their degree lower bounds, per off-cycle vertex;
    reported, not asserted."""
    _require_3graph(h)
    cls = classify_vertices(h, cycle, cfg)
    length = len(cycle)
    d = cls.degree_on_cycle
    union = bridge_union(h, cycle)
    report = {
        "n": h.n,
        "cycle_length": length,
        "classification": cls.to_dict(),
        "bridge_union_size": len(union),
        "cycle_edges": length,
        "off_cycle": [],
    }
    for u in sorted(set(range(h.n)) - cycle.vertex_set()):
        us = usable_set(h, cycle, u)
        members = [cycle.v(i) for i in us.positions]
        pairs = []
        for i, j in combinations(us.positions, 2):
            vi, vj = cycle.v(i), cycle.v(j)
            pairs.append({
                "positions": [i, j],
                "bridges": len(bridges(h, cycle, i, j)),
                "pair_bound": d[vi] + d[vj] - length - 4,
            })
        big_not_super = [i for i in us.positions if cycle.v(i) in cls.big_not_super]
        shifted = sorted(cycle.shift(big_not_super, 1))
        shifted_pairs = []
        for i, j in combinations(shifted, 2):
            vi, vj = cycle.v(i), cycle.v(j)
            shifted_pairs.append({
                "positions": [i, j],
                "bridges": len(bridges(h, cycle, i, j)),
                "stated_bound": d[vi] + d[vj] - 6,
                "derived_bound": d[vi] + d[vj] - length - 6,
            })
        report["off_cycle"].append({
            "vertex": u,
            "degree_on_cycle": d[u],
            "usable": us.to_dict(),
            "usable_in_small": sum(1 for v in members if v in cls.small),
            "usable_in_big": sum(1 for v in members if v in cls.big),
            "usable_in_super_big": sum(1 for v in members if v in cls.super_big),
            "in_super_small": u in cls.super_small,
            "usable_pairs": pairs,
            "shifted_big_not_super": shifted,
            "shifted_pairs": shifted_pairs,
        })
    return report
