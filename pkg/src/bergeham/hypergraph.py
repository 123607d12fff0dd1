"""Hypergraphs, their 2-shadow, and the Ore-type degree condition.

Vertices are the integers ``0..n-1``. Edges are stored as sorted tuples and
must be pairwise distinct with at least two vertices each. A hypergraph is
immutable once built; the shadow is computed eagerly in ``__post_init__``.
"""

from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass, field
from itertools import combinations
from typing import IO, Iterable, Sequence


class HypergraphFormatError(ValueError):
    """Raised when a hypergraph file or edge list violates the format."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class ShadowGraph:
    n: int
    neighbors: tuple[frozenset[int], ...]
    # bit v of masks[u] set iff u and v are adjacent
    masks: tuple[int, ...]

    def adjacent(self, u: int, v: int) -> bool:
        return (self.masks[u] >> v) & 1 == 1

    def degree(self, u: int) -> int:
        return len(self.neighbors[u])

    @property
    def degrees(self) -> list[int]:
        return [len(nb) for nb in self.neighbors]

    def edge_count(self) -> int:
        return sum(len(nb) for nb in self.neighbors) // 2

    def is_complete(self) -> bool:
        return all(len(nb) == self.n - 1 for nb in self.neighbors)


@dataclass(frozen=True)
class Hypergraph:
    n: int
    edges: tuple[tuple[int, ...], ...]
    shadow: ShadowGraph = field(init=False, repr=False, compare=False)
    _pair_edges: dict = field(init=False, repr=False, compare=False)
    _incidence: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        edges = tuple(tuple(sorted(e)) for e in self.edges)
        _check_edges(self.n, edges)
        object.__setattr__(self, "edges", edges)

        pair_edges: dict[tuple[int, int], list[int]] = {}
        incidence: list[list[int]] = [[] for _ in range(self.n)]
        neighbors: list[set[int]] = [set() for _ in range(self.n)]
        for eid, e in enumerate(edges):
            for v in e:
                incidence[v].append(eid)
            for a, b in combinations(e, 2):
                pair_edges.setdefault((a, b), []).append(eid)
                neighbors[a].add(b)
                neighbors[b].add(a)
        masks = []
        for nb in neighbors:
            m = 0
            for v in nb:
                m |= 1 << v
            masks.append(m)
        object.__setattr__(
            self, "_pair_edges", {k: tuple(v) for k, v in pair_edges.items()}
        )
        object.__setattr__(self, "_incidence", tuple(tuple(x) for x in incidence))
        object.__setattr__(
            self,
            "shadow",
            ShadowGraph(self.n, tuple(frozenset(nb) for nb in neighbors), tuple(masks)),
        )

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def max_edge_size(self) -> int:
        return max((len(e) for e in self.edges), default=0)

    def is_3graph(self) -> bool:
        return self.max_edge_size <= 3

    def edge(self, eid: int) -> tuple[int, ...]:
        return self.edges[eid]

    def edges_between(self, u: int, v: int) -> tuple[int, ...]:
        """Ids of the edges containing both ``u`` and ``v``, in input order."""
        _check_pair(self.n, u, v)
        if u > v:
            u, v = v, u
        return self._pair_edges.get((u, v), ())

    def codegree(self, u: int, v: int) -> int:
        return len(self.edges_between(u, v))

    def incident_edges(self, v: int) -> tuple[int, ...]:
        return self._incidence[v]

    def degree(self, v: int) -> int:
        """Number of edges containing ``v`` (not the shadow degree)."""
        return len(self._incidence[v])

    def neighbors(self, v: int) -> frozenset[int]:
        return self.shadow.neighbors[v]

    def with_edges(self, extra: Iterable[Sequence[int]]) -> "Hypergraph":
        return Hypergraph(self.n, self.edges + tuple(tuple(sorted(e)) for e in extra))

    def canonical(self) -> "Hypergraph":
        return Hypergraph(self.n, tuple(sorted(self.edges)))

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, data: dict) -> "Hypergraph":
        if not isinstance(data, dict) or "n" not in data or "edges" not in data:
            raise HypergraphFormatError('expected an object with "n" and "edges"')
        n = data["n"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise HypergraphFormatError(f"invalid vertex count {n!r}")
        edges = []
        for idx, e in enumerate(data["edges"]):
            if not isinstance(e, list) or not all(
                isinstance(x, int) and not isinstance(x, bool) for x in e
            ):
                raise HypergraphFormatError(f"edge {idx} is not a list of integers")
            edges.append(tuple(e))
        return cls(n, tuple(edges))


def _check_pair(n: int, u: int, v: int) -> None:
    if u == v:
        raise ValueError(f"vertices must be distinct, got {u} twice")
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError(f"vertex out of range for n={n}: ({u}, {v})")


def _check_edges(n: int, edges: Sequence[tuple[int, ...]], lines: Sequence[int] | None = None) -> None:
    seen: dict[tuple[int, ...], int] = {}
    for idx, e in enumerate(edges):
        line = lines[idx] if lines is not None else None
        where = "" if lines is not None else f"edge {idx}: "
        if len(set(e)) != len(e):
            raise HypergraphFormatError(f"{where}repeated vertex in edge {list(e)}", line)
        if len(e) < 2:
            raise HypergraphFormatError(f"{where}edge {list(e)} has fewer than 2 vertices", line)
        for v in e:
            if not 0 <= v < n:
                raise HypergraphFormatError(f"{where}vertex {v} out of range for n={n}", line)
        if e in seen:
            raise HypergraphFormatError(f"{where}duplicate edge {list(e)}", line)
        seen[e] = idx


def parse_hg(text: str) -> Hypergraph:
    """Parse the line-oriented ``.hg`` format."""
    n = None
    edges: list[tuple[int, ...]] = []
    lines: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            values = [int(tok) for tok in line.split()]
        except ValueError:
            raise HypergraphFormatError(f"non-integer token in {raw.strip()!r}", lineno) from None
        if n is None:
            if len(values) != 1 or values[0] < 0:
                raise HypergraphFormatError("first line must be the vertex count", lineno)
            n = values[0]
            continue
        edges.append(tuple(sorted(values)))
        lines.append(lineno)
    if n is None:
        raise HypergraphFormatError("missing vertex count")
    _check_edges(n, edges, lines)
    return Hypergraph(n, tuple(edges))


def format_hg(h: Hypergraph) -> str:
    lines = [str(h.n)] + [" ".join(map(str, e)) for e in sorted(h.edges)]
    return "\n".join(lines) + "\n"


def format_json(h: Hypergraph) -> str:
    return json.dumps(h.canonical().to_dict(), separators=(",", ":")) + "\n"


def loads(text: str) -> Hypergraph:
    """Parse either format; structured input starts with ``{``."""
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise HypergraphFormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
        return Hypergraph.from_dict(data)
    return parse_hg(text)


def load(source: str | os.PathLike | IO[str]) -> Hypergraph:
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            return loads(fh.read())
    return loads(source.read())


def store(h: Hypergraph, target: str | os.PathLike | IO[str], fmt: str | None = None) -> None:
    """Write ``h`` canonically. ``fmt`` is ``"hg"`` or ``"json"``; by default
    it is inferred from the file suffix."""
    if fmt is None:
        name = os.fspath(target) if isinstance(target, (str, os.PathLike)) else ""
        fmt = "json" if str(name).endswith(".json") else "hg"
    text = format_json(h) if fmt == "json" else format_hg(h)
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        target.write(text)


def dumps(h: Hypergraph, fmt: str = "hg") -> str:
    buf = io.StringIO()
    store(h, buf, fmt)
    return buf.getvalue()


@dataclass(frozen=True)
class OreReport:
    n: int
    min_nonadjacent_sum: int | None
    witness_pair: tuple[int, int] | None
    covering: bool
    # None means unbounded (covering hypergraph)
    satisfied_d0: int | None

    def satisfies(self, d0: int) -> bool:
        return self.covering or self.satisfied_d0 >= d0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "min_nonadjacent_sum": self.min_nonadjacent_sum,
            "witness_pair": list(self.witness_pair) if self.witness_pair else None,
            "covering": self.covering,
            "satisfied_d0": self.satisfied_d0,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "OreReport":
        wp = data.get("witness_pair")
        return cls(
            n=data["n"],
            min_nonadjacent_sum=data["min_nonadjacent_sum"],
            witness_pair=tuple(wp) if wp else None,
            covering=data["covering"],
            satisfied_d0=data["satisfied_d0"],
        )


def nonadjacent_pairs(h: Hypergraph) -> list[tuple[int, int]]:
    sh = h.shadow
    return [
        (u, v)
        for u in range(h.n)
        for v in range(u + 1, h.n)
        if not sh.adjacent(u, v)
    ]


def ore_report(h: Hypergraph) -> OreReport:
    """Minimum shadow-degree sum over non-adjacent pairs."""
    deg = h.shadow.degrees
    best = None
    witness = None
    for u, v in nonadjacent_pairs(h):
        s = deg[u] + deg[v]
        if best is None or s < best:
            best, witness = s, (u, v)
    if best is None:
        return OreReport(h.n, None, None, True, None)
    return OreReport(h.n, best, witness, False, best - h.n)


def minimizing_pairs(h: Hypergraph) -> list[tuple[int, int]]:
    deg = h.shadow.degrees
    pairs = nonadjacent_pairs(h)
    if not pairs:
        return []
    best = min(deg[u] + deg[v] for u, v in pairs)
    return [(u, v) for u, v in pairs if deg[u] + deg[v] == best]


def satisfies_ore(h: Hypergraph, d0: int) -> bool:
    return ore_report(h).satisfies(d0)
