"""Extremal constructions and seeded random instance families.

Randomness comes from numpy's PCG64 bit generator. A per-sample seed is the
first 8 bytes (little endian) of ``blake2b`` over the decimal parts joined by
``:``, so campaigns are reproducible independent of worker scheduling.
"""

from __future__ import annotations

import hashlib
from dataclasses import asdict, dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .hypergraph import Hypergraph, minimizing_pairs, ore_report

FAMILIES = ("hprime", "blowup", "luwang", "random", "random_ore", "random_covering")


def derive_seed(*parts: int) -> int:
    key = ":".join(str(int(p)) for p in parts).encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def gen_hprime(n: int, r: int = 3) -> Hypergraph:
    """Complete r-graph on vertices 0..n-2 plus vertex n-1 in a single edge
    ``{0, ..., r-2, n-1}``."""
    if not 3 <= r < n:
        raise ValueError(f"hprime needs 3 <= r < n, got r={r}, n={n}")
    edges = list(combinations(range(n - 1), r))
    edges.append(tuple(range(r - 1)) + (n - 1,))
    return Hypergraph(n, tuple(edges))


def gen_blowup(k: int, part_size: int) -> Hypergraph:
    """Blow-up of K_k: k parts of ``part_size`` vertices, one edge per pair of parts."""
    if k < 2 or part_size < 1:
        raise ValueError("blowup needs k >= 2 and part_size >= 1")
    n = k * part_size
    if comb(k, 2) > n:
        raise ValueError(f"blowup needs C(k,2) <= n, got C({k},2)={comb(k, 2)} > {n}")
    parts = [tuple(range(i * part_size, (i + 1) * part_size)) for i in range(k)]
    edges = tuple(parts[i] + parts[j] for i, j in combinations(range(k), 2))
    return Hypergraph(n, edges)


def gen_luwang() -> Hypergraph:
    return Hypergraph(5, ((0, 1, 2), (0, 1, 3), (0, 1, 4), (2, 3, 4)))


def gen_random(n: int, p2: float, p3: float, seed: int) -> Hypergraph:
    """Each 2-subset with probability ``p2``, each 3-subset with ``p3``."""
    if n < 3:
        raise ValueError("n must be at least 3")
    if not (0.0 <= p2 <= 1.0 and 0.0 <= p3 <= 1.0):
        raise ValueError("probabilities must lie in [0, 1]")
    rng = make_rng(seed)
    pairs = list(combinations(range(n), 2))
    triples = list(combinations(range(n), 3))
    draws = rng.random(len(pairs) + len(triples))
    edges = [e for e, x in zip(pairs, draws[: len(pairs)]) if x < p2]
    edges += [e for e, x in zip(triples, draws[len(pairs):]) if x < p3]
    return Hypergraph(n, tuple(edges))


class GenerationFailed(RuntimeError):
    pass


def _densify(h: Hypergraph, rng: np.random.Generator, done, max_steps: int) -> Hypergraph:
    edges = list(h.edges)
    for _ in range(max_steps):
        if done(h):
            return h
        pairs = minimizing_pairs(h)
        u, v = pairs[int(rng.integers(len(pairs)))]
        others = [w for w in range(h.n) if w != u and w != v]
        w = others[int(rng.integers(len(others)))]
        # u, v are non-adjacent, so no existing edge contains the new triple
        edges.append(tuple(sorted((u, v, w))))
        h = Hypergraph(h.n, tuple(edges))
    if done(h):
        return h
    raise GenerationFailed(f"condition not reached after {max_steps} densification steps")


def gen_random_ore(
    n: int,
    d0: int,
    seed: int,
    max_attempts: int = 10_000,
    p2: float | None = None,
    p3: float | None = None,
) -> Hypergraph:
    """Random [3]-graph pushed to satisfy Ore(d0).

    Starts from ``gen_random`` (densities drawn from the seed unless given)
    and repeatedly adds a random 3-edge through a currently minimizing
    non-adjacent pair. Raises ``GenerationFailed`` after ``max_attempts``
    added edges.
    """
    rng = make_rng(seed)
    if p2 is None:
        p2 = float(rng.uniform(0.0, 0.6))
    if p3 is None:
        p3 = float(rng.uniform(0.0, 0.15))
    base = gen_random(n, p2, p3, derive_seed(seed, 1))
    return _densify(base, rng, lambda g: ore_report(g).satisfies(d0), max_attempts)


def gen_random_covering(
    n: int,
    seed: int,
    p2: float | None = None,
    p3: float | None = None,
    max_attempts: int = 10_000,
) -> Hypergraph:
    """Random covering [3]-graph: a sparse random start, then 3-edges through
    non-adjacent pairs until the shadow is complete."""
    rng = make_rng(seed)
    if p2 is None:
        p2 = float(rng.uniform(0.0, 0.4))
    if p3 is None:
        p3 = float(rng.uniform(0.0, 0.1))
    base = gen_random(n, p2, p3, derive_seed(seed, 1))
    return _densify(base, rng, lambda g: g.shadow.is_complete(), max_attempts)


@dataclass(frozen=True)
class GenSpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "GenSpec":
        return cls(data["family"], dict(data.get("params", {})), data.get("seed", 0))

    def build(self) -> Hypergraph:
        p = self.params
        if self.family == "hprime":
            return gen_hprime(p["n"], p.get("r", 3))
        if self.family == "blowup":
            return gen_blowup(p["k"], p["part_size"])
        if self.family == "luwang":
            return gen_luwang()
        if self.family == "random":
            return gen_random(p["n"], p.get("p2", 0.3), p.get("p3", 0.1), self.seed)
        if self.family == "random_ore":
            return gen_random_ore(
                p["n"], p.get("d0", 1), self.seed, p.get("max_attempts", 10_000),
                p.get("p2"), p.get("p3"),
            )
        return gen_random_covering(p["n"], self.seed, p.get("p2"), p.get("p3"))
