from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bergeham import machinery
from bergeham.engine import BergeCycle, BergePath, find_hamiltonian_berge_path, max_berge_cycle, validate_cycle
from bergeham.generators import derive_seed, gen_random, gen_random_ore, make_rng
from bergeham.hypergraph import Hypergraph, nonadjacent_pairs, ore_report
from bergeham.machinery import (
    STANDARD_CONFIG,
    BridgeRecord,
    ConstraintResult,
    NoQualifyingCrossing,
    PreconditionError,
    ThresholdConfig,
    UsableSet,
    VertexClassification,
    bridge_multiplicity,
    bridge_union,
    bridges,
    circular_distance,
    classify_from_degrees,
    classify_vertices,
    crossings,
    cycle_from_ham_path,
    diagnostics,
    usability_violations,
    usable_set,
    validate_thresholds,
)


def complete3(n: int) -> Hypergraph:
    return Hypergraph(n, tuple(combinations(range(n), 3)))


def is_usable(h, cycle, u, positions) -> bool:
    """The three usability conditions, evaluated from scratch."""
    t = len(cycle)

    def wit(i):
        prev = cycle.vertices[(i - 1) % t]
        skip = cycle.edge_ids[(i - 2) % t]
        return {e for e, edge in enumerate(h.edges) if u in edge and prev in edge and e != skip}

    for i in positions:
        if not wit(i):
            return False
    for i, j in combinations(positions, 2):
        if min((i - j) % t, (j - i) % t) < 2:
            return False
        if not any(a != b for a in wit(i) for b in wit(j)):
            return False
    return True


def bridges_oracle(h, cycle, i, j) -> set[int]:
    """Quadruple loop over (i, j, k, case), straight from the definition."""
    t = len(cycle)
    v = lambda x: cycle.vertices[x % t]  # noqa: E731
    e = lambda x: cycle.edge_ids[x % t]  # noqa: E731

    def arc(a, c):
        out, x = [], (a + 1) % t
        while x != c % t:
            out.append(x)
            x = (x + 1) % t
        return out

    found = set()
    for k in range(t):
        for case in (1, 2, 3, 4):
            if case in (1, 2) and k not in arc(i, j):
                continue
            if case in (3, 4) and k not in arc(j, i):
                continue
            if case == 1:
                eid, want = e(k + 1), {v(i), v(k + 1), v(k + 2)}
            elif case == 2:
                eid, want = e(k - 1), {v(j), v(k), v(k - 1)}
            elif case == 3:
                eid, want = e(k - 1), {v(i), v(k), v(k - 1)}
            else:
                eid, want = e(k + 1), {v(j), v(k + 1), v(k + 2)}
            if len(want) == 3 and set(h.edges[eid]) == want:
                found.add(eid)
    return found


def random_instance_with_cycle(seed: int, n: int, p3: tuple[float, float] = (0.0, 0.3), proper: bool = True):
    """A random [3]-graph with a maximum cycle; with ``proper`` the cycle misses a vertex."""
    for attempt in range(500):
        s = derive_seed(seed, attempt)
        rng = make_rng(s)
        h = gen_random(n, float(rng.uniform(0.1, 0.6)), float(rng.uniform(*p3)), derive_seed(s, 1))
        cycle = max_berge_cycle(h).cycle
        if cycle is not None and (not proper or len(cycle) < n):
            return h, cycle
    raise RuntimeError("no suitable instance")


class TestThresholds:
    def test_standard_config(self):
        results = validate_thresholds(STANDARD_CONFIG, 100)
        assert all(r.satisfied for r in results)
        assert [r.name for r in results] == [
            "constrain0", "constrain00", "constrain1", "constrain2", "constrain3", "constrain4", "n_range",
        ]

    @pytest.mark.parametrize(
        "cfg, n, failing",
        [
            ((1, 18, 13), None, {"constrain0", "constrain1", "constrain3", "constrain4", "constrain00"}),
            ((65, 18, 10), None, {"constrain00"}),
            ((2, 0, 0), None, {"constrain00", "constrain1", "constrain2", "constrain3", "constrain4"}),
            ((65, 18, 1), None, {"constrain2", "constrain4", "constrain00"}),
            ((65, 40, 30), None, {"constrain3"}),
            ((65, 47, 13), None, {"constrain00"}),
            ((57, 18, 13), None, {"constrain4"}),
            ((65, 18, 13), 68, {"n_range"}),
        ],
    )
    def test_failing_cases(self, cfg, n, failing):
        results = validate_thresholds(ThresholdConfig(*cfg), n)
        assert {r.name for r in results if not r.satisfied} == failing

    def test_exact_rationals(self):
        ok = validate_thresholds(ThresholdConfig(65, 18, Fraction(5, 2)))
        assert {r.name: r.satisfied for r in ok}["constrain4"]
        bad = validate_thresholds(ThresholdConfig(65, 18, Fraction(249, 100)))
        assert not {r.name: r.satisfied for r in bad}["constrain4"]

    def test_round_trip(self):
        cfg = ThresholdConfig(65, Fraction(37, 2), 13)
        assert ThresholdConfig.from_dict(cfg.to_dict()) == cfg
        r = validate_thresholds(cfg)[0]
        assert ConstraintResult.from_dict(r.to_dict()) == r


class TestClassification:
    def test_complete_eight_all_super_small(self):
        h = complete3(8)
        cycle = BergeCycle(tuple(range(8)), tuple(
            h.edges.index(tuple(sorted((i, (i + 1) % 8, (i + 2) % 8)))) for i in range(8)
        ))
        assert validate_cycle(h, cycle) is None
        cls = classify_vertices(h, cycle, STANDARD_CONFIG)
        assert set(cls.degree_on_cycle.values()) == {7}
        assert cls.super_small == frozenset(range(8))

    def test_isolated_vertex_off_cycle(self):
        h = Hypergraph(4, ((0, 1), (1, 2), (0, 2)))
        cls = classify_vertices(h, BergeCycle((0, 1, 2), (0, 1, 2)), ThresholdConfig(2, 0, 0))
        assert cls.degree_on_cycle[3] == 0
        assert 3 in cls.super_small

    @given(
        st.integers(69, 300),
        st.lists(st.integers(0, 299), min_size=1, max_size=40),
    )
    @settings(max_examples=100, deadline=None)
    def test_nesting_for_valid_config(self, n, degrees):
        cls = classify_from_degrees(n, {v: min(d, n - 1) for v, d in enumerate(degrees)}, STANDARD_CONFIG)
        assert cls.super_small <= cls.small
        assert cls.super_big <= cls.big
        assert cls.big_not_super == cls.big - cls.super_big
        assert cls.small | cls.big == frozenset(range(len(degrees)))

    @given(
        st.integers(10, 120),
        st.integers(2, 70),
        st.fractions(0, 30, max_denominator=6),
        st.fractions(0, 30, max_denominator=6),
        st.lists(st.integers(0, 119), min_size=1, max_size=20),
        st.integers(2, 6),
    )
    @settings(max_examples=150, deadline=None)
    def test_scaling_invariance(self, n, d0, g1, g2, degrees, c):
        # scale n, gammas and degrees by c, with d0 adjusted so that every bound scales by c
        base = classify_from_degrees(n, dict(enumerate(degrees)), ThresholdConfig(d0, g1, g2))
        cfg = ThresholdConfig(c * d0 - 6 * (c - 1), c * g1, c * g2)
        scaled = classify_from_degrees(c * n, {v: c * d for v, d in enumerate(degrees)}, cfg)
        assert scaled.small_bound == c * base.small_bound
        assert scaled.super_small_bound == c * base.super_small_bound
        assert scaled.super_big_bound == c * base.super_big_bound
        for name in ("super_small", "small", "big", "super_big", "big_not_super"):
            assert getattr(scaled, name) == getattr(base, name)

    def test_round_trip(self):
        cls = classify_from_degrees(70, {0: 10, 1: 40, 2: 69}, STANDARD_CONFIG)
        assert VertexClassification.from_dict(cls.to_dict()) == cls
        assert cls.classes_of(0) == ["S'", "S"]
        assert cls.classes_of(1) == ["S"]
        assert cls.classes_of(2) == ["B", "B'"]


class TestCrossings:
    def test_covering_matches_scan(self):
        h = complete3(7)
        path = find_hamiltonian_berge_path(h, 0)
        p = path.vertices
        expected = [c for c in range(1, 7) if h.shadow.adjacent(p[0], p[c]) and h.shadow.adjacent(p[-1], p[c - 1])]
        assert crossings(h, path) == expected
        assert expected == list(range(1, 7))

    def test_no_crossings(self):
        h = Hypergraph(5, ((0, 1), (1, 2), (2, 3), (3, 4)))
        assert crossings(h, BergePath((0, 1, 2, 3, 4), (0, 1, 2, 3))) == []

    def test_requires_hamiltonian_path(self):
        h = Hypergraph(5, ((0, 1), (1, 2), (2, 3), (3, 4)))
        with pytest.raises(PreconditionError):
            crossings(h, BergePath((0, 1, 2), (0, 1)))

    @pytest.mark.parametrize("d0", [1, 2, 3])
    def test_ore_gives_enough_crossings(self, d0):
        checked = 0
        for seed in range(60):
            h = gen_random_ore(9, d0, seed)
            rep = ore_report(h)
            for a, b in nonadjacent_pairs(h)[:2]:
                path = find_hamiltonian_berge_path(h, a, b)
                if path is None:
                    continue
                checked += 1
                assert len(crossings(h, path)) >= rep.satisfied_d0 + 1 >= d0 + 1
        assert checked > 10


class TestCycleFromHamPath:
    def test_direct_close(self):
        h = complete3(6)
        path = BergePath((0, 1, 2, 3, 4, 5), tuple(h.edges.index(e) for e in [(0, 1, 2), (1, 2, 3), (2, 3, 4), (3, 4, 5), (2, 4, 5)]))
        cyc = cycle_from_ham_path(h, path)
        assert len(cyc) == 6 and validate_cycle(h, cyc) is None

    def test_endpoint_edge_is_first_path_edge(self):
        h = Hypergraph(5, ((0, 1, 4), (1, 2), (2, 3), (3, 4)))
        path = BergePath((0, 1, 2, 3, 4), (0, 1, 2, 3))
        cyc = cycle_from_ham_path(h, path)
        assert cyc == BergeCycle((1, 2, 3, 4), (1, 2, 3, 0))

    def test_endpoint_edge_is_last_path_edge(self):
        h = Hypergraph(5, ((0, 1), (1, 2), (2, 3), (0, 3, 4)))
        cyc = cycle_from_ham_path(h, BergePath((0, 1, 2, 3, 4), (0, 1, 2, 3)))
        assert len(cyc) == 4 and validate_cycle(h, cyc) is None
        assert 4 not in cyc.vertices

    def test_degree_precondition(self):
        h = Hypergraph(5, ((0, 1), (1, 2), (2, 3), (3, 4)))
        with pytest.raises(PreconditionError):
            cycle_from_ham_path(h, BergePath((0, 1, 2, 3, 4), (0, 1, 2, 3)))

    def test_needs_3graph(self):
        h = Hypergraph(4, ((0, 1, 2, 3), (1, 2), (2, 3)))
        with pytest.raises(PreconditionError):
            cycle_from_ham_path(h, BergePath((0, 1, 2, 3), (0, 1, 2)))

    def test_no_splice_is_structured_error(self, monkeypatch):
        h = complete3(5)
        path = find_hamiltonian_berge_path(h, 0)
        monkeypatch.setattr(machinery, "close_path", lambda *_: None)
        with pytest.raises(NoQualifyingCrossing):
            cycle_from_ham_path(h, path)

    @pytest.mark.parametrize("seed", range(40))
    def test_random_ore2(self, seed):
        rng = make_rng(seed)
        n = int(rng.integers(6, 11))
        h = gen_random_ore(n, 2, derive_seed(seed, 9))
        starts = [a for pair in nonadjacent_pairs(h) for a in pair] + list(range(n))
        path = next((p for p in (find_hamiltonian_berge_path(h, a) for a in starts) if p), None)
        assert path is not None  # Ore(2) instances in this range always have one
        cyc = cycle_from_ham_path(h, path)
        assert validate_cycle(h, cyc) is None
        assert n - 2 <= len(cyc) <= n


class TestUsableSet:
    def test_private_edges_four_cycle(self):
        cyc_edges = ((0, 1), (1, 2), (2, 3), (0, 3))
        h = Hypergraph(5, cyc_edges + ((0, 4), (1, 4), (2, 4), (3, 4)))
        cycle = BergeCycle((0, 1, 2, 3), (0, 1, 2, 3))
        us = usable_set(h, cycle, 4)
        assert is_usable(h, cycle, 4, us.positions)
        assert Fraction(len(us)) >= Fraction(4, 6)
        best = max(
            len(sub)
            for size in range(5)
            for sub in combinations(range(4), size)
            if is_usable(h, cycle, 4, sub)
        )
        assert best == 2 and len(us) <= best

    def test_no_neighbours(self):
        h = Hypergraph(4, ((0, 1), (1, 2), (0, 2)))
        us = usable_set(h, BergeCycle((0, 1, 2), (0, 1, 2)), 3)
        assert us.positions == () and us.witness == {}

    def test_vertex_on_cycle(self):
        h = Hypergraph(4, ((0, 1), (1, 2), (0, 2)))
        with pytest.raises(PreconditionError):
            usable_set(h, BergeCycle((0, 1, 2), (0, 1, 2)), 1)

    def test_violation_messages(self):
        h = Hypergraph(5, ((0, 1), (1, 2), (2, 3), (0, 3), (0, 4)))
        cycle = BergeCycle((0, 1, 2, 3), (0, 1, 2, 3))
        problems = usability_violations(h, cycle, 4, [1, 2])
        assert any("condition 1" in p for p in problems)
        assert any("condition 2" in p for p in problems)

    def test_circular_distance(self):
        assert circular_distance(0, 5, 6) == 1
        assert circular_distance(1, 4, 6) == 3

    @pytest.mark.parametrize("seed", range(60))
    def test_random_instances(self, seed):
        n = 5 + seed % 4
        h, cycle = random_instance_with_cycle(derive_seed(seed, 2), n)
        for u in sorted(set(range(n)) - cycle.vertex_set()):
            us = usable_set(h, cycle, u)
            assert is_usable(h, cycle, u, us.positions)
            assert usability_violations(h, cycle, u, us.positions) == []
            d = len(h.neighbors(u) & cycle.vertex_set())
            assert Fraction(len(us)) >= Fraction(d, 6)

    def test_round_trip(self):
        us = UsableSet(4, (0, 2), {0: (5,), 2: (6, 7)})
        assert UsableSet.from_dict(us.to_dict()) == us


class TestBridges:
    def test_only_two_edges(self):
        h = Hypergraph(5, ((0, 1), (1, 2), (2, 3), (3, 4), (0, 4)))
        cycle = BergeCycle((0, 1, 2, 3, 4), (0, 1, 2, 3, 4))
        assert all(bridges(h, cycle, i, j) == () for i, j in combinations(range(5), 2))

    def test_constructed_case_one(self):
        # e_2 = {v_0, v_2, v_3}, k = 1 lies between i = 0 and j = 3
        h = Hypergraph(6, ((0, 1), (1, 2), (0, 2, 3), (3, 4), (4, 5), (0, 5)))
        cycle = BergeCycle((0, 1, 2, 3, 4, 5), (0, 1, 2, 3, 4, 5))
        assert validate_cycle(h, cycle) is None
        recs = bridges(h, cycle, 0, 3)
        assert BridgeRecord(0, 3, 1, 2, 1) in recs
        assert {r.edge_id for r in recs} == bridges_oracle(h, cycle, 0, 3) == {2}

    def test_same_positions(self):
        h = Hypergraph(3, ((0, 1), (1, 2), (0, 2)))
        with pytest.raises(ValueError):
            bridges(h, BergeCycle((0, 1, 2), (0, 1, 2)), 1, 1)

    def test_shared_bridge_multiplicity(self):
        # the same edge {v_0, v_2, v_3} is produced by (0, 4), (0, 5) and (0, 6)
        edges = [(0, 1), (1, 2), (0, 2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (0, 7)]
        h = Hypergraph(8, tuple(edges))
        cycle = BergeCycle(tuple(range(8)), tuple(range(8)))
        counts = bridge_multiplicity(h, cycle, [0, 4, 5, 6])
        assert counts == {2: 3}
        assert bridge_multiplicity(h, cycle, [3]) == {}

    @pytest.mark.parametrize("seed", range(40))
    def test_random_against_definition(self, seed):
        n = 5 + seed % 4
        h, cycle = random_instance_with_cycle(derive_seed(seed, 3), n, p3=(0.2, 0.6), proper=seed % 2 == 0)
        t = len(cycle)
        union = set()
        for i, j in combinations(range(t), 2):
            got = {r.edge_id for r in bridges(h, cycle, i, j)}
            assert got == bridges_oracle(h, cycle, i, j)
            assert got <= cycle.edge_set()
            union |= got
        assert union == bridge_union(h, cycle)
        if t < n:
            assert len(union) <= t <= n - 1
        rng = make_rng(seed)
        X = sorted(rng.choice(t, size=int(rng.integers(1, t + 1)), replace=False).tolist())
        counts = bridge_multiplicity(h, cycle, X)
        recount: dict[int, int] = {}
        for i, j in combinations(X, 2):
            for eid in bridges_oracle(h, cycle, i, j):
                recount[eid] = recount.get(eid, 0) + 1
        assert counts == recount
        assert all(c <= len(X) - 1 for c in counts.values())

    def test_round_trip(self):
        r = BridgeRecord(0, 3, 1, 2, 1)
        assert BridgeRecord.from_dict(r.to_dict()) == r


class TestDiagnostics:
    def test_shape(self):
        h, cycle = random_instance_with_cycle(5, 8)
        rep = diagnostics(h, cycle, ThresholdConfig(2, 0, 0))
        assert rep["cycle_length"] == len(cycle)
        assert rep["bridge_union_size"] == len(bridge_union(h, cycle))
        assert [o["vertex"] for o in rep["off_cycle"]] == sorted(set(range(8)) - cycle.vertex_set())
        for off in rep["off_cycle"]:
            for pair in off["shifted_pairs"]:
                assert pair["stated_bound"] - pair["derived_bound"] == len(cycle)
