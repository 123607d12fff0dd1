"""Seeded verification campaigns and counterexample certificates.

Every sample is a pure function of ``(campaign, index)``: the instance seed
is ``derive_seed(campaign.seed, index)`` and all budgets are node counts, so a
report does not depend on how samples are spread across worker processes.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from . import engine
from .engine import (
    HAMILTONIAN,
    NOT_HAMILTONIAN,
    TIMEOUT,
    BergeCycle,
    Budget,
    HamiltonicityVerdict,
    OutOfBudget,
    brute_force_oracle,
    find_berge_cycle,
    find_hamiltonian_berge_cycle,
    find_hamiltonian_berge_path,
    max_berge_cycle,
    validate_cycle,
)
from .extension import heuristic_hamiltonian, try_extend
from .generators import (
    GenerationFailed,
    derive_seed,
    gen_hprime,
    gen_random,
    gen_random_covering,
    gen_random_ore,
    make_rng,
)
from .hypergraph import Hypergraph, format_hg, load, nonadjacent_pairs, ore_report
from .machinery import (
    ThresholdConfig,
    bridge_multiplicity,
    bridges,
    classify_vertices,
    cycle_from_ham_path,
    usability_violations,
    usable_set,
)

KINDS = ("conjecture_ore", "covering_theorem", "main_theorem", "invariant_suite")
CHECKS = (
    "oracle_equivalence",
    "usable_sets",
    "bridges",
    "usable_chords",
    "small_adjacency",
    "path_closure",
    "min_degree",
    "maximality",
)
EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 3
EXIT_INCONCLUSIVE = 4

DEFAULT_N_GUARD = (6, 12)


@dataclass(frozen=True)
class Campaign:
    kind: str
    n_min: int
    n_max: int
    d0: int = 1
    samples: int = 100
    seed: int = 0
    max_nodes: int = engine.DEFAULT_MAX_NODES
    family: str = "random"
    checks: tuple[str, ...] = ()
    n_guard: tuple[int, int] = DEFAULT_N_GUARD

    def __post_init__(self) -> None:
        object.__setattr__(self, "checks", tuple(self.checks))
        object.__setattr__(self, "n_guard", tuple(self.n_guard))
        self.validate()

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown campaign kind {self.kind!r}")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.n_min > self.n_max:
            raise ValueError("n_min exceeds n_max")
        if self.family not in ("random", "hprime"):
            raise ValueError("family must be 'random' or 'hprime'")
        unknown = set(self.checks) - set(CHECKS)
        if unknown:
            raise ValueError(f"unknown checks: {sorted(unknown)}")
        if self.kind == "main_theorem":
            if self.n_min < self.d0 + 4:
                raise ValueError(f"main_theorem needs n >= d0 + 4 = {self.d0 + 4}")
            return
        if self.kind == "invariant_suite":
            return
        lo, hi = self.n_guard
        if self.n_min < lo or self.n_max > hi:
            raise ValueError(f"n range [{self.n_min}, {self.n_max}] outside guard [{lo}, {hi}]")
        if self.kind == "covering_theorem" and self.n_min < 6:
            raise ValueError("covering_theorem needs n >= 6")

    def n_for(self, index: int) -> int:
        return self.n_min + index % (self.n_max - self.n_min + 1)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["checks"] = list(self.checks)
        d["n_guard"] = list(self.n_guard)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "Campaign":
        return cls(**{k: data[k] for k in cls.__dataclass_fields__ if k in data})


@dataclass
class CampaignReport:
    campaign: Campaign
    per_n: dict[int, dict] = field(default_factory=dict)
    counterexamples: list[dict] = field(default_factory=list)
    failure_seeds: list[int] = field(default_factory=list)
    checks: dict[str, dict] = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def exit_code(self) -> int:
        if self.counterexamples or any(c["failed"] for c in self.checks.values()):
            return EXIT_COUNTEREXAMPLE
        if any(row["timeouts"] for row in self.per_n.values()):
            return EXIT_INCONCLUSIVE
        return EXIT_OK

    def to_dict(self, include_timing: bool = False) -> dict:
        d = {
            "campaign": self.campaign.to_dict(),
            "per_n": {str(n): row for n, row in sorted(self.per_n.items())},
            "counterexamples": self.counterexamples,
            "failure_seeds": self.failure_seeds,
            "checks": self.checks,
            "exit_code": self.exit_code,
        }
        if include_timing:
            d["wall_time"] = self.wall_time
        return d

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "CampaignReport":
        return cls(
            campaign=Campaign.from_dict(data["campaign"]),
            per_n={int(n): row for n, row in data["per_n"].items()},
            counterexamples=list(data["counterexamples"]),
            failure_seeds=list(data["failure_seeds"]),
            checks=dict(data.get("checks", {})),
            wall_time=data.get("wall_time", 0.0),
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "sampled", "hamiltonian", "timeouts", "min_margin"])
        for n, row in sorted(self.per_n.items()):
            margin = row["min_margin"]
            writer.writerow([n, row["sampled"], row["hamiltonian"], row["timeouts"], "" if margin is None else margin])
        return buf.getvalue()

    def write(self, path: str | os.PathLike) -> None:
        path = Path(path)
        path.write_text(self.to_json())
        path.with_suffix(".csv").write_text(self.to_csv())


# --- certificates ------------------------------------------------------------


def make_certificate(h: Hypergraph, claimed_d0: int, verdict: HamiltonicityVerdict) -> dict:
    """Self-contained counterexample record; the hypergraph is stored canonically
    so that the ``.hg`` file and the JSON form agree edge for edge."""
    if verdict.certificate is not None:
        raise ValueError("only negative verdicts make counterexample certificates")
    h = h.canonical()
    return {
        "claimed_d0": claimed_d0,
        "hypergraph": h.to_dict(),
        "ore_report": ore_report(h).to_dict(),
        "verdict": verdict.to_dict(),
    }


def write_certificate(directory: str | os.PathLike, cert: dict) -> Path:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    (d / "instance.hg").write_text(format_hg(Hypergraph.from_dict(cert["hypergraph"])))
    ore = {"claimed_d0": cert["claimed_d0"], "ore_report": cert["ore_report"]}
    (d / "ore_report.json").write_text(json.dumps(ore, sort_keys=True, indent=2) + "\n")
    (d / "verdict.json").write_text(json.dumps(cert["verdict"], sort_keys=True, indent=2) + "\n")
    return d


def read_certificate(directory: str | os.PathLike) -> dict:
    d = Path(directory)
    h = load(d / "instance.hg")
    ore = json.loads((d / "ore_report.json").read_text())
    verdict = json.loads((d / "verdict.json").read_text())
    return {
        "claimed_d0": ore["claimed_d0"],
        "hypergraph": h.to_dict(),
        "ore_report": ore["ore_report"],
        "verdict": verdict,
    }


@dataclass
class CertificateCheck:
    ok: bool
    checked: int = 0
    problems: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "problems": self.problems}


def check_certificate(cert: dict, max_nodes: int = engine.DEFAULT_MAX_NODES) -> list[str]:
    """Problems found when re-deriving the claims of one certificate."""
    problems = []
    h = Hypergraph.from_dict(cert["hypergraph"])
    report = ore_report(h)
    if report.to_dict() != cert["ore_report"]:
        problems.append("stored Ore report does not match the hypergraph")
    if not report.satisfies(cert["claimed_d0"]):
        problems.append(f"Ore({cert['claimed_d0']}) does not hold")
    if cert["verdict"].get("status") != NOT_HAMILTONIAN:
        problems.append("certificate does not claim non-Hamiltonicity")
    verdict = find_hamiltonian_berge_cycle(h, Budget(max_nodes=max_nodes))
    if verdict.status == HAMILTONIAN:
        problems.append("exact search finds a Hamiltonian Berge cycle")
    elif verdict.status == TIMEOUT:
        problems.append("exact search ran out of budget")
    if h.n <= 8 and h.num_edges <= 24 and brute_force_oracle(h).status == HAMILTONIAN:
        problems.append("brute-force oracle finds a Hamiltonian Berge cycle")
    return problems


def verify_certificate(path: str | os.PathLike, max_nodes: int = engine.DEFAULT_MAX_NODES) -> CertificateCheck:
    """Re-verify a certificate directory, a directory of them, or a campaign report."""
    path = Path(path)
    if path.is_file():
        data = json.loads(path.read_text())
        certs = data.get("counterexamples", [data] if "hypergraph" in data else None)
        if certs is None:
            raise ValueError(f"{path} holds neither a certificate nor a campaign report")
    elif (path / "instance.hg").exists():
        certs = [read_certificate(path)]
    elif path.is_dir():
        certs = [read_certificate(p) for p in sorted(path.iterdir()) if (p / "instance.hg").exists()]
    else:
        raise FileNotFoundError(path)
    problems = []
    for idx, cert in enumerate(certs):
        problems += [f"certificate {idx}: {p}" for p in check_certificate(cert, max_nodes)]
    return CertificateCheck(not problems, len(certs), problems)


# --- per-sample work ---------------------------------------------------------


def _decide(h: Hypergraph, max_nodes: int, heuristic_first: bool = False) -> HamiltonicityVerdict:
    if heuristic_first:
        v = heuristic_hamiltonian(h, budget=Budget(max_nodes=max_nodes))
        if v.status == HAMILTONIAN and validate_cycle(h, v.certificate) is None:
            return v
    v = find_hamiltonian_berge_cycle(h, Budget(max_nodes=max_nodes))
    if v.status == HAMILTONIAN and validate_cycle(h, v.certificate) is not None:
        raise AssertionError("exact search produced an invalid certificate")
    return v


def _theorem_sample(c: Campaign, index: int) -> dict:
    n = c.n_for(index)
    seed = derive_seed(c.seed, index)
    out = {"index": index, "n": n, "seed": seed}
    d0 = c.d0
    try:
        if c.kind == "covering_theorem":
            h = gen_random_covering(n, seed)
        elif c.family == "hprime":
            h = gen_hprime(n, 3)
        else:
            h = gen_random_ore(n, d0, seed)
    except GenerationFailed:
        out["skipped"] = True
        return out
    rep = ore_report(h)
    certified = rep.covering if c.kind == "covering_theorem" else rep.satisfies(d0)
    if not certified:
        out["skipped"] = True
        return out
    out["margin"] = rep.min_nonadjacent_sum if not rep.covering else None
    verdict = _decide(h, c.max_nodes, heuristic_first=c.kind == "main_theorem")
    out["status"] = verdict.status
    if verdict.status == NOT_HAMILTONIAN:
        claimed = d0 if c.kind != "covering_theorem" else rep.satisfied_d0
        cert = make_certificate(h, claimed if claimed is not None else d0, verdict)
        out["counterexample"] = {"index": index, "seed": seed, "n": n, **cert}
    return out


def _retry_instances(seed: int, attempts: int = 200):
    for attempt in range(attempts):
        yield derive_seed(seed, attempt)


def _trim_edges(h: Hypergraph, limit: int, rng) -> Hypergraph:
    if h.num_edges <= limit:
        return h
    keep = sorted(rng.choice(h.num_edges, size=limit, replace=False).tolist())
    return Hypergraph(h.n, tuple(h.edges[i] for i in keep))


def _random_3graph(n: int, seed: int, p2_range=(0.1, 0.6), p3_range=(0.0, 0.2)) -> Hypergraph:
    rng = make_rng(seed)
    p2 = float(rng.uniform(*p2_range))
    p3 = float(rng.uniform(*p3_range))
    return gen_random(n, p2, p3, derive_seed(seed, 7))


def bridges_by_definition(h: Hypergraph, cycle: BergeCycle, i: int, j: int) -> set[int]:
    """R(v_i, v_j) by a literal loop over k and the four positional cases."""
    t = len(cycle)
    v = lambda x: cycle.vertices[x % t]  # noqa: E731
    e = lambda x: cycle.edge_ids[x % t]  # noqa: E731

    def inside(a: int, b: int, c: int) -> bool:
        # b strictly between a and c walking clockwise from a
        x = (a + 1) % t
        while x != c % t:
            if x == b % t:
                return True
            x = (x + 1) % t
        return False

    out = set()
    for k in range(t):
        if k in (i % t, j % t):
            continue
        options = []
        if inside(i, k, j):
            options += [(e(k + 1), {v(i), v(k + 1), v(k + 2)}), (e(k - 1), {v(j), v(k), v(k - 1)})]
        if inside(j, k, i):
            options += [(e(k - 1), {v(i), v(k), v(k - 1)}), (e(k + 1), {v(j), v(k + 1), v(k + 2)})]
        for eid, content in options:
            if len(content) == 3 and set(h.edges[eid]) == content:
                out.add(eid)
    return out


def _non_hamiltonian_with_cycle(n: int, seed: int, p2_range, p3_range, max_nodes: int):
    for s in _retry_instances(seed):
        h = _random_3graph(n, s, p2_range, p3_range)
        res = max_berge_cycle(h, Budget(max_nodes=max_nodes))
        if res.status == "found" and len(res.cycle) < n:
            return h, res.cycle, s
    return None


def _check_oracle_equivalence(n: int, seed: int, c: Campaign) -> tuple[bool, str]:
    rng = make_rng(seed)
    h = _trim_edges(_random_3graph(n, seed, (0.1, 0.8), (0.0, 0.3)), 20, rng)
    exact = find_hamiltonian_berge_cycle(h, Budget(max_nodes=c.max_nodes))
    oracle = brute_force_oracle(h)
    if exact.status != oracle.status:
        return False, f"exact {exact.status} vs oracle {oracle.status}"
    for v in (exact, oracle):
        if v.certificate is not None and (
            validate_cycle(h, v.certificate) is not None or len(v.certificate) != n
        ):
            return False, "invalid certificate"
    return True, exact.status


def _check_usable_sets(n: int, seed: int, c: Campaign) -> tuple[bool, str] | None:
    found = _non_hamiltonian_with_cycle(n, seed, (0.15, 0.7), (0.0, 0.2), c.max_nodes)
    if found is None:
        return None
    h, cycle, s = found
    rng = make_rng(s)
    off = sorted(set(range(n)) - cycle.vertex_set())
    u = off[int(rng.integers(len(off)))]
    us = usable_set(h, cycle, u)
    problems = usability_violations(h, cycle, u, us.positions)
    d = len(h.neighbors(u) & cycle.vertex_set())
    if Fraction(len(us)) < Fraction(d, 6):
        problems.append(f"size {len(us)} < d_C(u)/6 = {Fraction(d, 6)}")
    return not problems, "; ".join(problems) or f"|U|={len(us)} d_C={d}"


def _check_bridges(n: int, seed: int, c: Campaign) -> tuple[bool, str] | None:
    for s in _retry_instances(seed):
        h = _random_3graph(n, s, (0.0, 0.4), (0.15, 0.6))
        res = max_berge_cycle(h, Budget(max_nodes=c.max_nodes))
        if res.status == "found":
            break
    else:
        return None
    cycle = res.cycle
    t = len(cycle)
    union = set()
    for i, j in combinations(range(t), 2):
        got = {r.edge_id for r in bridges(h, cycle, i, j)}
        if got != bridges_by_definition(h, cycle, i, j):
            return False, f"pair ({i}, {j}) differs from the definition"
        if not got <= cycle.edge_set():
            return False, "bridge edge outside E(C)"
        union |= got
    if t < n and len(union) > t:
        return False, f"|union R| = {len(union)} > |E(C)| = {t}"
    rng = make_rng(derive_seed(s, 11))
    size = int(rng.integers(1, t + 1))
    X = sorted(rng.choice(t, size=size, replace=False).tolist())
    mult = bridge_multiplicity(h, cycle, X)
    if mult and max(mult.values()) > len(X) - 1:
        return False, "multiplicity above |X| - 1"
    return True, f"union={len(union)} |X|={len(X)}"


def _check_usable_chords(n: int, seed: int, c: Campaign) -> tuple[bool, str] | None:
    found = _non_hamiltonian_with_cycle(n, seed, (0.2, 0.7), (0.0, 0.3), c.max_nodes)
    if found is None:
        return None
    h, cycle, _ = found
    pairs = 0
    for u in sorted(set(range(n)) - cycle.vertex_set()):
        us = usable_set(h, cycle, u)
        for i, j in combinations(us.positions, 2):
            vi, vj = cycle.v(i), cycle.v(j)
            if not h.shadow.adjacent(vi, vj):
                continue
            pairs += 1
            if not set(h.edges_between(vi, vj)) <= {cycle.e(i), cycle.e(j)}:
                return False, f"u={u} pair ({i}, {j}) has a chord outside e_i, e_j"
    return True, f"{pairs} adjacent usable pairs"


def _check_small_adjacency(n: int, seed: int, c: Campaign) -> tuple[bool, str] | None:
    rng = make_rng(seed)
    d0 = int(rng.integers(1, 4))
    h = gen_random_ore(n, d0, derive_seed(seed, 3))
    if not ore_report(h).satisfies(d0):
        return None
    order = [int(x) for x in rng.permutation(4)]
    for drop in order:
        if n - drop < 3:
            continue
        try:
            cycle = find_berge_cycle(h, n - drop, Budget(max_nodes=c.max_nodes))
        except OutOfBudget:
            cycle = None
        if cycle is not None:
            break
    else:
        return None
    cls = classify_vertices(h, cycle, ThresholdConfig(d0, 0, 0))
    for a, b in combinations(sorted(cls.small), 2):
        if not h.shadow.adjacent(a, b):
            return False, f"small vertices {a}, {b} non-adjacent"
    return True, f"|C|={len(cycle)} |S|={len(cls.small)}"


def _check_path_closure(n: int, seed: int, c: Campaign) -> tuple[bool, str] | None:
    rng = make_rng(seed)
    h = gen_random_ore(n, 2, derive_seed(seed, 5))
    if not ore_report(h).satisfies(2):
        return None
    pairs = nonadjacent_pairs(h)
    priority = rng.random(n).tolist()
    budget = Budget(max_nodes=c.max_nodes)
    path = None
    if pairs and rng.random() < 0.75:
        a, b = pairs[int(rng.integers(len(pairs)))]
        path = find_hamiltonian_berge_path(h, a, b, budget, priority)
    if path is None:
        path = find_hamiltonian_berge_path(h, int(rng.integers(n)), None, budget, priority)
    if path is None:
        return None
    cycle = cycle_from_ham_path(h, path)
    if validate_cycle(h, cycle) is not None or not n - 2 <= len(cycle) <= n:
        return False, f"bad cycle of length {len(cycle)}"
    ends = "adjacent" if h.shadow.adjacent(path.vertices[0], path.vertices[-1]) else "non-adjacent"
    return True, f"{ends} endpoints, length {len(cycle)}"


def _check_min_degree(n: int, seed: int, c: Campaign) -> tuple[bool, str] | None:
    rng = make_rng(seed)
    d0 = (1, 2, 5)[int(rng.integers(3))]
    n = max(n, d0 + 4)
    for s in _retry_instances(seed):
        r = make_rng(s)
        h = gen_random_ore(n, d0, s, p2=float(r.uniform(0.5, 0.95)), p3=0.0)
        rep = ore_report(h)
        if rep.satisfies(d0) and not rep.covering:
            break
    else:
        return None
    for v in range(n):
        deg = h.shadow.degree(v)
        if not (deg >= d0 + 2 or deg == n - 1):
            return False, f"vertex {v} has shadow degree {deg} with d0={d0}"
    return True, f"d0={d0}"


def _check_maximality(n: int, seed: int, c: Campaign) -> tuple[bool, str] | None:
    found = _non_hamiltonian_with_cycle(n, seed, (0.15, 0.7), (0.0, 0.3), c.max_nodes)
    if found is None:
        return None
    h, cycle, _ = found
    if try_extend(h, cycle, budget=Budget(max_nodes=c.max_nodes)) is not None:
        return False, "a maximum cycle was extended"
    return True, f"|C|={len(cycle)}"


_CHECKS = {
    "oracle_equivalence": _check_oracle_equivalence,
    "usable_sets": _check_usable_sets,
    "bridges": _check_bridges,
    "usable_chords": _check_usable_chords,
    "small_adjacency": _check_small_adjacency,
    "path_closure": _check_path_closure,
    "min_degree": _check_min_degree,
    "maximality": _check_maximality,
}


def _invariant_sample(c: Campaign, index: int) -> dict:
    n = c.n_for(index)
    seed = derive_seed(c.seed, index)
    out = {"index": index, "n": n, "seed": seed, "checks": {}}
    for name in c.checks or CHECKS:
        res = _CHECKS[name](n, derive_seed(seed, CHECKS.index(name)), c)
        out["checks"][name] = None if res is None else res[0]
    return out


def _sample(args: tuple[dict, int]) -> dict:
    data, index = args
    c = Campaign.from_dict(data)
    if c.kind == "invariant_suite":
        return _invariant_sample(c, index)
    return _theorem_sample(c, index)


def run_campaign(c: Campaign, parallelism: int = 1) -> CampaignReport:
    start = time.monotonic()
    tasks = [(c.to_dict(), i) for i in range(c.samples)]
    if parallelism > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(_sample, tasks, chunksize=max(1, len(tasks) // (8 * parallelism))))
    else:
        results = [_sample(t) for t in tasks]
    report = _merge(c, results)
    report.wall_time = time.monotonic() - start
    return report


def _merge(c: Campaign, results: list[dict]) -> CampaignReport:
    report = CampaignReport(c)
    for n in range(c.n_min, c.n_max + 1):
        report.per_n[n] = {
            "sampled": 0, "skipped": 0, "ore_satisfied": 0, "hamiltonian": 0,
            "not_hamiltonian": 0, "timeouts": 0, "min_margin": None,
        }
    if c.kind == "invariant_suite":
        names = list(c.checks or CHECKS)
        report.checks = {name: {"checked": 0, "passed": 0, "failed": 0, "skipped": 0} for name in names}
    for res in sorted(results, key=lambda r: r["index"]):
        row = report.per_n[res["n"]]
        if c.kind == "invariant_suite":
            row["sampled"] += 1
            for name, ok in res["checks"].items():
                stats = report.checks[name]
                if ok is None:
                    stats["skipped"] += 1
                    continue
                stats["checked"] += 1
                stats["passed" if ok else "failed"] += 1
                if not ok:
                    report.failure_seeds.append(res["seed"])
            continue
        if res.get("skipped"):
            row["skipped"] += 1
            continue
        row["sampled"] += 1
        row["ore_satisfied"] += 1
        margin = res["margin"]
        if margin is not None and (row["min_margin"] is None or margin < row["min_margin"]):
            row["min_margin"] = margin
        status = res["status"]
        key = {HAMILTONIAN: "hamiltonian", NOT_HAMILTONIAN: "not_hamiltonian", TIMEOUT: "timeouts"}[status]
        row[key] += 1
        if "counterexample" in res:
            report.counterexamples.append(res["counterexample"])
            report.failure_seeds.append(res["seed"])
    return report
