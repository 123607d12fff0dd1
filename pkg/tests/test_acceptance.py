"""Acceptance criteria 1 to 14.

Each criterion is a plain function returning ``(ok, detail)``. Under pytest
every one becomes a test and the terminal summary prints one PASS/FAIL line per
criterion; ``python tests/test_acceptance.py`` prints the same lines directly.
"""
from __future__ import annotations

import sys
import tempfile
import time
from functools import lru_cache
from pathlib import Path

import pytest

from bergeham.engine import NOT_HAMILTONIAN, brute_force_oracle, find_hamiltonian_berge_cycle
from bergeham.generators import gen_blowup, gen_hprime, gen_luwang
from bergeham.harness import Campaign, CampaignReport, run_campaign, verify_certificate, write_certificate
from bergeham.hypergraph import Hypergraph, ore_report
from bergeham.machinery import ThresholdConfig, validate_thresholds

# (criterion, check name, samples, n_min, n_max, time limit in seconds)
INVARIANT_CRITERIA = {
    6: ("oracle_equivalence", 500, 4, 7, 600),
    7: ("usable_sets", 1000, 5, 9, 900),
    8: ("bridges", 300, 5, 9, 600),
    9: ("usable_chords", 300, 5, 8, 600),
    10: ("small_adjacency", 300, 6, 9, 300),
    11: ("path_closure", 500, 6, 9, 300),
}
COVERING = Campaign("covering_theorem", 6, 9, samples=1000, seed=4, max_nodes=10**8)
CONJECTURE = Campaign("conjecture_ore", 6, 9, d0=1, samples=10**4, seed=1, max_nodes=10**8)


def invariant_campaign(number: int) -> Campaign:
    name, samples, lo, hi, _ = INVARIANT_CRITERIA[number]
    return Campaign("invariant_suite", lo, hi, samples=samples, seed=number, checks=(name,))


CAMPAIGNS = {4: COVERING, 5: CONJECTURE, **{k: invariant_campaign(k) for k in INVARIANT_CRITERIA}}


@lru_cache(maxsize=None)
def report_for(number: int, threads: int = 1) -> CampaignReport:
    return run_campaign(CAMPAIGNS[number], threads)


def timed(fn):
    start = time.monotonic()
    value = fn()
    return value, time.monotonic() - start


# --- named examples ----------------------------------------------------------


def criterion_1():
    h = gen_luwang()
    verdict, secs = timed(lambda: find_hamiltonian_berge_cycle(h))
    ok = ore_report(h).covering and verdict.status == NOT_HAMILTONIAN and h.num_edges == 4 and secs < 1
    return ok, f"covering, |E|={h.num_edges}, {verdict.status} in {secs:.3f}s"


def criterion_2():
    parts, ok = [], True
    for n in (7, 10, 15):
        h = gen_hprime(n, 3)
        verdict, secs = timed(lambda: find_hamiltonian_berge_cycle(h))
        margin = ore_report(h).min_nonadjacent_sum
        ok &= margin == n and verdict.status == NOT_HAMILTONIAN and secs < 10
        parts.append(f"n={n} sum={margin} {verdict.status} {secs:.2f}s")
    return ok, "; ".join(parts)


def criterion_3():
    h = gen_blowup(4, 2)
    verdict, secs = timed(lambda: find_hamiltonian_berge_cycle(h))
    ok = h.shadow.is_complete() and h.num_edges == 6 and verdict.status == NOT_HAMILTONIAN and secs < 1
    return ok, f"complete shadow, |E|={h.num_edges}, {verdict.status} in {secs:.3f}s"


# --- campaigns ---------------------------------------------------------------


def criterion_4():
    rep = report_for(4)
    ham = sum(r["hamiltonian"] for r in rep.per_n.values())
    timeouts = sum(r["timeouts"] for r in rep.per_n.values())
    ok = ham == 1000 and timeouts == 0 and rep.exit_code == 0 and rep.wall_time < 300
    return ok, f"{ham}/1000 hamiltonian, {timeouts} timeouts, {rep.wall_time:.1f}s"


def criterion_5():
    rep = report_for(5)
    sampled = sum(r["sampled"] for r in rep.per_n.values())
    cx = rep.counterexamples
    per_n = {n: r["not_hamiltonian"] for n, r in rep.per_n.items()}
    with tempfile.TemporaryDirectory() as tmp:
        for c in cx:
            write_certificate(Path(tmp) / f"cx-{c['index']:06d}", c)
        check = verify_certificate(tmp)
    oracle_ok = all(brute_force_oracle(Hypergraph.from_dict(c["hypergraph"])).status == NOT_HAMILTONIAN for c in cx)
    detail = (
        f"{sampled} Ore(1) samples, {len(cx)} counterexample certificates {per_n}, "
        f"all re-verified={check.ok and oracle_ok}, exit code {rep.exit_code}, {rep.wall_time:.1f}s"
    )
    return not cx and rep.wall_time < 1800, detail


def invariant_criterion(number: int):
    name, samples, _, _, limit = INVARIANT_CRITERIA[number]
    rep = report_for(number)
    stats = rep.checks[name]
    ok = stats["passed"] == samples and stats["failed"] == 0 and rep.wall_time < limit
    return ok, f"{name}: {stats['passed']}/{samples} passed, {stats['skipped']} skipped, {rep.wall_time:.1f}s"


def criterion_12():
    cfg = ThresholdConfig(65, 18, 13)
    all_ok = all(r.satisfied for n in (69, 70, 100, 1000, 10**6) for r in validate_thresholds(cfg, n))
    failing = {
        "constrain0": (ThresholdConfig(1, 18, 13), 100),
        "constrain00": (ThresholdConfig(65, 47, 13), 100),
        "constrain1": (ThresholdConfig(56, 18, 13), 100),
        "constrain2": (ThresholdConfig(65, 18, 1), 100),
        "constrain3": (ThresholdConfig(65, 40, 30), 100),
        "constrain4": (ThresholdConfig(64, 18, 13), 100),
        "n_range": (cfg, 68),
    }
    covered = set()
    for name, (bad, n) in failing.items():
        if not next(r for r in validate_thresholds(bad, n) if r.name == name).satisfied:
            covered.add(name)
    names = {r.name for r in validate_thresholds(cfg, 69)}
    ok = all_ok and covered == names
    return ok, f"(65, 18, 13) satisfies all for n >= 69: {all_ok}; failing unit case for {len(covered)}/{len(names)}"


def criterion_13():
    rep = run_campaign(Campaign("invariant_suite", 6, 9, samples=500, seed=13, checks=("min_degree",)))
    stats = rep.checks["min_degree"]
    ok = stats["passed"] == 500 and stats["failed"] == 0 and rep.wall_time < 300
    return ok, f"min_degree: {stats['passed']}/500 passed, {stats['skipped']} skipped, {rep.wall_time:.1f}s"


def criterion_14():
    same = []
    for number in sorted(CAMPAIGNS):
        same.append(report_for(number, 1).to_json() == report_for(number, 4).to_json())
    return all(same), f"threads 1 vs 4 byte-identical for {sum(same)}/{len(same)} reports (criteria 4-11)"


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    **{k: (lambda k=k: invariant_criterion(k)) for k in INVARIANT_CRITERIA},
    12: criterion_12,
    13: criterion_13,
    14: criterion_14,
}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, record_criterion):
    ok, detail = CRITERIA[number]()
    record_criterion(number, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for number in sorted(CRITERIA):
        ok, detail = CRITERIA[number]()
        failures += not ok
        print(f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {detail}", flush=True)
    sys.exit(1 if failures else 0)
