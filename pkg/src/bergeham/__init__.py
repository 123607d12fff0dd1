"""Berge Hamiltonicity of [3]-graphs under Ore-type shadow degree conditions."""

from __future__ import annotations

from .engine import (
    HAMILTONIAN,
    INCONCLUSIVE,
    NOT_HAMILTONIAN,
    TIMEOUT,
    BergeCycle,
    BergePath,
    Budget,
    HamiltonicityVerdict,
    MaxCycleResult,
    brute_force_oracle,
    find_berge_cycle,
    find_hamiltonian_berge_cycle,
    find_hamiltonian_berge_path,
    max_berge_cycle,
    validate_cycle,
    validate_path,
)
from .extension import ExtensionResult, heuristic_hamiltonian, try_extend
from .generators import (
    GenSpec,
    derive_seed,
    gen_blowup,
    gen_hprime,
    gen_luwang,
    gen_random,
    gen_random_covering,
    gen_random_ore,
)
from .harness import Campaign, CampaignReport, run_campaign, verify_certificate
from .hypergraph import Hypergraph, OreReport, load, loads, ore_report, store
from .machinery import (
    STANDARD_CONFIG,
    ThresholdConfig,
    bridge_multiplicity,
    bridges,
    classify_vertices,
    crossings,
    cycle_from_ham_path,
    usable_set,
    validate_thresholds,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
