"""Command-line entry point: ``bergeham <subcommand> ...``.

Exit codes: 0 success, 1 a certificate failed re-verification, 2 usage or
input error, 3 counterexample recorded, 4 inconclusive (budget exhausted).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .engine import (
    HAMILTONIAN,
    TIMEOUT,
    BergeCycle,
    BergePath,
    Budget,
    format_walk,
    find_hamiltonian_berge_cycle,
    max_berge_cycle,
    validate_cycle,
    validate_path,
)
from .extension import heuristic_hamiltonian, try_extend
from .generators import FAMILIES, GenSpec, GenerationFailed
from .harness import CHECKS, KINDS, Campaign, run_campaign, verify_certificate, write_certificate
from .hypergraph import Hypergraph, HypergraphFormatError, format_hg, load, ore_report, store
from .machinery import (
    NoQualifyingCrossing,
    PreconditionError,
    ThresholdConfig,
    bridge_union,
    bridges,
    classify_vertices,
    cycle_from_ham_path,
    diagnostics,
    usable_set,
    validate_thresholds,
)

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_COUNTEREXAMPLE, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4


class InputError(Exception):
    """Bad input file or argument value; reported with exit code 2."""


def _threads(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("BERGEHAM_THREADS")
    if env is None:
        return 1
    try:
        return max(1, int(env))
    except ValueError:
        raise InputError(f"BERGEHAM_THREADS must be an integer, got {env!r}") from None


def _budget(args) -> Budget:
    return Budget(max_nodes=args.budget_nodes, max_seconds=args.budget_seconds)


def _emit(args, data, text: str) -> None:
    if args.format == "json":
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        print(text)


def _load_h(path: str) -> Hypergraph:
    try:
        return load(path)
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except HypergraphFormatError as exc:
        raise InputError(f"{path}: {exc}") from None


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def _load_cycle(h: Hypergraph, path: str) -> BergeCycle:
    try:
        cycle = BergeCycle.from_dict(_read_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a cycle certificate ({exc})") from None
    bad = validate_cycle(h, cycle)
    if bad is not None:
        raise InputError(f"{path}: cycle does not validate ({bad})")
    return cycle


def _load_path(h: Hypergraph, path: str) -> BergePath:
    data = _read_json(path)
    data = data.get("path", data)
    try:
        p = BergePath.from_dict(data)
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a path certificate ({exc})") from None
    bad = validate_path(h, p)
    if bad is not None:
        raise InputError(f"{path}: path does not validate ({bad})")
    return p


def _cfg(args) -> ThresholdConfig:
    return ThresholdConfig(args.d0, Fraction(args.gamma1), Fraction(args.gamma2))


# --- subcommands -------------------------------------------------------------


def cmd_check(args) -> int:
    h = _load_h(args.file)
    rep = ore_report(h)
    lines = [f"n={h.n} edges={h.num_edges} max edge size={h.max_edge_size}"]
    if rep.covering:
        lines.append("covering: every pair of vertices is adjacent")
    else:
        a, b = rep.witness_pair
        lines.append(f"min non-adjacent degree sum {rep.min_nonadjacent_sum} (pair {a} {b})")
        lines.append(f"satisfies Ore(d0) for d0 <= {rep.satisfied_d0}")
    _emit(args, rep.to_dict(), "\n".join(lines))
    return EXIT_OK


def _verdict_text(v) -> str:
    if v.certificate is None:
        return v.status
    return f"{v.status}\n{format_walk(v.certificate)}"


def cmd_hamiltonian(args) -> int:
    h = _load_h(args.file)
    results = {}
    if args.method in ("exact", "both"):
        results["exact"] = find_hamiltonian_berge_cycle(h, _budget(args))
    if args.method in ("heuristic", "both"):
        results["heuristic"] = heuristic_hamiltonian(h, budget=_budget(args))
    if args.method == "both":
        data = {k: v.to_dict() for k, v in results.items()}
        text = "\n".join(f"{k}: {_verdict_text(v)}" for k, v in results.items())
    else:
        (v,) = results.values()
        data, text = v.to_dict(), _verdict_text(v)
    _emit(args, data, text)
    decisive = results.get("exact", results.get("heuristic"))
    if decisive.status == TIMEOUT or (args.method == "heuristic" and decisive.status != HAMILTONIAN):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_max_cycle(args) -> int:
    h = _load_h(args.file)
    res = max_berge_cycle(h, _budget(args))
    text = res.status if res.cycle is None else f"length {len(res.cycle)}\n{format_walk(res.cycle)}"
    _emit(args, res.to_dict(), text)
    return EXIT_INCONCLUSIVE if res.status == TIMEOUT else EXIT_OK


def cmd_usable(args) -> int:
    h = _load_h(args.file)
    cycle = _load_cycle(h, args.cycle)
    us = usable_set(h, cycle, args.u)
    lines = [f"usable positions for {args.u}: {list(us.positions)}"]
    lines += [f"  {i} (v={cycle.v(i)}): witness edges {list(us.witness[i])}" for i in us.positions]
    _emit(args, us.to_dict(), "\n".join(lines))
    return EXIT_OK


def cmd_bridges(args) -> int:
    h = _load_h(args.file)
    cycle = _load_cycle(h, args.cycle)
    t = len(cycle)
    if args.all_pairs:
        pairs = [(i, j) for i in range(t) for j in range(i + 1, t)]
    elif args.i is not None and args.j is not None:
        pairs = [(args.i, args.j)]
    else:
        raise InputError("bridges needs --i and --j, or --all-pairs")
    records = [r for i, j in pairs for r in bridges(h, cycle, i, j)]
    union = sorted(bridge_union(h, cycle, None if args.all_pairs else [args.i, args.j]))
    data = {"bridges": [r.to_dict() for r in records], "union": union}
    lines = [f"R({r.i},{r.j}): edge {r.edge_id} via k={r.k} case {r.case}" for r in records]
    lines.append(f"union of bridge edges: {union}")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_classify(args) -> int:
    h = _load_h(args.file)
    cycle = _load_cycle(h, args.cycle)
    cfg = _cfg(args)
    if args.diagnostics:
        data = diagnostics(h, cycle, cfg)
        _emit(args, data, json.dumps(data, sort_keys=True, indent=2))
        return EXIT_OK
    cls = classify_vertices(h, cycle, cfg)
    lines = [f"v={v} d_C={cls.degree_on_cycle[v]} {' '.join(cls.classes_of(v))}" for v in range(h.n)]
    _emit(args, cls.to_dict(), "\n".join(lines))
    return EXIT_OK


def cmd_extend(args) -> int:
    h = _load_h(args.file)
    cycle = _load_cycle(h, args.cycle)
    given = [x is not None for x in (args.d0, args.gamma1, args.gamma2)]
    if any(given) and not all(given):
        raise InputError("--d0, --gamma1 and --gamma2 go together")
    cfg = _cfg(args) if all(given) else None
    res = try_extend(h, cycle, cfg, _budget(args))
    if res is None:
        _emit(args, None, "no move applies")
    else:
        _emit(args, res.to_dict(), f"{res.move}: length {len(res.new_cycle)}\n{format_walk(res.new_cycle)}")
    return EXIT_OK


def cmd_path_to_cycle(args) -> int:
    h = _load_h(args.file)
    path = _load_path(h, args.path)
    cycle = cycle_from_ham_path(h, path)
    _emit(args, cycle.to_dict(), f"length {len(cycle)}\n{format_walk(cycle)}")
    return EXIT_OK


def cmd_thresholds(args) -> int:
    results = validate_thresholds(_cfg(args), args.n)
    lines = [f"{'ok  ' if r.satisfied else 'FAIL'} {r.name}: {r.statement}" for r in results]
    _emit(args, [r.to_dict() for r in results], "\n".join(lines))
    return EXIT_OK


_GEN_PARAMS = ("n", "r", "k", "part_size", "p2", "p3", "d0")


def cmd_gen(args) -> int:
    params = {k: getattr(args, k) for k in _GEN_PARAMS if getattr(args, k) is not None}
    spec = GenSpec(args.family, params, args.seed)
    try:
        h = spec.build()
    except KeyError as exc:
        raise InputError(f"family {args.family} needs --{exc.args[0].replace('_', '-')}") from None
    except GenerationFailed as exc:
        raise InputError(str(exc)) from None
    if args.output:
        store(h, args.output)
        data = {"spec": spec.to_dict(), "output": args.output, "n": h.n, "num_edges": h.num_edges}
        _emit(args, data, f"wrote {args.output}: n={h.n} edges={h.num_edges}")
    else:
        _emit(args, h.to_dict(), format_hg(h).rstrip("\n"))
    return EXIT_OK


def cmd_verify(args) -> int:
    campaign = Campaign(
        kind=args.kind,
        n_min=args.n_min,
        n_max=args.n_max,
        d0=args.d0,
        samples=args.samples,
        seed=args.seed,
        max_nodes=args.budget_nodes,
        family=args.family,
        checks=tuple(args.checks or ()),
    )
    report = run_campaign(campaign, _threads(args.threads))
    if args.output:
        report.write(args.output)
        if report.counterexamples:
            cert_dir = Path(args.output).with_suffix("")
            cert_dir = cert_dir.with_name(cert_dir.name + "-certificates")
            for cx in report.counterexamples:
                write_certificate(cert_dir / f"cx-{cx['index']:06d}", cx)
    lines = [f"campaign {campaign.kind} n in [{campaign.n_min}, {campaign.n_max}] samples={campaign.samples}"]
    for n, row in sorted(report.per_n.items()):
        lines.append(
            f"n={n} sampled={row['sampled']} hamiltonian={row['hamiltonian']} "
            f"not_hamiltonian={row['not_hamiltonian']} timeouts={row['timeouts']} min_margin={row['min_margin']}"
        )
    for name, stats in report.checks.items():
        lines.append(f"{name}: {stats['passed']}/{stats['checked']} passed, {stats['skipped']} skipped")
    if report.counterexamples:
        lines.append(f"COUNTEREXAMPLES: {len(report.counterexamples)}")
    _emit(args, report.to_dict(), "\n".join(lines))
    return report.exit_code


def cmd_verify_cert(args) -> int:
    try:
        res = verify_certificate(args.path, args.budget_nodes)
    except (FileNotFoundError, ValueError, KeyError, HypergraphFormatError) as exc:
        raise InputError(f"{args.path}: {exc}") from None
    text = f"{res.checked} certificate(s) verified" if res.ok else "\n".join(res.problems)
    _emit(args, res.to_dict(), text)
    if res.ok:
        return EXIT_OK
    if any("out of budget" in p for p in res.problems):
        return EXIT_INCONCLUSIVE
    return EXIT_FAILED


# --- parser ------------------------------------------------------------------


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    """Global flags, accepted both before and after the subcommand."""
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--format", choices=("text", "json"), default=d("text"), help="output format (default text)")
    p.add_argument("--seed", type=int, default=d(0), help="random seed (default 0)")
    p.add_argument("--budget-nodes", type=_count, default=d(10**8), help="search node budget (default 1e8)")
    p.add_argument("--budget-seconds", type=float, default=d(None), help="wall-clock budget per search")
    p.add_argument("--threads", type=int, default=d(None), help="worker processes for verify (env BERGEHAM_THREADS, default 1)")
    return p


def _count(text: str) -> int:
    value = float(text)
    if value != int(value) or value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return int(value)


def _add_cfg(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--d0", type=int, required=required)
    p.add_argument("--gamma1", type=Fraction, required=required)
    p.add_argument("--gamma2", type=Fraction, required=required)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bergeham",
        description="Berge Hamiltonicity of [3]-graphs under Ore-type conditions.",
        parents=[_global_flags(False)],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common = [_global_flags(True)]

    def add(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=common, help=help_text, description=help_text)
        p.set_defaults(func=func)
        return p

    p = add("check", cmd_check, "shadow Ore report of a hypergraph")
    p.add_argument("file")

    p = add("hamiltonian", cmd_hamiltonian, "decide Berge Hamiltonicity")
    p.add_argument("file")
    p.add_argument("--method", choices=("exact", "heuristic", "both"), default="exact")

    p = add("max-cycle", cmd_max_cycle, "longest Berge cycle")
    p.add_argument("file")

    p = add("usable", cmd_usable, "usable set of an off-cycle vertex")
    p.add_argument("file")
    p.add_argument("--cycle", required=True, help="cycle certificate (JSON)")
    p.add_argument("--u", type=int, required=True)

    p = add("bridges", cmd_bridges, "bridge edges between cycle positions")
    p.add_argument("file")
    p.add_argument("--cycle", required=True, help="cycle certificate (JSON)")
    p.add_argument("--i", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--all-pairs", action="store_true")

    p = add("classify", cmd_classify, "degree classes relative to a cycle")
    p.add_argument("file")
    p.add_argument("--cycle", required=True, help="cycle certificate (JSON)")
    _add_cfg(p)
    p.add_argument("--diagnostics", action="store_true", help="full per-vertex diagnostics")

    p = add("extend", cmd_extend, "try to extend a cycle by one of the rotation moves")
    p.add_argument("file")
    p.add_argument("--cycle", required=True, help="cycle certificate (JSON)")
    _add_cfg(p, required=False)

    p = add("path-to-cycle", cmd_path_to_cycle, "close a Hamiltonian Berge path into a long cycle")
    p.add_argument("file")
    p.add_argument("--path", required=True, help="path certificate (JSON)")

    p = add("thresholds", cmd_thresholds, "check a threshold configuration")
    _add_cfg(p)
    p.add_argument("--n", type=int)

    p = add("gen", cmd_gen, "generate an instance")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--part-size", type=int)
    p.add_argument("--p2", type=float)
    p.add_argument("--p3", type=float)
    p.add_argument("--d0", type=int)
    p.add_argument("-o", "--output")

    p = add("verify", cmd_verify, "run a seeded verification campaign")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--d0", type=int, default=1)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--family", choices=("random", "hprime"), default="random")
    p.add_argument("--checks", nargs="+", choices=CHECKS, help="invariant_suite checks (default all)")
    p.add_argument("-o", "--output", help="report path; a CSV is written next to it")

    p = add("verify-cert", cmd_verify_cert, "re-verify counterexample certificates")
    p.add_argument("path", help="certificate directory, directory of them, or report JSON")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, PreconditionError, NoQualifyingCrossing) as exc:
        print(f"bergeham {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"bergeham {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
