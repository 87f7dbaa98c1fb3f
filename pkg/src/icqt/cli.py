"""Command-line entry point.

    icqt validate|evolve|born|icqc|suite <scenario.json> [--out DIR] [--seed N]

Exit codes: 0 success, 1 property or validation failure, 2 input error.
Reports are deterministic for a fixed (scenario, seed).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .born import conventional_oracle, dual_born_report
from .dynamics import (
    check_pmc,
    check_sapmc,
    evolve_factorized,
    evolve_full,
)
from .icqc import run as icqc_run
from .scenario import (
    Scenario,
    ScenarioError,
    load_scenario,
    parse_branch_bases,
    parse_dims,
    parse_icqc_config,
    parse_initial_state,
    parse_segments,
    parse_times,
    parse_vector,
)
from .serialize import complex_to_pairs, dumps, write_csv, write_json
from .suite import run_property_suite
from .trinary import (
    TrinaryState,
    apply_programmed,
    build_programmed_unitary,
    dual_entropies,
    validate_informational_completeness,
)

_COMMAND_KIND = {
    "validate": "trinary-build",
    "evolve": "dynamics",
    "born": "born",
    "icqc": "icqc",
    "suite": "property-suite",
}


def cmd_validate(scenario: Scenario, out_dir: Path) -> int:
    dims = parse_dims(scenario.payload)
    bases, labels = parse_branch_bases(scenario.payload, dims)
    probe = None
    if "probe_apparatus" in scenario.payload:
        probe = parse_vector(scenario.payload["probe_apparatus"], dims.d_a, "probe_apparatus")
    pu = build_programmed_unitary(dims, bases, labels=labels)
    report = validate_informational_completeness(pu, probe)
    doc = {
        "kind": scenario.kind,
        "seed": scenario.seed,
        "dims": [dims.d_s, dims.d_a, dims.d_p],
        "dims_ok": report.dims_ok,
        "minimal_dims_ok": report.minimal_dims_ok,
        "tomographic_rank": report.tomographic_rank,
        "required_rank": dims.d_s * dims.d_s,
        "complete": report.complete,
        "branch_labels": [lab if lab is not None else "custom" for lab in labels],
    }
    write_json(out_dir / "completeness.json", doc)
    sys.stdout.write(dumps(doc))
    return 0 if report.complete else 1


def _segment_state(segments, state, t, mode):
    """State at absolute time t under a piecewise-constant schedule."""
    remaining = t
    current = state
    for duration, h, _ in segments:
        step = min(duration, remaining)
        if mode == "factorized":
            current = evolve_factorized(h, current, step)
        else:
            current = evolve_full(h, current, step)
        remaining -= step
        if remaining <= 0:
            return current
    raise ScenarioError(f"schedule is shorter than requested time {t}")


def cmd_evolve(scenario: Scenario, out_dir: Path) -> int:
    payload = scenario.payload
    dims = parse_dims(payload)
    times = parse_times(payload)
    segments = parse_segments(payload, dims, scenario.seed)
    state = parse_initial_state(payload, dims, scenario.seed)

    pmc_checks = [check_pmc(h) for _, h, _ in segments]
    pmc_ok = all(c.satisfied for c in pmc_checks)
    sapmc_doc = None
    if any(s is not None for _, _, structures in segments for s in structures):
        sapmc_doc = []
        for k, (_, _, structures) in enumerate(segments):
            for n, structure in enumerate(structures):
                if structure is None:
                    continue
                chk = check_sapmc(structure)
                sapmc_doc.append(
                    {
                        "segment": k,
                        "block": n,
                        "commutator_norm": chk.commutator_norm,
                        "satisfied": chk.satisfied,
                    }
                )

    s_psa = np.zeros(len(times))
    s_branches = np.zeros((len(times), dims.d_p))
    deviation = None
    for i, t in enumerate(times):
        full_state = _segment_state(segments, state, t, "full")
        if pmc_ok:
            fact_state = _segment_state(segments, state, t, "factorized")
            dev = float(
                np.max(np.abs(fact_state.dense.amplitudes - full_state.dense.amplitudes))
            )
            deviation = dev if deviation is None else max(deviation, dev)
            current = fact_state
        else:
            current = full_state
        s_psa[i], s_branches[i] = dual_entropies(current)

    rows = [
        [t, s_psa[i]] + [s_branches[i, r] for r in range(dims.d_p)]
        for i, t in enumerate(times)
    ]
    header = ["t", "S_PSA"] + [f"S_SA_branch_{r}" for r in range(dims.d_p)]
    write_csv(out_dir / "trajectory.csv", header, rows)

    doc = {
        "kind": scenario.kind,
        "seed": scenario.seed,
        "dims": [dims.d_s, dims.d_a, dims.d_p],
        "times": list(times),
        "pmc": [
            {"segment": k, "commutator_norm": c.commutator_norm, "satisfied": c.satisfied}
            for k, c in enumerate(pmc_checks)
        ],
        "sapmc": sapmc_doc,
        "pmc_fallback": not pmc_ok,
        "factorized_full_max_deviation": deviation,
        "final_S_PSA": float(s_psa[-1]),
        "monotone_psa": bool(np.all(np.diff(s_psa) >= -1e-9)),
    }
    write_json(out_dir / "summary.json", doc)
    sys.stdout.write(dumps(doc))
    if not pmc_ok:
        sys.stderr.write("warning: measurability condition violated; dense evolution used\n")
    return 0


def cmd_born(scenario: Scenario, out_dir: Path) -> int:
    payload = scenario.payload
    dims = parse_dims(payload)
    bases, labels = parse_branch_bases(payload, dims)
    pu = build_programmed_unitary(dims, bases, labels=labels)

    g = payload.get("g", "uniform")
    chi = parse_vector(g, dims.d_p, "g")
    system = payload.get("system_state", "uniform")
    if system == "random":
        from .linalg import seeded_random
        from .suite import subseed

        psi = seeded_random("state", dims.d_s, subseed(scenario.seed, 3))
    else:
        psi = parse_vector(system, dims.d_s, "system_state")
    phi = parse_vector(payload.get("apparatus_state", "basis0"), dims.d_a, "apparatus_state")

    state = apply_programmed(pu, TrinaryState.from_product(dims, chi, psi, phi))
    report = dual_born_report(state, labels=tuple(labels))

    max_dev = 0.0
    oracle_rows = []
    for r in range(dims.d_p):
        conv = np.sort(conventional_oracle(psi, bases[r]))[::-1]
        oracle_rows.append([float(x) for x in conv])
        if not report.empty[r]:
            max_dev = max(max_dev, float(np.max(np.abs(report.outcome_probs[r] - conv))))
    doc = {
        "kind": scenario.kind,
        "seed": scenario.seed,
        "dims": [dims.d_s, dims.d_a, dims.d_p],
        "decision_probs": [float(x) for x in report.decision_probs],
        "outcome_probs": [[float(x) for x in row] for row in report.outcome_probs],
        "branch_labels": [lab if lab is not None else "custom" for lab in labels],
        "degenerate": list(report.degenerate),
        "empty": list(report.empty),
        "conventional_outcomes_sorted": oracle_rows,
        "max_outcome_deviation": max_dev,
    }
    write_json(out_dir / "born_report.json", doc)
    sys.stdout.write(dumps(doc))
    return 0


def cmd_icqc(scenario: Scenario, out_dir: Path) -> int:
    config = parse_icqc_config(scenario.payload, scenario.seed)
    report = icqc_run(config)
    doc = {
        "kind": scenario.kind,
        "seed": scenario.seed,
        "n": config.n,
        "registers": {"n_s": config.n, "n_a": config.n_a, "n_p": config.n_p},
        "s_psa": report.s_psa,
        "s_sa_branches": [float(x) for x in report.s_sa_branches],
        "mean_s_sa": report.mean_s_sa,
        "decision_probs": [float(x) for x in report.born.decision_probs],
        "outcome_probs": [[float(x) for x in row] for row in report.born.outcome_probs],
        "degenerate": list(report.born.degenerate),
        "empty": list(report.born.empty),
    }
    if scenario.payload.get("emit_state"):
        doc["final_state"] = complex_to_pairs(report.final_state.dense.amplitudes)
    write_json(out_dir / "icqc_report.json", doc)
    sys.stdout.write(dumps(doc))
    return 0


def cmd_suite(scenario: Scenario, out_dir: Path) -> int:
    payload = scenario.payload
    dims_list = payload.get("dims_list")
    if dims_list is None:
        dims = None
    else:
        if not isinstance(dims_list, list) or not dims_list:
            raise ScenarioError("dims_list must be a nonempty list of [d_s, d_a, d_p]")
        dims = tuple(parse_dims({"dims": d}) for d in dims_list)

    def count(key: str, default: int) -> int:
        value = payload.get(key, default)
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise ScenarioError(f"{key} must be a positive integer")
        return value

    kwargs = dict(
        factorization_cases=count("factorization_cases", 50),
        converse_cases=count("converse_cases", 10),
        block_cases=count("block_cases", 50),
        born_cases=count("born_cases", 100),
        creation_cases=count("creation_cases", 20),
        shannon_cases=count("shannon_cases", 100),
        schmidt_roundtrips=count("schmidt_roundtrips", 1000),
    )
    if dims is not None:
        kwargs["dims_list"] = dims
    results = run_property_suite(scenario.seed, **kwargs)
    doc = {
        "kind": scenario.kind,
        "seed": scenario.seed,
        "properties": [r.as_dict() for r in results],
        "all_passed": all(r.passed for r in results),
    }
    write_json(out_dir / "suite_report.json", doc)
    sys.stdout.write(dumps(doc))
    failures = [r.name for r in results if not r.passed]
    if failures:
        sys.stderr.write("failed properties: " + ", ".join(failures) + "\n")
        return 1
    return 0


_HANDLERS = {
    "validate": cmd_validate,
    "evolve": cmd_evolve,
    "born": cmd_born,
    "icqc": cmd_icqc,
    "suite": cmd_suite,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="icqt",
        description="Trinary quantum system simulator and verification suite",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _HANDLERS:
        p = sub.add_parser(name, help=f"run a {_COMMAND_KIND[name]} scenario")
        p.add_argument("scenario", help="path to the scenario JSON file")
        p.add_argument("--out", default=".", help="output directory (default: current)")
        p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    args = parser.parse_args(argv)

    try:
        scenario = load_scenario(args.scenario, seed_override=args.seed)
        expected = _COMMAND_KIND[args.command]
        if scenario.kind != expected:
            raise ScenarioError(
                f"command '{args.command}' needs kind '{expected}', scenario says '{scenario.kind}'"
            )
        return _HANDLERS[args.command](scenario, Path(args.out))
    except ScenarioError as exc:
        sys.stderr.write(f"scenario error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
