"""Command-line interface.

Subcommands: check (property checks on a model file), orient (orientation
count tables for a graph file), sweep (seeded family verification), examples
(built-in showcase instances), refine (sub-urn refinement), replay
(re-verify a witness file).  Exit codes: 0 all pass, 1 a property failed,
2 usage or input error.  Reports are JSON; every failure carries a witness
that `replay` re-verifies exactly.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .measures import FiniteMeasure, SetMeasure, ZeroMassConditionError
from .orientations import (
    MultiGraph,
    OrientationBudgetError,
    ball_count_table,
    occ_count_table,
)
from .properties import (
    check_CFM,
    check_CNA,
    check_CNC,
    check_FM,
    check_NA,
    check_NC,
    check_NMP,
    check_Rayleigh,
    check_SCP,
    check_ULC,
    replay_witness,
)
from .rationals import format_rational
from .searches import search_rayleigh_failure, search_ulc_failure, sweep_models
from .urns import (
    BudgetExceededError,
    IntervalSpec,
    UrnModel,
    ball_set_measure_ball,
    ball_set_measure_occ,
    enumeration_measure,
    interval_measure,
    occupation_measure,
    refine_model,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


class UsageError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _write_out(payload: dict, out: str | None):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _parse_int_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(v) for v in text.split(","))


def _parse_cutpoints(text: str, model: UrnModel) -> IntervalSpec:
    per_urn = [seq for seq in text.split(";") if seq.strip()]
    cuts = tuple(_parse_int_list(seq) for seq in per_urn)
    spec = IntervalSpec(cuts)
    spec.validate_for(model)
    return spec


PROPERTY_CHOICES = (
    "na", "nc", "cna", "cnc", "fm", "cfm", "ulc", "rayleigh",
    "nmp", "scp",
)


def _measure_for(model: UrnModel, args) -> FiniteMeasure:
    if args.cutpoints:
        return interval_measure(model, _parse_cutpoints(args.cutpoints, model))
    if args.measure == "enum":
        return enumeration_measure(model)
    return occupation_measure(model)


def _set_measure_for(model: UrnModel, args) -> SetMeasure:
    if args.a is not None:
        return ball_set_measure_ball(model, _parse_int_list(args.a))
    d = args.d if args.d is not None else 0
    return ball_set_measure_occ(model, d)


def cmd_check(args) -> int:
    if args.replay:
        return cmd_replay_path(args.replay)
    if not args.model:
        raise UsageError("a model file is required (or --replay)")
    model = UrnModel.from_json_dict(_load_json(args.model))
    props = [p.strip() for p in args.prop.split(",") if p.strip()]
    for p in props:
        if p not in PROPERTY_CHOICES:
            raise UsageError(
                f"unknown property {p!r}; choose from {', '.join(PROPERTY_CHOICES)}"
            )
    reports = []
    for prop in props:
        if prop in ("nmp", "scp"):
            nu = _set_measure_for(model, args)
            report = check_NMP(nu) if prop == "nmp" else check_SCP(nu)
        else:
            mu = _measure_for(model, args)
            if prop == "na":
                report = check_NA(mu, args.cap)
            elif prop == "nc":
                report = check_NC(mu)
            elif prop == "cna":
                report = check_CNA(mu, args.cap)
            elif prop == "cnc":
                report = check_CNC(mu)
            elif prop == "fm":
                report = check_FM(mu, args.cap)
            elif prop == "cfm":
                report = check_CFM(mu, args.cap)
            elif prop == "ulc":
                report = check_ULC(mu)
            else:
                report = check_Rayleigh(mu, seed=args.seed)
        reports.append(report)
    payload = {
        "model": model.to_json_dict(),
        "reports": [r.to_json_dict() for r in reports],
    }
    _write_out(payload, args.out)
    if any(r.failed for r in reports):
        return EXIT_FAIL
    return EXIT_PASS


def cmd_orient(args) -> int:
    g = MultiGraph.from_json_dict(_load_json(args.graph))
    spec_a = _parse_int_list(args.a) if args.a is not None else None
    d = args.d
    if spec_a is None and d is None:
        d = 0
    tables = {}
    modes = ("brute", "recurrence") if args.mode == "both" else (
        ("recurrence",) if args.mode == "rec" else ("brute",)
    )
    for mode in modes:
        if spec_a is not None:
            table = ball_count_table(g, spec_a, method=mode)
        else:
            table = occ_count_table(g, d, method=mode)
        tables[mode] = {
            ",".join(str(j) for j in sorted(s)): count
            for s, count in sorted(table.items(), key=lambda kv: sorted(kv[0]))
        }
    payload = {
        "graph": g.to_json_dict(),
        "spec": {"a": list(spec_a)} if spec_a is not None else {"d": d},
        "tables": tables,
    }
    note = None
    if spec_a is not None and any(
        g.degree(i + 1) != 2 * spec_a[i] for i in range(len(spec_a))
    ):
        note = "degree mismatch: every count is 0 (vertices i <= d need degree 2 a_i)"
        payload["note"] = note
    _write_out(payload, args.out)
    if args.mode == "both" and tables["brute"] != tables["recurrence"]:
        print("brute and recurrence tables disagree", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_PASS


def cmd_sweep(args) -> int:
    config = _load_json(args.config)
    if not isinstance(config, dict):
        raise UsageError("sweep config must be a JSON object")
    try:
        summary = sweep_models(config)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _write_out(summary, args.out)
    return EXIT_FAIL if summary["violations"] else EXIT_PASS


def cmd_examples(args) -> int:
    """Built-in showcase: the known counterexamples and identities."""
    out: dict = {}

    # the stochastic-covering failure of the two-ball two-urn model
    model = UrnModel.ordinary(2, ("1/2", "1/2"))
    nu = ball_set_measure_occ(model, 1)
    scp = check_SCP(nu)
    out["scp_counterexample"] = {
        "model": model.to_json_dict(),
        "d": 1,
        "verdict": scp.verdict,
        "witness": scp.witness,
        "conditional_values": {
            "ball1_out": format_rational(Fraction(1, 2)),
            "ball1_in": format_rational(Fraction(0)),
        },
    }
    ok_scp = scp.failed and scp.witness["p_low"] == "1/2" and scp.witness["p_high"] == "0"

    # sub-urn refinement bookkeeping on the same model
    refined, desc = refine_model(model, 1)
    mu = enumeration_measure(model)
    mu_ref = enumeration_measure(refined)
    pushed: dict = {}
    for point, w in mu_ref.mass.items():
        key = desc.original_counts(point)
        pushed[key] = pushed.get(key, Fraction(0)) + w
    out["refinement"] = {
        "model": model.to_json_dict(),
        "d": 1,
        "refined_urns": refined.urns,
        "block_sum_pushforward_matches": pushed == dict(mu.mass),
    }
    ok_refine = refined.urns == 3 and pushed == dict(mu.mass)

    # ULC failure search (the ordinary range is exhausted first; the
    # generalized family provides the desk-scale witness)
    ordinary = search_ulc_failure(max_m=args.max_m, max_n=args.max_n,
                                  scope="ordinary",
                                  max_denominator=args.denominator)
    generalized = search_ulc_failure(scope="generalized", seed=args.seed)
    out["ulc_search"] = {
        "ordinary_range": {"max_m": args.max_m, "max_n": args.max_n,
                           "max_denominator": args.denominator},
        "ordinary_found": ordinary is not None,
        "generalized_found": generalized is not None,
    }
    if ordinary is not None:
        out["ulc_search"]["ordinary"] = {
            "model": ordinary[0].to_json_dict(),
            "witness": ordinary[1].witness,
        }
    if generalized is not None:
        out["ulc_search"]["generalized"] = {
            "model": generalized[0].to_json_dict(),
            "witness": generalized[1].witness,
        }

    # Rayleigh (field NC) failure of an ordinary occupation measure
    rayleigh = search_rayleigh_failure(max_m=args.max_m, max_n=args.max_n,
                                       max_denominator=args.denominator,
                                       seed=args.seed)
    out["rayleigh_search"] = {"found": rayleigh is not None}
    if rayleigh is not None:
        out["rayleigh_search"]["model"] = rayleigh[0].to_json_dict()
        out["rayleigh_search"]["witness"] = rayleigh[1].witness

    _write_out(out, args.out)
    ok = ok_scp and ok_refine and rayleigh is not None and generalized is not None
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_refine(args) -> int:
    model = UrnModel.from_json_dict(_load_json(args.model))
    if not 0 <= args.d < model.urns:
        raise UsageError(f"--d must be in 0..{model.urns - 1}")
    refined, desc = refine_model(model, args.d)
    # push the refined enumeration back through the block sums before
    # emitting anything
    mu = enumeration_measure(model)
    mu_ref = enumeration_measure(refined)
    pushed: dict = {}
    for point, w in mu_ref.mass.items():
        key = desc.original_counts(point)
        pushed[key] = pushed.get(key, Fraction(0)) + w
    if pushed != dict(mu.mass):
        print("refinement pushforward mismatch (internal error)", file=sys.stderr)
        return EXIT_FAIL
    payload = {
        "model": refined.to_json_dict(),
        "descriptor": desc.to_json_dict(),
    }
    _write_out(payload, args.out)
    return EXIT_PASS


def cmd_replay_path(path: str) -> int:
    data = _load_json(path)
    witness = data.get("witness", data)
    if witness is None:
        raise UsageError("no witness found in file")
    if isinstance(witness, dict) and "witness" in witness and "kind" not in witness:
        witness = witness["witness"]
    ok = replay_witness(witness)
    print("witness re-verifies" if ok else "witness does NOT re-verify")
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_replay(args) -> int:
    return cmd_replay_path(args.witness)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="urncheck",
        description="Exact negative-dependence checks for independent urn models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="run property checks on a model file")
    p_check.add_argument("model", nargs="?", help="model JSON file")
    p_check.add_argument("--prop", default="cna",
                         help="comma list: " + ",".join(PROPERTY_CHOICES))
    p_check.add_argument("--measure", choices=("occ", "enum"), default="occ")
    p_check.add_argument("--d", type=int, default=None,
                         help="occupied-prefix size for nmp/scp measures")
    p_check.add_argument("--a", default=None,
                         help="comma list: exact counts for the first urns")
    p_check.add_argument("--cutpoints", default=None,
                         help="per-urn cutpoints, ';'-separated, e.g. '0,1,4;0,2,4'")
    p_check.add_argument("--cap", type=int, default=None, help="up-set cap")
    p_check.add_argument("--seed", type=int, default=0)
    p_check.add_argument("--out", default=None)
    p_check.add_argument("--replay", default=None,
                         help="re-verify a witness file instead of checking")
    p_check.set_defaults(func=cmd_check)

    p_orient = sub.add_parser("orient", help="orientation count tables")
    p_orient.add_argument("graph", help="graph JSON file")
    p_orient.add_argument("--d", type=int, default=None)
    p_orient.add_argument("--a", default=None)
    p_orient.add_argument("--mode", choices=("brute", "rec", "both"), default="both")
    p_orient.add_argument("--out", default=None)
    p_orient.set_defaults(func=cmd_orient)

    p_sweep = sub.add_parser("sweep", help="verify properties over a model family")
    p_sweep.add_argument("config", help="sweep config JSON file")
    p_sweep.add_argument("--out", default=None)
    p_sweep.set_defaults(func=cmd_sweep)

    p_ex = sub.add_parser("examples", help="reproduce the built-in showcase")
    p_ex.add_argument("--max-m", type=int, default=4, dest="max_m")
    p_ex.add_argument("--max-n", type=int, default=4, dest="max_n")
    p_ex.add_argument("--denominator", type=int, default=8)
    p_ex.add_argument("--seed", type=int, default=0)
    p_ex.add_argument("--out", default=None)
    p_ex.set_defaults(func=cmd_examples)

    p_refine = sub.add_parser("refine", help="emit the sub-urn refinement")
    p_refine.add_argument("model", help="model JSON file")
    p_refine.add_argument("--d", type=int, required=True)
    p_refine.add_argument("--out", default=None)
    p_refine.set_defaults(func=cmd_refine)

    p_replay = sub.add_parser("replay", help="re-verify a witness file")
    p_replay.add_argument("witness", help="witness JSON file")
    p_replay.set_defaults(func=cmd_replay)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, KeyError, ZeroMassConditionError,
            BudgetExceededError, OrientationBudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
