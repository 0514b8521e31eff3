"""Command line front end.

All subcommands run in process by default; ``--server URL`` sends the
same request to a running service instead.  Exit codes: 0 when the
command (and any pass/fail judgment it carries) succeeded, 1 when an
experiment ran to completion but failed its judgment, 2 for usage or
parameter errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx

from . import service
from .experiments import bounds_table_csv


def _read_json(path: str) -> dict:
    return json.loads(Path(path).read_text())


def _emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _dump(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _post(server: str, path: str, payload: dict) -> dict:
    resp = httpx.post(server.rstrip("/") + path, json=payload, timeout=600.0)
    if resp.status_code >= 400:
        raise ValueError(f"server rejected the request ({resp.status_code}): {resp.text}")
    return resp.json()


def _report_csv_lines(reports: list[dict]) -> str:
    cols = [
        "kind",
        "variant",
        "mode",
        "dimension",
        "epsilon",
        "set_size",
        "trials",
        "seed",
        "analytic_prediction",
        "empirical_accept_rate",
        "wilson_low",
        "wilson_high",
        "threshold_side",
        "passed",
    ]
    lines = [",".join(cols)]
    for rep in reports:
        params = rep.get("parameters", {})
        lo, hi = rep.get("wilson_interval", [None, None])
        row = {
            "kind": rep.get("kind"),
            "variant": params.get("variant"),
            "mode": params.get("mode"),
            "dimension": params.get("dimension"),
            "epsilon": params.get("epsilon"),
            "set_size": params.get("set_size"),
            "trials": rep.get("trials"),
            "seed": params.get("seed"),
            "analytic_prediction": rep.get("analytic_prediction"),
            "empirical_accept_rate": rep.get("empirical_accept_rate"),
            "wilson_low": lo,
            "wilson_high": hi,
            "threshold_side": rep.get("threshold_side"),
            "passed": rep.get("passed"),
        }
        lines.append(",".join("" if row[c] is None else str(row[c]) for c in cols))
    return "\n".join(lines) + "\n"


def _emit_reports(reports: list[dict], args) -> int:
    if args.format == "csv":
        _emit(_report_csv_lines(reports), args.output)
    else:
        _emit("\n".join(_dump(r) for r in reports), args.output)
    return 0 if all(r["passed"] for r in reports) else 1


def cmd_plan(args) -> int:
    req = service.PlanRequest(
        mode=args.mode,
        epsilon=args.epsilon,
        dimension=args.dimension,
        set_size=args.set_size,
        l2_constant=args.l2_constant,
    )
    if args.server:
        plan = _post(args.server, "/plan", req.model_dump())["plan"]
    else:
        plan = service.handle_plan(req)
    _emit(_dump(plan), args.output)
    return 0


def _run_variants(args, variants, make_request, path, handler) -> int:
    instance = _read_json(args.input) if args.input else None
    reports = []
    for variant in variants:
        req = make_request(variant, instance)
        if args.server:
            data = _post(args.server, path, req.model_dump())
        else:
            data = handler(req).model_dump()
        reports.append(data["report"])
    return _emit_reports(reports, args)


def cmd_simulate_state_set(args) -> int:
    variants = ("member", "far") if args.variant == "both" else (args.variant,)

    def make(variant, instance):
        return service.SimulateStateSetRequest(
            dimension=args.dimension,
            epsilon=args.epsilon,
            set_size=args.set_size,
            trials=args.trials,
            seed=args.seed,
            variant=variant,
            instance=instance,
        )

    return _run_variants(args, variants, make, "/simulate/state-set", service.handle_simulate_state_set)


def cmd_simulate_unitary(args) -> int:
    variants = ("equal", "far") if args.variant == "both" else (args.variant,)

    def make(variant, instance):
        return service.SimulateUnitaryRequest(
            mode=args.mode,
            dimension=args.dimension,
            epsilon=args.epsilon,
            trials=args.trials,
            seed=args.seed,
            variant=variant,
            instance=instance,
        )

    return _run_variants(args, variants, make, "/simulate/unitary", service.handle_simulate_unitary)


def cmd_oracle_verify(args) -> int:
    req = service.OracleVerifyRequest(seed=args.seed)
    if args.server:
        data = _post(args.server, "/oracle/verify", req.model_dump())
    else:
        data = service.handle_oracle_verify(req).model_dump()
    report = data["report"]
    if args.format == "csv":
        lines = ["name,passed,discrepancy"]
        for c in report["detail"]["checks"]:
            lines.append(f"{c['name']},{c['passed']},{c['discrepancy']}")
        _emit("\n".join(lines), args.output)
    else:
        _emit(_dump(report), args.output)
    return 0 if data["passed"] else 1


def cmd_bounds_table(args) -> int:
    req = service.BoundsTableRequest(
        eps_grid=args.epsilon,
        d_grid=args.dimension,
        set_sizes=args.set_size,
        delta_grid=args.delta,
    )
    if args.server:
        data = _post(args.server, "/bounds/table", req.model_dump())
    else:
        data = service.handle_bounds_table(req).model_dump()
    report = data["report"]
    if args.format == "csv":
        _emit(bounds_table_csv(report["detail"]), args.output)
    else:
        _emit(_dump(report), args.output)
    return 0 if data["passed"] else 1


def cmd_gen_instances(args) -> int:
    req = service.GenInstancesRequest(
        kind=args.kind,
        dimension=args.dimension,
        epsilon=args.epsilon,
        seed=args.seed,
        set_size=args.set_size,
        min_distance=args.delta,
    )
    if args.server:
        instance = _post(args.server, "/instances/generate", req.model_dump())["instance"]
    else:
        instance = service.handle_gen_instances(req).instance
    _emit(_dump(instance), args.output)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run(service.app, host=args.host, port=args.port)
    return 0


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--output", help="write the result to this file instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--server", help="base URL of a running service; default is in-process")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcert",
        description="Plan and simulate certification testers for pure-state "
        "membership and unitary equality.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="print the copy budget and shape for a tester")
    p.add_argument("--mode", required=True, choices=("membership",) + service.UNITARY_MODES)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--dimension", type=int, default=2)
    p.add_argument("--set-size", type=int, default=None)
    p.add_argument(
        "--l2-constant",
        type=float,
        default=1.0,
        help="variance constant for the Euclidean-variant budget in membership plans",
    )
    _add_common(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("simulate-state-set", help="Monte Carlo membership campaign")
    p.add_argument("--dimension", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--set-size", type=int, default=8)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--variant", choices=("member", "far", "both"), default="both")
    p.add_argument("--input", help="instance file from gen-instances")
    _add_common(p)
    p.set_defaults(func=cmd_simulate_state_set)

    p = sub.add_parser("simulate-unitary", help="Monte Carlo equality campaign")
    p.add_argument("--mode", required=True, choices=service.UNITARY_MODES)
    p.add_argument("--dimension", type=int, default=2)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--variant", choices=("equal", "far", "both"), default="both")
    p.add_argument("--input", help="instance file from gen-instances")
    _add_common(p)
    p.set_defaults(func=cmd_simulate_unitary)

    p = sub.add_parser("oracle-verify", help="dense cross-checks of the closed forms")
    p.add_argument("--seed", type=int, default=7)
    _add_common(p)
    p.set_defaults(func=cmd_oracle_verify)

    p = sub.add_parser("bounds-table", help="copy-budget comparison tables")
    p.add_argument("--epsilon", type=float, nargs="+", required=True)
    p.add_argument("--dimension", type=int, nargs="+", default=[2, 3])
    p.add_argument("--set-size", type=int, nargs="+", default=[8])
    p.add_argument("--delta", type=float, nargs="+", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_bounds_table)

    p = sub.add_parser("gen-instances", help="write a self-contained instance file")
    p.add_argument("--kind", required=True, choices=("state-set-membership", "unitary-equality"))
    p.add_argument("--dimension", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--set-size", type=int, default=8)
    p.add_argument("--delta", type=float, default=None, help="prescribed minimum pairwise distance")
    p.add_argument("--seed", type=int, default=7)
    _add_common(p)
    p.set_defaults(func=cmd_gen_instances)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, RuntimeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
