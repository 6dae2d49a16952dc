"""Command line for the solvers.

Every subcommand builds the same request models the HTTP service accepts and
by default runs them in-process; with --server URL the request is POSTed to a
running service instead. Exit codes: 0 success, 2 configuration or transport
error, 3 finished but the accuracy target was not certified (a divergent
nonsmooth run, or an uncertified dual solve).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import httpx
from pydantic import ValidationError

from .service import api
from .service.schemas import (CompareRequest, DualRequest, PerturbationModel,
                              SolveRequest, SweepRequest)

OK = 0
CONFIG_ERROR = 2
TOLERANCE_NOT_MET = 3

_CSV_COLUMNS = ["method", "function", "eps", "iterations", "value_calls",
                "direction_calls", "full_grad_calls", "wall_ms", "final_gap"]


class RemoteError(RuntimeError):
    pass


def _post(server: str, path: str, payload: dict) -> dict:
    with httpx.Client(base_url=server, timeout=300.0) as client:
        resp = client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise RemoteError(f"POST {path} returned HTTP {resp.status_code}: {detail}")
    return resp.json()


def _get(server: str, path: str):
    with httpx.Client(base_url=server, timeout=60.0) as client:
        resp = client.get(path)
    if resp.status_code != 200:
        raise RemoteError(f"GET {path} returned HTTP {resp.status_code}")
    return resp.json()


def _fmt(x, digits: int = 6) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return format(x, f".{digits}g")
    return str(x)


def _print_block(title: str, pairs: list[tuple[str, str]]) -> None:
    print(title)
    width = max(len(k) for k, _ in pairs)
    for k, v in pairs:
        print(f"  {k.ljust(width)}  {v}")


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_rows(rows: list[dict], stream) -> None:
    writer = csv.writer(stream)
    writer.writerow(_CSV_COLUMNS)
    for row in rows:
        writer.writerow([_csv_cell(row.get(col)) for col in _CSV_COLUMNS])


def _summary_row(d: dict) -> dict:
    c = d["counters"]
    return {"method": d["method"], "function": d["function"], "eps": d["eps"],
            "iterations": d["iterations"], "value_calls": c["value_calls"],
            "direction_calls": c["direction_calls"], "full_grad_calls": c["full_grad_calls"],
            "wall_ms": d["wall_ms"], "final_gap": d["gap"]}


def _append_rows(path: str, rows: list[dict]) -> None:
    target = Path(path)
    fresh = not target.exists() or target.stat().st_size == 0
    with open(target, "a", newline="") as fh:
        writer = csv.writer(fh)
        if fresh:
            writer.writerow(_CSV_COLUMNS)
        for row in rows:
            writer.writerow([_csv_cell(row.get(col)) for col in _CSV_COLUMNS])


def _comma_list(text: str) -> list[str]:
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated list")
    return items


def _print_solve(d: dict) -> None:
    budget = d.get("budget") or {}
    counters = d["counters"]
    planned = budget.get("iterations")
    iters = str(d["iterations"]) if planned is None else f"{d['iterations']} of {planned}"
    pairs = [
        ("point", f"({_fmt(d['point'][0], 9)}, {_fmt(d['point'][1], 9)})"),
        ("value", _fmt(d["value"], 12)),
        ("gap", f"{_fmt(d['gap'], 6)} (eps {_fmt(d['eps'])})"),
        ("iterations", iters),
        ("stop", d["stop_reason"]),
        ("calls", f"value={counters['value_calls']} direction={counters['direction_calls']} "
                  f"full_grad={counters['full_grad_calls']}"),
        ("wall", f"{_fmt(d['wall_ms'], 4)} ms"),
    ]
    if d.get("region_best_gap") is not None:
        pairs.insert(3, ("region best gap", _fmt(d["region_best_gap"])))
    _print_block(f"{d['function']} via {d['method']} on {d['domain']}", pairs)


def _solve_exit(d: dict) -> int:
    gap = d.get("gap")
    if gap is not None and gap > d["eps"]:
        print(f"accuracy target not met: gap {_fmt(gap)} exceeds eps {_fmt(d['eps'])}",
              file=sys.stderr)
        return TOLERANCE_NOT_MET
    return OK


def cmd_functions(args) -> int:
    if args.server:
        infos = _get(args.server, "/functions")
    else:
        infos = [f.model_dump(mode="json") for f in api.list_functions()]
    if args.json:
        print(json.dumps(infos, indent=2))
        return OK
    for f in infos:
        b = f["bounds"]
        m = "-" if f["grad_lipschitz_M"] is None else _fmt(f["grad_lipschitz_M"])
        print(f"{f['name']:14s} [{_fmt(b[0])},{_fmt(b[1])}]x[{_fmt(b[2])},{_fmt(b[3])}]  "
              f"L={_fmt(f['lipschitz_L'])}  M={m}  min={_fmt(f['min_value'])}")
        print(f"{'':14s} {f['summary']}")
    return OK


def cmd_solve(args) -> int:
    perturbation = None
    if args.perturb_delta is not None:
        perturbation = PerturbationModel(mode=args.perturb_mode, delta_cap=args.perturb_delta,
                                         seed=args.perturb_seed)
    elif args.perturb_mode != "random":
        raise ValueError("--perturb-mode needs --perturb-delta")
    function, problem = args.function, None
    if function.endswith(".json") or "/" in function or Path(function).is_file():
        problem = json.loads(Path(function).read_text())
        function = None
    req = SolveRequest(function=function, problem=problem, method=args.method, eps=args.eps,
                       domain=args.domain, inner_delta=args.inner_delta,
                       iterations=args.iterations,
                       small_grad_stop=not args.no_small_grad_stop,
                       perturbation=perturbation,
                       collect_trace=args.trace is not None)
    if args.server:
        d = _post(args.server, "/solve", req.model_dump(mode="json"))
    else:
        d = api.run_solve(req).model_dump(mode="json")
    if args.trace is not None:
        Path(args.trace).write_text(json.dumps(d, indent=2))
    if args.csv is not None:
        _append_rows(args.csv, [_summary_row(d)])
    if args.json:
        print(json.dumps(d, indent=2))
    else:
        _print_solve(d)
    return _solve_exit(d)


def cmd_compare(args) -> int:
    req = CompareRequest(function=args.function, eps=args.eps, methods=args.methods)
    if args.server:
        d = _post(args.server, "/compare", req.model_dump(mode="json"))
    else:
        d = api.run_compare(req).model_dump(mode="json")
    if args.csv is not None:
        _append_rows(args.csv, [_summary_row(r) for r in d["results"]])
    if args.json:
        print(json.dumps(d, indent=2))
        return OK
    print(f"{d['function']} at eps {_fmt(d['eps'])}")
    header = f"{'method':10s} {'value':>14s} {'gap':>12s} {'iters':>6s} " \
             f"{'value':>7s} {'dir':>5s} {'grad':>5s} {'wall_ms':>9s}  stop"
    print(header)
    for r in d["results"]:
        c = r["counters"]
        print(f"{r['method']:10s} {_fmt(r['value'], 8):>14s} {_fmt(r['gap'], 4):>12s} "
              f"{r['iterations']:>6d} {c['value_calls']:>7d} {c['direction_calls']:>5d} "
              f"{c['full_grad_calls']:>5d} {_fmt(r['wall_ms'], 4):>9s}  {r['stop_reason']}")
    for s in d["skipped"]:
        print(f"{s['method']:10s} skipped: {s['reason']}")
    return OK


def cmd_dual(args) -> int:
    spec = json.loads(Path(args.problem).read_text())
    req = DualRequest(problem=spec, eps=args.eps, domain=args.domain,
                      inner_fn_accuracy=args.inner_fn_accuracy,
                      dual_bound=args.dual_bound)
    if args.server:
        d = _post(args.server, "/dual", req.model_dump(mode="json"))
    else:
        d = api.run_dual(req).model_dump(mode="json")
    if args.json:
        print(json.dumps(d, indent=2))
    else:
        name = d["name"] or Path(args.problem).stem
        certified = "yes" if d["certified"] else "NO"
        _print_block(f"dual solve of {name} over {d['domain']} multipliers", [
            ("multipliers", f"({_fmt(d['lam'][0], 9)}, {_fmt(d['lam'][1], 9)})"),
            ("primal point", "(" + ", ".join(_fmt(x, 9) for x in d["primal"]) + ")"),
            ("primal value", _fmt(d["primal_value"], 12)),
            ("dual value", _fmt(d["dual_value"], 12)),
            ("complementarity", _fmt(d["complementarity"])),
            ("max constraint", _fmt(d["max_constraint"])),
            ("certified", f"{certified} (eps {_fmt(d['eps'])}, stop {d['stop_reason']})"),
            ("multiplier bound", _fmt(d["dual_bound"])),
            ("inner solves", f"{d['inner_solves']} ({d['pgd_steps']} projected gradient steps)"),
            ("wall", f"{_fmt(d['wall_ms'], 4)} ms"),
        ])
    if not d["certified"]:
        print("dual solve finished without an optimality certificate", file=sys.stderr)
        return TOLERANCE_NOT_MET
    return OK


def cmd_sweep(args) -> int:
    req = SweepRequest(functions=args.functions, eps_values=args.eps,
                       methods=args.methods, domain=args.domain)
    if args.server:
        d = _post(args.server, "/sweep", req.model_dump(mode="json"))
    else:
        d = api.run_sweep(req).model_dump(mode="json")
    if args.json:
        print(json.dumps(d, indent=2))
        return OK
    if args.csv == "-":
        _write_rows(d["rows"], sys.stdout)
    else:
        with open(args.csv, "w", newline="") as fh:
            _write_rows(d["rows"], fh)
        print(f"wrote {len(d['rows'])} rows to {args.csv}")
    return OK


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("halving_opt.service.app:app", host=args.host, port=args.port,
                log_level="info")
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="halving-opt",
        description="Minimize 2D convex functions by gradient-direction halving, "
                    "compare against baselines, and solve small constrained "
                    "problems through the dual.")
    parser.add_argument("--server", metavar="URL",
                        help="send requests to a running service instead of solving in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("functions", help="list the built-in functions")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_functions)

    p = sub.add_parser("solve", help="minimize a built-in function or the "
                                     "objective of a problem file")
    p.add_argument("function", help="built-in function name, or a path to a "
                                    "problem JSON whose objective is minimized")
    p.add_argument("--method", choices=["halving", "ellipsoid", "gd"], default="halving")
    p.add_argument("--eps", type=float, required=True, help="target accuracy on f")
    p.add_argument("--domain", choices=["square", "triangle"], default="square")
    p.add_argument("--inner-delta", type=float,
                   help="override the 1D argument accuracy of the cut searches")
    p.add_argument("--iterations", type=int, help="override the iteration budget")
    p.add_argument("--no-small-grad-stop", action="store_true",
                   help="disable the certified small-gradient early stop")
    p.add_argument("--perturb-mode", choices=["random", "adversarial"], default="random")
    p.add_argument("--perturb-delta", type=float,
                   help="corrupt reported gradients by up to this norm")
    p.add_argument("--perturb-seed", type=int, default=0)
    p.add_argument("--trace", metavar="PATH",
                   help="record per-iteration regions and cuts as JSON")
    p.add_argument("--csv", metavar="PATH",
                   help="append a one-line summary row to a CSV file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compare", help="run several methods on one function")
    p.add_argument("function")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--methods", type=_comma_list, default=["halving", "ellipsoid", "gd"])
    p.add_argument("--csv", metavar="PATH",
                   help="append one summary row per method to a CSV file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("dual", help="solve a constrained problem from a JSON spec")
    p.add_argument("problem", help="path to a problem spec (see README for the format)")
    p.add_argument("--eps", type=float, help="overrides the eps in the spec")
    p.add_argument("--domain", choices=["square", "triangle"],
                   help="multiplier domain shape, overrides the spec")
    p.add_argument("--inner-fn-accuracy", type=float,
                   help="override the inner solve accuracy")
    p.add_argument("--dual-bound", type=float,
                   help="override the multiplier bound A")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("sweep", help="grid of runs, written as CSV")
    p.add_argument("--functions", type=_comma_list, required=True)
    p.add_argument("--eps", type=_comma_list, required=True,
                   help="comma-separated list of accuracies")
    p.add_argument("--methods", type=_comma_list, default=["halving"])
    p.add_argument("--domain", choices=["square", "triangle"], default="square")
    p.add_argument("--csv", metavar="PATH", default="-",
                   help="output file, '-' for stdout")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "eps", None) is not None and args.command == "sweep":
        try:
            args.eps = [float(e) for e in args.eps]
        except ValueError:
            print("error: --eps expects comma-separated numbers", file=sys.stderr)
            return CONFIG_ERROR
    try:
        return args.func(args)
    except (ValueError, ValidationError, FileNotFoundError, RemoteError,
            httpx.HTTPError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
