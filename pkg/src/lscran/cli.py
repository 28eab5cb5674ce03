"""Command line: theory | contour | simulate | verify.

Every option can also come from a JSON config file (``--config``); keys are
the option names with underscores.  Flags given on the command line win.

Exit codes: 0 success, 1 invalid input, 2 tolerance failure, 3 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

from .exponents import (
    OperationKind,
    ScalingParams,
    ValidationError,
    backhaul_overhead_exponent,
    exponent_report,
    if_optimality_threshold,
    tradeoff_grid,
)

EXIT_OK, EXIT_INVALID, EXIT_TOLERANCE, EXIT_RUNTIME = 0, 1, 2, 3

CONTOUR_COLUMNS = ("rho", "tau", "operation", "region", "zeta")

DEFAULTS = {
    "alpha": 4.0,
    "eta_bs": 0.5,
    "eta_ant": None,
    "eta_user": 0.5,
    "rho_ul": 0.0,
    "rho_dl": 0.0,
    "upsilon_pa": None,
    "upsilon_pr": None,
    "op": ["all"],
    "output": None,
    # contour
    "rho_min": -2.0, "rho_max": 2.0, "rho_steps": 41,
    "tau_min": -2.0, "tau_max": 2.0, "tau_steps": 41,
    # simulate
    "n_grid": [256, 512, 1024, 2048, 4096, 8192],
    "trials": 200,
    "seed": 0,
    "workers": None,
    "output_dir": "sweep_out",
    "genie": False,
    "typical_user": "centroid",
    "region_radius": 1.0,
    # verify
    "quick": False,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def _int_list(text: str):
    return [int(float(v)) for v in text.replace(",", " ").split()]


def _add_params(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("network exponents")
    for name in ("alpha", "eta_bs", "eta_ant", "eta_user", "rho_ul", "rho_dl",
                 "upsilon_pa", "upsilon_pr"):
        g.add_argument("--" + name.replace("_", "-"), dest=name, type=float,
                       default=argparse.SUPPRESS)
    p.add_argument("--op", dest="op", action="append", default=argparse.SUPPRESS,
                   help="if, mrt, zf or all (repeatable)")
    p.add_argument("--config", default=None, help="JSON file of option values")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="lscran", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    th = sub.add_parser("theory", help="closed-form exponents")
    _add_params(th)
    th.add_argument("--output", "-o", default=argparse.SUPPRESS)

    ct = sub.add_parser("contour", help="supportable-user exponent over (rho, tau)")
    _add_params(ct)
    for name, typ in (("rho_min", float), ("rho_max", float), ("rho_steps", int),
                      ("tau_min", float), ("tau_max", float), ("tau_steps", int)):
        ct.add_argument("--" + name.replace("_", "-"), dest=name, type=typ,
                        default=argparse.SUPPRESS)
    ct.add_argument("--output", "-o", default=argparse.SUPPRESS)

    sm = sub.add_parser("simulate", help="Monte Carlo sweep over N")
    _add_params(sm)
    sm.add_argument("--n-grid", dest="n_grid", type=_int_list, default=argparse.SUPPRESS)
    sm.add_argument("--trials", type=int, default=argparse.SUPPRESS)
    sm.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    sm.add_argument("--workers", type=int, default=argparse.SUPPRESS,
                    help="process count (default: $LSCRAN_WORKERS or 1)")
    sm.add_argument("--output-dir", dest="output_dir", default=argparse.SUPPRESS)
    sm.add_argument("--genie", action="store_true", default=argparse.SUPPRESS)
    sm.add_argument("--typical-user", dest="typical_user", choices=("centroid", "random"),
                    default=argparse.SUPPRESS)
    sm.add_argument("--region-radius", dest="region_radius", type=float,
                    default=argparse.SUPPRESS)

    vf = sub.add_parser("verify", help="growth-rate oracles")
    vf.add_argument("--alpha", type=float, default=argparse.SUPPRESS)
    vf.add_argument("--quick", action="store_true", default=argparse.SUPPRESS)
    vf.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    vf.add_argument("--output", "-o", default=argparse.SUPPRESS)
    vf.add_argument("--config", default=None)
    return ap


def resolve(args: argparse.Namespace) -> dict:
    """defaults < config file < flags."""
    cfg = dict(DEFAULTS)
    if args.command == "verify":
        cfg["alpha"] = None  # every oracle alpha unless one is given
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError("config", str(exc)) from None
        if not isinstance(loaded, dict):
            raise ValidationError("config", "top level must be an object")
        unknown = sorted(set(loaded) - set(DEFAULTS))
        if unknown:
            raise ValidationError("config", f"unknown keys {unknown}")
        cfg.update(loaded)
    flags = {k: v for k, v in vars(args).items() if k not in ("config", "command")}
    cfg.update(flags)
    return cfg


def params_from(cfg: dict) -> ScalingParams:
    return ScalingParams(
        eta_bs=cfg["eta_bs"], eta_user=cfg["eta_user"], alpha=cfg["alpha"],
        rho_ul=cfg["rho_ul"], rho_dl=cfg["rho_dl"], eta_ant=cfg["eta_ant"],
        upsilon_pa=cfg["upsilon_pa"], upsilon_pr=cfg["upsilon_pr"],
    )


def operations_from(cfg: dict) -> list:
    raw = cfg["op"]
    if isinstance(raw, str):
        raw = [raw]
    ops = []
    for item in raw:
        for part in str(item).split(","):
            part = part.strip()
            if part.lower() == "all":
                ops.extend(OperationKind)
            elif part:
                ops.append(OperationKind.parse(part))
    if not ops:
        raise ValidationError("op", "no operation given")
    return list(dict.fromkeys(ops))


def _emit(text: str, path) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_num(v):
    if v is None:
        return None
    return "inf" if math.isinf(v) else v


def cmd_theory(cfg: dict) -> int:
    p = params_from(cfg)
    reports = []
    for op in operations_from(cfg):
        d = exponent_report(op, p).to_dict()
        if op is not OperationKind.IF:
            d["if_threshold_rho_dl"] = _json_num(if_optimality_threshold(op, p))
        reports.append(d)
    doc = {
        "params": p.to_dict(),
        "backhaul_overhead_exponent": backhaul_overhead_exponent(p),
        "reports": reports,
    }
    _emit(json.dumps(doc, indent=2) + "\n", cfg["output"])
    return EXIT_OK


def contour_rows(cfg: dict) -> list:
    p = params_from(cfg)
    for key in ("rho_steps", "tau_steps"):
        if int(cfg[key]) < 1:
            raise ValidationError(key, "must be positive")
    rows = []
    for op in operations_from(cfg):
        grid = tradeoff_grid(op, (cfg["rho_min"], cfg["rho_max"]), (cfg["tau_min"], cfg["tau_max"]),
                             p, (int(cfg["rho_steps"]), int(cfg["tau_steps"])))
        for row in grid:
            for pt in row:
                rows.append((pt.rho, pt.tau, op.value, pt.region, pt.zeta_user))
    return rows


def write_contour_csv(fh, rows) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CONTOUR_COLUMNS)
    for rho, tau, op, region, zeta in rows:
        w.writerow((repr(float(rho)), repr(float(tau)), op, region, repr(float(zeta))))


def read_contour_csv(path) -> list:
    with open(path, newline="") as fh:
        return [(float(r["rho"]), float(r["tau"]), r["operation"], r["region"], float(r["zeta"]))
                for r in csv.DictReader(fh)]


def cmd_contour(cfg: dict) -> int:
    rows = contour_rows(cfg)
    if cfg["output"]:
        with open(cfg["output"], "w", newline="") as fh:
            write_contour_csv(fh, rows)
    else:
        write_contour_csv(sys.stdout, rows)
    return EXIT_OK


def cmd_simulate(cfg: dict) -> int:
    from .asymptotics import sweep

    plan = sweep.SweepPlan(
        n_grid=tuple(cfg["n_grid"]), trials_per_n=cfg["trials"], params=params_from(cfg),
        operations=tuple(operations_from(cfg)), master_seed=cfg["seed"],
        region_radius=cfg["region_radius"], typical_user=cfg["typical_user"],
        genie=bool(cfg["genie"]),
    )
    out = cfg["output_dir"]
    os.makedirs(out, exist_ok=True)
    status_path = os.path.join(out, "STATUS")
    try:
        result = sweep.run_sweep(plan, cfg["workers"])
    except Exception as exc:
        partial = getattr(exc, "records", None)
        if partial:
            sweep.write_trials_csv(os.path.join(out, "trials.csv"), partial)
        with open(status_path, "w") as fh:
            fh.write(f"incomplete: {exc}\n")
        raise
    sweep.write_trials_csv(os.path.join(out, "trials.csv"), result.records)
    sweep.write_summary_csv(os.path.join(out, "summary.csv"), result)
    with open(status_path, "w") as fh:
        fh.write("complete\n")
        for (op, stat), n in sorted(result.excluded.items()):
            if n:
                fh.write(f"excluded {op} {stat}: {n}\n")
        for op, stat in result.aborted:
            fh.write(f"aborted fit {op} {stat}: more than 10% of trials excluded\n")
        fh.write(f"redraws: {result.redraws}\n")
    for op, stat, slope, _, r2, th, err in sweep.summary_rows(result):
        print(f"{op:4s} {stat:5s} slope={slope:+.4f} r2={r2:.4f} theory={th:+.4f} |err|={err:.4f}")
    return EXIT_OK


def cmd_verify(cfg: dict) -> int:
    from .asymptotics.verify import run_oracles

    results = run_oracles(quick=bool(cfg["quick"]), alpha=cfg["alpha"], seed=cfg["seed"])
    failed = [r for r in results if not r.passed]
    for r in results:
        print(r.line())
    if cfg["output"]:
        with open(cfg["output"], "w") as fh:
            json.dump([r.to_dict() for r in results], fh, indent=2)
    if failed:
        print(f"{len(failed)} oracle(s) outside tolerance: " + ", ".join(r.name for r in failed))
        return EXIT_TOLERANCE
    print(f"all {len(results)} oracles within tolerance")
    return EXIT_OK


COMMANDS = {"theory": cmd_theory, "contour": cmd_contour,
            "simulate": cmd_simulate, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve(args)
        return COMMANDS[args.command](cfg)
    except ValidationError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
