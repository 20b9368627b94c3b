"""``vibrest`` command line: count, build, encode, estimate, layers.

Every subcommand resolves its settings as flags > ``--config`` JSON file >
built-in defaults, and the resolved settings are embedded in its report.

Exit codes: 0 success, 2 usage error, 3 invalid input, 4 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .commutator import DEFAULT_BUDGET, alpha_bounds, crude_bound
from .costing import QpeConfig, qpe_budget, reports_to_csv
from .encoding import DEFAULT_CUTOFF, EncodingSpec, encode, gray_code, locality_stats, packed_binary_qubits
from .errors import ResourceLimitError, ValidationError, VibrestError
from .hamiltonian import build_second_quantized, count_terms, polyyne_modes
from .io import SCHEMA_VERSION, dumps_pauli, dumps_sq, read_pauli, read_pes, read_sq
from .layering import depth_ratio

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_RESOURCE = 4

AUTO_TOL_KEEP = (16, 64, 256)

DEFAULTS: dict[str, dict[str, Any]] = {
    "count": {"polyyne": None, "modes": None, "modals": [4], "trunc_order": 3, "format": "table", "output": None},
    "build": {"cutoff": 0.0, "format": "table", "output": None},
    "encode": {"encoding": "unary", "cutoff": DEFAULT_CUTOFF, "gray": False, "format": "table", "output": None},
    "estimate": {
        "order": 2,
        "epsilon_nu": 1.0,
        "tol": None,
        "approach": "A",
        "refine": None,
        "rigorous": False,
        "prefactor": 1.0,
        "budget": float(DEFAULT_BUDGET),
        "runs": 100,
        "seed": 0,
        "workers": None,
        "format": "table",
        "output": None,
    },
    "layers": {"runs": 100, "seed": 0, "strategy": "scan", "format": "table", "output": None},
}


class UsageError(VibrestError):
    pass


# ---------------------------------------------------------------- commands


def cmd_count(cfg: dict) -> dict:
    """Term and qubit counts for one or more modal truncations."""
    if (cfg["polyyne"] is None) == (cfg["modes"] is None):
        raise UsageError("give exactly one of --polyyne or --modes")
    try:
        L = polyyne_modes(cfg["polyyne"]) if cfg["polyyne"] is not None else int(cfg["modes"])
        D = int(cfg["trunc_order"])
        rows = []
        for d in cfg["modals"]:
            n_h = count_terms(L, d, D)
            binary = L * max(1, math.ceil(math.log2(d))) if d > 1 else L
            rows.append(
                {
                    "n_modes": L,
                    "modals": d,
                    "trunc_order": D,
                    "n_terms": n_h,
                    "unary_qubits": L * d,
                    "binary_qubits": binary,
                    "packed_binary_qubits": packed_binary_qubits(L, d) if d > 1 else 0,
                }
            )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    notes = [
        "binary_qubits uses one register of ceil(log2 d) qubits per mode (L*ceil(log2 d)); "
        "packed_binary_qubits = ceil(L*log2 d) would need all modes in one shared register "
        "and is not what the binary encoding builds"
    ]
    return {"command": "count", "rows": rows, "notes": notes}


def cmd_build(cfg: dict) -> tuple[dict, str]:
    problem, pes = read_pes(cfg["input"])
    sq = build_second_quantized(problem, pes, cutoff=cfg["cutoff"])
    summary = {
        "command": "build",
        "n_modes": sq.n_modes,
        "modals": sq.modals,
        "truncation_order": sq.truncation_order,
        "n_pes_terms": len(pes),
        "n_terms": len(sq),
        "max_abs_coeff": sq.max_abs_coeff(),
    }
    return summary, dumps_sq(sq)


def cmd_encode(cfg: dict) -> tuple[dict, str]:
    sq = read_sq(cfg["input"])
    spec = EncodingSpec(
        cfg["encoding"], sq.n_modes, sq.modals, cfg["cutoff"], gray_code if cfg["gray"] else None
    )
    h = encode(sq, spec)
    if cfg["gray"]:
        h.meta["code"] = "gray"
    summary = {
        "command": "encode",
        "encoding": spec.kind,
        "n_qubits": h.n_qubits,
        "n_terms": len(h),
        "beta": math.fsum(abs(c) for c in h.coeffs),
        "cutoff": spec.cutoff,
        "locality": locality_stats(h).to_dict() if len(h) else None,
    }
    return summary, dumps_pauli(h)


def auto_tol_schedule(coeffs: np.ndarray) -> list[float]:
    """``inf`` followed by thresholds that keep the 16, 64, 256 largest terms."""
    mags = np.sort(np.abs(coeffs))[::-1]
    sched = [math.inf]
    for k in AUTO_TOL_KEEP:
        if k < len(mags):
            sched.append(float(mags[k]))
    if len(mags) <= AUTO_TOL_KEEP[-1]:
        sched.append(0.0)
    return sorted(set(sched), reverse=True)


def cmd_estimate(cfg: dict) -> dict:
    h = read_pauli(cfg["input"])
    if len(h) == 0:
        raise ValidationError(f"{cfg['input']}: no terms")
    p = int(cfg["order"])
    qcfg = QpeConfig(epsilon_nu=cfg["epsilon_nu"], p=p, approach=cfg["approach"], prefactor=cfg["prefactor"])
    if cfg["tol"]:
        tols = sorted({float(t) for t in cfg["tol"]}, reverse=True)
    else:
        tols = auto_tol_schedule(h.coeffs)
    if any(t < 0 or math.isnan(t) for t in tols):
        raise UsageError("--tol values must be non-negative")
    if math.inf not in tols:
        tols = [math.inf] + tols
    ratio = None
    layering = None
    if cfg["runs"]:
        stats = depth_ratio(h, cfg["runs"], cfg["seed"])
        ratio = stats.mean_ratio
        layering = {"mean_ratio": stats.mean_ratio, "runs": stats.runs, "seed": stats.seed}

    trajectory = []
    for tol in tols:
        try:
            res = alpha_bounds(
                h,
                p,
                tol,
                refine=cfg["refine"],
                rigorous=cfg["rigorous"],
                budget=cfg["budget"],
                workers=cfg["workers"],
            )
        except ResourceLimitError as exc:
            raise ResourceLimitError(
                f"{exc} (at tol={tol:g}); use a larger --tol or raise --budget"
            ) from None
        trajectory.append(res)
    crude = trajectory[0]
    best = min(trajectory, key=lambda r: (r.upper, -r.lower))
    crude_report = qpe_budget(h, crude, qcfg, ratio)
    best_report = qpe_budget(h, best, qcfg, ratio)
    return {
        "command": "estimate",
        "input_meta": dict(h.meta),
        "trajectory": [r.to_dict() for r in trajectory],
        "crude": crude_report.to_dict(),
        "best": best_report.to_dict(),
        "crude_alpha_check": crude_bound(h, p, rigorous=cfg["rigorous"]),
        "R_ratio_crude_over_best": crude_report.R_total / best_report.R_total,
        "layering": layering,
        "_reports": (crude_report, best_report),
    }


def cmd_layers(cfg: dict) -> dict:
    h = read_pauli(cfg["input"])
    if len(h) == 0:
        raise ValidationError(f"{cfg['input']}: no terms")
    stats = depth_ratio(h, cfg["runs"], cfg["seed"], cfg["strategy"])
    return {"command": "layers", **stats.to_dict()}


# ---------------------------------------------------------------- rendering


def _table(rows: list[tuple[str, Any]]) -> str:
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _config_line(cfg: dict) -> str:
    return "# config: " + json.dumps(_jsonable(cfg), sort_keys=True)


def _jsonable(obj):
    if isinstance(obj, float) and math.isinf(obj):
        return "inf" if obj > 0 else "-inf"
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items() if not k.startswith("_")}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def render(result: dict, cfg: dict, fmt: str) -> str:
    cmd = result["command"]
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "version": __version__, "config": cfg, **result}
        return json.dumps(_jsonable(doc), indent=1, sort_keys=True) + "\n"
    if cmd == "count":
        if fmt == "csv":
            return _csv(result["rows"])
        lines = []
        for r in result["rows"]:
            lines.append(_table([(k, v) for k, v in r.items()]))
            lines.append("")
        lines += [f"# {n}" for n in result["notes"]]
        lines.append(_config_line(cfg))
        return "\n".join(lines) + "\n"
    if cmd == "estimate":
        crude_report, best_report = result["_reports"]
        if fmt == "csv":
            meta = result["input_meta"]
            rows = []
            for rep in (crude_report, best_report):
                row = {
                    "input": Path(cfg["input"]).stem,
                    "n_modes": meta.get("n_modes", ""),
                    "modals": meta.get("modals", ""),
                    "encoding": meta.get("encoding", ""),
                }
                row.update(rep.csv_row())
                rows.append(row)
            return reports_to_csv(rows)
        traj = ["tol            mode    n_big  alpha_lower    alpha_upper    checks"]
        for r in result["trajectory"]:
            tol = r["tol"] if isinstance(r["tol"], str) else f"{r['tol']:.6g}"
            traj.append(
                f"{tol:<14} {r['mode']:<7} {r['n_big']:<6} {r['lower']:<14.6g} "
                f"{r['upper']:<14.6g} {r['tuples_evaluated']}"
            )
        parts = [
            "alpha bound trajectory:",
            *traj,
            "",
            "crude bound:",
            crude_report.to_table(),
            "",
            "tightest bound:",
            best_report.to_table(),
            "",
            f"R crude / R tightest = {result['R_ratio_crude_over_best']:.6g}",
            _config_line(cfg),
        ]
        return "\n".join(parts) + "\n"
    if cmd == "layers":
        if fmt == "csv":
            return _csv([{"run": i, "layers": c, "ratio": r} for i, (c, r) in
                         enumerate(zip(result["layer_counts"], result["ratios"]))])
        rows = [(k, result[k]) for k in ("n_terms", "runs", "seed", "strategy")]
        rows += [(k, f"{result[k]:.6g}") for k in ("mean_ratio", "min_ratio", "max_ratio", "std_ratio")]
        return _table(rows) + "\n" + _config_line(cfg) + "\n"
    # build / encode summaries
    flat = {k: v for k, v in result.items() if k != "locality"}
    if cmd == "encode" and result["locality"]:
        loc = result["locality"]
        flat["max_weight"] = loc["max_weight"]
        flat["mean_weight"] = loc["mean_weight"]
        flat["weight_histogram"] = " ".join(f"{w}:{n}" for w, n in loc["histogram"].items())
    if fmt == "csv":
        return _csv([flat])
    return _table(list(flat.items())) + "\n" + _config_line(cfg) + "\n"


# ---------------------------------------------------------------- argparse


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--format", choices=("table", "csv", "json"))
    sp.add_argument("--output", "-o", help="write the result here instead of stdout")
    sp.add_argument("--config", help="JSON file with settings (flags take precedence)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vibrest", description="Trotter/QPE resource estimates for vibrational Hamiltonians.")
    parser.add_argument("--version", action="version", version=f"vibrest {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    S = argparse.SUPPRESS

    sp = sub.add_parser("count", help="term and qubit counts", argument_default=S)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--polyyne", type=int, help="number of triple bonds (L = 6n + 1)")
    g.add_argument("--modes", type=int, help="number of modes L")
    sp.add_argument("--modals", type=int, nargs="+", help="modals per mode d (default 4)")
    sp.add_argument("--trunc-order", type=int, help="coupling truncation order D (default 3)")
    _common(sp)

    sp = sub.add_parser("build", help="PES JSON -> second-quantized JSON", argument_default=S)
    sp.add_argument("input")
    sp.add_argument("--cutoff", type=float, help="drop |coeff| <= cutoff (default 0)")
    _common(sp)

    sp = sub.add_parser("encode", help="second-quantized JSON -> Pauli file", argument_default=S)
    sp.add_argument("input")
    sp.add_argument("--encoding", choices=("unary", "binary"))
    sp.add_argument("--cutoff", type=float, help=f"drop |coeff| <= cutoff (default {DEFAULT_CUTOFF:g})")
    sp.add_argument("--gray", action="store_true", help="Gray code for binary registers")
    _common(sp)

    sp = sub.add_parser("estimate", help="commutator bounds and QPE cost", argument_default=S)
    sp.add_argument("input")
    sp.add_argument("--order", "-p", type=int, help="product formula order (default 2)")
    sp.add_argument("--epsilon-nu", type=float, help="target accuracy in cm^-1 (default 1)")
    sp.add_argument("--tol", type=float, action="append", help="splitting threshold; repeat for a schedule")
    sp.add_argument("--approach", choices=("A", "B"))
    sp.add_argument("--refine", choices=("none", "alpha1", "full"))
    sp.add_argument("--rigorous", action="store_true", help="cross terms carry the commutator factor")
    sp.add_argument("--prefactor", type=float, help="constant in front of the Trotter step count")
    sp.add_argument("--budget", type=float, help="maximum parity checks per bound")
    sp.add_argument("--runs", type=int, help="layering runs for the depth estimate (0 to skip)")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--workers", type=int, help="worker processes (default $VIBREST_WORKERS or all CPUs)")
    _common(sp)

    sp = sub.add_parser("layers", help="greedy layering statistics", argument_default=S)
    sp.add_argument("input")
    sp.add_argument("--runs", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--strategy", choices=("scan", "best_fit"))
    _common(sp)
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    """Merge defaults, the optional config file and explicit flags."""
    given = vars(args).copy()
    command = given.pop("command")
    cfg = dict(DEFAULTS[command])
    path = given.pop("config", None)
    if path:
        try:
            loaded = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"{path}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ValidationError(f"{path}: expected a JSON object")
        loaded = {k.replace("-", "_"): v for k, v in loaded.items()}
        unknown = set(loaded) - set(cfg) - {"input"}
        if unknown:
            raise ValidationError(f"{path}: unknown settings {sorted(unknown)}")
        cfg.update(loaded)
    cfg.update(given)
    if command == "estimate" and isinstance(cfg.get("tol"), (int, float)):
        cfg["tol"] = [cfg["tol"]]
    return cfg


_COMMANDS = {"count": cmd_count, "build": cmd_build, "encode": cmd_encode,
             "estimate": cmd_estimate, "layers": cmd_layers}


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = resolve_config(args)
    command = args.command
    result = _COMMANDS[command](cfg)
    if command in ("build", "encode"):
        summary, payload = result
        if cfg["output"]:
            Path(cfg["output"]).write_text(payload)
            sys.stdout.write(render(summary, cfg, cfg["format"]))
        else:
            sys.stdout.write(payload)
            sys.stderr.write(render(summary, cfg, "table"))
        return EXIT_OK
    _emit(render(result, cfg, cfg["format"]), cfg["output"])
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    try:
        return run(argv)
    except UsageError as exc:
        print(f"vibrest: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"vibrest: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValidationError, ValueError, OSError) as exc:
        print(f"vibrest: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
