"""Command-line front end.

Exit codes: 0 when every necessary condition passes (or the command simply
succeeded), 1 when a condition fails or a violation is found, 2 when the
outcome is inconclusive or the input could not be processed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from linnorm import checks
from linnorm.cayley import build_h_system, graph_rank_formula
from linnorm.errors import LinnormError, NotApplicable, SearchFailed
from linnorm.fq import DEFAULT_ROWSPACE_BUDGET, LinearSystem, row_space_profile
from linnorm.harmonic import DEFAULT_ENUM_BUDGET, MAX_TABLE, t_direct, t_fourier
from linnorm.io import format_system, load_function, load_hypergraph, load_system, save_function, save_system
from linnorm.ops import canonical_form, delete_equation, delete_variable, isomorphism, subdivide

SCHEMA = 1


@dataclass
class RunConfig:
    seed: int = 0
    tol_rel: float = 1e-9
    tol_abs: float = 1e-12
    max_rowspace: int = DEFAULT_ROWSPACE_BUDGET
    max_table: int = DEFAULT_ENUM_BUDGET
    max_perm_nodes: int = 10**6
    fmt: str = "text"
    out: str | None = None
    witness_dir: str | None = None

    def __post_init__(self):
        if self.tol_rel <= 0 or self.tol_abs <= 0:
            raise ValueError("tolerances must be positive")
        if min(self.max_rowspace, self.max_table, self.max_perm_nodes) <= 0:
            raise ValueError("budgets must be positive")

    def tolerance(self, value: complex) -> float:
        return max(self.tol_abs, self.tol_rel * max(1.0, abs(value)))


def _complex(z: complex):
    return [float(z.real), float(z.imag)]


def _witness_dir(cfg: RunConfig) -> Path | None:
    if cfg.witness_dir:
        return Path(cfg.witness_dir)
    if cfg.out:
        out = Path(cfg.out)
        return out.with_name(out.stem + "_witness")
    return None


def _save_functions(cfg: RunConfig, name: str, functions) -> list[str]:
    """Write witness functions in the function file format; return their paths."""
    directory = _witness_dir(cfg)
    if directory is None or not functions:
        return []
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, f in enumerate(functions, start=1):
        path = directory / f"{name}_{i}.fn"
        save_function(f, path)
        paths.append(str(path))
    return paths


def _emit(cfg: RunConfig, payload: dict, text: str) -> None:
    if cfg.fmt == "json":
        body = json.dumps({"schema": SCHEMA, **payload}, sort_keys=True, indent=2) + "\n"
    else:
        body = text if text.endswith("\n") else text + "\n"
    if cfg.out:
        Path(cfg.out).write_text(body)
    else:
        sys.stdout.write(body)


def _system_text(system: LinearSystem) -> str:
    return format_system(system).rstrip("\n")


# --- subcommands -------------------------------------------------------------


def cmd_check(args, cfg: RunConfig) -> int:
    system = load_system(args.system)
    opts = checks.RunOptions(
        target=args.target,
        seed=cfg.seed,
        n=args.n,
        holder_trials=args.trials,
        sidorenko_trials=args.sidorenko_trials,
        rowspace_budget=cfg.max_rowspace,
        node_budget=cfg.max_perm_nodes,
    )
    report = checks.run_checks(system, opts)
    data = report.to_dict()
    for entry, result in zip(data["checks"], report.results):
        entry["seed"] = cfg.seed
        entry["witness_path"] = _save_functions(cfg, result.name, result.functions)
        if result.name == "variable_transitivity" and "pair" in result.witness:
            entry["witness"]["pair_1based"] = [i + 1 for i in result.witness["pair"]]
    lines = [f"system: q={system.q} m={system.m} k={system.k} target={args.target}"]
    for entry in data["checks"]:
        extra = ""
        if entry["verdict"] == checks.FAIL:
            extra = " " + json.dumps(entry["witness"], sort_keys=True)
        lines.append(f"{entry['name']:24s} {entry['verdict']}{extra}")
    lines.append(f"overall: {report.overall}")
    _emit(cfg, data, "\n".join(lines))
    return report.exit_code


def cmd_density(args, cfg: RunConfig) -> int:
    system = load_system(args.system)
    fs = [load_function(p) for p in args.functions]
    for f in fs:
        if f.size > min(MAX_TABLE, cfg.max_table):
            raise LinnormError(f"function table of size {f.size} exceeds the table budget")
    if len(fs) not in (1, system.k):
        raise LinnormError(f"need 1 or {system.k} function files, got {len(fs)}")
    fs = fs[0] if len(fs) == 1 else fs
    out = {"oracle": args.oracle}
    code = 0
    if args.oracle in ("direct", "both"):
        out["direct"] = _complex(t_direct(system, fs, cfg.max_table))
    if args.oracle in ("fourier", "both"):
        out["fourier"] = _complex(t_fourier(system, fs, cfg.max_table))
    if args.oracle == "both":
        a, b = complex(*out["direct"]), complex(*out["fourier"])
        gap = abs(a - b)
        out["discrepancy"] = gap
        out["tolerance"] = cfg.tolerance(a)
        if gap > out["tolerance"]:
            code = 1
    text = []
    for key in ("direct", "fourier"):
        if key in out:
            re, im = out[key]
            text.append(f"{key}: {re!r}" + (f" {im:+.3e}i" if im else ""))
    if "discrepancy" in out:
        text.append(f"discrepancy: {out['discrepancy']:.3e} (tol {out['tolerance']:.1e})")
    _emit(cfg, out, "\n".join(text))
    return code


def cmd_cayley(args, cfg: RunConfig) -> int:
    h = load_hypergraph(args.hypergraph)
    hs = build_h_system(h, args.q)
    out = {
        "q": args.q,
        "vertices": h.d,
        "edges": h.k,
        "uniformity": h.r,
        "rank": hs.rank,
        "degenerate": hs.degenerate,
        "rows": hs.system.matrix.tolist(),
    }
    text = [_system_text(hs.system), f"rank {hs.rank}"]
    if h.is_graph():
        kappa = h.connected_components()
        out["components"] = kappa
        out["rank_formula"] = graph_rank_formula(h)
        text.append(f"|E| - |V| + kappa = {h.k} - {h.d} + {kappa} = {graph_rank_formula(h)}")
    if args.emit_system:
        save_system(hs.system, args.emit_system)
        out["system_path"] = args.emit_system
    _emit(cfg, out, "\n".join(text))
    return 0


def cmd_classify(args, cfg: RunConfig) -> int:
    system = load_system(args.system)
    cls = checks.classify_rank_le2(system)
    out = {"tag": cls.tag, "r": cls.r, "label": cls.label}
    if cls.permutation is not None:
        out["permutation"] = list(cls.permutation)
    _emit(cfg, out, cls.label)
    return {"not_weakly_norming": 1, "unknown": 2}.get(cls.tag, 0)


def cmd_falsify(args, cfg: RunConfig) -> int:
    system = load_system(args.system)
    out: dict = {"method": args.method}
    functions = []
    code = 0
    try:
        if args.method == "odd-girth":
            f, info = checks.odd_girth_falsifier(system, n=args.n, alpha=args.alpha, budget=cfg.max_rowspace)
            functions, code = [f], 1
            out.update(info)
            out["verdict"] = "violation"
        elif args.method in ("schatten", "holder"):
            start = None
            if args.method == "schatten" or args.seed_with_schatten:
                try:
                    w = checks.schatten_falsifier(system, n=args.n, budget=cfg.max_rowspace)
                    start = w.functions
                    out["schatten"] = {"ratio": w.ratio, **w.params}
                except (NotApplicable, SearchFailed) as exc:
                    if args.method == "schatten":
                        raise
                    out["schatten"] = {"skipped": str(exc)}
            if args.method == "schatten":
                functions = start
                out["ratio"] = out["schatten"]["ratio"]
                certified = True
            else:
                res = checks.holder_search(
                    system, args.trials, cfg.seed, args.n, not args.real, args.steps, start=start
                )
                functions, certified = res.functions, res.certified
                out["ratio"] = res.ratio
                out.update({k: v for k, v in res.params.items() if k != "seed"})
            out["verdict"] = "violation" if certified else "none_found"
            code = 1 if certified else 0
        elif args.method == "sidorenko":
            res = checks.sidorenko_search(system, args.trials, cfg.seed, args.n, args.steps)
            functions = [res.function]
            out["gap"] = res.gap
            out["verdict"] = "violation" if res.certified else "none_found"
            code = 1 if res.certified else 0
        elif args.method == "forcing-witness":
            res = checks.forcing_witness_single_eq(system, n=args.n)
            if res.exhausted:
                out["verdict"] = "exhausted"
            else:
                functions = [res.function]
                out.update({"verdict": "witness", "gap": res.gap, "distance": res.distance})
                code = 1
            out["classes"] = list(res.classes)
    except NotApplicable as exc:
        out.update({"verdict": "not_applicable", "reason": str(exc)})
        code = 0
    except SearchFailed as exc:
        out.update({"verdict": "inconclusive", "reason": str(exc), "diagnostics": exc.diagnostics})
        code = 2
    out["seed"] = cfg.seed
    out["witness_path"] = _save_functions(cfg, args.method, functions)
    text = [f"{args.method}: {out['verdict']}"]
    for key in ("alpha", "t", "ratio", "gap", "distance", "reason"):
        if key in out:
            text.append(f"  {key}: {out[key]}")
    _emit(cfg, out, "\n".join(text))
    return code


def cmd_subdivide(args, cfg: RunConfig) -> int:
    result = subdivide(load_system(args.system), args.r)
    return _write_system(result, cfg)


def cmd_delete(args, cfg: RunConfig) -> int:
    system = load_system(args.system)
    if args.var is not None:
        result = delete_variable(system, args.var - 1)
    else:
        result = delete_equation(system, args.equation - 1)
    return _write_system(result, cfg)


def _write_system(system: LinearSystem, cfg: RunConfig) -> int:
    out = {"q": system.q, "m": system.m, "k": system.k, "rows": system.matrix.tolist()}
    _emit(cfg, out, _system_text(system))
    return 0


def cmd_iso(args, cfg: RunConfig) -> int:
    a, b = load_system(args.a), load_system(args.b)
    sigma = isomorphism(a, b, cfg.max_perm_nodes)
    out = {"isomorphic": sigma is not None}
    if sigma is not None:
        out["permutation"] = [s + 1 for s in sigma]
        out["canonical"] = canonical_form(a, cfg.max_perm_nodes).matrix.tolist()
    text = "isomorphic" if sigma is not None else "not isomorphic"
    if sigma is not None:
        text += " via " + " ".join(str(s + 1) for s in sigma)
    _emit(cfg, out, text)
    return 0 if sigma is not None else 1


def cmd_alpha_screen(args, cfg: RunConfig) -> int:
    system = load_system(args.system)
    res = checks.complex_alpha_screen(system, args.trials, cfg.seed, args.n, cfg.tol_rel, budget=cfg.max_table)
    out = res.to_dict()
    text = [f"survivors ({len(res.survivors)} of {2 ** system.k}):"]
    text.extend("  " + "".join(map(str, a)) for a in res.survivors)
    _emit(cfg, out, "\n".join(text))
    return 0


def cmd_profile(args, cfg: RunConfig) -> int:
    system = load_system(args.system)
    prof = row_space_profile(system, cfg.max_rowspace)
    out = {
        "girth": prof.girth,
        "mu": [list(v) for v in prof.mu],
        "schatten_count": prof.schatten_count,
    }
    text = [f"girth {prof.girth}", f"|mu| {len(prof.mu)}", f"s(L) {prof.schatten_count}"]
    _emit(cfg, out, "\n".join(text))
    return 0


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol-rel", type=float, default=1e-9)
    common.add_argument("--tol-abs", type=float, default=1e-12)
    common.add_argument("--budget-rowspace", type=int, default=DEFAULT_ROWSPACE_BUDGET)
    common.add_argument("--budget-table", type=int, default=DEFAULT_ENUM_BUDGET)
    common.add_argument("--budget-nodes", type=int, default=10**6)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--witness-dir", help="directory for witness function files")

    parser = argparse.ArgumentParser(prog="linnorm", description="Norming tests for linear systems over F_q.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="run the necessary-condition suite")
    p.add_argument("system")
    p.add_argument("--target", choices=("weak", "norming"), default="weak")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--sidorenko-trials", type=int, default=10)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("density", parents=[common], help="evaluate t_L")
    p.add_argument("system")
    p.add_argument("functions", nargs="+")
    p.add_argument("--oracle", choices=("direct", "fourier", "both"), default="both")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("cayley", parents=[common], help="compile a hypergraph into L_H")
    p.add_argument("hypergraph")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--emit-system")
    p.set_defaults(func=cmd_cayley)

    p = sub.add_parser("classify", parents=[common], help="rank <= 2 classification")
    p.add_argument("system")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("falsify", parents=[common], help="run one falsifier")
    p.add_argument("system")
    p.add_argument(
        "--method",
        choices=("odd-girth", "schatten", "holder", "sidorenko", "forcing-witness"),
        required=True,
    )
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--alpha", type=float)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--real", action="store_true", help="holder: real instead of non-negative functions")
    p.add_argument("--seed-with-schatten", action="store_true")
    p.set_defaults(func=cmd_falsify)

    p = sub.add_parser("subdivide", parents=[common], help="r-subdivision")
    p.add_argument("system")
    p.add_argument("--r", type=int, default=1)
    p.set_defaults(func=cmd_subdivide)

    p = sub.add_parser("delete", parents=[common], help="delete a variable or an equation (1-based)")
    p.add_argument("system")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--var", type=int)
    group.add_argument("--equation", type=int)
    p.set_defaults(func=cmd_delete)

    p = sub.add_parser("iso", parents=[common], help="isomorphism test")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("alpha-screen", parents=[common], help="screen conjugation patterns")
    p.add_argument("system")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(func=cmd_alpha_screen)

    p = sub.add_parser("profile", parents=[common], help="girth, mu(L) and s(L)")
    p.add_argument("system")
    p.set_defaults(func=cmd_profile)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            seed=args.seed,
            tol_rel=args.tol_rel,
            tol_abs=args.tol_abs,
            max_rowspace=args.budget_rowspace,
            max_table=args.budget_table,
            max_perm_nodes=args.budget_nodes,
            fmt=args.format,
            out=args.out,
            witness_dir=args.witness_dir,
        )
        return args.func(args, cfg)
    except (LinnormError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
