"""Command-line surface: file I/O, experiment runners, table emitters.

Exit codes: 0 success, 1 domain error (machine-readable JSON on stderr),
2 usage error.  Randomized commands take --seed; omitting it falls back to
seed 0 with a printed notice so runs stay reproducible by default.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import catalog as cat
from . import distance as dist
from . import games as gm
from . import hierarchy as hi
from . import markov as mk
from . import payoffs as po
from . import structures as st
from .config import BUDGET_ENV_VAR, default_budget
from .errors import InfoDistError

_FORMATS = ("text", "json", "csv")


@dataclass(frozen=True)
class RunConfig:
    fmt: str = "text"
    seed: int = 0
    budget: int = 1_000_000
    tolerance: float = 1e-6

    def __post_init__(self):
        if self.fmt not in _FORMATS:
            raise ValueError(f"format must be one of {_FORMATS}")
        if self.budget < 1:
            raise ValueError("budget must be positive")
        if not 0.0 < self.tolerance < 1e-2:
            raise ValueError("tolerance must lie in (0, 1e-2)")


def _fmt_num(x) -> str:
    return "%.12g" % float(x)


def _emit(config: RunConfig, payload: dict, table: tuple[list[str], list[list]] | None = None):
    if config.fmt == "json":
        print(json.dumps(payload, sort_keys=True))
        return
    if config.fmt == "csv":
        headers, rows = table if table is not None else (
            list(payload.keys()),
            [list(payload.values())],
        )
        print(",".join(headers))
        for row in rows:
            print(",".join(_fmt_num(v) if isinstance(v, (int, float)) else str(v) for v in row))
        return
    if table is not None:
        headers, rows = table
        print("  ".join(headers))
        for row in rows:
            print("  ".join(_fmt_num(v) if isinstance(v, (int, float)) else str(v) for v in row))
    else:
        if len(payload) == 1:
            print(_format_value(next(iter(payload.values()))))
        else:
            for key, value in payload.items():
                print(f"{key}: {_format_value(value)}")


def _format_value(v) -> str:
    if isinstance(v, float):
        return _fmt_num(v)
    return str(v)


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str):
    if path is None:
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + ("\n" if not text.endswith("\n") else ""))


def _load_structure(path: str) -> st.InformationStructure:
    return st.InformationStructure.from_json(_read(path))


def _load_game(path: str) -> gm.ZeroSumGame:
    return gm.ZeroSumGame.from_json(_read(path))


def _load_bimatrix(path: str) -> gm.BimatrixGame:
    return gm.BimatrixGame.from_json(_read(path))


def _load_state_vector(path: str) -> dist.StateDistribution:
    return dist.StateDistribution(np.asarray(json.loads(_read(path)), dtype=float))


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is None:
        print("no --seed given; defaulting to seed 0", file=sys.stderr)
        return 0
    return args.seed


def _config(args) -> RunConfig:
    return RunConfig(
        fmt=getattr(args, "format", "text"),
        seed=getattr(args, "seed", 0) or 0,
        budget=getattr(args, "budget", None) or default_budget(),
        tolerance=getattr(args, "tolerance", None) or 1e-6,
    )


# ---------------------------------------------------------------------------
# Subcommand implementations.
# ---------------------------------------------------------------------------


def _cmd_value(args) -> int:
    config = _config(args)
    u = _load_structure(args.structure)
    g = _load_game(args.game)
    result = gm.value(u, g)
    payload = {"value": result.value}
    if args.strategies:
        payload["strategy1"] = result.strategy1.rows.tolist()
        payload["strategy2"] = result.strategy2.rows.tolist()
    _emit(config, payload)
    return 0


def _cmd_distance(args) -> int:
    config = _config(args)
    u = _load_structure(args.u)
    v = _load_structure(args.v)
    _emit(config, {"distance": dist.value_distance(u, v)})
    return 0


def _cmd_compare(args) -> int:
    config = _config(args)
    u = _load_structure(args.u)
    v = _load_structure(args.v)
    gap_vu = dist.one_sided_gap(u, v).gap  # sup_g val(v,g) - val(u,g)
    gap_uv = dist.one_sided_gap(v, u).gap
    tol = config.tolerance
    if gap_vu <= tol and gap_uv <= tol:
        relation = "equivalent"
    elif gap_vu <= tol:
        relation = "u>=v"
    elif gap_uv <= tol:
        relation = "v>=u"
    else:
        relation = "incomparable"
    _emit(config, {"relation": relation, "gain_moving_to_v": gap_vu, "gain_moving_to_u": gap_uv})
    return 0


def _cmd_witness(args) -> int:
    config = _config(args)
    u = _load_structure(args.u)
    v = _load_structure(args.v)
    game = dist.witness_game(u, v)
    _write(args.output, game.to_json())
    u_emb, v_emb = st.common_embedding(u, v)
    achieved = gm.value(v_emb, game).value - gm.value(u_emb, game).value
    _emit(config, {"gap": achieved})
    return 0


def _cmd_d1(args) -> int:
    config = _config(args)
    u = _load_structure(args.u)
    v = _load_structure(args.v)
    _emit(config, {"d1": dist.single_agent_distance(u, v)})
    return 0


def _cmd_diameter(args) -> int:
    config = _config(args)
    p = _load_state_vector(args.p)
    q = _load_state_vector(args.q)
    bounds = dist.diameter_bounds(p, q)
    _emit(
        config,
        {"lower": bounds.lower, "upper": bounds.upper, "heuristic": bounds.heuristic},
    )
    return 0


def _cmd_dw(args) -> int:
    config = _config(args)
    u = _load_structure(args.u)
    v = _load_structure(args.v)
    games = [_load_game(path) for path in args.games]
    _emit(config, {"dw": dist.dw(u, v, games)})
    return 0


def _cmd_reduce(args) -> int:
    config = _config(args)
    u = _load_structure(args.structure)
    reduced = hi.reduce_redundancy(u)
    _write(args.output, reduced.to_json())
    _emit(config, {"signals1": reduced.signals1_count, "signals2": reduced.signals2_count})
    return 0


def _cmd_decompose(args) -> int:
    config = _config(args)
    u = _load_structure(args.structure)
    decomposition = hi.ck_decompose(u)
    items = [
        {"weight": w, "structure": json.loads(s.to_json())}
        for w, s in decomposition.components
    ]
    _write(args.output, json.dumps(items))
    _emit(config, {"components": len(items)})
    return 0


def _cmd_dnzs(args) -> int:
    config = _config(args)
    u = _load_structure(args.u)
    v = _load_structure(args.v)
    _emit(config, {"dnzs": hi.dnzs(u, v)})
    return 0


def _cmd_feasible(args) -> int:
    config = _config(args)
    u = _load_structure(args.structure)
    g = _load_bimatrix(args.game)
    polygon = po.feasible_set(u, g, config.budget)
    _write(args.output, json.dumps({"vertices": polygon.vertices.tolist()}))
    _emit(config, {"vertices": len(polygon.vertices)})
    return 0


def _cmd_verify_bound(args) -> int:
    config = _config(args)
    u = _load_structure(args.u)
    v = _load_structure(args.v)
    g = _load_bimatrix(args.game)
    report = po.verify_feasible_bound(u, v, g, args.case, config.budget)
    _emit(
        config,
        {
            "case": report.case,
            "distance": report.distance,
            "hausdorff": report.hausdorff,
            "multiplier": report.multiplier,
            "passed": report.passed,
        },
    )
    return 0


_CATALOG_NAMES = (
    "u1",
    "u2",
    "u2prime",
    "no-info",
    "common-knowledge",
    "ladder",
    "email",
    "blackwell",
    "approx-knowledge",
    "opponent_correlation",
    "f4-xor",
    "signal_quality",
    "split_secret",
)


def _cmd_catalog(args) -> int:
    config = _config(args)
    name = args.name
    which = args.which
    if name == "u1":
        structure = cat.canonical_examples()["u1"]
    elif name == "u2":
        structure = cat.canonical_examples()["u2"]
    elif name == "u2prime":
        structure = cat.canonical_examples()["u2prime"]
    elif name == "no-info":
        structure = cat.no_information(args.states)
    elif name == "common-knowledge":
        structure = cat.common_knowledge(args.states)
    elif name == "ladder":
        structure = cat.ladder_structure(args.n)
    elif name == "email":
        structure = cat.email_game(args.eps, args.prior, args.truncation)
    elif name == "blackwell":
        structure = cat.blackwell_structure(cat.BlackwellSpec(args.n, args.m, args.p[0] if args.p else 0.75, args.r))
    elif name == "approx-knowledge":
        pair = cat.approx_knowledge_pair(args.eps)
        structure = pair.u if which in (None, "u") else pair.v
    else:
        fixture = cat.counterexample_pairs()[name.replace("-", "_")]
        structure = fixture[which or "u"]
    _write(args.output, structure.to_json())
    _emit(config, {"states": structure.state_count, "signals1": structure.signals1_count, "signals2": structure.signals2_count})
    return 0


def _cmd_blackwell_table(args) -> int:
    config = _config(args)
    ps = args.p or [0.6, 0.75, 0.9]
    headers = ["p", "n", "l", "d1_closed_form"] + (["d1_lp"] if args.lp else [])
    rows = []
    for p in ps:
        for n in range(1, args.nmax + 1):
            for l in range(0, n):
                row = [p, n, l, cat.blackwell_d1_closed_form(n, l, p)]
                if args.lp:
                    un = cat.blackwell_structure(cat.BlackwellSpec(n, 0, p, p))
                    ul = cat.blackwell_structure(cat.BlackwellSpec(l, 0, p, p))
                    row.append(dist.single_agent_distance(un, ul))
                rows.append(row)
    table_config = RunConfig(
        fmt="csv" if config.fmt == "text" else config.fmt,
        seed=config.seed,
        budget=config.budget,
        tolerance=config.tolerance,
    )
    _emit(table_config, {"rows": len(rows)}, table=(headers, rows))
    return 0


def _cmd_repro_canonical_examples(args) -> int:
    config = _config(args)
    structures = cat.canonical_examples()
    rows = [
        ["d(u1,u2)", dist.value_distance(structures["u1"], structures["u2"]), 0.5],
        ["d(u1,u2prime)", dist.value_distance(structures["u1"], structures["u2prime"]), 1.0],
    ]
    _emit(config, {r[0]: r[1] for r in rows}, table=(["quantity", "value", "expected"], rows))
    return 0


def _cmd_markov(args) -> int:
    config = _config(args)
    seed = _resolve_seed(args)
    matrix = mk.sample_S(args.N, seed)
    if args.markov_command == "sample":
        rows = [sorted(int(b) for b in matrix.successors(a)) for a in range(1, matrix.N + 1)]
        _write(args.output, json.dumps({"N": matrix.N, "seed": seed, "rows": rows}))
        _emit(config, {"N": matrix.N, "seed": seed})
        return 0
    if args.markov_command == "check-e":
        report = mk.concentration_report(matrix, args.alpha, args.tuples, seed)
        payload = {
            "N": report.n,
            "alpha": report.alpha,
            "tuples": report.n_tuples,
            "exhaustive": report.exhaustive,
            "all_pass_fraction": report.all_pass_fraction,
        }
        payload.update({f"pass[{k}]": v for k, v in report.condition_pass_fraction.items()})
        table = (
            ["condition", "pass_fraction"],
            [[k, v] for k, v in report.condition_pass_fraction.items()]
            + [["all", report.all_pass_fraction]],
        )
        _emit(config, payload, table=table)
        return 0
    world = mk.MarkovWorld(matrix, alpha=args.alpha)
    if args.markov_command == "check-ui":
        report = mk.check_mixing(world, args.level, args.tuples, seed)
        rows = [
            [c.name, c.n_checked, c.n_pass, c.worst_deviation] for c in report.conditions
        ]
        payload = {
            "N": report.n,
            "l": report.l,
            "vacuous": report.vacuous,
            "all_pass": report.all_pass,
            "worst_deviation": report.worst_deviation,
        }
        _emit(config, payload, table=(["condition", "checked", "passed", "worst_dev"], rows))
        return 0
    if args.markov_command == "games":
        u = mk.chain_structure(world, args.level, config.budget)
        g = mk.revelation_game(world, args.p, config.budget)
        guarantees = mk.truthful_guarantee(world, args.level, args.p, config.budget)
        payload = {
            "value": gm.value(u, g).value,
            "truthful_lower": guarantees.lower,
            "truthful_upper": guarantees.upper,
            "epsilon": world.epsilon,
        }
        _emit(config, payload)
        return 0
    raise InfoDistError(f"unknown markov command {args.markov_command!r}")


# ---------------------------------------------------------------------------
# Parser.
# ---------------------------------------------------------------------------


def _add_format(sp):
    sp.add_argument("--format", choices=_FORMATS, default="text")
    sp.add_argument("--budget", type=int, default=None, help=f"enumeration budget (default {BUDGET_ENV_VAR} or 10^6)")
    sp.add_argument("--tolerance", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infodist",
        description="Value-based distance between information structures",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("value", help="value of a zero-sum Bayesian game")
    sp.add_argument("structure")
    sp.add_argument("game")
    sp.add_argument("--strategies", action="store_true")
    _add_format(sp)
    sp.set_defaults(func=_cmd_value)

    sp = sub.add_parser("distance", help="value-based distance")
    sp.add_argument("u")
    sp.add_argument("v")
    _add_format(sp)
    sp.set_defaults(func=_cmd_distance)

    sp = sub.add_parser("compare", help="comparison order with certificates")
    sp.add_argument("u")
    sp.add_argument("v")
    _add_format(sp)
    sp.set_defaults(func=_cmd_compare)

    sp = sub.add_parser("witness", help="extract a gap-achieving payoff function")
    sp.add_argument("u")
    sp.add_argument("v")
    sp.add_argument("-o", "--output", default=None)
    _add_format(sp)
    sp.set_defaults(func=_cmd_witness)

    sp = sub.add_parser("d1", help="single-agent distance")
    sp.add_argument("u")
    sp.add_argument("v")
    _add_format(sp)
    sp.set_defaults(func=_cmd_d1)

    sp = sub.add_parser("diameter", help="distance bounds from state marginals")
    sp.add_argument("p")
    sp.add_argument("q")
    _add_format(sp)
    sp.set_defaults(func=_cmd_diameter)

    sp = sub.add_parser("dw", help="pointwise metric over a game list")
    sp.add_argument("u")
    sp.add_argument("v")
    sp.add_argument("games", nargs="+")
    _add_format(sp)
    sp.set_defaults(func=_cmd_dw)

    sp = sub.add_parser("reduce", help="merge hierarchy-equivalent signals")
    sp.add_argument("structure")
    sp.add_argument("-o", "--output", default=None)
    _add_format(sp)
    sp.set_defaults(func=_cmd_reduce)

    sp = sub.add_parser("decompose", help="common-knowledge decomposition")
    sp.add_argument("structure")
    sp.add_argument("-o", "--output", default=None)
    _add_format(sp)
    sp.set_defaults(func=_cmd_decompose)

    sp = sub.add_parser("dnzs", help="nonzero-sum payoff-set distance")
    sp.add_argument("u")
    sp.add_argument("v")
    _add_format(sp)
    sp.set_defaults(func=_cmd_dnzs)

    sp = sub.add_parser("feasible", help="feasible payoff polygon")
    sp.add_argument("structure")
    sp.add_argument("game")
    sp.add_argument("-o", "--output", default=None)
    _add_format(sp)
    sp.set_defaults(func=_cmd_feasible)

    sp = sub.add_parser("verify-bound", help="feasible-set distance bounds")
    sp.add_argument("u")
    sp.add_argument("v")
    sp.add_argument("game")
    sp.add_argument("--case", choices=("cond_indep", "public", "one_sided"), required=True)
    _add_format(sp)
    sp.set_defaults(func=_cmd_verify_bound)

    sp = sub.add_parser("catalog", help="generate a named example structure")
    sp.add_argument("name", choices=_CATALOG_NAMES)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("--p", type=float, action="append", default=None)
    sp.add_argument("--r", type=float, default=0.75)
    sp.add_argument("--eps", type=float, default=0.05)
    sp.add_argument("--prior", type=float, default=0.5)
    sp.add_argument("--truncation", type=int, default=12)
    sp.add_argument("--states", type=float, nargs="+", default=[0.5, 0.5])
    sp.add_argument("--which", default=None, help="u, v, u_prime or v_prime for paired fixtures")
    sp.add_argument("-o", "--output", default=None)
    _add_format(sp)
    sp.set_defaults(func=_cmd_catalog)

    sp = sub.add_parser("blackwell-table", help="closed-form d1 table as CSV")
    sp.add_argument("--p", type=float, action="append", default=None)
    sp.add_argument("--nmax", type=int, default=4)
    sp.add_argument("--lp", action="store_true", help="add the LP-computed column")
    _add_format(sp)
    sp.set_defaults(func=_cmd_blackwell_table)

    sp = sub.add_parser("repro-appendix-f", help="reproduce the distance table")
    _add_format(sp)
    sp.set_defaults(func=_cmd_repro_canonical_examples)

    sp = sub.add_parser("markov", help="large-space construction")
    msub = sp.add_subparsers(dest="markov_command", required=True)
    for name in ("sample", "check-e", "check-ui", "games"):
        ms = msub.add_parser(name)
        ms.add_argument("-N", "--N", dest="N", type=int, required=True)
        ms.add_argument("--seed", type=int, default=None)
        ms.add_argument("--alpha", type=float, default=mk.DEFAULT_ALPHA)
        if name == "sample":
            ms.add_argument("-o", "--output", default=None)
        if name in ("check-e", "check-ui"):
            ms.add_argument("--tuples", type=int, default=100_000)
        if name in ("check-ui", "games"):
            ms.add_argument("-l", "--level", type=int, required=True)
        if name == "games":
            ms.add_argument("-p", type=int, required=True)
        _add_format(ms)
        ms.set_defaults(func=_cmd_markov)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except InfoDistError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1
    except OSError as exc:
        print(json.dumps({"error": "IOError", "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
