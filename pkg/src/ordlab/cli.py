"""Command-line entry point.

Subcommands: sample, verify, classify, oracle, blowup-stats, repro, replay.
Results go to stdout as JSON (or CSV where noted).  ``--out PATH`` also
writes an experiment record that ``replay`` can re-run and compare.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__, bernoulli
from .classifier import builtin_oracle, classify_forbidden_family, classify_oracle
from .graph import GraphFormatError, named_graph, parse_graph
from .lab import check_consistency, check_uniformity, estimate_blowup_statistics, estimate_distribution, \
    summarize_blowup, truncation_ladder
from .repro import EXPERIMENTS, ReproConfig, run_experiment
from .rng import derive_rng, set_threads
from .samplers import KINDS, CopyPattern, SamplerDomainError, SamplerSpec, prepare
from .templates import BlowUpSpec, Template, classify_template


class ConfigError(Exception):
    pass


def _auto_float(text: str):
    if text == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'auto', got {text!r}") from None


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def _global_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--alpha", type=_auto_float, default=None)
    p.add_argument("--epsilon", type=_auto_float, default=None)
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--significance", type=float, default=1e-3)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", type=Path, default=None)
    return p


def _graph_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", help="named graph: K<n>, E<n>, P<n>, C<n>, S<n>, bull, flower:<k>, broom:<n>:<l>:<r>")
    p.add_argument("--graph-file", type=Path, help="edge-list file (or graph6 with --graph6)")
    p.add_argument("--graph6", action="store_true")


def _sampler_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--sampler", choices=KINDS, required=True)
    p.add_argument("--pattern", help="pattern graph name for disjoint_copies")
    p.add_argument("--petals", type=int, nargs="+")
    p.add_argument("--drop-center", action="store_true")
    p.add_argument("--path-len", type=int)
    p.add_argument("--left", type=int, default=0)
    p.add_argument("--right", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    g = _global_flags()
    parser = argparse.ArgumentParser(prog="ordlab", description=__doc__.splitlines()[0], parents=[g])
    parser.add_argument("--version", action="version", version=f"ordlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", parents=[g], help="emit orderings, one JSON array per line")
    _sampler_flags(p)
    _graph_flags(p)

    p = sub.add_parser("verify", parents=[g], help="consistency / uniformity tests")
    _sampler_flags(p)
    _graph_flags(p)
    p.add_argument("--test", choices=("consistency", "uniformity", "both"), default="both")
    p.add_argument("--tuple", type=int, nargs="+", help="emit this tuple's ordering distribution instead")

    p = sub.add_parser("classify", parents=[g], help="classify a hereditary property")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--forbidden", type=Path, help="file of edge-list blocks separated by blank lines")
    src.add_argument("--oracle", help="built-in oracle name")
    src.add_argument("--template", type=Path, help="template JSON file")
    p.add_argument("--cap", type=int, default=32)

    p = sub.add_parser("oracle", parents=[g], help="exact closed-form values")
    p.add_argument("quantity", choices=("addx", "edgedist", "bernoulli", "zeros", "regular"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--x", default="0")
    p.add_argument("--order", choices=("pair", "triple"), default="pair")

    p = sub.add_parser("blowup-stats", parents=[g], help="rank statistics on a finite blow-up")
    p.add_argument("--sampler", choices=("uniform", "block", "spectral"), default="uniform")
    p.add_argument("--template", type=Path, required=True)
    p.add_argument("--u", type=int, default=0)
    p.add_argument("--v", type=int, default=1)
    p.add_argument("--multiplicity", type=int, default=200)
    p.add_argument("--ladder", action="store_true", help="also run multiplicities 50, 100, 200")

    p = sub.add_parser("repro", parents=[g], help="run a named experiment and check it")
    p.add_argument("name", choices=sorted(EXPERIMENTS))

    p = sub.add_parser("replay", help="re-run a saved record and compare its result")
    p.add_argument("record", type=Path)
    return parser


# -- helpers ---------------------------------------------------------------------


def _load_graph(args):
    try:
        if args.graph_file is not None:
            return parse_graph(args.graph_file.read_text(), "graph6" if args.graph6 else "edge-list")
        if args.graph is not None:
            return named_graph(args.graph)
    except (OSError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return None


def _spec(args, graph) -> SamplerSpec:
    kw = {"seed": args.seed}
    if args.alpha is not None:
        kw["alpha"] = args.alpha
    if args.epsilon is not None:
        kw["epsilon"] = args.epsilon
    if args.sampler == "disjoint_copies":
        if not args.pattern or graph is None:
            raise ConfigError("disjoint_copies needs --pattern and a graph")
        kw["copy_pattern"] = CopyPattern.find(named_graph(args.pattern), graph)
    if args.sampler == "double_broom":
        kw.update(path_len=args.path_len, left_leaves=args.left, right_leaves=args.right)
    if args.sampler == "flower":
        kw.update(petals=tuple(args.petals or (1,)), drop_center=args.drop_center)
    return SamplerSpec(args.sampler, **kw)


def _config(args) -> dict:
    skip = {"out", "threads", "format"}
    out = {}
    for k, v in vars(args).items():
        if k in skip:
            continue
        out[k] = str(v) if isinstance(v, Path) else v
    return out


def _emit_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in r.items()})
    return buf.getvalue()


# -- subcommands -----------------------------------------------------------------


def cmd_sample(args):
    graph = _load_graph(args)
    spec = _spec(args, graph)
    sampler = prepare(spec, graph)
    n = args.samples or 10
    orders = sampler.orderings(n, derive_rng(args.seed, "sample"))
    rows = [[int(v) for v in row] for row in orders]
    if args.format == "csv":
        text = "".join(",".join(map(str, r)) + "\n" for r in rows)
    else:
        text = "".join(json.dumps(r) + "\n" for r in rows)
    return rows, text, True


def cmd_verify(args):
    graph = _load_graph(args)
    spec = _spec(args, graph)
    n = args.samples or 100_000
    kmax = args.kmax or 3
    if args.tuple:
        dist = estimate_distribution(spec, graph, args.tuple, n, args.seed)
        payload = dist.to_dict()
        if args.format == "csv":
            rows = [{"pattern": " ".join(str(args.tuple[i]) for i in sigma), "probability": p}
                    for sigma, p in zip(itertools.permutations(range(len(args.tuple))), payload["probabilities"])]
            return payload, _emit_csv(rows), True
        return payload, json.dumps(payload) + "\n", True
    reports = []
    if args.test in ("consistency", "both"):
        reports.extend(check_consistency(spec, graph, kmax, n, args.significance, args.seed))
    if args.test in ("uniformity", "both"):
        reports.append(check_uniformity(spec, graph, kmax, n, args.significance, args.seed))
    payload = [r.to_dict() for r in reports]
    if args.format == "csv":
        flat = []
        for d in payload:
            flat.append(d)
            flat.extend(d["details"].get("reports", []))
        rows = [{k: d[k] for k in ("name", "statistic", "dof", "p_value", "passed", "method")} for d in flat]
        return payload, _emit_csv(rows), True
    return payload, json.dumps(payload, indent=1) + "\n", True


def _read_family(path: Path):
    text = path.read_text()
    blocks = [b for b in text.replace("\r\n", "\n").split("\n\n") if b.strip()]
    return [parse_graph(b) for b in blocks]


def cmd_classify(args):
    try:
        if args.forbidden is not None:
            verdict = classify_forbidden_family(_read_family(args.forbidden))
        elif args.template is not None:
            verdict = classify_template(Template.from_json(args.template.read_text()))
        else:
            verdict = classify_oracle(builtin_oracle(args.oracle, cap=args.cap))
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc
    payload = verdict.to_dict()
    return payload, json.dumps(payload) + "\n", True


def _exact(text: str):
    try:
        return Fraction(text)
    except ValueError:
        raise ConfigError(f"bad number {text!r}") from None


def _jsonable(v):
    if isinstance(v, Fraction):
        return float(v)
    return v


def cmd_oracle(args):
    x = _exact(args.x if args.alpha in (None, "auto") else repr(args.alpha))
    try:
        if args.quantity == "addx":
            terms = bernoulli.addx_terms(args.n, args.k, x, args.j)
        elif args.quantity == "edgedist":
            terms = bernoulli.edgedist_terms(args.n, x, args.order)
        elif args.quantity == "bernoulli":
            v = bernoulli.bernoulli_poly(args.n, x)
            terms = {"value": v}
        elif args.quantity == "regular":
            terms = {"value": bernoulli.regular_offset(args.n, float(x))}
        else:
            terms = {"value": bernoulli.bernoulli_zeros(args.n)}
    except (ValueError, bernoulli.RootCountError) as exc:
        raise ConfigError(str(exc)) from exc
    payload = {k: _jsonable(v) for k, v in terms.items()}
    if isinstance(terms["value"], Fraction):
        payload["exact"] = str(terms["value"])
    return payload, json.dumps(payload) + "\n", True


def cmd_blowup(args):
    try:
        t = Template.from_json(args.template.read_text())
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc
    spec = SamplerSpec(args.sampler, epsilon=args.epsilon)
    draws = args.samples or 500
    stats = estimate_blowup_statistics(spec, BlowUpSpec.uniform(t, args.multiplicity), args.u, args.v,
                                       draws, args.seed)
    payload = summarize_blowup(stats).to_dict()
    if args.ladder:
        payload["ladder"] = truncation_ladder(spec, t, args.u, args.v, draws, args.seed)
    return payload, json.dumps(payload) + "\n", True


def cmd_repro(args):
    cfg = ReproConfig(seed=args.seed, samples=args.samples, significance=args.significance,
                      alpha=args.alpha, epsilon=args.epsilon, kmax=args.kmax)
    result = run_experiment(args.name, cfg)
    return result, json.dumps(result, indent=1) + "\n", result["passed"]


COMMANDS = {
    "sample": cmd_sample,
    "verify": cmd_verify,
    "classify": cmd_classify,
    "oracle": cmd_oracle,
    "blowup-stats": cmd_blowup,
    "repro": cmd_repro,
}


def _execute(argv) -> tuple[object, str, bool, argparse.Namespace]:
    args = build_parser().parse_args(argv)
    set_threads(args.threads)
    payload, text, ok = COMMANDS[args.command](args)
    return payload, text, ok, args


def cmd_replay(path: Path, out) -> int:
    try:
        record = json.loads(path.read_text())
        argv = record["argv"]
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError(f"unreadable record: {exc}") from exc
    payload, _, _, _ = _execute(argv)
    same = json.dumps(payload, sort_keys=True) == json.dumps(record["result"], sort_keys=True)
    out.write(json.dumps({"record": str(path), "identical": same}) + "\n")
    return 0 if same else 1


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv[:1] == ["replay"]:
            ns = build_parser().parse_args(argv)
            return cmd_replay(ns.record, out)
        start = time.perf_counter()
        payload, text, ok, args = _execute(argv)
        wall = time.perf_counter() - start
    except SystemExit as exc:  # argparse errors and --help
        return 0 if exc.code in (0, None) else 2
    except (ConfigError, SamplerDomainError, GraphFormatError, KeyError, ValueError) as exc:
        sys.stderr.write(f"ordlab: error: {exc}\n")
        return 2
    out.write(text)
    if args.out is not None:
        record = {"command": args.command, "argv": argv, "config": _config(args), "version": __version__,
                  "result": payload, "passed": bool(ok), "wall_clock_s": wall}
        args.out.write_text(json.dumps(record, indent=1) + "\n")
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())
