"""Command-line interface: ``wqe verify | search | summarize | demo``.

Exit codes: 0 when every record passes or is vacuous, 1 when at least one
fails, 2 on a configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .harness import (
    TARGETS,
    CampaignConfig,
    CampaignError,
    ConfigError,
    SearchSpec,
    default_dims,
    parse_dims,
    run_campaign,
    search_counterexample,
    summarize,
)
from .harness.ensembles import ENSEMBLES, SPECS
from .harness.search import resolve_target

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dims", help="subsystem dims, e.g. 4, 2x2 or 2x2x2")
    p.add_argument("--ensemble", default=None, choices=ENSEMBLES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("literal", "sandwiched"), default=None,
                   help="trace convention (default: per theorem)")
    p.add_argument("--tol", type=float, default=None, help="slack tolerance (default: per theorem)")
    p.add_argument("--out", default=None, help="append JSONL records to this path")
    p.add_argument("--identity-weight", action="store_true", help="use phi = 1 for all weights")
    p.add_argument("--candidates", type=int, default=6, help="araki_lieb: trial weights per direction")
    p.add_argument("--workers", type=int, default=None, help="worker processes (default: WQE_THREADS or cores)")
    p.add_argument("--json", action="store_true", help="print the machine summary as JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wqe", description="Weighted quantum entropy verification harness.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run a seeded campaign for one theorem")
    v.add_argument("theorem", choices=list(SPECS))
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--state", default=None, help="matrix file fixing the state")
    v.add_argument("--weight", default=None, help="matrix file fixing the weight")
    _common(v)

    s = sub.add_parser("search", help="look for violations with a side condition broken")
    s.add_argument("target", help="one of: " + ", ".join(list(TARGETS) + list(SPECS)))
    s.add_argument("--max-trials", type=int, default=10_000)
    _common(s)

    m = sub.add_parser("summarize", help="summarise a JSONL result file")
    m.add_argument("path")
    m.add_argument("--json", action="store_true")

    sub.add_parser("demo", help="print the worked qubit examples")
    return parser


def _config(args, theorem, dims, ensemble, **extra) -> CampaignConfig:
    return CampaignConfig(
        theorem=theorem, dims=dims, ensemble=ensemble, seed=args.seed, mode=args.mode,
        tolerance=args.tol, output_path=args.out,
        weight="identity" if args.identity_weight else "random",
        candidates=args.candidates, workers=args.workers, **extra)


def _verify(args) -> int:
    dims = parse_dims(args.dims) if args.dims else default_dims(args.theorem)
    cfg = _config(args, args.theorem, dims, args.ensemble or "generic", samples=args.samples,
                  state_path=args.state, weight_path=args.weight)
    summary = run_campaign(cfg)
    if args.json:
        print(json.dumps(summary.to_dict(), indent=1))
    else:
        ms = "n/a" if summary.min_slack == float("inf") else f"{summary.min_slack:.3e}"
        print(f"{cfg.theorem} dims={'x'.join(map(str, cfg.dims))} ensemble={cfg.ensemble} "
              f"mode={cfg.effective_mode} tol={cfg.effective_tol:g} seed={cfg.seed}")
        print(f"samples={summary.samples} pass={summary.passed} fail={summary.failed} "
              f"vacuous={summary.vacuous} errors={summary.errors}")
        print(f"min slack={ms} max imag residue={summary.max_imag_residue:.3e} "
              f"wall time={summary.wall_time:.2f}s")
        if summary.condition_rates:
            print("conditions: " + ", ".join(f"{k} {v:.1%}" for k, v in summary.condition_rates.items()))
    return EXIT_OK if summary.ok else EXIT_FAIL


def _search(args) -> int:
    theorem, _, dflt = resolve_target(args.target)
    dims = parse_dims(args.dims) if args.dims else dflt
    ensemble = args.ensemble or ("classical" if ":" in args.target and args.target not in
                                 ("ssa:commutators", "klein:commuting") else "generic")
    cfg = _config(args, theorem, dims, ensemble,
                  search=SearchSpec(args.target, args.max_trials))
    out = search_counterexample(cfg)
    if args.json:
        print(json.dumps(out.to_dict(), indent=1))
    elif out.found:
        r = out.record
        print(f"{args.target}: violation found at trial {r['index']} (seed {r['seed']}) "
              f"after {out.trials} trial(s): slack={r['slack']:.6e} lhs={r['lhs']:.10g} rhs={r['rhs']:.10g}")
    else:
        print(f"{args.target}: exhausted {out.trials} trial(s) without a violation "
              f"({out.condition_broken} had the condition broken)")
    return EXIT_FAIL if out.found else EXIT_OK


def _summarize(args) -> int:
    try:
        rep = summarize(args.path)
    except OSError as exc:
        raise ConfigError(f"cannot read {args.path}: {exc.strerror}") from None
    print(json.dumps(rep.to_dict(), indent=1) if args.json else rep.text())
    return rep.exit_code


def _demo(args) -> int:
    from .demo import run_demo
    return EXIT_OK if run_demo() else EXIT_FAIL


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors exit 2, --help exits 0
        return int(exc.code or 0)
    handler = {"verify": _verify, "search": _search, "summarize": _summarize, "demo": _demo}[args.command]
    try:
        return handler(args)
    except (ConfigError, CampaignError) as exc:
        print(f"wqe: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
