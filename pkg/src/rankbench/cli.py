"""Command-line entry point.

Subcommands: rank, compare, sweep, check-consistency, reproduce-paper, serve.
Exit codes: 0 success, 1 invalid input, 2 I/O failure, 3 internal numerical
failure. Default output carries no timestamps so identical inputs produce
byte-identical reports; pass --timestamps to opt in.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from datetime import datetime
from pathlib import Path

from . import catalog_io
from .ahp import consistency_ratio
from .catalog_io import RunConfig, format_report, load_catalog, load_run_config
from .core import Method, ServiceCatalog, validate_weights
from .errors import (
    NoConvergence,
    ParseError,
    RankbenchError,
    SinkWriteError,
    ValidationError,
)
from .scenarios import (
    MethodComparison,
    Scenario,
    SweepPoint,
    fmt_score,
    run_scenario,
    sweep_weights,
)

CONFIG_ENV_VAR = "RANKBENCH_CONFIG"

_FORMAT_MAP = {"table": "table-text", "csv": "delimited", "json": "structured"}
_REPORT_EXT = {"table": "txt", "csv": "csv", "json": "json"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankbench",
        description="Rank service alternatives under weighted QoS criteria "
        "with eigenvector (AHP) and weighted-sum (SAW) scoring.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, scenario: bool = True) -> None:
        p.add_argument("--catalog", help="catalog JSON path (default: bundled desk catalog)")
        if scenario:
            p.add_argument(
                "--scenario",
                action="append",
                default=None,
                metavar="NAME|PATH",
                help="built-in scenario name (sim1..sim4) or scenario file path; repeatable",
            )
        p.add_argument("--format", choices=("table", "csv", "json"), default=None)
        p.add_argument("--output", metavar="DIR", help="also write the report and score figures here")
        p.add_argument("--clamp-saaty", action="store_true", default=None,
                       help="clamp derived comparison ratios into [1/9, 9]")
        p.add_argument("--timestamps", action="store_true", default=None,
                       help="stamp the report with the generation time")

    p_rank = sub.add_parser("rank", help="rank the catalog under one scenario or inline weights")
    add_common(p_rank)
    p_rank.add_argument(
        "--weights",
        action="append",
        metavar="ID=VALUE",
        help="inline weight for one criterion; repeat per criterion. "
        "The ranking then considers exactly the criteria listed.",
    )
    p_rank.add_argument("--method", choices=("AHP", "SAW", "both"), default="both")

    p_cmp = sub.add_parser("compare", help="run several scenarios and summarize rank agreement")
    add_common(p_cmp)

    p_sweep = sub.add_parser("sweep", help="re-rank while sweeping one criterion weight")
    add_common(p_sweep)
    p_sweep.add_argument("--criterion", required=True, metavar="ID")
    p_sweep.add_argument("--values", help="comma-separated weight values to sweep")
    p_sweep.add_argument("--sweep-from", type=float, dest="sweep_from")
    p_sweep.add_argument("--sweep-to", type=float, dest="sweep_to")
    p_sweep.add_argument("--steps", type=int, default=11)

    p_check = sub.add_parser("check-consistency", help="consistency report for a pairwise matrix file")
    p_check.add_argument("matrix", help="JSON file with keys 'ids' and 'entries'")

    p_repro = sub.add_parser(
        "reproduce-paper",
        help="run the four bundled weight simulations and report cross-method rank agreement",
    )
    add_common(p_repro, scenario=False)

    p_serve = sub.add_parser("serve", help="serve the ranking HTTP API (loopback)")
    p_serve.add_argument("--catalog", help="catalog JSON path (default: bundled desk catalog)")
    p_serve.add_argument("--serve-port", type=int, default=8765)
    p_serve.add_argument("--ui-dir", help="directory of static UI files to serve at /")
    p_serve.add_argument("--clamp-saaty", action="store_true", default=None)
    return parser


def _load_config(args: argparse.Namespace) -> RunConfig:
    """Environment config as defaults, command-line flags on top."""
    config = RunConfig()
    env_path = os.environ.get(CONFIG_ENV_VAR)
    if env_path:
        config = load_run_config(env_path)
    updates = {}
    if getattr(args, "catalog", None) is not None:
        updates["catalog"] = args.catalog
    if getattr(args, "scenario", None):
        updates["scenarios"] = tuple(args.scenario)
    if getattr(args, "format", None) is not None:
        updates["format"] = args.format
    if getattr(args, "output", None) is not None:
        updates["output_dir"] = args.output
    if getattr(args, "clamp_saaty", None) is not None:
        updates["clamp_saaty"] = args.clamp_saaty
    if getattr(args, "timestamps", None) is not None:
        updates["timestamps"] = args.timestamps
    return replace(config, **updates)


def _resolve_catalog(config: RunConfig) -> ServiceCatalog:
    if config.catalog is None:
        return catalog_io.builtin_catalog()
    path = Path(config.catalog)
    if not path.exists():
        raise FileNotFoundError(f"catalog file not found: {path}")
    return load_catalog(path)


def _resolve_scenarios(config: RunConfig, catalog: ServiceCatalog) -> list[Scenario]:
    names = config.scenarios
    if not names:
        return catalog_io.builtin_scenarios()
    builtin = {s.name: s for s in catalog_io.builtin_scenarios()}
    out: list[Scenario] = []
    for ref in names:
        if ref in builtin:
            out.append(builtin[ref])
            continue
        path = Path(ref)
        if not path.exists():
            raise FileNotFoundError(
                f"scenario '{ref}' is neither a built-in name ({', '.join(sorted(builtin))}) "
                f"nor an existing file"
            )
        out.extend(catalog_io.load_scenarios(path, criteria=catalog.criteria))
    return out


def _parse_inline_weights(pairs: list[str]) -> dict[str, float]:
    raw: dict[str, float] = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValidationError(f"--weights expects ID=VALUE, got {pair!r}")
        cid, _, value = pair.partition("=")
        cid = cid.strip()
        if not cid:
            raise ValidationError(f"--weights expects ID=VALUE, got {pair!r}")
        if cid in raw:
            raise ValidationError(f"--weights lists criterion '{cid}' twice")
        try:
            raw[cid] = float(value)
        except ValueError:
            raise ValidationError(f"--weights value for '{cid}' is not a number: {value!r}") from None
    return raw


def _print_report(
    comparisons: list[MethodComparison],
    config: RunConfig,
    summary: str | None = None,
) -> None:
    if config.timestamps:
        print(f"generated at: {datetime.now().isoformat()}")
    report = format_report(comparisons, _FORMAT_MAP[config.format])
    sys.stdout.write(report)
    if summary and config.format == "table":
        print()
        print(summary)
    if config.output_dir:
        outdir = Path(config.output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        report_path = outdir / f"report.{_REPORT_EXT[config.format]}"
        catalog_io.save_report(comparisons, _FORMAT_MAP[config.format], report_path)
        from .figures import render_report_figures

        figure_paths = render_report_figures(comparisons, outdir)
        for p in [report_path, *figure_paths]:
            print(f"wrote {p}", file=sys.stderr)


def cmd_rank(args: argparse.Namespace, config: RunConfig) -> int:
    catalog = _resolve_catalog(config)
    if args.weights:
        if config.scenarios:
            raise ValidationError("give either --scenario or --weights, not both")
        raw = _parse_inline_weights(args.weights)
        catalog = catalog.restrict(list(raw))
        weights = validate_weights(raw, catalog.criteria)
        scenario = Scenario(name="custom", weights=weights, methods=_methods_for(args.method))
    else:
        if not config.scenarios:
            raise ValidationError("rank needs --scenario NAME|PATH or --weights ID=VALUE flags")
        found = _resolve_scenarios(config, catalog)
        if len(found) != 1:
            raise ValidationError(
                f"rank runs exactly one scenario, got {len(found)}; use compare for several"
            )
        scenario = found[0]
        if args.method != "both":
            scenario = replace(scenario, methods=_methods_for(args.method))
    comparison = run_scenario(catalog, scenario, clamp_saaty=config.clamp_saaty,
                              eigen_tol=config.eigen_tolerance,
                              eigen_max_iterations=config.eigen_max_iterations)
    _print_report([comparison], config)
    return 0


def _methods_for(choice: str) -> tuple[Method, ...]:
    if choice == "both":
        return (Method.AHP, Method.SAW)
    return (Method(choice),)


def _agreement_summary(comparisons: list[MethodComparison]) -> str:
    judged = [c for c in comparisons if c.exact_rank_match is not None]
    agreeing = sum(1 for c in judged if c.exact_rank_match)
    return f"{agreeing}/{len(judged)} scenarios: AHP and SAW rank orders identical"


def cmd_compare(args: argparse.Namespace, config: RunConfig) -> int:
    catalog = _resolve_catalog(config)
    scenarios = _resolve_scenarios(config, catalog)
    comparisons = [
        run_scenario(catalog, s, clamp_saaty=config.clamp_saaty,
                     eigen_tol=config.eigen_tolerance,
                     eigen_max_iterations=config.eigen_max_iterations)
        for s in scenarios
    ]
    _print_report(comparisons, config, summary=_agreement_summary(comparisons))
    return 0


def cmd_reproduce_paper(args: argparse.Namespace, config: RunConfig) -> int:
    catalog = _resolve_catalog(config)
    scenarios = catalog_io.builtin_scenarios()
    comparisons = [
        run_scenario(catalog, s, clamp_saaty=config.clamp_saaty,
                     eigen_tol=config.eigen_tolerance,
                     eigen_max_iterations=config.eigen_max_iterations)
        for s in scenarios
    ]
    _print_report(comparisons, config, summary=_agreement_summary(comparisons))
    return 0


def _sweep_values(args: argparse.Namespace) -> list[float]:
    if args.values:
        try:
            return [float(v) for v in args.values.split(",") if v.strip()]
        except ValueError as exc:
            raise ValidationError(f"--values must be comma-separated numbers: {exc}") from None
    if args.sweep_from is None or args.sweep_to is None:
        raise ValidationError("sweep needs --values or both --sweep-from and --sweep-to")
    if args.steps < 2:
        raise ValidationError(f"--steps must be >= 2, got {args.steps}")
    lo, hi = args.sweep_from, args.sweep_to
    step = (hi - lo) / (args.steps - 1)
    return [lo + i * step for i in range(args.steps)]


def _order_str(comparison: MethodComparison, method: Method) -> str:
    try:
        ranking = comparison.ranking_for(method)
    except KeyError:
        return ""
    return ">".join(ranking.order)


def cmd_sweep(args: argparse.Namespace, config: RunConfig) -> int:
    catalog = _resolve_catalog(config)
    scenarios = _resolve_scenarios(config, catalog)
    if len(scenarios) != 1:
        raise ValidationError(f"sweep runs one base scenario, got {len(scenarios)}")
    base = scenarios[0]
    values = _sweep_values(args)
    points = sweep_weights(catalog, base, args.criterion, values,
                           clamp_saaty=config.clamp_saaty,
                           eigen_tol=config.eigen_tolerance,
                           eigen_max_iterations=config.eigen_max_iterations)
    _print_sweep(points, args.criterion, base, config)
    return 0


def _print_sweep(
    points: list[SweepPoint], criterion_id: str, base: Scenario, config: RunConfig
) -> None:
    if config.timestamps:
        print(f"generated at: {datetime.now().isoformat()}")
    if config.format == "json":
        import json as _json

        sys.stdout.write(_json.dumps([p.as_dict() for p in points], indent=2) + "\n")
    elif config.format == "csv":
        import csv as _csv

        writer = _csv.writer(sys.stdout)
        writer.writerow(["value", "ahp_order", "saw_order", "kendall_tau", "exact_rank_match", "error"])
        for p in points:
            if p.comparison is None:
                writer.writerow([f"{p.value:g}", "", "", "", "", p.error])
            else:
                c = p.comparison
                writer.writerow([
                    f"{p.value:g}",
                    _order_str(c, Method.AHP),
                    _order_str(c, Method.SAW),
                    fmt_score(c.kendall_tau) if c.kendall_tau is not None else "",
                    "" if c.exact_rank_match is None else ("true" if c.exact_rank_match else "false"),
                    "",
                ])
    else:
        print(f"sweep of '{criterion_id}' on scenario '{base.name}'")
        rows = [["value", "AHP order", "SAW order", "tau", "exact"]]
        for p in points:
            if p.comparison is None:
                rows.append([f"{p.value:g}", f"error: {p.error}", "", "", ""])
            else:
                c = p.comparison
                rows.append([
                    f"{p.value:g}",
                    _order_str(c, Method.AHP),
                    _order_str(c, Method.SAW),
                    fmt_score(c.kendall_tau) if c.kendall_tau is not None else "-",
                    "" if c.exact_rank_match is None else ("yes" if c.exact_rank_match else "no"),
                ])
        print(catalog_io.render_text_table(rows))
    if config.output_dir:
        outdir = Path(config.output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        ok = [p.comparison for p in points if p.comparison is not None]
        if ok:
            catalog_io.save_report(ok, _FORMAT_MAP[config.format], outdir / f"sweep.{_REPORT_EXT[config.format]}")
            from .figures import render_sweep_figure

            fig = render_sweep_figure(points, criterion_id, outdir / "sweep_scores.png")
            print(f"wrote {fig}", file=sys.stderr)


def cmd_check_consistency(args: argparse.Namespace, config: RunConfig) -> int:
    path = Path(args.matrix)
    if not path.exists():
        raise FileNotFoundError(f"matrix file not found: {path}")
    matrix = catalog_io.load_pairwise_matrix(path)
    report = consistency_ratio(matrix, tol=config.eigen_tolerance,
                               max_iterations=config.eigen_max_iterations)
    print(f"n           : {matrix.n}")
    print(f"lambda_max  : {report.lambda_max:.6f}")
    print(f"CI          : {report.consistency_index:.6f}")
    print(f"RI          : {report.random_index:g}")
    print(f"CR          : {report.consistency_ratio:.4f}")
    verdict = "yes (CR < 0.1)" if report.acceptable else "no (CR >= 0.1)"
    print(f"acceptable  : {verdict}")
    return 0


def cmd_serve(args: argparse.Namespace, config: RunConfig) -> int:
    from .api import RankApiServer

    server = RankApiServer(
        ("127.0.0.1", args.serve_port),
        catalog_path=config.catalog,
        ui_dir=args.ui_dir,
        clamp_saaty=config.clamp_saaty,
        eigen_tol=config.eigen_tolerance,
        eigen_max_iterations=config.eigen_max_iterations,
    )
    server.load()
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


_COMMANDS = {
    "rank": cmd_rank,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "check-consistency": cmd_check_consistency,
    "reproduce-paper": cmd_reproduce_paper,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args)
        return _COMMANDS[args.command](args, config)
    except NoConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (FileNotFoundError, IsADirectoryError, PermissionError, SinkWriteError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, RankbenchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
