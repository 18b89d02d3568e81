"""Command-line interface for scenario files.

Subcommands: ``reliability`` (prior system failure probability),
``intervals`` (posterior interval per component), ``rank`` (component
ranking under a chosen metric), ``actions`` (posterior repair plans), and
``plot`` (normalized-value bar chart as SVG).

Exit codes: 0 success, 1 validation failure, 2 size cap exceeded,
64 usage error.
"""

from __future__ import annotations

import argparse
import sys

from .distributions import system_failure_prob
from .errors import NetvoiError, ScenarioError, SizeCapError
from .global_metrics import importance_measures, rank_global
from .inference import InspectionModel, alarm_probability, posterior_interval
from .local_metrics import posterior_action_table, voi_heuristic, voi_local
from .model import DEFAULT_COMPONENT_CAP
from .oracle import SimulationConfig, mc_system_failure
from .output import (format_number, json_value, render_bar_chart_svg, render_csv,
                     render_json)
from .scenario import parse_scenario_file

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SIZE_CAP = 2
EXIT_USAGE = 64

VOI_METRICS = ("global", "local", "heuristic")
IMPORTANCE_METRICS = ("bm", "crt", "raw", "rrw")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage()}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="netvoi", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("scenario", help="path to a scenario JSON document")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", metavar="PATH", default=None,
                       help="write to PATH instead of stdout")
        p.add_argument("--eps-fa", type=float, default=None,
                       help="override the document's false-alarm rate")
        p.add_argument("--eps-fs", type=float, default=None,
                       help="override the document's false-silence rate")
        p.add_argument("--cap", type=int, default=DEFAULT_COMPONENT_CAP,
                       help="component cap for exact analysis")

    p_rel = sub.add_parser("reliability", help="prior system failure probability")
    add_common(p_rel)
    p_rel.add_argument("--mc-samples", type=int, default=None,
                       help="estimate by Monte Carlo with this many samples")
    p_rel.add_argument("--seed", type=int, default=0)

    p_int = sub.add_parser("intervals", help="posterior interval per component")
    add_common(p_int)

    p_rank = sub.add_parser("rank", help="rank components under a metric")
    add_common(p_rank)
    p_rank.add_argument("--metric", required=True,
                        choices=VOI_METRICS + IMPORTANCE_METRICS)

    p_act = sub.add_parser("actions", help="posterior repair plans per outcome")
    add_common(p_act)

    p_plot = sub.add_parser("plot", help="normalized-value bar chart as SVG")
    add_common(p_plot)

    return parser


def _load(args):
    doc = parse_scenario_file(args.scenario)
    for warning in doc.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    net = doc.build_network(cap=args.cap)
    dist = doc.build_distribution()
    insp = doc.build_inspection()
    if args.eps_fa is not None or args.eps_fs is not None:
        fa = args.eps_fa if args.eps_fa is not None else doc.eps_fa
        fs = args.eps_fs if args.eps_fs is not None else doc.eps_fs
        insp = InspectionModel(fa, fs)
    return doc, net, dist, insp


def _emit(text: str, args) -> None:
    if args.output is None:
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _plan_label(plan: int, names) -> str:
    members = [names[i] for i in range(len(names)) if (plan >> i) & 1]
    return "+".join(members) if members else "-"


def _cmd_reliability(args) -> int:
    doc, net, dist, _ = _load(args)
    if args.mc_samples is not None:
        cfg = SimulationConfig(n_samples=args.mc_samples, seed=args.seed)
        estimate, stderr = mc_system_failure(net, dist, cfg)
        _emit(f"{format_number(estimate)} {format_number(stderr)}\n", args)
    else:
        _emit(f"{format_number(system_failure_prob(net, dist))}\n", args)
    return EXIT_OK


def _cmd_intervals(args) -> int:
    doc, net, dist, insp = _load(args)
    rows = []
    for i, name in enumerate(net.names):
        iv = posterior_interval(net, dist, i, insp)
        rows.append((name, iv.lo, iv.hi, iv.prior, iv.alarm_prob))
    if args.format == "csv":
        text = render_csv(
            ("component", "silence_posterior", "alarm_posterior", "prior",
             "alarm_probability"), rows)
    else:
        text = render_json({
            "rows": [
                {"component": name, "silence_posterior": json_value(lo),
                 "alarm_posterior": json_value(hi), "prior": json_value(prior),
                 "alarm_probability": json_value(h)}
                for name, lo, hi, prior, h in rows
            ]
        })
    _emit(text, args)
    return EXIT_OK


def _voi_report(args, doc, net, dist, insp):
    if args.metric == "global":
        return rank_global(net, dist, insp, doc.build_envelope())
    if args.metric == "local":
        return voi_local(net, dist, insp, doc.build_costs(), cap=args.cap)
    return voi_heuristic(net, dist, insp, doc.build_costs(), cap=args.cap)


def _cmd_rank(args) -> int:
    doc, net, dist, insp = _load(args)
    names = net.names
    if args.metric in VOI_METRICS:
        report = _voi_report(args, doc, net, dist, insp)
        with_regret = report.posterior_regret is not None
        rows = []
        for rank, i in enumerate(report.ranking, start=1):
            row = [rank, names[i], report.voi[i], report.voi_normalized[i],
                   report.posterior_loss[i]]
            if with_regret:
                row.append(report.posterior_regret[i])
            rows.append(row)
        if args.format == "csv":
            header = ["rank", "component", "voi", "voi_normalized", "posterior_loss"]
            if with_regret:
                header.append("posterior_regret")
            text = render_csv(header, rows)
        else:
            obj = {
                "metric": report.metric,
                "prior_loss": json_value(report.prior_loss),
                "best": names[report.best],
                "rows": [],
            }
            if with_regret:
                obj["prior_regret"] = json_value(report.prior_regret)
            if report.prior_plan is not None:
                obj["prior_plan"] = _plan_label(report.prior_plan, names)
            for row in rows:
                entry = {"rank": row[0], "component": row[1],
                         "voi": json_value(row[2]),
                         "voi_normalized": json_value(row[3]),
                         "posterior_loss": json_value(row[4])}
                if with_regret:
                    entry["posterior_regret"] = json_value(row[5])
                obj["rows"].append(entry)
            text = render_json(obj)
    else:
        report = importance_measures(net, dist, insp)
        values = report.values(args.metric)
        ranking = report.rankings[args.metric]
        rows = [(rank, names[i], values[i])
                for rank, i in enumerate(ranking, start=1)]
        if args.format == "csv":
            text = render_csv(("rank", "component", args.metric), rows)
        else:
            text = render_json({
                "metric": args.metric,
                "prior_failure": json_value(report.prior_failure),
                "rows": [
                    {"rank": rank, "component": name, args.metric: json_value(v)}
                    for rank, name, v in rows
                ],
            })
    _emit(text, args)
    return EXIT_OK


def _cmd_actions(args) -> int:
    doc, net, dist, insp = _load(args)
    table = posterior_action_table(net, dist, insp, doc.build_costs(), cap=args.cap)
    names = net.names
    rows = [
        (names[i], _plan_label(table.silence_plans[i], names),
         _plan_label(table.alarm_plans[i], names),
         table.silence_losses[i], table.alarm_losses[i])
        for i in range(net.n_components)
    ]
    if args.format == "csv":
        text = render_csv(
            ("component", "silence_plan", "alarm_plan", "silence_loss", "alarm_loss"),
            rows)
    else:
        text = render_json({
            "rows": [
                {"component": name, "silence_plan": sp, "alarm_plan": ap,
                 "silence_loss": json_value(sl), "alarm_loss": json_value(al)}
                for name, sp, ap, sl, al in rows
            ]
        })
    _emit(text, args)
    return EXIT_OK


def _cmd_plot(args) -> int:
    doc, net, dist, insp = _load(args)
    costs = doc.build_costs()
    series = [
        ("global", rank_global(net, dist, insp, doc.build_envelope()).voi_normalized),
        ("local", voi_local(net, dist, insp, costs, cap=args.cap).voi_normalized),
        ("heuristic", voi_heuristic(net, dist, insp, costs, cap=args.cap).voi_normalized),
    ]
    text = render_bar_chart_svg(net.names, series, title="normalized inspection value")
    _emit(text, args)
    return EXIT_OK


_COMMANDS = {
    "reliability": _cmd_reliability,
    "intervals": _cmd_intervals,
    "rank": _cmd_rank,
    "actions": _cmd_actions,
    "plot": _cmd_plot,
}


def run_command(argv) -> int:
    """Run a CLI invocation and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except ScenarioError as exc:
        for problem in exc.errors:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_VALIDATION
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE_CAP
    except (NetvoiError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
