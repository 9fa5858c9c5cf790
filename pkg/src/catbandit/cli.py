"""Command-line front end.

Subcommands:

* ``run``             simulate policies on a scenario or instance file and
                      write the aggregate trace CSV;
* ``scenarios``       list the built-in instances;
* ``lower-bound``     print the dominance lower-bound constant of an
                      instance file;
* ``check-dominance`` print the index of the dominating category, if any.

Instance files are JSON: {"means": [[...], ...], "label": "..."}.
"""
from __future__ import annotations

import argparse
import sys

from .dominance import DominanceOrder, find_dominating_category
from .harness import ExperimentConfig, run_experiment, write_csv
from .lower_bounds import c_mu_first_order_2x2, c_mu_group_sparse, c_mu_strong
from .model import load_instance
from .policies import DeltaSchedule, PolicyConfig, PolicyKind
from .scenarios import SCENARIOS, get_scenario

_ORDERS = {o.value: o for o in DominanceOrder}
_SCHEDULES = ("1/t", "1/mt", "1/mkt2")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="catbandit", description="Categorized bandit simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate policies and write a trace CSV")
    source = run.add_mutually_exclusive_group(required=True)
    source.add_argument("--scenario", choices=sorted(SCENARIOS), help="built-in instance")
    source.add_argument("--instance", help="instance JSON file")
    run.add_argument(
        "--policy",
        action="append",
        required=True,
        choices=[k.value for k in PolicyKind],
        help="policy to run (repeatable)",
    )
    run.add_argument("--order", choices=sorted(_ORDERS), help="dominance order for catse/murphy/minmax")
    run.add_argument("--delta-schedule", choices=_SCHEDULES + ("fixed",), help="confidence schedule override")
    run.add_argument("--delta", type=float, help="delta for the fixed schedule")
    run.add_argument("--potential-sampling", action="store_true", help="weighted sampling when no arm is active")
    run.add_argument("--horizon", type=int, default=10_000)
    run.add_argument("--runs", type=int, default=100)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--jobs", type=int, default=1)
    run.add_argument("--out", required=True, help="output CSV path")

    sub.add_parser("scenarios", help="list built-in scenarios")

    lb = sub.add_parser("lower-bound", help="print the lower-bound constant of an instance")
    lb.add_argument("instance", help="instance JSON file")
    lb.add_argument("--order", required=True, choices=sorted(_ORDERS))

    dom = sub.add_parser("check-dominance", help="print the dominating category of an instance")
    dom.add_argument("instance", help="instance JSON file")
    dom.add_argument("--order", required=True, choices=sorted(_ORDERS))
    return parser


def _schedule_from_args(args) -> DeltaSchedule | None:
    if args.delta_schedule is None:
        if args.delta is not None:
            raise ValueError("--delta requires --delta-schedule fixed")
        return None
    if args.delta_schedule == "fixed":
        if args.delta is None:
            raise ValueError("--delta-schedule fixed requires --delta")
        return DeltaSchedule("fixed", args.delta)
    if args.delta is not None:
        raise ValueError("--delta only applies to the fixed schedule")
    return DeltaSchedule(args.delta_schedule)


def _policy_configs(args, default_order: DominanceOrder | None) -> tuple[PolicyConfig, ...]:
    order = _ORDERS[args.order] if args.order else default_order
    schedule = _schedule_from_args(args)
    configs = []
    for name in args.policy:
        kind = PolicyKind(name)
        needs_order = kind in (PolicyKind.CATSE, PolicyKind.MURPHY)
        if needs_order and order is None:
            raise ValueError("%s needs --order (no scenario default available)" % name)
        configs.append(
            PolicyConfig(
                kind=kind,
                order=order if needs_order or kind is PolicyKind.MINMAX else None,
                delta_schedule=schedule,
                use_potential_sampling=(
                    args.potential_sampling
                    and kind is PolicyKind.CATSE
                    and order is DominanceOrder.GROUP_SPARSE
                ),
            )
        )
    return tuple(configs)


def _cmd_run(args) -> int:
    if args.scenario:
        scenario = get_scenario(args.scenario)
        means = scenario.mean_matrix()
        default_order = scenario.order
        label = scenario.name
    else:
        means = load_instance(args.instance)
        default_order = None
        label = means.label or args.instance
    config = ExperimentConfig(
        means=means,
        policies=_policy_configs(args, default_order),
        horizon=args.horizon,
        runs=args.runs,
        base_seed=args.seed,
        scenario=label,
        jobs=args.jobs,
    )
    aggregate = run_experiment(config)
    write_csv(aggregate, args.out)
    for entry in aggregate.policies:
        line = "%-16s final mean regret %10.2f" % (entry.label, entry.final_mean_regret())
        if not (entry.final_ratio() != entry.final_ratio()):  # not NaN
            line += "   ratio to c*log(T) %6.3f" % entry.final_ratio()
        print(line)
    print("wrote %s" % args.out)
    return 0


def _cmd_scenarios() -> int:
    for name in sorted(SCENARIOS):
        s = SCENARIOS[name]
        print("%-20s %dx%-3d order=%-6s means=%s" % (name, len(s.means), len(s.means[0]), s.order.value, list(map(list, s.means))))
    return 0


def _cmd_lower_bound(args) -> int:
    means = load_instance(args.instance)
    order = _ORDERS[args.order]
    if order is DominanceOrder.GROUP_SPARSE:
        result = c_mu_group_sparse(means)
    elif order is DominanceOrder.STRONG:
        result = c_mu_strong(means)
    else:
        result = c_mu_first_order_2x2(means)
    print("c_mu = %.12g" % result.c_mu)
    for label, value in result.terms:
        print("  %-32s %.12g" % (label, value))
    if result.rho is not None:
        print("  rho = %.12g" % result.rho)
    return 0


def _cmd_check_dominance(args) -> int:
    means = load_instance(args.instance)
    dom = find_dominating_category(means, _ORDERS[args.order])
    print("none" if dom is None else dom)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "scenarios":
            return _cmd_scenarios()
        if args.command == "lower-bound":
            return _cmd_lower_bound(args)
        return _cmd_check_dominance(args)
    except (ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
