"""Simulation harness: episodes, repeated experiments, CSV export.

Seeding: every run r derives an environment seed and one policy seed per
policy from (base_seed, r) through a splitmix64 mix, so runs are mutually
independent, adding runs or policies never perturbs existing ones, and the
whole experiment is reproducible from (config, base_seed) alone.  All
policies see the same environment stream within a run (common random
numbers).  Aggregation reduces runs in index order, so parallel execution
(``jobs``) is bit-identical to serial.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dominance import find_dominating_category
from .lower_bounds import c_mu_for_order
from .model import Environment, GapTable, History, MeanMatrix, RegretTrace, gaps, make_environment
from .policies import Policy, PolicyConfig, make_policy

__all__ = [
    "ExperimentConfig",
    "PolicyAggregate",
    "AggregateTrace",
    "default_checkpoints",
    "derive_seed",
    "run_episode",
    "run_experiment",
    "write_csv",
]

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15  # splitmix64 increment


def _splitmix64(z: int) -> int:
    z = (z + _GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_seed(base_seed: int, *path: int) -> int:
    """Mix a base seed with a path of indices (run, stream, ...) into an
    independent 64-bit seed.  Stream 0 is the environment, stream i+1 is
    policy i."""
    s = _splitmix64(base_seed & _MASK64)
    for p in path:
        s = _splitmix64(s ^ (((p + 1) * _GAMMA) & _MASK64))
    return s


def default_checkpoints(horizon: int, n_points: int = 100) -> tuple[int, ...]:
    """Around ``n_points`` log-spaced integer times in [1, horizon]."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    pts = np.unique(np.round(np.logspace(0.0, math.log10(horizon), n_points)).astype(np.int64))
    return tuple(int(t) for t in pts if 1 <= t <= horizon)


@dataclass(frozen=True)
class ExperimentConfig:
    means: MeanMatrix
    policies: tuple[PolicyConfig, ...]
    horizon: int
    runs: int
    base_seed: int
    scenario: str = ""
    checkpoints: tuple[int, ...] | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.horizon < 1 or self.runs < 1:
            raise ValueError("horizon and runs must be >= 1")
        if not self.policies:
            raise ValueError("at least one policy is required")
        labels = [p.resolved_label() for p in self.policies]
        if len(set(labels)) != len(labels):
            raise ValueError("policy labels collide: %r" % (labels,))

    def resolved_checkpoints(self) -> tuple[int, ...]:
        return self.checkpoints or default_checkpoints(self.horizon)


def run_episode(policy: Policy, env: Environment, horizon: int, checkpoints) -> RegretTrace:
    """One run: init phase pulling every arm once in category-major order,
    then the policy loop up to the horizon.  The trace samples cumulative
    pseudo-regret at the checkpoint times."""
    M, K = env.means.shape
    gap_table = gaps(env.means)
    history = History(M, K)
    checkpoints = tuple(checkpoints)
    values = np.zeros(len(checkpoints))
    regret = 0.0
    cp_iter = iter(enumerate(checkpoints))
    next_idx, next_cp = next(cp_iter, (None, None))
    for t in range(1, horizon + 1):
        if t <= M * K:
            m, k = (t - 1) // K, (t - 1) % K
        else:
            m, k = policy.select(t, history)
        reward = env.pull(m, k)
        history.record(m, k, reward)
        policy.observe(m, k, reward)
        regret += gap_table.values[m, k]
        while next_cp is not None and t == next_cp:
            values[next_idx] = regret
            next_idx, next_cp = next(cp_iter, (None, None))
    return RegretTrace(times=np.asarray(checkpoints, dtype=np.int64), values=values)


@dataclass(frozen=True)
class PolicyAggregate:
    label: str
    order_name: str
    mean: np.ndarray
    std: np.ndarray
    ratio: np.ndarray  # NaN where the lower-bound normalization is undefined
    diagnostics: tuple[dict, ...]  # one per run

    def final_mean_regret(self) -> float:
        return float(self.mean[-1])

    def final_ratio(self) -> float:
        return float(self.ratio[-1])


@dataclass(frozen=True)
class AggregateTrace:
    scenario: str
    times: np.ndarray
    policies: tuple[PolicyAggregate, ...]

    def policy(self, label: str) -> PolicyAggregate:
        for entry in self.policies:
            if entry.label == label:
                return entry
        raise KeyError(label)


def _one_run(config: ExperimentConfig, policy_index: int, run_index: int, instrument: bool):
    means = config.means
    M, K = means.shape
    pconf = config.policies[policy_index]
    env = make_environment(means, derive_seed(config.base_seed, run_index, 0))
    policy = make_policy(pconf, M, K, config.horizon, derive_seed(config.base_seed, run_index, policy_index + 1))
    if instrument:
        order = pconf.effective_order()
        dom = find_dominating_category(means, order) if order is not None else None
        if dom is not None:
            policy.attach_safety_probe(means.values, dom)
    trace = run_episode(policy, env, config.horizon, config.resolved_checkpoints())
    return trace.values, policy.diagnostics()


def run_experiment(config: ExperimentConfig, instrument_safety: bool = False) -> AggregateTrace:
    """Repeat every policy over ``runs`` seeded episodes and aggregate.

    Returns per-policy mean and standard deviation of pseudo-regret at the
    checkpoints, plus the ratio to the dominance lower bound c * log(t)
    where the policy's order admits one on this instance (NaN elsewhere).
    With ``instrument_safety`` policies are told the true means so their
    diagnostics can flag eliminations not excused by the confidence radii.
    """
    times = np.asarray(config.resolved_checkpoints(), dtype=np.int64)
    tasks = [(i, r) for i in range(len(config.policies)) for r in range(config.runs)]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(
                pool.map(_run_star, ((config, i, r, instrument_safety) for i, r in tasks), chunksize=4)
            )
    else:
        outcomes = [_one_run(config, i, r, instrument_safety) for i, r in tasks]
    entries = []
    log_t = np.log(np.maximum(times, 1))
    for i, pconf in enumerate(config.policies):
        rows = outcomes[i * config.runs:(i + 1) * config.runs]
        stack = np.vstack([values for values, _ in rows])
        diag = tuple(d for _, d in rows)
        mean = stack.mean(axis=0)
        std = stack.std(axis=0)
        order = pconf.effective_order()
        c_mu = c_mu_for_order(config.means, order) if order is not None else None
        ratio = np.full(times.shape, np.nan)
        if c_mu is not None and c_mu > 0:
            defined = times >= 2
            ratio[defined] = mean[defined] / (c_mu * log_t[defined])
        entries.append(
            PolicyAggregate(
                label=pconf.resolved_label(),
                order_name=order.value if order is not None else "",
                mean=mean,
                std=std,
                ratio=ratio,
                diagnostics=diag,
            )
        )
    return AggregateTrace(scenario=config.scenario or config.means.label, times=times, policies=tuple(entries))


def _run_star(args):
    return _one_run(*args)


CSV_HEADER = "scenario,policy,order,t,mean_regret,std_regret,ratio_to_lb"


def write_csv(aggregate: AggregateTrace, path) -> None:
    """Write the aggregate in the fixed schema, one row per (policy, t),
    policies in configuration order and t increasing.  Floats keep full
    precision; an undefined ratio is an empty cell.  UTF-8, LF endings."""
    lines = [CSV_HEADER]
    for entry in aggregate.policies:
        for idx, t in enumerate(aggregate.times):
            ratio = entry.ratio[idx]
            lines.append(
                "%s,%s,%s,%d,%s,%s,%s"
                % (
                    aggregate.scenario,
                    entry.label,
                    entry.order_name,
                    int(t),
                    repr(float(entry.mean[idx])),
                    repr(float(entry.std[idx])),
                    "" if math.isnan(ratio) else repr(float(ratio)),
                )
            )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
