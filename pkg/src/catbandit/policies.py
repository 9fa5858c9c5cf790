"""Sampling policies over categorized arms.

All policies share one interface: ``select(t, history)`` returns the arm
(category, arm) to pull at time step t, ``observe`` is told the outcome.
The run loop owns the initialization phase (each arm pulled once, in
category-major order), so ``select`` may assume every count is positive.
Deterministic ties break toward the lowest (category, arm) pair.

Policies:

* ``ucb``     flat UCB over all M*K arms;
* ``ts``      Thompson sampling from per-arm Gaussian posteriors;
* ``uct``     two-level UCB: pick a category by its aggregate mean, then an
              arm inside it;
* ``catse``   successive elimination of categories under a dominance order,
              then UCB inside the survivor;
* ``minmax``  per-step category filtering by min/max confidence indices,
              specialized to strong dominance;
* ``murphy``  Thompson sampling conditioned on the dominance hypothesis via
              rejection sampling.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .confidence import (
    category_radius,
    max_linear_minus_norm,
    min_linear_plus_norm,
    ratio_max,
    sorted_category_radius,
)
from .dominance import DominanceOrder
from .model import History

__all__ = [
    "PolicyKind",
    "DeltaSchedule",
    "PolicyConfig",
    "Posterior",
    "Policy",
    "make_policy",
    "ts_select",
    "murphy_sample",
    "potential_weights",
    "active_set_group_sparse",
    "active_set_strong",
    "active_set_first_order",
    "UcbPolicy",
    "ThompsonPolicy",
    "TwoLevelUcbPolicy",
    "SuccessiveEliminationPolicy",
    "MinMaxUcbPolicy",
    "MurphySamplingPolicy",
]


class PolicyKind(enum.Enum):
    UCB = "ucb"
    TS = "ts"
    UCT = "uct"
    CATSE = "catse"
    MINMAX = "minmax"
    MURPHY = "murphy"


@dataclass(frozen=True)
class DeltaSchedule:
    """Confidence level fed to the radii at time t.

    Kinds: "fixed" (constant ``delta``), "1/t", "1/mt" (1 over M*t), and
    "1/mkt2" (1 over 2*M*K*T^2 at the run's horizon T).
    """

    kind: str
    delta: float | None = None

    _KINDS = ("fixed", "1/t", "1/mt", "1/mkt2")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError("unknown schedule %r, expected one of %s" % (self.kind, ", ".join(self._KINDS)))
        if self.kind == "fixed":
            if self.delta is None or not (0.0 < self.delta < 1.0):
                raise ValueError("fixed schedule needs delta in (0, 1)")
        elif self.delta is not None:
            raise ValueError("schedule %r takes no delta" % self.kind)

    def at(self, t: int, n_categories: int, n_arms: int, horizon: int) -> float:
        if self.kind == "fixed":
            return float(self.delta)
        if self.kind == "1/t":
            return 1.0 / t
        if self.kind == "1/mt":
            return 1.0 / (n_categories * t)
        return 1.0 / (2.0 * n_categories * n_arms * horizon * horizon)


def _default_schedule(kind: PolicyKind, order: DominanceOrder | None) -> DeltaSchedule:
    if kind is PolicyKind.CATSE and order is DominanceOrder.GROUP_SPARSE:
        return DeltaSchedule("1/t")
    if kind in (PolicyKind.CATSE, PolicyKind.MINMAX):
        return DeltaSchedule("1/mt")
    return DeltaSchedule("1/t")


@dataclass(frozen=True)
class PolicyConfig:
    """Everything needed to build a policy, minus instance shape and seed.

    ``order`` is required for catse and murphy, optional for minmax (which
    is a strong-dominance method; the order only labels its regret ratio),
    and meaningless for the baselines.  ``delta_schedule`` of None picks the
    per-kind default: 1/t for group-sparse catse and ucb, 1/mt for catse
    under the other orders and for minmax.
    """

    kind: PolicyKind
    order: DominanceOrder | None = None
    delta_schedule: DeltaSchedule | None = None
    use_potential_sampling: bool = False
    hsparse_bonus: bool = False
    label: str | None = None

    def __post_init__(self):
        if self.kind in (PolicyKind.CATSE, PolicyKind.MURPHY):
            if self.order is None:
                raise ValueError("%s requires a dominance order" % self.kind.value)
        elif self.kind is not PolicyKind.MINMAX and self.order is not None:
            raise ValueError("%s does not take a dominance order" % self.kind.value)
        if self.use_potential_sampling and not (
            self.kind is PolicyKind.CATSE and self.order is DominanceOrder.GROUP_SPARSE
        ):
            raise ValueError("potential sampling only applies to group-sparse catse")

    def effective_order(self) -> DominanceOrder | None:
        if self.kind is PolicyKind.MINMAX and self.order is None:
            return DominanceOrder.STRONG
        return self.order

    def schedule(self) -> DeltaSchedule:
        return self.delta_schedule or _default_schedule(self.kind, self.order)

    def resolved_label(self) -> str:
        if self.label:
            return self.label
        if self.kind in (PolicyKind.CATSE, PolicyKind.MURPHY):
            return "%s-%s" % (self.kind.value, self.order.value)
        return self.kind.value


@dataclass(frozen=True)
class Posterior:
    """Per-arm Gaussian beliefs: mean = empirical mean, variance = 1/count."""

    mean: np.ndarray
    variance: np.ndarray

    @classmethod
    def from_history(cls, history: History) -> "Posterior":
        if (history.counts <= 0).any():
            raise ValueError("posterior needs at least one pull of every arm")
        return cls(mean=history.sums / history.counts, variance=1.0 / history.counts)


def _argmax_cell(values: np.ndarray) -> tuple[int, int]:
    # row-major argmax = lowest (category, arm) on ties
    flat = int(np.argmax(values))
    return flat // values.shape[1], flat % values.shape[1]


def ts_select(posterior: Posterior, rng) -> tuple[int, int]:
    """One Thompson draw: sample every arm's posterior, pick the argmax."""
    theta = posterior.mean + np.sqrt(posterior.variance) * rng.standard_normal(posterior.mean.shape)
    return _argmax_cell(theta)


def _batch_has_dominator(theta: np.ndarray, order: DominanceOrder) -> np.ndarray:
    """Boolean mask over a (B, M, K) batch: does a category dominate all
    others under ``order``?  Continuous draws make ties null events, so the
    dominator (if any) is the category holding the sample's maximal entry."""
    B, M, K = theta.shape
    if M == 1:
        return np.ones(B, dtype=bool)
    if order is DominanceOrder.GROUP_SPARSE:
        all_nonneg = (theta >= 0.0).all(axis=2)
        any_pos = (theta > 0.0).any(axis=2)
        all_nonpos = (theta <= 0.0).all(axis=2)
        n_nonpos = all_nonpos.sum(axis=1)
        others_nonpos = n_nonpos[:, None] - all_nonpos.astype(int)
        candidate = all_nonneg & any_pos & (others_nonpos == M - 1)
        return candidate.any(axis=1)
    if order is DominanceOrder.STRONG:
        mins = theta.min(axis=2)
        maxs = theta.max(axis=2)
        top = np.argmax(maxs, axis=1)
        rows = np.arange(B)
        masked = maxs.copy()
        masked[rows, top] = -np.inf
        runner_up = masked.max(axis=1)
        return mins[rows, top] >= runner_up
    if order is DominanceOrder.FIRST_ORDER:
        s = -np.sort(-theta, axis=2)
        top = np.argmax(s[:, :, 0], axis=1)
        best_rows = s[np.arange(B), top]
        return (best_rows[:, None, :] >= s).all(axis=(1, 2))
    raise ValueError("unknown dominance order: %r" % (order,))


def murphy_sample(
    posterior: Posterior,
    order: DominanceOrder | None,
    rng,
    max_proposals: int = 10_000,
    info: dict | None = None,
) -> tuple[int, int]:
    """Thompson draw conditioned on the dominance hypothesis.

    Proposals from the unconditioned posterior are rejected until one admits
    a dominating category under ``order`` (None means unconditioned: the
    first draw is returned, making this coincide with ``ts_select``).  The
    first proposal is drawn alone, later ones in growing batches, so the
    conditioned and unconditioned samplers consume the generator in the
    same way on an accepted first draw.  After ``max_proposals`` rejections
    the last (unconditioned) proposal is used and the fallback is recorded
    in ``info``.
    """
    mean, std = posterior.mean, np.sqrt(posterior.variance)
    drawn = 0
    batch = 1
    theta = None
    while drawn < max_proposals:
        size = min(batch, max_proposals - drawn)
        theta = mean + std * rng.standard_normal((size,) + mean.shape)
        drawn += size
        if order is None:
            accepted = 0
        else:
            mask = _batch_has_dominator(theta, order)
            hits = np.flatnonzero(mask)
            if hits.size == 0:
                batch = 16 if batch == 1 else min(batch * 4, 4096)
                continue
            accepted = int(hits[0])
        if info is not None:
            info["proposals"] = info.get("proposals", 0) + drawn - (size - accepted - 1)
            info["fallback"] = info.get("fallback", 0)
        return _argmax_cell(theta[accepted])
    if info is not None:
        info["proposals"] = info.get("proposals", 0) + drawn
        info["fallback"] = info.get("fallback", 0) + 1
    return _argmax_cell(theta[-1])


def _sparse_active_arms(counts: np.ndarray, means: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        thresholds = 2.0 * np.sqrt(np.log(counts) / counts)
    return means >= thresholds


def active_set_group_sparse(history: History) -> np.ndarray:
    """Boolean mask of categories owning at least one active arm: an arm is
    active when its empirical mean clears 2 sqrt(log n / n)."""
    if (history.counts <= 0).any():
        raise ValueError("active set needs at least one pull of every arm")
    means = history.sums / history.counts
    return _sparse_active_arms(history.counts, means).any(axis=1)


def _strong_doomed(means: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """Mask of rows beaten in the strong-dominance test: row i falls when
    some row j's pessimistic best mean exceeds row i's optimistic worst.
    ``radii`` holds one confidence radius per row."""
    n = means.shape[0]
    upper = np.array([max_linear_minus_norm(means[j], float(radii[j]))[0] for j in range(n)])
    lower = np.array([min_linear_plus_norm(means[i], float(radii[i]))[0] for i in range(n)])
    doomed = np.zeros(n, dtype=bool)
    for i in range(n):
        doomed[i] = any(upper[j] > lower[i] for j in range(n) if j != i)
    return doomed


def _first_order_doomed(means: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """Mask of rows beaten in the first-order test: row i falls when some
    row j's sorted means beat row i's by more than the two radii in the
    worst simplex direction."""
    n = means.shape[0]
    sorted_means = -np.sort(-means, axis=1)
    doomed = np.zeros(n, dtype=bool)
    for i in range(n):
        doomed[i] = any(
            ratio_max(sorted_means[j] - sorted_means[i]) > radii[j] + radii[i]
            for j in range(n) if j != i
        )
    return doomed


def _round_counts(history: History) -> np.ndarray:
    counts = history.counts
    if (counts <= 0).any():
        raise ValueError("active set needs at least one pull of every arm")
    return counts.min(axis=1)


def active_set_strong(history: History, delta: float) -> np.ndarray:
    """Boolean mask of categories surviving the strong-dominance test at
    the current round counts (per-category completed sweeps)."""
    rounds = _round_counts(history)
    means = history.sums / history.counts
    K = means.shape[1]
    radii = np.array([category_radius(int(p), delta, K) for p in rounds])
    return ~_strong_doomed(means, radii)


def active_set_first_order(history: History, delta: float) -> np.ndarray:
    """Boolean mask of categories surviving the first-order test on sorted
    empirical means at the current round counts."""
    rounds = _round_counts(history)
    means = history.sums / history.counts
    K = means.shape[1]
    radii = np.array([sorted_category_radius(int(p), delta, K) for p in rounds])
    return ~_first_order_doomed(means, radii)


def potential_weights(history: History) -> np.ndarray:
    """Sampling weights over arms when no arm clears its activation level:
    proportional to 1 / (threshold - empirical mean)^2, so arms closer to
    activating are tried more.  Raises if any arm is already active."""
    counts = history.counts
    if (counts <= 0).any():
        raise ValueError("potential weights need at least one pull of every arm")
    means = history.sums / counts
    with np.errstate(divide="ignore"):
        thresholds = 2.0 * np.sqrt(np.log(counts) / counts)
    margins = thresholds - means
    if (margins <= 0.0).any():
        raise ValueError("an arm is active; potential weights are undefined")
    weights = margins ** -2.0
    return weights / weights.sum()


class Policy:
    """Shared state: config, instance shape, rng, round-robin cursor."""

    def __init__(self, config: PolicyConfig, n_categories: int, n_arms: int, horizon: int, seed: int):
        self.config = config
        self.M = n_categories
        self.K = n_arms
        self.horizon = horizon
        self.rng = np.random.default_rng(seed)
        self._schedule = config.schedule()
        self._cursor = self.M * self.K - 1
        # safety instrumentation (tests): true means and the true dominant
        # category, to count eliminations that the confidence radii cannot
        # excuse
        self._true_means = None
        self._true_dominant = None
        self.unsafe_eliminations = 0

    # -- interface -------------------------------------------------------
    def select(self, t: int, history: History) -> tuple[int, int]:
        raise NotImplementedError

    def observe(self, category: int, arm: int, reward: float) -> None:
        pass

    def diagnostics(self) -> dict:
        return {"unsafe_eliminations": self.unsafe_eliminations}

    def attach_safety_probe(self, true_means: np.ndarray, dominant_category: int) -> None:
        self._true_means = np.asarray(true_means, dtype=float)
        self._true_dominant = int(dominant_category)

    # -- helpers ---------------------------------------------------------
    def _delta(self, t: int) -> float:
        return self._schedule.at(t, self.M, self.K, self.horizon)

    def _ucb_bonus(self, t: int, counts) -> np.ndarray:
        if self.config.hsparse_bonus:
            return 2.0 * np.sqrt(np.log(t) / counts)
        return np.sqrt(2.0 * math.log(1.0 / self._delta(t)) / counts)

    def _ucb_within(self, t: int, history: History, category: int) -> tuple[int, int]:
        counts = history.counts[category]
        means = history.sums[category] / counts
        return category, int(np.argmax(means + self._ucb_bonus(t, counts)))

    def _next_round_robin(self, eligible_categories) -> tuple[int, int]:
        # fixed category-major cycle over all arms, skipping ineligible
        # categories; eligible_categories of None means everything
        n = self.M * self.K
        for _ in range(n):
            self._cursor = (self._cursor + 1) % n
            m = self._cursor // self.K
            if eligible_categories is None or eligible_categories[m]:
                return m, self._cursor % self.K
        raise RuntimeError("no eligible category for round-robin")


class UcbPolicy(Policy):
    """Flat UCB over all arms: empirical mean plus Hoeffding radius."""

    def select(self, t: int, history: History) -> tuple[int, int]:
        means = history.sums / history.counts
        return _argmax_cell(means + self._ucb_bonus(t, history.counts))


class ThompsonPolicy(Policy):
    def select(self, t: int, history: History) -> tuple[int, int]:
        return ts_select(Posterior.from_history(history), self.rng)


class TwoLevelUcbPolicy(Policy):
    """Category chosen by UCB on its aggregate reward, then UCB inside.

    Both levels use the sqrt(2 log t / n) bonus.  Aggregating a category
    through the average of all its rewards is what makes this a tree-search
    baseline rather than a dominance-aware method.
    """

    def select(self, t: int, history: History) -> tuple[int, int]:
        cat_counts = history.counts.sum(axis=1)
        cat_means = history.sums.sum(axis=1) / cat_counts
        bonus = np.sqrt(2.0 * math.log(t) / cat_counts)
        m = int(np.argmax(cat_means + bonus))
        counts = history.counts[m]
        means = history.sums[m] / counts
        k = int(np.argmax(means + np.sqrt(2.0 * math.log(t) / counts)))
        return m, k


class SuccessiveEliminationPolicy(Policy):
    """Category elimination under a dominance order ("catse").

    Group-sparse: an arm is active when its mean clears the activation
    threshold; the set of categories owning an active arm is recomputed
    every step.  No active arm -> round-robin over everything (or potential
    sampling); one active category -> UCB inside it; several -> round-robin
    over their arms.

    Strong / first-order: arms of the surviving categories are swept in
    round-robin; when a sweep completes, a pairwise statistical test
    eliminates categories whose best possible mean is below another's worst
    plausible one.  One survivor -> UCB inside it from then on.
    """

    def __init__(self, config, n_categories, n_arms, horizon, seed):
        super().__init__(config, n_categories, n_arms, horizon, seed)
        self.order = config.order
        self._remaining = np.ones(self.M, dtype=bool)
        self._sweep = [(m, k) for m in range(self.M) for k in range(self.K)]
        self._sweep_pos = len(self._sweep)  # init phase counts as round 1
        self._ucb_category = None
        self.eliminations: list[tuple[int, int]] = []  # (t, category)
        self.empty_active_times: list[int] = []
        self.resets = 0

    def diagnostics(self) -> dict:
        out = super().diagnostics()
        out.update(
            eliminations=list(self.eliminations),
            empty_active_times=list(self.empty_active_times),
            resets=self.resets,
        )
        return out

    # -- group-sparse ----------------------------------------------------
    def _select_sparse(self, t: int, history: History) -> tuple[int, int]:
        means = history.sums / history.counts
        active = _sparse_active_arms(history.counts, means).any(axis=1)
        n_active = int(active.sum())
        if n_active == 1:
            return self._ucb_within(t, history, int(np.argmax(active)))
        if n_active > 1:
            return self._next_round_robin(active)
        self.empty_active_times.append(t)
        if self.config.use_potential_sampling:
            weights = potential_weights(history)
            flat = int(self.rng.choice(weights.size, p=weights.ravel()))
            return flat // self.K, flat % self.K
        return self._next_round_robin(None)

    # -- strong / first-order -------------------------------------------
    def _round_test(self, t: int, history: History) -> None:
        remaining = np.flatnonzero(self._remaining)
        delta = self._delta(t)
        p = int(history.counts[remaining].min())
        means = history.sums[remaining] / history.counts[remaining]
        radii = np.full(remaining.size, self._test_radius(p, delta))
        if self.order is DominanceOrder.STRONG:
            doomed = _strong_doomed(means, radii)
        else:
            doomed = _first_order_doomed(means, radii)
        for i in np.flatnonzero(doomed):
            m = int(remaining[i])
            self.eliminations.append((t, m))
            if m == self._true_dominant and self._clean_event_holds(means, remaining, p, delta):
                self.unsafe_eliminations += 1
            self._remaining[m] = False
        if not self._remaining.any():
            self._remaining[:] = True
            self.resets += 1
        survivors = np.flatnonzero(self._remaining)
        if survivors.size == 1:
            self._ucb_category = int(survivors[0])
        self._sweep = [(int(m), k) for m in survivors for k in range(self.K)]
        self._sweep_pos = 0

    def _test_radius(self, p: int, delta: float) -> float:
        if self.order is DominanceOrder.STRONG:
            return category_radius(p, delta, self.K)
        return sorted_category_radius(p, delta, self.K)

    def _clean_event_holds(self, means, remaining, p, delta) -> bool:
        true = self._true_means[remaining]
        radius = self._test_radius(p, delta)
        if self.order is DominanceOrder.STRONG:
            dev = np.linalg.norm(means - true, axis=1)
        else:
            dev = np.linalg.norm(-np.sort(-means, axis=1) - true, axis=1)
        return bool((dev <= radius).all())

    def _select_eliminating(self, t: int, history: History) -> tuple[int, int]:
        if self._ucb_category is not None:
            return self._ucb_within(t, history, self._ucb_category)
        if self._sweep_pos >= len(self._sweep):
            self._round_test(t, history)
            if self._ucb_category is not None:
                return self._ucb_within(t, history, self._ucb_category)
        m, k = self._sweep[self._sweep_pos]
        self._sweep_pos += 1
        return m, k

    def select(self, t: int, history: History) -> tuple[int, int]:
        if self.order is DominanceOrder.GROUP_SPARSE:
            return self._select_sparse(t, history)
        return self._select_eliminating(t, history)


class MinMaxUcbPolicy(Policy):
    """Strong-dominance filtering by per-arm confidence indices.

    Every step, each category gets an optimistic floor (its best lower
    index) and a pessimistic ceiling (its worst upper index); categories
    whose ceiling sits below another's floor cannot dominate and are set
    aside this step.  Dispatch on the survivors mirrors ``catse``.
    """

    def __init__(self, config, n_categories, n_arms, horizon, seed):
        super().__init__(config, n_categories, n_arms, horizon, seed)
        self.dominant_excluded_steps = 0

    def diagnostics(self) -> dict:
        out = super().diagnostics()
        out["dominant_excluded_steps"] = self.dominant_excluded_steps
        return out

    def select(self, t: int, history: History) -> tuple[int, int]:
        delta = self._delta(t)
        counts = history.counts
        means = history.sums / counts
        radii = np.sqrt(2.0 * math.log(1.0 / delta) / counts)
        floor = (means - radii).max(axis=1)
        ceiling = (means + radii).min(axis=1)
        if self.M == 1:
            active = np.ones(1, dtype=bool)
        else:
            top = int(np.argmax(floor))
            others = np.full(self.M, floor[top])
            masked = floor.copy()
            masked[top] = -np.inf
            others[top] = masked.max()
            active = others <= ceiling
        if self._true_dominant is not None and not active[self._true_dominant]:
            self.dominant_excluded_steps += 1
            if np.all(np.abs(means - self._true_means) <= radii):
                self.unsafe_eliminations += 1
        n_active = int(active.sum())
        if n_active == 1:
            return self._ucb_within(t, history, int(np.argmax(active)))
        return self._next_round_robin(active if n_active > 1 else None)


class MurphySamplingPolicy(Policy):
    """Thompson sampling conditioned on the dominance hypothesis."""

    def __init__(self, config, n_categories, n_arms, horizon, seed):
        super().__init__(config, n_categories, n_arms, horizon, seed)
        self.order = config.order
        self.sampler_info = {"proposals": 0, "fallback": 0}

    def diagnostics(self) -> dict:
        out = super().diagnostics()
        out.update(self.sampler_info)
        return out

    def select(self, t: int, history: History) -> tuple[int, int]:
        posterior = Posterior.from_history(history)
        return murphy_sample(posterior, self.order, self.rng, info=self.sampler_info)


_POLICY_CLASSES = {
    PolicyKind.UCB: UcbPolicy,
    PolicyKind.TS: ThompsonPolicy,
    PolicyKind.UCT: TwoLevelUcbPolicy,
    PolicyKind.CATSE: SuccessiveEliminationPolicy,
    PolicyKind.MINMAX: MinMaxUcbPolicy,
    PolicyKind.MURPHY: MurphySamplingPolicy,
}


def make_policy(config: PolicyConfig, n_categories: int, n_arms: int, horizon: int, seed: int) -> Policy:
    return _POLICY_CLASSES[config.kind](config, n_categories, n_arms, horizon, seed)
