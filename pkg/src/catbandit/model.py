"""Instance model for categorized bandits.

An instance is an M x K table of true arm means: M categories, K arms per
category, rewards are the arm mean plus unit-variance Gaussian noise.  This
module holds the ground-truth containers (mean matrix, gap table), the reward
environment, the pull history consumed by every policy, and pseudo-regret.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MeanMatrix",
    "GapTable",
    "Environment",
    "History",
    "RegretTrace",
    "make_environment",
    "gaps",
    "pseudo_regret",
    "load_instance",
]


class MeanMatrix:
    """M x K table of true expected rewards, one row per category.

    Rows are stored sorted in non-increasing order of mean; the permutation
    applied to each row is kept so results can be reported against the
    caller's original arm indices.
    """

    def __init__(self, means, label: str = ""):
        arr = np.array(means, dtype=float)
        if arr.ndim != 2:
            raise ValueError("means must be a rectangular 2-D table, got ndim=%d" % arr.ndim)
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("means must have at least one category and one arm")
        if not np.all(np.isfinite(arr)):
            raise ValueError("means must be finite")
        # stable sort keeps tied arms in the caller's order
        perm = np.argsort(-arr, axis=1, kind="stable")
        self.values = np.take_along_axis(arr, perm, axis=1)
        self.sort_permutation = perm
        self.label = label

    @property
    def n_categories(self) -> int:
        return self.values.shape[0]

    @property
    def n_arms(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def best_entry(self) -> tuple[int, int]:
        """Position of the globally maximal mean (lowest category on ties).

        Arm index is 0 because rows are sorted non-increasing.
        """
        return int(np.argmax(self.values[:, 0])), 0

    def has_unique_optimum(self) -> bool:
        return int(np.sum(self.values == self.values.max())) == 1

    def __repr__(self):
        return "MeanMatrix(%r, label=%r)" % (self.values.tolist(), self.label)


@dataclass(frozen=True)
class GapTable:
    """Per-arm suboptimality gaps: global best mean minus each mean.

    ``degenerate`` is set when the instance has no unique optimum (the table
    is still returned, all-zero in the fully tied case).
    """

    values: np.ndarray
    degenerate: bool = False


def gaps(means: MeanMatrix) -> GapTable:
    """Gap table of an instance: entry (m, k) is max mean minus mean (m, k)."""
    table = means.values.max() - means.values
    return GapTable(values=table, degenerate=not means.has_unique_optimum())


class Environment:
    """Reward source: pulling arm (m, k) returns its mean plus Gaussian noise.

    ``noise_scale`` exists as a test hook (0 gives deterministic rewards);
    simulated rewards always use the default unit variance.
    """

    def __init__(self, means: MeanMatrix, seed: int, noise_scale: float = 1.0):
        self.means = means
        self.noise_scale = float(noise_scale)
        self._rng = np.random.default_rng(seed)

    def pull(self, category: int, arm: int) -> float:
        M, K = self.means.shape
        if not (0 <= category < M and 0 <= arm < K):
            raise IndexError("arm (%d, %d) out of range for %dx%d instance" % (category, arm, M, K))
        return float(self.means.values[category, arm] + self.noise_scale * self._rng.standard_normal())


def make_environment(means: MeanMatrix, seed: int, noise_scale: float = 1.0) -> Environment:
    """Build the reward environment for a simulation run.

    Rejects instances without a unique optimal arm ("no unique optimum"):
    regret and the lower bounds are defined against a strict best mean.
    """
    if not means.has_unique_optimum():
        raise ValueError("no unique optimum: the maximal mean appears more than once")
    return Environment(means, seed, noise_scale=noise_scale)


class History:
    """Pull counts and reward sums per arm; the statistic every policy reads."""

    def __init__(self, n_categories: int, n_arms: int):
        self.counts = np.zeros((n_categories, n_arms), dtype=np.int64)
        self.sums = np.zeros((n_categories, n_arms), dtype=float)
        self.t = 0

    def record(self, category: int, arm: int, reward: float) -> None:
        self.counts[category, arm] += 1
        self.sums[category, arm] += reward
        self.t += 1

    def empirical_means(self) -> np.ndarray:
        """Mean reward per arm; NaN where an arm has never been pulled."""
        out = np.full(self.counts.shape, np.nan)
        np.divide(self.sums, self.counts, out=out, where=self.counts > 0)
        return out

    def category_counts(self) -> np.ndarray:
        return self.counts.sum(axis=1)


@dataclass(frozen=True)
class RegretTrace:
    """Pseudo-regret sampled at increasing checkpoint times."""

    times: np.ndarray
    values: np.ndarray

    def final(self) -> float:
        return float(self.values[-1])


def pseudo_regret(gap_table: GapTable, history: History) -> float:
    """Expected regret of a history: sum over arms of gap times pull count."""
    return float(np.sum(gap_table.values * history.counts))


def load_instance(path) -> MeanMatrix:
    """Read an instance file: JSON object with "means" (list of equal-length
    rows) and an optional "label" string.  Raises ValueError with the reason
    on malformed input."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError("instance file is not valid JSON: %s" % exc) from exc
    if not isinstance(doc, dict) or "means" not in doc:
        raise ValueError('instance file must be a JSON object with a "means" key')
    means = doc["means"]
    if not isinstance(means, list) or not means or not all(isinstance(row, list) for row in means):
        raise ValueError('"means" must be a non-empty list of rows')
    widths = {len(row) for row in means}
    if len(widths) != 1 or widths == {0}:
        raise ValueError('"means" rows must be non-empty and of equal length')
    label = doc.get("label", "")
    if not isinstance(label, str):
        raise ValueError('"label" must be a string')
    return MeanMatrix(means, label=label)
