"""Asymptotic regret lower-bound constants for dominated instances.

Each function returns the constant c such that any uniformly efficient
policy must incur regret at least c * log(T) asymptotically on the given
instance, together with the per-arm terms that make it up.  The constants
strengthen as the structural assumption weakens: knowing only first-order
dominance forces exploration of the suboptimal category's good arm that the
strong and group-sparse structures rule out.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .dominance import DominanceOrder, find_dominating_category
from .model import MeanMatrix

__all__ = [
    "LowerBoundResult",
    "c_mu_group_sparse",
    "c_mu_strong",
    "c_mu_first_order_2x2",
    "check_intertwined",
    "c_mu_for_order",
]


@dataclass(frozen=True)
class LowerBoundResult:
    """Lower-bound constant with its itemized per-arm contributions.

    ``c_mu`` always equals the sum of the term values; ``rho`` is the
    damping factor of the suboptimal category's best arm and is only set by
    the first-order 2x2 bound.
    """

    c_mu: float
    terms: tuple[tuple[str, float], ...]
    rho: float | None = None


def _as_values(means) -> np.ndarray:
    if isinstance(means, MeanMatrix):
        return means.values
    return MeanMatrix(means).values


def _dominant_terms(values: np.ndarray, dom: int) -> list[tuple[str, float]]:
    # 2 / gap for every suboptimal arm of the dominant category
    best = values[dom, 0]
    terms = []
    for k in range(1, values.shape[1]):
        gap = best - values[dom, k]
        if gap <= 0:
            raise ValueError("dominant category needs a unique best arm")
        terms.append(("category %d arm %d" % (dom, k), 2.0 / gap))
    return terms


def c_mu_group_sparse(means, check_dominance: bool = True) -> LowerBoundResult:
    """Lower-bound constant under group-sparse dominance:
    sum over the dominant category's suboptimal arms of 2 / gap."""
    values = _as_values(means)
    if check_dominance:
        dom = find_dominating_category(values, DominanceOrder.GROUP_SPARSE)
        if dom is None:
            raise ValueError("instance does not satisfy group-sparse dominance")
    else:
        dom = int(np.argmax(values[:, 0]))
    terms = _dominant_terms(values, dom)
    return LowerBoundResult(c_mu=float(sum(v for _, v in terms)), terms=tuple(terms))


def c_mu_strong(means, check_dominance: bool = True) -> LowerBoundResult:
    """Lower-bound constant under strong dominance: the group-sparse terms
    plus, for every dominated category, 2 / gap of its worst arm.

    A dominated category with a tied worst arm is accepted with a warning;
    the literal minimum is used.
    """
    values = _as_values(means)
    if check_dominance:
        dom = find_dominating_category(values, DominanceOrder.STRONG)
        if dom is None:
            raise ValueError("instance does not satisfy strong dominance")
    else:
        dom = int(np.argmax(values[:, 0]))
    best = values[dom, 0]
    terms = _dominant_terms(values, dom)
    K = values.shape[1]
    for m in range(values.shape[0]):
        if m == dom:
            continue
        if K > 1 and values[m, K - 1] == values[m, K - 2]:
            warnings.warn("category %d has a non-unique worst arm; using the literal minimum" % m)
        gap = best - values[m, K - 1]
        if gap <= 0:
            raise ValueError("dominated category %d reaches the optimal mean" % m)
        terms.append(("category %d arm %d" % (m, K - 1), 2.0 / gap))
    return LowerBoundResult(c_mu=float(sum(v for _, v in terms)), terms=tuple(terms))


def check_intertwined(means) -> bool:
    """True for a 2x2 instance whose means interleave across categories:
    best of 1 > best of 2 > second of 1 > second of 2."""
    values = _as_values(means)
    if values.shape != (2, 2):
        return False
    return values[0, 0] > values[1, 0] > values[0, 1] > values[1, 1]


def c_mu_first_order_2x2(means, check_dominance: bool = True) -> LowerBoundResult:
    """Lower-bound constant under first-order dominance for intertwined 2x2
    instances.  On top of the per-arm terms 2 / gap for both arms that no
    structure can excuse, the suboptimal category's best arm contributes a
    damped term

        (2 / gap) * (1 - (g22 - g12)^2 / (g12^2 + g22^2))

    where g12, g22 are the gaps of the two bottom arms: confusing instances
    can move several means at once, so that arm cannot be fully exonerated.
    """
    values = _as_values(means)
    if values.shape != (2, 2):
        raise ValueError("first-order closed form requires a 2x2 instance")
    if check_dominance and not check_intertwined(values):
        raise ValueError("instance is not intertwined (mu11 > mu21 > mu12 > mu22)")
    best = values[0, 0]
    g12 = best - values[0, 1]
    g21 = best - values[1, 0]
    g22 = best - values[1, 1]
    if min(g12, g21, g22) <= 0:
        raise ValueError("gaps must be positive")
    rho = 1.0 - (g22 - g12) ** 2 / (g12 ** 2 + g22 ** 2)
    terms = (
        ("category 0 arm 1", 2.0 / g12),
        ("category 1 arm 1", 2.0 / g22),
        ("category 1 arm 0 (damped by rho)", rho * 2.0 / g21),
    )
    return LowerBoundResult(c_mu=float(sum(v for _, v in terms)), terms=terms, rho=float(rho))


def c_mu_for_order(means, order: DominanceOrder) -> float | None:
    """Constant for normalizing regret curves, or None when the formula for
    ``order`` does not apply to this instance (no error: callers leave the
    ratio blank)."""
    try:
        if order is DominanceOrder.GROUP_SPARSE:
            return c_mu_group_sparse(means).c_mu
        if order is DominanceOrder.STRONG:
            return c_mu_strong(means).c_mu
        if order is DominanceOrder.FIRST_ORDER:
            return c_mu_first_order_2x2(means).c_mu
    except ValueError:
        return None
    raise ValueError("unknown dominance order: %r" % (order,))
