"""Dominance relations between categories of arms.

A category is identified with the uniform distribution over its arm means.
Three nested notions of one category dominating another are implemented,
from strongest to weakest:

* group-sparse: the dominant category is non-negative with a positive arm,
  every other category is non-positive;
* strong: the worst arm of the dominant category beats the best arm of the
  other;
* first-order: the dominant category's empirical CDF is everywhere at or
  below the other's (stochastic dominance).

Comparisons use a small relative tolerance so instances sitting exactly on
a boundary behave deterministically under floating point.
"""
from __future__ import annotations

import enum

import numpy as np

__all__ = [
    "DominanceOrder",
    "group_sparse_dominates",
    "strongly_dominates",
    "first_order_dominates",
    "strong_simplex_check",
    "first_order_simplex_check",
    "find_dominating_category",
    "simplex_sample",
]

REL_TOL = 1e-12


class DominanceOrder(enum.Enum):
    GROUP_SPARSE = "sparse"
    STRONG = "strong"
    FIRST_ORDER = "first"


def _tol(*values: float) -> float:
    scale = 1.0
    for v in values:
        a = abs(v)
        if a > scale:
            scale = a
    return REL_TOL * scale


def _ge(x: float, y: float) -> bool:
    return x >= y - _tol(x, y)


def _gt(x: float, y: float) -> bool:
    return x > y + _tol(x, y)


def group_sparse_dominates(a, b, strict_chain: bool = True) -> bool:
    """True when ``a`` group-sparse dominates ``b``.

    Default is the chained inequality max(a) > min(a) >= 0 >= max(b).  With
    ``strict_chain=False`` the first comparison is replaced by max(a) > 0
    ("all non-negative, at least one positive"), which differs only when
    ``a`` is constant.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    amax, amin, bmax = float(a.max()), float(a.min()), float(b.max())
    head = _gt(amax, amin) if strict_chain else _gt(amax, 0.0)
    return head and _ge(amin, 0.0) and _ge(0.0, bmax)


def strongly_dominates(a, b) -> bool:
    """True when every arm of ``a`` is at least every arm of ``b``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return _ge(float(a.min()), float(b.max()))


def first_order_dominates(a, b) -> bool:
    """First-order stochastic dominance of uniform(a) over uniform(b).

    Checks sup_x F_a(x) - F_b(x) <= 0 at every jump point, so the two sides
    may have different sizes.  For equal sizes this is the same as comparing
    the sorted vectors elementwise.
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.size == 0 or b.size == 0:
        raise ValueError("categories must be non-empty")
    # Both CDFs are right-continuous steps; the sup of their difference is
    # attained at one of the pooled support points.
    points = np.concatenate([a, b])
    tol = REL_TOL * max(1.0, float(np.abs(points).max()))
    fa = (a[None, :] <= points[:, None] + tol).mean(axis=1)
    fb = (b[None, :] <= points[:, None] + tol).mean(axis=1)
    return bool(np.all(fa <= fb + REL_TOL))


def simplex_sample(n_arms: int, n_random: int = 200, rng=None) -> np.ndarray:
    """Sample of simplex points: all vertices plus ``n_random`` uniform
    (flat Dirichlet) draws.  Rows sum to 1."""
    if rng is None:
        rng = np.random.default_rng(0)
    vertices = np.eye(n_arms)
    if n_random <= 0:
        return vertices
    random_part = rng.dirichlet(np.ones(n_arms), size=n_random)
    return np.vstack([vertices, random_part])


def strong_simplex_check(a, b, grid: tuple[np.ndarray, np.ndarray] | None = None, rng=None) -> bool:
    """Strong dominance probed through simplex weightings.

    True when <x, a> >= <y, b> for every pair (x, y) of the grid; ``grid``
    defaults to (vertices + 200 Dirichlet samples) on each side.  Vertices
    alone are decisive, so with the default grid this agrees exactly with
    ``strongly_dominates``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if grid is None:
        xs = simplex_sample(a.size, rng=rng)
        ys = simplex_sample(b.size, rng=rng)
    else:
        xs, ys = grid
    lo = float((xs @ a).min())
    hi = float((ys @ b).max())
    return _ge(lo, hi)


def first_order_simplex_check(a, b, grid: np.ndarray | None = None, rng=None) -> bool:
    """First-order dominance probed through simplex weightings of the
    sorted vectors: <x, sorted(a)> >= <x, sorted(b)> for every grid x.
    Requires equal sizes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size != b.size:
        raise ValueError("simplex form needs equal category sizes")
    if grid is None:
        grid = simplex_sample(a.size, rng=rng)
    a_sorted = np.sort(a)[::-1]
    b_sorted = np.sort(b)[::-1]
    diff = grid @ (a_sorted - b_sorted)
    worst = float(diff.min())
    return _ge(worst, 0.0)


def find_dominating_category(means, order: DominanceOrder, strict_chain: bool = True):
    """Index of a category dominating all others under ``order``, or None.

    When one exists it contains the globally maximal mean; ties are broken
    toward the lowest index.
    """
    arr = means.values if hasattr(means, "values") else np.asarray(means, dtype=float)
    if order is DominanceOrder.GROUP_SPARSE:
        def dominates(x, y):
            return group_sparse_dominates(x, y, strict_chain=strict_chain)
    elif order is DominanceOrder.STRONG:
        dominates = strongly_dominates
    elif order is DominanceOrder.FIRST_ORDER:
        dominates = first_order_dominates
    else:
        raise ValueError("unknown dominance order: %r" % (order,))
    for m in range(arr.shape[0]):
        if all(dominates(arr[m], arr[n]) for n in range(arr.shape[0]) if n != m):
            return m
    return None
