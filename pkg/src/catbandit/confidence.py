"""Confidence radii and the simplex optimization they feed.

The elimination tests compare linear functionals <x, mu_hat> of a category's
empirical mean vector against confidence margins proportional to ||x||_2.
Three radii appear: the per-arm Hoeffding radius, a radius valid for every
simplex weighting of one category simultaneously (``category_radius``), and
the analogue for descending-sorted mean vectors (``sorted_category_radius``).
All logarithms are natural.

The optimization problems are over the probability simplex:

* ``max_linear_minus_norm``: max <x, v> - c ||x||_2 (concave), solved by
  Frank-Wolfe with pairwise steps and exact line search;
* ``min_linear_plus_norm``: its mirror image;
* ``ratio_max``: max <x, d> / ||x||_2, which has a closed form.
"""
from __future__ import annotations

import math

import numpy as np

from .dominance import simplex_sample

__all__ = [
    "hoeffding_radius",
    "category_radius",
    "sorted_category_radius",
    "sparse_activation_threshold",
    "max_linear_minus_norm",
    "min_linear_plus_norm",
    "ratio_max",
    "elimination_round_bound",
]


def _check_delta(delta: float) -> float:
    if not (0.0 < delta < 1.0):
        raise ValueError("delta must lie in (0, 1), got %r" % (delta,))
    return float(delta)


def hoeffding_radius(n: int, delta: float) -> float:
    """Two-sided deviation radius sqrt(2 log(1/delta) / n) for one arm mean."""
    _check_delta(delta)
    if n < 1:
        raise ValueError("n must be >= 1, got %r" % (n,))
    return math.sqrt(2.0 * math.log(1.0 / delta) / n)


def category_radius(rounds: int, delta: float, n_arms: int) -> float:
    """Radius r with <x, mu_hat - mu> <= ||x||_2 r for all simplex x at once,
    after ``rounds`` full sweeps of a K-armed category:
    sqrt((2/p) (K log 2 + log(1/delta)))."""
    _check_delta(delta)
    if rounds < 1:
        raise ValueError("rounds must be >= 1, got %r" % (rounds,))
    if n_arms < 1:
        raise ValueError("n_arms must be >= 1, got %r" % (n_arms,))
    return math.sqrt(2.0 / rounds * (n_arms * math.log(2.0) + math.log(1.0 / delta)))


def sorted_category_radius(rounds: int, delta: float, n_arms: int) -> float:
    """l2 deviation radius for the descending-sorted empirical mean vector:
    (1/sqrt(2p)) (sqrt(K log(1/delta)) + sqrt(1 + (K+1) log K)).

    Sorting is a contraction in distribution up to the order-statistics term
    sqrt(1 + (K+1) log K), which degenerates to 1 when K = 1.
    """
    _check_delta(delta)
    if rounds < 1:
        raise ValueError("rounds must be >= 1, got %r" % (rounds,))
    if n_arms < 1:
        raise ValueError("n_arms must be >= 1, got %r" % (n_arms,))
    main = math.sqrt(n_arms * math.log(1.0 / delta))
    order_term = math.sqrt(1.0 + (n_arms + 1) * math.log(n_arms))
    return (main + order_term) / math.sqrt(2.0 * rounds)


def sparse_activation_threshold(n: int) -> float:
    """Activation level 2 sqrt(log n / n) an arm's empirical mean must clear
    after n pulls; 0 at n = 1."""
    if n < 1:
        raise ValueError("n must be >= 1, got %r" % (n,))
    return 2.0 * math.sqrt(math.log(n) / n)


def _line_search(a: float, xd: float, xx: float, gmax: float, c: float):
    """Maximize gamma -> gamma*a - c*sqrt(xx + 2*gamma*xd + 2*gamma^2) on
    [0, gmax].  The direction has squared norm 2 (difference of two
    vertices).  Returns the best step."""
    if c == 0.0:
        return gmax if a > 0 else 0.0
    dd = 2.0

    def val(g):
        return g * a - c * math.sqrt(max(xx + 2.0 * g * xd + dd * g * g, 0.0))

    # Stationary points satisfy a^2 q(g) = c^2 p(g)^2 with p = xd + g*dd.
    lead = a * a - c * c * dd
    A = dd * lead
    B = 2.0 * xd * lead
    C = a * a * xx - c * c * xd * xd
    cands = [gmax]
    if A != 0.0:
        disc = B * B - 4.0 * A * C
        if disc >= 0.0:
            root = math.sqrt(disc)
            for g in ((-B - root) / (2.0 * A), (-B + root) / (2.0 * A)):
                if 0.0 < g < gmax:
                    cands.append(g)
    elif B != 0.0:
        g = -C / B
        if 0.0 < g < gmax:
            cands.append(g)
    best = 0.0
    best_val = val(0.0)
    for g in cands:
        v = val(g)
        if v > best_val:
            best, best_val = g, v
    return best


def max_linear_minus_norm(v, c: float, max_iters: int = 2000, gap_tol: float = 1e-8):
    """Maximize <x, v> - c ||x||_2 over the probability simplex.

    Frank-Wolfe with pairwise steps: each iteration moves mass from the
    in-support coordinate with the worst gradient to the best one (the
    linear minimization oracle over the simplex is a vertex pick), with the
    step length chosen by exact line search.  Stops at ``max_iters`` or when
    the Frank-Wolfe duality gap certifies the value within ``gap_tol``.

    Returns (value, x).
    """
    v = np.asarray(v, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("v must be non-empty")
    if not np.all(np.isfinite(v)):
        raise ValueError("v must be finite")
    if c < 0:
        raise ValueError("c must be >= 0, got %r" % (c,))
    K = v.size
    if K == 1:
        return float(v[0] - c), np.ones(1)
    x = np.full(K, 1.0 / K)
    for _ in range(max_iters):
        nx = math.sqrt(float(x @ x))
        grad = v - (c / nx) * x
        gap = float(grad.max() - grad @ x)
        if gap <= gap_tol:
            break
        i = int(np.argmax(grad))
        support = np.flatnonzero(x > 0.0)
        j = int(support[np.argmin(grad[support])])
        if i == j:
            break
        step = _line_search(
            a=float(v[i] - v[j]),
            xd=float(x[i] - x[j]),
            xx=float(x @ x),
            gmax=float(x[j]),
            c=c,
        )
        if step <= 0.0:
            break
        x[i] += step
        x[j] -= step
        if x[j] < 1e-16:
            x[j] = 0.0
    x = np.maximum(x, 0.0)
    x /= x.sum()
    value = float(v @ x - c * math.sqrt(float(x @ x)))
    return value, x


def min_linear_plus_norm(v, c: float, max_iters: int = 2000, gap_tol: float = 1e-8):
    """Minimize <y, v> + c ||y||_2 over the simplex, by sign flip of
    ``max_linear_minus_norm``.  Returns (value, y)."""
    v = np.asarray(v, dtype=float)
    value, y = max_linear_minus_norm(-v, c, max_iters=max_iters, gap_tol=gap_tol)
    return -value, y


def ratio_max(d) -> float:
    """Maximize <x, d> / ||x||_2 over the simplex.

    Closed form: ||max(d, 0)||_2 when some coordinate is non-negative
    (weights proportional to the positive part), otherwise the largest
    coordinate (attained at a vertex).  Returns 0 for d = 0.
    """
    d = np.asarray(d, dtype=float).ravel()
    if d.size == 0:
        raise ValueError("d must be non-empty")
    top = float(d.max())
    if top <= 0.0:
        return 0.0 if top == 0.0 else top
    pos = np.maximum(d, 0.0)
    return float(math.sqrt(pos @ pos))


def elimination_round_bound(mu_a, mu_b, delta: float, n_random: int = 200, rng=None) -> float:
    """Round count after which the strong-dominance test separates two
    categories with true means ``mu_a`` above ``mu_b``:

        8 (K log 2 + log(1/delta)) * min over simplex pairs of
            ((||x|| + ||y||) / (<x, mu_a> - <y, mu_b>))^2

    The minimum is taken over sampled pairs (all vertices plus ``n_random``
    Dirichlet draws per side), so the returned value is an upper bound on
    the optimized constant; refining the sample only lowers it.
    """
    _check_delta(delta)
    mu_a = np.asarray(mu_a, dtype=float).ravel()
    mu_b = np.asarray(mu_b, dtype=float).ravel()
    if mu_a.size != mu_b.size:
        raise ValueError("categories must have the same number of arms")
    K = mu_a.size
    xs = simplex_sample(K, n_random=n_random, rng=rng)
    ys = simplex_sample(K, n_random=n_random, rng=rng)
    margins = (xs @ mu_a)[:, None] - (ys @ mu_b)[None, :]
    norms = np.linalg.norm(xs, axis=1)[:, None] + np.linalg.norm(ys, axis=1)[None, :]
    ok = margins > 0
    if not ok.any():
        raise ValueError("no separating simplex pair: mu_a does not exceed mu_b anywhere")
    ratios_sq = (norms[ok] / margins[ok]) ** 2
    return 8.0 * (K * math.log(2.0) + math.log(1.0 / delta)) * float(ratios_sq.min())
