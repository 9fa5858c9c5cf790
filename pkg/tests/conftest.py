"""Shared brute-force oracles used across test modules.

The solver oracles are deliberately independent of the library: a dense
simplex grid and a scalar bisection, either of which pins the optimal value
of max <x, v> - c ||x||_2 without any Frank-Wolfe machinery.
"""
import functools

import numpy as np


def simplex_grid(n_arms: int, step: float = 0.01) -> np.ndarray:
    """Every probability vector with coordinates that are multiples of
    ``step`` (compositions of 1/step).  Sizes: 101 (K=2), 5151 (K=3),
    176851 (K=4)."""
    units = int(round(1.0 / step))
    if n_arms == 1:
        return np.ones((1, 1))
    ranges = [np.arange(units + 1)] * (n_arms - 1)
    mesh = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(-1, n_arms - 1)
    mask = mesh.sum(axis=1) <= units
    head = mesh[mask]
    last = units - head.sum(axis=1, keepdims=True)
    return np.hstack([head, last]).astype(float) / units


@functools.lru_cache(maxsize=8)
def cached_grid(n_arms: int, step: float = 0.01):
    grid = simplex_grid(n_arms, step)
    return grid, np.linalg.norm(grid, axis=1)


def grid_max_linear_minus_norm(v, c: float, step: float = 0.01) -> float:
    v = np.asarray(v, dtype=float)
    grid, norms = cached_grid(v.size, step)
    return float(np.max(grid @ v - c * norms))


def grid_min_linear_plus_norm(v, c: float, step: float = 0.01) -> float:
    v = np.asarray(v, dtype=float)
    grid, norms = cached_grid(v.size, step)
    return float(np.min(grid @ v + c * norms))


def grid_ratio_max(d, step: float = 0.01) -> float:
    d = np.asarray(d, dtype=float)
    grid, norms = cached_grid(d.size, step)
    return float(np.max((grid @ d) / norms))


def waterfill_max_linear_minus_norm(v, c: float) -> float:
    """Exact optimum of max_x <x, v> - c ||x||_2 over the simplex.

    KKT: the maximizer is x* proportional to (v - lam)_+ where lam solves
    ||(v - lam)_+||_2 = c, and the optimal value equals lam.  The norm is
    continuous and strictly decreasing in lam on (-inf, max v), so bisection
    pins lam to machine precision.
    """
    v = np.asarray(v, dtype=float)
    if c == 0.0:
        return float(v.max())
    lo = float(v.min()) - c - 1.0
    hi = float(v.max())
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.linalg.norm(np.clip(v - mid, 0.0, None)) > c:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
