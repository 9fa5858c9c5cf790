"""Lower-bound constants.

The strong-case verifier brute-forces the allocation problem behind the
formula: minimize the regret rate sum(n * gap) over exploration allocations
subject to the information constraints that (a) each suboptimal arm of the
dominant category is tested (n * gap^2 >= 2) and (b) each dominated category
accumulates enough evidence against the cheapest confusing alternative,
which must raise all of its means to the optimum (sum_k n_k gap_k^2 >= 2).
"""
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catbandit.dominance import DominanceOrder
from catbandit.lower_bounds import (
    c_mu_first_order_2x2,
    c_mu_for_order,
    c_mu_group_sparse,
    c_mu_strong,
    check_intertwined,
)
from catbandit.model import MeanMatrix
from catbandit.scenarios import get_scenario


# --- brute-force allocation oracle (strong dominance, M=2) ------------------

def brute_force_strong_2cat(values: np.ndarray, n_dirs: int = 200_000, seed: int = 0) -> float:
    """Cheapest feasible allocation cost for a 2-category strong instance.

    The dominant-category part separates per arm: the cheapest feasible
    point is n_k = 2 / gap_k^2 exactly.  The dominated-category part is
    min sum(n gap) s.t. sum(n gap^2) >= 2: scan many directions on the
    boundary of that constraint (vertices included, where the optimum sits).
    """
    best = values.max()
    dom_gaps = best - values[0, 1:]
    cost = float(np.sum(2.0 / dom_gaps))
    sub_gaps = best - values[1]
    rng = np.random.default_rng(seed)
    dirs = np.vstack([np.eye(values.shape[1]), rng.dirichlet(np.ones(values.shape[1]), n_dirs)])
    scale = 2.0 / (dirs @ sub_gaps**2)          # stretch to the constraint boundary
    costs = scale * (dirs @ sub_gaps)
    return cost + float(costs.min())


def random_strong_instance(rng) -> np.ndarray:
    k = int(rng.integers(2, 5))
    top = np.sort(rng.uniform(1.0, 3.0, size=k))[::-1]
    top[0] += 0.3                               # unique best arm
    bottom = np.sort(rng.uniform(-2.0, top.min(), size=k))[::-1]
    return np.vstack([top, bottom])


def test_brute_force_confirms_strong_formula_on_random_instances():
    rng = np.random.default_rng(17)
    for _ in range(20):
        values = random_strong_instance(rng)
        got = c_mu_strong(values).c_mu
        ref = brute_force_strong_2cat(values)
        assert got == pytest.approx(ref, rel=0.01)


# --- frozen scenario constants ----------------------------------------------

def test_sparse_2x2_constant():
    res = c_mu_group_sparse(get_scenario("sparse-2x2").mean_matrix())
    assert res.c_mu == pytest.approx(4.0, abs=1e-12)
    assert res.rho is None


def test_strong_2x2_constant():
    res = c_mu_strong(get_scenario("strong-2x2").mean_matrix())
    assert res.c_mu == pytest.approx(3.0, abs=1e-12)
    assert [v for _, v in res.terms] == pytest.approx([2.0, 1.0])


def test_strong_5x5_constant():
    res = c_mu_strong(get_scenario("sparse-strong-5x5").mean_matrix())
    assert res.c_mu == pytest.approx(18.0, abs=1e-12)


def test_first_order_2x2_constant():
    res = c_mu_first_order_2x2(get_scenario("fosd-2x2").mean_matrix())
    assert res.rho == pytest.approx(10.0 / 26.0, abs=1e-15)
    assert res.c_mu == pytest.approx(3.9384615384615382, abs=1e-9)
    # itemized: 2/1 + 2/5 + rho * 2/0.5
    assert res.c_mu == pytest.approx(2.0 + 0.4 + (10.0 / 26.0) * 4.0, abs=1e-12)


def test_terms_sum_to_constant():
    for name in ("sparse-2x2", "strong-2x2", "sparse-strong-5x5"):
        sc = get_scenario(name)
        for fn in (c_mu_group_sparse, c_mu_strong):
            # sparse-2x2 has a tied worst arm, which c_mu_strong warns about
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", UserWarning)
                try:
                    res = fn(sc.mean_matrix())
                except ValueError:
                    continue
            assert res.c_mu == pytest.approx(sum(v for _, v in res.terms))


# --- applicability and errors -----------------------------------------------

def test_group_sparse_rejects_non_sparse_instance():
    with pytest.raises(ValueError):
        c_mu_group_sparse([[2.0, 1.0], [1.0, 0.0]])


def test_check_dominance_off_skips_validation():
    res = c_mu_group_sparse([[2.0, 1.0], [1.0, 0.0]], check_dominance=False)
    assert res.c_mu == pytest.approx(2.0)  # only the dominant-category arm term


def test_strong_warns_on_tied_worst_arm():
    with pytest.warns(UserWarning):
        c_mu_strong([[3.0, 2.0], [1.0, 1.0]])


def test_check_intertwined():
    assert check_intertwined([[5.0, 4.0], [4.5, 0.0]])
    assert not check_intertwined([[5.0, 4.0], [5.5, 0.0]])
    assert not check_intertwined([[5.0, 4.0, 3.0], [4.5, 0.0, -1.0]])


def test_first_order_requires_intertwined_2x2():
    with pytest.raises(ValueError):
        c_mu_first_order_2x2([[2.0, 1.0], [1.0, 0.0]])  # not intertwined
    with pytest.raises(ValueError):
        c_mu_first_order_2x2([[2.0, 1.0, 0.0], [1.0, 0.0, -1.0]])


def test_c_mu_for_order_returns_none_when_inapplicable():
    strong = get_scenario("strong-2x2").mean_matrix()
    assert c_mu_for_order(strong, DominanceOrder.GROUP_SPARSE) is None
    assert c_mu_for_order(strong, DominanceOrder.STRONG) == pytest.approx(3.0)
    fosd5 = get_scenario("fosd-5x10").mean_matrix()
    assert c_mu_for_order(fosd5, DominanceOrder.FIRST_ORDER) is None  # not 2x2


# --- structural properties ---------------------------------------------------

@given(st.floats(min_value=0.1, max_value=10.0))
@settings(max_examples=60, deadline=None)
def test_scale_covariance(lam):
    base = np.array([[2.0, 1.0], [1.0, 0.0]])
    ref = c_mu_strong(base).c_mu
    scaled = c_mu_strong(base * lam).c_mu
    assert scaled == pytest.approx(ref / lam, rel=1e-9)


@given(st.floats(min_value=0.1, max_value=10.0))
@settings(max_examples=60, deadline=None)
def test_scale_covariance_first_order(lam):
    base = np.array([[5.0, 4.0], [4.5, 0.0]])
    ref = c_mu_first_order_2x2(base)
    scaled = c_mu_first_order_2x2(base * lam)
    assert scaled.c_mu == pytest.approx(ref.c_mu / lam, rel=1e-9)
    assert scaled.rho == pytest.approx(ref.rho, rel=1e-9)  # rho is scale-free


def test_first_order_bound_never_exceeds_unstructured():
    # rho <= 1, so the damped constant is at most the flat-bandit sum 2/gap
    rng = np.random.default_rng(23)
    for _ in range(50):
        vals = np.sort(rng.uniform(-1, 5, size=4))[::-1]
        arr = np.array([[vals[0], vals[2]], [vals[1], vals[3]]])
        if not check_intertwined(arr):
            continue
        res = c_mu_first_order_2x2(arr)
        flat = sum(2.0 / (arr.max() - x) for x in (arr[0, 1], arr[1, 0], arr[1, 1]))
        assert res.c_mu <= flat + 1e-9


def test_group_sparse_constant_below_strong():
    # the strong bound adds non-negative terms for the dominated categories
    vals = np.array([[0.7, 0.2, 0.0], [0.0, -0.5, -1.0]])
    assert c_mu_group_sparse(vals).c_mu <= c_mu_strong(vals).c_mu
