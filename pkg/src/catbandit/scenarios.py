"""Built-in benchmark instances.

Each scenario couples a mean matrix with the dominance order it is meant to
exercise and the index of the dominating category.  ``get_scenario``
re-checks the registered dominance before handing the instance out, so a
corrupted table fails fast instead of silently skewing an experiment.
"""
from __future__ import annotations

from dataclasses import dataclass

from .dominance import DominanceOrder, find_dominating_category
from .model import MeanMatrix

__all__ = ["Scenario", "SCENARIOS", "get_scenario", "scenario_names"]


@dataclass(frozen=True)
class Scenario:
    name: str
    means: tuple[tuple[float, ...], ...]
    order: DominanceOrder
    dominant: int = 0

    def mean_matrix(self) -> MeanMatrix:
        return MeanMatrix([list(row) for row in self.means], label=self.name)


_SPARSE_5x5_TOP = (1.0, 0.5, 0.5, 0.5, 0.0)
_SPARSE_5x5_REST = (0.0, -0.5, -0.5, -0.5, -1.0)
_FOSD_5x10_TOP = (5.0, 4.0, 4.0, 4.0, 4.0, 4.0, 3.0, 3.0, 3.0, 2.0)
_FOSD_5x10_REST = (4.5, 3.0, 3.0, 3.0, 3.0, 3.0, 3.0, 3.0, 3.0, 0.0)
_FOSD_5x5_TOP = (5.0, 4.0, 4.0, 4.0, 4.0)
_FOSD_5x5_REST = (4.5, 3.0, 3.0, 3.0, 0.0)

SCENARIOS: dict[str, Scenario] = {
    s.name: s
    for s in (
        Scenario("sparse-2x2", ((0.5, 0.0), (0.0, 0.0)), DominanceOrder.GROUP_SPARSE),
        Scenario("strong-2x2", ((2.0, 1.0), (1.0, 0.0)), DominanceOrder.STRONG),
        Scenario("fosd-2x2", ((5.0, 4.0), (4.5, 0.0)), DominanceOrder.FIRST_ORDER),
        Scenario(
            "sparse-strong-5x5",
            (_SPARSE_5x5_TOP,) + (_SPARSE_5x5_REST,) * 4,
            DominanceOrder.GROUP_SPARSE,
        ),
        Scenario(
            "fosd-5x10",
            (_FOSD_5x10_TOP,) + (_FOSD_5x10_REST,) * 4,
            DominanceOrder.FIRST_ORDER,
        ),
        Scenario(
            "fosd-5x5-appendix",
            (_FOSD_5x5_TOP,) + (_FOSD_5x5_REST,) * 4,
            DominanceOrder.FIRST_ORDER,
        ),
    )
}


def scenario_names() -> list[str]:
    return list(SCENARIOS)


def get_scenario(name: str) -> Scenario:
    try:
        scenario = SCENARIOS[name]
    except KeyError:
        raise ValueError("unknown scenario %r; choose from: %s" % (name, ", ".join(SCENARIOS))) from None
    found = find_dominating_category(scenario.mean_matrix(), scenario.order)
    if found != scenario.dominant:
        raise RuntimeError(
            "scenario %r is corrupted: category %r does not dominate under %s"
            % (name, scenario.dominant, scenario.order.value)
        )
    return scenario
