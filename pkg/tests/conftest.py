"""Shared fixtures: the worked example systems used throughout the suite."""

from pathlib import Path

import numpy as np
import pytest

from netvoi import (CommonCauseGroups, FormulaTree, Group, Independent,
                    LocalCostModel, Network, STGraph, parallel, series)

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


def scenario_path(name: str) -> str:
    return str(SCENARIO_DIR / name)


# ---------------------------------------------------------------- three-branch
# Six components in three parallel branches of two in series; component
# failure probabilities 0.1 .. 0.6 in index order.

THREE_BRANCH_PROBS = (0.1, 0.4, 0.2, 0.5, 0.3, 0.6)


def make_three_branch() -> Network:
    return Network(FormulaTree(parallel(series(0, 1), series(2, 3), series(4, 5))))


@pytest.fixture
def three_branch():
    return make_three_branch(), Independent(THREE_BRANCH_PROBS)


@pytest.fixture
def three_branch_costs():
    return LocalCostModel.uniform(6, 1.0, 0.1)


@pytest.fixture
def three_branch_alt_costs():
    # component c2 becomes twice as expensive to replace
    return LocalCostModel(1.0, (0.1, 0.2, 0.1, 0.1, 0.1, 0.1))


# ---------------------------------------------------------------- crossed pair
# Two monitored components (indices 0 and 1) embedded in a six-unit network
# whose posterior intervals cross: the reliable one spans [~0.009, ~0.20],
# the vulnerable one only [~0.005, ~0.034].

CROSSED_PAIR_PROBS = (0.01, 0.20, 0.005, 0.023, 0.023, 0.90)


def make_crossed_pair():
    structure = parallel(series(2, parallel(series(3, 0), series(4, 1))), 5)
    return Network(FormulaTree(structure)), Independent(CROSSED_PAIR_PROBS)


def crossed_pair_reference():
    """Independent enumeration of the crossed-pair system.

    Hand-rolled product pmf and connectivity predicate, kept free of the
    library so tests can cross-check it.
    """
    probs = CROSSED_PAIR_PROBS

    def works(mask):
        up = [(mask >> i) & 1 for i in range(6)]
        top = up[2] and ((up[3] and up[0]) or (up[4] and up[1]))
        return 1 if (top or up[5]) else 0

    pmf = np.empty(64)
    for mask in range(64):
        p = 1.0
        for i, q in enumerate(probs):
            p *= (1.0 - q) if (mask >> i) & 1 else q
        pmf[mask] = p
    return pmf, works


@pytest.fixture
def crossed_pair():
    return make_crossed_pair()


# ------------------------------------------------------------------- layered16
# Sixteen components in two parallel halves; c1/c4/c7 and c8/c16 are the
# chokepoints of their halves.

LAYERED16_EDGES = (
    ("o", "c1"), ("c1", "c2"), ("c1", "c3"), ("c2", "c4"), ("c3", "c4"),
    ("c4", "c5"), ("c4", "c6"), ("c5", "c7"), ("c6", "c7"), ("c7", "s"),
    ("o", "c8"), ("c8", "c9"), ("c8", "c10"), ("c9", "c11"), ("c9", "c12"),
    ("c10", "c12"), ("c10", "c13"), ("c11", "c14"), ("c12", "c14"),
    ("c12", "c15"), ("c13", "c15"), ("c14", "c16"), ("c15", "c16"),
    ("c16", "s"),
)


def make_layered16() -> Network:
    names = [f"c{i}" for i in range(1, 17)]
    return Network(STGraph(names, LAYERED16_EDGES), names=names)


# ------------------------------------------------------------------ substation
# Twelve-component double-line substation with a tie breaker between the
# lines and a cross link in the switch layer. Junction labels b1..b4 model
# the buses.

SUBSTATION_NAMES = ("DS1", "DS2", "DS3", "CB1", "CB2", "PT1", "PT2",
                    "DB1", "DB2", "TB", "FB1", "FB2")
SUBSTATION_EDGES = (
    ("o", "DS1"), ("o", "DS2"),
    ("DS1", "b1"), ("DS3", "b1"), ("b1", "CB1"),
    ("CB1", "PT1"), ("PT1", "DB1"), ("DB1", "b3"), ("b3", "FB1"), ("FB1", "s"),
    ("DS2", "b2"), ("DS3", "b2"), ("b2", "CB2"),
    ("CB2", "PT2"), ("PT2", "DB2"), ("DB2", "b4"), ("b4", "FB2"), ("FB2", "s"),
    ("TB", "b3"), ("TB", "b4"),
)
P_SWITCHGEAR = 9.53e-3
P_TRANSFORMER = 2.32e-3


def make_substation(rho_ds: float = 0.0):
    net = Network(STGraph(SUBSTATION_NAMES, SUBSTATION_EDGES),
                  names=SUBSTATION_NAMES)
    groups = [
        Group([0, 1, 2], P_SWITCHGEAR, rho_ds),
        Group([3, 4], P_SWITCHGEAR, 0.0),
        Group([5, 6], P_TRANSFORMER, 0.0),
        Group([7, 8], P_SWITCHGEAR, 0.0),
        Group([9], P_TRANSFORMER, 0.0),
        Group([10, 11], P_SWITCHGEAR, 0.0),
    ]
    return net, CommonCauseGroups(groups, n_components=12)


# ----------------------------------------------------------- random instances

def random_formula(rng: np.random.Generator, n: int):
    """Random series/parallel tree over components 0..n-1, each used once."""
    order = list(rng.permutation(n))

    def build(indices, make_series):
        if len(indices) == 1:
            return indices[0]
        k = 1 if len(indices) == 2 else int(rng.integers(1, len(indices) - 1))
        left = build(indices[:k], not make_series)
        right_parts = [left, build(indices[k:], not make_series)]
        return series(*right_parts) if make_series else parallel(*right_parts)

    return build(order, bool(rng.integers(2)))


def random_network(rng: np.random.Generator, n: int) -> Network:
    return Network(FormulaTree(random_formula(rng, n)))


def random_distribution(rng: np.random.Generator, n: int, lo=0.02, hi=0.98):
    """Random joint: independent, explicit, or shared-cause groups."""
    kind = rng.integers(3)
    if kind == 0:
        return Independent(rng.uniform(lo, hi, size=n))
    if kind == 1:
        w = rng.uniform(0.01, 1.0, size=1 << n)
        return dict_to_explicit(w)
    groups = []
    start = 0
    order = list(rng.permutation(n))
    while start < n:
        size = int(rng.integers(1, min(3, n - start) + 1))
        members = order[start:start + size]
        groups.append(Group(members, float(rng.uniform(lo, hi)),
                            float(rng.uniform(0.0, 0.9))))
        start += size
    return CommonCauseGroups(groups, n_components=n)


def dict_to_explicit(weights):
    from netvoi import Explicit
    w = np.asarray(weights, dtype=float)
    return Explicit(w / w.sum())
