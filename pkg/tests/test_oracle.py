"""Monte Carlo estimators and the brute-force reference."""

import numpy as np
import pytest

from netvoi import (PERFECT_INSPECTION, FormulaTree, Independent, InspectionModel,
                    LocalCostModel, Network, SimulationConfig, SizeCapError,
                    brute_force_plan_risks, mc_system_failure, mc_voi_local,
                    plan_losses, series, system_failure_prob, voi_local)

from conftest import make_crossed_pair, make_substation, make_three_branch


def test_single_component_estimate():
    net = Network(FormulaTree(series(0)))
    dist = Independent([0.3])
    est, se = mc_system_failure(net, dist, SimulationConfig(100_000, seed=1))
    assert abs(est - 0.3) <= 3 * se
    assert abs(est - 0.3) < 0.01


def test_crossed_pair_estimate():
    net, dist = make_crossed_pair()
    exact = system_failure_prob(net, dist)
    est, se = mc_system_failure(net, dist, SimulationConfig(200_000, seed=7))
    assert abs(est - exact) <= 3 * se


def test_three_branch_estimate_large_budget():
    net = make_three_branch()
    dist = Independent([0.1, 0.4, 0.2, 0.5, 0.3, 0.6])
    est, se = mc_system_failure(net, dist, SimulationConfig(1_000_000, seed=17))
    assert abs(est - 0.19872) <= 3 * se


def test_substation_estimate_with_groups():
    net, dist = make_substation(rho_ds=0.0)
    exact = system_failure_prob(net, dist)
    est, se = mc_system_failure(net, dist, SimulationConfig(400_000, seed=3))
    assert abs(est - exact) <= 3 * se


def test_fixed_seed_reproducibility():
    net = make_three_branch()
    dist = Independent([0.1, 0.4, 0.2, 0.5, 0.3, 0.6])
    cfg = SimulationConfig(50_000, seed=11)
    assert mc_system_failure(net, dist, cfg) == mc_system_failure(net, dist, cfg)
    other = SimulationConfig(50_000, seed=12)
    assert mc_system_failure(net, dist, cfg) != mc_system_failure(net, dist, other)


def test_error_shrinks_with_sample_size():
    net = Network(FormulaTree(series(0)))
    dist = Independent([0.3])

    def mean_abs_error(n):
        errors = [abs(mc_system_failure(net, dist,
                                        SimulationConfig(n, seed=s))[0] - 0.3)
                  for s in range(20)]
        return float(np.mean(errors))

    errors = [mean_abs_error(n) for n in (1_000, 10_000, 100_000, 1_000_000)]
    assert errors[0] > errors[2]
    assert errors[1] > errors[3]


def test_mc_voi_deterministic_component_is_zero():
    net = Network(FormulaTree(series(0, 1)))
    dist = Independent([1.0, 0.4])
    costs = LocalCostModel.uniform(2, 1.0, 0.1)
    est, se = mc_voi_local(net, dist, PERFECT_INSPECTION, costs, 0,
                           SimulationConfig(5_000, seed=5))
    assert est == pytest.approx(0.0, abs=1e-12)
    assert se == pytest.approx(0.0, abs=1e-12)


def test_mc_voi_matches_exact_three_branch():
    net = make_three_branch()
    dist = Independent([0.1, 0.4, 0.2, 0.5, 0.3, 0.6])
    costs = LocalCostModel.uniform(6, 1.0, 0.1)
    exact = voi_local(net, dist, PERFECT_INSPECTION, costs).voi[1]
    est, se = mc_voi_local(net, dist, PERFECT_INSPECTION, costs, 1,
                           SimulationConfig(100_000, seed=2))
    assert abs(est - exact) <= 3 * se
    assert abs(est - exact) < 0.01


def test_mc_voi_uninformative_inspection_near_zero():
    net = make_three_branch()
    dist = Independent([0.1, 0.4, 0.2, 0.5, 0.3, 0.6])
    costs = LocalCostModel.uniform(6, 1.0, 0.1)
    nearly_blind = InspectionModel(0.4999, 0.4999)
    est, se = mc_voi_local(net, dist, nearly_blind, costs, 1,
                           SimulationConfig(50_000, seed=9))
    assert abs(est) <= max(3 * se, 1e-4)


def test_brute_force_single_component():
    net = Network(FormulaTree(series(0)))
    dist = Independent([0.25])
    costs = LocalCostModel(1.0, (0.4,))
    losses = brute_force_plan_risks(net, dist, costs)
    assert losses[0] == pytest.approx(0.25)
    assert losses[1] == pytest.approx(0.4)


def test_brute_force_empty_plan_row():
    net = make_three_branch()
    dist = Independent([0.1, 0.4, 0.2, 0.5, 0.3, 0.6])
    costs = LocalCostModel.uniform(6, 1.0, 0.1)
    losses = brute_force_plan_risks(net, dist, costs)
    assert losses[0] == pytest.approx(system_failure_prob(net, dist), abs=1e-12)
    assert np.allclose(losses, plan_losses(net, dist, costs), atol=1e-12)


def test_brute_force_cap():
    net = Network(FormulaTree(series(*range(13))), cap=13)
    dist = Independent([0.1] * 13)
    with pytest.raises(SizeCapError):
        brute_force_plan_risks(net, dist, LocalCostModel.uniform(13, 1.0, 0.1))
