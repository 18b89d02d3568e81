"""Plan optimization, local/heuristic inspection values, and pair policies."""

import numpy as np
import pytest

from netvoi import (PERFECT_INSPECTION, DegenerateObservationError, Explicit,
                    FormulaTree, Independent, InfeasibleCorrelationError,
                    InspectionModel, LocalCostModel, Network, NotApplicableError,
                    SizeCapError, apply_repairs, brute_force_plan_risks,
                    cumulative_approx_voi, optimal_plan, parallel,
                    plan_expected_loss, plan_losses, posterior_action_table,
                    series, series_pair_policy, system_failure_prob,
                    voi_heuristic, voi_local)

from conftest import (make_three_branch, random_distribution, random_network,
                      THREE_BRANCH_PROBS)


def plan_of(names_on, names):
    return sum(1 << names.index(x) for x in names_on)


def test_apply_repairs():
    assert apply_repairs(0b00, 0b11) == 0b11
    assert apply_repairs(0b01, 0b00) == 0b01
    assert apply_repairs(0b10, 0b01) == 0b11


def test_plan_expected_loss_edges():
    net = make_three_branch()
    dist = Independent(THREE_BRANCH_PROBS)
    costs = LocalCostModel.uniform(6, 1.0, 0.1)
    assert plan_expected_loss(net, dist, 0b111111, costs) == pytest.approx(0.6)
    assert plan_expected_loss(net, dist, 0, costs) == pytest.approx(
        system_failure_prob(net, dist))


def test_optimal_plan_three_branch():
    net = make_three_branch()
    dist = Independent(THREE_BRANCH_PROBS)
    plan, loss = optimal_plan(net, dist, LocalCostModel.uniform(6, 1.0, 0.1))
    assert plan == 0b000010  # replace the second component
    assert loss == pytest.approx(0.1432, abs=1e-12)
    alt = LocalCostModel(1.0, (0.1, 0.2, 0.1, 0.1, 0.1, 0.1))
    plan_alt, loss_alt = optimal_plan(net, dist, alt)
    assert plan_alt == 0b001000  # dearer second component shifts it to the fourth
    assert loss_alt == pytest.approx(0.16624, abs=1e-12)
    losses = plan_losses(net, dist, alt)
    assert loss_alt == pytest.approx(float(losses.min()), abs=1e-12)


def test_optimal_plan_free_repairs_lowest_mask():
    dist = Independent([0.3, 0.4])
    costs = LocalCostModel.uniform(2, 1.0, 0.0)
    par = Network(FormulaTree(parallel(0, 1)))
    assert optimal_plan(par, dist, costs) == (0b01, pytest.approx(0.0))
    srs = Network(FormulaTree(series(0, 1)))
    assert optimal_plan(srs, dist, costs) == (0b11, pytest.approx(0.0))


def test_optimal_plan_unaffordable_repairs():
    net = make_three_branch()
    dist = Independent(THREE_BRANCH_PROBS)
    costs = LocalCostModel.uniform(6, 1.0, 2.0)
    plan, loss = optimal_plan(net, dist, costs)
    assert plan == 0
    assert loss == pytest.approx(system_failure_prob(net, dist))


def test_optimal_plan_cap():
    net = make_three_branch()
    dist = Independent(THREE_BRANCH_PROBS)
    with pytest.raises(SizeCapError):
        optimal_plan(net, dist, LocalCostModel.uniform(6, 1.0, 0.1), cap=4)


def test_sweep_matches_brute_force():
    rng = np.random.default_rng(13)
    for _ in range(40):
        n = int(rng.integers(2, 7))
        net = random_network(rng, n)
        dist = random_distribution(rng, n)
        costs = LocalCostModel(float(rng.uniform(0.5, 2.0)),
                               rng.uniform(0.0, 0.5, size=n))
        assert np.allclose(plan_losses(net, dist, costs),
                           brute_force_plan_risks(net, dist, costs), atol=1e-12)


def test_posterior_action_table_three_branch_alt_costs():
    net = make_three_branch()
    dist = Independent(THREE_BRANCH_PROBS)
    costs = LocalCostModel(1.0, (0.1, 0.2, 0.1, 0.1, 0.1, 0.1))
    table = posterior_action_table(net, dist, PERFECT_INSPECTION, costs)
    names = [f"c{i}" for i in range(1, 7)]
    expected = {
        "c1": ({"c4"}, {"c3", "c4"}),
        "c2": (set(), {"c3", "c4"}),
        "c3": ({"c4"}, {"c3", "c4"}),
        "c4": (set(), {"c4"}),
        "c5": ({"c6"}, {"c4"}),
        "c6": (set(), {"c6"}),
    }
    for i, name in enumerate(names):
        silence = {names[j] for j in range(6) if (table.silence_plans[i] >> j) & 1}
        alarm = {names[j] for j in range(6) if (table.alarm_plans[i] >> j) & 1}
        assert (silence, alarm) == expected[name], name
    # stored losses recompute exactly
    for i in range(6):
        post = Independent(THREE_BRANCH_PROBS).condition({i: 1})
        assert table.silence_losses[i] == pytest.approx(
            plan_expected_loss(net, post, table.silence_plans[i], costs), abs=1e-10)


def test_voi_local_three_branch():
    net = make_three_branch()
    dist = Independent(THREE_BRANCH_PROBS)
    report = voi_local(net, dist, PERFECT_INSPECTION,
                       LocalCostModel.uniform(6, 1.0, 0.1))
    assert report.best == 1
    assert report.prior_plan == 0b000010
    assert report.voi == pytest.approx(
        (0.0332, 0.06, 0.0288, 0.02696, 0.0252, 0.01408), abs=1e-12)
    # mixture identity against the stored table
    for i in range(6):
        h = THREE_BRANCH_PROBS[i]
        mixed = (1 - h) * report.action_table.silence_losses[i] \
            + h * report.action_table.alarm_losses[i]
        assert report.posterior_loss[i] == pytest.approx(mixed, abs=1e-10)


def test_voi_local_alt_costs_keeps_second_component_on_top():
    net = make_three_branch()
    dist = Independent(THREE_BRANCH_PROBS)
    costs = LocalCostModel(1.0, (0.1, 0.2, 0.1, 0.1, 0.1, 0.1))
    local = voi_local(net, dist, PERFECT_INSPECTION, costs)
    assert local.prior_plan == 0b001000
    assert local.best == 1
    heur = voi_heuristic(net, dist, PERFECT_INSPECTION, costs)
    assert heur.best == 3  # the heuristic overrates the planned repair
    assert heur.voi[3] == pytest.approx(0.05, abs=1e-12)
    assert all(h <= l + 1e-10 for h, l in zip(heur.voi, local.voi))


def test_series_pair_closed_form_loss():
    # two in series, equal repair costs, perfect inspections: the posterior
    # loss reduces to p_i * c_r + min(c_r, p_j * c_fail)
    c_fail, c_r = 1.0, 0.2
    for p1, p2 in ((0.5, 0.1), (0.1, 0.05), (0.3, 0.3)):
        net = Network(FormulaTree(series(0, 1)))
        dist = Independent([p1, p2])
        report = voi_local(net, dist, PERFECT_INSPECTION,
                           LocalCostModel.uniform(2, c_fail, c_r))
        for i, (p_i, p_j) in enumerate(((p1, p2), (p2, p1))):
            assert report.posterior_loss[i] == pytest.approx(
                p_i * c_r + min(c_r, p_j * c_fail), abs=1e-12)


def test_heuristic_bounded_by_local():
    rng = np.random.default_rng(77)
    for _ in range(60):
        n = int(rng.integers(2, 6))
        net = random_network(rng, n)
        dist = random_distribution(rng, n, lo=0.05, hi=0.9)
        insp = InspectionModel(float(rng.uniform(0, 0.3)), float(rng.uniform(0, 0.3)))
        costs = LocalCostModel(1.0, rng.uniform(0.01, 0.6, size=n))
        local = voi_local(net, dist, insp, costs)
        heur = voi_heuristic(net, dist, insp, costs)
        for h, l in zip(heur.voi, local.voi):
            assert h >= -1e-10
            assert h <= l + 1e-10


def test_degenerate_inspection_rejected():
    net = Network(FormulaTree(series(0, 1)))
    dist = Independent([0.0, 0.4])
    costs = LocalCostModel.uniform(2, 1.0, 0.1)
    with pytest.raises(DegenerateObservationError):
        voi_local(net, dist, PERFECT_INSPECTION, costs)


def test_series_pair_policy_independent_cases():
    # both below the cost ratio: the more vulnerable component wins
    assert series_pair_policy(0.1, 0.05, 0.0, 0.2) == 1
    # symmetric marginals tie
    assert series_pair_policy(0.3, 0.3, 0.0, 0.2) == 0
    # direct formula evaluation: L(1) = 0.5*0.2 + min(0.2, 0.1) = 0.2 beats
    # L(2) = 0.1*0.2 + min(0.2, 0.5) = 0.22, so the vulnerable one still wins
    assert series_pair_policy(0.5, 0.1, 0.0, 0.2) == 1
    # pushing the partner risk up flips the preference to the reliable one
    assert series_pair_policy(0.5, 0.15, 0.0, 0.2) == 2


def test_series_pair_policy_matches_full_machinery():
    rng = np.random.default_rng(41)
    for _ in range(50):
        p1, p2 = rng.uniform(0.02, 0.6, size=2)
        peak = float(rng.uniform(0.05, 0.5))
        choice = series_pair_policy(float(p1), float(p2), 0.0, peak)
        net = Network(FormulaTree(series(0, 1)))
        dist = Independent([p1, p2])
        report = voi_local(net, dist, PERFECT_INSPECTION,
                           LocalCostModel.uniform(2, 1.0, peak))
        if choice:
            assert report.voi[choice - 1] == pytest.approx(
                max(report.voi), abs=1e-12)
        else:
            assert report.voi[0] == pytest.approx(report.voi[1], abs=1e-12)


def test_series_pair_policy_correlated():
    # positive correlation keeps the vulnerable-component region growing;
    # here conditioning makes the partner risk follow the inspected state
    assert series_pair_policy(0.35, 0.3, 0.5, 0.2) == 1
    with pytest.raises(InfeasibleCorrelationError):
        series_pair_policy(0.5, 0.01, 0.9, 0.2)
    with pytest.raises(ValueError):
        series_pair_policy(0.1, 0.1, 0.0, 0.7)  # cost ratio beyond one half


def test_series_pair_policy_negative_correlation_counterexample():
    # the joint with failure cross-moment p1*p2 + rho*sqrt(...) does not
    # equalize the two inspection values at negative correlation; freeze one
    # worked counterexample so any change of construction shows up
    p1, p2, rho, peak = 0.3, 0.1, -0.2, 0.2
    both = p1 * p2 + rho * np.sqrt(p1 * 0.7 * p2 * 0.9)
    l1 = p1 * peak + p1 * min(peak, both / p1) \
        + (1 - p1) * min(peak, (p2 - both) / (1 - p1))
    l2 = p2 * peak + p2 * min(peak, both / p2) \
        + (1 - p2) * min(peak, (p1 - both) / (1 - p2))
    # neither min binds for the first component, so l1 collapses to
    # p1 * peak + p2; for the second the partner risk saturates at peak
    assert l1 == pytest.approx(p1 * peak + p2, abs=1e-12)
    assert l2 == pytest.approx(p2 * peak + both + (1 - p2) * peak, abs=1e-12)
    assert l1 < l2
    assert series_pair_policy(p1, p2, rho, peak) == 1


def test_cumulative_approximation():
    costs = LocalCostModel(1.0, (0.2, 0.3))
    dist = Independent([0.2, 0.0])
    voi = cumulative_approx_voi(dist, costs)
    assert voi[0] == pytest.approx(0.2 * (1 - 0.2))  # at the peak
    assert voi[1] == 0.0
    with pytest.raises(NotApplicableError):
        cumulative_approx_voi(Explicit([0.25] * 4),
                              LocalCostModel.uniform(2, 1.0, 0.1))


def test_cumulative_approximation_tracks_exact_at_small_risk():
    c_fail = 1.0
    for p1, p2, c_r in ((0.008, 0.003, 0.005), (0.01, 0.008, 0.005),
                        (0.004, 0.009, 0.006)):
        net = Network(FormulaTree(series(0, 1)))
        dist = Independent([p1, p2])
        exact = voi_local(net, dist, PERFECT_INSPECTION,
                          LocalCostModel.uniform(2, c_fail, c_r)).voi
        approx = cumulative_approx_voi(dist, LocalCostModel.uniform(2, c_fail, c_r))
        bound = 10.0 * c_fail * max(p1, p2) ** 2
        for e, a in zip(exact, approx):
            assert abs(e - a) <= bound
