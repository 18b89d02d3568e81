"""Component-level maintenance optimization and inspection values.

Maintenance plans pack into integer masks like states do: bit i set means
component i gets replaced. Repairs are perfect, so applying plan A to
state s yields ``s | A``; a plan's expected loss is the residual failure
risk plus the summed repair costs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import Independent, JointDistribution
from .errors import (DegenerateObservationError, InfeasibleCorrelationError,
                     NotApplicableError, SizeCapError)
from .inference import (ALARM, SILENCE, InspectionModel, alarm_probability,
                        posterior_given_observation)
from .model import DEFAULT_COMPONENT_CAP, check_state
from .reports import PosteriorActionTable, VoIReport, normalize, rank_order

FRECHET_TOL = 1e-12
TIE_TOL = 1e-12
# Plans that are structurally equivalent (say, symmetric repairs) land within
# float-summation noise of each other; losses this close count as tied so the
# lowest-mask rule actually bites.
PLAN_TIE_RTOL = 1e-9


@dataclass(frozen=True)
class LocalCostModel:
    """Failure cost plus one replacement cost per component."""

    c_fail: float
    c_repair: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "c_repair", tuple(float(c) for c in self.c_repair))
        if self.c_fail <= 0.0:
            raise ValueError("failure cost must be positive")
        if any(c < 0.0 for c in self.c_repair):
            raise ValueError("repair costs must be nonnegative")

    @classmethod
    def uniform(cls, n: int, c_fail: float, c_repair: float) -> "LocalCostModel":
        return cls(c_fail, (float(c_repair),) * n)

    @property
    def n_components(self) -> int:
        return len(self.c_repair)


def apply_repairs(state: int, plan: int) -> int:
    """Post-repair state: replaced components come up, the rest keep their state."""
    return state | plan


def repair_cost(plan: int, costs: LocalCostModel) -> float:
    total = 0.0
    for i, c in enumerate(costs.c_repair):
        if (plan >> i) & 1:
            total += c
    return total


def _repair_cost_vector(costs: LocalCostModel) -> np.ndarray:
    n = costs.n_components
    masks = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(masks.size)
    for i, c in enumerate(costs.c_repair):
        out += np.where((masks >> i) & 1, c, 0.0)
    return out


def _check_setup(net, dist, costs):
    if net.n_components != dist.n_components:
        raise ValueError("network and distribution disagree on the component count")
    if costs.n_components != net.n_components:
        raise ValueError("cost model and network disagree on the component count")


def plan_expected_loss(net, dist: JointDistribution, plan: int,
                       costs: LocalCostModel) -> float:
    """Residual failure risk after the plan plus its repair bill."""
    _check_setup(net, dist, costs)
    check_state(plan, net.n_components)
    table = net.truth_table()
    masks = np.arange(table.size, dtype=np.int64)
    fails = ~table[masks | plan]
    risk = costs.c_fail * float(dist.pmf_vector()[fails].sum())
    return risk + repair_cost(plan, costs)


def plan_failure_risks(net, dist: JointDistribution) -> np.ndarray:
    """Post-repair system failure probability for every plan mask.

    Sweeps components from the highest bit down, branching on whether the
    plan repairs them. Repairing a component sums its prior state out of
    the pmf and pins its entry in the structure table to working; leaving
    it keeps both axes for the final contraction. Total work is the sum
    over plans of 2^(number left alone), i.e. Theta(3^N), instead of the
    Theta(4^N) plan-by-state enumeration.
    """
    n = net.n_components
    if dist.n_components != n:
        raise ValueError("network and distribution disagree on the component count")
    out = np.empty(1 << n)

    def sweep(p: np.ndarray, f: np.ndarray, r: int, plan: int) -> None:
        if r == 0:
            out[plan] = 1.0 - float(p @ f)
            return
        sweep(p, f, r - 1, plan)
        half = 1 << (r - 1)
        k = p.size >> r
        p_rep = p.reshape(k, 2, half).sum(axis=1).reshape(k * half)
        f_rep = f.reshape(k, 2, half)[:, 1, :].reshape(k * half)
        sweep(p_rep, f_rep, r - 1, plan | (1 << (r - 1)))

    pmf = dist.pmf_vector()
    table = net.truth_table().astype(np.float64)
    sweep(pmf, table, n, 0)
    return out


def plan_losses(net, dist: JointDistribution, costs: LocalCostModel) -> np.ndarray:
    """Expected loss of every plan mask under the current belief."""
    _check_setup(net, dist, costs)
    return costs.c_fail * plan_failure_risks(net, dist) + _repair_cost_vector(costs)


def optimal_plan(net, dist: JointDistribution, costs: LocalCostModel,
                 cap: int = DEFAULT_COMPONENT_CAP) -> tuple[int, float]:
    """Cheapest plan and its loss; ties resolve to the lowest mask."""
    _check_setup(net, dist, costs)
    if net.n_components > cap:
        raise SizeCapError(
            f"exact plan optimization over {net.n_components} components exceeds the "
            f"cap of {cap}; mc_voi_local in netvoi.oracle can estimate beyond it"
        )
    losses = plan_losses(net, dist, costs)
    threshold = losses.min() + PLAN_TIE_RTOL * costs.c_fail
    best = int(np.argmax(losses <= threshold))
    return best, float(losses[best])


def _alarm_prob_checked(dist, i, insp) -> float:
    h = alarm_probability(dist, i, insp)
    if h <= 0.0 or h >= 1.0:
        raise DegenerateObservationError(
            f"inspecting component {i} has a certain outcome (alarm probability {h})"
        )
    return h


def posterior_action_table(net, dist: JointDistribution, insp: InspectionModel,
                           costs: LocalCostModel,
                           cap: int = DEFAULT_COMPONENT_CAP) -> PosteriorActionTable:
    """Re-optimized plan for each inspected component and outcome."""
    _check_setup(net, dist, costs)
    silence_plans, alarm_plans, silence_losses, alarm_losses = [], [], [], []
    for i in range(net.n_components):
        _alarm_prob_checked(dist, i, insp)
        plan_s, loss_s = optimal_plan(
            net, posterior_given_observation(dist, i, SILENCE, insp), costs, cap)
        plan_a, loss_a = optimal_plan(
            net, posterior_given_observation(dist, i, ALARM, insp), costs, cap)
        silence_plans.append(plan_s)
        alarm_plans.append(plan_a)
        silence_losses.append(loss_s)
        alarm_losses.append(loss_a)
    return PosteriorActionTable(
        silence_plans=tuple(silence_plans),
        alarm_plans=tuple(alarm_plans),
        silence_losses=tuple(silence_losses),
        alarm_losses=tuple(alarm_losses),
    )


def voi_local(net, dist: JointDistribution, insp: InspectionModel,
              costs: LocalCostModel, cap: int = DEFAULT_COMPONENT_CAP) -> VoIReport:
    """Inspection values under full posterior plan re-optimization."""
    _check_setup(net, dist, costs)
    prior_plan, prior_loss = optimal_plan(net, dist, costs, cap)
    table = posterior_action_table(net, dist, insp, costs, cap)
    posterior_loss, voi = [], []
    for i in range(net.n_components):
        h = alarm_probability(dist, i, insp)
        loss_i = (1.0 - h) * table.silence_losses[i] + h * table.alarm_losses[i]
        posterior_loss.append(loss_i)
        voi.append(prior_loss - loss_i)
    ranking = rank_order(voi)
    return VoIReport(
        metric="local",
        prior_loss=prior_loss,
        posterior_loss=tuple(posterior_loss),
        voi=tuple(voi),
        voi_normalized=normalize(voi),
        ranking=ranking,
        best=ranking[0],
        prior_plan=prior_plan,
        action_table=table,
    )


def voi_heuristic(net, dist: JointDistribution, insp: InspectionModel,
                  costs: LocalCostModel, cap: int = DEFAULT_COMPONENT_CAP) -> VoIReport:
    """Inspection values when the posterior may only toggle the inspected repair.

    The prior plan stays fixed for uninspected components. An outcome that
    contradicts the prior action on the inspected component (alarm on a
    planned repair, silence on a planned do-nothing) confirms the plan;
    otherwise the exact posterior losses of keeping the plan and of
    flipping just that one action are compared and the cheaper executed.
    """
    _check_setup(net, dist, costs)
    prior_plan, prior_loss = optimal_plan(net, dist, costs, cap)
    n = net.n_components
    silence_plans, alarm_plans, silence_losses, alarm_losses = [], [], [], []
    posterior_loss, voi = [], []
    for i in range(n):
        h = _alarm_prob_checked(dist, i, insp)
        prior_action = (prior_plan >> i) & 1
        losses = {}
        plans = {}
        for y in (SILENCE, ALARM):
            post = posterior_given_observation(dist, i, y, insp)
            keep = plan_expected_loss(net, post, prior_plan, costs)
            if y != prior_action:
                plans[y], losses[y] = prior_plan, keep
                continue
            flipped = prior_plan ^ (1 << i)
            flip = plan_expected_loss(net, post, flipped, costs)
            tied = abs(flip - keep) <= PLAN_TIE_RTOL * costs.c_fail
            if (tied and flipped < prior_plan) or (not tied and flip < keep):
                plans[y], losses[y] = flipped, flip
            else:
                plans[y], losses[y] = prior_plan, keep
        silence_plans.append(plans[SILENCE])
        alarm_plans.append(plans[ALARM])
        silence_losses.append(losses[SILENCE])
        alarm_losses.append(losses[ALARM])
        loss_i = (1.0 - h) * losses[SILENCE] + h * losses[ALARM]
        posterior_loss.append(loss_i)
        voi.append(prior_loss - loss_i)
    ranking = rank_order(voi)
    return VoIReport(
        metric="heuristic",
        prior_loss=prior_loss,
        posterior_loss=tuple(posterior_loss),
        voi=tuple(voi),
        voi_normalized=normalize(voi),
        ranking=ranking,
        best=ranking[0],
        prior_plan=prior_plan,
        action_table=PosteriorActionTable(
            silence_plans=tuple(silence_plans),
            alarm_plans=tuple(alarm_plans),
            silence_losses=tuple(silence_losses),
            alarm_losses=tuple(alarm_losses),
        ),
    )


def series_pair_policy(p1: float, p2: float, rho: float, peak: float) -> int:
    """Best component to inspect in a two-component series system.

    Components are dependent with marginal failure probabilities (p1, p2)
    and correlation rho; ``peak`` is the repair/failure cost ratio, at most
    one half so that replacing both components still beats a failure. A
    detected failure is always repaired; the uninspected component is then
    replaced whenever its conditional failure risk exceeds the repair cost.
    Returns 1 or 2, or 0 for a tie.
    """
    for name, p in (("p1", p1), ("p2", p2)):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"{name}={p} not in [0, 1]")
    if not 0.0 < peak <= 0.5:
        raise ValueError(f"cost ratio {peak} must lie in (0, 0.5]")
    both = p1 * p2 + rho * math.sqrt(p1 * (1.0 - p1) * p2 * (1.0 - p2))
    lo = max(0.0, p1 + p2 - 1.0)
    hi = min(p1, p2)
    if both < lo - FRECHET_TOL or both > hi + FRECHET_TOL:
        raise InfeasibleCorrelationError(
            f"correlation {rho} is infeasible for marginals ({p1}, {p2})"
        )
    both = min(max(both, lo), hi)

    def loss(p_i, p_j):
        cond_failed = both / p_i if p_i > 0.0 else 0.0
        cond_working = (p_j - both) / (1.0 - p_i) if p_i < 1.0 else 0.0
        repair_then = min(peak, cond_failed)
        leave_then = min(peak, cond_working)
        return p_i * peak + p_i * repair_then + (1.0 - p_i) * leave_then

    l1 = loss(p1, p2)
    l2 = loss(p2, p1)
    if abs(l1 - l2) <= TIE_TOL:
        return 0
    return 1 if l1 < l2 else 2


def cumulative_approx_voi(dist: JointDistribution, costs: LocalCostModel) -> tuple[float, ...]:
    """Per-component inspection value when risks simply add up.

    Treats the system as if each failed, unrepaired component cost c_fail
    on its own. Each inspection then prices as the bi-linear regret of a
    stand-alone repair decision, peaking at c_repair_i / c_fail. Requires
    independent components and perfect inspections.
    """
    if not isinstance(dist, Independent):
        raise NotApplicableError("the additive-risk shortcut needs independent components")
    if costs.n_components != dist.n_components:
        raise ValueError("cost model and distribution disagree on the component count")
    out = []
    for p, c_r in zip(dist.failure_probs, costs.c_repair):
        out.append(min(p * costs.c_fail, c_r) - p * c_r)
    return tuple(out)
