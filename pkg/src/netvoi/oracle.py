"""Independent validation paths: Monte Carlo estimation and brute force.

Random numbers come from NumPy's Philox 4x64 counter-based generator
keyed with the configured seed. The sample budget splits over 32 equal
substreams (stream j is the base generator jumped j times), whose batch
means also provide the standard error, so estimates reproduce bit-for-bit
for a fixed seed and are straightforward to port.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import JointDistribution
from .errors import SizeCapError
from .inference import InspectionModel, alarm_probability, posterior_given_observation
from .local_metrics import LocalCostModel, _repair_cost_vector, optimal_plan
from .model import DEFAULT_COMPONENT_CAP

N_BATCHES = 32
BRUTE_FORCE_CAP = 12


@dataclass(frozen=True)
class SimulationConfig:
    n_samples: int
    seed: int = 0
    sigma: float = 3.0

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("need at least one sample")


def _substream(seed: int, j: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed).jumped(j))


def _batch_sizes(n: int) -> list[int]:
    b = min(N_BATCHES, n)
    base, extra = divmod(n, b)
    return [base + 1] * extra + [base] * (b - extra)


def _batched_mean(values_per_batch, sizes):
    n = sum(sizes)
    means = np.array([float(v.mean()) for v in values_per_batch])
    weights = np.array(sizes, dtype=float) / n
    estimate = float(weights @ means)
    b = len(sizes)
    if b < 2:
        spread = float(values_per_batch[0].std())
        return estimate, spread / math.sqrt(n)
    stderr = math.sqrt(b / (b - 1) * float(weights ** 2 @ (means - estimate) ** 2))
    return estimate, stderr


def mc_system_failure(net, dist: JointDistribution,
                      cfg: SimulationConfig) -> tuple[float, float]:
    """Monte Carlo estimate of the system failure probability, with stderr."""
    if net.n_components != dist.n_components:
        raise ValueError("network and distribution disagree on the component count")
    table = net.truth_table()
    sizes = _batch_sizes(cfg.n_samples)
    batches = []
    for j, size in enumerate(sizes):
        masks = dist.sample(_substream(cfg.seed, j), size)
        batches.append((~table[masks]).astype(float))
    return _batched_mean(batches, sizes)


def mc_voi_local(net, dist: JointDistribution, insp: InspectionModel,
                 costs: LocalCostModel, i: int, cfg: SimulationConfig,
                 cap: int = DEFAULT_COMPONENT_CAP) -> tuple[float, float]:
    """Monte Carlo estimate of the component-level inspection value.

    Draws prior states and the noisy outcome of inspecting component i;
    each sampled outcome is priced by exact plan re-optimization under the
    matching posterior. Outcomes that cannot occur never get priced, so
    deterministic components are fine and yield a value of zero.
    """
    _, prior_loss = optimal_plan(net, dist, costs, cap)
    h = alarm_probability(dist, i, insp)
    loss_if = {}
    for y, prob in ((0, h), (1, 1.0 - h)):
        if prob > 0.0:
            post = posterior_given_observation(dist, i, y, insp)
            loss_if[y] = optimal_plan(net, post, costs, cap)[1]
    loss_alarm = loss_if.get(0, prior_loss)
    loss_silence = loss_if.get(1, prior_loss)

    fa, fs = insp.fa(i), insp.fs(i)
    sizes = _batch_sizes(cfg.n_samples)
    batches = []
    for j, size in enumerate(sizes):
        rng = _substream(cfg.seed, j)
        masks = dist.sample(rng, size)
        working = ((masks >> i) & 1).astype(bool)
        u = rng.random(size)
        alarm = np.where(working, u < fa, u < 1.0 - fs)
        batches.append(np.where(alarm, loss_alarm, loss_silence))
    posterior_loss, stderr = _batched_mean(batches, sizes)
    return prior_loss - posterior_loss, stderr


def brute_force_plan_risks(net, dist: JointDistribution,
                           costs: LocalCostModel) -> np.ndarray:
    """Expected loss of every plan by plain plan-by-state enumeration.

    Reference for the lattice sweep in netvoi.local_metrics; capped at
    12 components because the enumeration is Theta(4^N).
    """
    n = net.n_components
    if n > BRUTE_FORCE_CAP:
        raise SizeCapError(
            f"brute-force plan enumeration is capped at {BRUTE_FORCE_CAP} components"
        )
    if dist.n_components != n or costs.n_components != n:
        raise ValueError("component counts disagree")
    table = net.truth_table()
    masks = np.arange(table.size, dtype=np.int64)
    pmf = dist.pmf_vector()
    repair = _repair_cost_vector(costs)
    out = np.empty(table.size)
    for plan in range(table.size):
        fails = ~table[masks | plan]
        out[plan] = costs.c_fail * float(pmf[fails].sum()) + repair[plan]
    return out
