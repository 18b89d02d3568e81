"""System-level inspection values and classical importance measures.

The system-level metric prices an inspection by mixing a concave loss
envelope over the two posterior failure probabilities it can produce.
Nested posterior intervals therefore rank components identically under
every envelope; the envelope only matters when intervals cross.
"""

from __future__ import annotations

import math

from .distributions import system_failure_prob
from .envelopes import LossEnvelope
from .errors import DegenerateObservationError
from .inference import InspectionModel, posterior_interval
from .reports import ImportanceReport, VoIReport, normalize, rank_order

RRW_SATURATION_TOL = 1e-12


def _mix(interval, env: LossEnvelope):
    posterior = (interval.alarm_prob * env.value(interval.hi)
                 + (1.0 - interval.alarm_prob) * env.value(interval.lo))
    prior = env.value(interval.prior)
    perfect = interval.prior * env.value(1.0) + (1.0 - interval.prior) * env.value(0.0)
    return posterior, prior - posterior, posterior - perfect


def voi_global(net, dist, i, insp: InspectionModel, env: LossEnvelope):
    """Posterior expected loss, value of the inspection, and posterior regret."""
    return _mix(posterior_interval(net, dist, i, insp), env)


def rank_global(net, dist, insp: InspectionModel, env: LossEnvelope) -> VoIReport:
    n = net.n_components
    prior = system_failure_prob(net, dist)
    prior_loss = env.value(prior)
    prior_regret = env.regret(prior)
    posterior_loss = []
    voi = []
    posterior_regret = []
    for i in range(n):
        try:
            loss_i, voi_i, regret_i = voi_global(net, dist, i, insp, env)
        except DegenerateObservationError:
            # A certain outcome carries no news: posterior loss equals prior.
            loss_i, voi_i, regret_i = prior_loss, 0.0, prior_regret
        posterior_loss.append(loss_i)
        voi.append(voi_i)
        posterior_regret.append(regret_i)
    ranking = rank_order(voi)
    return VoIReport(
        metric="global",
        prior_loss=prior_loss,
        posterior_loss=tuple(posterior_loss),
        voi=tuple(voi),
        voi_normalized=normalize(voi),
        ranking=ranking,
        best=ranking[0],
        prior_regret=prior_regret,
        posterior_regret=tuple(posterior_regret),
    )


def importance_measures(net, dist, insp: InspectionModel) -> ImportanceReport:
    """Birnbaum, criticality, risk-achievement and risk-reduction measures.

    All four read off the posterior system failure probabilities after an
    alarm or a silence, so with perfect inspections they reduce to the
    classical definitions.
    """
    prior = system_failure_prob(net, dist)
    if prior <= 0.0:
        raise ValueError("importance measures need a positive prior failure probability")
    n = net.n_components
    bm, crt, raw, rrw, infinite = [], [], [], [], []
    for i in range(n):
        try:
            iv = posterior_interval(net, dist, i, insp)
            lo, hi = iv.lo, iv.hi
        except DegenerateObservationError:
            lo = hi = prior
        p_i = dist.marginal_failure(i)
        bm.append(hi - lo)
        crt.append((hi - lo) * p_i / prior)
        raw.append((1.0 - lo) / prior)
        saturated = hi >= 1.0 - RRW_SATURATION_TOL
        infinite.append(saturated)
        rrw.append(math.inf if saturated else prior / (1.0 - hi))
    rankings = {
        "bm": rank_order(bm),
        "crt": rank_order(crt),
        "raw": rank_order(raw),
        "rrw": rank_order(rrw),
    }
    return ImportanceReport(
        prior_failure=prior,
        bm=tuple(bm),
        crt=tuple(crt),
        raw=tuple(raw),
        rrw=tuple(rrw),
        rrw_is_infinite=tuple(infinite),
        rankings=rankings,
    )


def closed_form_rule(net, dist, insp: InspectionModel | None = None):
    """Predicted best inspection for pure series/parallel systems, else None.

    A pure parallel system always favors its most reliable component and a
    pure series system its most vulnerable one, for any dependence, provided
    the inspection accuracy is uniform.
    """
    if insp is not None and not insp.uniform:
        return None
    n = net.n_components
    probs = [dist.marginal_failure(i) for i in range(n)]
    if net.is_pure_parallel():
        return min(range(n), key=lambda i: (probs[i], i))
    if net.is_pure_series():
        return min(range(n), key=lambda i: (-probs[i], i))
    return None
