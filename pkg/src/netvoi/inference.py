"""Bayesian updating of component beliefs from one binary inspection.

Outcome coding follows the emission table: an alarm (y = 0) flags the
component as damaged, a silence (y = 1) reports it working. A working
component raises a false alarm with probability ``eps_fa``; a damaged one
stays silent with probability ``eps_fs``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .distributions import JointDistribution, system_failure_prob
from .errors import DegenerateObservationError, IncomparableIntervalsError

ALARM = 0
SILENCE = 1

PRIOR_MATCH_TOL = 1e-9


def _normalize_rates(value, what):
    if isinstance(value, (int, float)):
        rates = (float(value),)
        scalar = True
    else:
        rates = tuple(float(v) for v in value)
        scalar = False
        if not rates:
            raise ValueError(f"{what} list is empty")
    for r in rates:
        if not 0.0 <= r < 0.5:
            raise ValueError(f"{what} of {r} is outside [0, 0.5)")
    return rates, scalar


@dataclass(frozen=True)
class InspectionModel:
    """False-alarm and false-silence rates, uniform or per component."""

    eps_fa: object = 0.0
    eps_fs: object = 0.0

    def __post_init__(self):
        fa, fa_scalar = _normalize_rates(self.eps_fa, "false-alarm rate")
        fs, fs_scalar = _normalize_rates(self.eps_fs, "false-silence rate")
        object.__setattr__(self, "eps_fa", fa[0] if fa_scalar else fa)
        object.__setattr__(self, "eps_fs", fs[0] if fs_scalar else fs)

    @property
    def uniform(self) -> bool:
        return isinstance(self.eps_fa, float) and isinstance(self.eps_fs, float)

    def fa(self, i: int) -> float:
        return self.eps_fa if isinstance(self.eps_fa, float) else self.eps_fa[i]

    def fs(self, i: int) -> float:
        return self.eps_fs if isinstance(self.eps_fs, float) else self.eps_fs[i]

    def k(self, i: int) -> float:
        """Sensitivity constant 1 - eps_fa - eps_fs; positive by construction."""
        return 1.0 - self.fa(i) - self.fs(i)


PERFECT_INSPECTION = InspectionModel(0.0, 0.0)


def alarm_probability(dist: JointDistribution, i: int, insp: InspectionModel) -> float:
    """Marginal probability that inspecting component i raises an alarm."""
    return insp.fa(i) + insp.k(i) * dist.marginal_failure(i)


def posterior_given_observation(dist: JointDistribution, i: int, y: int,
                                insp: InspectionModel) -> JointDistribution:
    """Belief over component states after observing outcome y on component i."""
    if y == SILENCE:
        w_failed, w_working = insp.fs(i), 1.0 - insp.fa(i)
    elif y == ALARM:
        w_failed, w_working = 1.0 - insp.fs(i), insp.fa(i)
    else:
        raise ValueError(f"outcome must be {ALARM} (alarm) or {SILENCE} (silence)")
    return dist.reweight_component(i, w_failed, w_working)


def posterior_system_failure(net, dist, i, y, insp) -> float:
    return system_failure_prob(net, posterior_given_observation(dist, i, y, insp))


@dataclass(frozen=True)
class PosteriorInterval:
    """Range of system failure probabilities spanned by one inspection.

    ``lo`` follows a silence, ``hi`` an alarm; mixing them with the alarm
    probability recovers the prior.
    """

    lo: float
    hi: float
    prior: float
    alarm_prob: float

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, other: "PosteriorInterval") -> bool:
        return self.lo <= other.lo and self.hi >= other.hi


def posterior_interval(net, dist, i, insp) -> PosteriorInterval:
    h = alarm_probability(dist, i, insp)
    if h <= 0.0 or h >= 1.0:
        raise DegenerateObservationError(
            f"inspecting component {i} has a certain outcome (alarm probability {h})"
        )
    prior = system_failure_prob(net, dist)
    lo = posterior_system_failure(net, dist, i, SILENCE, insp)
    hi = posterior_system_failure(net, dist, i, ALARM, insp)
    return PosteriorInterval(lo=min(max(lo, 0.0), 1.0), hi=min(max(hi, 0.0), 1.0),
                             prior=prior, alarm_prob=h)


class Dominance(Enum):
    FIRST = "first"
    SECOND = "second"
    MUTUAL = "mutual"
    NOT_NESTED = "not-nested"


def interval_dominates(a: PosteriorInterval, b: PosteriorInterval,
                       prior_tol: float = PRIOR_MATCH_TOL) -> Dominance:
    """Which interval contains the other; equal endpoints count both ways."""
    if abs(a.prior - b.prior) > prior_tol:
        raise IncomparableIntervalsError(
            f"priors differ ({a.prior} vs {b.prior}); intervals are not comparable"
        )
    a_contains = a.contains(b)
    b_contains = b.contains(a)
    if a_contains and b_contains:
        return Dominance.MUTUAL
    if a_contains:
        return Dominance.FIRST
    if b_contains:
        return Dominance.SECOND
    return Dominance.NOT_NESTED
