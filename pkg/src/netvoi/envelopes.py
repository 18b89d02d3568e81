"""Expected-loss envelopes over the system failure probability.

Each available system-level action induces a line in the failure
probability; taking the pointwise minimum over actions yields a concave
lower envelope. The regret subtracts the perfect-information line through
the envelope's endpoints, so it vanishes at 0 and 1.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass


@dataclass(frozen=True)
class GlobalAction:
    """A system-level action: price paid plus the failure risk it leaves behind."""

    cost: float
    residual_risk: float

    def __post_init__(self):
        if self.cost < 0.0:
            raise ValueError(f"action cost {self.cost} is negative")
        if not 0.0 <= self.residual_risk <= 1.0:
            raise ValueError(f"residual risk {self.residual_risk} not in [0, 1]")


def _check_prob(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"failure probability {p} not in [0, 1]")


class LossEnvelope:
    """Concave expected loss as a function of the system failure probability."""

    def value(self, p: float) -> float:
        raise NotImplementedError

    def regret(self, p: float) -> float:
        """Loss above the perfect-information line; zero at both ends."""
        line = p * self.value(1.0) + (1.0 - p) * self.value(0.0)
        rg = self.value(p) - line
        return rg if rg > 0.0 else 0.0


class QuadraticLoss(LossEnvelope):
    """Smooth reference envelope p * (1 - p)."""

    def value(self, p: float) -> float:
        _check_prob(p)
        return p * (1.0 - p)


class BinaryActionLoss(LossEnvelope):
    """Choice between accepting the failure risk and one repair action.

    Doing nothing costs ``c_fail * p``; repairing costs ``c_repair`` flat.
    The regret peaks at p = c_repair / c_fail, which must fall inside (0, 1).
    """

    def __init__(self, c_repair: float, c_fail: float):
        if c_fail <= 0.0:
            raise ValueError("failure cost must be positive")
        peak = c_repair / c_fail
        if not 0.0 < peak < 1.0:
            raise ValueError(
                f"repair/failure cost ratio {peak} must lie strictly inside (0, 1)"
            )
        self.c_repair = float(c_repair)
        self.c_fail = float(c_fail)

    @property
    def peak(self) -> float:
        return self.c_repair / self.c_fail

    def value(self, p: float) -> float:
        _check_prob(p)
        return min(self.c_fail * p, self.c_repair)


class PiecewiseLinearLoss(LossEnvelope):
    """Lower envelope of action lines, precomputed as a hull.

    Lines come as (slope, intercept) pairs. The sweep keeps only lines on
    the lower hull over [0, 1]; queries then binary-search the breakpoints.
    """

    def __init__(self, lines):
        cleaned: dict[float, float] = {}
        for slope, intercept in lines:
            slope = float(slope)
            intercept = float(intercept)
            if slope not in cleaned or intercept < cleaned[slope]:
                cleaned[slope] = intercept
        if not cleaned:
            raise ValueError("need at least one line")
        # Steepest line first: along increasing p the active slope of a
        # lower envelope can only decrease.
        candidates = sorted(cleaned.items(), key=lambda t: -t[0])
        hull: list[tuple[float, float]] = []
        cuts: list[float] = []  # cuts[j]: where hull[j+1] takes over from hull[j]
        for m, b in candidates:
            while hull:
                m0, b0 = hull[-1]
                if b <= b0:
                    # cheaper at p=0 with a flatter slope: the old line never wins
                    hull.pop()
                    if cuts:
                        cuts.pop()
                    continue
                x = (b - b0) / (m0 - m)
                if cuts and x <= cuts[-1]:
                    hull.pop()
                    cuts.pop()
                    continue
                cuts.append(x)
                break
            hull.append((m, b))
        # Trim pieces that never apply inside [0, 1].
        while cuts and cuts[0] <= 0.0:
            hull.pop(0)
            cuts.pop(0)
        while cuts and cuts[-1] >= 1.0:
            hull.pop()
            cuts.pop()
        self._slopes = tuple(m for m, _ in hull)
        self._intercepts = tuple(b for _, b in hull)
        self._cuts = tuple(cuts)

    @classmethod
    def from_actions(cls, actions, c_fail: float):
        """Envelope induced by system-level actions under failure cost c_fail."""
        if c_fail <= 0.0:
            raise ValueError("failure cost must be positive")
        acts = list(actions)
        if not acts:
            raise ValueError("need at least one action")
        return cls((a.residual_risk * c_fail, a.cost) for a in acts)

    def value(self, p: float) -> float:
        _check_prob(p)
        j = bisect_right(self._cuts, p)
        return self._intercepts[j] + self._slopes[j] * p
